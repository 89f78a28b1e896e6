// temporary development probe; not part of the deliverable
use optcorr_core::analysis::*;
use std::time::Instant;

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn main() {
    // criterion 6 range search: where does S_C(CIC) <= S_C(SIC) <= S_C(PROJ_Z) hold?
    for (model, lo, hi) in [
        (ModelKind::Ising, 0.6, 2.0),
        (ModelKind::Xyx, 2.4, 4.2),
        (ModelKind::Xxz, 0.0, 3.0),
    ] {
        let mut cfg = SweepConfig::new(model, 12, model.default_hx());
        cfg.h_values = linspace(lo, hi, 19);
        cfg.strategies = vec![Strategy::ProjZ, Strategy::Sic, Strategy::Cic];
        let rows = sweep(&cfg);
        print!("{} [{lo},{hi}]: ", model.tag());
        for chunk in rows.chunks(3) {
            let sc: Vec<f64> = chunk
                .iter()
                .map(|r| r.values.as_ref().unwrap().s_c)
                .collect();
            let ok = sc[2] <= sc[1] + 1e-8 && sc[1] <= sc[0] + 1e-8;
            print!("{}", if ok { '.' } else { 'X' });
        }
        println!();
        for chunk in rows.chunks(3) {
            let sc: Vec<f64> = chunk
                .iter()
                .map(|r| r.values.as_ref().unwrap().s_c)
                .collect();
            if !(sc[2] <= sc[1] + 1e-8 && sc[1] <= sc[0] + 1e-8) {
                println!(
                    "   h={:.3}: proj={:.6e} sic={:.6e} cic={:.6e} (sic-proj={:+.2e}, cic-sic={:+.2e})",
                    chunk[0].h, sc[0], sc[1], sc[2], sc[1] - sc[0], sc[2] - sc[1]
                );
            }
        }
    }

    // criterion 9 re-check with the branch fix
    let t0 = Instant::now();
    let mut cfg = SweepConfig::new(ModelKind::Ising, 14, 1e-6);
    cfg.h_values = (0..15).map(|i| 0.1 + 0.05 * i as f64).collect();
    cfg.strategies = vec![Strategy::ProjRot];
    let rows = sweep(&cfg);
    for row in rows.iter() {
        let v = row.values.as_ref().unwrap();
        println!(
            "  h={:.2} sx={:.5} theta_opt={:.5} phi_opt={:.5}",
            row.h, v.sx_mid, v.theta_opt, v.phi_opt
        );
    }
    let pts = theta_fit_points(&rows, Strategy::ProjRot, &[1.0], 0.05);
    let fit = fit_theta_opt(&pts, 8).unwrap();
    println!(
        "ising fit: A={:.4} B={:.4} k={:.4} resid={:.3e} ({:?})",
        fit.a, fit.b, fit.k, fit.residual, t0.elapsed()
    );
}
