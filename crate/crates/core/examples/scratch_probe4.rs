// temporary development probe; not part of the deliverable
use optcorr_core::analysis::*;

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn main() {
    // fit sensitivity to grid density over pinned range [0.1, 0.8], L = 14
    for n in [8usize, 15, 22, 29] {
        let mut cfg = SweepConfig::new(ModelKind::Ising, 14, 1e-6);
        cfg.h_values = linspace(0.1, 0.8, n);
        cfg.strategies = vec![Strategy::ProjRot];
        let rows = sweep(&cfg);
        let pts = theta_fit_points(&rows, Strategy::ProjRot, &[1.0], 0.05);
        let fit = fit_theta_opt(&pts, 8).unwrap();
        println!(
            "n={n}: A={:.4} B={:.4} k={:.4} resid={:.3e}",
            fit.a, fit.b, fit.k, fit.residual
        );
    }
    // and at L=16 for comparison (not the pinned size)
    let mut cfg = SweepConfig::new(ModelKind::Ising, 16, 1e-6);
    cfg.h_values = linspace(0.1, 0.8, 15);
    cfg.strategies = vec![Strategy::ProjRot];
    let rows = sweep(&cfg);
    let pts = theta_fit_points(&rows, Strategy::ProjRot, &[1.0], 0.05);
    let fit = fit_theta_opt(&pts, 8).unwrap();
    println!(
        "L=16 n=15: A={:.4} B={:.4} k={:.4} resid={:.3e}",
        fit.a, fit.b, fit.k, fit.residual
    );

    // criterion 6 exact grids
    for (model, lo, hi) in [
        (ModelKind::Ising, 0.7, 2.0),
        (ModelKind::Xyx, 2.4, 4.2),
        (ModelKind::Xxz, 0.0, 3.0),
    ] {
        let mut cfg = SweepConfig::new(model, 12, model.default_hx());
        cfg.h_values = linspace(lo, hi, 11);
        cfg.strategies = vec![Strategy::ProjZ, Strategy::Sic, Strategy::Cic];
        let rows = sweep(&cfg);
        let mut worst: (f64, f64) = (f64::NEG_INFINITY, 0.0);
        for chunk in rows.chunks(3) {
            let sc: Vec<f64> = chunk
                .iter()
                .map(|r| r.values.as_ref().unwrap().s_c)
                .collect();
            let v = (sc[1] - sc[0]).max(sc[2] - sc[1]);
            if v > worst.0 {
                worst = (v, chunk[0].h);
            }
        }
        println!(
            "{} [{lo},{hi}] n=11: worst ordering slack {:+.3e} at h={:.3} (pass={})",
            model.tag(),
            worst.0,
            worst.1,
            worst.0 <= 1e-8
        );
    }
}
