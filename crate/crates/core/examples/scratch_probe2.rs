// temporary development probe; not part of the deliverable
use optcorr_core::analysis::*;
use optcorr_core::rdm::two_site_rdm;
use optcorr_core::spinchain::{broken_ground_state, mid_pair};
use std::time::Instant;

fn main() {
    let t_all = Instant::now();

    // criterion 6: S_C ordering CIC <= SIC <= PROJ_Z at 11 fields, L=12
    for (model, h_hi) in [
        (ModelKind::Ising, 2.0),
        (ModelKind::Xyx, 4.0),
        (ModelKind::Xxz, 3.0),
    ] {
        let mut cfg = SweepConfig::new(model, 12, model.default_hx());
        cfg.h_values = (0..11).map(|i| h_hi * i as f64 / 10.0).collect();
        cfg.strategies = vec![Strategy::ProjZ, Strategy::Sic, Strategy::Cic];
        let t0 = Instant::now();
        let rows = sweep(&cfg);
        let mut ok = true;
        for chunk in rows.chunks(3) {
            let sc: Vec<f64> = chunk
                .iter()
                .map(|r| r.values.as_ref().map(|v| v.s_c).unwrap_or(f64::NAN))
                .collect();
            let (proj, sic, cic) = (sc[0], sc[1], sc[2]);
            if !(cic <= sic + 1e-8 && sic <= proj + 1e-8) {
                ok = false;
                println!(
                    "  ORDER VIOLATION {} h={:.2}: proj={:.6} sic={:.6} cic={:.6}",
                    chunk[0].model, chunk[0].h, proj, sic, cic
                );
            }
        }
        println!(
            "{}: ordering ok={} ({:?})",
            model.tag(),
            ok,
            t0.elapsed()
        );
    }

    // criterion 7: I(h) peaks
    let mut cfg = SweepConfig::new(ModelKind::Ising, 14, 1e-6);
    cfg.h_values = (0..21).map(|i| 0.5 + i as f64 * 0.05).collect();
    cfg.strategies = vec![Strategy::ProjZ];
    let t0 = Instant::now();
    let rows = sweep(&cfg);
    let best = rows
        .iter()
        .max_by(|a, b| {
            a.values
                .as_ref()
                .unwrap()
                .mutual
                .total_cmp(&b.values.as_ref().unwrap().mutual)
        })
        .unwrap();
    println!(
        "ising L=14 I peak at h={:.3} (I={:.5}) ({:?})",
        best.h,
        best.values.as_ref().unwrap().mutual,
        t0.elapsed()
    );

    let mut cfg = SweepConfig::new(ModelKind::Xyx, 12, 1e-6);
    cfg.h_values = (0..25).map(|i| 3.0 + i as f64 * 0.025).collect();
    cfg.strategies = vec![Strategy::ProjZ];
    let t0 = Instant::now();
    let rows = sweep(&cfg);
    let best = rows
        .iter()
        .max_by(|a, b| {
            a.values
                .as_ref()
                .unwrap()
                .mutual
                .total_cmp(&b.values.as_ref().unwrap().mutual)
        })
        .unwrap();
    println!(
        "xyx L=12 I peak over [3.0,3.6] at h={:.3} (I={:.5}) ({:?})",
        best.h,
        best.values.as_ref().unwrap().mutual,
        t0.elapsed()
    );

    // criterion 5: xyx factorization detection
    let t0 = Instant::now();
    let scan = detect_factorization(ModelKind::Xyx, 1e-6, 12, 1, 3.0, 3.3).unwrap();
    println!(
        "xyx factorization: h_min={:.4} i_min={:.3e} endpoint={} evals={} ({:?})",
        scan.h_min, scan.i_min, scan.endpoint_minimum, scan.evals, t0.elapsed()
    );

    // criterion 11: spreads
    let settings = OptSettings::default();
    let t0 = Instant::now();
    let spec = ModelKind::Ising.spec(0.5, 1e-6, 14).unwrap();
    let (_, state) = broken_ground_state(&spec, 1e-10, 0.15).unwrap();
    let mut spreads = vec![];
    for r in [1usize, 6] {
        let (a, b) = mid_pair(14, r).unwrap();
        let rho = two_site_rdm(&state, a, b).unwrap();
        let s = strategy_spread(
            &rho,
            &Strategy::OPTIMIZED,
            ModelKind::Ising.couplings(),
            &settings,
        )
        .unwrap();
        spreads.push((r, s));
    }
    println!("ising h=0.5 L=14 spreads: {spreads:?} ({:?})", t0.elapsed());

    // xyx spread vs h at r=4
    let t0 = Instant::now();
    let mut table = vec![];
    for i in 0..13 {
        let h = 3.0 + i as f64 * 0.05;
        let spec = ModelKind::Xyx.spec(h, 1e-6, 12).unwrap();
        let (_, state) = broken_ground_state(&spec, 1e-10, 0.15).unwrap();
        let (a, b) = mid_pair(12, 4).unwrap();
        let rho = two_site_rdm(&state, a, b).unwrap();
        let s = strategy_spread(
            &rho,
            &Strategy::OPTIMIZED,
            ModelKind::Xyx.couplings(),
            &settings,
        )
        .unwrap();
        table.push((h, s));
    }
    let peak = table
        .iter()
        .cloned()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    for (h, s) in &table {
        println!("  xyx r=4 h={h:.2}: spread={s:.3e}");
    }
    println!("xyx spread r=4 peak at h={:.3} ({:?})", peak.0, t0.elapsed());

    // criterion 8 timing: L=16
    let t0 = Instant::now();
    for h in [0.2, 0.5, 0.8] {
        let row = evaluate_point(
            ModelKind::Ising,
            h,
            1e-6,
            16,
            1,
            Strategy::ProjZ,
            &settings,
        )
        .unwrap();
        let v = row.values.unwrap();
        let m = ising_order_parameter_exact(h);
        println!(
            "ising L=16 h={h}: sx={:.5} exact={:.5} rel={:.4}",
            v.sx_mid,
            m,
            (v.sx_mid - m).abs() / m
        );
    }
    println!("L=16 trio in {:?}", t0.elapsed());

    // criterion 9: ising fit
    let t0 = Instant::now();
    let mut cfg = SweepConfig::new(ModelKind::Ising, 14, 1e-6);
    cfg.h_values = (0..15).map(|i| 0.1 + 0.05 * i as f64).collect();
    cfg.strategies = vec![Strategy::ProjRot];
    let rows = sweep(&cfg);
    for row in rows.iter() {
        let v = row.values.as_ref().unwrap();
        println!(
            "  h={:.2} sx={:.5} theta_opt={:.5} phi_opt={:.5} n_opt={}",
            row.h, v.sx_mid, v.theta_opt, v.phi_opt, v.n_optima
        );
    }
    let pts = theta_fit_points(&rows, Strategy::ProjRot, &[1.0], 0.05);
    let fit = fit_theta_opt(&pts, 8).unwrap();
    println!(
        "ising fit: A={:.4} B={:.4} k={:.4} resid={:.3e} ({:?})",
        fit.a, fit.b, fit.k, fit.residual, t0.elapsed()
    );

    println!("total {:?}", t_all.elapsed());
}
