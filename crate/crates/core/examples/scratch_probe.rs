// temporary development probe; not part of the deliverable
use optcorr_core::analysis::{evaluate_point, ModelKind, OptSettings, Strategy};
use optcorr_core::optimize::{optimize, StrategyFamily, StrategySpec};
use optcorr_core::rdm::two_site_rdm;
use optcorr_core::spinchain::{broken_ground_state, ground_state, mid_pair, ModelSpec};
use std::time::Instant;

fn main() {
    // timing: L=14 and L=16 Ising solves
    for (l, h, hx) in [
        (14usize, 2.0, 1e-6),
        (14, 0.9, 1e-6),
        (16, 0.8, 1e-6),
        (14, 0.0, 0.0),
    ] {
        let spec = ModelSpec::new(-1.0, 0.0, 0.0, h, hx, l).unwrap();
        let t0 = Instant::now();
        let (e, _) = ground_state(&spec, 1e-10).unwrap();
        println!("ising L={l} h={h}: E0={e:.10} in {:?}", t0.elapsed());
    }
    let spec = ModelSpec::new(1.0, 1.0, 0.5, 0.0, 0.0, 14).unwrap();
    let t0 = Instant::now();
    let (e, _) = ground_state(&spec, 1e-10).unwrap();
    println!("xxz L=14 h=0: E0={e:.10} in {:?}", t0.elapsed());

    // Table-1: Ising h=2, L=14, r=1, PROJ_ROT + CIC_3PAR
    let t0 = Instant::now();
    let spec = ModelSpec::new(-1.0, 0.0, 0.0, 2.0, 1e-6, 14).unwrap();
    let (_, state) = broken_ground_state(&spec, 1e-10, 0.15).unwrap();
    let (a, b) = mid_pair(14, 1).unwrap();
    let rho = two_site_rdm(&state, a, b).unwrap();
    println!("state+rdm in {:?}", t0.elapsed());

    for family in [
        StrategyFamily::ProjRot,
        StrategyFamily::SicRot,
        StrategyFamily::CicRot,
        StrategyFamily::Cic3Par,
    ] {
        let t0 = Instant::now();
        let s = StrategySpec::with_defaults(family, [-1.0, 0.0, 0.0]);
        let r = optimize(&rho, &s).unwrap();
        println!(
            "ising h=2 {:?}: C_max={:.8} optima={} evals={} flat={:?} in {:?}",
            family,
            r.c_max,
            r.optima.len(),
            r.n_evals,
            r.flat.iter().map(|f| (f.is_flat, f.variation)).collect::<Vec<_>>(),
            t0.elapsed()
        );
        for o in r.optima.iter().take(6) {
            println!(
                "   optimum ({:.6}, {:.6}) dir={:?} C={:.9}",
                o.params[0], o.params[1], o.direction, o.c
            );
        }
    }

    // xxz h=0 L=14 proj-rot: expect theta=pi/2, flat phi
    let t0 = Instant::now();
    let row = evaluate_point(
        ModelKind::Xxz,
        0.0,
        0.0,
        14,
        1,
        Strategy::ProjRot,
        &OptSettings::default(),
    )
    .unwrap();
    let v = row.values.unwrap();
    println!(
        "xxz proj-rot: theta={:.6} phi={:.6} flat_phi={} var in {:?}",
        v.theta_opt, v.phi_opt, v.flat_phi, t0.elapsed()
    );
    let opt = row.opt.unwrap();
    for f in &opt.flat {
        println!("   flat {}: {} (var {:.3e})", f.name, f.is_flat, f.variation);
    }
    println!("   n_optima={}", opt.optima.len());

    // xxz cic-3par: expect Jz=0 plane, flat
    let row = evaluate_point(
        ModelKind::Xxz,
        0.0,
        0.0,
        12,
        1,
        Strategy::Cic3Par,
        &OptSettings::default(),
    )
    .unwrap();
    let opt = row.opt.unwrap();
    println!(
        "xxz cic-3par: c_max={:.8} first dir={:?} n_optima={}",
        opt.c_max,
        opt.optima[0].direction,
        opt.optima.len()
    );
    for f in &opt.flat {
        println!("   flat {}: {} (var {:.3e})", f.name, f.is_flat, f.variation);
    }
}
