//! Cross-module invariants on randomized inputs: solver-vs-oracle
//! agreement, the two reduced-density-matrix extraction paths, entropy
//! properties under basis changes, and optimizer landscape guarantees.

mod common;

use common::*;
use optcorr_core::analysis::{
    detect_factorization, ModelKind, OptSettings, Strategy, SweepConfig,
};
use optcorr_core::infotheory::{
    classical_correlations_given, conditional_entropy, von_neumann_entropy,
};
use optcorr_core::measure::{cic_povm, projective, rank1_decomposition, rotate, sic_povm};
use optcorr_core::optimize::{optimize, StrategyFamily, StrategySpec};
use optcorr_core::rdm::{
    pauli_correlators, rdm_from_correlators, single_site_rdm, two_site_rdm, DensityMatrix,
};
use optcorr_core::spinchain::{broken_ground_state, ground_state, ground_state_dense};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn iterative_solver_matches_dense_oracle() {
    let mut rng = rng(0xA11CE);
    for sites in [4usize, 5, 6, 7, 8, 9, 10] {
        let reps = if sites >= 9 { 2 } else { 4 };
        for _ in 0..reps {
            let spec = random_spec(&mut rng, sites);
            let (e_it, _) = ground_state(&spec, 1e-10).expect("lanczos converges");
            let (e_dn, _) = ground_state_dense(&spec).expect("dense path");
            assert!(
                (e_it - e_dn).abs() <= 1e-10,
                "L={sites}: iterative {e_it} vs dense {e_dn}"
            );
        }
    }
}

#[test]
fn rdm_paths_agree_on_random_ground_states() {
    let mut rng = rng(0xB0B);
    for _ in 0..60 {
        let sites = *[4usize, 6, 8].get(rng.gen_range(0..3)).unwrap();
        let spec = random_spec(&mut rng, sites);
        let (_, state) = ground_state(&spec, 1e-10).unwrap();
        let i = rng.gen_range(0..sites - 1);
        let j = rng.gen_range(i + 1..sites);
        let direct = two_site_rdm(&state, i, j).unwrap();
        let rebuilt = rdm_from_correlators(&pauli_correlators(&state, i, j).unwrap()).unwrap();
        let mut maxdev = 0.0f64;
        for a in 0..4 {
            for b in 0..4 {
                maxdev = maxdev.max((direct.entry(a, b) - rebuilt.entry(a, b)).norm());
            }
        }
        assert!(maxdev <= 1e-12, "path disagreement {maxdev:.3e} at L={sites}");
        assert!(direct.purity() <= 1.0 + 1e-12);
        // marginal of the pair equals the single-site reduction
        let single = single_site_rdm(&state, i).unwrap();
        let ma = direct.marginal_a().unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert!((single.entry(a, b) - ma.entry(a, b)).norm() <= 1e-12);
            }
        }
    }
}

#[test]
fn biased_ising_rdm_leaves_x_state_form() {
    // symmetry-broken states carry single-site transverse order, pushing
    // ρ_AB outside the diagonal+anti-diagonal pattern
    let spec = ModelKind::Ising.spec(0.5, 1e-6, 8).unwrap();
    let (_, state) = broken_ground_state(&spec, 1e-10, 0.15).unwrap();
    let rho = two_site_rdm(&state, 3, 4).unwrap();
    let mut off_x = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            if i == j || i + j == 3 {
                continue;
            }
            off_x = off_x.max(rho.entry(i, j).norm());
        }
    }
    assert!(off_x > 1e-3, "largest off-X entry {off_x:.3e}");
}

#[test]
fn entropy_is_basis_invariant_and_concave() {
    let mut rng = rng(0xE27);
    for dim in [2usize, 4] {
        for _ in 0..20 {
            let rho = random_density_matrix(&mut rng, dim);
            let u = random_unitary(&mut rng, dim);
            let rotated =
                DensityMatrix::new(&u * rho.matrix() * u.adjoint()).expect("unitary image");
            let s0 = von_neumann_entropy(&rho).unwrap();
            let s1 = von_neumann_entropy(&rotated).unwrap();
            assert!((s0 - s1).abs() <= 1e-10, "entropy moved by {:.3e}", s0 - s1);

            let other = random_density_matrix(&mut rng, dim);
            let half = num_complex::Complex64::new(0.5, 0.0);
            let mix = DensityMatrix::new((rho.matrix() + other.matrix()) * half).unwrap();
            let s_mix = von_neumann_entropy(&mix).unwrap();
            let s_avg = 0.5 * s0 + 0.5 * von_neumann_entropy(&other).unwrap();
            assert!(s_mix >= s_avg - 1e-10);
        }
    }
}

#[test]
fn conditioning_never_beats_mutual_information() {
    // S_C >= S_AB - S_B - 1e-8, i.e. C <= I, for random states and rank-1
    // measurements
    let mut rng = rng(0x5EED);
    for _ in 0..50 {
        let rho = random_density_matrix(&mut rng, 4);
        let s_ab = von_neumann_entropy(&rho).unwrap();
        let s_b = von_neumann_entropy(&rho.marginal_b().unwrap()).unwrap();
        let theta = rng.gen_range(0.0..std::f64::consts::PI);
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        for m in [
            projective(theta, phi),
            rotate(&sic_povm(), theta, phi),
            cic_povm(theta.cos(), theta.sin(), phi.cos()).unwrap(),
        ] {
            let s_c = conditional_entropy(&rho, &m).unwrap();
            assert!(s_c >= s_ab - s_b - 1e-8);
        }
    }
}

#[test]
fn optimized_pure_state_reaches_entanglement_entropy() {
    let mut rng = rng(0x9A9A);
    let spec = StrategySpec::with_defaults(StrategyFamily::ProjRot, [0.0; 3]);
    for _ in 0..10 {
        let rho = random_pure_state(&mut rng);
        let s_a = von_neumann_entropy(&rho.marginal_a().unwrap()).unwrap();
        let opt = optimize(&rho, &spec).unwrap();
        assert!(
            (opt.c_max - s_a).abs() <= 1e-6,
            "pure state: C_max {} vs S_A {}",
            opt.c_max,
            s_a
        );
        // Q = I - C and I = 2 S_A for a pure state, so Q = C here
        let q = 2.0 * s_a - opt.c_max;
        assert!((q - opt.c_max).abs() <= 2e-6);
    }
}

#[test]
fn optimizer_matches_brute_force_grid() {
    // independent dense scan (721 x 1441, no refinement) within 1e-5
    let mut rng = rng(0xF00D);
    for family in [StrategyFamily::ProjRot, StrategyFamily::SicRot] {
        for _ in 0..3 {
            let rho = random_density_matrix(&mut rng, 4);
            let spec = StrategySpec::with_defaults(family, [0.0; 3]);
            let opt = optimize(&rho, &spec).unwrap();
            let brute = brute_force_c_max(&rho, family, [0.0; 3], 721, 1441);
            assert!(
                (opt.c_max - brute).abs() <= 1e-5,
                "{family:?}: optimizer {} vs brute force {}",
                opt.c_max,
                brute
            );
        }
    }
}

#[test]
fn refinement_is_monotone_over_the_grid() {
    let mut rng = rng(0xCAFE);
    let rho = random_density_matrix(&mut rng, 4);
    let spec = StrategySpec::with_defaults(StrategyFamily::ProjRot, [0.0; 3]);
    let opt = optimize(&rho, &spec).unwrap();
    let grid_max = brute_force_c_max(
        &rho,
        StrategyFamily::ProjRot,
        [0.0; 3],
        spec.n_theta,
        spec.n_phi,
    );
    assert!(opt.c_max >= grid_max - 1e-12);
    // every reported optimum reproduces C_max within the refine tolerance
    for o in &opt.optima {
        let c = classical_correlations_given(&rho, &o.measurement).unwrap();
        assert!((c - opt.c_max).abs() <= spec.refine_tol + 1e-12);
    }
}

#[test]
fn sweep_rows_satisfy_correlation_identities() {
    let mut cfg = SweepConfig::new(ModelKind::Xxz, 8, 0.0);
    cfg.h_values = vec![0.0, 0.8, 1.6, 2.4];
    cfg.strategies = vec![Strategy::ProjZ, Strategy::Sic, Strategy::Cic, Strategy::ProjRot];
    let rows = optcorr_core::analysis::sweep(&cfg);
    for row in &rows {
        let v = row.values.as_ref().expect("no failures");
        assert!((v.mutual - (v.s_a + v.s_b - v.s_ab)).abs() <= 1e-10);
        assert!((v.discord - (v.mutual - v.classical)).abs() <= 1e-12);
        assert!(v.classical >= -1e-10);
        assert!(v.s_c >= -1e-10);
        assert!(v.c_max <= v.mutual + 1e-8);
    }
    // a strictly larger family can only improve on its fixed member
    for chunk in rows.chunks(4) {
        let proj_z = chunk[0].values.as_ref().unwrap().classical;
        let proj_rot = chunk[3].values.as_ref().unwrap().c_max;
        assert!(proj_rot >= proj_z - 1e-8);
    }
}

#[test]
fn ferromagnetic_frame_factorizes_at_formula_value() {
    // couplings (-1, -1/4, 0): h_f = 2 sqrt((1-Jz)(Jy-Jz)) applies for the
    // ferromagnetic frame with |Jy| entering, giving h_f = 1
    let model = ModelKind::Custom {
        jx: -1.0,
        jy: -0.25,
        jz: 0.0,
    };
    let scan = detect_factorization(model, 1e-6, 12, 1, 0.9, 1.1).unwrap();
    assert!(
        (scan.h_min - 1.0).abs() < 0.05,
        "h_min = {} (expected near 1)",
        scan.h_min
    );
    assert!(scan.i_min < 1e-3, "I at minimum = {:.3e}", scan.i_min);
    assert!(!scan.endpoint_minimum);
}

#[test]
fn disordered_phase_optimum_aligns_with_local_operator_axis() {
    let settings = OptSettings::default();
    let row = optcorr_core::analysis::evaluate_point(
        ModelKind::Ising,
        2.0,
        1e-6,
        10,
        1,
        Strategy::ProjRot,
        &settings,
    )
    .unwrap();
    let opt = row.opt.unwrap();
    let axis = optcorr_core::optimize::local_operator_axis(-1.0, 0.0, 0.0).unwrap();
    let states = rank1_decomposition(&opt.optima[0].measurement).unwrap();
    let a = optcorr_core::measure::bloch_vector(states[0].theta, states[0].phi);
    let dot = (a[0] * axis[0] + a[1] * axis[1] + a[2] * axis[2]).abs();
    assert!(dot > 1.0 - 1e-3, "|cos| = {dot}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn measurement_constructors_resolve_identity(
        theta in -10.0..10.0f64,
        phi in -10.0..10.0f64,
        jx in -3.0..3.0f64,
        jy in -3.0..3.0f64,
        jz in -3.0..3.0f64,
    ) {
        prop_assume!(jz.abs() > 1e-6);
        let ms = [
            projective(theta, phi),
            sic_povm(),
            cic_povm(jx, jy, jz).unwrap(),
            rotate(&cic_povm(jx, jy, jz).unwrap(), theta, phi),
        ];
        for m in &ms {
            m.validate().unwrap();
            // PSD elements: weight >= 0 and unit axis give eigenvalues {0, 2c}
            for el in &m.elements {
                prop_assert!(el.weight >= 0.0);
                prop_assert!((el.axis_norm() - 1.0).abs() <= 1e-12);
            }
        }
        // rotation preserves pairwise angles
        let base = cic_povm(jx, jy, jz).unwrap();
        let rot = rotate(&base, theta, phi);
        for a in 0..4 {
            for b in 0..4 {
                let d0: f64 = (0..3).map(|k| base.elements[a].axis[k] * base.elements[b].axis[k]).sum();
                let d1: f64 = (0..3).map(|k| rot.elements[a].axis[k] * rot.elements[b].axis[k]).sum();
                prop_assert!((d0 - d1).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn projective_statistics_follow_born_rule(
        theta in 0.0..std::f64::consts::PI,
        phi in 0.0..std::f64::consts::TAU,
    ) {
        // conditional entropy of a maximally mixed pair state is exactly 1
        // bit for any projective direction
        let rho = DensityMatrix::maximally_mixed(4);
        let s_c = conditional_entropy(&rho, &projective(theta, phi)).unwrap();
        prop_assert!((s_c - 1.0).abs() < 1e-12);
    }
}
