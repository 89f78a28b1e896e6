// temporary diagnosis
use optcorr_core::spinchain::{ground_state, ModelSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_spec(rng: &mut ChaCha8Rng, sites: usize) -> ModelSpec {
    loop {
        let jx: f64 = rng.gen_range(-1.5..1.5);
        let jy: f64 = rng.gen_range(-1.5..1.5);
        let jz: f64 = rng.gen_range(-1.5..1.5);
        let h: f64 = rng.gen_range(0.0..2.0);
        let hx: f64 = rng.gen_range(0.0..0.3);
        if let Ok(spec) = ModelSpec::new(jx, jy, jz, h, hx, sites) {
            return spec;
        }
    }
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB0B);
    for k in 0..60 {
        let sites = *[4usize, 6, 8].get(rng.gen_range(0..3)).unwrap();
        let spec = random_spec(&mut rng, sites);
        let _i = rng.gen_range(0..sites - 1);
        let _j = rng.gen_range(_i + 1..sites);
        match ground_state(&spec, 1e-10) {
            Ok((e, _)) => println!("{k}: L={sites} ok E0={e:.6}"),
            Err(err) => println!("{k}: L={sites} FAIL {err}  spec={spec:?}"),
        }
    }
}
