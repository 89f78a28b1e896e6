// temporary instrumented copy of the solver loop; not part of the deliverable
use optcorr_core::spinchain::{apply_hamiltonian, ModelSpec, StateVector};
use num_complex::Complex64;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>], mut coeffs: Option<&mut [f64]>) -> f64 {
    for _ in 0..2 {
        for (i, q) in basis.iter().enumerate() {
            let d = dot(q, v);
            axpy(v, -d, q);
            if let Some(c) = coeffs.as_deref_mut() {
                c[i] += d;
            }
        }
    }
    norm(v)
}

fn apply_h(spec: &ModelSpec, v: &[f64]) -> Vec<f64> {
    let amps: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let sv = StateVector::from_unnormalized(spec.sites, amps.clone()).unwrap_or_else(|_| {
        // unnormalized input; scale then unscale
        let n = norm(v);
        let scaled: Vec<Complex64> = amps.iter().map(|a| a / n).collect();
        StateVector::new(spec.sites, scaled).unwrap()
    });
    let n = norm(v);
    apply_hamiltonian(spec, &sv)
        .unwrap()
        .iter()
        .map(|c| c.re * n)
        .collect()
}

fn main() {
    let spec = ModelSpec::new(
        -0.6209678409588502,
        0.1217614187979974,
        -0.2298985649256866,
        0.3961394389807604,
        0.1673913407226532,
        4,
    )
    .unwrap();
    let dim = spec.dim();

    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    let mut s0: Vec<f64> = (0..dim)
        .map(|n| 1.0 + 0.01 * (((n as f64) * GOLDEN).fract() - 0.5))
        .collect();
    let n0 = norm(&s0);
    s0.iter_mut().for_each(|x| *x /= n0);
    let mut s1: Vec<f64> = (0..dim)
        .map(|n| ((n as f64) * std::f64::consts::SQRT_2 + 0.25).fract() - 0.5)
        .collect();

    let mut basis = vec![s0];
    let r = orthogonalize(&mut s1, &basis, None);
    s1.iter_mut().for_each(|x| *x /= r);
    basis.push(s1);

    let mut tcols: Vec<Vec<f64>> = Vec::new();
    for _step in 0..10 {
        for c in tcols.len()..basis.len() {
            let mut y = apply_h(&spec, &basis[c]);
            let mut coeffs = vec![0.0; basis.len()];
            orthogonalize(&mut y, &basis, Some(&mut coeffs));
            tcols.push(coeffs.clone());
            // extension inline (simplified)
            if basis.len() < dim {
                let ny = norm(&y);
                if ny > 1e-11 {
                    y.iter_mut().for_each(|x| *x /= ny);
                    let ny2 = orthogonalize(&mut y, &basis, None);
                    y.iter_mut().for_each(|x| *x /= ny2);
                    basis.push(y);
                } else {
                    // inject
                    for k in 0..dim {
                        let mut fresh = vec![0.0; dim];
                        fresh[k] = 1.0;
                        let nf = orthogonalize(&mut fresh, &basis, None);
                        if nf > 1e-6 {
                            fresh.iter_mut().for_each(|x| *x /= nf);
                            let nf2 = orthogonalize(&mut fresh, &basis, None);
                            fresh.iter_mut().for_each(|x| *x /= nf2);
                            basis.push(fresh);
                            break;
                        }
                    }
                }
            }
        }
        if tcols.len() >= dim {
            break;
        }
    }

    let k = basis.len();
    println!("basis size {k}, tcols {}", tcols.len());
    // orthonormality
    let mut worst_ortho = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let d = dot(&basis[i], &basis[j]) - if i == j { 1.0 } else { 0.0 };
            worst_ortho = worst_ortho.max(d.abs());
        }
    }
    println!("worst orthonormality deviation: {worst_ortho:.3e}");
    // T vs exact projection
    let mut worst_t = 0.0f64;
    let mut worst_pair = (0, 0);
    for j in 0..k {
        let hq = apply_h(&spec, &basis[j]);
        for i in 0..k {
            let exact = dot(&basis[i], &hq);
            let stored = if i < j {
                tcols[j][i]
            } else if i == j {
                tcols[j][j]
            } else {
                tcols[i][j]
            };
            let d = (exact - stored).abs();
            if d > worst_t {
                worst_t = d;
                worst_pair = (i, j);
            }
        }
    }
    println!("worst T deviation: {worst_t:.3e} at {worst_pair:?}");
    // also symmetry of exact projection vs stored both ways
    for j in 0..k.min(6) {
        let lens: Vec<usize> = tcols.iter().map(|c| c.len()).collect();
        if j == 0 {
            println!("tcols lengths: {lens:?}");
        }
    }
}
