//! Largest singular value of a complex matrix.
//!
//! Lanczos on `K^dagger K` with full reorthogonalization; the start vector is
//! drawn from a fixed-seed generator so results are reproducible.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C64 = Complex64;

/// Relative change of the top Ritz value at which iteration stops.
pub const LANCZOS_TOL: f64 = 1e-13;
const SEED: u64 = 0x5eed_0001;

fn start_vector(n: usize) -> DVector<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let v = DVector::from_fn(n, |_, _| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    let nv = v.norm();
    v / C64::new(nv, 0.0)
}

/// `||K||_op`.
pub fn operator_norm(k: &DMatrix<C64>) -> f64 {
    let n = k.ncols();
    if n == 0 || k.nrows() == 0 {
        return 0.0;
    }
    let scale = k.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if scale == 0.0 {
        return 0.0;
    }
    let kh = k.adjoint();
    let apply = |v: &DVector<C64>| -> DVector<C64> { &kh * (k * v) };

    let max_iter = n.min(300);
    let mut basis: Vec<DVector<C64>> = Vec::with_capacity(max_iter);
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut v = start_vector(n);
    let mut last = 0.0f64;
    let mut stable = 0;
    for it in 0..max_iter {
        let mut w = apply(&v);
        let a = v.dotc(&w).re;
        basis.push(v.clone());
        alpha.push(a);
        // full reorthogonalization, twice
        for _ in 0..2 {
            for b in &basis {
                let c = b.dotc(&w);
                w -= b * c;
            }
        }
        let bnorm = w.norm();
        let top = top_eigenvalue(&alpha, &beta);
        let done = bnorm <= 1e-14 * top.abs().max(f64::MIN_POSITIVE) || it + 1 == max_iter;
        if (top - last).abs() <= LANCZOS_TOL * top.abs() {
            stable += 1;
        } else {
            stable = 0;
        }
        last = top;
        if done || stable >= 3 {
            return top.max(0.0).sqrt();
        }
        beta.push(bnorm);
        v = w / C64::new(bnorm, 0.0);
    }
    last.max(0.0).sqrt()
}

fn top_eigenvalue(alpha: &[f64], beta: &[f64]) -> f64 {
    let m = alpha.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    SymmetricEigen::new(t).eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

/// Plain power iteration on `K^dagger K`; slow but independent of Lanczos.
pub fn power_norm(k: &DMatrix<C64>, iters: usize) -> f64 {
    let n = k.ncols();
    if n == 0 {
        return 0.0;
    }
    let kh = k.adjoint();
    let mut v = start_vector(n);
    let mut lambda = 0.0;
    for _ in 0..iters {
        let w = &kh * (k * &v);
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        lambda = nw;
        v = w / C64::new(nw, 0.0);
    }
    lambda.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_and_rank_one() {
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![
            C64::new(1.0, 0.0),
            C64::new(-3.0, 0.0),
            C64::new(0.0, 2.0),
        ]));
        assert!((operator_norm(&d) - 3.0).abs() < 1e-12);
        let u = DVector::from_vec(vec![C64::new(1.0, 1.0), C64::new(2.0, 0.0)]);
        let v = DVector::from_vec(vec![C64::new(0.0, 1.0), C64::new(1.0, -1.0), C64::new(3.0, 0.0)]);
        let r = &u * v.adjoint();
        assert!((operator_norm(&r) - u.norm() * v.norm()).abs() < 1e-12);
        assert_eq!(operator_norm(&DMatrix::zeros(4, 4)), 0.0);
    }
}
