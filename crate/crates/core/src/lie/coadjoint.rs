//! Coadjoint action `Ad*(g) f = f o Ad(g^-1) = f o exp(-ad X)` for
//! `g = exp X` in exponential coordinates of the first kind.

use crate::error::Result;
use crate::lie::Algebra;
use crate::scalar::{factorial, Rational, Scalar};

/// `(f o ad_X)_i = f([X, X_i])`.
pub fn compose_ad<T: Scalar>(alg: &Algebra, x: &[T], f: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); alg.dim()];
    for (j, i, m, c) in alg.sc().entries() {
        if x[*j].is_zero() || f[*m].is_zero() {
            continue;
        }
        out[*i] = out[*i].clone() + (x[*j].clone() * f[*m].clone()).scale(c);
    }
    out
}

pub fn coadjoint_generic<T: Scalar>(alg: &Algebra, x: &[T], f: &[T]) -> Vec<T> {
    let mut out = f.to_vec();
    let mut h = f.to_vec();
    for k in 1..alg.step() {
        h = compose_ad(alg, x, &h);
        if h.iter().all(|v| v.is_zero()) {
            break;
        }
        let mut c = Rational::from_integer(1.into()) / factorial(k);
        if k % 2 == 1 {
            c = -c;
        }
        for (o, v) in out.iter_mut().zip(&h) {
            *o = o.clone() + v.scale(&c);
        }
    }
    out
}

pub fn coadjoint(alg: &Algebra, g: &[Rational], f: &[Rational]) -> Result<Vec<Rational>> {
    alg.check_len(g.len())?;
    alg.check_len(f.len())?;
    Ok(coadjoint_generic(alg, g, f))
}

pub fn coadjoint_f64(alg: &Algebra, g: &[f64], f: &[f64]) -> Vec<f64> {
    coadjoint_generic(alg, g, f)
}

/// The pairing `f([X, Y])`, i.e. the skew form `B_f(X, Y)`.
pub fn pairing<T: Scalar>(alg: &Algebra, f: &[T], x: &[T], y: &[T]) -> T {
    let b = alg.bracket(x, y);
    f.iter()
        .zip(b)
        .fold(T::zero(), |acc, (a, v)| acc + a.clone() * v)
}
