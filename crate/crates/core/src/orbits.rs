//! Coadjoint-orbit geometry: skew forms, stabilizers, Vergne polarizations,
//! the three layers of the orbit space of N7 and their invariants.

use std::io::Write;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::coadjoint::coadjoint_generic;
use crate::lie::linalg::{kernel, rank, Subspace};
use crate::lie::Algebra;
use crate::scalar::{int, to_f64, Rational, Scalar};

/// Relative threshold used by the floating-point layer classifier.
pub const LAYER_TOL: f64 = 1e-12;

/// `B_f(X_i, X_j) = f([X_i, X_j])`.
pub fn skew_form(alg: &Algebra, f: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    alg.check_len(f.len())?;
    let n = alg.dim();
    let mut b = vec![vec![Rational::zero(); n]; n];
    for (i, j, m, c) in alg.sc().entries() {
        b[*i][*j] += c * &f[*m];
    }
    Ok(b)
}

/// The stabilizer algebra `n(f)`, the radical of `B_f`.
pub fn stabilizer(alg: &Algebra, f: &[Rational]) -> Result<Subspace> {
    let b = skew_form(alg, f)?;
    Ok(Subspace::span(alg.dim(), &kernel(&b, alg.dim())))
}

pub fn orbit_dim(alg: &Algebra, f: &[Rational]) -> Result<usize> {
    Ok(rank(&skew_form(alg, f)?))
}

/// The flag `span{X_n} ⊂ span{X_{n-1}, X_n} ⊂ ... ⊂ n`, which consists of
/// ideals whenever brackets only raise indices.
pub fn default_flag(dim: usize) -> Vec<Subspace> {
    (1..=dim)
        .map(|k| Subspace::coordinate(dim, &((dim - k)..dim).collect::<Vec<_>>()))
        .collect()
}

/// Radical of `B_f` restricted to `sub`.
fn restricted_radical(alg: &Algebra, f: &[Rational], sub: &Subspace) -> Subspace {
    let basis = sub.basis();
    let k = basis.len();
    let mut gram = vec![vec![Rational::zero(); k]; k];
    for a in 0..k {
        for b in 0..k {
            let br = alg.bracket(&basis[a], &basis[b]);
            gram[a][b] = f.iter().zip(&br).fold(Rational::zero(), |acc, (x, y)| acc + x * y);
        }
    }
    let coeffs = kernel(&gram, k);
    let vs: Vec<Vec<Rational>> = coeffs
        .iter()
        .map(|c| {
            let mut v = vec![Rational::zero(); alg.dim()];
            for (a, ca) in c.iter().enumerate() {
                for (i, x) in basis[a].iter().enumerate() {
                    v[i] += ca * x;
                }
            }
            v
        })
        .collect();
    Subspace::span(alg.dim(), &vs)
}

/// Whether `f([p, p]) = 0`.
pub fn is_subordinate(alg: &Algebra, f: &[Rational], p: &Subspace) -> bool {
    let b = p.basis();
    for x in b {
        for y in b {
            let br = alg.bracket(x, y);
            let v = f.iter().zip(&br).fold(Rational::zero(), |acc, (a, c)| acc + a * c);
            if !v.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Vergne polarization `p = sum_i rad(B_f restricted to n_i)` along a flag.
pub fn vergne_polarization(alg: &Algebra, f: &[Rational], flag: Option<&[Subspace]>) -> Result<Subspace> {
    alg.check_len(f.len())?;
    let n = alg.dim();
    let owned;
    let flag = match flag {
        Some(fl) => fl,
        None => {
            owned = default_flag(n);
            &owned
        }
    };
    let mut p = Subspace::zero(n);
    for sub in flag {
        p = p.sum(&restricted_radical(alg, f, sub));
    }
    if !is_subordinate(alg, f, &p) {
        return Err(Error::NotSubordinate(format!(
            "f([p,p]) != 0 for the produced subspace of dim {}; is the flag made of ideals?",
            p.dim()
        )));
    }
    let stab = stabilizer(alg, f)?;
    if 2 * p.dim() != n + stab.dim() {
        return Err(Error::NotSubordinate(format!(
            "dim p = {} but (dim n + dim n(f))/2 = {}/2",
            p.dim(),
            n + stab.dim()
        )));
    }
    Ok(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Layer {
    /// `f7 != 0`, orbits of dimension 4.
    Gamma2,
    /// `f7 = 0`, `(f5, f6) != 0`, orbits of dimension 2.
    Gamma1,
    /// `f5 = f6 = f7 = 0`, characters.
    Gamma0,
}

impl Layer {
    pub fn name(&self) -> &'static str {
        match self {
            Layer::Gamma2 => "Gamma2",
            Layer::Gamma1 => "Gamma1",
            Layer::Gamma0 => "Gamma0",
        }
    }

    pub fn orbit_dim(&self) -> usize {
        match self {
            Layer::Gamma2 => 4,
            Layer::Gamma1 => 4,
            Layer::Gamma0 => 0,
        }
    }
}

fn check7(len: usize) -> Result<()> {
    if len != 7 {
        return Err(Error::DimensionMismatch { expected: 7, got: len });
    }
    Ok(())
}

pub fn classify_layer(f: &[Rational]) -> Result<Layer> {
    check7(f.len())?;
    Ok(if !f[6].is_zero() {
        Layer::Gamma2
    } else if !f[4].is_zero() || !f[5].is_zero() {
        Layer::Gamma1
    } else {
        Layer::Gamma0
    })
}

/// Floating version: a coordinate counts as zero below `LAYER_TOL * |f|_inf`.
pub fn classify_layer_f64(f: &[f64]) -> Result<Layer> {
    check7(f.len())?;
    let scale = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let tol = LAYER_TOL * scale;
    Ok(if f[6].abs() > tol {
        Layer::Gamma2
    } else if f[4].abs() > tol || f[5].abs() > tol {
        Layer::Gamma1
    } else {
        Layer::Gamma0
    })
}

/// `(I1, I2) = (2 f3 f7 - f5^2 + f6^2, f4 f7 - f5 f6)`.
pub fn orbit_invariants<T: Scalar>(f: &[T]) -> (T, T) {
    let two = f[2].clone() * f[6].clone();
    let i1 = two.clone() + two - f[4].clone() * f[4].clone() + f[5].clone() * f[5].clone();
    let i2 = f[3].clone() * f[6].clone() - f[4].clone() * f[5].clone();
    (i1, i2)
}

/// Canonical parameters of an orbit: `(f3, f4, f7)` on Gamma2, `(f5, f6)`
/// on Gamma1, `(f1, f2, f3, f4)` on Gamma0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitDescriptor<T> {
    pub layer: Layer,
    pub params: Vec<T>,
}

impl OrbitDescriptor<Rational> {
    pub fn to_f64(&self) -> OrbitDescriptor<f64> {
        OrbitDescriptor { layer: self.layer, params: self.params.iter().map(to_f64).collect() }
    }
}

impl<T: Scalar> OrbitDescriptor<T> {
    /// The canonical point of the orbit.
    pub fn representative(&self) -> Vec<T> {
        let z = T::zero();
        let p = &self.params;
        match self.layer {
            Layer::Gamma2 => vec![z.clone(), z.clone(), p[0].clone(), p[1].clone(), z.clone(), z, p[2].clone()],
            Layer::Gamma1 => vec![z.clone(), z.clone(), z.clone(), z.clone(), p[0].clone(), p[1].clone(), z],
            Layer::Gamma0 => vec![p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone(), z.clone(), z.clone(), z],
        }
    }
}

pub fn canonical_orbit(f: &[Rational]) -> Result<OrbitDescriptor<Rational>> {
    let layer = classify_layer(f)?;
    let params = match layer {
        Layer::Gamma2 => {
            let (i1, i2) = orbit_invariants(f);
            let f7 = f[6].clone();
            vec![i1 / (int(2) * &f7), i2 / &f7, f7]
        }
        Layer::Gamma1 => vec![f[4].clone(), f[5].clone()],
        Layer::Gamma0 => f[..4].to_vec(),
    };
    Ok(OrbitDescriptor { layer, params })
}

pub fn canonical_orbit_f64(f: &[f64]) -> Result<OrbitDescriptor<f64>> {
    let layer = classify_layer_f64(f)?;
    let params = match layer {
        Layer::Gamma2 => {
            let (i1, i2) = orbit_invariants(f);
            vec![i1 / (2.0 * f[6]), i2 / f[6], f[6]]
        }
        Layer::Gamma1 => vec![f[4], f[5]],
        Layer::Gamma0 => f[..4].to_vec(),
    };
    Ok(OrbitDescriptor { layer, params })
}

/// Points `Ad*(exp(sum_a t_a X_a)) f` for every `t` on the product grid of
/// `values` along the basis directions `axes` (0-based).
pub fn orbit_sample<T: Scalar>(alg: &Algebra, f: &[T], axes: &[usize], values: &[T]) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    let k = axes.len();
    let m = values.len();
    let total = m.pow(k as u32);
    for idx in 0..total {
        let mut x = vec![T::zero(); alg.dim()];
        let mut r = idx;
        for &a in axes {
            x[a] = values[r % m].clone();
            r /= m;
        }
        out.push(coadjoint_generic(alg, &x, f));
    }
    out
}

/// Directions whose flows sweep the whole orbit of a canonical point.
pub fn sweeping_axes(layer: Layer) -> Vec<usize> {
    match layer {
        Layer::Gamma2 => vec![0, 1, 4, 5],
        Layer::Gamma1 => vec![0, 1, 2, 3],
        Layer::Gamma0 => vec![],
    }
}

/// The printed orbit parameterizations.
///
/// - Gamma2: `(x1, x2, f3 + (x5^2 - x6^2)/(2 f7), f4 + x5 x6 / f7, x5, x6, f7)`
///   with `t = (x1, x2, x5, x6)`.
/// - Gamma1: `(x1, x2, x3, x4, f5, f6, 0)` with `t = (x1, x2, x3, x4)`.
/// - Gamma0: the point itself.
pub fn orbit_point(desc: &OrbitDescriptor<f64>, t: &[f64]) -> Vec<f64> {
    let p = &desc.params;
    match desc.layer {
        Layer::Gamma2 => {
            let (x5, x6, f7) = (t[2], t[3], p[2]);
            vec![t[0], t[1], p[0] + (x5 * x5 - x6 * x6) / (2.0 * f7), p[1] + x5 * x6 / f7, x5, x6, f7]
        }
        Layer::Gamma1 => vec![t[0], t[1], t[2], t[3], p[0], p[1], 0.0],
        Layer::Gamma0 => vec![p[0], p[1], p[2], p[3], 0.0, 0.0, 0.0],
    }
}

pub fn write_csv<W: Write>(mut w: W, points: &[Vec<f64>]) -> Result<()> {
    writeln!(w, "f1,f2,f3,f4,f5,f6,f7")?;
    for p in points {
        let row: Vec<String> = p.iter().map(|x| format!("{x:.17e}")).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Coordinates of `f` in the rotated dual basis attached to `(f5, f6)`:
/// `(q3, q4) = M x` with `M = [[-f5, f6], [-f6, -f5]]`, so `|det M| = r^2`.
pub fn rotation_matrix(f5: f64, f6: f64) -> [[f64; 2]; 2] {
    [[-f5, f6], [-f6, -f5]]
}

pub fn sign_of(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}
