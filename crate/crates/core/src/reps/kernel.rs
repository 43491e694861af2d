//! Induced-representation kernels on plane grids.
//!
//! For `f` in Gamma2 or Gamma1 the polarization is `p = span{X3..X7}` and
//! `pi_f(F) xi(z) = int F^P(z - x, x . f|p) xi(x) dx` on `L^2(R^2)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::linalg::Subspace;
use crate::orbits::{classify_layer_f64, Layer};
use crate::reps::grid::Grid;
use crate::reps::norm::operator_norm;
use crate::reps::testfn::{act, Symbol, TestFunction, C64};

/// A grid operator; `weighted` means the quadrature weight is folded into
/// the columns, so matrix products are quadratures of compositions.
#[derive(Clone, Debug)]
pub struct DiscretizedOperator {
    pub matrix: DMatrix<C64>,
    pub grid: Grid,
    pub weighted: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GridMeta {
    pub center: Vec<f64>,
    pub half_width: f64,
    pub n: usize,
    pub spacing: f64,
    pub weight: f64,
}

impl DiscretizedOperator {
    pub fn zeros(grid: &Grid) -> Self {
        let n = grid.len();
        DiscretizedOperator { matrix: DMatrix::zeros(n, n), grid: grid.clone(), weighted: true }
    }

    pub fn norm(&self) -> f64 {
        operator_norm(&self.matrix)
    }

    pub fn adjoint(&self) -> Self {
        DiscretizedOperator { matrix: self.matrix.adjoint(), grid: self.grid.clone(), weighted: self.weighted }
    }

    pub fn sub(&self, other: &Self) -> Self {
        DiscretizedOperator { matrix: &self.matrix - &other.matrix, grid: self.grid.clone(), weighted: self.weighted }
    }

    pub fn compose(&self, other: &Self) -> Self {
        DiscretizedOperator { matrix: matmul(&self.matrix, &other.matrix), grid: self.grid.clone(), weighted: self.weighted }
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `max |K - K^dagger|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut d = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                d = d.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        d
    }

    pub fn meta(&self) -> GridMeta {
        GridMeta {
            center: self.grid.center.clone(),
            half_width: self.grid.half_width,
            n: self.grid.n,
            spacing: self.grid.spacing(),
            weight: self.grid.weight(),
        }
    }
}

/// `f|p` as the coordinates `(f3, ..., f7)`.
pub fn restrict(f: &[f64]) -> Result<[f64; 5]> {
    if f.len() != 7 {
        return Err(Error::DimensionMismatch { expected: 7, got: f.len() });
    }
    Ok([f[2], f[3], f[4], f[5], f[6]])
}

fn check_kernel_input(f: &[f64], grid: &Grid) -> Result<[f64; 5]> {
    let p = restrict(f)?;
    if classify_layer_f64(f)? == Layer::Gamma0 {
        return Err(Error::WrongLayer("characters have no induced kernel; use character_transform".into()));
    }
    if grid.axes() != 2 {
        return Err(Error::Invalid(format!("kernel grids have 2 axes, got {}", grid.axes())));
    }
    Ok(p)
}

/// Checks that `p` is the supported polarization `span{X3..X7}` of N7.
pub fn check_polarization(p: &Subspace) -> Result<()> {
    if p.ambient() != 7 {
        return Err(Error::UnsupportedPolarization(format!("ambient dimension {}", p.ambient())));
    }
    match p.coordinate_indices() {
        Some(idx) if idx == [2, 3, 4, 5, 6] => Ok(()),
        Some(idx) => Err(Error::UnsupportedPolarization(format!(
            "coordinate subspace on X{:?}; only span{{X3..X7}} is supported",
            idx.iter().map(|i| i + 1).collect::<Vec<_>>()
        ))),
        None => Err(Error::UnsupportedPolarization("subspace is not coordinate-aligned".into())),
    }
}

/// Evaluator of `F^P` for a checked polarization.
pub struct PartialFourier<'a, S: Symbol + ?Sized> {
    f: &'a S,
}

impl<S: Symbol + ?Sized> PartialFourier<'_, S> {
    pub fn eval(&self, g: [f64; 2], q: &[f64; 5]) -> C64 {
        self.f.partial(g, q)
    }
}

pub fn partial_fourier<'a, S: Symbol + ?Sized>(f: &'a S, p: &Subspace) -> Result<PartialFourier<'a, S>> {
    check_polarization(p)?;
    Ok(PartialFourier { f })
}

/// Fills a `rows x cols` matrix in parallel, column by column.
pub fn fill<F>(rows: usize, cols: usize, entry: F) -> DMatrix<C64>
where
    F: Fn(usize, usize) -> C64 + Sync,
{
    let mut m = DMatrix::<C64>::zeros(rows, cols);
    if rows == 0 {
        return m;
    }
    m.as_mut_slice().par_chunks_mut(rows).enumerate().for_each(|(c, col)| {
        for (r, v) in col.iter_mut().enumerate() {
            *v = entry(r, c);
        }
    });
    m
}

/// Complex product through four real products, which use the blocked
/// `f64` kernel.
pub fn matmul(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    let (ar, ai) = (a.map(|z| z.re), a.map(|z| z.im));
    let (br, bi) = (b.map(|z| z.re), b.map(|z| z.im));
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    re.zip_map(&im, C64::new)
}

/// Block `rows x cols` of the kernel of `pi_f(F)` (weights folded).
pub fn kernel_block(
    test: &TestFunction,
    f: &[f64],
    grid: &Grid,
    rows: &[usize],
    cols: &[usize],
) -> Result<DMatrix<C64>> {
    let p = check_kernel_input(f, grid)?;
    Ok(kernel_block_at(test, &p, grid, rows, cols))
}

/// Block of the kernel `F^P(z - x, x . p)` for any `p` in `p*`, including
/// characters, where the operator is a convolution.
pub fn kernel_block_at(test: &TestFunction, p: &[f64; 5], grid: &Grid, rows: &[usize], cols: &[usize]) -> DMatrix<C64> {
    let pts = grid.points2();
    let w = grid.weight();
    // F^P(z - x, x.p) = base(z - x) fiber(x.p); reflected terms depend on z only
    // through conj(base(x - z) fiber(z.p)).
    struct Part<'a> {
        atom: &'a crate::reps::testfn::Atom,
        reflected: bool,
        vals: Vec<C64>,
    }
    let parts: Vec<Part> = test
        .terms()
        .iter()
        .map(|t| {
            let idx = if t.reflected { rows } else { cols };
            let vals = idx.par_iter().map(|&i| t.atom.fiber(&act(pts[i], p))).collect();
            Part { atom: &t.atom, reflected: t.reflected, vals }
        })
        .collect();
    fill(rows.len(), cols.len(), |r, c| {
        let z = pts[rows[r]];
        let x = pts[cols[c]];
        let mut s = C64::new(0.0, 0.0);
        for part in &parts {
            if part.reflected {
                s += (part.atom.base([x[0] - z[0], x[1] - z[1]]) * part.vals[r]).conj();
            } else {
                s += part.atom.base([z[0] - x[0], z[1] - x[1]]) * part.vals[c];
            }
        }
        s * w
    })
}

/// Full kernel of `pi_f(F)` on `grid`.
pub fn induced_kernel(test: &TestFunction, f: &[f64], grid: &Grid) -> Result<DiscretizedOperator> {
    let all: Vec<usize> = (0..grid.len()).collect();
    let matrix = kernel_block(test, f, grid, &all, &all)?;
    Ok(DiscretizedOperator { matrix, grid: grid.clone(), weighted: true })
}

/// Block of the kernel of a general symbol at `p`.
pub fn symbol_block_at<S: Symbol + ?Sized>(
    s: &S,
    p: &[f64; 5],
    grid: &Grid,
    rows: &[usize],
    cols: &[usize],
) -> DMatrix<C64> {
    let pts = grid.points2();
    let w = grid.weight();
    fill(rows.len(), cols.len(), |r, c| {
        let z = pts[rows[r]];
        let x = pts[cols[c]];
        s.partial([z[0] - x[0], z[1] - x[1]], &act(x, p)) * w
    })
}

/// Kernel of `pi_f(S)` for any symbol, entry by entry.
pub fn induced_kernel_symbol<S: Symbol + ?Sized>(s: &S, f: &[f64], grid: &Grid) -> Result<DiscretizedOperator> {
    let p = check_kernel_input(f, grid)?;
    let pts = grid.points2();
    let w = grid.weight();
    let n = grid.len();
    let matrix = fill(n, n, |r, c| {
        let z = pts[r];
        let x = pts[c];
        s.partial([z[0] - x[0], z[1] - x[1]], &act(x, &p)) * w
    });
    Ok(DiscretizedOperator { matrix, grid: grid.clone(), weighted: true })
}

/// Points of the plane where `x . f|p` vanishes in the `X3*, X4*` slots and
/// is smallest in the `X5*, X6*` slots: the kernel of `pi_f(F)` concentrates
/// there for atoms centered at `q = 0`.
pub fn kernel_centers(f: &[f64], merge_radius: f64) -> Result<Vec<[f64; 2]>> {
    let p = restrict(f)?;
    match classify_layer_f64(f)? {
        Layer::Gamma0 => Err(Error::WrongLayer("characters have no induced kernel".into())),
        Layer::Gamma1 => {
            // (q3, q4) = (f3, f4) + M x, M = [[-f5, f6], [-f6, -f5]]
            let (f5, f6) = (p[2], p[3]);
            let r2 = f5 * f5 + f6 * f6;
            let x1 = (f5 * p[0] + f6 * p[1]) / r2;
            let x2 = (f5 * p[1] - f6 * p[0]) / r2;
            Ok(vec![[x1, x2]])
        }
        Layer::Gamma2 => {
            let f7 = p[4];
            let x0 = [p[2] / f7, p[3] / f7];
            let c = act(x0, &p);
            // (u1 + i u2)^2 = -2 f7 (c3 + i c4), centers x0 +- u / f7
            let u = (Complex64::new(c[0], c[1]) * (-2.0 * f7)).sqrt();
            let v = [u.re / f7, u.im / f7];
            if v[0].hypot(v[1]) <= merge_radius {
                Ok(vec![x0])
            } else {
                Ok(vec![[x0[0] + v[0], x0[1] + v[1]], [x0[0] - v[0], x0[1] - v[1]]])
            }
        }
    }
}

/// Closed-form 4-variable transform of `int F dx5 dx6 dx7` at `xi`.
pub fn character_transform(test: &TestFunction, xi: &[f64; 4]) -> C64 {
    test.character_transform(xi)
}

/// `sup |chi_xi(F)|` over a 4-axis grid.
pub fn pi0_sup_norm(test: &TestFunction, grid4: &Grid) -> Result<f64> {
    if grid4.axes() != 4 {
        return Err(Error::Invalid(format!("pi0 grid needs 4 axes, got {}", grid4.axes())));
    }
    let m = (0..grid4.len())
        .into_par_iter()
        .map(|i| {
            let p = grid4.point(i);
            test.character_transform(&[p[0], p[1], p[2], p[3]]).norm()
        })
        .reduce(|| 0.0, f64::max);
    Ok(m)
}

/// Largest kernel magnitude on the grid boundary relative to the largest
/// magnitude overall; a proxy for whether the window captures the operator.
pub fn boundary_mass(op: &DiscretizedOperator) -> f64 {
    let n = op.grid.len();
    let ring = op.grid.boundary2();
    let total = op.max_abs();
    if total == 0.0 {
        return 0.0;
    }
    let mut b = 0.0f64;
    for &i in &ring {
        for j in 0..n {
            b = b.max(op.matrix[(i, j)].norm()).max(op.matrix[(j, i)].norm());
        }
    }
    b / total
}
