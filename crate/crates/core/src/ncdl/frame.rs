//! Coherent frames on `L^2(R^2)` and the operators `sigma_l(h)` that carry
//! functions on the characters into the Gamma1 representation space.
//!
//! For `l = (0, 0, l3, l4, f5, f6, 0)` put `M = [[-f5, f6], [-f6, -f5]]`, so
//! that `x . l` has `(X3*, X4*)` slots `(l3, l4) + M x` and `|det M| = r^2`
//! with `r = |(f5, f6)|`. The frame vector attached to `(f1, f2, f3, f4)` is
//!
//! `eta_f(s) = r^(1/2) e^{2 pi i s.(f1, f2)} eta(sqrt(r)(s1 - s01)) eta(sqrt(r)(s2 - s02))`
//!
//! with `s0 = M^-1((f3, f4) - (l3, l4))` and `eta(t) = 2^(1/4) e^{-pi t^2}`.
//! The resolution of identity reads `xi = r^-2 int <xi, eta_f> eta_f df`, or
//! `int int <xi, eta> eta dw ds0` in the coordinates `(w, s0)`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::reps::grid::Grid;
use crate::reps::kernel::{fill, DiscretizedOperator};
use crate::reps::testfn::{TestFunction, C64};

/// Extra range of the `s0` grid beyond the window, in units of `r^-1/2`.
pub const S0_MARGIN: f64 = 6.0;
/// Default `s0` spacing in units of `r^-1/2`.
pub const S0_SPACING: f64 = 0.25;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// The Gaussian profile, `||eta||_2 = 1`.
pub fn eta(t: f64) -> f64 {
    std::f64::consts::SQRT_2.sqrt() * (-std::f64::consts::PI * t * t).exp()
}

/// Default scale `r = (f5^2 + f6^2)^(1/2)`.
pub fn default_scale(f5: f64, f6: f64) -> f64 {
    f5.hypot(f6)
}

#[derive(Clone, Debug)]
pub struct CoherentFrame {
    pub f5: f64,
    pub f6: f64,
    /// `(l3, l4)` of the Gamma1 point.
    pub l34: [f64; 2],
    pub r: f64,
    /// Grid of the representation space.
    pub s_grid: Grid,
    /// Grid of frame positions `s0`.
    pub s0_grid: Grid,
}

impl CoherentFrame {
    /// `s0_spacing` is in units of `r^-1/2`; `scale` overrides the default `r`.
    pub fn new(f5: f64, f6: f64, l34: [f64; 2], scale: Option<f64>, s_grid: &Grid, s0_spacing: f64) -> Result<Self> {
        if f5 == 0.0 && f6 == 0.0 {
            return Err(Error::ScaleUndefined);
        }
        let r = scale.unwrap_or_else(|| default_scale(f5, f6));
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Invalid(format!("frame scale must be positive, got {r}")));
        }
        if s_grid.axes() != 2 {
            return Err(Error::Invalid(format!("frame grids have 2 axes, got {}", s_grid.axes())));
        }
        if !(s0_spacing > 0.0) {
            return Err(Error::Invalid("s0 spacing must be positive".into()));
        }
        let width = r.powf(-0.5);
        let half = s_grid.half_width + S0_MARGIN * width;
        let n = (2.0 * half / (s0_spacing * width)).ceil() as usize + 1;
        let s0_grid = Grid::centered(s_grid.center.clone(), half, n.max(2))?;
        Ok(CoherentFrame { f5, f6, l34, r, s_grid: s_grid.clone(), s0_grid })
    }

    /// `M s0 + (l3, l4)`.
    pub fn slots34(&self, s0: [f64; 2]) -> [f64; 2] {
        [
            self.l34[0] - self.f5 * s0[0] + self.f6 * s0[1],
            self.l34[1] - self.f6 * s0[0] - self.f5 * s0[1],
        ]
    }

    /// `s0 = M^-1((f3, f4) - (l3, l4))`.
    pub fn position(&self, f34: [f64; 2]) -> [f64; 2] {
        let (a, b) = (f34[0] - self.l34[0], f34[1] - self.l34[1]);
        let r2 = self.f5 * self.f5 + self.f6 * self.f6;
        [(-self.f5 * a - self.f6 * b) / r2, (self.f6 * a - self.f5 * b) / r2]
    }

    /// Axis of the modulation grid, the discrete Fourier dual of the s-grid.
    pub fn omega_axis(&self) -> Vec<f64> {
        let n = self.s_grid.n;
        let dw = 1.0 / (n as f64 * self.s_grid.spacing());
        (0..n).map(|k| (k as f64 - (n / 2) as f64) * dw).collect()
    }

    pub fn omega_weight(&self) -> f64 {
        let dw = 1.0 / (self.s_grid.n as f64 * self.s_grid.spacing());
        dw * dw
    }

    fn envelope(&self, s0: [f64; 2], s: [f64; 2]) -> f64 {
        let q = self.r.sqrt();
        self.r.sqrt() * eta(q * (s[0] - s0[0])) * eta(q * (s[1] - s0[1]))
    }

    /// `eta_f` sampled on the s-grid.
    pub fn vector(&self, f: [f64; 4]) -> DVector<C64> {
        let s0 = self.position([f[2], f[3]]);
        let pts = self.s_grid.points2();
        DVector::from_iterator(
            pts.len(),
            pts.iter().map(|&s| C64::from_polar(self.envelope(s0, s), TWO_PI * (s[0] * f[0] + s[1] * f[1]))),
        )
    }

    /// `<u, v>` with the grid weight.
    pub fn inner(&self, u: &DVector<C64>, v: &DVector<C64>) -> C64 {
        v.dotc(u) * self.s_grid.weight()
    }

    /// `P_f = |eta_f><eta_f|` as a weighted grid operator.
    pub fn projection(&self, f: [f64; 4]) -> DiscretizedOperator {
        let v = self.vector(f);
        let w = self.s_grid.weight();
        let matrix = &v * v.adjoint() * C64::new(w, 0.0);
        DiscretizedOperator { matrix, grid: self.s_grid.clone(), weighted: true }
    }

    /// `sum_{s0} w |g_{s0}(s)|^2`, the diagonal of the frame operator.
    pub fn frame_diagonal(&self) -> Vec<f64> {
        let pos = self.s0_grid.points2();
        let ws = self.s0_grid.weight();
        self.s_grid
            .points2()
            .par_iter()
            .map(|&s| pos.iter().map(|&p| self.envelope(p, s).powi(2)).sum::<f64>() * ws)
            .collect()
    }

    /// `sum_{w, s0} <xi, eta> eta` with the modulation sum done exactly: on
    /// the dual grid it collapses to multiplication by the frame diagonal.
    pub fn resolve(&self, xi: &DVector<C64>) -> DVector<C64> {
        let d = self.frame_diagonal();
        DVector::from_iterator(xi.len(), xi.iter().zip(d).map(|(x, g)| x * g))
    }

    /// `||xi - resolve(xi)|| / ||xi||`.
    pub fn resolution_error(&self, xi: &DVector<C64>) -> f64 {
        (xi - self.resolve(xi)).norm() / xi.norm()
    }
}

/// `sigma(h) = int int h(w, M s0 + l34) |eta><eta| dw ds0` for sampled `h`.
///
/// Costs `O(#s0 * n^4)`; meant for small grids.
pub fn sigma_gamma0(h: &(dyn Fn([f64; 4]) -> C64 + Sync), frame: &CoherentFrame) -> DiscretizedOperator {
    let sg = &frame.s_grid;
    let n = sg.n;
    let ds = sg.spacing();
    let om = frame.omega_axis();
    let ww = frame.omega_weight();
    // E[d, w] = e^{2 pi i d w} for lattice differences d = (t - n + 1) ds
    let e = DMatrix::from_fn(2 * n - 1, n, |t, k| {
        C64::from_polar(1.0, TWO_PI * (t as f64 - (n - 1) as f64) * ds * om[k])
    });
    let pts = sg.points2();
    let ax0 = sg.axis(0);
    let ax1 = sg.axis(1);
    let hs = sg.weight();
    let pos = frame.s0_grid.points2();
    let ws = frame.s0_grid.weight();
    let total = pos
        .par_iter()
        .fold(
            || DMatrix::<C64>::zeros(n * n, n * n),
            |mut acc, &s0| {
                let x34 = frame.slots34(s0);
                let hm = DMatrix::from_fn(n, n, |a, b| h([om[a], om[b], x34[0], x34[1]]) * ww);
                let hd = &e * hm * e.transpose();
                let g0: Vec<f64> = ax0.iter().map(|&t| eta(frame.r.sqrt() * (t - s0[0]))).collect();
                let g1: Vec<f64> = ax1.iter().map(|&t| eta(frame.r.sqrt() * (t - s0[1]))).collect();
                let c = ws * hs * frame.r;
                for (col, _) in pts.iter().enumerate() {
                    let (xa, xb) = (col / n, col % n);
                    let gx = g0[xa] * g1[xb] * c;
                    if gx == 0.0 {
                        continue;
                    }
                    for za in 0..n {
                        let gza = g0[za] * gx;
                        for zb in 0..n {
                            let v = hd[(za + n - 1 - xa, zb + n - 1 - xb)];
                            acc[(za * n + zb, col)] += v * (gza * g1[zb]);
                        }
                    }
                }
                acc
            },
        )
        .reduce(|| DMatrix::<C64>::zeros(n * n, n * n), |a, b| a + b);
    DiscretizedOperator { matrix: total, grid: sg.clone(), weighted: true }
}

/// `sigma(chi(F))` for a test function. The modulation integral is done in
/// closed form and the `s0` sum on the lattice of midpoints `(z + x)/2`.
pub fn sigma_gamma0_test(test: &TestFunction, frame: &CoherentFrame) -> DiscretizedOperator {
    let sg = &frame.s_grid;
    let n = sg.n;
    let ds = sg.spacing();
    let lo = [sg.center[0] - sg.half_width, sg.center[1] - sg.half_width];
    let r = frame.r;
    let pos = frame.s0_grid.points2();
    let ws = frame.s0_grid.weight();
    let m = 2 * n - 1;
    // Phi_t(mid) for mid = lo + (a, b) ds / 2
    let phis: Vec<Vec<C64>> = test
        .terms()
        .iter()
        .map(|t| {
            let f = &t.atom.factors;
            let tail: f64 = f[4..].iter().map(|g| g.integral()).product();
            let bvals: Vec<C64> = pos
                .iter()
                .map(|&p| {
                    let x = frame.slots34(p);
                    let b = f[2].fourier(x[0]) * f[3].fourier(x[1]) * tail;
                    if t.reflected {
                        b.conj()
                    } else {
                        b
                    }
                })
                .collect();
            (0..m * m)
                .into_par_iter()
                .map(|idx| {
                    let mid = [lo[0] + (idx / m) as f64 * ds / 2.0, lo[1] + (idx % m) as f64 * ds / 2.0];
                    let mut s = C64::new(0.0, 0.0);
                    for (p, b) in pos.iter().zip(&bvals) {
                        let d2 = (p[0] - mid[0]).powi(2) + (p[1] - mid[1]).powi(2);
                        s += b * (-TWO_PI * r * d2).exp();
                    }
                    s * ws
                })
                .collect()
        })
        .collect();
    let pts = sg.points2();
    let hs = sg.weight();
    // g(z) g(x) = 2 r e^{-pi r |d|^2 / 2} e^{-2 pi r |mid - s0|^2}
    let c = 2.0 * r * hs;
    let matrix = fill(n * n, n * n, |row, col| {
        let (za, zb) = (row / n, row % n);
        let (xa, xb) = (col / n, col % n);
        let d = [pts[row][0] - pts[col][0], pts[row][1] - pts[col][1]];
        let env = (-std::f64::consts::PI * r * (d[0] * d[0] + d[1] * d[1]) / 2.0).exp();
        let mid = (za + xa) * m + (zb + xb);
        let mut s = C64::new(0.0, 0.0);
        for (t, phi) in test.terms().iter().zip(&phis) {
            let a = if t.reflected { t.atom.base([-d[0], -d[1]]).conj() } else { t.atom.base(d) };
            s += a * phi[mid];
        }
        s * env * c
    });
    DiscretizedOperator { matrix, grid: sg.clone(), weighted: true }
}
