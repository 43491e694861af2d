//! Box partitions of the plane and the functionals pinned on each box.
//!
//! Every box `U` comes with a center `g` and a pinned functional `p` in `p*`
//! such that `x . p_k` is close to `(x - g) . p` for `x` in `U`. The
//! operator field is then evaluated at the limit point `(-g) . p`.

use serde::Serialize;

use crate::ncdl::schedule::{DegenerateStep, GenericStep};
use crate::reps::testfn::act;

/// A box of the partition together with its pinned data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Pinned {
    /// Family tag: 0 for the generic case, 4, 5 or 6 for the degenerate one.
    pub family: u8,
    /// Box index `j` (family 4 uses `(j3, j4)`).
    pub index: (i64, i64),
    /// Center `g`.
    pub center: [f64; 2],
    /// Pinned functional in `p*`.
    pub p: [f64; 5],
    /// `(-g) . p`, the point of the limit set where the field is evaluated.
    pub limit: [f64; 5],
}

impl Pinned {
    /// `|| x . p_k - (x - g) . p ||_1`.
    pub fn defect(&self, pk: &[f64; 5], x: [f64; 2]) -> f64 {
        let a = act(x, pk);
        let b = act([x[0] - self.center[0], x[1] - self.center[1]], &self.p);
        a.iter().zip(b).map(|(u, v)| (u - v).abs()).sum()
    }

    /// The limit point as a functional on `n`.
    pub fn limit7(&self) -> [f64; 7] {
        let l = self.limit;
        [0.0, 0.0, l[0], l[1], l[2], l[3], l[4]]
    }
}

fn pin(family: u8, index: (i64, i64), center: [f64; 2], pk: &[f64; 5]) -> Pinned {
    let mut p = act(center, pk);
    p[4] = 0.0;
    let limit = act([-center[0], -center[1]], &p);
    Pinned { family, index, center, p, limit }
}

/// The boxes `U_{j,m}` of the generic case.
///
/// `U_{j,m} = {x : round(f7 x1 i / eps) = j, |f7 x2 + c1 / f5j| <= m delta}`
/// with `f5j = j eps`; the slabs in `x1` tile the line.
#[derive(Clone, Debug)]
pub struct GenericBoxes<'a> {
    pub step: &'a GenericStep,
}

impl<'a> GenericBoxes<'a> {
    pub fn new(step: &'a GenericStep) -> Self {
        GenericBoxes { step }
    }

    pub fn f5j(&self, j: i64) -> f64 {
        j as f64 * self.step.eps
    }

    pub fn slab(&self, x: [f64; 2]) -> i64 {
        let s = self.step;
        (s.f7 * x[0] * s.i / s.eps).round() as i64
    }

    pub fn in_u(&self, j: i64, m: usize, x: [f64; 2]) -> bool {
        if j == 0 || self.slab(x) != j {
            return false;
        }
        let s = self.step;
        (s.f7 * x[1] + s.c1 / self.f5j(j)).abs() <= m as f64 * s.delta
    }

    /// `V_{j,m} = U_{j-1,m} u U_{j,m} u U_{j+1,m}`.
    pub fn in_v(&self, j: i64, m: usize, x: [f64; 2]) -> bool {
        (j - 1..=j + 1).any(|jj| self.in_u(jj, m, x))
    }

    /// `g_j = (f5j / (f7 i), -c1 / (f5j f7))`.
    pub fn center(&self, j: i64) -> [f64; 2] {
        let s = self.step;
        let f5 = self.f5j(j);
        [f5 / (s.f7 * s.i), -s.c1 / (f5 * s.f7)]
    }

    /// Half-widths of the box `R_m`.
    pub fn bounding_box(&self, m: usize) -> [f64; 2] {
        let s = self.step;
        [s.eps / (s.i * s.f7).abs(), m as f64 * s.delta / s.f7.abs()]
    }

    pub fn pinned(&self, j: i64) -> Pinned {
        pin(0, (j, 0), self.center(j), &self.step.p())
    }

    /// `X3*` slot of `g_j . p_k` in closed form.
    pub fn slot3(&self, j: i64) -> f64 {
        let s = self.step;
        let f5 = self.f5j(j);
        s.f3 + f5 * f5 * s.f4 / (2.0 * s.c1 * s.i) - s.c1 * s.i * s.f4 / (2.0 * f5 * f5)
    }

    /// The same slot as printed, with `f4` in the denominator of the middle
    /// term.
    pub fn slot3_printed(&self, j: i64) -> f64 {
        let s = self.step;
        let f5 = self.f5j(j);
        s.f3 + f5 * f5 / (2.0 * s.c1 * s.i * s.f4) - s.c1 * s.i * s.f4 / (2.0 * f5 * f5)
    }
}

/// The families of the degenerate case (`c1 = 0`), classified by
/// `q = x . p_k`:
///
/// - family 6: `|q5| < m sqrt(delta) <= |q6|`, bins `round(q6 / eps)`;
/// - family 5: `|q6| < m sqrt(delta) <= |q5|`, bins `round(q5 / eps)`;
/// - family 4: both small, 2D bins of width `delta^(1/4)` in `(q3, q4)`.
#[derive(Clone, Debug)]
pub struct DegenerateBoxes<'a> {
    pub step: &'a DegenerateStep,
}

impl<'a> DegenerateBoxes<'a> {
    pub fn new(step: &'a DegenerateStep) -> Self {
        DegenerateBoxes { step }
    }

    pub fn q(&self, x: [f64; 2]) -> [f64; 5] {
        act(x, &self.step.p())
    }

    pub fn width4(&self) -> f64 {
        self.step.delta.powf(0.25)
    }

    /// Family of `x` at level `m`, or `None` outside `S_m`.
    pub fn family(&self, m: usize, x: [f64; 2]) -> Option<u8> {
        let q = self.q(x);
        let t = m as f64 * self.step.delta.sqrt();
        match (q[2].abs() < t, q[3].abs() < t) {
            (true, false) => Some(6),
            (false, true) => Some(5),
            (true, true) => Some(4),
            (false, false) => None,
        }
    }

    /// Bin index of `x` inside its family.
    pub fn bin(&self, family: u8, x: [f64; 2]) -> (i64, i64) {
        let q = self.q(x);
        let e = self.step.eps;
        match family {
            6 => ((q[3] / e).round() as i64, 0),
            5 => ((q[2] / e).round() as i64, 0),
            _ => {
                let w = self.width4();
                ((q[0] / w).round() as i64, (q[1] / w).round() as i64)
            }
        }
    }

    pub fn in_u(&self, family: u8, index: (i64, i64), m: usize, x: [f64; 2]) -> bool {
        if family != 4 && index.0 == 0 {
            return false;
        }
        self.family(m, x) == Some(family) && self.bin(family, x) == index
    }

    /// Neighborhood at level `m` of the box `U_{j,m-1}`: `|dj| <= 1` for
    /// families 5 and 6, `|dj3|, |dj4| <= 2m - 1` for family 4.
    pub fn in_v(&self, family: u8, index: (i64, i64), m: usize, x: [f64; 2]) -> bool {
        if self.family(m, x) != Some(family) {
            return false;
        }
        let b = self.bin(family, x);
        if family == 4 {
            let r = 2 * m as i64 - 1;
            (b.0 - index.0).abs() <= r && (b.1 - index.1).abs() <= r
        } else {
            b.0 != 0 && (b.0 - index.0).abs() <= 1
        }
    }

    pub fn center(&self, family: u8, j: i64) -> [f64; 2] {
        let s = self.step;
        let je = j as f64 * s.eps;
        match family {
            6 => [s.f4 / je, -je / s.f7],
            5 => [-je / s.f7, s.f4 / je],
            _ => [0.0, 0.0],
        }
    }

    pub fn pinned(&self, family: u8, index: (i64, i64)) -> Pinned {
        if family == 4 {
            let w = self.width4();
            let p = [index.0 as f64 * w, index.1 as f64 * w, 0.0, 0.0, 0.0];
            return Pinned { family, index, center: [0.0, 0.0], p, limit: p };
        }
        pin(family, index, self.center(family, index.0), &self.step.p())
    }

    /// Half-widths of `R_{i,m}` for `i = 5, 6`: the binned slot moves one
    /// coordinate by `eps / |f7|`, the small slot bounds the other by
    /// `m sqrt(delta) / |f7|` around zero.
    pub fn bounding_box(&self, family: u8, m: usize) -> [f64; 2] {
        let s = self.step;
        let a = s.eps / s.f7.abs();
        let b = m as f64 * s.delta.sqrt() / s.f7.abs();
        if family == 6 {
            [b, a]
        } else {
            [a, b]
        }
    }
}
