//! Limits of orbit sequences in the orbit space of N7.
//!
//! A sequence of orbits `O_k` converges to `O` when some point of `O` is a
//! limit of points `f_k` in `O_k`. For Gamma2 sequences with `f7 -> 0` the
//! orbit `O_(f3,f4,f7) = {(x1, x2, f3 + (x5^2 - x6^2)/(2 f7), f4 + x5 x6/f7,
//! x5, x6, f7)}` has points near `(f1, .., f6, 0)` exactly when
//! `(x5 + i x6)^2 = 2 f7 (f3' - f3) + 2 i f7 (f4' - f4)` tends to
//! `(f5 + i f6)^2`, which pins `(f5 + i f6)^2 = -c2 - 2 i c1`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::orbits::{classify_layer_f64, Layer, OrbitDescriptor};
use crate::rule::Rule;

/// Share of the horizon used for tail estimates.
pub const TAIL_FRACTION: f64 = 0.25;

#[derive(Clone, Debug)]
pub struct OrbitSequence {
    pub layer: Layer,
    /// Gamma2: `[f3, f4, f7]`, Gamma1: `[f5, f6]`, Gamma0: `[f1, f2, f3, f4]`.
    pub rules: Vec<Rule>,
    pub horizon: usize,
}

impl OrbitSequence {
    pub fn new(layer: Layer, rules: Vec<Rule>, horizon: usize) -> Result<Self> {
        let expected = match layer {
            Layer::Gamma2 => 3,
            Layer::Gamma1 => 2,
            Layer::Gamma0 => 4,
        };
        if rules.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: rules.len() });
        }
        if horizon < 4 {
            return Err(Error::BadSequence("horizon must be at least 4".into()));
        }
        let seq = OrbitSequence { layer, rules, horizon };
        for k in 1..=horizon {
            let d = seq.term(k);
            if d.params.iter().any(|x| !x.is_finite()) {
                return Err(Error::BadSequence(format!("non-finite term at k = {k}")));
            }
            let l = classify_layer_f64(&d.representative())?;
            if l != layer {
                return Err(Error::BadSequence(format!("term k = {k} lies in {} not {}", l.name(), layer.name())));
            }
        }
        Ok(seq)
    }

    pub fn gamma2(f3: &str, f4: &str, f7: &str, horizon: usize) -> Result<Self> {
        Self::new(Layer::Gamma2, vec![Rule::parse(f3)?, Rule::parse(f4)?, Rule::parse(f7)?], horizon)
    }

    pub fn gamma1(f5: &str, f6: &str, horizon: usize) -> Result<Self> {
        Self::new(Layer::Gamma1, vec![Rule::parse(f5)?, Rule::parse(f6)?], horizon)
    }

    pub fn term(&self, k: usize) -> OrbitDescriptor<f64> {
        OrbitDescriptor { layer: self.layer, params: self.rules.iter().map(|r| r.eval(k as f64)).collect() }
    }

    fn tail(&self) -> std::ops::RangeInclusive<usize> {
        let start = ((1.0 - TAIL_FRACTION) * self.horizon as f64).ceil() as usize;
        start.max(1)..=self.horizon
    }

    /// Tail estimate of `lim g(term k)`; `None` if the tail is not Cauchy
    /// within `tol * (1 + |c|)`.
    fn tail_limit(&self, tol: f64, g: impl Fn(&[f64]) -> f64) -> Option<f64> {
        let last = g(&self.term(self.horizon).params);
        let spread = self
            .tail()
            .map(|k| (g(&self.term(k).params) - last).abs())
            .fold(0.0f64, f64::max);
        (spread <= tol * (1.0 + last.abs()) && last.is_finite()).then_some(last)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitKind {
    PointInLayer,
    CurveC1,
    AxesUnionCharacters,
    AllCharacters,
}

impl LimitKind {
    pub fn name(&self) -> &'static str {
        match self {
            LimitKind::PointInLayer => "point-in-layer",
            LimitKind::CurveC1 => "curve-c1",
            LimitKind::AxesUnionCharacters => "axes-union-characters",
            LimitKind::AllCharacters => "all-characters",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitSet {
    pub kind: LimitKind,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub point: Option<OrbitDescriptor<f64>>,
    /// Gamma1 orbits `(f5, f6)` with `(f5 + i f6)^2 = -c2 - 2 i c1`: the limit
    /// set when the c2 constraint is enforced.
    pub constrained_orbits: Vec<[f64; 2]>,
    /// Whether characters belong to the constrained limit set (`c1 = c2 = 0`).
    pub constrained_includes_characters: bool,
}

impl LimitSet {
    /// Membership under the theorem as stated: `f5 f6 = -c1` (or `f5 f6 = 0`
    /// together with all characters when `c1 = 0`).
    pub fn contains_stated(&self, f: &[f64], tol: f64) -> bool {
        match self.kind {
            LimitKind::CurveC1 => {
                let c1 = self.c1.unwrap();
                f[6].abs() <= tol && f[4].abs() > tol && (f[4] * f[5] + c1).abs() <= tol * (1.0 + c1.abs())
            }
            LimitKind::AxesUnionCharacters => f[6].abs() <= tol && (f[4] * f[5]).abs() <= tol,
            LimitKind::AllCharacters => f[4].abs() <= tol && f[5].abs() <= tol && f[6].abs() <= tol,
            LimitKind::PointInLayer => {
                let p = self.point.as_ref().unwrap();
                orbit_contains(p, f, tol)
            }
        }
    }

    /// Membership with the c2 constraint enforced.
    pub fn contains_constrained(&self, f: &[f64], tol: f64) -> bool {
        match self.kind {
            LimitKind::CurveC1 | LimitKind::AxesUnionCharacters => {
                let (c1, c2) = (self.c1.unwrap(), self.c2.unwrap());
                let z = Complex64::new(f[4], f[5]);
                let target = Complex64::new(-c2, -2.0 * c1);
                f[6].abs() <= tol && (z * z - target).norm() <= tol * (1.0 + target.norm())
            }
            _ => self.contains_stated(f, tol),
        }
    }
}

/// Whether `f` lies on the orbit `desc` up to `tol` in the invariants.
pub fn orbit_contains(desc: &OrbitDescriptor<f64>, f: &[f64], tol: f64) -> bool {
    let p = &desc.params;
    match desc.layer {
        Layer::Gamma2 => {
            let (i1, i2) = crate::orbits::orbit_invariants(f);
            (f[6] - p[2]).abs() <= tol
                && (i1 - 2.0 * p[0] * p[2]).abs() <= tol * (1.0 + i1.abs())
                && (i2 - p[1] * p[2]).abs() <= tol * (1.0 + i2.abs())
        }
        Layer::Gamma1 => f[6].abs() <= tol && (f[4] - p[0]).abs() <= tol && (f[5] - p[1]).abs() <= tol,
        Layer::Gamma0 => (0..7).all(|i| (f[i] - if i < 4 { p[i] } else { 0.0 }).abs() <= tol),
    }
}

/// Both square roots of `-c2 - 2 i c1` as `(f5, f6)`.
pub fn constrained_orbits(c1: f64, c2: f64) -> Vec<[f64; 2]> {
    let w = Complex64::new(-c2, -2.0 * c1).sqrt();
    if w.norm() == 0.0 {
        return Vec::new();
    }
    vec![[w.re, w.im], [-w.re, -w.im]]
}

pub fn limit_set(seq: &OrbitSequence, tol: f64) -> Result<LimitSet> {
    let divergent = |what: &str| Error::Divergent(format!("{what} does not stabilise over the tail"));
    match seq.layer {
        Layer::Gamma2 => {
            let f7 = seq.tail_limit(tol, |p| p[2]).ok_or_else(|| divergent("f7"))?;
            if f7.abs() > tol {
                let unresolved = |what: &str| {
                    Error::Divergent(format!(
                        "{what} does not stabilise over the tail while f7 = {f7:e} at k = {} is above tol; \
                         if f7 tends to zero, raise the horizon",
                        seq.horizon
                    ))
                };
                let f3 = seq.tail_limit(tol, |p| p[0]).ok_or_else(|| unresolved("f3"))?;
                let f4 = seq.tail_limit(tol, |p| p[1]).ok_or_else(|| unresolved("f4"))?;
                return Ok(point_set(Layer::Gamma2, vec![f3, f4, f7]));
            }
            let c1 = seq.tail_limit(tol, |p| p[1] * p[2]).ok_or_else(|| divergent("c1 = f4 f7"))?;
            let c2 = seq.tail_limit(tol, |p| 2.0 * p[0] * p[2]).ok_or_else(|| divergent("c2 = 2 f3 f7"))?;
            let c1 = if c1.abs() <= tol { 0.0 } else { c1 };
            let c2 = if c2.abs() <= tol { 0.0 } else { c2 };
            let kind = if c1 != 0.0 { LimitKind::CurveC1 } else { LimitKind::AxesUnionCharacters };
            Ok(LimitSet {
                kind,
                c1: Some(c1),
                c2: Some(c2),
                point: None,
                constrained_orbits: constrained_orbits(c1, c2),
                constrained_includes_characters: c1 == 0.0 && c2 == 0.0,
            })
        }
        Layer::Gamma1 => {
            let f5 = seq.tail_limit(tol, |p| p[0]).ok_or_else(|| divergent("f5"))?;
            let f6 = seq.tail_limit(tol, |p| p[1]).ok_or_else(|| divergent("f6"))?;
            if f5.abs() <= tol && f6.abs() <= tol {
                Ok(LimitSet {
                    kind: LimitKind::AllCharacters,
                    c1: None,
                    c2: None,
                    point: None,
                    constrained_orbits: Vec::new(),
                    constrained_includes_characters: true,
                })
            } else {
                Ok(point_set(Layer::Gamma1, vec![f5, f6]))
            }
        }
        Layer::Gamma0 => {
            let mut p = Vec::new();
            for i in 0..4 {
                p.push(seq.tail_limit(tol, |q| q[i]).ok_or_else(|| divergent("character"))?);
            }
            Ok(point_set(Layer::Gamma0, p))
        }
    }
}

fn point_set(layer: Layer, params: Vec<f64>) -> LimitSet {
    LimitSet {
        kind: LimitKind::PointInLayer,
        c1: None,
        c2: None,
        point: Some(OrbitDescriptor { layer, params }),
        constrained_orbits: Vec::new(),
        constrained_includes_characters: false,
    }
}

/// Which witness construction `verify_limit` uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reading {
    /// The witnesses written in the proof; candidates need only satisfy
    /// `f5 f6 = -c1`. These points need not lie on `O_k`.
    Stated,
    /// Points of `O_k` solved exactly; candidates must also satisfy
    /// `f6^2 - f5^2 = c2`.
    Constrained,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub reading: Reading,
    pub pass: bool,
    /// `max_k |f_k - f|_inf` over `K <= k <= 2K`.
    pub max_distance: f64,
    /// `max_distance / (1 + |f|_inf)`, the quantity compared with `tol`.
    pub scaled_distance: f64,
    /// Largest deviation of the witness from `O_k`, measured in the orbit
    /// invariants `(I1, I2, f7)`; zero for exact witnesses.
    pub max_orbit_residual: f64,
    pub ks: Vec<usize>,
    pub distances: Vec<f64>,
    pub witnesses: Vec<Vec<f64>>,
}

fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn orbit_residual(desc: &OrbitDescriptor<f64>, f: &[f64]) -> f64 {
    let p = &desc.params;
    match desc.layer {
        Layer::Gamma2 => {
            let (i1, i2) = crate::orbits::orbit_invariants(f);
            (i1 - 2.0 * p[0] * p[2]).abs().max((i2 - p[1] * p[2]).abs()).max((f[6] - p[2]).abs())
        }
        Layer::Gamma1 => f[6].abs().max((f[4] - p[0]).abs()).max((f[5] - p[1]).abs()),
        Layer::Gamma0 => (0..7).map(|i| (f[i] - if i < 4 { p[i] } else { 0.0 }).abs()).fold(0.0, f64::max),
    }
}

/// Witness point in `O_k` (or the printed formula) approaching `f`.
fn witness(seq: &OrbitSequence, ls: &LimitSet, reading: Reading, k: usize, f: &[f64]) -> Vec<f64> {
    let d = seq.term(k);
    let p = &d.params;
    match (seq.layer, ls.kind) {
        (Layer::Gamma2, LimitKind::PointInLayer) => {
            let f7 = p[2];
            vec![f[0], f[1], p[0] + (f[4] * f[4] - f[5] * f[5]) / (2.0 * f7), p[1] + f[4] * f[5] / f7, f[4], f[5], f7]
        }
        (Layer::Gamma2, _) => {
            let (f3k, f4k, f7k) = (p[0], p[1], p[2]);
            match reading {
                Reading::Stated if ls.kind == LimitKind::CurveC1 => {
                    vec![f[0], f[1], f[2], f[3], f[4], (f[3] * f7k - f7k * f4k) / f[4], f7k]
                }
                Reading::Stated => {
                    let a = f7k * f[3] - f7k * f4k;
                    let s = a.abs().sqrt();
                    vec![f[0], f[1], f[2], f[3], s, a.signum() * s, f7k]
                }
                Reading::Constrained => {
                    let w = Complex64::new(2.0 * f7k * (f[2] - f3k), 2.0 * f7k * (f[3] - f4k)).sqrt();
                    let target = Complex64::new(f[4], f[5]);
                    let z = if (w - target).norm() <= (-w - target).norm() { w } else { -w };
                    vec![f[0], f[1], f[2], f[3], z.re, z.im, f7k]
                }
            }
        }
        (Layer::Gamma1, _) => vec![f[0], f[1], f[2], f[3], p[0], p[1], 0.0],
        (Layer::Gamma0, _) => vec![p[0], p[1], p[2], p[3], 0.0, 0.0, 0.0],
    }
}

/// Builds witnesses `f_k -> candidate` and checks the scaled distance over
/// `K <= k <= 2K` against `tol`.
pub fn verify_limit(seq: &OrbitSequence, candidate: &[f64], tol: f64, reading: Reading) -> Result<WitnessReport> {
    if candidate.len() != 7 {
        return Err(Error::DimensionMismatch { expected: 7, got: candidate.len() });
    }
    let ls = limit_set(seq, tol)?;
    let member = match reading {
        Reading::Stated => ls.contains_stated(candidate, tol),
        Reading::Constrained => ls.contains_constrained(candidate, tol),
    };
    if !member {
        return Err(Error::NotInLimitSet(format!(
            "{:?} violates the {} limit-set constraints (c1 = {:?}, c2 = {:?})",
            candidate,
            ls.kind.name(),
            ls.c1,
            ls.c2
        )));
    }
    let k0 = seq.horizon;
    let ks: Vec<usize> = (k0..=2 * k0).collect();
    let mut distances = Vec::with_capacity(ks.len());
    let mut witnesses = Vec::with_capacity(ks.len());
    let mut max_orbit_residual = 0.0f64;
    for &k in &ks {
        let w = witness(seq, &ls, reading, k, candidate);
        let diff: Vec<f64> = w.iter().zip(candidate).map(|(a, b)| a - b).collect();
        distances.push(sup_norm(&diff));
        max_orbit_residual = max_orbit_residual.max(orbit_residual(&seq.term(k), &w));
        witnesses.push(w);
    }
    let max_distance = distances.iter().copied().fold(0.0, f64::max);
    let scaled_distance = max_distance / (1.0 + sup_norm(candidate));
    Ok(WitnessReport {
        reading,
        pass: scaled_distance < tol,
        max_distance,
        scaled_distance,
        max_orbit_residual,
        ks,
        distances,
        witnesses,
    })
}

/// Axis-aligned box in the dual space.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Window {
    pub lo: [f64; 7],
    pub hi: [f64; 7],
}

impl Window {
    pub fn cube(half: f64) -> Self {
        Window { lo: [-half; 7], hi: [half; 7] }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        (0..7).all(|i| p[i] >= self.lo[i] && p[i] <= self.hi[i])
    }

    fn mesh(&self, i: usize, n: usize) -> Vec<f64> {
        linspace(self.lo[i], self.hi[i], n)
    }
}

impl Default for Window {
    fn default() -> Self {
        Window::cube(10.0)
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![0.5 * (a + b)];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Sample of an orbit inside a window; coordinates in `free` range over the
/// whole window interval and are not stored.
#[derive(Clone, Debug)]
pub struct ClippedSample {
    pub points: Vec<[f64; 7]>,
    pub free: [bool; 7],
}

pub fn sample_clipped(desc: &OrbitDescriptor<f64>, window: &Window, mesh: usize) -> ClippedSample {
    let p = &desc.params;
    let mut points = Vec::new();
    let mut free = [false; 7];
    match desc.layer {
        Layer::Gamma0 => {
            let q = [p[0], p[1], p[2], p[3], 0.0, 0.0, 0.0];
            if window.contains(&q) {
                points.push(q);
            }
        }
        Layer::Gamma1 => {
            free[..4].iter_mut().for_each(|b| *b = true);
            let mut q = [0.0; 7];
            q[4] = p[0];
            q[5] = p[1];
            if (4..7).all(|i| q[i] >= window.lo[i] && q[i] <= window.hi[i]) {
                points.push(q);
            }
        }
        Layer::Gamma2 => {
            free[0] = true;
            free[1] = true;
            let (f3, f4, f7) = (p[0], p[1], p[2]);
            let mut push = |x5: f64, x6: f64| {
                let q = [0.0, 0.0, f3 + (x5 * x5 - x6 * x6) / (2.0 * f7), f4 + x5 * x6 / f7, x5, x6, f7];
                if (2..7).all(|i| q[i] >= window.lo[i] && q[i] <= window.hi[i]) {
                    points.push(q);
                }
            };
            for &x5 in &window.mesh(4, mesh) {
                for &x6 in &window.mesh(5, mesh) {
                    push(x5, x6);
                }
            }
            // parameterize by (q3, q4) as well so thin sheets are not missed
            for &y3 in &window.mesh(2, mesh) {
                for &y4 in &window.mesh(3, mesh) {
                    let w = Complex64::new(2.0 * f7 * (y3 - f3), 2.0 * f7 * (y4 - f4)).sqrt();
                    push(w.re, w.im);
                    push(-w.re, -w.im);
                }
            }
        }
    }
    ClippedSample { points, free }
}

/// One-sided distance `sup_{p in a} inf_{q in b} |p - q|_inf`.
fn directed(a: &ClippedSample, b: &ClippedSample, window: &Window, mesh: usize) -> f64 {
    // coordinates free in `a` but pinned in `b` are expanded on the mesh
    let expand: Vec<usize> = (0..7).filter(|&i| a.free[i] && !b.free[i]).collect();
    let grids: Vec<Vec<f64>> = expand.iter().map(|&i| window.mesh(i, mesh)).collect();
    let combos = grids.iter().map(Vec::len).product::<usize>().max(1);
    let mut worst = 0.0f64;
    for p in &a.points {
        for c in 0..combos {
            let mut pp = *p;
            let mut r = c;
            for (g, &i) in grids.iter().zip(&expand) {
                pp[i] = g[r % g.len()];
                r /= g.len();
            }
            let best = b
                .points
                .iter()
                .map(|q| (0..7).filter(|&i| !b.free[i]).map(|i| (pp[i] - q[i]).abs()).fold(0.0, f64::max))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(best);
        }
    }
    worst
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WindowDistance {
    /// `sup_{p in O1} inf_{q in O2} |p - q|_inf`.
    pub forward: f64,
    /// `sup_{q in O2} inf_{p in O1} |p - q|_inf`.
    pub backward: f64,
    pub hausdorff: f64,
}

pub fn orbit_window_distance(
    o1: &OrbitDescriptor<f64>,
    o2: &OrbitDescriptor<f64>,
    window: &Window,
    mesh: usize,
) -> Result<WindowDistance> {
    let a = sample_clipped(o1, window, mesh);
    let b = sample_clipped(o2, window, mesh);
    if a.points.is_empty() || b.points.is_empty() {
        return Err(Error::EmptyWindow(format!(
            "clipped samples have {} and {} points",
            a.points.len(),
            b.points.len()
        )));
    }
    let forward = directed(&a, &b, window, mesh);
    let backward = directed(&b, &a, window, mesh);
    Ok(WindowDistance { forward, backward, hausdorff: forward.max(backward) })
}
