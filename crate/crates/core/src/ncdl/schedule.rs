//! Per-k scalars of the box constructions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::orbits::Layer;
use crate::rule::Rule;
use crate::topology::OrbitSequence;

/// `|1 - i_k|` below this counts as zero and triggers `nu_k = 1/(k+1)`.
pub const I_TOL: f64 = 1e-12;
/// Relative tolerance for `f4 f7 -> c1` at the horizon.
pub const C1_TOL: f64 = 1e-2;
/// Sample points used to test limits of auxiliary sequences.
const TAIL_KS: [f64; 4] = [1e2, 1e3, 1e4, 1e5];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `|f7| < nu`
    Small,
    /// `|f7| >= nu`
    Large,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenericStep {
    pub k: usize,
    pub f3: f64,
    pub f4: f64,
    pub f7: f64,
    pub c1: f64,
    pub i: f64,
    pub nu: f64,
    pub eps: f64,
    pub delta: f64,
    pub r: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub branch: Branch,
}

impl GenericStep {
    /// `p_k = (f3, f4, 0, 0, f7)` in `p*`.
    pub fn p(&self) -> [f64; 5] {
        [self.f3, self.f4, 0.0, 0.0, self.f7]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DegenerateStep {
    pub k: usize,
    pub f3: f64,
    pub f4: f64,
    pub f7: f64,
    pub r: f64,
    pub eps: f64,
    pub nu: f64,
    pub delta: f64,
}

impl DegenerateStep {
    pub fn p(&self) -> [f64; 5] {
        [self.f3, self.f4, 0.0, 0.0, self.f7]
    }

    /// Bound for the pinned defect on the families 5 and 6.
    pub fn bound_directional(&self, m: usize) -> f64 {
        4.0 * m as f64 * (self.r * self.delta).sqrt()
    }

    /// Bound for the pinned defect on the central family 4.
    pub fn bound_central(&self) -> f64 {
        1.0 / self.r + 3.0 * self.delta
    }
}

fn gamma2_terms(seq: &OrbitSequence, k: f64) -> (f64, f64, f64) {
    (seq.rules[0].eval(k), seq.rules[1].eval(k), seq.rules[2].eval(k))
}

fn check_gamma2(seq: &OrbitSequence) -> Result<()> {
    if seq.layer != Layer::Gamma2 {
        return Err(Error::BadSequence(format!("expected a Gamma2 sequence, got {}", seq.layer.name())));
    }
    let (_, _, a) = gamma2_terms(seq, (seq.horizon / 2) as f64);
    let (_, _, b) = gamma2_terms(seq, seq.horizon as f64);
    if b.abs() >= a.abs() {
        return Err(Error::BadSequence("f7 does not decrease towards 0".into()));
    }
    Ok(())
}

/// True when `g` is positive and strictly decreasing on `TAIL_KS`.
fn tends_to_zero(g: impl Fn(f64) -> f64) -> bool {
    let v: Vec<f64> = TAIL_KS.iter().map(|&k| g(k)).collect();
    v.iter().all(|x| x.is_finite() && *x >= 0.0) && v.windows(2).all(|w| w[1] < w[0])
}

fn i_and_nu(c1: f64, f4: f64, f7: f64, k: f64) -> (f64, f64) {
    let i = c1 / (f7 * f4);
    let nu = if (1.0 - i).abs() > I_TOL { (1.0 - i).abs() } else { 1.0 / (k + 1.0) };
    (i, nu)
}

/// Default generic rule `R_k = min(|f7|^{-1/4}, nu_k^{-1/4})`.
pub fn default_generic_r(f7: f64, nu: f64) -> f64 {
    f7.abs().powf(-0.25).min(nu.powf(-0.25))
}

fn generic_values(seq: &OrbitSequence, c1: f64, r_rule: Option<&Rule>, k: f64) -> GenericStep {
    let (f3, f4, f7) = gamma2_terms(seq, k);
    let (i, nu) = i_and_nu(c1, f4, f7, k);
    let r = match r_rule {
        Some(rule) => rule.eval(k),
        None => default_generic_r(f7, nu),
    };
    let a7 = f7.abs();
    let (branch, eps, delta) = if a7 < nu {
        (Branch::Small, a7 / nu.powf(0.25), a7 / nu.powf(0.25))
    } else {
        (Branch::Large, a7 * r, nu.powf(0.75))
    };
    let ai = i.abs();
    let sn = nu.sqrt();
    let tail = eps / ai + delta + a7;
    let alpha = sn / (2.0 * ai * ai) + sn / 2.0 + sn / ai + tail;
    let beta = r * r * a7 / (2.0 * ai * ai) + sn / 2.0 + r * sn / ai + tail;
    GenericStep {
        k: k as usize,
        f3,
        f4,
        f7,
        c1,
        i,
        nu,
        eps,
        delta,
        r,
        alpha,
        beta,
        gamma: alpha.max(beta),
        branch,
    }
}

/// Generic schedule (`c1 != 0`) at the indices `ks`.
pub fn schedule_generic(seq: &OrbitSequence, c1: f64, r_rule: Option<&Rule>, ks: &[usize]) -> Result<Vec<GenericStep>> {
    check_gamma2(seq)?;
    if c1 == 0.0 || !c1.is_finite() {
        return Err(Error::BadSequence("c1 = 0: use the degenerate schedule".into()));
    }
    let (_, f4, f7) = gamma2_terms(seq, seq.horizon as f64);
    if (f4 * f7 - c1).abs() > C1_TOL * (1.0 + c1.abs()) {
        return Err(Error::BadSequence(format!("f4 f7 = {} at the horizon, expected c1 = {c1}", f4 * f7)));
    }
    let at = |k: f64| generic_values(seq, c1, r_rule, k);
    if !tends_to_zero(|k| 1.0 / at(k).r) {
        return Err(Error::BadSequence("R_k does not tend to infinity".into()));
    }
    if !tends_to_zero(|k| at(k).r.powi(2) * at(k).f7.abs()) {
        return Err(Error::BadSequence("R_k^2 |f7^k| does not tend to 0".into()));
    }
    if !tends_to_zero(|k| at(k).r * at(k).nu.powf(0.75)) {
        return Err(Error::BadSequence("R_k nu_k^(3/4) does not tend to 0".into()));
    }
    Ok(ks.iter().map(|&k| at(k as f64)).collect())
}

/// Whether `gamma_k` decreases on `TAIL_KS`.
pub fn gamma_tends_to_zero(seq: &OrbitSequence, c1: f64, r_rule: Option<&Rule>) -> bool {
    tends_to_zero(|k| generic_values(seq, c1, r_rule, k).gamma)
}

/// Default degenerate rule `R_k = (|f7| + |f4 f7|)^{-1/8}`.
pub fn default_degenerate_r(f4: f64, f7: f64) -> f64 {
    (f7.abs() + (f4 * f7).abs()).powf(-0.125)
}

fn degenerate_values(seq: &OrbitSequence, r_rule: Option<&Rule>, k: f64) -> DegenerateStep {
    let (f3, f4, f7) = gamma2_terms(seq, k);
    let r = match r_rule {
        Some(rule) => rule.eval(k),
        None => default_degenerate_r(f4, f7),
    };
    let eps = f7.abs() * r.sqrt();
    let nu = eps + (f4 * f7).abs();
    let delta = r * r * nu;
    DegenerateStep { k: k as usize, f3, f4, f7, r, eps, nu, delta }
}

/// Degenerate schedule (`c1 = 0`) at the indices `ks`.
pub fn schedule_degenerate(seq: &OrbitSequence, r_rule: Option<&Rule>, ks: &[usize]) -> Result<Vec<DegenerateStep>> {
    check_gamma2(seq)?;
    if !tends_to_zero(|k| {
        let (_, f4, f7) = gamma2_terms(seq, k);
        (f4 * f7).abs()
    }) {
        return Err(Error::BadSequence("f4 f7 does not tend to 0 (c1 != 0): use the generic schedule".into()));
    }
    let at = |k: f64| degenerate_values(seq, r_rule, k);
    if !tends_to_zero(|k| 1.0 / at(k).r) {
        return Err(Error::BadSequence("R_k does not tend to infinity".into()));
    }
    if !tends_to_zero(|k| at(k).r * at(k).delta) {
        return Err(Error::BadSequence("R_k delta_k does not tend to 0".into()));
    }
    Ok(ks.iter().map(|&k| at(k as f64)).collect())
}
