//! Convergence tables `k -> ||pi_k(F) - sigma_k(F)||`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ncdl::field::{OperatorField, ProductField, TestFunctionField};
use crate::ncdl::frame::{sigma_gamma0_test, CoherentFrame, S0_SPACING};
use crate::ncdl::schedule::{schedule_degenerate, schedule_generic, DegenerateStep, GenericStep};
use crate::ncdl::sigma::{sigma_degenerate, sigma_generic, Sigma};
use crate::orbits::Layer;
use crate::reps::grid::Grid;
use crate::reps::kernel::{induced_kernel, kernel_centers, matmul, DiscretizedOperator};
use crate::reps::norm::operator_norm;
use crate::reps::testfn::{TestFunction, C64, DECAY_TOL};
use crate::rule::Rule;
use crate::topology::OrbitSequence;

/// Default bound on the final difference relative to the first `||pi_k(F)||`.
pub const FINAL_RATIO: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum Case {
    Generic { c1: f64 },
    Degenerate,
    Gamma0,
}

impl Case {
    pub fn name(&self) -> &'static str {
        match self {
            Case::Generic { .. } => "generic",
            Case::Degenerate => "degenerate",
            Case::Gamma0 => "gamma0",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReportConfig {
    pub case: Case,
    /// Gamma2 sequence for the first two cases, Gamma1 for `Gamma0`.
    pub seq: OrbitSequence,
    pub ks: Vec<usize>,
    pub grid_n: usize,
    pub window: f64,
    /// Kernel centers closer than this to their midpoint share one patch;
    /// defaults to `window / 2`.
    pub merge_radius: Option<f64>,
    /// j-range truncation; defaults to the fiber decay of `F`.
    pub tau: Option<f64>,
    pub r_rule: Option<Rule>,
    /// `s0` spacing of the frame in units of `r^-1/2`.
    pub s0_spacing: f64,
    pub final_ratio: f64,
}

impl ReportConfig {
    pub fn new(case: Case, seq: OrbitSequence, ks: Vec<usize>, grid_n: usize, window: f64) -> Self {
        ReportConfig {
            case,
            seq,
            ks,
            grid_n,
            window,
            merge_radius: None,
            tau: None,
            r_rule: None,
            s0_spacing: S0_SPACING,
            final_ratio: FINAL_RATIO,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub k: usize,
    pub norm_pi: f64,
    pub norm_sigma: f64,
    pub diff: f64,
    pub pieces: usize,
    pub patches: usize,
    pub scalars: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub case: Case,
    pub rows: Vec<Row>,
    pub pass: bool,
    pub decreasing: bool,
    pub final_diff: f64,
    /// Least-squares slope of `ln diff` against `ln k`.
    pub slope: f64,
    /// Bound on the final difference, if the case has one.
    pub final_bound: Option<f64>,
}

impl Report {
    pub fn header(&self) -> Vec<String> {
        let mut h: Vec<String> =
            ["k", "norm_pi", "norm_sigma", "diff", "pieces", "patches"].iter().map(|s| s.to_string()).collect();
        if let Some(r) = self.rows.first() {
            h.extend(r.scalars.keys().cloned());
        }
        h
    }

    pub fn records(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                let mut v = vec![
                    r.k.to_string(),
                    format!("{:e}", r.norm_pi),
                    format!("{:e}", r.norm_sigma),
                    format!("{:e}", r.diff),
                    r.pieces.to_string(),
                    r.patches.to_string(),
                ];
                v.extend(r.scalars.values().map(|x| format!("{x:e}")));
                v
            })
            .collect()
    }
}

/// Least-squares slope of `ln y` against `ln x`; NaN if undefined.
pub fn log_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> =
        x.iter().zip(y).filter(|(a, b)| **a > 0.0 && **b > 0.0).map(|(a, b)| (a.ln(), b.ln())).collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Default j-range truncation: fiber values beyond `1/tau` are below
/// the decay tolerance.
pub fn default_tau(test: &TestFunction) -> f64 {
    let r = test.fiber_radius(DECAY_TOL);
    if r > 0.0 {
        1.0 / r
    } else {
        0.0
    }
}

fn gamma2_point(step_p: [f64; 5]) -> [f64; 7] {
    [0.0, 0.0, step_p[0], step_p[1], step_p[2], step_p[3], step_p[4]]
}

/// Patch grids around the kernel centers of `pi_f`.
pub fn patches(f: &[f64], window: f64, n: usize, merge_radius: f64) -> Result<Vec<Grid>> {
    kernel_centers(f, merge_radius)?.into_iter().map(|c| Grid::plane(c, window, n)).collect()
}

enum Step {
    Generic(GenericStep),
    Degenerate(DegenerateStep),
}

impl Step {
    fn p(&self) -> [f64; 5] {
        match self {
            Step::Generic(s) => s.p(),
            Step::Degenerate(s) => s.p(),
        }
    }

    fn k(&self) -> usize {
        match self {
            Step::Generic(s) => s.k,
            Step::Degenerate(s) => s.k,
        }
    }

    fn scalars(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        match self {
            Step::Generic(s) => {
                for (k, v) in [
                    ("eps", s.eps),
                    ("delta", s.delta),
                    ("nu", s.nu),
                    ("r", s.r),
                    ("i", s.i),
                    ("gamma", s.gamma),
                ] {
                    m.insert(k.to_string(), v);
                }
            }
            Step::Degenerate(s) => {
                for (k, v) in [("eps", s.eps), ("delta", s.delta), ("nu", s.nu), ("r", s.r), ("r_delta", s.r * s.delta)] {
                    m.insert(k.to_string(), v);
                }
            }
        }
        m
    }

    fn sigma(&self, field: &dyn OperatorField, grid: &Grid, tau: f64) -> Result<Sigma> {
        match self {
            Step::Generic(s) => sigma_generic(field, s, grid, tau),
            Step::Degenerate(s) => sigma_degenerate(field, s, grid),
        }
    }
}

fn steps(cfg: &ReportConfig) -> Result<Vec<Step>> {
    match cfg.case {
        Case::Generic { c1 } => Ok(schedule_generic(&cfg.seq, c1, cfg.r_rule.as_ref(), &cfg.ks)?
            .into_iter()
            .map(Step::Generic)
            .collect()),
        Case::Degenerate => Ok(schedule_degenerate(&cfg.seq, cfg.r_rule.as_ref(), &cfg.ks)?
            .into_iter()
            .map(Step::Degenerate)
            .collect()),
        Case::Gamma0 => Err(Error::Invalid("no box schedule for the gamma0 case".into())),
    }
}

fn check_config(cfg: &ReportConfig) -> Result<()> {
    if cfg.ks.is_empty() {
        return Err(Error::Invalid("empty k-list".into()));
    }
    let want = if cfg.case == Case::Gamma0 { Layer::Gamma1 } else { Layer::Gamma2 };
    if cfg.seq.layer != want {
        return Err(Error::BadSequence(format!(
            "case {} needs a {} sequence, got {}",
            cfg.case.name(),
            want.name(),
            cfg.seq.layer.name()
        )));
    }
    Ok(())
}

fn max_norm(ops: impl Iterator<Item = DiscretizedOperator>) -> f64 {
    ops.map(|o| o.norm()).fold(0.0, f64::max)
}

fn finish(case: Case, rows: Vec<Row>, final_ratio: f64) -> Report {
    let diffs: Vec<f64> = rows.iter().map(|r| r.diff).collect();
    let decreasing = diffs.windows(2).all(|w| w[1] < w[0]);
    let final_diff = *diffs.last().unwrap_or(&f64::NAN);
    let final_bound = match case {
        Case::Gamma0 => None,
        _ => rows.first().map(|r| final_ratio * r.norm_pi),
    };
    let pass = decreasing && final_bound.map_or(true, |b| final_diff < b);
    let ks: Vec<f64> = rows.iter().map(|r| r.k as f64).collect();
    let slope = log_slope(&ks, &diffs);
    Report { case, rows, pass, decreasing, final_diff, slope, final_bound }
}

/// Runs the convergence table for `F`.
pub fn ncdl_report(test: &TestFunction, cfg: &ReportConfig) -> Result<Report> {
    check_config(cfg)?;
    if cfg.case == Case::Gamma0 {
        return gamma0_report(test, cfg);
    }
    let tau = cfg.tau.unwrap_or_else(|| default_tau(test));
    let merge = cfg.merge_radius.unwrap_or(cfg.window / 2.0);
    let field = TestFunctionField(test);
    let mut rows = Vec::new();
    for step in steps(cfg)? {
        let f = gamma2_point(step.p());
        let grids = patches(&f, cfg.window, cfg.grid_n, merge)?;
        let (mut np, mut ns, mut nd, mut pieces) = (0.0f64, 0.0f64, 0.0f64, 0);
        for g in &grids {
            let pi = induced_kernel(test, &f, g)?;
            let sigma = step.sigma(&field, g, tau)?;
            pieces += sigma.pieces.len();
            np = np.max(pi.norm());
            ns = ns.max(sigma.op.norm());
            nd = nd.max(pi.sub(&sigma.op).norm());
        }
        rows.push(Row {
            k: step.k(),
            norm_pi: np,
            norm_sigma: ns,
            diff: nd,
            pieces,
            patches: grids.len(),
            scalars: step.scalars(),
        });
    }
    Ok(finish(cfg.case, rows, cfg.final_ratio))
}

/// Gamma1 -> Gamma0: `pi_{l_k}(F)` against `sigma_{l_k}(chi(F))`, both
/// compressed to the fixed window around the origin.
fn gamma0_report(test: &TestFunction, cfg: &ReportConfig) -> Result<Report> {
    let grid = Grid::plane([0.0, 0.0], cfg.window, cfg.grid_n)?;
    let mut rows = Vec::new();
    for &k in &cfg.ks {
        let f = cfg.seq.term(k).representative();
        let frame = CoherentFrame::new(f[4], f[5], [f[2], f[3]], None, &grid, cfg.s0_spacing)?;
        let pi = induced_kernel(test, &f, &grid)?;
        let sigma = sigma_gamma0_test(test, &frame);
        let mut scalars = BTreeMap::new();
        scalars.insert("r".to_string(), frame.r);
        scalars.insert("s0_count".to_string(), frame.s0_grid.len() as f64);
        rows.push(Row {
            k,
            norm_pi: pi.norm(),
            norm_sigma: sigma.norm(),
            diff: pi.sub(&sigma).norm(),
            pieces: frame.s0_grid.len(),
            patches: 1,
            scalars,
        });
    }
    Ok(finish(cfg.case, rows, cfg.final_ratio))
}

/// `||sigma_k(F * G) - sigma_k(F) sigma_k(G)||` per k, with the field of
/// `F * G` realized as the pointwise product of the two fields.
pub fn multiplicativity_defect(f: &TestFunction, g: &TestFunction, cfg: &ReportConfig) -> Result<Vec<(usize, f64)>> {
    check_config(cfg)?;
    let tau = cfg.tau.unwrap_or_else(|| default_tau(f).min(default_tau(g)));
    let merge = cfg.merge_radius.unwrap_or(cfg.window / 2.0);
    let ff = TestFunctionField(f);
    let fg = TestFunctionField(g);
    let prod = ProductField { left: &ff, right: &fg };
    let mut out = Vec::new();
    for step in steps(cfg)? {
        let p = gamma2_point(step.p());
        let mut d = 0.0f64;
        for grid in patches(&p, cfg.window, cfg.grid_n, merge)? {
            let a = step.sigma(&ff, &grid, tau)?;
            let b = step.sigma(&fg, &grid, tau)?;
            let ab = step.sigma(&prod, &grid, tau)?;
            // all three vanish outside the rows and columns touched by the pieces
            let mut sup: Vec<usize> = a.pieces.iter().chain(&b.pieces).flat_map(|p| p.u.iter().chain(&p.v)).copied().collect();
            sup.sort_unstable();
            sup.dedup();
            let sub = |m: &DMatrix<C64>| DMatrix::from_fn(sup.len(), sup.len(), |i, j| m[(sup[i], sup[j])]);
            let prod = matmul(&sub(&a.op.matrix), &sub(&b.op.matrix));
            d = d.max(operator_norm(&(sub(&ab.op.matrix) - prod)));
        }
        out.push((step.k(), d));
    }
    Ok(out)
}

/// Norm of `pi_k(F)` restricted to its patches, for reference.
pub fn pi_norms(test: &TestFunction, cfg: &ReportConfig) -> Result<Vec<f64>> {
    check_config(cfg)?;
    let merge = cfg.merge_radius.unwrap_or(cfg.window / 2.0);
    steps(cfg)?
        .iter()
        .map(|s| {
            let f = gamma2_point(s.p());
            let grids = patches(&f, cfg.window, cfg.grid_n, merge)?;
            let ops: Result<Vec<_>> = grids.iter().map(|g| induced_kernel(test, &f, g)).collect();
            Ok(max_norm(ops?.into_iter()))
        })
        .collect()
}
