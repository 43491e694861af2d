//! Polynomial group law, chart changes, and monomial diffs against a
//! reference law.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::bch::BchSeries;
use crate::lie::coadjoint::coadjoint_generic;
use crate::lie::poly::{Monomial, Poly};
use crate::lie::Algebra;
use crate::scalar::{parse_rational, Rational};

/// Printed multiplication law of N7 (reference only).
pub const N7_PRINTED_LAW: &str = include_str!("../../data/n7_printed_law.txt");
/// Printed coadjoint formula of N7 (reference only).
pub const N7_PRINTED_COADJOINT: &str = include_str!("../../data/n7_printed_coadjoint.txt");

/// One polynomial per output coordinate in `2 * dim` variables: the first
/// `dim` are the left argument, the rest the right argument.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialMap {
    dim: usize,
    polys: Vec<Poly>,
    names: (char, char),
}

impl PolynomialMap {
    pub fn new(dim: usize, polys: Vec<Poly>, names: (char, char)) -> Self {
        assert_eq!(polys.len(), dim);
        PolynomialMap { dim, polys, names }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn var_name(&self, i: usize) -> String {
        if i < self.dim {
            format!("{}{}", self.names.0, i + 1)
        } else {
            format!("{}{}", self.names.1, i - self.dim + 1)
        }
    }

    pub fn eval(&self, a: &[Rational], b: &[Rational]) -> Result<Vec<Rational>> {
        if a.len() != self.dim || b.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: a.len().min(b.len()) });
        }
        let vals: Vec<Rational> = a.iter().chain(b).cloned().collect();
        Ok(self.polys.iter().map(|p| p.eval_rational(&vals)).collect())
    }

    pub fn eval_f64(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let vals: Vec<f64> = a.iter().chain(b).copied().collect();
        self.polys.iter().map(|p| p.eval_f64(&vals)).collect()
    }

    /// Parses blocks headed `[zM]` with lines `coefficient monomial`, where a
    /// monomial is `1` or a `*`-product of `name^power` factors.
    pub fn parse(text: &str, dim: usize, names: (char, char)) -> Result<Self> {
        let mut polys = vec![Poly::default(); dim];
        let mut current: Option<usize> = None;
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: ln + 1, msg };
            if let Some(h) = line.strip_prefix("[z").and_then(|s| s.strip_suffix(']')) {
                let m: usize = h.parse().map_err(|_| perr(format!("bad header {line}")))?;
                if m == 0 || m > dim {
                    return Err(perr(format!("coordinate {m} out of range")));
                }
                current = Some(m - 1);
                continue;
            }
            let Some(m) = current else {
                return Err(perr("term before any [zM] header".into()));
            };
            let (c, mono) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| perr("expected `coefficient monomial`".into()))?;
            let c = parse_rational(c).ok_or_else(|| perr(format!("bad coefficient {c}")))?;
            let mut e = vec![0u32; 2 * dim];
            let mono = mono.trim();
            if mono != "1" {
                for factor in mono.split('*') {
                    let (var, pow) = match factor.split_once('^') {
                        Some((v, p)) => (v, p.parse().map_err(|_| perr(format!("bad power in {factor}")))?),
                        None => (factor, 1u32),
                    };
                    let mut ch = var.chars();
                    let head = ch.next().ok_or_else(|| perr("empty factor".into()))?;
                    let idx: usize = ch.as_str().parse().map_err(|_| perr(format!("bad variable {var}")))?;
                    if idx == 0 || idx > dim {
                        return Err(perr(format!("variable {var} out of range")));
                    }
                    let slot = if head == names.0 {
                        idx - 1
                    } else if head == names.1 {
                        dim + idx - 1
                    } else {
                        return Err(perr(format!("unknown variable {var}")));
                    };
                    e[slot] += pow;
                }
            }
            polys[m].add_term(Monomial::from_exponents(e), c);
        }
        Ok(PolynomialMap { dim, polys, names })
    }

    pub fn n7_printed_law() -> Self {
        Self::parse(N7_PRINTED_LAW, 7, ('x', 'y')).expect("bundled law parses")
    }

    pub fn n7_printed_coadjoint() -> Self {
        Self::parse(N7_PRINTED_COADJOINT, 7, ('x', 'f')).expect("bundled formula parses")
    }

    /// Monomial-by-monomial comparison; `self` is the derived side.
    pub fn diff(&self, reference: &PolynomialMap) -> LawDiff {
        let mut coords = Vec::new();
        for m in 0..self.dim {
            let d = self.polys[m].clone() - reference.polys[m].clone();
            let mut terms = Vec::new();
            for (mono, _) in d.terms() {
                terms.push(MonomialDiff {
                    monomial: mono.render(&|i| self.var_name(i)),
                    derived: self.polys[m].coefficient(mono).to_string(),
                    reference: reference.polys[m].coefficient(mono).to_string(),
                });
            }
            coords.push(CoordDiff { coord: m + 1, terms });
        }
        LawDiff { coords }
    }
}

impl fmt::Display for PolynomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, p) in self.polys.iter().enumerate() {
            writeln!(f, "z{} = {}", m + 1, p.render(&|i| self.var_name(i)))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialDiff {
    pub monomial: String,
    pub derived: String,
    pub reference: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoordDiff {
    pub coord: usize,
    pub terms: Vec<MonomialDiff>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawDiff {
    pub coords: Vec<CoordDiff>,
}

impl LawDiff {
    pub fn is_empty(&self) -> bool {
        self.coords.iter().all(|c| c.terms.is_empty())
    }

    pub fn count(&self) -> usize {
        self.coords.iter().map(|c| c.terms.len()).sum()
    }
}

impl fmt::Display for LawDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return writeln!(f, "no differences");
        }
        for c in &self.coords {
            for t in &c.terms {
                writeln!(
                    f,
                    "z{}: {:<14} derived {:>6}  reference {:>6}",
                    c.coord, t.monomial, t.derived, t.reference
                )?;
            }
        }
        Ok(())
    }
}

fn variables(dim: usize, offset: usize) -> Vec<Poly> {
    (0..dim).map(|i| Poly::var(offset + i)).collect()
}

/// Group law `log(exp x exp y)` as polynomials, exact.
pub fn derive_group_law(alg: &Algebra) -> PolynomialMap {
    let n = alg.dim();
    let series = BchSeries::new(alg.step());
    let polys = series.apply(alg, &variables(n, 0), &variables(n, n));
    PolynomialMap::new(n, polys, ('x', 'y'))
}

pub fn group_multiply(law: &PolynomialMap, g: &[Rational], h: &[Rational]) -> Result<Vec<Rational>> {
    law.eval(g, h)
}

/// In exponential coordinates the inverse is the negation.
pub fn group_inverse(g: &[Rational]) -> Vec<Rational> {
    g.iter().map(|x| -x.clone()).collect()
}

/// `Ad*(x) f` as polynomials in `(x, f)`.
pub fn derive_coadjoint(alg: &Algebra) -> PolynomialMap {
    let n = alg.dim();
    let polys = coadjoint_generic(alg, &variables(n, 0), &variables(n, n));
    PolynomialMap::new(n, polys, ('x', 'f'))
}

/// A chart `x -> exp(sum_{i in B1} x_i X_i) ... exp(sum_{i in Bk} x_i X_i)`
/// given by an ordered list of index blocks (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chart {
    pub blocks: Vec<Vec<usize>>,
}

impl Chart {
    pub fn first_kind(dim: usize) -> Self {
        Chart { blocks: vec![(0..dim).collect()] }
    }

    pub fn label(&self) -> String {
        self.blocks
            .iter()
            .map(|b| {
                let inner: Vec<String> = b.iter().map(|i| format!("x{}X{}", i + 1, i + 1)).collect();
                format!("exp({})", inner.join("+"))
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Chart coordinates to first-kind coordinates, with chart variables
    /// starting at `offset`.
    fn to_first_kind(&self, alg: &Algebra, series: &BchSeries, offset: usize) -> Vec<Poly> {
        let n = alg.dim();
        let mut acc = vec![Poly::zero(); n];
        for block in &self.blocks {
            let mut v = vec![Poly::zero(); n];
            for &i in block {
                v[i] = Poly::var(offset + i);
            }
            acc = series.apply(alg, &acc, &v);
        }
        acc
    }

    /// The group law written in this chart.
    pub fn law(&self, alg: &Algebra) -> PolynomialMap {
        let n = alg.dim();
        let series = BchSeries::new(alg.step());
        let phi_x = self.to_first_kind(alg, &series, 0);
        let phi_y = self.to_first_kind(alg, &series, n);
        let prod = series.apply(alg, &phi_x, &phi_y);
        // invert phi by fixed-point iteration; the nonlinear part raises the
        // filtration degree, so the iteration stabilises
        let phi_z = self.to_first_kind(alg, &series, 0);
        let z = variables(n, 0);
        let mut psi = z.clone();
        for _ in 0..4 * alg.step() + 4 {
            let at: Vec<Poly> = phi_z.iter().map(|p| p.compose(&psi)).collect();
            let next: Vec<Poly> = (0..n)
                .map(|i| z[i].clone() - (at[i].clone() - psi[i].clone()))
                .collect();
            if next == psi {
                break;
            }
            psi = next;
        }
        let polys = psi.iter().map(|p| p.compose(&prod)).collect();
        PolynomialMap::new(n, polys, ('x', 'y'))
    }

    /// `Ad*(g^sign) f` for `g` in this chart, as polynomials in `(x, f)`.
    pub fn coadjoint(&self, alg: &Algebra, inverse: bool) -> PolynomialMap {
        let n = alg.dim();
        let mut f = variables(n, n);
        let mut blocks: Vec<&Vec<usize>> = self.blocks.iter().collect();
        // Ad*(g1 g2 ... gk) = Ad*(g1) ... Ad*(gk): apply the last block first
        if !inverse {
            blocks.reverse();
        }
        for block in blocks {
            let mut v = vec![Poly::zero(); n];
            for &i in block {
                v[i] = if inverse { -Poly::var(i) } else { Poly::var(i) };
            }
            f = coadjoint_generic(alg, &v, &f);
        }
        PolynomialMap::new(n, f, ('x', 'f'))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartMatch {
    pub chart: String,
    pub differing_monomials: usize,
}

/// Candidate charts for identifying a printed law.
pub fn candidate_charts(dim: usize) -> Vec<Chart> {
    let all: Vec<usize> = (0..dim).collect();
    let mut out = vec![Chart::first_kind(dim)];
    if dim >= 3 {
        out.push(Chart { blocks: vec![vec![0], all[1..].to_vec()] });
        out.push(Chart { blocks: vec![all[1..].to_vec(), vec![0]] });
        out.push(Chart { blocks: vec![vec![0, 1], all[2..].to_vec()] });
        out.push(Chart { blocks: vec![all[2..].to_vec(), vec![0, 1]] });
    }
    out.push(Chart { blocks: all.iter().map(|&i| vec![i]).collect() });
    out.push(Chart { blocks: all.iter().rev().map(|&i| vec![i]).collect() });
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct LawComparison {
    pub derived_vs_reference: LawDiff,
    pub charts: Vec<ChartMatch>,
    pub best_chart: String,
    pub best_chart_diff: LawDiff,
}

/// Diffs the first-kind law against `reference` and ranks candidate charts
/// by how many monomials they leave unexplained.
pub fn compare_with_reference(alg: &Algebra, reference: &PolynomialMap) -> LawComparison {
    let derived = derive_group_law(alg);
    let derived_vs_reference = derived.diff(reference);
    let mut charts = Vec::new();
    let mut best: Option<(usize, String, LawDiff)> = None;
    for chart in candidate_charts(alg.dim()) {
        let d = chart.law(alg).diff(reference);
        let count = d.count();
        charts.push(ChartMatch { chart: chart.label(), differing_monomials: count });
        if best.as_ref().map_or(true, |b| count < b.0) {
            best = Some((count, chart.label(), d));
        }
    }
    let (_, best_chart, best_chart_diff) = best.expect("at least one chart");
    LawComparison { derived_vs_reference, charts, best_chart, best_chart_diff }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoadjointComparison {
    /// Reference against `Ad*(g) f` in first-kind coordinates.
    pub direct: LawDiff,
    /// Reference against `Ad*(g^-1) f`, i.e. `f o Ad(g)`.
    pub inverse_reading: LawDiff,
    pub best_chart: String,
    pub best_chart_inverse: bool,
    pub best_chart_diff: LawDiff,
}

pub fn compare_coadjoint(alg: &Algebra, reference: &PolynomialMap) -> CoadjointComparison {
    let direct = derive_coadjoint(alg).diff(reference);
    let inverse_reading = Chart::first_kind(alg.dim()).coadjoint(alg, true).diff(reference);
    let mut best: Option<(usize, String, bool, LawDiff)> = None;
    for chart in candidate_charts(alg.dim()) {
        for inverse in [false, true] {
            let d = chart.coadjoint(alg, inverse).diff(reference);
            let c = d.count();
            if best.as_ref().map_or(true, |b| c < b.0) {
                best = Some((c, chart.label(), inverse, d));
            }
        }
    }
    let (_, best_chart, best_chart_inverse, best_chart_diff) = best.unwrap();
    CoadjointComparison { direct, inverse_reading, best_chart, best_chart_inverse, best_chart_diff }
}

pub fn rational_zero_vector(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}
