//! Structure constants, validation, and the exact bracket.

pub mod bch;
pub mod coadjoint;
pub mod law;
pub mod linalg;
pub mod poly;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Rational, Scalar};
use linalg::Subspace;

pub use bch::bch_product;
pub use coadjoint::{coadjoint, coadjoint_f64};
pub use law::{derive_group_law, group_inverse, group_multiply, PolynomialMap};

/// Bundled table for the 7-dimensional algebra n7.
pub const N7_TABLE: &str = include_str!("../../data/n7.sc");

/// Structure constants `[X_i, X_j] = sum_m c_ij^m X_m` with 0-based indices.
///
/// The dense tensor is fully antisymmetric after construction; entries given
/// only for one ordering of a pair are mirrored.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    dim: usize,
    c: Vec<Vec<Vec<Rational>>>,
    entries: Vec<(usize, usize, usize, Rational)>,
    asymmetric: Vec<(usize, usize, usize)>,
}

impl StructureConstants {
    /// Builds from raw entries `(i, j, m, c)`, 0-based. Pairs listed in both
    /// orders are kept as given, so inconsistent tables can be reported by
    /// [`validate_algebra`].
    pub fn from_entries(dim: usize, raw: &[(usize, usize, usize, Rational)]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dim must be at least 1".into()));
        }
        let mut given: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
        for (i, j, m, v) in raw {
            for &k in [i, j, m] {
                if k >= dim {
                    return Err(Error::DimensionMismatch { expected: dim, got: k + 1 });
                }
            }
            *given.entry((*i, *j, *m)).or_insert_with(Rational::zero) += v;
        }
        let mut c = vec![vec![vec![Rational::zero(); dim]; dim]; dim];
        let mut asymmetric = Vec::new();
        for (&(i, j, m), v) in &given {
            if i == j {
                if !v.is_zero() {
                    asymmetric.push((i, j, m));
                }
                continue;
            }
            c[i][j][m] = v.clone();
            match given.get(&(j, i, m)) {
                Some(w) => {
                    if &-w.clone() != v && i < j {
                        asymmetric.push((i, j, m));
                    }
                }
                None => c[j][i][m] = -v.clone(),
            }
        }
        let mut entries = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                for m in 0..dim {
                    if !c[i][j][m].is_zero() {
                        entries.push((i, j, m, c[i][j][m].clone()));
                    }
                }
            }
        }
        Ok(StructureConstants { dim, c, entries, asymmetric })
    }

    /// Parses lines `i j m num/den` (1-based indices). `#` starts a comment.
    /// An optional `dim N` line fixes the dimension; otherwise the largest
    /// index present is used.
    pub fn parse(text: &str) -> Result<Self> {
        let mut dim: Option<usize> = None;
        let mut raw = Vec::new();
        let mut max_index = 0;
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let perr = |msg: &str| Error::Parse { line: ln + 1, msg: msg.to_string() };
            if toks[0] == "dim" {
                if toks.len() != 2 {
                    return Err(perr("expected `dim N`"));
                }
                dim = Some(toks[1].parse().map_err(|_| perr("bad dimension"))?);
                continue;
            }
            if toks.len() != 4 {
                return Err(perr("expected `i j m coefficient`"));
            }
            let mut idx = [0usize; 3];
            for k in 0..3 {
                let v: usize = toks[k].parse().map_err(|_| perr("bad index"))?;
                if v == 0 {
                    return Err(perr("indices are 1-based"));
                }
                idx[k] = v - 1;
                max_index = max_index.max(v);
            }
            let coef = parse_rational(toks[3]).ok_or_else(|| perr("bad coefficient"))?;
            raw.push((idx[0], idx[1], idx[2], coef));
        }
        let dim = dim.unwrap_or(max_index);
        if max_index > dim {
            return Err(Error::DimensionMismatch { expected: dim, got: max_index });
        }
        Self::from_entries(dim, &raw)
    }

    pub fn n7() -> Self {
        Self::parse(N7_TABLE).expect("bundled table parses")
    }

    pub fn abelian(dim: usize) -> Self {
        Self::from_entries(dim, &[]).expect("dim >= 1")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coefficient(&self, i: usize, j: usize, m: usize) -> &Rational {
        &self.c[i][j][m]
    }

    /// Nonzero `(i, j, m, c_ij^m)` over ordered pairs.
    pub fn entries(&self) -> &[(usize, usize, usize, Rational)] {
        &self.entries
    }

    pub fn bracket<T: Scalar>(&self, a: &[T], b: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim];
        for (i, j, m, c) in &self.entries {
            if a[*i].is_zero() || b[*j].is_zero() {
                continue;
            }
            let t = (a[*i].clone() * b[*j].clone()).scale(c);
            out[*m] = out[*m].clone() + t;
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = num_traits::One::one();
        v
    }

    /// Lower central series `C^1 = n, C^{s+1} = [n, C^s]`, ending with `{0}`.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let n = self.dim;
        let mut series = vec![Subspace::coordinate(n, &(0..n).collect::<Vec<_>>())];
        loop {
            let last = series.last().unwrap();
            if last.dim() == 0 {
                break;
            }
            let mut vs = Vec::new();
            for i in 0..n {
                let x = self.basis_vector(i);
                for v in last.basis() {
                    vs.push(self.bracket(&x, v));
                }
            }
            let next = Subspace::span(n, &vs);
            if next.dim() == last.dim() {
                // not nilpotent: the series stabilises at a nonzero term
                series.push(next);
                break;
            }
            series.push(next);
        }
        series
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub dim: usize,
    pub antisymmetric: bool,
    /// 1-based `(i, j, m)` entries where `c_ji^m != -c_ij^m`.
    pub antisymmetry_violations: Vec<(usize, usize, usize)>,
    pub jacobi: bool,
    /// 1-based triples `i < j < k` whose cyclic sum is nonzero.
    pub jacobi_violations: Vec<(usize, usize, usize)>,
    /// Smallest `s` with `C^s = 0`, counting `C^1 = n`. `None` if not nilpotent.
    pub nilpotency_step: Option<usize>,
    pub series_dims: Vec<usize>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.antisymmetric && self.jacobi && self.nilpotency_step.is_some()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim {}", self.dim)?;
        writeln!(f, "antisymmetry {}", if self.antisymmetric { "ok" } else { "FAILED" })?;
        for (i, j, m) in &self.antisymmetry_violations {
            writeln!(f, "  c[{i},{j}]^{m} != -c[{j},{i}]^{m}")?;
        }
        writeln!(f, "jacobi {}", if self.jacobi { "ok" } else { "FAILED" })?;
        for (i, j, k) in &self.jacobi_violations {
            writeln!(f, "  triple ({i},{j},{k})")?;
        }
        match self.nilpotency_step {
            Some(s) => writeln!(f, "nilpotency step {s}")?,
            None => writeln!(f, "not nilpotent")?,
        }
        write!(f, "lower central series dims {:?}", self.series_dims)
    }
}

pub fn validate_algebra(sc: &StructureConstants) -> ValidationReport {
    let n = sc.dim;
    let antisymmetry_violations: Vec<_> =
        sc.asymmetric.iter().map(|&(i, j, m)| (i + 1, j + 1, m + 1)).collect();
    let mut jacobi_violations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (xi, xj, xk) = (sc.basis_vector(i), sc.basis_vector(j), sc.basis_vector(k));
                let a = sc.bracket(&xi, &sc.bracket(&xj, &xk));
                let b = sc.bracket(&xj, &sc.bracket(&xk, &xi));
                let c = sc.bracket(&xk, &sc.bracket(&xi, &xj));
                if (0..n).any(|m| !(&a[m] + &b[m] + &c[m]).is_zero()) {
                    jacobi_violations.push((i + 1, j + 1, k + 1));
                }
            }
        }
    }
    let series = sc.lower_central_series();
    let nilpotent = series.last().map_or(false, |s| s.dim() == 0);
    ValidationReport {
        dim: n,
        antisymmetric: antisymmetry_violations.is_empty(),
        antisymmetry_violations,
        jacobi: jacobi_violations.is_empty(),
        jacobi_violations,
        nilpotency_step: nilpotent.then(|| series.len()),
        series_dims: series.iter().map(Subspace::dim).collect(),
    }
}

/// A structure-constant table that passed validation, with its step cached.
#[derive(Clone, Debug)]
pub struct Algebra {
    sc: StructureConstants,
    step: usize,
}

impl Algebra {
    pub fn new(sc: StructureConstants) -> Result<Self> {
        let report = validate_algebra(&sc);
        if !report.ok() {
            return Err(Error::InvalidAlgebra(report.to_string().replace('\n', "; ")));
        }
        let step = report.nilpotency_step.unwrap();
        Ok(Algebra { sc, step })
    }

    pub fn n7() -> Self {
        Self::new(StructureConstants::n7()).expect("n7 is a nilpotent Lie algebra")
    }

    pub fn sc(&self) -> &StructureConstants {
        &self.sc
    }

    pub fn dim(&self) -> usize {
        self.sc.dim
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn bracket<T: Scalar>(&self, a: &[T], b: &[T]) -> Vec<T> {
        self.sc.bracket(a, b)
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: len });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn n7_table_has_the_six_brackets() {
        let sc = StructureConstants::n7();
        assert_eq!(sc.dim(), 7);
        let pairs: Vec<_> = sc
            .entries()
            .iter()
            .filter(|(i, j, _, _)| i < j)
            .map(|(i, j, m, c)| (i + 1, j + 1, m + 1, c.clone()))
            .collect();
        assert_eq!(
            pairs,
            vec![
                (1, 3, 5, int(1)),
                (1, 4, 6, int(1)),
                (1, 5, 7, int(1)),
                (2, 3, 6, int(-1)),
                (2, 4, 5, int(1)),
                (2, 6, 7, int(1)),
            ]
        );
    }

    #[test]
    fn abelian_step_two() {
        let r = validate_algebra(&StructureConstants::abelian(3));
        assert!(r.ok());
        assert_eq!(r.nilpotency_step, Some(2));
    }

    #[test]
    fn inconsistent_orientations_are_reported() {
        let sc = StructureConstants::parse("1 2 3 1\n2 1 3 1\n").unwrap();
        let r = validate_algebra(&sc);
        assert!(!r.antisymmetric);
        assert_eq!(r.antisymmetry_violations, vec![(1, 2, 3)]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = StructureConstants::parse("# c\n1 2 x 1\n").unwrap_err();
        assert_eq!(e, Error::Parse { line: 2, msg: "bad index".into() });
    }
}
