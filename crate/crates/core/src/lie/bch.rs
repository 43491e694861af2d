//! Baker-Campbell-Hausdorff product through Dynkin's formula.
//!
//! For a nilpotent algebra of step `s` every bracket of `s` or more letters
//! vanishes, so truncating at total degree `s` is exact.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lie::Algebra;
use crate::scalar::{factorial, int, Rational, Scalar};

/// Letters of a word: `false` is X, `true` is Y.
pub type Word = Vec<bool>;

/// Dynkin coefficients of right-nested bracket words up to a total degree.
#[derive(Clone, Debug)]
pub struct BchSeries {
    degree: usize,
    words: Vec<(Word, Rational)>,
}

impl BchSeries {
    pub fn new(degree: usize) -> Self {
        let mut acc: BTreeMap<Word, Rational> = BTreeMap::new();
        let mut blocks = Vec::new();
        enumerate(degree, 0, &mut blocks, &mut acc);
        let words = acc
            .into_iter()
            .filter(|(w, c)| !c.is_zero() && !trivially_zero(w))
            .collect();
        BchSeries { degree, words }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Nonzero `(word, coefficient)` pairs, with `[w]` right-nested.
    pub fn words(&self) -> &[(Word, Rational)] {
        &self.words
    }

    pub fn apply<T: Scalar>(&self, alg: &Algebra, x: &[T], y: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); alg.dim()];
        for (w, c) in &self.words {
            let b = nested(alg, w, x, y);
            for (o, v) in out.iter_mut().zip(b) {
                if !v.is_zero() {
                    *o = o.clone() + v.scale(c);
                }
            }
        }
        out
    }
}

fn trivially_zero(w: &Word) -> bool {
    w.len() >= 2 && w[w.len() - 1] == w[w.len() - 2]
}

fn nested<T: Scalar>(alg: &Algebra, w: &Word, x: &[T], y: &[T]) -> Vec<T> {
    let letter = |b: bool| if b { y } else { x };
    let mut acc = letter(*w.last().unwrap()).to_vec();
    for &l in w.iter().rev().skip(1) {
        acc = alg.bracket(letter(l), &acc);
        if acc.iter().all(Zero::is_zero) {
            break;
        }
    }
    acc
}

fn enumerate(
    degree: usize,
    used: usize,
    blocks: &mut Vec<(usize, usize)>,
    acc: &mut BTreeMap<Word, Rational>,
) {
    if !blocks.is_empty() {
        let n = blocks.len() as i64;
        let sign = if n % 2 == 1 { Rational::one() } else { -Rational::one() };
        let mut denom = int(n) * int(used as i64);
        let mut word = Vec::with_capacity(used);
        for &(r, s) in blocks.iter() {
            denom *= factorial(r) * factorial(s);
            word.extend(std::iter::repeat(false).take(r));
            word.extend(std::iter::repeat(true).take(s));
        }
        *acc.entry(word).or_insert_with(Rational::zero) += sign / denom;
    }
    for total in 1..=degree.saturating_sub(used) {
        for r in 0..=total {
            blocks.push((r, total - r));
            enumerate(degree, used + total, blocks, acc);
            blocks.pop();
        }
    }
}

/// `log(exp X exp Y)` in exact arithmetic, truncated at the nilpotency step.
pub fn bch_product(alg: &Algebra, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
    alg.check_len(x.len())?;
    alg.check_len(y.len())?;
    Ok(BchSeries::new(alg.step()).apply(alg, x, y))
}

/// Same as [`bch_product`] for any scalar type.
pub fn bch_generic<T: Scalar>(alg: &Algebra, x: &[T], y: &[T]) -> Result<Vec<T>> {
    if x.len() != alg.dim() || y.len() != alg.dim() {
        return Err(Error::DimensionMismatch { expected: alg.dim(), got: x.len().min(y.len()) });
    }
    Ok(BchSeries::new(alg.step()).apply(alg, x, y))
}
