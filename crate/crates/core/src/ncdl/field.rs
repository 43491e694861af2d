//! Operator fields over the limit set, evaluated on grid blocks.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::reps::grid::Grid;
use crate::reps::kernel::{kernel_block_at, matmul, symbol_block_at};
use crate::reps::norm::operator_norm;
use crate::reps::testfn::{Symbol, TestFunction, C64};

/// `l -> phi(l)` with `l` given by its restriction to `p*`.
pub trait OperatorField: Sync {
    /// Rows `rows`, columns `cols` of `phi(l)` on `grid`, weights folded.
    fn block(&self, p: &[f64; 5], grid: &Grid, rows: &[usize], cols: &[usize]) -> DMatrix<C64>;

    /// Whether the field decays inside the window, so that boundary mass
    /// signals a window that is too small.
    fn localized(&self) -> bool {
        false
    }

    fn full(&self, p: &[f64; 5], grid: &Grid) -> DMatrix<C64> {
        let all: Vec<usize> = (0..grid.len()).collect();
        self.block(p, grid, &all, &all)
    }

    fn norm_at(&self, p: &[f64; 5], grid: &Grid) -> f64 {
        operator_norm(&self.full(p, grid))
    }
}

/// `l -> pi_l(F)`.
pub struct TestFunctionField<'a>(pub &'a TestFunction);

impl OperatorField for TestFunctionField<'_> {
    fn block(&self, p: &[f64; 5], grid: &Grid, rows: &[usize], cols: &[usize]) -> DMatrix<C64> {
        kernel_block_at(self.0, p, grid, rows, cols)
    }

    fn localized(&self) -> bool {
        true
    }
}

/// `l -> pi_l(S)` for a symbol given only through its partial transform.
pub struct SymbolField<'a, S: Symbol + ?Sized>(pub &'a S);

impl<S: Symbol + ?Sized> OperatorField for SymbolField<'_, S> {
    fn block(&self, p: &[f64; 5], grid: &Grid, rows: &[usize], cols: &[usize]) -> DMatrix<C64> {
        symbol_block_at(self.0, p, grid, rows, cols)
    }

    fn localized(&self) -> bool {
        true
    }
}

/// Pointwise product `l -> phi(l) psi(l)` as a grid product.
pub struct ProductField<'a> {
    pub left: &'a dyn OperatorField,
    pub right: &'a dyn OperatorField,
}

impl OperatorField for ProductField<'_> {
    fn block(&self, p: &[f64; 5], grid: &Grid, rows: &[usize], cols: &[usize]) -> DMatrix<C64> {
        let all: Vec<usize> = (0..grid.len()).collect();
        matmul(&self.left.block(p, grid, rows, &all), &self.right.block(p, grid, &all, cols))
    }

    fn localized(&self) -> bool {
        self.left.localized() && self.right.localized()
    }
}

pub struct ZeroField;

impl OperatorField for ZeroField {
    fn block(&self, _p: &[f64; 5], _grid: &Grid, rows: &[usize], cols: &[usize]) -> DMatrix<C64> {
        DMatrix::zeros(rows.len(), cols.len())
    }
}

/// A field of dense random operators of norm one. The value at `l` is
/// seeded by the bits of `l`, so equal points give equal operators.
pub struct RandomField {
    pub seed: u64,
}

impl RandomField {
    pub fn matrix(&self, p: &[f64; 5], n: usize) -> DMatrix<C64> {
        let mut s = self.seed;
        for v in p {
            s = s.rotate_left(13) ^ v.to_bits().wrapping_mul(0x9e37_79b9_7f4a_7c15);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let m = DMatrix::from_fn(n, n, |_, _| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        let nm = operator_norm(&m);
        m / C64::new(nm, 0.0)
    }
}

impl OperatorField for RandomField {
    fn block(&self, p: &[f64; 5], grid: &Grid, rows: &[usize], cols: &[usize]) -> DMatrix<C64> {
        let m = self.matrix(p, grid.len());
        DMatrix::from_fn(rows.len(), cols.len(), |r, c| m[(rows[r], cols[c])])
    }
}
