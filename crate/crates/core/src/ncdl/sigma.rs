//! The approximants `sigma_k(phi) = sum_j M_V phi(l_j) M_U` on a grid.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ncdl::boxes::{DegenerateBoxes, GenericBoxes, Pinned};
use crate::ncdl::field::OperatorField;
use crate::ncdl::schedule::{DegenerateStep, GenericStep};
use crate::reps::grid::Grid;
use crate::reps::kernel::{boundary_mass, DiscretizedOperator};

/// Level of the boxes `U` in the sum; `V` uses `M_LEVEL + 1`.
pub const M_LEVEL: usize = 1;
/// Relative kernel mass on the window boundary above which a localized
/// field is reported as not captured by the grid.
pub const WINDOW_TOL: f64 = 1e-6;

/// One summand: the pinned data and the grid indices of `U` and `V`.
#[derive(Clone, Debug, Serialize)]
pub struct Piece {
    pub pinned: Pinned,
    pub u: Vec<usize>,
    pub v: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Sigma {
    pub op: DiscretizedOperator,
    pub pieces: Vec<Piece>,
}

impl Sigma {
    /// `max_j ||phi(l_j)||` over the limit points used.
    pub fn sup_field_norm(&self, field: &dyn OperatorField) -> f64 {
        self.pieces
            .iter()
            .map(|pc| field.norm_at(&pc.pinned.limit, &self.op.grid))
            .fold(0.0, f64::max)
    }
}

fn indices(grid: &Grid, pred: impl Fn([f64; 2]) -> bool) -> Vec<usize> {
    grid.points2().iter().enumerate().filter(|(_, x)| pred(**x)).map(|(i, _)| i).collect()
}

/// Pieces of the generic sum with `|j| eps` in `[tau, 1/tau]` (`tau = 0`
/// keeps every box that meets the grid).
pub fn generic_pieces(step: &GenericStep, grid: &Grid, tau: f64) -> Vec<Piece> {
    let boxes = GenericBoxes::new(step);
    let js: BTreeSet<i64> = grid.points2().iter().map(|&x| boxes.slab(x)).filter(|&j| j != 0).collect();
    js.into_iter()
        .filter(|&j| {
            let a = boxes.f5j(j).abs();
            tau <= 0.0 || (a >= tau && a <= 1.0 / tau)
        })
        .filter_map(|j| {
            let u = indices(grid, |x| boxes.in_u(j, M_LEVEL, x));
            if u.is_empty() {
                return None;
            }
            let v = indices(grid, |x| boxes.in_v(j, M_LEVEL + 1, x));
            Some(Piece { pinned: boxes.pinned(j), u, v })
        })
        .collect()
}

/// Pieces of the degenerate sum: families 5 and 6 by bin, then family 4.
pub fn degenerate_pieces(step: &DegenerateStep, grid: &Grid) -> Vec<Piece> {
    let boxes = DegenerateBoxes::new(step);
    let pts = grid.points2();
    let mut out = Vec::new();
    for family in [5u8, 6, 4] {
        let bins: BTreeSet<(i64, i64)> = pts
            .iter()
            .filter(|&&x| boxes.family(M_LEVEL, x) == Some(family))
            .map(|&x| boxes.bin(family, x))
            .filter(|b| family == 4 || b.0 != 0)
            .collect();
        for b in bins {
            let u = indices(grid, |x| boxes.in_u(family, b, M_LEVEL, x));
            if u.is_empty() {
                continue;
            }
            let v = indices(grid, |x| boxes.in_v(family, b, M_LEVEL + 1, x));
            out.push(Piece { pinned: boxes.pinned(family, b), u, v });
        }
    }
    out
}

/// `sum_j M_V phi(l_j) M_U`; blocks are evaluated in parallel.
pub fn assemble(field: &dyn OperatorField, pieces: &[Piece], grid: &Grid) -> DiscretizedOperator {
    let blocks: Vec<_> = pieces
        .par_iter()
        .map(|pc| field.block(&pc.pinned.limit, grid, &pc.v, &pc.u))
        .collect();
    let mut op = DiscretizedOperator::zeros(grid);
    for (pc, b) in pieces.iter().zip(blocks) {
        for (c, &j) in pc.u.iter().enumerate() {
            for (r, &i) in pc.v.iter().enumerate() {
                op.matrix[(i, j)] += b[(r, c)];
            }
        }
    }
    op
}

fn finish(field: &dyn OperatorField, pieces: Vec<Piece>, grid: &Grid) -> Result<Sigma> {
    let op = assemble(field, &pieces, grid);
    if field.localized() {
        let m = boundary_mass(&op);
        if m > WINDOW_TOL {
            return Err(Error::GridTooSmall(format!(
                "relative boundary mass {m:.3e} of the assembled operator exceeds {WINDOW_TOL:e}"
            )));
        }
    }
    Ok(Sigma { op, pieces })
}

pub fn sigma_generic(field: &dyn OperatorField, step: &GenericStep, grid: &Grid, tau: f64) -> Result<Sigma> {
    finish(field, generic_pieces(step, grid, tau), grid)
}

pub fn sigma_degenerate(field: &dyn OperatorField, step: &DegenerateStep, grid: &Grid) -> Result<Sigma> {
    finish(field, degenerate_pieces(step, grid), grid)
}
