//! Discretized induced representations of N7.

pub mod export;
pub mod grid;
pub mod kernel;
pub mod norm;
pub mod testfn;

pub use grid::Grid;
pub use kernel::{
    character_transform, boundary_mass, induced_kernel, induced_kernel_symbol, kernel_block, kernel_block_at, kernel_centers, partial_fourier,
    pi0_sup_norm, symbol_block_at, DiscretizedOperator,
};
pub use norm::{operator_norm, power_norm};
pub use testfn::{act, Atom, Convolution, Factor, Symbol, Term, TestFunction, C64};
