//! Layer passing: box partitions, pinned functionals and the approximants
//! `sigma_k` for Gamma2 -> Gamma1, coherent frames for Gamma1 -> Gamma0,
//! and convergence reports.

pub mod boxes;
pub mod field;
pub mod frame;
pub mod report;
pub mod schedule;
pub mod sigma;

pub use boxes::{DegenerateBoxes, GenericBoxes, Pinned};
pub use field::{OperatorField, ProductField, RandomField, SymbolField, TestFunctionField, ZeroField};
pub use frame::{sigma_gamma0, sigma_gamma0_test, CoherentFrame};
pub use report::{multiplicativity_defect, ncdl_report, Case, Report, ReportConfig, Row};
pub use schedule::{schedule_degenerate, schedule_generic, DegenerateStep, GenericStep};
pub use sigma::{sigma_degenerate, sigma_generic, Piece, Sigma};
