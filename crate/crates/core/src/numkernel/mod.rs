//! Dense symmetric linear algebra used by every certificate: a cyclic Jacobi
//! eigensolver, gap-audited rank decisions, null-space bases, the `Dw = e`
//! solve, and an exact rank over Q(√3).

mod eigen;
mod exact;
mod matrix;
mod quad;
mod rank;

pub use eigen::{sym_eigen, EigenDecomp};
pub use exact::exact_rank;
pub use matrix::{SymMatrix, TolerancePolicy};
pub use quad::QuadRational;
pub use rank::{
    numeric_rank, rank_of_magnitudes, rectangular_rank, singular_values, solve_e, RankDecision,
    SolveE,
};
