//! Exact scalars, matrices, subspaces and filtrations over ℚ(i).

pub mod congruence;
pub mod flag;
pub mod matrix;
pub mod poly;
pub mod ratstr;
pub mod scalar;
pub mod subspace;

pub use flag::{rat, ratio, FlagFiltration};
pub use matrix::{Matrix, Vector};
pub use poly::{cyclotomic_exponents, DEFAULT_CYCLOTOMIC_BOUND};
pub use scalar::Scalar;
pub use subspace::{quotient_map, Quotient, Subspace};
