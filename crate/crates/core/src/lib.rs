//! Tracial gauge norms on matrix algebras: step-function calculus, s-numbers,
//! symmetric gauge norms, their duals, Ky Fan dominance and the extreme
//! points of the normalized unitarily invariant norms on `M_2(C)`.

pub mod dominance;
pub mod duality;
pub mod error;
pub mod extreme2;
pub mod harness;
pub mod linalg;
pub mod norms;
pub mod random;
pub mod rational;
pub mod stepfn;

pub use error::{Error, Result};
pub use linalg::{s_numbers, CMatrix, SNumbers, C64};
pub use norms::{norm_mat, norm_step, norm_vec, NormSpec};
pub use rational::{Param, Q};
pub use stepfn::{StepFn, WeightFn};
