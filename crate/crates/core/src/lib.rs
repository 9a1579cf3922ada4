//! Exact computation of the Chern character and boundary-bulk map of global
//! matrix factorizations in a Čech model of the two-periodic `(Ω•, dw∧)`
//! complex.

pub mod cech;
pub mod chern;
pub mod corpus;
pub mod cover;
pub mod exactring;
pub mod forms;
pub mod homsolver;
pub mod linalg;
pub mod matrix;
pub mod mfcore;
pub mod parse;
pub mod problem;
pub mod selftest;

pub use exactring::{Coeff, LocalizedPoly, Monomial, Ring, RingError, RingMap};
pub use forms::{DiffForm, Wedge};
pub use matrix::{FormMatrix, Matrix, PolyMatrix};
pub use mfcore::{Connection, FrameChange, GradedMatrix, MatrixFactorization, Parity};
