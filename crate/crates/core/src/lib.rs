//! Grassmann algebras, supermatrices and superqubit states.
//!
//! The crate is layered bottom-up: [`grassmann`] supplies supernumbers,
//! [`supermatrix`] graded matrices over them, [`uosp`] the superalgebra and
//! its group elements, [`superstate`] states and probabilities, and [`chsh`]
//! the nonlocal game and its optimizer.

pub mod chsh;
pub mod error;
pub mod grassmann;
pub mod sample;
pub mod superstate;
pub mod supermatrix;
pub mod uosp;
pub mod verify;

pub use error::{Error, Result};
pub use grassmann::{Complex, Generator, Parity, Supernumber};
pub use supermatrix::{MatrixParity, Supermatrix};
