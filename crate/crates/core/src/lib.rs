//! Q-systems in the C*-2-category of graded complex matrices, their splittings,
//! and the splitting construction for Q-systems in a functor 2-category.
//!
//! All indices are 0-based internally. Diagrams are read bottom to top, and a
//! composite 1-cell `Y ⊠ X` is written right to left: `X` is applied first.

#![no_std]
extern crate alloc;

pub mod diagram;
pub mod error;
pub mod funcat;
pub mod mathilb;
pub mod numeric;
pub mod qsystem;
pub mod random;
pub mod report;
pub mod splitting;

pub use error::{Error, Result};
pub use mathilb::{BlockTwoCell, GradedOneCell};
pub use numeric::{ComplexMatrix, Tolerance, C64};
pub use report::{Check, Report};
