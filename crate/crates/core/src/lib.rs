//! Arithmetic of abelian number fields, towers and the obstructions to
//! normal integral bases.

pub mod arith;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod galois_algebra;
pub mod group;
pub mod obstruction;
pub mod polymod;
pub mod resolvent;
pub mod smith;
pub mod spec;
pub mod stickelberger;
pub mod tower;
pub mod units;

pub use error::{Error, Result};
pub use group::{AbelianGroup, AbelianGroupStructure, ElementSet, Subgroup};
pub use cyclotomic::{CycInt, PrimeAbove};
pub use field::{AbelianField, DirichletCharacter};
pub use galois_algebra::GExtension;
pub use obstruction::{Status, Verdict, Witness};
pub use resolvent::ResolventReport;
pub use tower::Tower;
