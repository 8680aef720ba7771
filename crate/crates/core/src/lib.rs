//! Exact computations around pseudo-Anosov mapping classes built from two
//! multitwists: the representation into `PSL(2, R)` and certified
//! dilatations, the genus-parametrized curve families and their
//! Perron-Frobenius data, closed-form dilatation and curve-complex bounds,
//! Johnson homomorphism cosets of bounding-pair maps, and exhaustive
//! searches over words in the two multitwists.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod families;
pub mod interval;
pub mod johnson;
pub mod quad;
pub mod search;
pub mod thurston;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
pub use interval::Interval;
pub use quad::QuadReal;
pub use word::{Letter, Word};
