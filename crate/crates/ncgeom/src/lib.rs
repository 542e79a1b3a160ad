//! Exact computational engine for the derivation-based noncommutative
//! differential calculus on `C^inf(T^d) (x) M_n(C)`: connections, curvature,
//! gauge transformations, Higgs decomposition, and a Yang-Mills-Higgs
//! action minimizer.

pub mod calculus;
pub mod connect;
pub mod error;
pub mod fourier;
pub mod matgeo;
pub mod sampling;
pub mod verify;
pub mod ymh;

pub use calculus::{AlgElement, Calculus, Derivation, NCForm};
pub use error::{NcError, Result};
pub use fourier::TrigPoly;
pub use matgeo::{Matrix, SlBasis};
