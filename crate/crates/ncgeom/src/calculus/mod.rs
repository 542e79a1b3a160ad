//! The derivation-based calculus: the algebra `A`, its derivations, and the
//! bigraded form algebra with differential `dhat = d + d'`.

mod algebra;
mod derivation;
mod form;

pub use algebra::AlgElement;
pub use derivation::Derivation;
pub use form::{Calculus, NCForm};
