//! Construction, verification, classification and enumeration of the
//! two-dimensional subalgebras of the Witt algebra and of the finite
//! dimensional subalgebras of the Virasoro algebra.

pub mod classify;
pub mod coeff;
pub mod error;
pub mod family;
pub mod laurent;
mod linalg;
pub mod roots;
pub mod solver;
pub mod virasoro;
pub mod witt;

pub use classify::{classify, closure_check, eigen_basis, roundtrip_check, SpanInput};
pub use coeff::{Backend, Coefficient};
pub use error::{Error, Result};
pub use family::{build_subalgebra, make_mu, MuSignature, RVector, SubalgebraDescriptor};
pub use laurent::LaurentPoly;
pub use solver::{closed_form, solve_numeric, SolutionSet, SolveOptions};
pub use virasoro::{vir_bracket, FiniteSubalgebraDescriptor, VirasoroElement};
pub use witt::{bracket, VectorField};
