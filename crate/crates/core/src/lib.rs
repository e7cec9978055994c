//! Exact computation of local invariants of polynomial map-germs.
//!
//! Everything is exact: coefficients are rationals or rational functions in
//! one formal modulus, and all linear algebra is fraction-free elimination
//! over the integers or over `Z[λ]`.

pub mod atlas;
pub mod error;
pub(crate) mod linalg;
pub mod determinacy;
pub mod jetspace;
pub mod nicedim;
pub mod poly;
pub mod stability;
pub mod tangent;
pub mod triviality;

pub use determinacy::{CodimResult, DeterminacyCertificate};
pub use error::{Error, Result};
pub use jetspace::{JetBasis, Subspace, VectorFieldJet};
pub use poly::{parse_polynomial, Monomial, PolyError, Polynomial, RingSpec, Scalar, ZPoly};
pub use tangent::{GroupId, GroupKind, HilbertData, MapGerm};
