//! Exact computation with valuations on rational function fields.
//!
//! The crate works over valued fields `K = F(t)` (with Puiseux exponents for
//! dense value groups) and their valuation rings `V`, together with
//! pseudovaluation domains `D = π⁻¹(F₀) ⊂ V`. On top of that it provides
//! minimum-valuation envelopes and local polynomials of polynomials in `x`,
//! value ideals, Skolem-closure membership on sample sets, certification of
//! integer-valuedness, and finite filter / characteristic-set machinery.

pub mod domains;
pub mod error;
pub mod io;
pub mod newton;
pub mod poly;
pub mod ratfunc;
pub mod report;
pub mod residue_field;
pub mod skolem;
pub mod spectra;
pub mod valgroup;
pub mod valued_field;

pub use error::{Error, Result};
pub use valgroup::{GroupDescriptor, GroupElement, Line, PlFunction, Valuation, Q};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
