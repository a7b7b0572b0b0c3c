//! Exact linear algebra over GF(p) and Q: echelon forms and canonical
//! labelled subspaces.

mod combination;
pub mod echelon;
pub mod field;
mod subspace;

pub use combination::{FormalCombination, Multiplier};
pub use echelon::{rref, Echelon};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use subspace::{read_field_spec, LabeledSubspace};
