//! Twisted cubic geometry over finite fields and the coset leader weight
//! enumerator of the [q+1, q-3, 5] generalized Reed-Solomon code.

pub mod classify;
pub mod cubic;
pub mod enumerator;
pub mod field;
pub mod geometry;
pub mod golden;
pub mod poly;
pub mod ratfun;

pub use field::{ExtField, Fe, Field, FieldElem, FieldError};
pub use geometry::{Line3, Plane3, Point1, Point3};
