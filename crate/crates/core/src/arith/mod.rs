//! Exact arithmetic substrate.
pub mod cyclotomic;
pub mod factor;
pub mod field;
pub mod fixed;
pub mod fpmat;
pub mod fpoly;
pub mod matrix;
pub mod nf;
pub mod poly;
pub mod roots;
pub mod sturm;
pub mod symmetric;

pub use field::{ExtField, FieldCtx, FiniteFieldElem, PrimeField};
pub use poly::IntPoly;
pub use roots::{isolate_roots, BoxedRoot};
