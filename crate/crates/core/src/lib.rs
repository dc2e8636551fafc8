//! p-canonical bases of affine Hecke algebras and tilting multiplicities.

pub mod field;
pub mod hecke;
pub mod linalg;
pub mod poly;
pub mod root_datum;
pub mod soergel;
pub mod tilt;
pub mod weyl;
