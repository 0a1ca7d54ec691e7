//! Cup products on F2 cochain complexes and the copy-cup logical gates they
//! give on CSS codes.

pub mod complexes;
pub mod css;
pub mod f2linalg;
pub mod orientation;
pub mod group;
pub mod products;
pub mod constructions;
pub mod gates;
pub mod cli;
