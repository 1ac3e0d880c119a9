//! Magnitude homology of finite graphs.

pub mod abelian;
pub mod chain;
pub mod corpus;
pub mod dsl;
pub mod families;
pub mod graph;
pub mod homology;
pub mod linalg;
pub mod series;
pub mod verify;
