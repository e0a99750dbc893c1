//! Exact computation of Nakayama automorphisms for iterated Ore extensions.

pub mod scalars;
pub mod ncpoly;
pub mod ore;
pub mod cli;
pub mod report;
pub mod dsl;
pub mod linalg;
pub mod homology;
pub mod nakayama;
