pub mod cli;
pub mod cz;
pub mod family;
pub mod invariants;
pub mod local_algebra;
pub mod mclean;
pub mod poly;
pub mod resolution;
