pub mod analysis;
pub mod concepts;
pub mod io;
pub mod microworld;
pub mod oracle;
pub mod questions;
pub mod realization;
pub mod sampler;
pub mod splits;
