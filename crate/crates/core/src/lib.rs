pub mod surface_group;
pub mod free_tower;
pub mod braid_presentations;
pub mod k_group;
pub mod trace_monoid;
pub mod desing;
pub mod error;
pub mod oracles;
pub mod suite;

pub use error::Error;
