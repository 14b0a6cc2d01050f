//! Exact local equations, equivariant Hilbert series and localization checks
//! for Hilbert schemes of points on affine space.

pub mod arith;
pub mod cli;
pub mod groebner;
pub mod haiman;
pub mod hilbert;
pub mod laurent;
pub mod locverify;
pub mod partitions;
pub mod poly;

/// Version stamp written into every JSON document.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
