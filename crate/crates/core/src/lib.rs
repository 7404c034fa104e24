//! Exact F2 analysis of high-dimensional expansion for finite pure simplicial
//! complexes: weighted norms, links, cohomology, cosystoles, coboundary and
//! cocycle expansion, local minimization, fat-face bookkeeping, and spectral
//! skeleton-mixing certificates.

pub mod cochain;
pub mod complex;
pub mod criterion;
pub mod error;
pub(crate) mod f2;
pub mod cohomology;
pub mod fat;
pub mod generators;
pub mod io;
pub mod minimize;
pub mod spectral;
pub mod rational;

pub use cochain::Cochain;
pub use complex::{Complex, Face, Link, VertexId};
pub use error::{HdxError, Result};
pub use rational::{Extended, Rat};

/// Default enumeration cap: refuse brute-force searches beyond `2^24` elements.
pub const DEFAULT_CAP: u64 = 1 << 24;
