//! Uniform random plane trees with a given degree sequence, their profiles,
//! discrete and continuous path transformations, and desk-scale convergence
//! experiments against exchangeable-increment scaling limits.
//!
//! The crate is organized around six modules:
//!
//! * [`degseq`] — degree sequences, child sequences, offspring laws and the
//!   example families (k-ary, restricted, power-law hubs, hub-augmented,
//!   conditioned Galton-Watson).
//! * [`tree`] — plane trees encoded as depth-first child-count arrays,
//!   depth/breadth-first walks, profiles and subtree band statistics.
//! * [`transforms`] — discrete path transformations: Vervaat, the 213
//!   tree/walk transformation, excursion permutation below the running
//!   maximum, and the future-minimum reversal.
//! * [`sampler`] — exact uniform sampling of trees with a given degree
//!   sequence plus an exhaustive enumeration oracle for small sizes.
//! * [`eipath`] — grid simulation of exchangeable-increment bridges, the
//!   continuous Vervaat and Lamperti transformations, hitting times, singular
//!   quadrature of 1/f, and boundedness criteria.
//! * [`experiments`] — end-to-end convergence and invariance experiments with
//!   JSON/CSV reporting.
//!
//! Monte Carlo batches are data-parallel (rayon) when the default `parallel`
//! feature is enabled; every batch is reproducible from a master seed and
//! yields byte-identical results regardless of thread count.

pub mod degseq;
pub mod eipath;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod io;
pub mod sampler;
pub mod stats;
pub mod transforms;
pub mod tree;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
