//! Set complexity of binary strings, Boolean-network trajectories, and
//! graphs, built on compression-based information estimates.
//!
//! The pipeline, bottom to top:
//!
//! 1. [`compression`] — deterministic DEFLATE-family backends turning a
//!    byte string's compressed size into a computable stand-in for its
//!    information content.
//! 2. [`bitstring`] — binary strings, their byte encodings, and the
//!    string-set file format.
//! 3. [`dist`] — the normalized compression distance (NCD), the
//!    calibration that maps its observable floor/ceiling onto `[0, 1]`,
//!    and pairwise distance matrices.
//! 4. [`measures`] — the set-complexity family over a string set: the
//!    plain information sum, the complexity-weighted average distance and
//!    mutual-information sums, and the kernel-weighted set complexity that
//!    vanishes for both all-identical and mutually-random sets.
//! 5. [`rbn`] — random Boolean networks and the bias sweep that locates
//!    the order/chaos transition by trajectory-set complexity.
//! 6. [`graph`] — the analogous entropy/mutual-information measures for
//!    undirected graphs, plus conjugation and a complexity-maximizing
//!    search.
//! 7. [`experiments`] — the reproducible noise / substitution / adjusted
//!    curves over string sets.
//!
//! Everything randomized is driven by explicit [`seed`]-derived ChaCha
//! streams; parallel runs (rayon) collect results in fixed order, so every
//! public operation is bit-reproducible for a given seed and thread-count
//! independent.

pub mod bitstring;
pub mod compression;
pub mod dist;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod measures;
pub mod rbn;
pub mod seed;

pub use error::{Error, Result};
