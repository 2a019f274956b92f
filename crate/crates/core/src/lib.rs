//! Computational toolkit for coarse geometry of desk-scale groups.
//!
//! Everything is exact: distances are [`Rational`]s (or infinite for pairs a
//! truncated search could not connect), and every inequality is checked by
//! exact comparison.
//!
//! - [`group`]: permutation and lattice models, set products, word balls,
//!   subgroup closure and coset partitions.
//! - [`metrics`]: word metrics, Birkhoff–Kakutani chain metrics from
//!   filtrations, rectified metrics `d̂_S`, meets and sums.
//! - [`actions`]: isometric actions on finite metric spaces, Macbeath
//!   generating sets and the Milnor–Schwarz word-length bound.
//! - [`graphs`]: coset graphs `G/V` with `VSV` adjacency and weighted coset
//!   ray trees.
//! - [`qi`]: coarse Lipschitz and quasi-isometry constant fitting, domination
//!   and coarse-boundedness certificates.
//! - [`pipeline`]: the end-to-end resolution of an action into word metric,
//!   rectified metric and coset graph.

pub mod actions;
pub mod distance;
pub mod error;
pub mod graphs;
pub mod group;
pub mod metrics;
pub mod paths;
pub mod pipeline;
pub mod qi;

pub use distance::{Distance, Rational};
pub use error::{Error, Result};
pub use group::{Element, ElementSet, GroupModel};
pub use metrics::PseudoMetric;
