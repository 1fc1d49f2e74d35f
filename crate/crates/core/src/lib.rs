//! Sorting a set under partial information given as a DAG.
//!
//! The sorter ([`posort::sort`]) extracts a longest path, then inserts the
//! remaining vertices in topological order, each by a finger search that
//! starts at its latest in-neighbour on the path. Oracle queries stay within
//! a constant factor of `log2 e(P_G)`, the information-theoretic minimum.
//!
//! [`extensions`] recomputes the quantities the query analysis relies on
//! (exact extension counts, the interval construction over the final order)
//! so every run can be checked exactly at small sizes.

pub mod baselines;
pub mod bench;
pub mod error;
pub mod extensions;
pub mod finger_tree;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod order_index;
pub mod posort;

pub use error::{Error, Result};
pub use graph::Dag;
pub use oracle::LinearOracle;
pub use posort::{sort, sort_under_partial_information, RunTrace, SortOutput, SourcePolicy};
