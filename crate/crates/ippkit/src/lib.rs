//! First-order methods for convex composite optimization.
//!
//! The crate provides an accelerated composite gradient method with an explicit
//! lower model, a doubly accelerated restarted variant, inexact augmented
//! Lagrangian methods (plain and dual-accelerated) for linear constraints,
//! certificate checkers for inexact proximal point frameworks, and a small
//! benchmark harness with problem generators and performance profiles.

pub mod acg;
pub mod alm;
pub mod bench;
pub mod error;
pub mod falm;
pub mod frameworks;
pub mod linalg;
pub mod problem;
pub mod prox;
pub mod restarted_acg;
pub mod trace;

pub use error::{OptError, Result};
