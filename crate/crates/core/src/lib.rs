//! Combinatorial verification for right-angled Coxeter groups.
//!
//! The crate builds incidence graphs over finite fields, certifies the
//! `(n, m)`-branching condition with explicit cycle witnesses, grows round
//! trees inside Davis complexes, and triangulates surfaces that are
//! flag-no-square relative to an embedded graph.

pub mod bounds;
pub mod branching;
pub mod coxeter;
pub mod error;
pub mod ff;
pub mod geometries;
pub mod graph;
pub mod roundtree;
pub mod surface;

pub use error::{Error, Result};
