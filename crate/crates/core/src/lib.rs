//! Quantale-valued metric toolkit.
//!
//! Value quantales with their way-above relation and residuation, finite
//! `V`-metric spaces and structures, a finite-scale engine for Galois types
//! with amalgamation, type distances and tameness, and the dual
//! presentation of partial metrics over finite frames as `Ω`-valued sets.

pub mod format;
pub mod galois;
pub mod harness;
pub mod partial;
pub mod quantale;
pub mod report;
pub mod sample;
pub mod structures;
pub mod vmetric;

pub use quantale::{Quantale, QuantaleError, Value};
pub use report::{Check, Report};
