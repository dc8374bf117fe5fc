//! Skeletal fusion categories, their module categories and two-object Morita contexts.

pub mod calculus;
pub mod error;
pub mod fusion;
pub mod graded;
pub mod instances;
pub mod modulecat;
pub mod morita;
pub mod numerics;
pub mod report;
pub mod runner;
pub mod schema;
pub mod skeleton;
pub mod structure;

pub use error::{Error, Result};

/// Gauge descriptor recorded in every report.
pub const GAUGE: &str = "coev=1, ev=1/F^{x x* x}_x[1,1]; lcoev=1, lev=1/(F^{x x* x}_x)^-1[1,1]; tree basis splitting, diagrammatic order";
