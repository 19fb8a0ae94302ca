//! Chart-based tensor calculus for Hermitian and Vaisman metrics on
//! suspensions of Sasaki-Einstein cones.

pub mod brieskorn;
pub mod calculus;
pub mod curvature;
pub mod error;
pub mod exterior;
pub mod flow;
pub mod ghlimit;
pub mod jet;
pub mod linalg;
pub mod models;
pub mod report;

pub use error::{Error, Result};
pub use exterior::{ComplexForm, Form, Metric, MetricAtPoint};
pub use jet::{Jet, Scalar};
pub use num_complex::Complex64;
