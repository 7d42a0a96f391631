//! Fractional repetition codes: construction, exact capacity analysis,
//! batch retrieval, and a simulated storage system built on them.

pub mod analyze;
pub mod batch;
pub mod bits;
pub mod construct;
pub mod dress;
pub mod error;
pub mod galois;
pub mod incidence;

pub use error::{Error, Result};
pub use incidence::{FrCode, Graph, TransversalDesign};
