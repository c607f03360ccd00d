//! Defining sets of full balanced Latin rectangles `F_{m,n,t}` and full
//! designs `F(v,k)`.
//!
//! The crate has four layers:
//!
//! * [`model`]: rectangles, blocks and designs with validation and text I/O.
//! * [`graph`]: even closed trails and their alternating edge partition.
//! * [`rect_analysis`] / [`design_analysis`]: swap certificates proving that
//!   a partial object is not a defining set, plus the lower-bound formulas.
//! * [`oracle`] / [`search`]: exhaustive completion counting, greedy
//!   minimisation, comparison tables and the bound falsification monitor.

pub mod design_analysis;
pub mod error;
pub mod graph;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod par;
pub mod rect_analysis;
pub mod search;

pub use error::{AnalysisError, ModelError, ParseError};
