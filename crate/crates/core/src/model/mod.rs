//! Domain objects: balanced rectangles over `N(t)` and block designs over
//! `N(v)`, with validation and the text formats.

mod design;
pub mod io;
mod rectangle;

pub use design::{all_blocks, full_lambda, pair_index, Block, DesignCandidate, PairViolation, PartialDesign};
pub use rectangle::{BalancedRectangle, PartialRectangle, RectViolation, SymbolMultiset};
