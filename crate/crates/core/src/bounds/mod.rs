//! Effective bounds for `|nA + T|`: thresholds, obstruction divisors,
//! correction divisors and the per-theorem threshold report.

pub mod correction;
pub mod formulas;
pub mod obstructions;
pub mod thresholds;

pub use correction::*;
pub use formulas::*;
pub use obstructions::*;
pub use thresholds::*;
