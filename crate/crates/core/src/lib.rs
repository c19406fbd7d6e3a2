//! Exact-arithmetic calculator for the effective behaviour of multiple linear
//! systems `|nA + T|` on algebraic surfaces presented by a finite
//! intersection-lattice model.
//!
//! Layers, bottom up:
//! - [`lattice`]: exact linear algebra on symmetric integer matrices;
//! - [`surface`]: the lattice model of a surface and its positivity tests;
//! - [`zariski`]: Zariski decompositions with a subset-search oracle;
//! - [`cycles`]: fundamental cycles of negative definite configurations;
//! - [`bounds`]: effective thresholds, obstruction divisors and correction divisors;
//! - [`io`]: surface files, divisor expressions, reports and the command line.

pub mod bounds;
pub mod cycles;
pub mod divisor;
pub mod error;
pub mod io;
pub mod lattice;
pub mod rational;
pub mod serde_exact;
pub mod surface;
pub mod zariski;

pub use divisor::DivisorClass;
pub use error::{Error, Result};
pub use lattice::{GramMatrix, Signature};
pub use rational::Rational;
pub use surface::{Curve, Positivity, SurfaceModel};
