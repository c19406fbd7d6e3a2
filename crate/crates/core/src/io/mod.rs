//! Surface files, divisor expressions, report documents and the command line.

pub mod cli;
pub mod expr;
pub mod fixtures;
pub mod report;
pub mod surface_file;

pub use cli::{load_surface, run, Outcome};
pub use expr::parse_divisor;
pub use report::{from_json, to_json, to_text, Report};
pub use surface_file::{parse_surface, parse_surface_str, render_surface};
