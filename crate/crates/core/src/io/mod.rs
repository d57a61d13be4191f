//! Expressions, scene files, reports and subcommands.

pub mod commands;
pub mod expr;
pub mod scene;

pub use commands::{run_report, Command, Common, Construct, Outcome, Spectra, Suite};
pub use expr::{parse_expr, parse_list, split_list, Parsed};
pub use scene::{DomainSpec, SamplePolicy, Scene, SceneFile};
