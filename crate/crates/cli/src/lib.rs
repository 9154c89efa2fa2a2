//! Model files, reports and command dispatch for the `sieveforge` binary.

pub mod commands;
pub mod model;
pub mod report;

pub use commands::{run, Outcome};
pub use model::{parse_document, parse_model, serialize, ModelDocument, ModelError, Workspace};
