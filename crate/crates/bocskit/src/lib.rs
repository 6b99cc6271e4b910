//! Text and JSON formats for directed bocses, and the `bocskit` command
//! line built on [`bocs_core`].

pub mod cli;
pub mod format;
pub mod json;
