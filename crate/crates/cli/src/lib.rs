//! Library side of the `hforms` command-line tool.

pub mod app;
pub mod corpus;
