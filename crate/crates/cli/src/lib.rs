//! File formats, reports and the randomized verification suite behind the
//! `qgraph` command.

pub mod graph_file;
pub mod json;
pub mod report;
pub mod verify;
