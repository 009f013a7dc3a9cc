//! Command-line tools over CorefUD treebanks: loading release directories,
//! running the statistics and scorers of `corefud-core`, and writing
//! fixed-precision reports.

pub mod cli;
pub mod load;
pub mod pipeline;
pub mod render;

pub use corefud_core as core;
