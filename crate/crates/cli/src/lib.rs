//! File formats, the seeded instance generator, and the command
//! implementations behind the `slatepath` binary.

pub mod commands;
pub mod format;
pub mod generator;
