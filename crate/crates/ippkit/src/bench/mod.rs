//! Problem generators, problem and trace files, performance profiles, and the
//! experiment runner behind the command-line tool.

pub mod generators;
pub mod io;
pub mod profile;
pub mod rng;
pub mod runner;
