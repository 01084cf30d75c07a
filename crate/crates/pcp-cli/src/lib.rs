//! Experiment harness behind the `pcp` binary: run records, bench specs,
//! table rendering, PGM export and solution verification.

pub mod check;
pub mod configs;
pub mod experiment;
pub mod pgm;
pub mod records;
pub mod tables;
