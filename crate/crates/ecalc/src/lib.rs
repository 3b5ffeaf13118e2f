//! Command-line companion to `ecalc-core`: JSON documents, the example
//! gallery, the S⁴ atlas and verification reports.

pub mod commands;
pub mod gallery;
pub mod io;
pub mod report;
pub mod s4;
