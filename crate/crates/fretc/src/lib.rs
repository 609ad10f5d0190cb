//! File formats, command-line interface and HTTP service for FRETISH
//! requirement projects, on top of `fretish-core`.

pub mod cli;
pub mod diagram;
pub mod formats;
pub mod parallel;
pub mod service;
pub mod store;
pub mod tree;
