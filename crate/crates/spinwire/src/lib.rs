//! Command-line front end, run configuration, reports and state files for
//! [`spinwire_core`].

pub mod cli;
pub mod commands;
pub mod config;
pub mod state_io;
