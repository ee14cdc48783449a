//! Harness around `bbm-core`: experiment configuration, file formats,
//! parallel replicate execution, and the acceptance suite.

pub mod acceptance;
pub mod config;
pub mod experiments;
pub mod output;
pub mod runner;
