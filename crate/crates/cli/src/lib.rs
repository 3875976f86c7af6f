//! Command-line front end for `crqa-core`: CSV ingestion, subcommand
//! dispatch, JSON reports and recurrence-plot rasters.

pub mod commands;
pub mod error;
pub mod input;
pub mod render;
pub mod report;
