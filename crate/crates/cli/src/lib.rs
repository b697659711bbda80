//! Batch driver: JSON jobs in, JSON reports out.

pub mod commands;
pub mod job;
pub mod run;

pub use job::{Checks, GrowthCheck, JobSpec, SetSpec};
pub use run::{run, JobReport, TimedReport};
