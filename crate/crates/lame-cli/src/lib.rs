//! Library surface of the command-line tool: experiment drivers and CSV
//! formatting, exposed so integration tests can drive the sweeps directly.

pub mod csvout;
pub mod experiments;
