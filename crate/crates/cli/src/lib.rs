//! IO, configuration and command dispatch for the hesseig binary.

// NaN-rejecting comparisons in config validation are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::manual_is_multiple_of)]

pub mod config;
pub mod report;
pub mod runner;
pub mod snapshot;
