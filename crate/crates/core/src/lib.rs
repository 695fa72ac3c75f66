//! Per-class blocking probabilities of a k-server loss system with
//! preemptive priority classes.
//!
//! Three independent engines produce a [`BlockingReport`]:
//!
//! * [`analytic`] evaluates the closed-form lost-traffic formulas built on
//!   the Erlang B function in [`erlang`].
//! * [`ctmc`] enumerates the multidimensional Markov chain, solves its global
//!   balance equations and reads the blocking probabilities off the
//!   stationary distribution.
//! * [`sim`] runs a discrete-event simulation with general service-time
//!   distributions and reports Student-t confidence intervals from [`stats`].

pub mod analytic;
pub mod ctmc;
pub mod erlang;
mod error;
mod params;
pub mod sim;
pub mod stats;

pub use error::{Error, Result};
pub use params::{BlockingReport, ClassBlocking, SystemParams};
