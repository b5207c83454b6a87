//! Equilibrium classification and critical-value structure for integrable
//! Hamiltonian systems with two degrees of freedom.

pub mod cli;
pub mod config;
pub mod error;
pub mod hopf;
pub mod models;
pub mod oracle;
pub mod spectrum;
pub mod symplin;
pub mod verify;

pub use error::{Error, Result};
