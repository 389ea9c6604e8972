pub mod bargaining;
pub mod cli;
pub mod config;
pub mod error;
pub mod eurozone;
pub mod expr;
pub mod game;
pub mod geometry;
pub mod payoff_space;
pub mod report;
pub mod svg;

pub use error::{Error, Result};
