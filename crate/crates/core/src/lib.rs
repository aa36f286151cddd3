pub mod cli;
pub mod concavify;
pub mod credibility;
pub mod diagnostics;
pub mod error;
pub mod games;
pub mod geometry;
pub mod linalg;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod rational;

pub use error::{Error, Result};
pub use rational::Rational;
