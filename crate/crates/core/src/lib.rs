//! Limiting joint moments of heavy Wigner matrices.
//!
//! Three independent routes are provided and cross-checked:
//! enumeration of colored cycles on trees ([`engine`]), the Schwinger–Dyson
//! recursion ([`sd`]), and Monte Carlo simulation of finite ensembles
//! ([`lab`]). The *-test graph calculus they share lives in [`graph`].

pub mod config;
pub mod engine;
pub mod error;
pub mod exec;
pub mod graph;
pub mod lab;
pub mod params;
pub mod poly;
pub mod rational;
pub mod sd;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
pub use exec::Execution;
pub use params::{HeavyParams, ParamSeq};
pub use poly::{Monomial, MomentPolynomial, Symbol};
pub use word::{InterleavedWord, Letter, Word, YWord};
