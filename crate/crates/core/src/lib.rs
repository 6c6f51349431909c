//! Numerical machinery for lower bounds on short-interval exponential sums
//! over primes and divisor counts.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`] sieves Λ, τ, μ, φ, ω and the prime indicator over integer ranges.
//! * [`dioph`] realizes α as an exact big rational and builds continued
//!   fractions, major-arc sets and mediant families.
//! * [`expsum`] evaluates `F(x; α)`, window sums `F(n, n+y; α)` and their
//!   L² average, and sums at rationals through residue classes.
//! * [`characters`] builds Dirichlet characters mod q and their Gauss sums.
//! * [`verify`] turns the inequalities and identities of the method into
//!   executable checks, registered by name.
//! * [`experiments`] runs scaling sweeps from a TOML configuration and writes CSV.

pub mod arith;
pub mod characters;
pub mod constants;
pub mod dioph;
pub mod error;
pub mod experiments;
pub mod expsum;
pub mod verify;

pub use error::{Error, Result};
