//! Independent oracles shared by the integration tests.

pub mod brute;
pub mod dense;
