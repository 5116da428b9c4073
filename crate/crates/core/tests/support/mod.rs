//! Fixture builders and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

pub mod disk;
pub mod oracles;
pub mod sketch;
