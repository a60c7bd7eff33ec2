//! Seeded verification suites: random instances checked against the
//! reference interpreters.

pub mod suite;
