//! Verification routines shared by the `strata verify` command and the acceptance suite.

pub mod checks;
