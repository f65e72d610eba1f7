//! Verification oracles (stub).
