//! Holds the `acceptance` test target only.
//!
//! It lives in its own package so that `cargo test --workspace` runs it after
//! every other suite: a failing criterion then cannot hide their results.
