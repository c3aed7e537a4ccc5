//! Runs every code sample in the guide as a doctest.
//!
//! mdBook does not execute the book's Rust snippets, so each chapter is
//! included here as module documentation and `cargo test --doc` picks
//! the fenced blocks up. One module per chapter keeps test failures
//! attributable to their source file.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/maps.md")]
pub mod maps {}

#[doc = include_str!("../../../book/src/observables.md")]
pub mod observables {}

#[doc = include_str!("../../../book/src/maxima-records.md")]
pub mod maxima_records {}

#[doc = include_str!("../../../book/src/point-processes.md")]
pub mod point_processes {}

#[doc = include_str!("../../../book/src/extremal-process.md")]
pub mod extremal_process {}

#[doc = include_str!("../../../book/src/skorokhod.md")]
pub mod skorokhod {}

#[doc = include_str!("../../../book/src/statistics.md")]
pub mod statistics {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
