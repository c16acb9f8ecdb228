//! The chapters of the `liouville-lab` book, one module per chapter.
//!
//! The markdown lives in `book/src` at the repository root and renders with
//! `mdbook build book`. Including it here means `cargo test --doc` compiles
//! and runs every code block in the book.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/regimes.md")]
pub mod regimes {}

#[doc = include_str!("../../../book/src/radial.md")]
pub mod radial {}

#[doc = include_str!("../../../book/src/catalog.md")]
pub mod catalog {}

#[doc = include_str!("../../../book/src/geometry.md")]
pub mod geometry {}

#[doc = include_str!("../../../book/src/polygon.md")]
pub mod polygon {}

#[doc = include_str!("../../../book/src/example.md")]
pub mod example {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
