//! Runs every Rust code block of the book as a doc-test, so the guide and
//! the library cannot drift apart. `mdbook` cannot execute snippets against
//! workspace dependencies; including the chapters as module docs makes
//! `cargo test --doc` do it instead, one module per chapter so failures
//! name their chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/environments.md")]
pub mod environments {}

#[doc = include_str!("../../../book/src/paths.md")]
pub mod paths {}

#[doc = include_str!("../../../book/src/shape.md")]
pub mod shape {}

#[doc = include_str!("../../../book/src/particles.md")]
pub mod particles {}

#[doc = include_str!("../../../book/src/identities.md")]
pub mod identities {}

#[doc = include_str!("../../../book/src/montecarlo.md")]
pub mod montecarlo {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
