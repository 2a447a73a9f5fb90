//! mdbook cannot run snippets that depend on a workspace crate, so each
//! chapter is pulled in as a module doc and `cargo test --doc` runs its code
//! blocks. A failing doc-test names the module, which names the chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/nodes.md")]
pub mod nodes {}
#[doc = include_str!("../../../book/src/geometry.md")]
pub mod geometry {}
#[doc = include_str!("../../../book/src/mesh.md")]
pub mod mesh {}
#[doc = include_str!("../../../book/src/metrics.md")]
pub mod metrics {}
#[doc = include_str!("../../../book/src/solver.md")]
pub mod solver {}
#[doc = include_str!("../../../book/src/harness.md")]
pub mod harness {}
