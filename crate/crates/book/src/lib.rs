//! Compiles the guide in `book/` so its code blocks run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/problems.md")]
pub mod problems {}
#[doc = include_str!("../../../book/src/embeddings.md")]
pub mod embeddings {}
#[doc = include_str!("../../../book/src/theory.md")]
pub mod theory {}
#[doc = include_str!("../../../book/src/feasibility.md")]
pub mod feasibility {}
#[doc = include_str!("../../../book/src/solvers.md")]
pub mod solvers {}
#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}
#[doc = include_str!("../../../book/src/output.md")]
pub mod output {}
