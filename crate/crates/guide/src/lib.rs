//! The chapters of `book/` as modules, so `cargo test -p guide` compiles
//! and runs every Rust snippet in the book.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/logic-matrices.md")]
pub mod logic_matrices {}

#[doc = include_str!("../../../book/src/networks.md")]
pub mod networks {}

#[doc = include_str!("../../../book/src/simulation.md")]
pub mod simulation {}

#[doc = include_str!("../../../book/src/sat.md")]
pub mod sat {}

#[doc = include_str!("../../../book/src/sweeping.md")]
pub mod sweeping {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
