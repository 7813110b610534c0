//! The chapters of the guide in `book/src`, included so that `cargo test`
//! compiles and runs their code blocks.

#[doc = include_str!("../../../book/src/index.md")]
pub mod index {}

#[doc = include_str!("../../../book/src/words.md")]
pub mod words {}

#[doc = include_str!("../../../book/src/antisquares.md")]
pub mod antisquares {}

#[doc = include_str!("../../../book/src/morphisms.md")]
pub mod morphisms {}

#[doc = include_str!("../../../book/src/search.md")]
pub mod search {}

#[doc = include_str!("../../../book/src/enumeration.md")]
pub mod enumeration {}

#[doc = include_str!("../../../book/src/fibonacci.md")]
pub mod fibonacci {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
