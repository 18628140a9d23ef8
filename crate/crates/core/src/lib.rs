//! Exact computations with truncated graded Lie algebras: structure tables,
//! derivations and low-degree adjoint cohomology.

pub mod algebra;
pub mod catalog;
pub mod cohomology;
pub mod derivations;
mod error;
pub mod exactla;

pub use error::{Error, Result};

// `cargo test --doc` runs the code in the book.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/algebras.md")]
    mod algebras {}
    #[doc = include_str!("../../../book/src/derivations.md")]
    mod derivations {}
    #[doc = include_str!("../../../book/src/completeness.md")]
    mod completeness {}
    #[doc = include_str!("../../../book/src/cohomology.md")]
    mod cohomology {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
