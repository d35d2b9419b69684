//! Defeasible deontic logic with meta-rules: theories, their text format,
//! rule conflict, and an engine computing extensions.

pub mod bench;
pub mod conflict;
pub mod engine;
pub mod generate;
pub mod model;
pub mod oracle;
pub mod text;
pub mod validate;

pub use conflict::Variant;
pub use engine::{compute_extension, diff_variants, query, EngineError};
pub use model::*;
pub use text::{parse_theory, render_extension, render_theory, Format};
pub use validate::{validate, Report};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/theories.md")]
    mod theories {}
    #[doc = include_str!("../../../book/src/extensions.md")]
    mod extensions {}
    #[doc = include_str!("../../../book/src/conflicts.md")]
    mod conflicts {}
    #[doc = include_str!("../../../book/src/engine.md")]
    mod engine {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/testing.md")]
    mod testing {}
}
