//! The guide in `book/`, compiled so that every listing runs as a doc-test.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/coefficients.md")]
pub mod coefficients {}

#[doc = include_str!("../../../book/src/norms.md")]
pub mod norms {}

#[doc = include_str!("../../../book/src/asymptotics.md")]
pub mod asymptotics {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
