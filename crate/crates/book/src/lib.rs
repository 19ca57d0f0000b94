//! The guide in `book/`, compiled so that its snippets run as doc-tests.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}

#[doc = include_str!("../../../book/src/exterior-forms.md")]
pub mod exterior_forms {}

#[doc = include_str!("../../../book/src/chern-forms.md")]
pub mod chern_forms {}

#[doc = include_str!("../../../book/src/positivity.md")]
pub mod positivity {}

#[doc = include_str!("../../../book/src/schur-segre.md")]
pub mod schur_segre {}

#[doc = include_str!("../../../book/src/pushforwards.md")]
pub mod pushforwards {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
