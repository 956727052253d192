//! Each chapter of the guide is a module, so its listings run as doc-tests
//! and a failure names the chapter it came from.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/evaluation.md")]
pub mod evaluation {}
#[doc = include_str!("../../../book/src/bounds.md")]
pub mod bounds {}
#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}
#[doc = include_str!("../../../book/src/derivatives.md")]
pub mod derivatives {}
#[doc = include_str!("../../../book/src/extremal.md")]
pub mod extremal {}
#[doc = include_str!("../../../book/src/summation.md")]
pub mod summation {}
#[doc = include_str!("../../../book/src/figures.md")]
pub mod figures {}
#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
