//! The guide under `book/`, compiled as doctests so every snippet stays runnable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/license.md")]
pub mod license {}
#[doc = include_str!("../../../book/src/ingest.md")]
pub mod ingest {}
#[doc = include_str!("../../../book/src/curation.md")]
pub mod curation {}
#[doc = include_str!("../../../book/src/policy.md")]
pub mod policy {}
#[doc = include_str!("../../../book/src/postprocess.md")]
pub mod postprocess {}
#[doc = include_str!("../../../book/src/synth.md")]
pub mod synth {}
#[doc = include_str!("../../../book/src/registry.md")]
pub mod registry {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
