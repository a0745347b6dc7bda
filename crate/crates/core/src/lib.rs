//! Generation of SystemVerilog Assertions from natural-language design
//! specifications, plus quality scoring of the result against a golden RTL.
//!
//! The crate is organized around two halves:
//!
//! - **Generation** ([`extraction`], [`regularization`], [`formalization`],
//!   [`synthesis`]): a four-phase pipeline that progressively regularizes
//!   free-form specification prose into assertions. Every LLM call goes
//!   through the [`gateway`], which supports live, record, and replay modes
//!   so the whole pipeline is testable offline.
//! - **Scoring** ([`rtl`], [`sdg`], [`importance`]): static analysis of a
//!   golden RTL into a temporally unrolled signal dependency graph, PageRank
//!   over that graph, and a recursive spatial-distance importance metric for
//!   each assertion.
//!
//! [`pipeline`] ties the phases into resumable stages with on-disk artifacts;
//! [`fixtures`] bundles a desk-scale corpus with recorded transcripts that
//! exercises everything end to end.

pub mod extraction;
pub mod fixtures;
pub mod formalization;
pub mod gateway;
pub mod ident;
pub mod importance;
pub mod par;
pub mod pipeline;
pub mod prompts;
pub mod regularization;
pub mod rtl;
pub mod sdg;
pub mod sva;
pub mod synthesis;

mod fenced;

pub use gateway::{ChatRequest, Gateway, LlmMode};
pub use par::Parallelism;
