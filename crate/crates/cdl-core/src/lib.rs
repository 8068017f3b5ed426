//! Collaborative dialogue learning: a desk-scale training and evaluation
//! pipeline for attribute-aware branch groups.
//!
//! The pipeline stages, in order of a typical run:
//!
//! 1. [`corpus`] — load line-delimited dialogue corpora, build a vocabulary,
//!    encode pairs into token-id sequences.
//! 2. [`scoring`] — score every pair along one of three dialogue attributes
//!    (coherence, informativeness, specificity) from training-corpus
//!    statistics.
//! 3. [`selection`] — keep the top fraction of pairs per attribute as the
//!    training subset of the matching auxiliary branch.
//! 4. [`model`] / [`distill`] / [`trainer`] — train a master branch plus one
//!    auxiliary branch per attribute, coupled by positive distillation and
//!    orthogonal negative distillation.
//! 5. [`eval`] — automatic metrics over generated responses and the
//!    branch-diversity measure.
//!
//! Everything is deterministic given the configured seed: RNG streams are
//! derived per purpose in [`rng`], and all reductions run in a fixed order.

pub mod checksum;
pub mod corpus;
pub mod distill;
pub mod error;
pub mod eval;
pub mod model;
pub mod rng;
pub mod scoring;
pub mod selection;
pub mod synth;
pub mod tensor;
pub mod trainer;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
