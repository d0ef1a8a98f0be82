//! Learning-guided state-space search.

pub mod advisor;
pub mod algorithms;
pub mod domain;
pub mod domains;
pub mod error;
pub mod harness;
pub mod llm;
pub mod search;
pub mod session;
pub mod text;
