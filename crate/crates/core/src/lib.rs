//! Multi-hop question synthesis over tables and passages.
//!
//! Single-hop questions are generated from individual contexts and
//! composed into multi-hop questions by typed operators wired into small
//! reasoning graphs. Neural steps go through a [`backends::Backend`].

pub mod corpus;
pub mod hashing;
pub mod nlp;
pub mod backends;
pub mod operators;
pub mod graph;
pub mod dataset;
pub mod filtration;
pub mod qdmr;
pub mod stats;
