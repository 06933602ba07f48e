//! QoE-centric tool routing for LLM agents: benchmark generation, network
//! simulation, semantic matching, routing policies and an experiment harness.

pub mod harness;
pub mod lexicon;
pub mod llm;
pub mod netsim;
pub mod qoe;
pub mod retrieval;
pub mod rng;
pub mod routing;
pub mod trip;
