//! Topology-evolving networks: genome encoding, evaluation, mutation and
//! crossover.

mod crossover;
mod genome;
mod innovation;
mod mutation;
mod network;
mod table;

pub use crossover::crossover;
pub use genome::{
    ConnectionGene, Genome, Innovation, NodeGene, NodeId, NodeRole, INPUT_COUNT, OUTPUT_COUNT,
};
pub use innovation::InnovationTracker;
pub use mutation::{add_connection, add_node, mutate, toggle_enable, MutationParams};
pub use network::{activate, decide, Evaluator, Network};
pub use table::{decode, encode, genome_from_text, genome_to_text, ChromosomeTable, Column};
