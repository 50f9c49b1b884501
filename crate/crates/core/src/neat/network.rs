//! Feed-forward evaluation of a genome.

use super::genome::{topological_order, Genome, NodeRole};
use crate::env::Action;
use crate::error::GenomeError;

// Largest double below 1. tanh rounds to exactly +-1 for large arguments;
// the output is pulled back inside the open interval without changing its sign.
const OUTPUT_BOUND: f64 = 1.0 - f64::EPSILON / 2.0;

/// A genome compiled into a flat evaluation schedule.
#[derive(Clone, Debug)]
pub struct Network {
    /// Slot of each input feature, in ascending input-node id order.
    inputs: Vec<usize>,
    output: usize,
    /// Non-input nodes in topological order with their bias and the range
    /// of `incoming` that feeds them.
    schedule: Vec<Neuron>,
    incoming: Vec<(usize, f64)>,
    slots: usize,
}

#[derive(Clone, Debug)]
struct Neuron {
    slot: usize,
    bias: f64,
    start: usize,
    end: usize,
}

impl Network {
    /// Compiles the enabled part of `genome`. Fails if the enabled
    /// connections contain a cycle or the genome has no output node.
    pub fn compile(genome: &Genome) -> Result<Self, GenomeError> {
        let order = topological_order(genome).ok_or(GenomeError::Cycle)?;
        let nodes = genome.nodes();
        let slot_of = |id| {
            nodes
                .binary_search_by_key(&id, |n: &super::NodeGene| n.id)
                .expect("topological_order checked every endpoint")
        };
        let inputs = nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.role == NodeRole::Input)
            .map(|(i, _)| i)
            .collect();
        let output = nodes
            .iter()
            .position(|n| n.role == NodeRole::Output)
            .ok_or(GenomeError::NodeCount {
                role: "output",
                expected: 1,
                found: 0,
            })?;

        let mut feeds: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nodes.len()];
        for c in genome.connections().iter().filter(|c| c.enabled) {
            feeds[slot_of(c.to)].push((slot_of(c.from), c.weight));
        }
        let mut schedule = Vec::new();
        let mut incoming = Vec::new();
        for slot in order {
            if nodes[slot].role == NodeRole::Input {
                continue;
            }
            let start = incoming.len();
            incoming.extend_from_slice(&feeds[slot]);
            schedule.push(Neuron {
                slot,
                bias: nodes[slot].bias,
                start,
                end: incoming.len(),
            });
        }
        Ok(Network {
            inputs,
            output,
            schedule,
            incoming,
            slots: nodes.len(),
        })
    }

    /// Output activation, strictly inside `(-1, 1)`.
    ///
    /// Missing features read as zero and surplus features are ignored.
    pub fn activate(&self, features: &[f64]) -> f64 {
        let mut values = vec![0.0; self.slots];
        self.activate_into(features, &mut values)
    }

    fn activate_into(&self, features: &[f64], values: &mut [f64]) -> f64 {
        self.output_sum(features, values).tanh().clamp(-OUTPUT_BOUND, OUTPUT_BOUND)
    }

    /// Evaluates every node except the output's final tanh and returns the
    /// output node's pre-activation sum.
    fn output_sum(&self, features: &[f64], values: &mut [f64]) -> f64 {
        for (i, &slot) in self.inputs.iter().enumerate() {
            values[slot] = features.get(i).copied().unwrap_or(0.0);
        }
        let mut output_sum = 0.0;
        for neuron in &self.schedule {
            let mut sum = neuron.bias;
            for &(from, w) in &self.incoming[neuron.start..neuron.end] {
                sum += w * values[from];
            }
            if neuron.slot == self.output {
                output_sum = sum;
            } else {
                values[neuron.slot] = sum.tanh();
            }
        }
        output_sum
    }

    /// Flap iff the output is strictly positive. tanh preserves sign, so
    /// this only needs the output's pre-activation.
    pub fn decide(&self, features: &[f64]) -> Action {
        let mut values = vec![0.0; self.slots];
        if self.output_sum(features, &mut values) > 0.0 {
            Action::Flap
        } else {
            Action::NoFlap
        }
    }

    /// A reusable evaluator that avoids allocating per call.
    pub fn evaluator(&self) -> Evaluator<'_> {
        Evaluator {
            network: self,
            values: vec![0.0; self.slots],
        }
    }
}

/// [`Network`] plus a scratch buffer, for tight episode loops.
pub struct Evaluator<'a> {
    network: &'a Network,
    values: Vec<f64>,
}

impl Evaluator<'_> {
    pub fn activate(&mut self, features: &[f64]) -> f64 {
        self.network.activate_into(features, &mut self.values)
    }

    pub fn decide(&mut self, features: &[f64]) -> Action {
        if self.network.output_sum(features, &mut self.values) > 0.0 {
            Action::Flap
        } else {
            Action::NoFlap
        }
    }
}

/// Compiles and evaluates `genome` once.
pub fn activate(genome: &Genome, features: &[f64]) -> Result<f64, GenomeError> {
    Ok(Network::compile(genome)?.activate(features))
}

pub fn decide(genome: &Genome, features: &[f64]) -> Result<Action, GenomeError> {
    Ok(Network::compile(genome)?.decide(features))
}
