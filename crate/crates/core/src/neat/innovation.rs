use std::collections::BTreeMap;

use super::genome::{Innovation, NodeId, INPUT_COUNT, OUTPUT_COUNT};

/// Structural-gene bookkeeping shared by a whole population.
///
/// Each distinct `(from, to)` edge gets one innovation number for the
/// lifetime of the tracker, so genes line up across genomes during
/// crossover. Splitting the same connection more than once within a
/// generation yields the same hidden node id; the split table is cleared by
/// [`InnovationTracker::begin_generation`].
#[derive(Clone, Debug, PartialEq)]
pub struct InnovationTracker {
    next_innovation: Innovation,
    next_node: NodeId,
    edges: BTreeMap<(NodeId, NodeId), Innovation>,
    splits: BTreeMap<Innovation, NodeId>,
}

impl Default for InnovationTracker {
    fn default() -> Self {
        Self::new()
    }
}

impl InnovationTracker {
    /// Tracker for genomes with the standard input/output layout. The
    /// initial input-to-output edges receive innovations `0..INPUT_COUNT`.
    pub fn new() -> Self {
        let mut tracker = InnovationTracker {
            next_innovation: 0,
            next_node: (INPUT_COUNT + OUTPUT_COUNT) as NodeId,
            edges: BTreeMap::new(),
            splits: BTreeMap::new(),
        };
        let output = INPUT_COUNT as NodeId;
        for input in 0..INPUT_COUNT as NodeId {
            tracker.connection(input, output);
        }
        tracker
    }

    pub fn begin_generation(&mut self) {
        self.splits.clear();
    }

    pub fn connection(&mut self, from: NodeId, to: NodeId) -> Innovation {
        let next = &mut self.next_innovation;
        *self.edges.entry((from, to)).or_insert_with(|| {
            let id = *next;
            *next += 1;
            id
        })
    }

    /// Node id for splitting the connection with the given innovation.
    pub fn split(&mut self, innovation: Innovation) -> NodeId {
        let next = &mut self.next_node;
        *self.splits.entry(innovation).or_insert_with(|| {
            let id = *next;
            *next += 1;
            id
        })
    }

    /// A node id never handed out before.
    pub fn fresh_node(&mut self) -> NodeId {
        let id = self.next_node;
        self.next_node += 1;
        id
    }

    pub fn innovation_count(&self) -> Innovation {
        self.next_innovation
    }

    pub fn node_count(&self) -> NodeId {
        self.next_node
    }
}
