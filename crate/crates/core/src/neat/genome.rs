use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::Rng;

use super::InnovationTracker;
use crate::error::GenomeError;

pub type NodeId = u32;
pub type Innovation = u64;

/// Network inputs: bird y, distance to gap top, distance to gap bottom.
pub const INPUT_COUNT: usize = 3;
pub const OUTPUT_COUNT: usize = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeRole {
    Input,
    Hidden,
    Output,
}

impl NodeRole {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeRole::Input => "input",
            NodeRole::Hidden => "hidden",
            NodeRole::Output => "output",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "input" => Some(NodeRole::Input),
            "hidden" => Some(NodeRole::Hidden),
            "output" => Some(NodeRole::Output),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NodeGene {
    pub id: NodeId,
    pub role: NodeRole,
    /// Ignored for input nodes, which pass their feature through unchanged.
    pub bias: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionGene {
    pub weight: f64,
    pub from: NodeId,
    pub to: NodeId,
    pub enabled: bool,
    pub innovation: Innovation,
}

/// One evolvable network: node genes plus an ordered list of connection genes.
#[derive(Clone, Debug, PartialEq)]
pub struct Genome {
    nodes: Vec<NodeGene>,
    connections: Vec<ConnectionGene>,
    /// Pipes crossed plus the survival tie-break, assigned by evolution.
    pub fitness: f64,
}

impl Genome {
    /// Builds a genome after checking that node ids are unique. Nodes are
    /// kept sorted by id; connection order is preserved.
    ///
    /// Nothing else is checked: see [`Genome::validate`] for the full set of
    /// invariants a playable genome satisfies.
    pub fn from_parts(
        mut nodes: Vec<NodeGene>,
        connections: Vec<ConnectionGene>,
    ) -> Result<Self, GenomeError> {
        nodes.sort_by_key(|n| n.id);
        if let Some(pair) = nodes.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(GenomeError::DuplicateNode(pair[0].id));
        }
        Ok(Genome {
            nodes,
            connections,
            fitness: 0.0,
        })
    }

    /// Minimal topology: every input wired straight to the output with a
    /// weight drawn uniformly from `[-1, 1]`, all biases zero.
    pub fn initial<R: Rng + ?Sized>(rng: &mut R, tracker: &mut InnovationTracker) -> Self {
        let output = INPUT_COUNT as NodeId;
        let mut nodes: Vec<NodeGene> = (0..INPUT_COUNT as NodeId)
            .map(|id| NodeGene {
                id,
                role: NodeRole::Input,
                bias: 0.0,
            })
            .collect();
        nodes.push(NodeGene {
            id: output,
            role: NodeRole::Output,
            bias: 0.0,
        });
        let connections = (0..INPUT_COUNT as NodeId)
            .map(|from| ConnectionGene {
                weight: rng.random_range(-1.0..=1.0),
                from,
                to: output,
                enabled: true,
                innovation: tracker.connection(from, output),
            })
            .collect();
        Genome {
            nodes,
            connections,
            fitness: 0.0,
        }
    }

    /// Nodes ascending by id.
    pub fn nodes(&self) -> &[NodeGene] {
        &self.nodes
    }

    pub fn connections(&self) -> &[ConnectionGene] {
        &self.connections
    }

    pub(crate) fn connections_mut(&mut self) -> &mut Vec<ConnectionGene> {
        &mut self.connections
    }

    pub(crate) fn nodes_mut(&mut self) -> &mut Vec<NodeGene> {
        &mut self.nodes
    }

    pub fn node(&self, id: NodeId) -> Option<&NodeGene> {
        self.nodes
            .binary_search_by_key(&id, |n| n.id)
            .ok()
            .map(|i| &self.nodes[i])
    }

    pub(crate) fn insert_node(&mut self, node: NodeGene) {
        match self.nodes.binary_search_by_key(&node.id, |n| n.id) {
            Ok(i) => self.nodes[i] = node,
            Err(i) => self.nodes.insert(i, node),
        }
    }

    pub fn has_edge(&self, from: NodeId, to: NodeId) -> bool {
        self.connections.iter().any(|c| c.from == from && c.to == to)
    }

    pub fn enabled_count(&self) -> usize {
        self.connections.iter().filter(|c| c.enabled).count()
    }

    /// True when enabling `from -> to` would close a cycle among the
    /// currently enabled connections.
    pub fn would_create_cycle(&self, from: NodeId, to: NodeId) -> bool {
        would_close_cycle(
            self.connections.iter().filter(|c| c.enabled).map(|c| (c.from, c.to)),
            from,
            to,
        )
    }

    /// Checks every invariant of a playable genome.
    pub fn validate(&self) -> Result<(), GenomeError> {
        if let Some(pair) = self.nodes.windows(2).find(|w| w[0].id >= w[1].id) {
            return Err(GenomeError::DuplicateNode(pair[1].id));
        }
        for (role, expected) in [(NodeRole::Input, INPUT_COUNT), (NodeRole::Output, OUTPUT_COUNT)] {
            let found = self.nodes.iter().filter(|n| n.role == role).count();
            if found != expected {
                return Err(GenomeError::NodeCount {
                    role: role.as_str(),
                    expected,
                    found,
                });
            }
        }
        let mut edges = HashSet::new();
        for (column, c) in self.connections.iter().enumerate() {
            let from = self.node(c.from).ok_or(GenomeError::UnknownNode {
                column,
                node: c.from,
            })?;
            let to = self.node(c.to).ok_or(GenomeError::UnknownNode { column, node: c.to })?;
            if c.from == c.to {
                return Err(GenomeError::SelfLoop { column, node: c.from });
            }
            if to.role == NodeRole::Input {
                return Err(GenomeError::IntoInput { column, node: c.to });
            }
            if from.role == NodeRole::Output {
                return Err(GenomeError::FromOutput { column, node: c.from });
            }
            if !edges.insert((c.from, c.to)) {
                return Err(GenomeError::DuplicateEdge {
                    column,
                    from: c.from,
                    to: c.to,
                });
            }
        }
        if topological_order(self).is_none() {
            return Err(GenomeError::Cycle);
        }
        Ok(())
    }

    /// Enforces unique edges and acyclicity by walking the connections in
    /// order: later duplicates of an edge are dropped, and an enabled
    /// connection that would close a cycle is disabled.
    pub(crate) fn repair(&mut self) {
        let mut seen = HashSet::new();
        self.connections.retain(|c| seen.insert((c.from, c.to)));
        let mut accepted: Vec<(NodeId, NodeId)> = Vec::new();
        for c in &mut self.connections {
            if !c.enabled {
                continue;
            }
            if would_close_cycle(accepted.iter().copied(), c.from, c.to) {
                c.enabled = false;
            } else {
                accepted.push((c.from, c.to));
            }
        }
    }
}

/// Whether adding `from -> to` to `edges` closes a cycle, i.e. whether `to`
/// already reaches `from`.
pub(crate) fn would_close_cycle<I>(edges: I, from: NodeId, to: NodeId) -> bool
where
    I: Iterator<Item = (NodeId, NodeId)>,
{
    if from == to {
        return true;
    }
    let mut adjacency: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for (a, b) in edges {
        adjacency.entry(a).or_default().push(b);
    }
    let mut visited = BTreeSet::new();
    let mut stack = vec![to];
    while let Some(node) = stack.pop() {
        if node == from {
            return true;
        }
        if !visited.insert(node) {
            continue;
        }
        if let Some(next) = adjacency.get(&node) {
            stack.extend(next.iter().copied());
        }
    }
    false
}

/// Node indices (into [`Genome::nodes`]) in an order where every enabled
/// connection points forward, or `None` if the enabled graph has a cycle.
/// Ties are broken by node id, so the order is deterministic.
pub(crate) fn topological_order(genome: &Genome) -> Option<Vec<usize>> {
    let nodes = genome.nodes();
    let index_of = |id: NodeId| nodes.binary_search_by_key(&id, |n| n.id).ok();
    let mut indegree = vec![0usize; nodes.len()];
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for c in genome.connections().iter().filter(|c| c.enabled) {
        let (from, to) = (index_of(c.from)?, index_of(c.to)?);
        outgoing[from].push(to);
        indegree[to] += 1;
    }
    let mut ready: BTreeSet<usize> = (0..nodes.len()).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(nodes.len());
    while let Some(i) = ready.pop_first() {
        order.push(i);
        for &j in &outgoing[i] {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                ready.insert(j);
            }
        }
    }
    (order.len() == nodes.len()).then_some(order)
}
