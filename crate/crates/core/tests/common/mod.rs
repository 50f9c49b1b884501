//! Independent oracles and generators shared by the integration tests.
//! Nothing here calls into the code under test except to build inputs.
#![allow(dead_code)]

use std::collections::HashMap;
use std::path::Path;

use neatbird::env::WorldConfig;
use neatbird::neat::{
    mutate, ConnectionGene, Genome, InnovationTracker, MutationParams, NodeGene, NodeRole,
};
use rand::seq::SliceRandom;
use rand::Rng;

/// Displacement after `t` flap-free frames from initial velocity `v0` under
/// constant acceleration `a`.
pub fn closed_form_displacement(v0: f64, a: f64, t: u64) -> f64 {
    let t = t as f64;
    v0 * t + 0.5 * a * t * t
}

/// A world tall enough, with a gap wide enough, that a bird starting with
/// |v0| <= 20 and a <= 5 cannot hit anything within 100 frames. The jump
/// velocity doubles as the initial velocity: one flap on the first frame.
pub fn open_sky(v0: f64, a: f64) -> WorldConfig {
    WorldConfig {
        gravity_accel: a,
        jump_velocity: v0,
        screen_height: 60_000.0,
        pipe_gap: 59_000.0,
        gap_center_min: 30_000.0,
        gap_center_max: 30_000.0,
        ..WorldConfig::default()
    }
}

/// Random acyclic genome with three inputs (0..=2), output 3 and up to
/// `max_hidden` hidden nodes (4..), edges only going forward in a random
/// topological order that puts inputs first and the output last.
pub fn random_acyclic_genome<R: Rng>(rng: &mut R, max_hidden: u32) -> Genome {
    let hidden = rng.random_range(0..=max_hidden);
    let mut nodes: Vec<NodeGene> = (0..3)
        .map(|id| NodeGene {
            id,
            role: NodeRole::Input,
            bias: 0.0,
        })
        .collect();
    nodes.push(NodeGene {
        id: 3,
        role: NodeRole::Output,
        bias: rng.random_range(-2.0..2.0),
    });
    let mut middle: Vec<u32> = (4..4 + hidden).collect();
    for &id in &middle {
        nodes.push(NodeGene {
            id,
            role: NodeRole::Hidden,
            bias: rng.random_range(-2.0..2.0),
        });
    }
    middle.shuffle(rng);
    let mut order = vec![0, 1, 2];
    order.extend(middle);
    order.push(3);
    let mut connections = Vec::new();
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            let (from, to) = (order[i], order[j]);
            if to < 3 || !rng.random_bool(0.6) {
                continue;
            }
            connections.push(ConnectionGene {
                weight: rng.random_range(-3.0..3.0),
                from,
                to,
                enabled: rng.random_bool(0.85),
                innovation: connections.len() as u64,
            });
        }
    }
    connections.shuffle(rng);
    Genome::from_parts(nodes, connections).expect("ids are unique")
}

/// Straightforward recursive evaluation: a node's value is its feature
/// (inputs) or tanh(bias + sum of enabled weighted predecessor values).
pub fn recursive_activate(genome: &Genome, features: &[f64; 3]) -> f64 {
    fn value(genome: &Genome, id: u32, features: &[f64; 3], memo: &mut HashMap<u32, f64>) -> f64 {
        if let Some(&v) = memo.get(&id) {
            return v;
        }
        let node = genome.nodes().iter().find(|n| n.id == id).expect("node exists");
        let v = if node.role == NodeRole::Input {
            features[id as usize]
        } else {
            let mut sum = node.bias;
            for c in genome.connections().iter().filter(|c| c.enabled && c.to == id) {
                sum += c.weight * value(genome, c.from, features, memo);
            }
            sum.tanh()
        };
        memo.insert(id, v);
        v
    }
    let output = genome
        .nodes()
        .iter()
        .find(|n| n.role == NodeRole::Output)
        .expect("one output")
        .id;
    value(genome, output, features, &mut HashMap::new())
}

/// Exhaustive invariant check written against the public fields only.
pub fn check_invariants(genome: &Genome) -> Result<(), String> {
    let nodes = genome.nodes();
    let role_of = |id: u32| nodes.iter().find(|n| n.id == id).map(|n| n.role);
    let inputs = nodes.iter().filter(|n| n.role == NodeRole::Input).count();
    let outputs = nodes.iter().filter(|n| n.role == NodeRole::Output).count();
    if inputs != 3 || outputs != 1 {
        return Err(format!("{inputs} inputs, {outputs} outputs"));
    }
    let mut ids: Vec<u32> = nodes.iter().map(|n| n.id).collect();
    ids.sort_unstable();
    ids.dedup();
    if ids.len() != nodes.len() {
        return Err("duplicate node id".into());
    }
    let mut edges = std::collections::HashSet::new();
    for c in genome.connections() {
        let (Some(from), Some(to)) = (role_of(c.from), role_of(c.to)) else {
            return Err(format!("dangling edge {}->{}", c.from, c.to));
        };
        if c.from == c.to || to == NodeRole::Input || from == NodeRole::Output {
            return Err(format!("illegal edge {}->{}", c.from, c.to));
        }
        if !edges.insert((c.from, c.to)) {
            return Err(format!("duplicate edge {}->{}", c.from, c.to));
        }
    }
    // Acyclicity by repeated removal of nodes without enabled in-edges.
    let mut remaining: Vec<u32> = ids.clone();
    let mut live: Vec<(u32, u32)> = genome
        .connections()
        .iter()
        .filter(|c| c.enabled)
        .map(|c| (c.from, c.to))
        .collect();
    while !remaining.is_empty() {
        let Some(pos) = remaining.iter().position(|&n| live.iter().all(|&(_, to)| to != n)) else {
            return Err("cycle among enabled connections".into());
        };
        let n = remaining.remove(pos);
        live.retain(|&(from, _)| from != n);
    }
    Ok(())
}

/// Structurally rich genomes produced by long, aggressive mutation chains.
pub fn evolved_genome<R: Rng>(rng: &mut R, tracker: &mut InnovationTracker, steps: usize) -> Genome {
    let params = MutationParams {
        weight_rate: 0.5,
        bias_rate: 0.5,
        add_connection_rate: 0.6,
        add_node_rate: 0.4,
        toggle_enable_rate: 0.3,
        ..MutationParams::default()
    };
    let mut genome = Genome::initial(rng, tracker);
    for _ in 0..steps {
        genome = mutate(&genome, rng, &params, tracker);
    }
    genome.fitness = rng.random_range(0.0..100.0);
    genome
}

/// Reads a CSV with a header into (header, rows) using plain string splits.
pub fn read_plain_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

pub fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let idx = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[idx].parse().unwrap()).collect()
}

/// Textbook median: middle element, or the mean of the two middle ones.
pub fn oracle_median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Counts the points of every `<polyline>` in an SVG document.
pub fn polyline_point_counts(svg: &str) -> Vec<usize> {
    let mut counts = Vec::new();
    let mut rest = svg;
    while let Some(start) = rest.find("<polyline") {
        rest = &rest[start..];
        let p = rest.find("points=\"").unwrap() + "points=\"".len();
        let end = p + rest[p..].find('"').unwrap();
        counts.push(rest[p..end].split_whitespace().count());
        rest = &rest[end..];
    }
    counts
}
