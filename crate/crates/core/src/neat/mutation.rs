use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::genome::{ConnectionGene, Genome, NodeGene, NodeId, NodeRole};
use super::InnovationTracker;

/// Per-genome mutation probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct MutationParams {
    /// Chance that each connection weight receives Gaussian noise.
    pub weight_rate: f64,
    pub weight_sigma: f64,
    /// Chance that each non-input node bias receives Gaussian noise.
    pub bias_rate: f64,
    pub bias_sigma: f64,
    pub add_connection_rate: f64,
    pub add_node_rate: f64,
    pub toggle_enable_rate: f64,
}

impl Default for MutationParams {
    fn default() -> Self {
        MutationParams {
            weight_rate: 0.03,
            weight_sigma: 0.5,
            bias_rate: 0.03,
            bias_sigma: 0.5,
            add_connection_rate: 0.05,
            add_node_rate: 0.02,
            toggle_enable_rate: 0.01,
        }
    }
}

impl MutationParams {
    /// Every rate zero: [`mutate`] becomes the identity.
    pub fn none() -> Self {
        MutationParams {
            weight_rate: 0.0,
            bias_rate: 0.0,
            add_connection_rate: 0.0,
            add_node_rate: 0.0,
            toggle_enable_rate: 0.0,
            ..Self::default()
        }
    }

    pub(crate) fn check(&self) -> Result<(), (&'static str, f64)> {
        let rates = [
            ("weight_rate", self.weight_rate),
            ("bias_rate", self.bias_rate),
            ("add_connection_rate", self.add_connection_rate),
            ("add_node_rate", self.add_node_rate),
            ("toggle_enable_rate", self.toggle_enable_rate),
        ];
        for (name, rate) in rates {
            if !(0.0..=1.0).contains(&rate) {
                return Err((name, rate));
            }
        }
        for (name, sigma) in [("weight_sigma", self.weight_sigma), ("bias_sigma", self.bias_sigma)] {
            if !(sigma.is_finite() && sigma >= 0.0) {
                return Err((name, sigma));
            }
        }
        Ok(())
    }
}

/// Returns a mutated copy of `genome`.
///
/// Weight and bias perturbations are applied per gene; each structural
/// mutation (add connection, add node, toggle a connection) fires at most
/// once. Structural changes that have no legal target are skipped.
pub fn mutate<R: Rng + ?Sized>(
    genome: &Genome,
    rng: &mut R,
    params: &MutationParams,
    tracker: &mut InnovationTracker,
) -> Genome {
    let mut child = genome.clone();
    let weight_noise = Normal::new(0.0, params.weight_sigma).expect("sigma checked finite and >= 0");
    let bias_noise = Normal::new(0.0, params.bias_sigma).expect("sigma checked finite and >= 0");

    for c in child.connections_mut().iter_mut() {
        if rng.random::<f64>() < params.weight_rate {
            c.weight += weight_noise.sample(rng);
        }
    }
    for n in child.nodes_mut().iter_mut().filter(|n| n.role != NodeRole::Input) {
        if rng.random::<f64>() < params.bias_rate {
            n.bias += bias_noise.sample(rng);
        }
    }
    if rng.random::<f64>() < params.add_connection_rate {
        add_connection(&mut child, rng, tracker);
    }
    if rng.random::<f64>() < params.add_node_rate {
        add_node(&mut child, rng, tracker);
    }
    if rng.random::<f64>() < params.toggle_enable_rate {
        toggle_enable(&mut child, rng);
    }
    child
}

/// Adds a random new edge that keeps the enabled graph acyclic.
pub fn add_connection<R: Rng + ?Sized>(genome: &mut Genome, rng: &mut R, tracker: &mut InnovationTracker) -> bool {
    let mut candidates: Vec<(NodeId, NodeId)> = Vec::new();
    for from in genome.nodes().iter().filter(|n| n.role != NodeRole::Output) {
        for to in genome.nodes().iter().filter(|n| n.role != NodeRole::Input) {
            if from.id != to.id
                && !genome.has_edge(from.id, to.id)
                && !genome.would_create_cycle(from.id, to.id)
            {
                candidates.push((from.id, to.id));
            }
        }
    }
    let Some(&(from, to)) = candidates.choose(rng) else {
        return false;
    };
    genome.connections_mut().push(ConnectionGene {
        weight: rng.random_range(-1.0..=1.0),
        from,
        to,
        enabled: true,
        innovation: tracker.connection(from, to),
    });
    true
}

/// Splits a random enabled connection `a -> b` of weight `w` into
/// `a -> new` (weight 1) and `new -> b` (weight `w`), disabling the original.
pub fn add_node<R: Rng + ?Sized>(genome: &mut Genome, rng: &mut R, tracker: &mut InnovationTracker) -> bool {
    let enabled: Vec<usize> = genome
        .connections()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.enabled)
        .map(|(i, _)| i)
        .collect();
    let Some(&index) = enabled.choose(rng) else {
        return false;
    };
    let old = genome.connections()[index].clone();
    let mut node = tracker.split(old.innovation);
    if genome.node(node).is_some() {
        node = tracker.fresh_node();
    }
    genome.connections_mut()[index].enabled = false;
    genome.insert_node(NodeGene {
        id: node,
        role: NodeRole::Hidden,
        bias: 0.0,
    });
    let into = ConnectionGene {
        weight: 1.0,
        from: old.from,
        to: node,
        enabled: true,
        innovation: tracker.connection(old.from, node),
    };
    let out = ConnectionGene {
        weight: old.weight,
        from: node,
        to: old.to,
        enabled: true,
        innovation: tracker.connection(node, old.to),
    };
    genome.connections_mut().extend([into, out]);
    true
}

/// Flips the enabled flag of a random connection. Re-enabling is skipped
/// when it would close a cycle.
pub fn toggle_enable<R: Rng + ?Sized>(genome: &mut Genome, rng: &mut R) -> bool {
    let count = genome.connections().len();
    if count == 0 {
        return false;
    }
    let index = rng.random_range(0..count);
    let c = genome.connections()[index].clone();
    if !c.enabled && genome.would_create_cycle(c.from, c.to) {
        return false;
    }
    genome.connections_mut()[index].enabled = !c.enabled;
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neat::network::activate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn start(seed: u64) -> (Genome, ChaCha8Rng, InnovationTracker) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tracker = InnovationTracker::new();
        let g = Genome::initial(&mut rng, &mut tracker);
        (g, rng, tracker)
    }

    #[test]
    fn zero_rates_are_identity() {
        let (g, mut rng, mut tracker) = start(5);
        let before = tracker.clone();
        for _ in 0..100 {
            assert_eq!(mutate(&g, &mut rng, &MutationParams::none(), &mut tracker), g);
        }
        assert_eq!(tracker, before);
    }

    #[test]
    fn add_node_splits_canonically() {
        let (mut g, mut rng, mut tracker) = start(9);
        assert!(add_node(&mut g, &mut rng, &mut tracker));
        g.validate().unwrap();
        let disabled: Vec<_> = g.connections().iter().filter(|c| !c.enabled).collect();
        assert_eq!(disabled.len(), 1);
        let old = disabled[0].clone();
        let hidden = g.nodes().iter().find(|n| n.role == NodeRole::Hidden).unwrap().id;
        let into = g.connections().iter().find(|c| c.to == hidden).unwrap();
        let out = g.connections().iter().find(|c| c.from == hidden).unwrap();
        assert_eq!((into.from, into.weight), (old.from, 1.0));
        assert_eq!((out.to, out.weight), (old.to, old.weight));
    }

    #[test]
    fn add_node_keeps_function_close() {
        // The split feeds tanh(x) instead of x through the old weight, so the
        // drift is at most |w| * |x - tanh(x)| <= 0.14 for |x| <= 0.8, |w| <= 1.
        let mut sample = ChaCha8Rng::seed_from_u64(77);
        for seed in 0..50 {
            let (g, mut rng, mut tracker) = start(seed);
            let mut split = g.clone();
            add_node(&mut split, &mut rng, &mut tracker);
            for _ in 0..20 {
                let x: [f64; 3] = [
                    sample.random_range(-0.8..0.8),
                    sample.random_range(-0.8..0.8),
                    sample.random_range(-0.8..0.8),
                ];
                let drift = (activate(&g, &x).unwrap() - activate(&split, &x).unwrap()).abs();
                assert!(drift < 0.2, "seed {seed}: drift {drift}");
            }
        }
    }

    #[test]
    fn identical_splits_share_ids_within_generation() {
        let (g, mut rng, mut tracker) = start(2);
        let mut a = g.clone();
        let mut b = g.clone();
        // Disable all but the first connection so both genomes split the same gene.
        for genome in [&mut a, &mut b] {
            for c in genome.connections_mut().iter_mut().skip(1) {
                c.enabled = false;
            }
        }
        add_node(&mut a, &mut rng, &mut tracker);
        add_node(&mut b, &mut rng, &mut tracker);
        assert_eq!(a.nodes(), b.nodes());
        let innov = |g: &Genome| g.connections().iter().map(|c| c.innovation).collect::<Vec<_>>();
        assert_eq!(innov(&a), innov(&b));
    }

    #[test]
    fn add_connection_on_saturated_genome_is_skipped() {
        let (mut g, mut rng, mut tracker) = start(4);
        // 3 inputs -> 1 output is already complete.
        assert!(!add_connection(&mut g, &mut rng, &mut tracker));
        assert_eq!(g.connections().len(), 3);
    }

    #[test]
    fn toggle_never_closes_cycle() {
        let (mut g, mut rng, mut tracker) = start(6);
        add_node(&mut g, &mut rng, &mut tracker);
        add_node(&mut g, &mut rng, &mut tracker);
        for _ in 0..500 {
            toggle_enable(&mut g, &mut rng);
            add_connection(&mut g, &mut rng, &mut tracker);
            g.validate().unwrap();
        }
    }
}
