use std::collections::HashMap;

use rand::Rng;

use super::genome::{ConnectionGene, Genome, Innovation};

/// Recombines two parents, aligning connection genes by innovation number.
///
/// Matching genes come from either parent with equal probability (weight
/// and enabled flag together); disjoint and excess genes come only from the
/// fitter parent, with ties going to `parent_a`. Shared hidden and output
/// nodes take their bias from a random parent. Any inherited enabled gene
/// that would close a cycle is disabled.
pub fn crossover<R: Rng + ?Sized>(parent_a: &Genome, parent_b: &Genome, rng: &mut R) -> Genome {
    let (fitter, other) = if parent_b.fitness > parent_a.fitness {
        (parent_b, parent_a)
    } else {
        (parent_a, parent_b)
    };
    let other_genes: HashMap<Innovation, &ConnectionGene> =
        other.connections().iter().map(|c| (c.innovation, c)).collect();

    let connections: Vec<ConnectionGene> = fitter
        .connections()
        .iter()
        .map(|gene| match other_genes.get(&gene.innovation) {
            Some(&matching) if rng.random_bool(0.5) => matching.clone(),
            _ => gene.clone(),
        })
        .collect();

    let mut nodes = fitter.nodes().to_vec();
    for node in &mut nodes {
        if let Some(theirs) = other.node(node.id) {
            if rng.random_bool(0.5) {
                node.bias = theirs.bias;
            }
        }
    }
    let mut child = Genome::from_parts(nodes, connections).expect("fitter parent has unique node ids");
    // Matching innovations normally share endpoints; pull in any node the
    // other parent's copy of a gene refers to that the fitter parent lacks.
    let missing: Vec<_> = child
        .connections()
        .iter()
        .flat_map(|c| [c.from, c.to])
        .filter(|&id| child.node(id).is_none())
        .collect();
    for id in missing {
        if let Some(node) = other.node(id) {
            child.insert_node(node.clone());
        }
    }
    child.repair();
    child
}
