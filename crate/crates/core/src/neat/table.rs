//! Column-per-connection chromosome encoding and its text form.
//!
//! A table is four labeled rows, one value per connection:
//!
//! ```text
//! Weight 0.25 2.31 1.55
//! From 1 2 3
//! To 2 3 2
//! Enabled 1 0 1
//! ```
//!
//! A serialized genome prefixes the table with a `nodes` line listing
//! `id:role:bias` triples, and may carry `fitness` and `#` comment lines.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use super::genome::{ConnectionGene, Genome, Innovation, NodeGene, NodeId, NodeRole};
use crate::error::{GenomeError, ParseError};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Column {
    pub weight: f64,
    pub from: NodeId,
    pub to: NodeId,
    /// `1` enabled, `0` dropped. Other values only survive until [`decode`].
    pub enabled: i64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ChromosomeTable {
    pub columns: Vec<Column>,
}

const ROWS: [&str; 4] = ["Weight", "From", "To", "Enabled"];

/// One column per connection, in list order.
pub fn encode(genome: &Genome) -> ChromosomeTable {
    ChromosomeTable {
        columns: genome
            .connections()
            .iter()
            .map(|c| Column {
                weight: c.weight,
                from: c.from,
                to: c.to,
                enabled: i64::from(c.enabled),
            })
            .collect(),
    }
}

/// Rebuilds a genome from a table and its node set.
///
/// Connections keep column order and are numbered by column index. Only the
/// table's own constraints are checked (known endpoints, 0/1 flags, unique
/// edges); [`Genome::validate`] decides whether the result is playable.
pub fn decode(table: &ChromosomeTable, nodes: Vec<NodeGene>) -> Result<Genome, GenomeError> {
    let ids: HashSet<NodeId> = nodes.iter().map(|n| n.id).collect();
    let mut edges = HashSet::new();
    let mut connections = Vec::with_capacity(table.columns.len());
    for (column, col) in table.columns.iter().enumerate() {
        for node in [col.from, col.to] {
            if !ids.contains(&node) {
                return Err(GenomeError::UnknownNode { column, node });
            }
        }
        let enabled = match col.enabled {
            0 => false,
            1 => true,
            value => return Err(GenomeError::EnabledOutOfRange { column, value }),
        };
        if !edges.insert((col.from, col.to)) {
            return Err(GenomeError::DuplicateEdge {
                column,
                from: col.from,
                to: col.to,
            });
        }
        connections.push(ConnectionGene {
            weight: col.weight,
            from: col.from,
            to: col.to,
            enabled,
            innovation: column as Innovation,
        });
    }
    Genome::from_parts(nodes, connections)
}

impl fmt::Display for ChromosomeTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_row(f, ROWS[0], self.columns.iter().map(|c| c.weight))?;
        write_row(f, ROWS[1], self.columns.iter().map(|c| c.from))?;
        write_row(f, ROWS[2], self.columns.iter().map(|c| c.to))?;
        write_row(f, ROWS[3], self.columns.iter().map(|c| c.enabled))
    }
}

fn write_row<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    label: &str,
    values: impl Iterator<Item = T>,
) -> fmt::Result {
    f.write_str(label)?;
    for v in values {
        write!(f, " {v}")?;
    }
    f.write_str("\n")
}

fn parse_values<T: FromStr>(line: usize, label: &str, rest: &str) -> Result<Vec<T>, ParseError> {
    rest.split_whitespace()
        .map(|token| {
            token.parse().map_err(|_| ParseError::Line {
                line,
                message: format!("`{token}` is not a valid {label} value"),
            })
        })
        .collect()
}

#[derive(Default)]
struct Rows {
    weight: Option<Vec<f64>>,
    from: Option<Vec<NodeId>>,
    to: Option<Vec<NodeId>>,
    enabled: Option<Vec<i64>>,
}

impl Rows {
    /// Consumes `content` if it is a table row; returns false otherwise.
    fn accept(&mut self, line: usize, content: &str) -> Result<bool, ParseError> {
        let (label, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let duplicate = || ParseError::Line {
            line,
            message: format!("`{label}` row given twice"),
        };
        match label {
            "Weight" if self.weight.is_some() => Err(duplicate()),
            "From" if self.from.is_some() => Err(duplicate()),
            "To" if self.to.is_some() => Err(duplicate()),
            "Enabled" if self.enabled.is_some() => Err(duplicate()),
            "Weight" => {
                let values: Vec<f64> = parse_values(line, label, rest)?;
                if let Some(bad) = values.iter().find(|w| !w.is_finite()) {
                    return Err(ParseError::Line {
                        line,
                        message: format!("weight {bad} is not finite"),
                    });
                }
                self.weight = Some(values);
                Ok(true)
            }
            "From" => {
                self.from = Some(parse_values(line, label, rest)?);
                Ok(true)
            }
            "To" => {
                self.to = Some(parse_values(line, label, rest)?);
                Ok(true)
            }
            "Enabled" => {
                self.enabled = Some(parse_values(line, label, rest)?);
                Ok(true)
            }
            _ => Ok(false),
        }
    }

    fn finish(self) -> Result<ChromosomeTable, ParseError> {
        let weight = self.weight.ok_or(ParseError::MissingRow("Weight"))?;
        let from = self.from.ok_or(ParseError::MissingRow("From"))?;
        let to = self.to.ok_or(ParseError::MissingRow("To"))?;
        let enabled = self.enabled.ok_or(ParseError::MissingRow("Enabled"))?;
        let n = weight.len();
        if from.len() != n || to.len() != n || enabled.len() != n {
            return Err(GenomeError::RaggedTable.into());
        }
        let columns = (0..n)
            .map(|i| Column {
                weight: weight[i],
                from: from[i],
                to: to[i],
                enabled: enabled[i],
            })
            .collect();
        Ok(ChromosomeTable { columns })
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

impl FromStr for ChromosomeTable {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, ParseError> {
        let mut rows = Rows::default();
        for (line, content) in content_lines(text) {
            if !rows.accept(line, content)? {
                return Err(ParseError::Line {
                    line,
                    message: format!("unexpected line `{content}`"),
                });
            }
        }
        rows.finish()
    }
}

/// Text form of a whole genome: node list, optional fitness, then the table.
pub fn genome_to_text(genome: &Genome) -> String {
    let mut out = String::from("nodes");
    for n in genome.nodes() {
        out.push_str(&format!(" {}:{}:{}", n.id, n.role.as_str(), n.bias));
    }
    out.push('\n');
    out.push_str(&format!("fitness {}\n", genome.fitness));
    out.push_str(&encode(genome).to_string());
    out
}

/// Parses [`genome_to_text`] output and checks that the genome is playable.
pub fn genome_from_text(text: &str) -> Result<Genome, ParseError> {
    let mut rows = Rows::default();
    let mut nodes: Option<Vec<NodeGene>> = None;
    let mut fitness = 0.0;
    for (line, content) in content_lines(text) {
        if rows.accept(line, content)? {
            continue;
        }
        let (label, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        match label {
            "nodes" => nodes = Some(parse_nodes(line, rest)?),
            "fitness" => {
                fitness = rest.trim().parse().map_err(|_| ParseError::Line {
                    line,
                    message: format!("`{}` is not a valid fitness", rest.trim()),
                })?
            }
            _ => {
                return Err(ParseError::Line {
                    line,
                    message: format!("unexpected line `{content}`"),
                })
            }
        }
    }
    let nodes = nodes.ok_or(ParseError::MissingRow("nodes"))?;
    let table = rows.finish()?;
    let mut genome = decode(&table, nodes)?;
    genome.validate()?;
    genome.fitness = fitness;
    Ok(genome)
}

fn parse_nodes(line: usize, rest: &str) -> Result<Vec<NodeGene>, ParseError> {
    rest.split_whitespace()
        .map(|token| {
            let bad = || ParseError::Line {
                line,
                message: format!("`{token}` is not an id:role:bias node"),
            };
            let mut parts = token.split(':');
            let (Some(id), Some(role), Some(bias), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(bad());
            };
            let bias: f64 = bias.parse().map_err(|_| bad())?;
            if !bias.is_finite() {
                return Err(bad());
            }
            Ok(NodeGene {
                id: id.parse().map_err(|_| bad())?,
                role: NodeRole::parse(role).ok_or_else(bad)?,
                bias,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neat::InnovationTracker;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn four_hidden() -> Vec<NodeGene> {
        (1..=4)
            .map(|id| NodeGene {
                id,
                role: NodeRole::Hidden,
                bias: 0.0,
            })
            .collect()
    }

    #[test]
    fn empty_genome_encodes_to_empty_table() {
        let g = Genome::from_parts(four_hidden(), vec![]).unwrap();
        let table = encode(&g);
        assert!(table.columns.is_empty());
        assert_eq!(table.to_string(), "Weight\nFrom\nTo\nEnabled\n");
        assert_eq!(table.to_string().parse::<ChromosomeTable>().unwrap(), table);
    }

    #[test]
    fn enabled_value_two_is_rejected() {
        let table: ChromosomeTable = "Weight 0.5\nFrom 1\nTo 2\nEnabled 2\n".parse().unwrap();
        assert_eq!(
            decode(&table, four_hidden()),
            Err(GenomeError::EnabledOutOfRange { column: 0, value: 2 })
        );
    }

    #[test]
    fn decode_rejects_unknown_nodes_and_duplicates() {
        let table: ChromosomeTable = "Weight 0.5\nFrom 1\nTo 9\nEnabled 1\n".parse().unwrap();
        assert_eq!(
            decode(&table, four_hidden()),
            Err(GenomeError::UnknownNode { column: 0, node: 9 })
        );
        let table: ChromosomeTable = "Weight 0.5 0.1\nFrom 1 1\nTo 2 2\nEnabled 1 0\n".parse().unwrap();
        assert_eq!(
            decode(&table, four_hidden()),
            Err(GenomeError::DuplicateEdge { column: 1, from: 1, to: 2 })
        );
    }

    #[test]
    fn ragged_and_missing_rows_fail_to_parse() {
        assert_eq!(
            "Weight 0.5 1\nFrom 1\nTo 2\nEnabled 1\n".parse::<ChromosomeTable>(),
            Err(ParseError::Genome(GenomeError::RaggedTable))
        );
        assert_eq!(
            "Weight 0.5\nFrom 1\nTo 2\n".parse::<ChromosomeTable>(),
            Err(ParseError::MissingRow("Enabled"))
        );
        assert!(matches!(
            "Weight x\nFrom 1\nTo 2\nEnabled 1\n".parse::<ChromosomeTable>(),
            Err(ParseError::Line { line: 1, .. })
        ));
    }

    #[test]
    fn genome_text_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut tracker = InnovationTracker::new();
        let mut g = Genome::initial(&mut rng, &mut tracker);
        crate::neat::add_node(&mut g, &mut rng, &mut tracker);
        g.nodes_mut()[3].bias = -0.125;
        g.fitness = 17.000_321;
        let text = genome_to_text(&g);
        let back = genome_from_text(&text).unwrap();
        assert_eq!(back.nodes(), g.nodes());
        assert_eq!(back.fitness, g.fitness);
        assert_eq!(encode(&back), encode(&g));
    }

    #[test]
    fn genome_text_rejects_unplayable_genomes() {
        let text = "nodes 1:hidden:0 2:hidden:0\nWeight 1\nFrom 1\nTo 2\nEnabled 1\n";
        assert!(matches!(
            genome_from_text(text),
            Err(ParseError::Genome(GenomeError::NodeCount { .. }))
        ));
        assert!(matches!(
            genome_from_text("nodes 0:input:zero\n"),
            Err(ParseError::Line { line: 1, .. })
        ));
    }
}
