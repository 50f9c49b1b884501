//! Population-size sweeps: one evolution per (population size, seed) cell,
//! aggregated into per-size medians.

use std::path::Path;

use super::champion::{write_champion, ChampionFile};
use super::chart::{emit_line_chart, render_line_chart};
use super::report::{quantize, write_generation_csv};
use super::{write_file, HarnessError};
use crate::env::WorldConfig;
use crate::error::ConfigError;
use crate::evolution::{run_evolution, EvolutionConfig, RunResult};

pub const RUNS_HEADER: &str = "population,seed,average_score,max_score,first_spike_generation";
pub const SUMMARY_HEADER: &str = "population,median_average_score,median_max_score,first_spike_generation";

/// Ratio over the generation-0 average that counts as the end of the
/// initial training phase.
const SPIKE_FACTOR: f64 = 5.0;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub population_sizes: Vec<usize>,
    pub generations: usize,
    /// Master seeds; each population size is run once per seed.
    pub seeds: Vec<u64>,
    pub world: WorldConfig,
    /// Template for every cell; population size, generation count and
    /// master seed are overridden per cell.
    pub evolution: EvolutionConfig,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            population_sizes: (1..=8).map(|i| i * 20).collect(),
            generations: 50,
            seeds: (1..=5).collect(),
            world: WorldConfig::default(),
            evolution: EvolutionConfig::default(),
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |field, reason: &str| {
            Err(ConfigError::InvalidField {
                field,
                reason: reason.to_string(),
            })
        };
        if self.population_sizes.is_empty() {
            return invalid("population_sizes", "must not be empty");
        }
        if self.seeds.is_empty() {
            return invalid("seeds", "must not be empty");
        }
        if self.population_sizes.iter().any(|&n| n < 2) {
            return invalid("population_sizes", "every size must be at least 2");
        }
        self.world.validate()?;
        for &population in &self.population_sizes {
            self.cell_config(population, self.seeds[0]).validate()?;
        }
        Ok(())
    }

    pub fn cell_config(&self, population: usize, seed: u64) -> EvolutionConfig {
        EvolutionConfig {
            population_size: population,
            generations: self.generations,
            master_seed: seed,
            elitism_count: self.evolution.elitism_count.min(population),
            ..self.evolution.clone()
        }
    }
}

/// One sweep cell, computed from the six-decimal values written to its CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub population: usize,
    pub seed: u64,
    /// Mean over generations of the generation average score.
    pub average_score: f64,
    /// Highest generation max score.
    pub max_score: f64,
    pub first_spike_generation: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PopulationSummary {
    pub population: usize,
    pub median_average_score: f64,
    pub median_max_score: f64,
    /// Median over seeds, counting runs that never spiked as +infinity;
    /// `None` when that median is infinite.
    pub first_spike_generation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    /// One entry per cell, population-major in spec order.
    pub runs: Vec<RunSummary>,
    /// One entry per population size in spec order.
    pub populations: Vec<PopulationSummary>,
}

/// Earliest generation whose average score is positive and at least five
/// times the generation-0 average.
pub fn first_spike_generation(averages: &[f64]) -> Option<usize> {
    let base = *averages.first()?;
    averages.iter().position(|&a| a > 0.0 && a >= SPIKE_FACTOR * base)
}

/// Median of a non-empty slice; the mean of the two middle values for even
/// lengths.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty list");
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    }
}

pub fn summarize_run(run: &RunResult) -> RunSummary {
    let averages: Vec<f64> = run.stats.iter().map(|s| quantize(s.average_score)).collect();
    RunSummary {
        population: run.evolution.population_size,
        seed: run.evolution.master_seed,
        average_score: averages.iter().sum::<f64>() / averages.len() as f64,
        max_score: run.stats.iter().map(|s| quantize(s.max_score)).fold(0.0, f64::max),
        first_spike_generation: first_spike_generation(&averages),
    }
}

fn summarize_population(population: usize, runs: &[RunSummary]) -> PopulationSummary {
    let cells: Vec<&RunSummary> = runs.iter().filter(|r| r.population == population).collect();
    let column = |f: fn(&RunSummary) -> f64| median(&cells.iter().map(|r| f(r)).collect::<Vec<_>>());
    let spike = column(|r| r.first_spike_generation.map_or(f64::INFINITY, |g| g as f64));
    PopulationSummary {
        population,
        median_average_score: column(|r| r.average_score),
        median_max_score: column(|r| r.max_score),
        first_spike_generation: spike.is_finite().then_some(spike),
    }
}

fn spike_text(spike: Option<f64>) -> String {
    spike.map_or_else(|| "NA".to_string(), |g| g.to_string())
}

pub fn cell_stem(population: usize, seed: u64) -> String {
    format!("pop{population}_seed{seed}")
}

/// Runs every cell, writing its CSV, chart and champion into `dir` as it
/// completes, then the run table, summary table and summary chart.
pub fn run_sweep<F>(spec: &SweepSpec, dir: &Path, mut on_cell: F) -> Result<SweepReport, HarnessError>
where
    F: FnMut(&RunSummary),
{
    spec.validate()?;
    let mut runs = Vec::with_capacity(spec.population_sizes.len() * spec.seeds.len());
    for &population in &spec.population_sizes {
        for &seed in &spec.seeds {
            let run = run_evolution(&spec.cell_config(population, seed), &spec.world)?;
            let stem = cell_stem(population, seed);
            let csv_path = dir.join(format!("{stem}.csv"));
            write_generation_csv(&run, &csv_path)?;
            emit_line_chart(
                &csv_path,
                &["average_score".to_string(), "max_score".to_string()],
                None,
                &dir.join(format!("{stem}.svg")),
            )?;
            write_champion(&ChampionFile::from_run(&run), &dir.join(format!("champion_{stem}.txt")))?;
            let summary = summarize_run(&run);
            on_cell(&summary);
            runs.push(summary);
        }
    }
    let populations = spec
        .population_sizes
        .iter()
        .map(|&p| summarize_population(p, &runs))
        .collect();
    let report = SweepReport { runs, populations };
    write_runs_csv(&report, &dir.join("runs.csv"))?;
    write_sweep_summary(&report, &dir.join("summary.csv"))?;
    write_file(&dir.join("summary.svg"), &summary_chart(&report))?;
    Ok(report)
}

fn summary_chart(report: &SweepReport) -> String {
    let xs: Vec<f64> = report.populations.iter().map(|p| p.population as f64).collect();
    let series = vec![
        (
            "median_average_score".to_string(),
            report.populations.iter().map(|p| p.median_average_score).collect(),
        ),
        (
            "median_max_score".to_string(),
            report.populations.iter().map(|p| p.median_max_score).collect(),
        ),
    ];
    render_line_chart("Scores by initial population", "population", &xs, &series)
}

pub fn runs_csv(report: &SweepReport) -> String {
    let mut out = format!("{RUNS_HEADER}\n");
    for r in &report.runs {
        out.push_str(&format!(
            "{},{},{:.6},{:.6},{}\n",
            r.population,
            r.seed,
            r.average_score,
            r.max_score,
            r.first_spike_generation.map_or_else(|| "NA".to_string(), |g| g.to_string())
        ));
    }
    out
}

pub fn summary_csv(report: &SweepReport) -> String {
    let mut out = format!("{SUMMARY_HEADER}\n");
    for p in &report.populations {
        out.push_str(&format!(
            "{},{:.6},{:.6},{}\n",
            p.population,
            p.median_average_score,
            p.median_max_score,
            spike_text(p.first_spike_generation)
        ));
    }
    out
}

pub fn write_runs_csv(report: &SweepReport, path: &Path) -> Result<(), HarnessError> {
    write_file(path, &runs_csv(report))
}

pub fn write_sweep_summary(report: &SweepReport, path: &Path) -> Result<(), HarnessError> {
    write_file(path, &summary_csv(report))
}
