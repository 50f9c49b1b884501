//! Champion files: a genome in its text form, preceded by `#` comment lines
//! recording where it came from and the world it was scored in, so that it
//! can be replayed without the original configuration.

use std::collections::BTreeMap;
use std::path::Path;

use super::{write_file, HarnessError};
use crate::env::WorldConfig;
use crate::error::ParseError;
use crate::evolution::RunResult;
use crate::neat::{genome_from_text, genome_to_text, Genome};

const WORLD_PREFIX: &str = "# world ";

#[derive(Clone, Debug, PartialEq)]
pub struct ChampionFile {
    pub genome: Genome,
    pub world: WorldConfig,
    pub population: usize,
    pub master_seed: u64,
    /// Generation in which the champion was found.
    pub generation: usize,
    /// Seed of the episode the champion was scored on.
    pub episode_seed: u64,
    pub score: u64,
    pub frames: u64,
    pub end: String,
}

impl ChampionFile {
    pub fn from_run(run: &RunResult) -> Self {
        let generation = run
            .stats
            .iter()
            .position(|s| s.episode_seed == run.champion_seed && s.best_fitness == run.champion.fitness)
            .unwrap_or(0);
        ChampionFile {
            genome: run.champion.clone(),
            world: run.world.clone(),
            population: run.evolution.population_size,
            master_seed: run.evolution.master_seed,
            generation,
            episode_seed: run.champion_seed,
            score: run.champion_episode.score,
            frames: run.champion_episode.frames,
            end: run.champion_episode.end.as_str().to_string(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# neatbird champion\n");
        for (key, value) in [
            ("population", self.population.to_string()),
            ("master_seed", self.master_seed.to_string()),
            ("generation", self.generation.to_string()),
            ("episode_seed", self.episode_seed.to_string()),
            ("score", self.score.to_string()),
            ("frames", self.frames.to_string()),
            ("end", self.end.clone()),
        ] {
            out.push_str(&format!("# {key}: {value}\n"));
        }
        for line in self.world.to_config_text().lines() {
            out.push_str(WORLD_PREFIX);
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&genome_to_text(&self.genome));
        out
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut meta = BTreeMap::new();
        let mut world_text = String::new();
        for (idx, line) in text.lines().enumerate() {
            if let Some(setting) = line.strip_prefix(WORLD_PREFIX) {
                world_text.push_str(setting);
                world_text.push('\n');
            } else if let Some((key, value)) = line.strip_prefix("# ").and_then(|rest| rest.split_once(": ")) {
                meta.insert(key.trim().to_string(), (idx + 1, value.trim().to_string()));
            }
        }
        let world = WorldConfig::parse(&world_text).map_err(|e| ParseError::Line {
            line: 0,
            message: format!("world settings: {e}"),
        })?;
        let field = |key: &'static str| -> Result<u64, ParseError> {
            let (line, value) = meta.get(key).ok_or(ParseError::MissingRow(key))?;
            value.parse().map_err(|_| ParseError::Line {
                line: *line,
                message: format!("`{value}` is not a valid {key}"),
            })
        };
        let end = meta
            .get("end")
            .map(|(_, v)| v.clone())
            .ok_or(ParseError::MissingRow("end"))?;
        Ok(ChampionFile {
            genome: genome_from_text(text)?,
            world,
            population: field("population")? as usize,
            master_seed: field("master_seed")?,
            generation: field("generation")? as usize,
            episode_seed: field("episode_seed")?,
            score: field("score")?,
            frames: field("frames")?,
            end,
        })
    }
}

pub fn write_champion(champion: &ChampionFile, path: &Path) -> Result<(), HarnessError> {
    write_file(path, &champion.to_text())
}

pub fn read_champion(path: &Path) -> Result<ChampionFile, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    ChampionFile::parse(&text).map_err(|source| HarnessError::Champion {
        path: path.to_path_buf(),
        source,
    })
}
