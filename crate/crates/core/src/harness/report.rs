use std::path::Path;

use super::{write_file, HarnessError};
use crate::evolution::RunResult;

pub const GENERATION_HEADER: &str = "generation,max_score,average_score,average_fitness";

/// Rounds to the six decimals every CSV carries, so aggregates computed
/// from in-memory values match aggregates recomputed from the files.
pub fn quantize(v: f64) -> f64 {
    format!("{v:.6}").parse().expect("formatted float parses")
}

pub fn generation_csv(run: &RunResult) -> String {
    let mut out = String::from(GENERATION_HEADER);
    out.push('\n');
    for s in &run.stats {
        out.push_str(&format!(
            "{},{:.6},{:.6},{:.6}\n",
            s.generation_index, s.max_score, s.average_score, s.average_fitness
        ));
    }
    out
}

pub fn write_generation_csv(run: &RunResult, path: &Path) -> Result<(), HarnessError> {
    write_file(path, &generation_csv(run))
}
