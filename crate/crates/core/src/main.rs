use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use neatbird::env::{run_episode_traced, Action, WorldConfig};
use neatbird::evolution::{
    run_evolution_with, EpisodeSeedPolicy, EvolutionConfig, Selection,
};
use neatbird::harness::{
    emit_line_chart, read_champion, run_sweep, write_champion, write_generation_csv, ChampionFile,
    HarnessError, SweepSpec,
};
use neatbird::neat::Network;

#[derive(Parser, Debug)]
#[command(name = "neatbird", version, about = "Evolve Flappy-Bird agents with NEAT and sweep population sizes")]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, env = "NEATBIRD_OUT", default_value = "out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a single evolution and write its CSV, chart and champion.
    Run(RunArgs),
    /// Run every (population size, seed) cell and write per-cell and summary outputs.
    Sweep(SweepArgs),
    /// Replay a champion file on an episode seed.
    Replay(ReplayArgs),
    /// Plot CSV columns as an SVG line chart.
    Plot(PlotArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SelectionArg {
    Proportionate,
    Tournament,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SeedPolicyArg {
    PerGeneration,
    Global,
}

/// Evolution settings shared by `run` and `sweep`; unset flags keep defaults.
#[derive(Args, Debug)]
struct EvoArgs {
    /// World settings file (`name = value` lines).
    #[arg(long)]
    world: Option<PathBuf>,
    #[arg(long, default_value_t = 50)]
    generations: usize,
    #[arg(long)]
    elitism: Option<usize>,
    #[arg(long, value_enum)]
    selection: Option<SelectionArg>,
    /// Tournament size when `--selection tournament`.
    #[arg(long, default_value_t = 3)]
    tournament_size: usize,
    #[arg(long, value_enum)]
    seed_policy: Option<SeedPolicyArg>,
    /// Episodes averaged into each genome's fitness.
    #[arg(long)]
    episodes: Option<usize>,
    #[arg(long)]
    weight_rate: Option<f64>,
    #[arg(long)]
    weight_sigma: Option<f64>,
    #[arg(long)]
    bias_rate: Option<f64>,
    #[arg(long)]
    bias_sigma: Option<f64>,
    #[arg(long)]
    add_connection_rate: Option<f64>,
    #[arg(long)]
    add_node_rate: Option<f64>,
    #[arg(long)]
    toggle_enable_rate: Option<f64>,
    /// Validate the configuration, print it and exit without running.
    #[arg(long)]
    dry_run: bool,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, default_value_t = 100)]
    population: usize,
    #[arg(long, default_value_t = 0)]
    master_seed: u64,
    /// Champion file path (default: <out>/champion.txt).
    #[arg(long)]
    dump_champion: Option<PathBuf>,
    #[command(flatten)]
    evo: EvoArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Comma-separated population sizes.
    #[arg(long, value_delimiter = ',', default_values_t = [20, 40, 60, 80, 100, 120, 140, 160])]
    populations: Vec<usize>,
    /// Use master seeds 1..=N.
    #[arg(long, default_value_t = 5, conflicts_with = "seed_list")]
    seeds: u64,
    /// Comma-separated master seeds.
    #[arg(long, value_delimiter = ',')]
    seed_list: Option<Vec<u64>>,
    /// Subdirectory of the output directory for this sweep.
    #[arg(long, default_value = "sweep")]
    sweep_id: String,
    #[command(flatten)]
    evo: EvoArgs,
}

#[derive(Args, Debug)]
struct ReplayArgs {
    #[arg(long)]
    champion: PathBuf,
    /// Episode seed (default: the seed the champion was scored on).
    #[arg(long)]
    seed: Option<u64>,
    /// Print one line per frame.
    #[arg(long)]
    trace: bool,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[arg(long)]
    csv: PathBuf,
    /// Comma-separated columns to plot.
    #[arg(long, value_delimiter = ',', required = true)]
    columns: Vec<String>,
    /// X-axis column (default: the first column).
    #[arg(long)]
    x: Option<String>,
    /// Output SVG (default: the CSV path with an .svg extension).
    #[arg(long)]
    output: Option<PathBuf>,
}

impl EvoArgs {
    fn world(&self) -> Result<WorldConfig, HarnessError> {
        Ok(match &self.world {
            Some(path) => WorldConfig::load(path)?,
            None => WorldConfig::default(),
        })
    }

    fn evolution(&self, population: usize, master_seed: u64) -> EvolutionConfig {
        let mut config = EvolutionConfig {
            population_size: population,
            generations: self.generations,
            master_seed,
            ..EvolutionConfig::default()
        };
        if let Some(k) = self.elitism {
            config.elitism_count = k;
        }
        match self.selection {
            Some(SelectionArg::Tournament) => config.selection = Selection::Tournament(self.tournament_size),
            Some(SelectionArg::Proportionate) => config.selection = Selection::FitnessProportionate,
            None => {}
        }
        match self.seed_policy {
            Some(SeedPolicyArg::Global) => config.episode_seed_policy = EpisodeSeedPolicy::FixedGlobal,
            Some(SeedPolicyArg::PerGeneration) => {
                config.episode_seed_policy = EpisodeSeedPolicy::FixedPerGeneration
            }
            None => {}
        }
        if let Some(n) = self.episodes {
            config.episodes_per_genome = n;
        }
        let m = &mut config.mutation;
        for (slot, value) in [
            (&mut m.weight_rate, self.weight_rate),
            (&mut m.weight_sigma, self.weight_sigma),
            (&mut m.bias_rate, self.bias_rate),
            (&mut m.bias_sigma, self.bias_sigma),
            (&mut m.add_connection_rate, self.add_connection_rate),
            (&mut m.add_node_rate, self.add_node_rate),
            (&mut m.toggle_enable_rate, self.toggle_enable_rate),
        ] {
            if let Some(v) = value {
                *slot = v;
            }
        }
        config
    }
}

fn evolution_text(config: &EvolutionConfig) -> String {
    let selection = match config.selection {
        Selection::FitnessProportionate => "proportionate".to_string(),
        Selection::Tournament(k) => format!("tournament({k})"),
    };
    let policy = match config.episode_seed_policy {
        EpisodeSeedPolicy::FixedPerGeneration => "per-generation",
        EpisodeSeedPolicy::FixedGlobal => "global",
    };
    let m = &config.mutation;
    format!(
        "population_size = {}\ngenerations = {}\nelitism_count = {}\nselection = {selection}\n\
         episode_seed_policy = {policy}\nepisodes_per_genome = {}\nmaster_seed = {}\n\
         weight_rate = {}\nweight_sigma = {}\nbias_rate = {}\nbias_sigma = {}\n\
         add_connection_rate = {}\nadd_node_rate = {}\ntoggle_enable_rate = {}\n",
        config.population_size,
        config.generations,
        config.elitism_count,
        config.episodes_per_genome,
        config.master_seed,
        m.weight_rate,
        m.weight_sigma,
        m.bias_rate,
        m.bias_sigma,
        m.add_connection_rate,
        m.add_node_rate,
        m.toggle_enable_rate,
    )
}

fn cmd_run(out: &Path, args: &RunArgs) -> Result<(), HarnessError> {
    let world = args.evo.world()?;
    let config = args.evo.evolution(args.population, args.master_seed);
    config.validate()?;
    if args.evo.dry_run {
        print!("# evolution\n{}# world\n{}", evolution_text(&config), world.to_config_text());
        return Ok(());
    }
    let run = run_evolution_with(&config, &world, |s| {
        eprintln!(
            "generation {:>3}  max {:>10.3}  average {:>10.3}",
            s.generation_index, s.max_score, s.average_score
        );
    })?;
    let csv_path = out.join("run.csv");
    write_generation_csv(&run, &csv_path)?;
    emit_line_chart(
        &csv_path,
        &["average_score".to_string(), "max_score".to_string()],
        None,
        &out.join("run.svg"),
    )?;
    let champion_path = args.dump_champion.clone().unwrap_or_else(|| out.join("champion.txt"));
    let champion = ChampionFile::from_run(&run);
    write_champion(&champion, &champion_path)?;
    println!(
        "run average score {:.6}, max score {:.6}; champion scored {} on seed {} -> {}",
        run.run_average_score(),
        run.max_score(),
        champion.score,
        champion.episode_seed,
        champion_path.display()
    );
    Ok(())
}

fn cmd_sweep(out: &Path, args: &SweepArgs) -> Result<(), HarnessError> {
    let world = args.evo.world()?;
    let spec = SweepSpec {
        population_sizes: args.populations.clone(),
        generations: args.evo.generations,
        seeds: args.seed_list.clone().unwrap_or_else(|| (1..=args.seeds).collect()),
        evolution: args.evo.evolution(2, 0),
        world,
    };
    spec.validate()?;
    if args.evo.dry_run {
        println!("# sweep\npopulation_sizes = {:?}\nseeds = {:?}", spec.population_sizes, spec.seeds);
        let template = spec.cell_config(spec.population_sizes[0], spec.seeds[0]);
        print!("# evolution\n{}# world\n{}", evolution_text(&template), spec.world.to_config_text());
        return Ok(());
    }
    let dir = out.join(&args.sweep_id);
    let report = run_sweep(&spec, &dir, |r| {
        eprintln!(
            "population {:>4}  seed {:>4}  average {:>10.3}  max {:>10.3}",
            r.population, r.seed, r.average_score, r.max_score
        );
    })?;
    for p in &report.populations {
        println!(
            "population {:>4}: median average {:.6}, median max {:.6}, first spike {}",
            p.population,
            p.median_average_score,
            p.median_max_score,
            p.first_spike_generation.map_or("NA".to_string(), |g| g.to_string())
        );
    }
    println!("wrote {}", dir.display());
    Ok(())
}

fn cmd_replay(args: &ReplayArgs) -> Result<(), HarnessError> {
    let champion = read_champion(&args.champion)?;
    let seed = args.seed.unwrap_or(champion.episode_seed);
    let network = Network::compile(&champion.genome).map_err(|e| HarnessError::Champion {
        path: args.champion.clone(),
        source: e.into(),
    })?;
    let mut evaluator = network.evaluator();
    let height = champion.world.screen_height;
    let result = run_episode_traced(
        &champion.world,
        seed,
        |obs| evaluator.decide(&obs.normalized(height)),
        |world, action, outcome| {
            if args.trace {
                println!(
                    "frame {} y {:.6} vy {:.6} action {} score {} {}",
                    world.tick(),
                    world.bird().y,
                    world.bird().velocity_y,
                    if action == Action::Flap { "flap" } else { "none" },
                    world.score(),
                    outcome.as_str()
                );
            }
        },
    )?;
    println!("seed {seed}: score {} frames {} end {}", result.score, result.frames, result.end.as_str());
    if seed == champion.episode_seed {
        let verdict = if result.score == champion.score { "matches" } else { "differs from" };
        println!("{verdict} recorded score {}", champion.score);
    }
    Ok(())
}

fn cmd_plot(args: &PlotArgs) -> Result<(), HarnessError> {
    let output = args.output.clone().unwrap_or_else(|| args.csv.with_extension("svg"));
    emit_line_chart(&args.csv, &args.columns, args.x.as_deref(), &output)?;
    println!("wrote {}", output.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Run(args) => cmd_run(&cli.out, args),
        Command::Sweep(args) => cmd_sweep(&cli.out, args),
        Command::Replay(args) => cmd_replay(args),
        Command::Plot(args) => cmd_plot(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
