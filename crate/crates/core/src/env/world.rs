//! Fixed-timestep world: bird integration, pipe scrolling, scoring and
//! collision detection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::WorldConfig;
use crate::error::{ConfigError, EnvError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    Flap,
    NoFlap,
}

/// Outcome of a single step. Everything except `None` ends the episode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CollisionKind {
    PipeHit,
    RoofHit,
    GroundHit,
    ScoreCapReached,
    None,
}

impl CollisionKind {
    pub fn is_terminal(self) -> bool {
        self != CollisionKind::None
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CollisionKind::PipeHit => "PipeHit",
            CollisionKind::RoofHit => "RoofHit",
            CollisionKind::GroundHit => "GroundHit",
            CollisionKind::ScoreCapReached => "ScoreCapReached",
            CollisionKind::None => "None",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipePair {
    /// Left edge.
    pub x: f64,
    /// Bottom edge of the top pipe.
    pub gap_top_y: f64,
    /// Top edge of the bottom pipe.
    pub gap_bottom_y: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BirdState {
    pub y: f64,
    pub velocity_y: f64,
}

/// Network input features for one frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observation {
    pub bird_y: f64,
    /// `bird_y - gap_top_y` of the nearest unpassed pipe.
    pub dist_to_top: f64,
    /// `gap_bottom_y - bird_y` of the nearest unpassed pipe.
    pub dist_to_bottom: f64,
}

impl Observation {
    /// Features divided by the screen height, in network input order.
    pub fn normalized(&self, screen_height: f64) -> [f64; 3] {
        [
            self.bird_y / screen_height,
            self.dist_to_top / screen_height,
            self.dist_to_bottom / screen_height,
        ]
    }
}

// Gap edges and the observed bird height are snapped to multiples of 2^-32 px.
// On that lattice the two distance features are exact differences, so they
// always sum to the gap bit-for-bit (for screens under 2^21 px and
// lattice-aligned pipe gaps).
const OBSERVATION_LATTICE: f64 = 4_294_967_296.0;

fn snap(v: f64) -> f64 {
    // Truncation toward zero; any fixed rounding rule keeps values on the lattice.
    ((v * OBSERVATION_LATTICE) as i64) as f64 / OBSERVATION_LATTICE
}

#[derive(Clone, Debug, PartialEq)]
pub struct WorldState {
    config: WorldConfig,
    bird: BirdState,
    pipes: Vec<PipePair>,
    tick: u64,
    score: u64,
    /// Passed pipes that scrolled off the left edge and were dropped.
    retired: u64,
    rng: ChaCha8Rng,
    terminal: Option<CollisionKind>,
}

impl WorldState {
    /// Fresh world: bird centred and at rest, first pipe at the right edge.
    pub fn new(config: WorldConfig, seed: u64) -> Result<Self, ConfigError> {
        config.validate()?;
        let mut world = WorldState {
            bird: BirdState {
                y: config.screen_height / 2.0,
                velocity_y: 0.0,
            },
            pipes: Vec::new(),
            tick: 0,
            score: 0,
            retired: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            terminal: None,
            config,
        };
        let first = world.spawn_pipe(world.config.screen_width);
        world.pipes.push(first);
        world.top_up_pipes();
        Ok(world)
    }

    pub fn config(&self) -> &WorldConfig {
        &self.config
    }

    pub fn bird(&self) -> &BirdState {
        &self.bird
    }

    /// Pipes currently on or ahead of the screen, ascending by `x`.
    pub fn pipes(&self) -> &[PipePair] {
        &self.pipes
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn score(&self) -> u64 {
        self.score
    }

    /// Number of passed pipes that have already been dropped from [`Self::pipes`].
    pub fn retired_pipes(&self) -> u64 {
        self.retired
    }

    pub fn terminal(&self) -> Option<CollisionKind> {
        self.terminal
    }

    fn spawn_pipe(&mut self, x: f64) -> PipePair {
        let c = &self.config;
        let center = self
            .rng
            .random_range(c.gap_center_min..=c.gap_center_max)
            .round()
            .clamp(c.gap_center_min, c.gap_center_max);
        let gap_top_y = snap(center - c.pipe_gap / 2.0);
        PipePair {
            x,
            gap_top_y,
            gap_bottom_y: snap(gap_top_y + c.pipe_gap),
            passed: false,
        }
    }

    fn top_up_pipes(&mut self) {
        while let Some(last) = self.pipes.last() {
            if last.x + self.config.pipe_spacing > self.config.screen_width && !last.passed {
                break;
            }
            let next = self.spawn_pipe(last.x + self.config.pipe_spacing);
            self.pipes.push(next);
        }
    }

    /// Advances one frame.
    ///
    /// A flap resets the vertical velocity before integration. Position is
    /// advanced by `v + a/2` and only then `v` by `a`, which makes the
    /// trajectory after `t` flap-free frames exactly `v0*t + a*t^2/2`.
    pub fn step(&mut self, action: Action) -> Result<CollisionKind, EnvError> {
        if self.terminal.is_some() {
            return Err(EnvError::Terminal);
        }
        let c = &self.config;
        if action == Action::Flap {
            self.bird.velocity_y = c.jump_velocity;
        }
        self.bird.y += self.bird.velocity_y + 0.5 * c.gravity_accel;
        self.bird.velocity_y += c.gravity_accel;
        self.tick += 1;

        let y = self.bird.y;
        let mut outcome = if y < 0.0 {
            CollisionKind::RoofHit
        } else if y > c.screen_height {
            CollisionKind::GroundHit
        } else {
            CollisionKind::None
        };
        let (left, right) = (c.bird_x - c.bird_radius, c.bird_x + c.bird_radius);
        let (top, bottom) = (y - c.bird_radius, y + c.bird_radius);
        for pipe in &mut self.pipes {
            pipe.x -= c.scroll_velocity;
            if outcome == CollisionKind::None
                && pipe.x < right
                && pipe.x + c.pipe_width > left
                && (top < pipe.gap_top_y || bottom > pipe.gap_bottom_y)
            {
                outcome = CollisionKind::PipeHit;
            }
        }
        if outcome.is_terminal() {
            self.terminal = Some(outcome);
            return Ok(outcome);
        }
        for pipe in &mut self.pipes {
            if !pipe.passed && pipe.x + c.pipe_width < c.bird_x {
                pipe.passed = true;
                self.score += 1;
            }
        }

        self.top_up_pipes();
        let pipe_width = self.config.pipe_width;
        if self.pipes[0].x + pipe_width < 0.0 {
            let off_screen = self
                .pipes
                .iter()
                .take_while(|p| p.passed && p.x + pipe_width < 0.0)
                .count();
            self.pipes.drain(..off_screen);
            self.retired += off_screen as u64;
        }

        if self.score >= self.config.max_score_cap {
            self.terminal = Some(CollisionKind::ScoreCapReached);
            return Ok(CollisionKind::ScoreCapReached);
        }
        Ok(CollisionKind::None)
    }

    /// The pipe the bird is heading for.
    pub fn next_pipe(&self) -> &PipePair {
        let bird_x = self.config.bird_x;
        self.pipes
            .iter()
            .find(|p| !p.passed && p.x + self.config.pipe_width >= bird_x)
            .expect("spawning keeps an unpassed pipe ahead of the bird")
    }

    pub fn observe(&self) -> Observation {
        let pipe = self.next_pipe();
        let y = snap(self.bird.y);
        Observation {
            bird_y: y,
            dist_to_top: y - pipe.gap_top_y,
            dist_to_bottom: pipe.gap_bottom_y - y,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EpisodeResult {
    pub score: u64,
    pub frames: u64,
    pub end: CollisionKind,
}

/// Plays one episode from a fresh world until it terminates.
pub fn run_episode<P>(config: &WorldConfig, seed: u64, policy: P) -> Result<EpisodeResult, ConfigError>
where
    P: FnMut(&Observation) -> Action,
{
    run_episode_traced(config, seed, policy, |_, _, _| {})
}

/// Like [`run_episode`], calling `trace` after every frame with the state,
/// the action taken and the step outcome.
pub fn run_episode_traced<P, T>(
    config: &WorldConfig,
    seed: u64,
    mut policy: P,
    mut trace: T,
) -> Result<EpisodeResult, ConfigError>
where
    P: FnMut(&Observation) -> Action,
    T: FnMut(&WorldState, Action, CollisionKind),
{
    let mut world = WorldState::new(config.clone(), seed)?;
    loop {
        let action = policy(&world.observe());
        let outcome = world
            .step(action)
            .expect("loop exits as soon as the world is terminal");
        trace(&world, action, outcome);
        if outcome.is_terminal() {
            return Ok(EpisodeResult {
                score: world.score(),
                frames: world.tick(),
                end: outcome,
            });
        }
    }
}
