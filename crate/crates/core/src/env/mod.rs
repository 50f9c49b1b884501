//! Headless Flappy-Bird-style environment.

mod config;
mod world;

pub use config::{WorldConfig, WORLD_KEYS};
pub use world::{
    run_episode, run_episode_traced, Action, BirdState, CollisionKind, EpisodeResult, Observation,
    PipePair, WorldState,
};
