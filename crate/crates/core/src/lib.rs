//! Headless Flappy-Bird neuroevolution.
//!
//! * [`env`]: deterministic fixed-timestep game world.
//! * [`neat`]: genomes, feed-forward evaluation and genetic operators.
//! * [`evolution`]: the generation loop and per-generation statistics.
//! * [`harness`]: population sweeps, CSV/SVG output and champion files.

pub mod env;
pub mod error;
pub mod evolution;
pub mod harness;
pub mod neat;
