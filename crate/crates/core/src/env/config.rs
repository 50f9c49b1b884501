//! Physics constants and the flat `name = number` config file format.

use std::path::Path;

use crate::error::ConfigError;

/// Physics and layout constants for one environment.
///
/// All lengths are pixels, all velocities pixels per frame and the y axis
/// points down (roof at `0`, ground at `screen_height`).
#[derive(Clone, Debug, PartialEq)]
pub struct WorldConfig {
    pub gravity_accel: f64,
    /// Velocity the bird is reset to on a flap; negative is upward.
    pub jump_velocity: f64,
    /// Horizontal speed shared by the floor and the pipes.
    pub scroll_velocity: f64,
    pub pipe_gap: f64,
    /// Horizontal distance between the left edges of consecutive pipe pairs.
    pub pipe_spacing: f64,
    pub screen_height: f64,
    pub screen_width: f64,
    pub bird_x: f64,
    /// Half-extent of the bird's square hitbox.
    pub bird_radius: f64,
    pub pipe_width: f64,
    pub gap_center_min: f64,
    pub gap_center_max: f64,
    /// Episodes end successfully once this many pipes are crossed.
    pub max_score_cap: u64,
}

impl Default for WorldConfig {
    fn default() -> Self {
        WorldConfig {
            gravity_accel: 1.2,
            jump_velocity: -10.5,
            scroll_velocity: 5.0,
            pipe_gap: 320.0,
            pipe_spacing: 300.0,
            screen_height: 800.0,
            screen_width: 576.0,
            bird_x: 100.0,
            bird_radius: 12.0,
            pipe_width: 80.0,
            gap_center_min: 160.0,
            gap_center_max: 640.0,
            max_score_cap: 10_000,
        }
    }
}

/// Keys accepted by [`WorldConfig::parse`], in the order they are printed.
pub const WORLD_KEYS: [&str; 13] = [
    "gravity_accel",
    "jump_velocity",
    "scroll_velocity",
    "pipe_gap",
    "pipe_spacing",
    "screen_height",
    "screen_width",
    "bird_x",
    "bird_radius",
    "pipe_width",
    "gap_center_min",
    "gap_center_max",
    "max_score_cap",
];

impl WorldConfig {
    /// Checks every invariant, naming the first offending field.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |field: &'static str, reason: String| {
            Err(ConfigError::InvalidField { field, reason })
        };

        for (name, value) in self.real_fields() {
            if !value.is_finite() {
                return invalid(name, format!("must be finite, got {value}"));
            }
        }
        if self.screen_height <= 0.0 {
            return invalid("screen_height", "must be positive".into());
        }
        if self.screen_width <= 0.0 {
            return invalid("screen_width", "must be positive".into());
        }
        if self.pipe_gap <= 0.0 {
            return invalid("pipe_gap", "must be positive".into());
        }
        if self.pipe_gap >= self.screen_height {
            return invalid(
                "pipe_gap",
                format!("{} leaves no room for pipes in a {} px screen", self.pipe_gap, self.screen_height),
            );
        }
        let half_gap = self.pipe_gap / 2.0;
        if self.gap_center_min < half_gap {
            return invalid(
                "gap_center_min",
                format!("{} is below pipe_gap/2 = {half_gap}", self.gap_center_min),
            );
        }
        if self.gap_center_max > self.screen_height - half_gap {
            return invalid(
                "gap_center_max",
                format!(
                    "{} exceeds screen_height - pipe_gap/2 = {}",
                    self.gap_center_max,
                    self.screen_height - half_gap
                ),
            );
        }
        if self.gap_center_min > self.gap_center_max {
            return invalid(
                "gap_center_min",
                format!("{} exceeds gap_center_max {}", self.gap_center_min, self.gap_center_max),
            );
        }
        if self.scroll_velocity <= 0.0 {
            return invalid("scroll_velocity", "must be positive".into());
        }
        if self.pipe_width <= 0.0 {
            return invalid("pipe_width", "must be positive".into());
        }
        if self.pipe_spacing <= self.pipe_width {
            return invalid(
                "pipe_spacing",
                format!("{} must exceed pipe_width {}", self.pipe_spacing, self.pipe_width),
            );
        }
        if self.bird_radius < 0.0 {
            return invalid("bird_radius", "must be non-negative".into());
        }
        if self.bird_x < 0.0 || self.bird_x >= self.screen_width {
            return invalid("bird_x", "must lie on screen".into());
        }
        if self.gravity_accel < 0.0 {
            return invalid("gravity_accel", "must be non-negative".into());
        }
        if self.max_score_cap < 1 {
            return invalid("max_score_cap", "must be at least 1".into());
        }
        Ok(())
    }

    fn real_fields(&self) -> [(&'static str, f64); 12] {
        [
            ("gravity_accel", self.gravity_accel),
            ("jump_velocity", self.jump_velocity),
            ("scroll_velocity", self.scroll_velocity),
            ("pipe_gap", self.pipe_gap),
            ("pipe_spacing", self.pipe_spacing),
            ("screen_height", self.screen_height),
            ("screen_width", self.screen_width),
            ("bird_x", self.bird_x),
            ("bird_radius", self.bird_radius),
            ("pipe_width", self.pipe_width),
            ("gap_center_min", self.gap_center_min),
            ("gap_center_max", self.gap_center_max),
        ]
    }

    fn set(&mut self, key: &str, raw: &str, line: usize) -> Result<(), ConfigError> {
        let bad_number = || ConfigError::BadValue {
            line,
            key: key.to_string(),
            value: raw.to_string(),
        };
        if key == "max_score_cap" {
            self.max_score_cap = raw.parse().map_err(|_| bad_number())?;
            return Ok(());
        }
        let value: f64 = raw.parse().map_err(|_| bad_number())?;
        let slot = match key {
            "gravity_accel" => &mut self.gravity_accel,
            "jump_velocity" => &mut self.jump_velocity,
            "scroll_velocity" => &mut self.scroll_velocity,
            "pipe_gap" => &mut self.pipe_gap,
            "pipe_spacing" => &mut self.pipe_spacing,
            "screen_height" => &mut self.screen_height,
            "screen_width" => &mut self.screen_width,
            "bird_x" => &mut self.bird_x,
            "bird_radius" => &mut self.bird_radius,
            "pipe_width" => &mut self.pipe_width,
            "gap_center_min" => &mut self.gap_center_min,
            "gap_center_max" => &mut self.gap_center_max,
            _ => {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                })
            }
        };
        *slot = value;
        Ok(())
    }

    /// Parses `name = number` lines on top of the defaults.
    ///
    /// Blank lines and `#` comments (whole-line or trailing) are ignored.
    /// Unknown keys and repeated keys are errors. The result is validated.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut config = WorldConfig::default();
        let mut seen = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax {
                    line,
                    text: raw_line.to_string(),
                })?;
            let (key, value) = (key.trim(), value.trim());
            if seen.iter().any(|k: &String| k == key) {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: key.to_string(),
                });
            }
            config.set(key, value, line)?;
            seen.push(key.to_string());
        }
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Renders the config in the same format [`WorldConfig::parse`] reads.
    pub fn to_config_text(&self) -> String {
        let mut out = String::new();
        for (name, value) in self.real_fields() {
            out.push_str(&format!("{name} = {value}\n"));
        }
        out.push_str(&format!("max_score_cap = {}\n", self.max_score_cap));
        out
    }
}
