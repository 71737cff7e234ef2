//! Flat key=value settings file shared by every subcommand.
//!
//! Lines hold one `key = value` each; `#` starts a comment; unknown or
//! repeated keys are errors so that typos fail loudly instead of running a
//! default silently. `render` emits the complete effective settings in a
//! fixed order, and `parse(render(s)) == s`, which lets a run echo its
//! exact configuration in a form the next run can consume.

use std::str::FromStr;

use crate::agents::{AgentConfig, StrategyId};
use crate::error::{Error, Result};
use crate::harness::ScheduleConfig;
use crate::rating::{KMode, RatingParams, ALPHA, BETA, CUSTOM_K, ELO_K};
use crate::tuning::TuneConfig;

/// Default games per directed pair at desk scale.
pub const DESK_GAMES: u32 = 150;
/// Games per directed pair used by the published experiment.
pub const PAPER_GAMES: u32 = 4500;

/// Experiment size preset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Desk,
    Paper,
}

impl Scale {
    pub fn games_per_pair(self) -> u32 {
        match self {
            Scale::Desk => DESK_GAMES,
            Scale::Paper => PAPER_GAMES,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scale::Desk => "desk",
            Scale::Paper => "paper",
        }
    }
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scale> {
        match s {
            "desk" => Ok(Scale::Desk),
            "paper" => Ok(Scale::Paper),
            other => Err(Error::Config(format!(
                "unknown scale {other:?}; expected desk or paper"
            ))),
        }
    }
}

/// Which rating systems a run replays.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemChoice {
    pub custom: bool,
    pub traditional: bool,
}

impl Default for SystemChoice {
    fn default() -> SystemChoice {
        SystemChoice {
            custom: true,
            traditional: true,
        }
    }
}

/// Every tunable setting, with the defaults of a desk-scale run.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub master_seed: u64,
    pub scale: Scale,
    /// 0 derives the count from `scale`; any other value wins.
    pub games_per_pair: u32,
    pub strategies: Vec<StrategyId>,
    pub systems: SystemChoice,
    pub threads: usize,
    pub pickup_threshold: u8,
    pub k: f64,
    /// Empty uses constant `k`; otherwise (k1, k2, k3, p, q).
    pub k_schedule: Option<(f64, f64, f64, u32, u32)>,
    pub alpha: f64,
    pub beta: f64,
    pub elo_k: f64,
    pub window: usize,
    pub burn_in: f64,
    pub split: f64,
    pub split_seed: u64,
    pub beta_grid_min: f64,
    pub beta_grid_max: f64,
    pub beta_grid_points: usize,
}

impl Default for Settings {
    fn default() -> Settings {
        Settings {
            master_seed: 0,
            scale: Scale::Desk,
            games_per_pair: 0,
            strategies: StrategyId::ALL.to_vec(),
            systems: SystemChoice::default(),
            threads: 0,
            pickup_threshold: 3,
            k: CUSTOM_K,
            k_schedule: None,
            alpha: ALPHA,
            beta: BETA,
            elo_k: ELO_K,
            window: 500,
            burn_in: 0.0,
            split: 0.8,
            split_seed: 0,
            beta_grid_min: -0.03,
            beta_grid_max: 0.03,
            beta_grid_points: 61,
        }
    }
}

impl Settings {
    /// Games per directed pair after applying the scale preset.
    pub fn effective_games_per_pair(&self) -> u32 {
        if self.games_per_pair > 0 {
            self.games_per_pair
        } else {
            self.scale.games_per_pair()
        }
    }

    pub fn schedule_config(&self) -> ScheduleConfig {
        ScheduleConfig {
            strategies: self.strategies.clone(),
            games_per_pair: self.effective_games_per_pair(),
            master_seed: self.master_seed,
        }
    }

    pub fn agent_config(&self) -> AgentConfig {
        AgentConfig {
            pickup_threshold: self.pickup_threshold,
        }
    }

    pub fn rating_params(&self) -> RatingParams {
        let k_mode = match self.k_schedule {
            None => KMode::Constant(self.k),
            Some((k1, k2, k3, p, q)) => KMode::Schedule { k1, k2, k3, p, q },
        };
        RatingParams {
            k_mode,
            alpha: self.alpha,
            beta: self.beta,
            ..RatingParams::default()
        }
    }

    pub fn tune_config(&self) -> Result<TuneConfig> {
        if self.beta_grid_points < 1 {
            return Err(Error::Config("beta grid needs at least one point".into()));
        }
        if self.beta_grid_points > 1 && self.beta_grid_min >= self.beta_grid_max {
            return Err(Error::Config(format!(
                "beta grid bounds must increase, got [{}, {}]",
                self.beta_grid_min, self.beta_grid_max
            )));
        }
        let grid = if self.beta_grid_points == 1 {
            vec![self.beta_grid_min]
        } else {
            let step = (self.beta_grid_max - self.beta_grid_min)
                / (self.beta_grid_points - 1) as f64;
            (0..self.beta_grid_points)
                .map(|i| self.beta_grid_min + step * i as f64)
                .collect()
        };
        Ok(TuneConfig {
            beta_grid: grid,
            alpha: self.alpha,
            split: self.split,
            split_seed: self.split_seed,
        })
    }

    /// Cross-field validation shared by all subcommands.
    pub fn validate(&self) -> Result<()> {
        self.rating_params().validate()?;
        if self.elo_k <= 0.0 {
            return Err(Error::Config(format!(
                "elo_k must be positive, got {}",
                self.elo_k
            )));
        }
        if self.window == 0 {
            return Err(Error::Config("window must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.burn_in) {
            return Err(Error::Config(format!(
                "burn_in must lie in [0, 1), got {}",
                self.burn_in
            )));
        }
        if !(self.split > 0.0 && self.split < 1.0) {
            return Err(Error::Config(format!(
                "split must lie in (0, 1), got {}",
                self.split
            )));
        }
        if !self.systems.custom && !self.systems.traditional {
            return Err(Error::Config("no rating system enabled".into()));
        }
        self.tune_config()?;
        Ok(())
    }

    /// Parses file text, starting from defaults.
    pub fn parse(text: &str) -> Result<Settings> {
        let mut settings = Settings::default();
        let mut seen: Vec<String> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            if seen.iter().any(|k| k == key) {
                return Err(Error::Config(format!(
                    "line {}: duplicate key {key:?}",
                    lineno + 1
                )));
            }
            seen.push(key.to_string());
            settings
                .apply(key, value)
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(settings)
    }

    /// Applies one key=value pair; the CLI reuses this for flag overrides.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T>
        where
            T::Err: std::fmt::Display,
        {
            value
                .parse()
                .map_err(|e| Error::Config(format!("{key}: {e}")))
        }
        match key {
            "master_seed" => self.master_seed = num(key, value)?,
            "scale" => self.scale = value.parse()?,
            "games_per_pair" => self.games_per_pair = num(key, value)?,
            "strategies" => {
                let ids: Result<Vec<StrategyId>> =
                    value.split(',').map(|s| s.trim().parse()).collect();
                self.strategies = ids?;
            }
            "rating_systems" => {
                let mut choice = SystemChoice {
                    custom: false,
                    traditional: false,
                };
                for part in value.split(',') {
                    match part.trim() {
                        "custom" => choice.custom = true,
                        "traditional" => choice.traditional = true,
                        other => {
                            return Err(Error::Config(format!(
                                "unknown rating system {other:?}"
                            )))
                        }
                    }
                }
                self.systems = choice;
            }
            "threads" => self.threads = num(key, value)?,
            "pickup_threshold" => self.pickup_threshold = num(key, value)?,
            "k" => self.k = num(key, value)?,
            "k_schedule" => {
                if value.is_empty() {
                    self.k_schedule = None;
                } else {
                    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                    if parts.len() != 5 {
                        return Err(Error::Config(
                            "k_schedule needs k1,k2,k3,p,q".into(),
                        ));
                    }
                    self.k_schedule = Some((
                        num("k1", parts[0])?,
                        num("k2", parts[1])?,
                        num("k3", parts[2])?,
                        num("p", parts[3])?,
                        num("q", parts[4])?,
                    ));
                }
            }
            "alpha" => self.alpha = num(key, value)?,
            "beta" => self.beta = num(key, value)?,
            "elo_k" => self.elo_k = num(key, value)?,
            "window" => self.window = num(key, value)?,
            "burn_in" => self.burn_in = num(key, value)?,
            "split" => self.split = num(key, value)?,
            "split_seed" => self.split_seed = num(key, value)?,
            "beta_grid_min" => self.beta_grid_min = num(key, value)?,
            "beta_grid_max" => self.beta_grid_max = num(key, value)?,
            "beta_grid_points" => self.beta_grid_points = num(key, value)?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Complete effective settings, parseable back into an equal value.
    pub fn render(&self) -> String {
        let strategies = self
            .strategies
            .iter()
            .map(|s| s.as_str())
            .collect::<Vec<_>>()
            .join(",");
        let systems = match (self.systems.custom, self.systems.traditional) {
            (true, true) => "custom,traditional",
            (true, false) => "custom",
            (false, true) => "traditional",
            (false, false) => "",
        };
        let k_schedule = match self.k_schedule {
            None => String::new(),
            Some((k1, k2, k3, p, q)) => format!("{k1},{k2},{k3},{p},{q}"),
        };
        format!(
            "master_seed = {}\nscale = {}\ngames_per_pair = {}\nstrategies = {}\n\
             rating_systems = {}\nthreads = {}\npickup_threshold = {}\nk = {}\n\
             k_schedule = {}\nalpha = {}\nbeta = {}\nelo_k = {}\nwindow = {}\n\
             burn_in = {}\nsplit = {}\nsplit_seed = {}\nbeta_grid_min = {}\n\
             beta_grid_max = {}\nbeta_grid_points = {}\n",
            self.master_seed,
            self.scale.as_str(),
            self.games_per_pair,
            strategies,
            systems,
            self.threads,
            self.pickup_threshold,
            self.k,
            k_schedule,
            self.alpha,
            self.beta,
            self.elo_k,
            self.window,
            self.burn_in,
            self.split,
            self.split_seed,
            self.beta_grid_min,
            self.beta_grid_max,
            self.beta_grid_points,
        )
    }
}
