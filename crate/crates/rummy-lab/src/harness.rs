//! Round-robin tournament runner: schedule construction, parallel game
//! simulation, ordered rating replay, smoothing, and summary statistics.
//!
//! Games are independent of ratings (agents never see them), so the
//! expensive simulation step parallelizes freely; the rating systems then
//! replay the records strictly in schedule order, which keeps trajectories
//! identical to a fully sequential run.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::agents::{Agent, AgentConfig, StrategyId};
use crate::error::{Error, Result};
use crate::game::{play_game, GameRecord};
use crate::rating::{
    custom_update, elo_update, CustomOutcome, RatingParams, RatingState, UpdateResult,
};
use crate::rng::{derive_seed, stream_rng, STREAM_GAME_BASE, STREAM_SCHEDULE};

/// What to simulate: which strategies meet, how often, and under which
/// master seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleConfig {
    pub strategies: Vec<StrategyId>,
    pub games_per_pair: u32,
    pub master_seed: u64,
}

impl Default for ScheduleConfig {
    fn default() -> ScheduleConfig {
        ScheduleConfig {
            strategies: StrategyId::ALL.to_vec(),
            games_per_pair: 150,
            master_seed: 0,
        }
    }
}

/// One slot of the global schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduledGame {
    /// Position in the global play order, starting at 0.
    pub index: u64,
    pub first: StrategyId,
    pub second: StrategyId,
    /// Root seed of this game; deal, seats, and reshuffles all derive
    /// from it.
    pub seed: u64,
}

/// Every ordered pair of distinct strategies, `games_per_pair` times each,
/// globally shuffled by the master seed. Each strategy sits first exactly
/// as often as it sits second.
pub fn build_schedule(cfg: &ScheduleConfig) -> Result<Vec<ScheduledGame>> {
    if cfg.strategies.len() < 2 {
        return Err(Error::Config(
            "schedule needs at least two strategies".into(),
        ));
    }
    let mut seen = cfg.strategies.clone();
    seen.sort();
    seen.dedup();
    if seen.len() != cfg.strategies.len() {
        return Err(Error::Config("duplicate strategy in schedule".into()));
    }
    if cfg.games_per_pair == 0 {
        return Err(Error::Config("games per pair must be positive".into()));
    }
    let mut pairs = Vec::new();
    for &first in &cfg.strategies {
        for &second in &cfg.strategies {
            if first != second {
                for _ in 0..cfg.games_per_pair {
                    pairs.push((first, second));
                }
            }
        }
    }
    let mut rng = stream_rng(cfg.master_seed, STREAM_SCHEDULE);
    pairs.shuffle(&mut rng);
    Ok(pairs
        .into_iter()
        .enumerate()
        .map(|(i, (first, second))| ScheduledGame {
            index: i as u64,
            first,
            second,
            seed: derive_seed(cfg.master_seed, STREAM_GAME_BASE + i as u64),
        })
        .collect())
}

/// Plays every scheduled game, `threads` wide (0 picks the machine
/// default), returning records in schedule order.
pub fn simulate_games(
    schedule: &[ScheduledGame],
    agent_cfg: AgentConfig,
    threads: usize,
) -> Result<Vec<GameRecord>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| {
        schedule
            .par_iter()
            .map(|slot| {
                let mut one = Agent::for_seat(slot.first, agent_cfg, slot.seed, 0);
                let mut two = Agent::for_seat(slot.second, agent_cfg, slot.seed, 1);
                play_game(&mut one, &mut two, slot.seed).map_err(|e| match e {
                    Error::ProtocolViolation { seat, detail } => Error::ProtocolViolation {
                        seat,
                        detail: format!("game seed {}: {detail}", slot.seed),
                    },
                    other => other,
                })
            })
            .collect()
    })
}

/// Rating path of one strategy: (global game index, rating after that
/// game's update).
pub type Trajectory = Vec<(u64, f64)>;

/// Per-update audit trail of the score-based replay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditRow {
    pub game_index: u64,
    pub result: UpdateResult,
}

/// Outcome of replaying records through one rating system.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReplayOutput {
    pub trajectories: BTreeMap<StrategyId, Trajectory>,
    pub finals: BTreeMap<StrategyId, RatingState>,
    /// Filled by the score-based system only.
    pub audit: Vec<AuditRow>,
    /// Draws the score-based system refused to rate.
    pub skipped_draws: u64,
}

fn seat_ids(rec: &GameRecord) -> Result<(StrategyId, StrategyId)> {
    Ok((rec.seats[0].parse()?, rec.seats[1].parse()?))
}

/// Replays records in order through the score-based system. Draws are
/// counted and skipped; decided games append one trajectory point per
/// seat.
pub fn replay_custom(records: &[GameRecord], params: &RatingParams) -> Result<ReplayOutput> {
    params.validate()?;
    let mut out = ReplayOutput::default();
    let mut states: BTreeMap<StrategyId, RatingState> = BTreeMap::new();
    for (i, rec) in records.iter().enumerate() {
        let (first, second) = seat_ids(rec)?;
        let mut one = *states.entry(first).or_default();
        let mut two = *states.entry(second).or_default();
        match custom_update(&mut one, &mut two, rec, params) {
            CustomOutcome::Applied(result) => {
                let index = i as u64;
                states.insert(first, one);
                states.insert(second, two);
                out.trajectories
                    .entry(first)
                    .or_default()
                    .push((index, one.rating));
                out.trajectories
                    .entry(second)
                    .or_default()
                    .push((index, two.rating));
                out.audit.push(AuditRow { game_index: index, result });
            }
            CustomOutcome::SkippedDraw => out.skipped_draws += 1,
        }
    }
    out.finals = states;
    Ok(out)
}

/// Replays records in order through classic Elo with step size `k`.
/// Draws count as half a win for each seat.
pub fn replay_traditional(records: &[GameRecord], k: f64) -> Result<ReplayOutput> {
    if k <= 0.0 {
        return Err(Error::Config(format!("Elo K must be positive, got {k}")));
    }
    let mut out = ReplayOutput::default();
    let mut states: BTreeMap<StrategyId, RatingState> = BTreeMap::new();
    for (i, rec) in records.iter().enumerate() {
        let (first, second) = seat_ids(rec)?;
        let one = *states.entry(first).or_default();
        let two = *states.entry(second).or_default();
        let (r1, r2) = elo_update(one.rating, two.rating, rec.w[0], k);
        let index = i as u64;
        states.insert(
            first,
            RatingState {
                rating: r1,
                games_played: one.games_played + 1,
            },
        );
        states.insert(
            second,
            RatingState {
                rating: r2,
                games_played: two.games_played + 1,
            },
        );
        out.trajectories.entry(first).or_default().push((index, r1));
        out.trajectories.entry(second).or_default().push((index, r2));
    }
    out.finals = states;
    Ok(out)
}

/// Trailing moving average. The first `window - 1` positions average over
/// the shorter prefix that exists, so the output has the input's length.
pub fn moving_average(series: &[f64], window: usize) -> Result<Vec<f64>> {
    if window == 0 {
        return Err(Error::Config("smoothing window must be positive".into()));
    }
    if window > series.len() {
        return Err(Error::Config(format!(
            "smoothing window {window} exceeds series length {}",
            series.len()
        )));
    }
    let mut out = Vec::with_capacity(series.len());
    let mut sum = 0.0;
    for i in 0..series.len() {
        sum += series[i];
        if i >= window {
            sum -= series[i - window];
        }
        out.push(sum / window.min(i + 1) as f64);
    }
    Ok(out)
}

/// Mean, sample standard deviation, and coefficient of variation of a
/// trajectory tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub games: usize,
    pub mean: f64,
    pub sd: f64,
    /// 100 * sd / mean; negative when the mean is negative.
    pub cv_percent: f64,
}

/// Statistics over the post-burn-in tail of a rating series. `burn_in` is
/// the fraction of leading samples to drop.
pub fn summarize(series: &[f64], burn_in: f64) -> Result<SummaryStats> {
    if !(0.0..1.0).contains(&burn_in) {
        return Err(Error::Config(format!(
            "burn-in must lie in [0, 1), got {burn_in}"
        )));
    }
    let skip = (series.len() as f64 * burn_in).floor() as usize;
    let tail = &series[skip.min(series.len())..];
    if tail.is_empty() {
        return Err(Error::Degenerate("empty trajectory tail".into()));
    }
    let n = tail.len() as f64;
    let mean = tail.iter().sum::<f64>() / n;
    let sd = if tail.len() < 2 {
        0.0
    } else {
        let ss = tail.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>();
        (ss / (n - 1.0)).sqrt()
    };
    Ok(SummaryStats {
        games: tail.len(),
        mean,
        sd,
        cv_percent: 100.0 * sd / mean,
    })
}
