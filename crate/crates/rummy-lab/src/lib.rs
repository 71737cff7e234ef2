//! Deterministic two-player Indian Rummy simulator and rating laboratory.
//!
//! The crate simulates full games between rule-based agents, rates the
//! agents with either a score-based rating system that discounts lucky
//! wins, or traditional Elo, and tunes the score system's hand-quality
//! coefficient against game records. Everything downstream of a seed is
//! deterministic: same seeds, same games, byte-identical outputs.
//!
//! Start with [`cards::deal`] for a single layout, [`melds::MeldSolver`]
//! for hand metrics, or the `examples/` directory for end-to-end runs.

pub mod agents;
pub mod cards;
pub mod config;
pub mod error;
pub mod game;
pub mod harness;
pub mod melds;
pub mod rating;
pub mod report;
pub mod rng;
pub mod tuning;

pub use agents::{Agent, AgentConfig, StrategyId};
pub use config::{Scale, Settings};
pub use cards::{card_points, deal, Card, DealLayout, Hand, Rank, Suit, WildcardRank};
pub use error::{Error, Result};
pub use game::{play_game, play_game_logged, GameRecord, Player, Termination};
pub use harness::{build_schedule, simulate_games, ScheduleConfig, SummaryStats};
pub use rating::{custom_update, elo_update, CustomOutcome, KMode, RatingParams, RatingState};
pub use tuning::{fit_logistic, tune, TuneConfig, TuneResult};
pub use melds::{
    is_meld, Arrangement, DistTieBreak, HandMetrics, Meld, MeldKind, MeldSolver,
};
