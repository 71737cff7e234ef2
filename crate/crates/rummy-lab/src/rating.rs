//! Two rating systems over the same game records.
//!
//! The traditional system is classic Elo on win/loss outcomes. The
//! score-based system rates each player's terminal points against a
//! benchmark share of the game's total points, where the share is set by a
//! logistic function of the pre-game rating gap and the dealt-hand quality
//! gap. A negative K inverts the step so that scoring below your benchmark
//! (fewer points left in hand than expected) moves your rating up, and an
//! indicator gates out steps that would penalize the winner or reward the
//! loser.

use crate::error::{Error, Result};
use crate::game::GameRecord;
use crate::melds::SCORE_CAP;

/// Default step size for the score-based system; |K| * 80 caps a single
/// rating move at 50 points.
pub const CUSTOM_K: f64 = -0.625;
/// Default weight of the rating gap inside the benchmark.
pub const ALPHA: f64 = -0.0032;
/// Default weight of the hand-quality gap inside the benchmark.
pub const BETA: f64 = -0.012690;
/// Default step size for the traditional system.
pub const ELO_K: f64 = 32.0;
/// Every player starts here.
pub const INITIAL_RATING: f64 = 1000.0;

/// One player's rating and experience.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatingState {
    pub rating: f64,
    pub games_played: u32,
}

impl Default for RatingState {
    fn default() -> RatingState {
        RatingState {
            rating: INITIAL_RATING,
            games_played: 0,
        }
    }
}

/// Step size policy: one constant K, or three experience bands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KMode {
    Constant(f64),
    /// k1 while games played <= p, k2 while <= q, k3 afterwards.
    Schedule {
        k1: f64,
        k2: f64,
        k3: f64,
        p: u32,
        q: u32,
    },
}

impl Default for KMode {
    fn default() -> KMode {
        KMode::Constant(CUSTOM_K)
    }
}

/// Illustrative banded schedule: big steps for newcomers, small for
/// veterans.
pub const DEFAULT_SCHEDULE: KMode = KMode::Schedule {
    k1: -1.0,
    k2: -0.625,
    k3: -0.4,
    p: 30,
    q: 100,
};

/// Parameters of the score-based system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatingParams {
    pub k_mode: KMode,
    pub alpha: f64,
    pub beta: f64,
    /// Highest deadwood count a hand can be charged; bounds every step.
    pub score_cap: u8,
}

impl Default for RatingParams {
    fn default() -> RatingParams {
        RatingParams {
            k_mode: KMode::Constant(CUSTOM_K),
            alpha: ALPHA,
            beta: BETA,
            score_cap: SCORE_CAP,
        }
    }
}

impl RatingParams {
    /// Rejects sign and ordering mistakes that would silently flip the
    /// system's direction: K and alpha must be negative, and banded steps
    /// must shrink with experience.
    pub fn validate(&self) -> Result<()> {
        match self.k_mode {
            KMode::Constant(k) => {
                if k >= 0.0 {
                    return Err(Error::Config(format!(
                        "score-based K must be negative, got {k}"
                    )));
                }
            }
            KMode::Schedule { k1, k2, k3, p, q } => {
                if k1 >= 0.0 || k2 >= 0.0 || k3 >= 0.0 {
                    return Err(Error::Config(format!(
                        "schedule steps must all be negative, got {k1}, {k2}, {k3}"
                    )));
                }
                if !(k1.abs() > k2.abs() && k2.abs() > k3.abs()) {
                    return Err(Error::Config(format!(
                        "schedule steps must shrink in magnitude, got |{k1}| > |{k2}| > |{k3}|"
                    )));
                }
                if p >= q {
                    return Err(Error::Config(format!(
                        "schedule bands require p < q, got p={p}, q={q}"
                    )));
                }
            }
        }
        if self.alpha >= 0.0 {
            return Err(Error::Config(format!(
                "alpha must be negative, got {}",
                self.alpha
            )));
        }
        if self.score_cap == 0 {
            return Err(Error::Config("score cap must be positive".into()));
        }
        Ok(())
    }

    /// Step size for a player with `n` rated games.
    pub fn k_for(&self, n: u32) -> f64 {
        match self.k_mode {
            KMode::Constant(k) => k,
            KMode::Schedule { k1, k2, k3, p, q } => {
                if n <= p {
                    k1
                } else if n <= q {
                    k2
                } else {
                    k3
                }
            }
        }
    }
}

/// Probability the first player wins under the classic 400-point logistic
/// curve.
pub fn expected_score_elo(ri: f64, rj: f64) -> f64 {
    1.0 / (1.0 + 10f64.powf((rj - ri) / 400.0))
}

/// Classic Elo step. `si` is the first player's result (1 win, 0.5 draw,
/// 0 loss); the pair moves zero-sum.
pub fn elo_update(ri: f64, rj: f64, si: f64, k: f64) -> (f64, f64) {
    let ei = expected_score_elo(ri, rj);
    let delta = k * (si - ei);
    (ri + delta, rj - delta)
}

/// Splits the game's total points `a` into per-player benchmark shares.
///
/// `d_r` is the pre-game rating gap (player 1 minus player 2) and `d_h`
/// the dealt-hand quality gap on the same orientation. With negative
/// alpha and beta, a stronger or better-dealt player 1 receives the
/// smaller share: the better you stand, the fewer points you are expected
/// to be left holding.
pub fn benchmarks(a: f64, d_r: f64, d_h: f64, alpha: f64, beta: f64) -> (f64, f64) {
    let b1 = a / (1.0 + 10f64.powf(-(alpha * d_r + beta * d_h)));
    (b1, a - b1)
}

/// Rating step toward the benchmark, gated so a winner is never pushed
/// down nor a loser up: the step applies only when the score surplus and
/// the result point the same way.
pub fn gated_delta(k: f64, a: f64, b: f64, w: f64) -> f64 {
    if (a - b) * (w - 0.5) <= 0.0 {
        k * (a - b)
    } else {
        0.0
    }
}

/// What a score-based update did with one record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CustomOutcome {
    Applied(UpdateResult),
    /// Drawn games carry no winner to anchor the gate, so the system
    /// leaves both ratings and game counts untouched.
    SkippedDraw,
}

/// Audit trail of one applied score-based update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpdateResult {
    pub d_r: f64,
    pub d_h: f64,
    pub b1: f64,
    pub b2: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// Whether the gate let the step through; identical for both seats.
    pub applied: bool,
}

/// Applies one game record to both players' score-based ratings.
///
/// Decided games move ratings by the gated benchmark step and count one
/// game of experience for each seat. Draws are skipped entirely.
pub fn custom_update(
    one: &mut RatingState,
    two: &mut RatingState,
    rec: &GameRecord,
    params: &RatingParams,
) -> CustomOutcome {
    if rec.w[0] == 0.5 {
        return CustomOutcome::SkippedDraw;
    }
    let d_r = one.rating - two.rating;
    let d_h = f64::from(rec.h[0]) - f64::from(rec.h[1]);
    let a = [f64::from(rec.a[0]), f64::from(rec.a[1])];
    let (b1, b2) = benchmarks(a[0] + a[1], d_r, d_h, params.alpha, params.beta);
    let delta1 = gated_delta(params.k_for(one.games_played), a[0], b1, rec.w[0]);
    let delta2 = gated_delta(params.k_for(two.games_played), a[1], b2, rec.w[1]);
    let applied = (a[0] - b1) * (rec.w[0] - 0.5) <= 0.0;
    one.rating += delta1;
    two.rating += delta2;
    one.games_played += 1;
    two.games_played += 1;
    CustomOutcome::Applied(UpdateResult {
        d_r,
        d_h,
        b1,
        b2,
        delta1,
        delta2,
        applied,
    })
}
