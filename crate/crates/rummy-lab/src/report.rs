//! CSV and text output shared by the command-line tools, plus the reader
//! that turns a records file back into replayable game records.
//!
//! All files are UTF-8 with a header row and fixed column order. Floats
//! that feed plots are written with six decimals so repeated runs produce
//! byte-identical files.

use std::fmt::Write as _;

use crate::agents::StrategyId;
use crate::error::{Error, Result};
use crate::game::GameRecord;
use crate::harness::{moving_average, summarize, ReplayOutput, SummaryStats};
use crate::tuning::{CurvePoint, TuneResult};

pub const RECORDS_HEADER: &str =
    "game_index,seed,first,second,h1,h2,a1,a2,w1,w2,turns,termination";

/// One row per game, in schedule order.
pub fn render_records_csv(records: &[GameRecord]) -> String {
    let mut out = String::from(RECORDS_HEADER);
    out.push('\n');
    for (i, rec) in records.iter().enumerate() {
        writeln!(
            out,
            "{i},{},{},{},{},{},{},{},{},{},{},{}",
            rec.seed,
            rec.seats[0],
            rec.seats[1],
            rec.h[0],
            rec.h[1],
            rec.a[0],
            rec.a[1],
            rec.w[0],
            rec.w[1],
            rec.turns,
            rec.termination,
        )
        .unwrap();
    }
    out
}

/// Inverse of `render_records_csv`, strict about shape: the header must
/// match and game indices must count up from zero.
pub fn parse_records_csv(text: &str) -> Result<Vec<GameRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header.trim_end() == RECORDS_HEADER => {}
        got => {
            return Err(Error::Parse(format!(
                "records header mismatch: got {:?}",
                got.unwrap_or("")
            )))
        }
    }
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = i + 2;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 12 {
            return Err(Error::Parse(format!(
                "records row {row}: expected 12 fields, got {}",
                fields.len()
            )));
        }
        fn field<T: std::str::FromStr>(row: usize, name: &str, s: &str) -> Result<T> {
            s.parse().map_err(|_| {
                Error::Parse(format!("records row {row}: bad {name} value {s:?}"))
            })
        }
        let index: usize = field(row, "game_index", fields[0])?;
        if index != i {
            return Err(Error::Parse(format!(
                "records row {row}: game_index {index} out of order, expected {i}"
            )));
        }
        records.push(GameRecord {
            seed: field(row, "seed", fields[1])?,
            seats: [fields[2].to_string(), fields[3].to_string()],
            h: [field(row, "h1", fields[4])?, field(row, "h2", fields[5])?],
            a: [field(row, "a1", fields[6])?, field(row, "a2", fields[7])?],
            w: [field(row, "w1", fields[8])?, field(row, "w2", fields[9])?],
            turns: field(row, "turns", fields[10])?,
            termination: field(row, "termination", fields[11])?,
        });
    }
    Ok(records)
}

/// Raw and smoothed rating paths, one row per (game, strategy) update.
/// Rows are grouped by strategy and ordered by game index within each.
/// A window longer than a strategy's series is clamped to its length so
/// short smoke runs still export.
pub fn render_trajectories_csv(replay: &ReplayOutput, window: usize) -> Result<String> {
    let mut out = String::from("game_index,strategy,rating,smoothed\n");
    for (id, traj) in &replay.trajectories {
        if traj.is_empty() {
            continue;
        }
        let ratings: Vec<f64> = traj.iter().map(|&(_, r)| r).collect();
        let smoothed = moving_average(&ratings, window.clamp(1, ratings.len()))?;
        for (&(index, rating), smooth) in traj.iter().zip(&smoothed) {
            writeln!(out, "{index},{},{rating:.6},{smooth:.6}", id.as_str()).unwrap();
        }
    }
    Ok(out)
}

/// Per-strategy statistics over the trajectory tail, sorted by descending
/// mean.
pub fn summary_rows(
    replay: &ReplayOutput,
    burn_in: f64,
) -> Result<Vec<(StrategyId, SummaryStats)>> {
    let mut rows = Vec::new();
    for (&id, traj) in &replay.trajectories {
        let ratings: Vec<f64> = traj.iter().map(|&(_, r)| r).collect();
        rows.push((id, summarize(&ratings, burn_in)?));
    }
    rows.sort_by(|a, b| b.1.mean.total_cmp(&a.1.mean));
    Ok(rows)
}

pub fn render_summary_csv(rows: &[(StrategyId, SummaryStats)]) -> String {
    let mut out = String::from("strategy,games,mean,sd,cv_percent\n");
    for (id, stats) in rows {
        writeln!(
            out,
            "{},{},{:.3},{:.3},{:.3}",
            id.as_str(),
            stats.games,
            stats.mean,
            stats.sd,
            stats.cv_percent
        )
        .unwrap();
    }
    out
}

/// Fixed-width table for the terminal, labels as in the published
/// summaries.
pub fn render_summary_table(title: &str, rows: &[(StrategyId, SummaryStats)]) -> String {
    let mut out = format!("{title}\n");
    writeln!(
        out,
        "{:<18} {:>7} {:>12} {:>10} {:>8}",
        "strategy", "games", "mean", "sd", "cv%"
    )
    .unwrap();
    for (id, stats) in rows {
        writeln!(
            out,
            "{:<18} {:>7} {:>12.3} {:>10.3} {:>8.3}",
            id.label(),
            stats.games,
            stats.mean,
            stats.sd,
            stats.cv_percent
        )
        .unwrap();
    }
    out
}

/// Score-based update audit trail, one row per rated game.
pub fn render_audit_csv(replay: &ReplayOutput) -> String {
    let mut out = String::from("game_index,d_r,d_h,b1,b2,delta1,delta2,applied\n");
    for row in &replay.audit {
        let r = row.result;
        writeln!(
            out,
            "{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{}",
            row.game_index, r.d_r, r.d_h, r.b1, r.b2, r.delta1, r.delta2, r.applied
        )
        .unwrap();
    }
    out
}

/// The sweep curve; failed points leave the f1 field empty.
pub fn render_f1_curve_csv(curve: &[CurvePoint]) -> String {
    let mut out = String::from("beta,f1\n");
    for &(beta, f1) in curve {
        match f1 {
            Some(v) => writeln!(out, "{beta},{v:.6}").unwrap(),
            None => writeln!(out, "{beta},").unwrap(),
        }
    }
    out
}

pub fn render_best_beta(result: &TuneResult) -> String {
    format!(
        "best_beta = {}\nbest_f1 = {:.6}\ntrain_games = {}\ntest_games = {}\n",
        result.best_beta, result.best_f1, result.train_games, result.test_games
    )
}
