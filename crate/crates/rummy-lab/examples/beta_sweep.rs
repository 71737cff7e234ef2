//! Sweeps the hand-quality weight over a small grid and reports how well
//! each value predicts game outcomes from rating gaps alone.

use rummy_lab::agents::{AgentConfig, StrategyId};
use rummy_lab::harness::{build_schedule, simulate_games, ScheduleConfig};
use rummy_lab::tuning::{tune, TuneConfig};

fn main() {
    let cfg = ScheduleConfig {
        strategies: vec![StrategyId::Random, StrategyId::MinScore, StrategyId::MinDist],
        games_per_pair: 40,
        master_seed: 3,
    };
    let schedule = build_schedule(&cfg).unwrap();
    println!("playing {} games...", schedule.len());
    let records = simulate_games(&schedule, AgentConfig::default(), 0).unwrap();

    let grid: Vec<f64> = (-6..=6).map(|i| f64::from(i) / 200.0).collect();
    let result = tune(&records, &TuneConfig { beta_grid: grid, ..TuneConfig::default() }).unwrap();
    println!("\n  beta      f1");
    for (beta, f1) in &result.curve {
        match f1 {
            Some(f1) => println!("  {beta:>6}  {f1:.4}"),
            None => println!("  {beta:>6}  (fit failed)"),
        }
    }
    println!(
        "\nbest beta {} with f1 {:.4} on {} held-out games",
        result.best_beta, result.best_f1, result.test_games
    );
}
