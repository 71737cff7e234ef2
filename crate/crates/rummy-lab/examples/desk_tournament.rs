//! Runs a reduced tournament across all six strategies and prints both
//! rating summaries. Pass games per directed pair (default 10, the full
//! desk run uses 150): `cargo run --release --example desk_tournament -- 25`.

use rummy_lab::agents::AgentConfig;
use rummy_lab::harness::{build_schedule, replay_custom, replay_traditional, simulate_games, ScheduleConfig};
use rummy_lab::rating::{RatingParams, ELO_K};
use rummy_lab::report;

fn main() {
    let games_per_pair: u32 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("games per pair must be an integer"))
        .unwrap_or(10);
    let cfg = ScheduleConfig {
        games_per_pair,
        ..ScheduleConfig::default()
    };
    let schedule = build_schedule(&cfg).unwrap();
    println!("playing {} games...", schedule.len());
    let records = simulate_games(&schedule, AgentConfig::default(), 0).unwrap();

    let custom = replay_custom(&records, &RatingParams::default()).unwrap();
    if custom.skipped_draws > 0 {
        println!("{} draws left unrated by the score-based system", custom.skipped_draws);
    }
    let rows = report::summary_rows(&custom, 0.0).unwrap();
    print!("\n{}", report::render_summary_table("score-based rating summary", &rows));

    let traditional = replay_traditional(&records, ELO_K).unwrap();
    let rows = report::summary_rows(&traditional, 0.0).unwrap();
    print!("\n{}", report::render_summary_table("traditional Elo summary", &rows));
}
