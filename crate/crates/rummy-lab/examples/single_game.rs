//! Plays one fully narrated game between two strategies. Arguments are
//! `<first> <second> <seed>`, defaulting to `minscore random 11`.

use rummy_lab::agents::{Agent, AgentConfig, StrategyId};
use rummy_lab::game::play_game_logged;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let first: StrategyId = args.first().map_or(StrategyId::MinScore, |s| {
        s.parse().expect("unknown first strategy")
    });
    let second: StrategyId = args.get(1).map_or(StrategyId::Random, |s| {
        s.parse().expect("unknown second strategy")
    });
    let seed: u64 = args
        .get(2)
        .map(|s| s.parse().expect("seed must be an integer"))
        .unwrap_or(11);

    let cfg = AgentConfig::default();
    let mut one = Agent::for_seat(first, cfg, seed, 0);
    let mut two = Agent::for_seat(second, cfg, seed, 1);
    let (record, log) = play_game_logged(&mut one, &mut two, seed).unwrap();
    for line in &log {
        println!("{line}");
    }
    println!(
        "\n{} {} vs {} in {} turns: scores {}-{}, dealt hand quality {}-{}",
        record.termination,
        record.seats[0],
        record.seats[1],
        record.turns,
        record.a[0],
        record.a[1],
        record.h[0],
        record.h[1],
    );
}
