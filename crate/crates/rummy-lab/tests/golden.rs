//! Frozen outputs pin the deal layout, full games, and hand metrics to the
//! exact values earlier builds produced, so any drift in shuffling, agent
//! play, or solver scoring shows up as a diff here.

use std::collections::BTreeSet;

use rummy_lab::agents::{Agent, AgentConfig, StrategyId};
use rummy_lab::cards::{deal, Card};
use rummy_lab::game::{play_game, Termination};
use rummy_lab::melds::MeldSolver;

#[test]
fn dealt_layout_matches_golden_file() {
    let layout = deal(0);
    let golden = include_str!("data/deal_seed0.csv");
    assert_eq!(layout.to_csv(), golden);
}

#[test]
fn every_deal_spreads_the_whole_deck() {
    for seed in [0u64, 1, 99, 12345] {
        let layout = deal(seed);
        let mut seen: Vec<Card> = Vec::new();
        seen.extend_from_slice(layout.hands[0].cards());
        seen.extend_from_slice(layout.hands[1].cards());
        seen.push(layout.exposed);
        seen.push(layout.open);
        seen.extend_from_slice(&layout.stock);
        assert_eq!(seen.len(), 54, "seed {seed}");
        assert_eq!(seen.iter().filter(|c| c.is_joker()).count(), 2);
        let standards: BTreeSet<Card> =
            seen.iter().copied().filter(|c| !c.is_joker()).collect();
        assert_eq!(standards.len(), 52, "seed {seed}");
    }
}

#[test]
fn played_games_match_frozen_records() {
    let cases = [
        (
            StrategyId::MinScore,
            StrategyId::Random,
            11u64,
            [46u8, 80],
            [0u8, 53],
            [1.0, 0.0],
            9u32,
        ),
        (
            StrategyId::MinDistOpp,
            StrategyId::Defeat,
            12,
            [47, 80],
            [0, 80],
            [1.0, 0.0],
            11,
        ),
        (
            StrategyId::MinDist,
            StrategyId::MinDistScore,
            13,
            [47, 80],
            [13, 0],
            [0.0, 1.0],
            10,
        ),
    ];
    for (first, second, seed, h, a, w, turns) in cases {
        let cfg = AgentConfig::default();
        let mut one = Agent::for_seat(first, cfg, seed, 0);
        let mut two = Agent::for_seat(second, cfg, seed, 1);
        let rec = play_game(&mut one, &mut two, seed).unwrap();
        assert_eq!(rec.seats, [first.to_string(), second.to_string()]);
        assert_eq!(rec.h, h, "{first} vs {second} seed {seed}");
        assert_eq!(rec.a, a, "{first} vs {second} seed {seed}");
        assert_eq!(rec.w, w, "{first} vs {second} seed {seed}");
        assert_eq!(rec.turns, turns, "{first} vs {second} seed {seed}");
        assert_eq!(rec.termination, Termination::Declaration);
        assert_eq!(rec.seed, seed);
    }
}

#[test]
fn dealt_hand_metrics_match_frozen_values() {
    // seed -> (wcj, h1 min_score, h1 min_dist, h2 min_score, h2 min_dist)
    let cases = [
        (0u64, "3", 77u8, 3u8, 63u8, 2u8),
        (1, "K", 79, 4, 80, 4),
        (2, "5", 52, 3, 80, 4),
        (3, "9", 80, 4, 62, 3),
        (4, "8", 25, 2, 80, 3),
        (5, "A", 68, 2, 80, 5),
    ];
    for (seed, wcj, s1, d1, s2, d2) in cases {
        let layout = deal(seed);
        assert_eq!(layout.wcj.to_string(), wcj, "seed {seed}");
        let mut solver = MeldSolver::new(layout.wcj);
        assert_eq!(solver.min_score(&layout.hands[0]).unwrap(), s1, "seed {seed}");
        assert_eq!(solver.min_dist(&layout.hands[0]).unwrap(), d1, "seed {seed}");
        assert_eq!(solver.min_score(&layout.hands[1]).unwrap(), s2, "seed {seed}");
        assert_eq!(solver.min_dist(&layout.hands[1]).unwrap(), d2, "seed {seed}");
    }
}
