//! Walks through the score-based update arithmetic: how the benchmark
//! split shifts with rating and hand-quality gaps, and when the gate
//! suppresses a step.

use rummy_lab::game::{GameRecord, Termination};
use rummy_lab::rating::{
    benchmarks, custom_update, gated_delta, CustomOutcome, RatingParams, RatingState, ALPHA, BETA,
    CUSTOM_K,
};

fn record(h: [u8; 2], a: [u8; 2], first_wins: bool) -> GameRecord {
    GameRecord {
        seats: ["one".into(), "two".into()],
        h,
        a,
        w: if first_wins { [1.0, 0.0] } else { [0.0, 1.0] },
        turns: 20,
        termination: Termination::Declaration,
        seed: 0,
    }
}

fn main() {
    println!("benchmark split of a = 82 total points:");
    for (d_r, d_h) in [(0.0, 0.0), (100.0, 0.0), (500.0, 0.0), (0.0, 10.0), (0.0, -10.0)] {
        let (b1, b2) = benchmarks(82.0, d_r, d_h, ALPHA, BETA);
        println!("  d_r {d_r:>6}  d_h {d_h:>5}  ->  b1 {b1:>6.2}  b2 {b2:>6.2}");
    }
    println!("\na 500-point favorite is expected to win with nearly nothing");
    println!("left in hand; even a 2-point loss then counts against them.\n");

    let params = RatingParams::default();
    let scenarios = [
        ("even match, one declares", 1000.0, 1000.0, record([40, 60], [0, 55], true)),
        ("favorite wins as expected", 1500.0, 1000.0, record([40, 60], [0, 40], true)),
        ("favorite upset, holds 30", 1500.0, 1000.0, record([60, 40], [30, 0], false)),
    ];
    for (label, r1, r2, rec) in scenarios {
        let mut one = RatingState { rating: r1, games_played: 50 };
        let mut two = RatingState { rating: r2, games_played: 50 };
        match custom_update(&mut one, &mut two, &rec, &params) {
            CustomOutcome::Applied(u) => println!(
                "{label}: b1 {:.2} b2 {:.2} delta {:+.2}/{:+.2}",
                u.b1, u.b2, u.delta1, u.delta2,
            ),
            CustomOutcome::SkippedDraw => println!("{label}: draw, skipped"),
        }
    }

    // A declaration leaves the winner at zero, below any benchmark, so the
    // gate passes every real decided game; it bites only under score kinds
    // where a winner can finish above target, as in this synthetic case.
    let suppressed = gated_delta(CUSTOM_K, 30.0, 20.0, 1.0);
    println!("\nsynthetic winner holding 30 against a benchmark of 20: delta {suppressed:+.2}");
}
