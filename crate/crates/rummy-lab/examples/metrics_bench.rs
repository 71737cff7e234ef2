//! Timing sweep of min_score, min_dist, and the 14-card discard search
//! over dealt hands.

use std::time::Instant;

use rummy_lab::cards::Hand;
use rummy_lab::melds::{DistTieBreak, MeldSolver};

fn main() {
    let mut worst: Vec<(f64, u64, u8)> = Vec::new();
    let mut total_score = 0.0;
    let mut total_dist = 0.0;
    let mut dist_hist = [0u32; 14];
    let n = 200u64;
    for seed in 0..n {
        let layout = rummy_lab::deal(seed);
        let mut solver = MeldSolver::new(layout.wcj);
        for hand in &layout.hands {
            let t = Instant::now();
            let _s = solver.min_score(hand).unwrap();
            total_score += t.elapsed().as_secs_f64();

            let t = Instant::now();
            let d = solver.min_dist(hand).unwrap();
            let dt = t.elapsed().as_secs_f64();
            total_dist += dt;
            dist_hist[d as usize] += 1;
            worst.push((dt, seed, d));
        }
    }
    worst.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    println!(
        "hands: {}  avg score: {:.1}us  avg dist: {:.1}us",
        2 * n,
        1e6 * total_score / (2 * n) as f64,
        1e6 * total_dist / (2 * n) as f64
    );
    println!("dist histogram: {:?}", &dist_hist[..8]);
    println!("slowest dist calls:");
    for (dt, seed, d) in worst.iter().take(8) {
        println!("  {:.1}ms seed {} dist {}", dt * 1e3, seed, d);
    }

    // The discard search is the per-turn cost for distance-driven players:
    // one 14-card hand per draw, full removal scan. Fresh solver per call
    // models the worst case with no cache reuse across turns.
    let mut total14 = 0.0;
    let mut worst14: Vec<(f64, u64)> = Vec::new();
    for seed in 0..n {
        let layout = rummy_lab::deal(seed);
        for (i, hand) in layout.hands.iter().enumerate() {
            let mut cards = hand.cards().to_vec();
            cards.push(layout.stock[i]);
            let hand14 = Hand::new(cards);
            let mut solver = MeldSolver::new(layout.wcj);
            let t = Instant::now();
            let _d = solver.min_dist14(&hand14, DistTieBreak::Points).unwrap();
            let dt = t.elapsed().as_secs_f64();
            total14 += dt;
            worst14.push((dt, seed));
        }
    }
    worst14.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    println!(
        "discard searches: {}  avg: {:.1}us",
        2 * n,
        1e6 * total14 / (2 * n) as f64
    );
    println!("slowest discard searches:");
    for (dt, seed) in worst14.iter().take(8) {
        println!("  {:.1}ms seed {}", dt * 1e3, seed);
    }
}
