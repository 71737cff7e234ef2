//! Deals one game and prints the zones plus both hands' structural metrics.
//! Pass a seed to look at a different deal: `cargo run --example
//! deal_inspect -- 7`.

use rummy_lab::melds::{MeldKind, MeldSolver};

fn main() {
    let seed: u64 = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("seed must be an integer"))
        .unwrap_or(0);
    let layout = rummy_lab::deal(seed);
    print!("{}", layout.to_csv());

    let mut solver = MeldSolver::new(layout.wcj);
    for (i, hand) in layout.hands.iter().enumerate() {
        let metrics = solver.metrics(hand).unwrap();
        println!(
            "\nhand{} min_score {} min_dist {}{}",
            i + 1,
            metrics.min_score,
            metrics.min_dist,
            if metrics.declarable { " declarable" } else { "" },
        );
        let arrangement = solver.best_arrangement(hand).unwrap();
        for meld in &arrangement.melds {
            let kind = match meld.kind {
                MeldKind::PureSequence => "pure sequence",
                MeldKind::ImpureSequence => "sequence",
                MeldKind::Set => "set",
            };
            let cards: Vec<String> = meld.cards.iter().map(|c| c.to_string()).collect();
            println!("  {kind}: {}", cards.join(" "));
        }
        if !arrangement.deadwood.is_empty() {
            let cards: Vec<String> =
                arrangement.deadwood.iter().map(|c| c.to_string()).collect();
            println!("  deadwood: {}", cards.join(" "));
        }
    }
}
