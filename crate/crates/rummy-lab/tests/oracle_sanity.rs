//! The oracle implementations are themselves checked on hand-verifiable
//! examples before they are trusted to judge the solver.

mod common;

use common::{classify, oracle_declarable, oracle_min_score, replacement_pool};
use rummy_lab::cards::{Card, Hand, WildcardRank};

fn wcj(code: &str) -> WildcardRank {
    WildcardRank(Some(code.parse().unwrap()))
}

fn cards(codes: &str) -> Vec<Card> {
    codes
        .split_whitespace()
        .map(|c| c.parse().unwrap())
        .collect()
}

fn hand(codes: &str) -> Hand {
    Hand::parse_codes(codes).unwrap()
}

#[test]
fn classify_agrees_with_rules() {
    let w = wcj("9");
    let pure = classify(&cards("2H 3H 4H"), w);
    assert!(pure.sequence && pure.pure && !pure.set);
    let ace_high = classify(&cards("QH KH AH"), w);
    assert!(ace_high.sequence && ace_high.pure);
    let ace_low = classify(&cards("AH 2H 3H"), w);
    assert!(ace_low.sequence && ace_low.pure);
    assert!(!classify(&cards("KH AH 2H"), w).valid(), "no wraparound");

    let set = classify(&cards("7C 7D 7S"), w);
    assert!(set.set && !set.sequence);
    assert!(!classify(&cards("7C 7D 7D"), w).valid(), "repeated suit");
    assert!(!classify(&cards("7C 7D 7S 7H 9C"), w).valid(), "five-card set");

    // A wildcard fills a sequence gap or a set slot, and spoils purity.
    let gap = classify(&cards("5S 7S 9C"), w);
    assert!(gap.sequence && !gap.pure);
    let padded = classify(&cards("7C 7D JK"), w);
    assert!(padded.set);
    let wild_run = classify(&cards("5S 6S 9D"), w);
    assert!(wild_run.sequence && !wild_run.pure);

    // Wildcard-rank cards still cover their own rank.
    let nine_set = classify(&cards("9C 9D 9S"), w);
    assert!(nine_set.set);
    // A sequence containing a wildcard-rank card is never pure.
    let tainted = classify(&cards("8S 9S 10S"), w);
    assert!(tainted.sequence && !tainted.pure);

    // All-wild groups need one wildcard-rank card acting as itself.
    let two_jokers_one_nine = classify(&cards("9C JK JK"), w);
    assert!(two_jokers_one_nine.valid());
}

#[test]
fn oracle_score_matches_hand_computations() {
    let w = wcj("9");
    // Declarable: two pure sequences, a set, and a wild-padded set.
    let full = hand("2H 3H 4H 5D 6D 7D 8D QC QS QD KC KS JK");
    assert!(oracle_declarable(&full, w));
    assert_eq!(oracle_min_score(&full, w), 0);

    // One pure sequence only: everything else counts.
    // 2H 3H 4H excluded; rest = 7C 8D KC KS QD JC 10S 6C 5D 2C
    let lone = hand("2H 3H 4H 7C 8D KC KS QD JC 10S 6C 5D 2C");
    let rest_points = 7 + 8 + 10 + 10 + 10 + 10 + 10 + 6 + 5 + 2;
    assert_eq!(oracle_min_score(&lone, w), rest_points);

    // No pure sequence: all 13 cards count, capped at 80.
    let junk = hand("2C 4D 6H 8S 10C QD AH 3S 5C 7H JC KD 10D");
    assert_eq!(oracle_min_score(&junk, w), 80);

    // A set alone does not shield its cards without a pure sequence.
    let set_only = hand("QC QS QD 2C 4D 6H 8S 10C 3S 5C 7H JH KD");
    assert_eq!(oracle_min_score(&set_only, w), 80);

    // Pure sequence plus a second sequence unlocks full melding.
    let two_seq = hand("2H 3H 4H 5S 6S 9C QC QS QD 2C 4D 6H 8S");
    // melds: 2H3H4H pure, 5S 6S [9C wild as 7S] 8S sequence, QC QS QD set;
    // deadwood 2C + 4D + 6H = 12.
    assert_eq!(oracle_min_score(&two_seq, w), 12);
}

#[test]
fn replacement_pool_counts() {
    let no_jokers = hand("2H 3H 4H 7C 8D KC KS QD JC 10S 6C 5D 2C");
    let pool = replacement_pool(&no_jokers);
    assert_eq!(pool.len(), 40, "39 standards plus one joker");
    assert_eq!(pool.iter().filter(|c| c.is_joker()).count(), 1);

    let one_joker = hand("2H 3H 4H 7C 8D KC KS QD JC 10S 6C 5D JK");
    let pool = replacement_pool(&one_joker);
    assert_eq!(pool.iter().filter(|c| c.is_joker()).count(), 1);

    let two_jokers = hand("2H 3H 4H 7C 8D KC KS QD JC 10S 6C JK JK");
    let pool = replacement_pool(&two_jokers);
    assert_eq!(pool.iter().filter(|c| c.is_joker()).count(), 0);
}

#[test]
fn oracle_timing_probe() {
    use std::time::Instant;
    let mut solver_hands = Vec::new();
    for seed in 0..10u64 {
        let layout = rummy_lab::cards::deal(seed);
        for h in &layout.hands {
            solver_hands.push((h.clone(), layout.wcj));
        }
    }
    let t = Instant::now();
    for (h, w) in &solver_hands {
        let _ = oracle_min_score(h, *w);
    }
    eprintln!(
        "oracle_min_score: {:.1}ms avg over {} hands",
        t.elapsed().as_secs_f64() * 1000.0 / solver_hands.len() as f64,
        solver_hands.len()
    );
    let t = Instant::now();
    for (h, w) in &solver_hands {
        let _ = oracle_declarable(h, *w);
    }
    eprintln!(
        "oracle_declarable: {:.2}ms avg",
        t.elapsed().as_secs_f64() * 1000.0 / solver_hands.len() as f64
    );
}
