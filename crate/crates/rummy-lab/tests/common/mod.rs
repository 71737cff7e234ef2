//! Deliberately naive re-implementations of the hand metrics, written
//! straight from the rules and kept independent of the solver's search:
//! melds are judged by sliding rank windows, scores by enumerating every
//! subset of the hand as a candidate meld, and distances by bounded
//! substitution search with explicit witnesses.

use std::collections::HashMap;

use rummy_lab::cards::{full_deck, Card, Hand, Rank, Suit, WildcardRank};

pub fn wild(card: Card, wcj: WildcardRank) -> bool {
    wcj.is_wild(card)
}

fn points(card: Card, wcj: WildcardRank) -> u32 {
    if wild(card, wcj) {
        return 0;
    }
    match card.rank().map(|r| r.value()) {
        Some(1) | Some(11) | Some(12) | Some(13) => 10,
        Some(v) => u32::from(v),
        None => 0,
    }
}

/// How a group of cards may be read.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Readings {
    pub set: bool,
    pub sequence: bool,
    pub pure: bool,
}

impl Readings {
    pub fn valid(self) -> bool {
        self.set || self.sequence
    }
}

/// Positions a card may occupy in a rank run; the ace plays low or high.
fn positions(rank: Rank) -> Vec<u8> {
    match rank.value() {
        1 => vec![1, 14],
        v => vec![v],
    }
}

/// Whether the non-wild cards sit at distinct positions inside the window
/// [lo, lo + n - 1] of one suit. Wild cards fill the leftover slots, so
/// only the self-acting cards constrain feasibility.
fn faces_fit_window(faces: &[Card], suit: Suit, lo: u8, n: u8) -> bool {
    let hi = lo + n - 1;
    fn place(faces: &[Card], suit: Suit, lo: u8, hi: u8, used: &mut Vec<u8>) -> bool {
        let Some((&first, rest)) = faces.split_first() else {
            return true;
        };
        if first.suit() != Some(suit) {
            return false;
        }
        for pos in positions(first.rank().unwrap()) {
            if pos >= lo && pos <= hi && !used.contains(&pos) {
                used.push(pos);
                if place(rest, suit, lo, hi, used) {
                    return true;
                }
                used.pop();
            }
        }
        false
    }
    place(faces, suit, lo, hi, &mut Vec::new())
}

/// Rule-based meld classification of a card group.
pub fn classify(cards: &[Card], wcj: WildcardRank) -> Readings {
    let n = cards.len();
    let mut readings = Readings::default();
    if n < 3 {
        return readings;
    }
    let faces: Vec<Card> = cards.iter().copied().filter(|&c| !wild(c, wcj)).collect();

    // Set: an anchor rank carried by at least one card, every non-wild
    // card of that rank in a distinct suit, at most four cards in all.
    if n <= 4 {
        let anchors: Vec<Rank> = cards.iter().filter_map(|c| c.rank()).collect();
        'anchor: for &anchor in &anchors {
            let mut suits: Vec<Suit> = Vec::new();
            for &card in cards {
                match (card.rank(), card.suit()) {
                    (Some(r), Some(s)) if r == anchor => {
                        if suits.contains(&s) {
                            continue 'anchor;
                        }
                        suits.push(s);
                    }
                    _ if wild(card, wcj) => {}
                    _ => continue 'anchor,
                }
            }
            readings.set = true;
            break;
        }
    }

    // Sequence: some suit window of length n holds every self-acting card.
    if n <= 13 {
        'window: for suit in Suit::all() {
            for lo in 1..=(15 - n as u8) {
                if !faces_fit_window(&faces, suit, lo, n as u8) {
                    continue;
                }
                if !faces.is_empty() {
                    readings.sequence = true;
                    // Pure needs every card natural: no printed jokers and
                    // no cards of the wildcard rank at all.
                    if faces.len() == n {
                        readings.pure = true;
                    }
                    break 'window;
                }
                // All cards are wild; one of the wildcard-rank cards must
                // act as itself inside the window.
                let hi = lo + n as u8 - 1;
                let anchor_ok = cards.iter().any(|c| {
                    c.suit() == Some(suit)
                        && c.rank().map_or(false, |r| {
                            positions(r).iter().any(|&p| p >= lo && p <= hi)
                        })
                });
                if anchor_ok {
                    readings.sequence = true;
                    break 'window;
                }
            }
        }
    }
    readings
}

/// Every subset of the hand that reads as a meld, with its covered points.
struct Candidate {
    mask: u16,
    sequence: bool,
    pure: bool,
    covered: u32,
}

fn candidates(cards: &[Card], wcj: WildcardRank) -> Vec<Candidate> {
    let n = cards.len();
    let mut out = Vec::new();
    for mask in 0u16..(1 << n) {
        if (mask.count_ones() as usize) < 3 {
            continue;
        }
        let group: Vec<Card> = (0..n)
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| cards[i])
            .collect();
        let readings = classify(&group, wcj);
        if readings.valid() {
            out.push(Candidate {
                mask,
                sequence: readings.sequence,
                pure: readings.pure,
                covered: group.iter().map(|&c| points(c, wcj)).sum(),
            });
        }
    }
    out
}

/// Exhaustive minimum hand score: the best of counting everything,
/// excluding one pure sequence, or any disjoint meld family containing at
/// least two sequences with one pure.
pub fn oracle_min_score(hand: &Hand, wcj: WildcardRank) -> u8 {
    let cards = hand.cards();
    let total: u32 = cards.iter().map(|&c| points(c, wcj)).sum();
    let cands = candidates(cards, wcj);

    let mut best = total;
    for cand in cands.iter().filter(|c| c.pure) {
        best = best.min(total - cand.covered);
    }

    // Depth-first cover over undecided cards: the lowest undecided card is
    // either deadwood or the start of some candidate meld.
    fn explore(
        decided: u16,
        seqs: u8,
        pure: bool,
        all: u16,
        cands: &[Candidate],
        memo: &mut HashMap<(u16, u8, bool), Option<u32>>,
    ) -> Option<u32> {
        if decided == all {
            return (seqs >= 2 && pure).then_some(0);
        }
        let key = (decided, seqs, pure);
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let lowest = 1u16 << (!decided & all).trailing_zeros();
        let mut best: Option<u32> = explore(decided | lowest, seqs, pure, all, cands, memo);
        for cand in cands {
            if cand.mask & lowest == 0 || cand.mask & decided != 0 {
                continue;
            }
            let seqs2 = (seqs + u8::from(cand.sequence)).min(2);
            let sub = explore(decided | cand.mask, seqs2, pure || cand.pure, all, cands, memo);
            if let Some(covered) = sub {
                let value = covered + cand.covered;
                if best.map_or(true, |b| value > b) {
                    best = Some(value);
                }
            }
        }
        memo.insert(key, best);
        best
    }

    let all = if cards.is_empty() {
        0
    } else {
        (1u16 << cards.len()) - 1
    };
    if let Some(covered) = explore(0, 0, false, all, &cands, &mut HashMap::new()) {
        best = best.min(total - covered);
    }
    best.min(80) as u8
}

/// Whether some disjoint meld family covers all 13 cards with at least two
/// sequences, one pure. Faster than the score search because deadwood is
/// forbidden.
pub fn oracle_declarable(hand: &Hand, wcj: WildcardRank) -> bool {
    let cards = hand.cards();
    let cands = candidates(cards, wcj);

    fn covers(
        decided: u16,
        seqs: u8,
        pure: bool,
        all: u16,
        cands: &[Candidate],
        memo: &mut HashMap<(u16, u8, bool), bool>,
    ) -> bool {
        if decided == all {
            return seqs >= 2 && pure;
        }
        let key = (decided, seqs, pure);
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let lowest = 1u16 << (!decided & all).trailing_zeros();
        let mut ok = false;
        for cand in cands {
            if cand.mask & lowest == 0 || cand.mask & decided != 0 {
                continue;
            }
            let seqs2 = (seqs + u8::from(cand.sequence)).min(2);
            if covers(decided | cand.mask, seqs2, pure || cand.pure, all, cands, memo) {
                ok = true;
                break;
            }
        }
        memo.insert(key, ok);
        ok
    }

    let all = (1u16 << cards.len()) - 1;
    covers(0, 0, false, all, &cands, &mut HashMap::new())
}

/// The cards a substitution may bring in: the full deck minus the held
/// cards. The two printed jokers are interchangeable, so at most one
/// representative appears.
pub fn replacement_pool(hand: &Hand) -> Vec<Card> {
    let jokers_held = hand.cards().iter().filter(|c| c.is_joker()).count();
    full_deck()
        .into_iter()
        .filter(|&c| !c.is_joker() && !hand.contains(c))
        .chain(std::iter::repeat(Card::Joker).take(usize::from(jokers_held < 2)))
        .collect()
}

/// Exact substitution distance for hands no more than two swaps from a
/// valid declaration. `witness` is a pair (position, replacement) known to
/// reach a declarable hand in at most two swaps, which bounds the search.
/// Returns the true distance 0, 1, or 2.
pub fn oracle_dist_capped(hand: &Hand, wcj: WildcardRank) -> Option<u8> {
    if oracle_declarable(hand, wcj) {
        return Some(0);
    }
    let cards = hand.cards().to_vec();
    for &held in &cards {
        let removed = hand.without(held);
        for repl in replacement_pool(hand) {
            if oracle_declarable(&removed.with(repl), wcj) {
                return Some(1);
            }
        }
    }
    None
}

#[allow(dead_code)]
pub fn oracle_points(card: Card, wcj: WildcardRank) -> u32 {
    points(card, wcj)
}
