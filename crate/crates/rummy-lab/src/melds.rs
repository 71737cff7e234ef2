//! Meld validity and the two hand metrics, MinScore and MinDist.
//!
//! Melds are sets (3-4 cards of one rank, distinct suits) and sequences
//! (3+ consecutive ranks of one suit). Wildcards substitute for missing
//! cards anywhere except in a pure sequence, which may contain no printed
//! joker and no card of the wildcard rank at all. A valid declaration
//! arranges all 13 cards into melds with at least two sequences, at least
//! one of them pure.
//!
//! Deadwood for an arrangement is counted with a validity ladder:
//!
//! * no pure sequence: every card in the hand counts;
//! * a pure sequence but no second sequence: only the pure sequence's cards
//!   are excluded;
//! * two or more sequences including a pure one: all melded cards are
//!   excluded and only unmelded cards count.
//!
//! `min_score` is the minimum ladder deadwood over all arrangements, capped
//! at 80. `min_dist` is the minimum number of cards that must be swapped
//! with cards from outside the hand to reach a valid declaration,
//! equivalently 13 minus the maximum overlap between the hand and any valid
//! 13-card declaration drawn from the full deck. Both searches are exact;
//! `MeldSolver` memoizes per-hand results so the turn-by-turn calls made by
//! agents stay cheap.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use crate::cards::{card_points, Card, Hand, Rank, Suit, WildcardRank, HAND_SIZE};
use crate::error::{Error, Result};

/// Deadwood cap applied to every hand score.
pub const SCORE_CAP: u8 = 80;
/// Upper bound of `min_dist`: replace the whole hand.
pub const MAX_DIST: u8 = 13;

const INF: u8 = u8::MAX;

/// Kind of a meld.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeldKind {
    PureSequence,
    ImpureSequence,
    Set,
}

/// A concrete meld: the cards as held, wildcards included.
#[derive(Debug, Clone)]
pub struct Meld {
    pub kind: MeldKind,
    pub cards: Vec<Card>,
}

/// An arrangement of a hand achieving some deadwood count.
#[derive(Debug, Clone)]
pub struct Arrangement {
    pub melds: Vec<Meld>,
    pub deadwood: Vec<Card>,
    /// Capped ladder score of the whole hand.
    pub score: u8,
}

/// The two structural metrics of a hand plus declarability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HandMetrics {
    pub min_score: u8,
    pub min_dist: u8,
    pub declarable: bool,
}

/// Best single discard from a 14-card hand by resulting `min_score`.
#[derive(Debug, Clone, Copy)]
pub struct ScoreDiscard {
    pub discard: Card,
    pub score: u8,
}

/// Best single discard from a 14-card hand by resulting `min_dist`.
#[derive(Debug, Clone, Copy)]
pub struct DistDiscard {
    pub discard: Card,
    pub dist: u8,
}

/// Secondary criterion used by `min_dist14` after the distance itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistTieBreak {
    /// Highest discarded card points, then canonical card order.
    Points,
    /// Lowest resulting `min_score`, then points, then canonical order.
    Score,
}

// ─── Meld validity ───

/// Classifies `cards` as a meld under the wildcard rule, or `None`.
///
/// Preference when several readings apply: pure sequence, then set, then
/// impure sequence. A meld must contain at least one card acting as itself;
/// printed jokers never do, cards of the wildcard rank may.
pub fn is_meld(cards: &[Card], wcj: WildcardRank) -> Option<MeldKind> {
    if cards.len() < 3 {
        return None;
    }
    let standards: Vec<Card> = cards.iter().copied().filter(|c| !c.is_joker()).collect();
    let jokers = cards.len() - standards.len();
    if standards.is_empty() {
        return None;
    }

    let no_wilds = jokers == 0 && standards.iter().all(|&c| !wcj.is_wild(c));
    if no_wilds && sequence_fits(&standards, 0, cards.len()) {
        return Some(MeldKind::PureSequence);
    }
    if set_fits(&standards, wcj, cards.len()) {
        return Some(MeldKind::Set);
    }
    // Cards of the wildcard rank may act as faces or as wildcards; try every
    // demotion of them when fitting a sequence.
    let duals: Vec<usize> = (0..standards.len())
        .filter(|&i| wcj.is_wild(standards[i]))
        .collect();
    for demote in 0u32..(1u32 << duals.len()) {
        let mut faces = Vec::new();
        let mut wild = jokers;
        for (i, &card) in standards.iter().enumerate() {
            match duals.iter().position(|&d| d == i) {
                Some(k) if demote & (1 << k) != 0 => wild += 1,
                _ => faces.push(card),
            }
        }
        if faces.is_empty() {
            continue;
        }
        if sequence_fits(&faces, wild, cards.len()) {
            return Some(MeldKind::ImpureSequence);
        }
    }
    None
}

fn set_fits(standards: &[Card], wcj: WildcardRank, total: usize) -> bool {
    if total > 4 {
        return false;
    }
    for &anchor in standards {
        let rank = anchor.rank().unwrap();
        let mut suits_seen = 0u8;
        let mut ok = true;
        for &c in standards {
            if c.rank() == Some(rank) {
                let bit = 1u8 << c.suit().unwrap().index();
                if suits_seen & bit != 0 {
                    ok = false; // same card twice; impossible with one deck
                    break;
                }
                suits_seen |= bit;
            } else if !wcj.is_wild(c) {
                ok = false;
                break;
            }
        }
        if ok {
            return true;
        }
    }
    false
}

/// Whether `faces` (acting as themselves) plus `wild` substitutes can form a
/// sequence of length `total`.
fn sequence_fits(faces: &[Card], wild: usize, total: usize) -> bool {
    debug_assert_eq!(faces.len() + wild, total);
    if total > 13 || faces.is_empty() {
        return false;
    }
    let suit = faces[0].suit().unwrap();
    if faces.iter().any(|c| c.suit() != Some(suit)) {
        return false;
    }
    let aces = faces.iter().filter(|c| c.rank() == Some(Rank::ACE)).count();
    // An ace may read as position 1 or 14; a suit holds only one ace.
    for ace_high in [false, true] {
        if ace_high && aces == 0 {
            break;
        }
        let mut pos: Vec<u8> = faces
            .iter()
            .map(|c| {
                let r = c.rank().unwrap().value();
                if r == 1 && ace_high {
                    14
                } else {
                    r
                }
            })
            .collect();
        pos.sort_unstable();
        if pos.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let span = (pos[pos.len() - 1] - pos[0] + 1) as usize;
        if span > total {
            continue;
        }
        // Slide a window of length `total` over the face positions.
        let lo_min = pos[pos.len() - 1] as i32 - total as i32 + 1;
        let lo_max = pos[0] as i32;
        for lo in lo_min..=lo_max {
            let hi = lo + total as i32 - 1;
            if lo >= 1 && hi <= 14 && !(lo == 1 && hi == 14) {
                return true;
            }
        }
    }
    false
}

// ─── Fast hash for the search memos ───

#[derive(Default)]
struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ b as u64).wrapping_mul(0x100000001B3);
        }
    }
    fn write_u32(&mut self, i: u32) {
        self.write_u64(i as u64);
    }
    fn write_u64(&mut self, i: u64) {
        let mut z = self.0 ^ i;
        z = z.wrapping_mul(0x9E3779B97F4A7C15);
        self.0 = z ^ (z >> 29);
    }
}

type FastMap<K, V> = HashMap<K, V, BuildHasherDefault<KeyHasher>>;

// ─── MinScore search ───

/// One candidate meld over the hand's standard cards: `mask` are the cards
/// acting as themselves, `fills` the wildcard slots. Per face set only the
/// cheapest variant is kept; burning extra wildcards never lowers deadwood.
#[derive(Debug, Clone, Copy)]
struct Cand {
    mask: u16,
    fills: u8,
    is_seq: bool,
    is_pure: bool,
}

struct ScoreSearch {
    pts: Vec<u8>,
    dual_mask: u16,
    cands: Vec<Cand>,
    by_low: Vec<Vec<u16>>,
    memo: FastMap<u32, u8>,
}

impl ScoreSearch {
    /// Builds the candidate pool for a hand. `ids` are the standard cards'
    /// deck indices in ascending order; `pool` is the wildcard capacity
    /// (printed jokers plus wildcard-rank cards).
    fn new(ids: &[u8], wcj_rank: Option<u8>, pool: u8) -> ScoreSearch {
        let n = ids.len();
        let mut pts = vec![0u8; n];
        let mut dual_mask = 0u16;
        for (i, &id) in ids.iter().enumerate() {
            let rank = id % 13 + 1;
            if Some(rank) == wcj_rank {
                dual_mask |= 1u16 << i;
            } else {
                pts[i] = Rank::new(rank).unwrap().points();
            }
        }

        let mut gen = CandGen {
            dedup: FastMap::default(),
            cands: Vec::new(),
        };

        // Sets: for each rank, every face subset with the cheapest fill count.
        let mut by_rank: [Vec<u8>; 13] = Default::default();
        for (i, &id) in ids.iter().enumerate() {
            by_rank[(id % 13) as usize].push(i as u8);
        }
        for members in by_rank.iter().filter(|m| !m.is_empty()) {
            let m = members.len();
            for subset in 1u16..(1u16 << m) {
                let k = subset.count_ones() as u8;
                let fills = 3u8.saturating_sub(k);
                if fills > pool {
                    continue;
                }
                let mut mask = 0u16;
                for (j, &pos) in members.iter().enumerate() {
                    if subset & (1u16 << j) != 0 {
                        mask |= 1u16 << pos;
                    }
                }
                gen.add(Cand {
                    mask,
                    fills,
                    is_seq: false,
                    is_pure: false,
                });
            }
        }

        // Sequences: windows over rank positions 1..=14 (ace low or high),
        // with every choice of held positions deliberately ceded to wildcards.
        for suit in 0..4u8 {
            let mut at = [None::<u8>; 15];
            for (i, &id) in ids.iter().enumerate() {
                if id / 13 == suit {
                    let rank = id % 13 + 1;
                    at[rank as usize] = Some(i as u8);
                    if rank == 1 {
                        at[14] = Some(i as u8);
                    }
                }
            }
            for lo in 1usize..=12 {
                for hi in (lo + 2)..=(lo + 12).min(14) {
                    let len = (hi - lo + 1) as u8;
                    let held: Vec<u8> = (lo..=hi).filter_map(|p| at[p]).collect();
                    let forced = len - held.len() as u8;
                    if forced > pool || held.is_empty() {
                        continue;
                    }
                    let wcj_in_window = wcj_rank.is_some_and(|w| {
                        let w = w as usize;
                        (lo..=hi).contains(&w) || (w == 1 && hi == 14)
                    });
                    let max_extra = (pool - forced).min(held.len() as u8 - 1);
                    for extra in 0u16..(1u16 << held.len()) {
                        if extra.count_ones() as u8 > max_extra {
                            continue;
                        }
                        let mut mask = 0u16;
                        for (j, &pos) in held.iter().enumerate() {
                            if extra & (1u16 << j) == 0 {
                                mask |= 1u16 << pos;
                            }
                        }
                        let fills = forced + extra.count_ones() as u8;
                        gen.add(Cand {
                            mask,
                            fills,
                            is_seq: true,
                            is_pure: fills == 0 && !wcj_in_window,
                        });
                    }
                }
            }
        }

        let cands = gen.cands;
        let mut by_low = vec![Vec::new(); n.max(1)];
        for (ci, cand) in cands.iter().enumerate() {
            by_low[cand.mask.trailing_zeros() as usize].push(ci as u16);
        }
        ScoreSearch {
            pts,
            dual_mask,
            cands,
            by_low,
            memo: FastMap::default(),
        }
    }

    /// Minimum deadwood over ways to finish covering `mask` so that the
    /// whole arrangement ends with at least two sequences, one pure. `pool`
    /// is the remaining wildcard capacity; facing a wildcard-rank card
    /// spends one unit, exactly like using it as a substitute.
    fn best_full(&mut self, mask: u16, pool: u8, pure: bool, seqs: u8) -> u8 {
        if mask == 0 {
            return if pure && seqs >= 2 { 0 } else { INF };
        }
        let key =
            mask as u32 | (pool as u32) << 14 | (pure as u32) << 17 | (seqs as u32) << 18;
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);

        let mut best = self
            .best_full(rest, pool, pure, seqs)
            .saturating_add(self.pts[low]);
        for i in 0..self.by_low[low].len() {
            let cand = self.cands[self.by_low[low][i] as usize];
            if cand.mask & !mask != 0 {
                continue;
            }
            let duals_faced = (cand.mask & self.dual_mask).count_ones() as u8;
            if cand.fills + duals_faced > pool {
                continue;
            }
            let v = self.best_full(
                mask & !cand.mask,
                pool - cand.fills - duals_faced,
                pure || cand.is_pure,
                (seqs + cand.is_seq as u8).min(2),
            );
            best = best.min(v);
        }
        self.memo.insert(key, best);
        best
    }
}

struct CandGen {
    dedup: FastMap<u16, usize>,
    cands: Vec<Cand>,
}

impl CandGen {
    fn add(&mut self, cand: Cand) {
        match self.dedup.get(&cand.mask) {
            Some(&at) => {
                let old = self.cands[at];
                let better = (cand.fills, !cand.is_seq, !cand.is_pure)
                    < (old.fills, !old.is_seq, !old.is_pure);
                if better {
                    self.cands[at] = cand;
                }
            }
            None => {
                self.dedup.insert(cand.mask, self.cands.len());
                self.cands.push(cand);
            }
        }
    }
}

/// Point total of the best fully held pure sequence, 0 if none exists.
fn best_pure_sequence_points(ids: &[u8], wcj_rank: Option<u8>) -> u32 {
    let mut best = 0u32;
    for suit in 0..4u8 {
        let held = held_pure_positions(ids, wcj_rank, suit);
        let pts = |p: usize| -> u32 {
            let rank = if p == 14 { 1 } else { p as u8 };
            Rank::new(rank).unwrap().points() as u32
        };
        for lo in 1usize..=12 {
            if !held[lo] {
                continue;
            }
            let mut sum = pts(lo);
            let mut hi = lo;
            while hi + 1 <= 14 && held[hi + 1] && (hi + 1 - lo) < 13 {
                hi += 1;
                sum += pts(hi);
                if hi - lo >= 2 {
                    best = best.max(sum);
                }
            }
        }
    }
    best
}

/// The cards of one maximal-point fully held pure sequence.
fn best_pure_sequence_cards(ids: &[u8], wcj_rank: Option<u8>) -> Vec<Card> {
    let mut best: (u32, Vec<Card>) = (0, Vec::new());
    for suit in 0..4u8 {
        let held = held_pure_positions(ids, wcj_rank, suit);
        for lo in 1usize..=12 {
            for hi in (lo + 2)..=(lo + 12).min(14) {
                if (lo..=hi).any(|p| !held[p]) {
                    continue;
                }
                let cards: Vec<Card> = (lo..=hi)
                    .map(|p| {
                        let rank = if p == 14 { 1 } else { p as u8 };
                        Card::new(Rank::new(rank).unwrap(), Suit::all()[suit as usize])
                    })
                    .collect();
                let pts: u32 = cards
                    .iter()
                    .map(|c| c.rank().unwrap().points() as u32)
                    .sum();
                if pts > best.0 {
                    best = (pts, cards);
                }
            }
        }
    }
    best.1
}

/// Rank positions (ace doubled at 1 and 14) held in `suit` by cards that may
/// sit in a pure sequence, i.e. are not of the wildcard rank.
fn held_pure_positions(ids: &[u8], wcj_rank: Option<u8>, suit: u8) -> [bool; 15] {
    let mut held = [false; 15];
    for &id in ids {
        if id / 13 == suit {
            let rank = id % 13 + 1;
            if Some(rank) != wcj_rank {
                held[rank as usize] = true;
                if rank == 1 {
                    held[14] = true;
                }
            }
        }
    }
    held
}

// ─── MinDist search ───

/// Exact search for the cheapest valid declaration template. Builds melds
/// from full-deck cards around the hand, counting how many template cards
/// must come from outside; for a 13-card hand, `13 - kept` equals the cards
/// taken from outside, so one budget bounds both. Wildcard substitutes are
/// tallied as a demand counter and settled against the hand's wildcards
/// first (that keeps hand cards), then against outside ones.
///
/// Pruning leans on one supply argument: every template slot still open is
/// worth at most one remaining hand card (a face, or a wildcard standing in),
/// and accrued substitute demand can only be absorbed by hand wildcards.
/// Whatever demand the hand cannot meet must come from outside.
struct DistSearch {
    ids: Vec<u8>,
    id_pos: [i8; 52],
    hand_mask54: u64,
    dual_positions: u16,
    hand_jokers: u8,
    hand_duals: u8,
    outside_jokers: u8,
    outside_dual_ids: Vec<u8>,
    wcj_rank: Option<u8>,
    total_wilds: u8,
    // Per-suit bitmap of held ranks, bit r-1 for rank r. Lets the window
    // loops cost a candidate meld with a few popcounts before committing
    // to the full split enumeration.
    hand_cells: [u16; 4],
    // One spare drop per hand card beyond 13, so the same search answers
    // the best-discard question for a 14-card hand in a single pass.
    drop_allowance: u8,
    budget: u8,
    // When nonzero, only templates leaving at least one of these hand cards
    // unfaced count as success. A failing pass then proves every listed card
    // sits in all templates within budget.
    require_unfaced: u64,
    // Hand positions of the required cards. The search anchors on these
    // first so each branch settles a required card's fate at the top of the
    // tree instead of rediscovering it per subtree.
    require_positions: u16,
    // Certificate of the last successful pass, for reading off which cards
    // the found template did without.
    leaf: Option<LeafCert>,
    // Memo for the counter-level relaxation; see `relax_value`. Each entry
    // packs the cap it was proven against with the value byte.
    relax_memo: FastMap<u32, u16>,
}

/// Snapshot of a successful template: which hand cards it faced and the
/// wildcard ledger numbers needed to tell whether one hand wildcard was
/// spare. Any hand card outside the template certifies that discarding it
/// keeps the same distance.
#[derive(Clone, Copy)]
struct LeafCert {
    faced: u64,
    fills: u8,
    pool: u8,
    out_free: u8,
    out_faces: u8,
}

impl LeafCert {
    /// Whether the template survives losing one hand wildcard: the fill
    /// demand must still split between the shrunken pool and free outside
    /// wildcards without busting the budget.
    fn spare_wild(&self, budget: u8) -> bool {
        let hand_fill = self.fills.min(self.pool.saturating_sub(1));
        let outside_fill = self.fills - hand_fill;
        outside_fill <= self.out_free && self.out_faces + outside_fill <= budget
    }
}

#[derive(Clone, Copy)]
struct DistState {
    mask: u16,
    used: u64,
    faced: u64,
    outside_faces: u8,
    fills: u8,
    duals_faced: u8,
    replaced: u8,
    size: u8,
    pure: bool,
    seqs: u8,
}

impl DistSearch {
    fn new(hand: &Hand, wcj: WildcardRank) -> DistSearch {
        let wcj_rank = wcj.0.map(|r| r.value());
        let mut ids = Vec::with_capacity(hand.len());
        let mut hand_jokers = 0u8;
        for &card in hand.cards() {
            match card {
                Card::Joker => hand_jokers += 1,
                c => ids.push(c.deck_index()),
            }
        }
        let mut id_pos = [-1i8; 52];
        let mut hand_mask54 = 0u64;
        let mut dual_positions = 0u16;
        let mut hand_duals = 0u8;
        for (i, &id) in ids.iter().enumerate() {
            id_pos[id as usize] = i as i8;
            hand_mask54 |= 1u64 << id;
            if Some(id % 13 + 1) == wcj_rank {
                dual_positions |= 1u16 << i;
                hand_duals += 1;
            }
        }
        let outside_dual_ids: Vec<u8> = match wcj_rank {
            Some(r) => (0..4u8)
                .map(|s| s * 13 + r - 1)
                .filter(|&id| hand_mask54 & (1u64 << id) == 0)
                .collect(),
            None => Vec::new(),
        };
        let outside_jokers = 2 - hand_jokers;
        let total_wilds =
            hand_jokers + hand_duals + outside_jokers + outside_dual_ids.len() as u8;
        let mut hand_cells = [0u16; 4];
        for &id in &ids {
            hand_cells[(id / 13) as usize] |= 1u16 << (id % 13);
        }
        let drop_allowance = (hand.len() as u8).saturating_sub(HAND_SIZE as u8);
        DistSearch {
            ids,
            id_pos,
            hand_mask54,
            dual_positions,
            hand_jokers,
            hand_duals,
            outside_jokers,
            outside_dual_ids,
            wcj_rank,
            total_wilds,
            hand_cells,
            drop_allowance,
            budget: 0,
            require_unfaced: 0,
            require_positions: 0,
            leaf: None,
            relax_memo: FastMap::default(),
        }
    }

    /// Hand wildcards still able to stand in for a missing card.
    fn wilds_left(&self, st: &DistState) -> u8 {
        self.hand_jokers + self.hand_duals - st.duals_faced
    }

    /// Optimistic count of outside cards any completion needs: faces already
    /// committed, plus the part of substitute demand and open-slot coverage
    /// that the remaining hand cards cannot possibly supply. Substitutes come
    /// only from wildcards; open slots also accept faces from the mask.
    fn lower_bound(&self, st: &DistState) -> u8 {
        let wilds = self.wilds_left(st);
        let faces = (st.mask & !self.dual_positions).count_ones() as u8;
        let open = 13 - st.size;
        let shortfall = st
            .fills
            .saturating_sub(wilds)
            .max((st.fills + open).saturating_sub(wilds + faces));
        st.outside_faces + shortfall
    }

    /// Exact minimum outside cost from this point if melds only had to agree
    /// on counts, not on which outside card fills which face. Ignoring that
    /// one interaction makes the value a true lower bound on the remaining
    /// cost and lets it memoize on a small scalar key, so the exact search
    /// can use it as a heuristic that is tight on almost every hand.
    ///
    /// Values above `cap` are not distinguished: the result is either the
    /// exact value (when it is at most `cap`) or `INF`. Memo entries record
    /// the cap they were proven against so later, larger caps recompute.
    fn relax_value(
        &mut self,
        mask: u16,
        size: u8,
        fills: u8,
        duals_faced: u8,
        pure: bool,
        seqs: u8,
        cap: u8,
    ) -> u8 {
        // Supply check before touching the memo: open slots beyond what the
        // hand can still cover, and substitute demand beyond its wildcards.
        let wilds = self.hand_jokers + self.hand_duals - duals_faced;
        let faces = (mask & !self.dual_positions).count_ones() as u8;
        let lb = fills
            .saturating_sub(wilds)
            .max((fills + (13 - size)).saturating_sub(wilds + faces));
        if lb > cap {
            return INF;
        }
        if mask == 0 {
            let v = self.relax_pad(size, fills, duals_faced, pure, seqs);
            return if v <= cap { v } else { INF };
        }
        let key = mask as u32
            | (size as u32) << 14
            | (fills as u32) << 18
            | (duals_faced as u32) << 22
            | (pure as u32) << 25
            | (seqs as u32) << 26;
        if let Some(&packed) = self.relax_memo.get(&key) {
            let (proven_cap, v) = (packed >> 8, packed as u8);
            if v != INF {
                return if v <= cap { v } else { INF };
            }
            if proven_cap >= cap as u16 {
                return INF;
            }
        }
        let low = mask.trailing_zeros() as usize;
        let low_bit = 1u16 << low;
        let rest = mask & !low_bit;

        // Leave the card out of the template. Trying this first reaches the
        // padding's closed form quickly, giving a finite value the meld
        // branches then have to beat.
        let mut best = self.relax_value(rest, size, fills, duals_faced, pure, seqs, cap);

        let id = self.ids[low];
        let rank = id % 13 + 1;
        let suit = id / 13;
        let anchor_dual = (self.dual_positions & low_bit != 0) as u8;
        let mut cells = [0u8; 14];

        // Sets of this rank.
        for pick in 0u8..16 {
            if pick & (1u8 << suit) == 0 || !(3..=4).contains(&pick.count_ones()) {
                continue;
            }
            let mut n = 0;
            for s in 0..4u8 {
                if pick & (1u8 << s) != 0 && s != suit {
                    cells[n] = s * 13 + rank - 1;
                    n += 1;
                }
            }
            let limit = cap.min(best.saturating_sub(1));
            let len = n as u8 + 1;
            let v = self.relax_meld(
                rest,
                size + len,
                fills,
                duals_faced + anchor_dual,
                pure,
                seqs,
                &cells[..n],
                false,
                false,
                limit,
            );
            if v < best {
                best = v;
            }
        }

        // Held ranks per suit whose slot is still unassigned, for costing a
        // window without walking its cells.
        let mut cur_cells = [0u16; 4];
        let mut m = rest;
        while m != 0 {
            let p = m.trailing_zeros() as usize;
            m &= m - 1;
            let cid = self.ids[p];
            cur_cells[(cid / 13) as usize] |= 1u16 << (cid % 13);
        }
        let suit_held = self.hand_cells[suit as usize];
        let suit_cur = cur_cells[suit as usize];

        // Sequences through this card's rank positions. Each window is
        // costed by popcount first; only windows whose floor cost fits the
        // current bound go through the full split enumeration.
        let aces = [rank, 14];
        let cpos_list = if rank == 1 { &aces[..] } else { &aces[..1] };
        for &cpos in cpos_list {
            for lo in cpos.saturating_sub(12).max(1)..=cpos {
                let hi_min = cpos.max(lo + 2);
                for hi in hi_min..=(lo + 12).min(14) {
                    let top = hi.min(13);
                    let mut wbits = ((1u32 << top) - (1u32 << (lo - 1))) as u16;
                    if hi == 14 {
                        wbits |= 1;
                    }
                    wbits &= !(1u16 << (rank - 1));
                    let held = wbits & suit_held;
                    let out = (wbits & !suit_held).count_ones() as u8;
                    let forced = (held & !suit_cur).count_ones() as u8;
                    if fills + forced > self.total_wilds {
                        continue;
                    }
                    let limit = cap.min(best.saturating_sub(1));
                    let wild_room = self.total_wilds - fills - forced;
                    if out.saturating_sub(wild_room) > limit {
                        continue;
                    }
                    let mut n = 0;
                    for p in lo..=hi {
                        let r = if p == 14 { 1 } else { p };
                        let cell = suit * 13 + r - 1;
                        if cell != id {
                            cells[n] = cell;
                            n += 1;
                        }
                    }
                    let clean = !self.wcj_rank.is_some_and(|w| {
                        (lo..=hi).contains(&w) || (w == 1 && hi == 14)
                    });
                    let len = n as u8 + 1;
                    let v = self.relax_meld(
                        rest,
                        size + len,
                        fills,
                        duals_faced + anchor_dual,
                        pure,
                        seqs,
                        &cells[..n],
                        true,
                        clean,
                        limit,
                    );
                    if v < best {
                        best = v;
                    }
                }
            }
        }
        // `best` is either a true minimum (tightened bounds never cut a
        // value that would have lowered it) or INF meaning "above cap".
        let packed = ((cap as u16) << 8) | best as u16;
        self.relax_memo.insert(key, packed);
        best
    }

    /// Settles a relaxed meld's non-anchor cells: held cards branch between
    /// facing and substitution, absent held cards must substitute, and the
    /// outside cells split between faces and substitutes by count alone.
    /// Returns the best completion value at most `limit`, else `INF`.
    #[allow(clippy::too_many_arguments)]
    fn relax_meld(
        &mut self,
        mask: u16,
        size: u8,
        fills: u8,
        duals_faced: u8,
        pure: bool,
        seqs: u8,
        cells: &[u8],
        is_seq: bool,
        clean: bool,
        limit: u8,
    ) -> u8 {
        if size > 13 {
            return INF;
        }
        let mut branch = [0u16; 13];
        let mut branch_dual = [0u8; 13];
        let mut nb = 0;
        let mut forced_fills = 0u8;
        let mut out = 0u8;
        for &cell in cells {
            if self.hand_mask54 & (1u64 << cell) != 0 {
                let pos = self.id_pos[cell as usize] as usize;
                let bit = 1u16 << pos;
                if mask & bit != 0 {
                    branch[nb] = bit;
                    branch_dual[nb] = (self.dual_positions & bit != 0) as u8;
                    nb += 1;
                } else {
                    forced_fills += 1;
                }
            } else {
                out += 1;
            }
        }
        // Every split substitutes at least the absent held cells, and out
        // cells not substituted must be faced. If the floor already busts
        // the wildcard supply or the limit, no split survives.
        if fills + forced_fills > self.total_wilds {
            return INF;
        }
        let wild_room = self.total_wilds - fills - forced_fills;
        if out.saturating_sub(wild_room) > limit {
            return INF;
        }
        let mut best = INF;
        // All-faced first: facing held cards is usually optimal, and an
        // early finite value tightens the cut for the remaining splits.
        for faced in (0u16..(1u16 << nb)).rev() {
            let mut m2 = mask;
            let mut d2 = duals_faced;
            let mut meld_fills = forced_fills;
            for (i, &bit) in branch.iter().take(nb).enumerate() {
                if faced & (1u16 << i) != 0 {
                    m2 &= !bit;
                    d2 += branch_dual[i];
                } else {
                    meld_fills += 1;
                }
            }
            for out_faces in 0..=out {
                let cut = limit.min(best.saturating_sub(1));
                if out_faces > cut {
                    break;
                }
                let f2 = fills + meld_fills + (out - out_faces);
                if f2 > self.total_wilds {
                    continue;
                }
                let meld_pure = is_seq && clean && meld_fills == 0 && out_faces == out;
                let v = self.relax_value(
                    m2,
                    size,
                    f2,
                    d2,
                    pure || meld_pure,
                    (seqs + is_seq as u8).min(2),
                    cut - out_faces,
                );
                if v != INF && out_faces + v < best {
                    best = out_faces + v;
                }
            }
        }
        best
    }

    /// Closed form for the relaxed padding phase: filler melds are sized
    /// freely, every non-pure filler keeps one face and may substitute the
    /// rest, and a still-missing pure filler is fully faced. Substitutes are
    /// drawn from hand wildcards while they last.
    fn relax_pad(&self, size: u8, fills: u8, duals_faced: u8, pure: bool, seqs: u8) -> u8 {
        let open = 13 - size;
        let wilds = self.hand_jokers + self.hand_duals - duals_faced;
        let out_supply = self.outside_jokers + self.outside_dual_ids.len() as u8;
        let excess = fills.saturating_sub(wilds);
        if excess > out_supply {
            return INF;
        }
        if open == 0 {
            return if pure && seqs >= 2 { excess } else { INF };
        }
        if open < 3 {
            return INF;
        }
        // The longest window that avoids the wildcard rank bounds any pure
        // filler. A wild ace blocks both ends of the rank line.
        let max_clean = match self.wcj_rank {
            Some(1) => 12,
            Some(w) => (w - 1).max(14 - w),
            None => 13,
        };
        let mut best = INF;
        for m in 1..=open / 3 {
            if seqs + m < 2 {
                continue;
            }
            // Substitution capacity across fillers, after the owed flags
            // claim their faces.
            let cap = if !pure {
                if m == 1 {
                    if open > max_clean {
                        continue;
                    }
                    0
                } else {
                    if open - 3 < 3 * (m - 1) {
                        continue;
                    }
                    (open - 3) - (m - 1)
                }
            } else {
                open - m
            };
            let z = cap.min(wilds.saturating_sub(fills));
            let cost = (open - z) + excess;
            if cost < best {
                best = cost;
            }
        }
        best
    }

    /// Whether even the counter relaxation needs more than `budget` outside
    /// cards. When it does, the exact pass at that budget cannot succeed.
    fn relax_exceeds(&mut self, budget: u8) -> bool {
        let mask = if self.ids.is_empty() {
            0
        } else {
            ((1u32 << self.ids.len()) - 1) as u16
        };
        self.relax_value(mask, 0, 0, 0, false, 0, budget) == INF
    }

    fn feasible(&mut self, budget: u8) -> bool {
        self.budget = budget;
        self.leaf = None;
        let st = DistState {
            mask: if self.ids.is_empty() {
                0
            } else {
                ((1u32 << self.ids.len()) - 1) as u16
            },
            used: 0,
            faced: 0,
            outside_faces: 0,
            fills: 0,
            duals_faced: 0,
            replaced: 0,
            size: 0,
            pure: false,
            seqs: 0,
        };
        self.step(st)
    }

    fn step(&mut self, st: DistState) -> bool {
        if self.require_unfaced != 0 && self.require_unfaced & !st.faced == 0 {
            return false;
        }
        if st.replaced > self.budget + self.drop_allowance
            || self.lower_bound(&st) > self.budget
        {
            return false;
        }
        let cap = self.budget - st.outside_faces;
        if self.relax_value(st.mask, st.size, st.fills, st.duals_faced, st.pure, st.seqs, cap)
            == INF
        {
            return false;
        }
        if st.mask == 0 {
            return self.pad(st, 0);
        }
        let mreq = st.mask & self.require_positions;
        let low = if mreq != 0 { mreq } else { st.mask }.trailing_zeros() as usize;
        let id = self.ids[low];

        // Keep the card: try every meld shape using it as a face.
        if self.melds_through(st, low, id) {
            return true;
        }

        // Leave the card out of the template. A wildcard-rank card stays
        // available as a substitute; its fate settles in the final tally.
        let mut next = st;
        next.mask &= !(1u16 << low);
        if self.dual_positions & (1u16 << low) == 0 {
            next.replaced += 1;
        }
        self.step(next)
    }

    fn melds_through(&mut self, st: DistState, _low: usize, id: u8) -> bool {
        let rank = id % 13 + 1;
        let suit = id / 13;
        let mut slots = [0u8; 14];

        // Sets of this rank.
        for pick in 0u8..16 {
            if pick & (1u8 << suit) == 0 || !(3..=4).contains(&pick.count_ones()) {
                continue;
            }
            let mut n = 0;
            for s in 0..4u8 {
                if pick & (1u8 << s) != 0 {
                    slots[n] = s * 13 + rank - 1;
                    n += 1;
                }
            }
            if self.assign(st, &slots[..n], 0, 0, false, false, id) {
                return true;
            }
        }

        // Sequences through this card's rank positions.
        let aces = [rank, 14];
        let cpos_list = if rank == 1 { &aces[..] } else { &aces[..1] };
        for &cpos in cpos_list {
            for lo in cpos.saturating_sub(12).max(1)..=cpos {
                let hi_min = cpos.max(lo + 2);
                for hi in hi_min..=(lo + 12).min(14) {
                    let mut n = 0;
                    for p in lo..=hi {
                        let r = if p == 14 { 1 } else { p };
                        slots[n] = suit * 13 + r - 1;
                        n += 1;
                    }
                    let clean = !self.wcj_rank.is_some_and(|w| {
                        (lo..=hi).contains(&w) || (w == 1 && hi == 14)
                    });
                    if self.assign(st, &slots[..n], 0, 0, true, clean, id) {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Fills meld slots left to right, branching each slot between the hand
    /// card, an unused outside card, and a wildcard substitute. The anchor
    /// card must be faced here or the same meld would reappear under a later
    /// anchor; held cards of other slots may instead be substituted away so
    /// they can face a different meld.
    #[allow(clippy::too_many_arguments)]
    fn assign(
        &mut self,
        st: DistState,
        slots: &[u8],
        at: usize,
        fills_here: u8,
        is_seq: bool,
        window_clean: bool,
        anchor_id: u8,
    ) -> bool {
        if st.size > 13 || self.lower_bound(&st) > self.budget {
            return false;
        }
        if self.require_unfaced != 0 && self.require_unfaced & !st.faced == 0 {
            return false;
        }
        if at == slots.len() {
            let mut st2 = st;
            st2.pure |= is_seq && fills_here == 0 && window_clean;
            st2.seqs = (st2.seqs + is_seq as u8).min(2);
            return self.step(st2);
        }
        let id = slots[at];
        let in_hand = self.hand_mask54 & (1u64 << id) != 0;

        if in_hand {
            let pos = self.id_pos[id as usize] as usize;
            let bit = 1u16 << pos;
            if st.mask & bit != 0 {
                // Face the hand card.
                let mut st2 = st;
                st2.mask &= !bit;
                st2.faced |= 1u64 << id;
                st2.size += 1;
                if self.dual_positions & bit != 0 {
                    st2.duals_faced += 1;
                }
                if self.assign(st2, slots, at + 1, fills_here, is_seq, window_clean, anchor_id)
                {
                    return true;
                }
            }
            if id == anchor_id {
                return false;
            }
        } else if st.used & (1u64 << id) == 0 {
            // Face an outside card.
            let mut st2 = st;
            st2.used |= 1u64 << id;
            st2.outside_faces += 1;
            st2.size += 1;
            if self.assign(st2, slots, at + 1, fills_here, is_seq, window_clean, anchor_id) {
                return true;
            }
        }

        // Substitute a wildcard for this slot.
        if st.fills < self.total_wilds {
            let mut st2 = st;
            st2.fills += 1;
            st2.size += 1;
            if self.assign(st2, slots, at + 1, fills_here + 1, is_seq, window_clean, anchor_id)
            {
                return true;
            }
        }
        false
    }

    /// All hand cards are settled; pad the template with outside-only melds
    /// up to 13 cards, then close the wildcard ledger and the budget.
    fn pad(&mut self, st: DistState, anchor_from: usize) -> bool {
        if st.size == 13 {
            if !(st.pure && st.seqs >= 2) {
                return false;
            }
            let hand_fill = st.fills.min(self.wilds_left(&st));
            let outside_fill = st.fills - hand_fill;
            let outside_wilds_free = self.outside_jokers
                + self
                    .outside_dual_ids
                    .iter()
                    .filter(|&&id| st.used & (1u64 << id) == 0)
                    .count() as u8;
            if outside_fill > outside_wilds_free {
                return false;
            }
            if st.outside_faces + outside_fill > self.budget {
                return false;
            }
            self.leaf = Some(LeafCert {
                faced: st.faced,
                fills: st.fills,
                pool: self.wilds_left(&st),
                out_free: outside_wilds_free,
                out_faces: st.outside_faces,
            });
            return true;
        }
        let open = 13 - st.size;
        // Melds are at least three cards, and the flags still owed dictate a
        // floor on filler faces: a pure filler is fully faced, any other
        // filler needs one face so it is not all wildcards.
        let (flag_faces, flag_slots) = if !st.pure {
            if st.seqs == 0 {
                (4u8, 6u8)
            } else {
                (3, 3)
            }
        } else {
            (1, 3)
        };
        if open < flag_slots {
            return false;
        }
        let wilds = self.wilds_left(&st);
        let shortfall = st
            .fills
            .saturating_sub(wilds)
            .max(flag_faces + (st.fills + open - flag_faces).saturating_sub(wilds));
        if st.outside_faces + shortfall > self.budget {
            return false;
        }
        let mut slots = [0u8; 14];

        // Filler sequences, enumerated in non-decreasing anchor order. The
        // same anchor may repeat: two melds can share a suit and start.
        for anchor in anchor_from..(4 * 14) {
            let suit = (anchor / 14) as u8;
            let lo = (anchor % 14) as u8 + 1;
            if lo > 12 {
                continue;
            }
            for hi in (lo + 2)..=(lo + 12).min(14) {
                if hi - lo + 1 > open {
                    break;
                }
                let mut n = 0;
                for p in lo..=hi {
                    let r = if p == 14 { 1 } else { p };
                    slots[n] = suit * 13 + r - 1;
                    n += 1;
                }
                let clean = !self
                    .wcj_rank
                    .is_some_and(|w| (lo..=hi).contains(&w) || (w == 1 && hi == 14));
                if self.fill_outside(st, &slots[..n], 0, 0, 0, true, clean, anchor) {
                    return true;
                }
            }
        }
        // Filler sets.
        for anchor in anchor_from.max(4 * 14)..(4 * 14 + 13) {
            let rank = (anchor - 4 * 14) as u8 + 1;
            for pick in 0u8..16 {
                let want = pick.count_ones() as u8;
                if !(3..=4).contains(&want) || want > open {
                    continue;
                }
                let mut n = 0;
                for s in 0..4u8 {
                    if pick & (1u8 << s) != 0 {
                        slots[n] = s * 13 + rank - 1;
                        n += 1;
                    }
                }
                if self.fill_outside(st, &slots[..n], 0, 0, 0, false, false, anchor) {
                    return true;
                }
            }
        }
        false
    }

    #[allow(clippy::too_many_arguments)]
    fn fill_outside(
        &mut self,
        st: DistState,
        slots: &[u8],
        at: usize,
        fills_here: u8,
        faces_here: u8,
        is_seq: bool,
        window_clean: bool,
        anchor: usize,
    ) -> bool {
        if st.size > 13 || self.lower_bound(&st) > self.budget {
            return false;
        }
        if at == slots.len() {
            if faces_here == 0 {
                return false;
            }
            let mut st2 = st;
            st2.pure |= is_seq && fills_here == 0 && window_clean;
            st2.seqs = (st2.seqs + is_seq as u8).min(2);
            return self.pad(st2, anchor);
        }
        let id = slots[at];
        let in_hand = self.hand_mask54 & (1u64 << id) != 0;
        if !in_hand && st.used & (1u64 << id) == 0 {
            let mut st2 = st;
            st2.used |= 1u64 << id;
            st2.outside_faces += 1;
            st2.size += 1;
            if self.fill_outside(
                st2,
                slots,
                at + 1,
                fills_here,
                faces_here + 1,
                is_seq,
                window_clean,
                anchor,
            ) {
                return true;
            }
        }
        if st.fills < self.total_wilds {
            let mut st2 = st;
            st2.fills += 1;
            st2.size += 1;
            if self.fill_outside(
                st2,
                slots,
                at + 1,
                fills_here + 1,
                faces_here,
                is_seq,
                window_clean,
                anchor,
            ) {
                return true;
            }
        }
        false
    }
}

// ─── Solver facade ───

/// Exact metric solver for one game's wildcard rule, with per-hand caches.
/// Create one per game; the caches assume a fixed `wcj`.
pub struct MeldSolver {
    wcj: WildcardRank,
    score_cache: FastMap<u64, u8>,
    dist_cache: FastMap<u64, u8>,
}

impl MeldSolver {
    pub fn new(wcj: WildcardRank) -> MeldSolver {
        MeldSolver {
            wcj,
            score_cache: FastMap::default(),
            dist_cache: FastMap::default(),
        }
    }

    pub fn wcj(&self) -> WildcardRank {
        self.wcj
    }

    fn split(&self, hand: &Hand) -> (Vec<u8>, u8) {
        let mut ids = Vec::with_capacity(hand.len());
        let mut jokers = 0u8;
        for &card in hand.cards() {
            match card {
                Card::Joker => jokers += 1,
                c => ids.push(c.deck_index()),
            }
        }
        (ids, jokers)
    }

    fn score_of(&mut self, hand: &Hand) -> u8 {
        let key = hand.mask();
        if let Some(&v) = self.score_cache.get(&key) {
            return v;
        }
        let wcj_rank = self.wcj.0.map(|r| r.value());
        let (ids, jokers) = self.split(hand);
        let duals = ids
            .iter()
            .filter(|&&id| Some(id % 13 + 1) == wcj_rank)
            .count() as u8;
        let pool = jokers + duals;

        let total: u32 = hand.points(self.wcj);
        let mut best = total;
        let pure_pts = best_pure_sequence_points(&ids, wcj_rank);
        if pure_pts > 0 {
            best = best.min(total - pure_pts);
        }
        let mut search = ScoreSearch::new(&ids, wcj_rank, pool);
        let full_mask = if ids.is_empty() {
            0
        } else {
            ((1u32 << ids.len()) - 1) as u16
        };
        let covered = search.best_full(full_mask, pool, false, 0);
        if covered != INF {
            best = best.min(covered as u32);
        }
        let v = best.min(SCORE_CAP as u32) as u8;
        self.score_cache.insert(key, v);
        v
    }

    /// Works on 13 cards, and on 14 where it means the best distance over
    /// all discards: one spare drop is free, so a single search answers it.
    fn dist_of(&mut self, hand: &Hand) -> u8 {
        let key = hand.mask();
        if let Some(&v) = self.dist_cache.get(&key) {
            return v;
        }
        let v = if hand.len() == HAND_SIZE && self.score_of(hand) == 0 {
            0
        } else {
            let mut search = DistSearch::new(hand, self.wcj);
            let floor = if hand.len() == HAND_SIZE { 1 } else { 0 };
            let mut dist = MAX_DIST;
            for budget in floor..MAX_DIST {
                if !search.relax_exceeds(budget) && search.feasible(budget) {
                    dist = budget;
                    break;
                }
            }
            dist
        };
        self.dist_cache.insert(key, v);
        v
    }

    /// Minimum ladder deadwood of a 13-card hand, capped at 80.
    pub fn min_score(&mut self, hand: &Hand) -> Result<u8> {
        expect_len(hand, HAND_SIZE)?;
        Ok(self.score_of(hand))
    }

    /// Minimum number of card swaps to a valid declaration, 0..=13.
    pub fn min_dist(&mut self, hand: &Hand) -> Result<u8> {
        expect_len(hand, HAND_SIZE)?;
        Ok(self.dist_of(hand))
    }

    /// Whether the 13 cards can be arranged as a valid declaration.
    pub fn is_valid_declaration(&mut self, hand: &Hand) -> Result<bool> {
        Ok(self.min_score(hand)? == 0)
    }

    pub fn metrics(&mut self, hand: &Hand) -> Result<HandMetrics> {
        let min_score = self.min_score(hand)?;
        let min_dist = self.min_dist(hand)?;
        Ok(HandMetrics {
            min_score,
            min_dist,
            declarable: min_score == 0,
        })
    }

    /// Best discard from a 14-card hand by resulting `min_score`; ties go to
    /// the highest-point discard, then canonical card order.
    pub fn min_score14(&mut self, hand: &Hand) -> Result<ScoreDiscard> {
        expect_len(hand, HAND_SIZE + 1)?;
        let mut best: Option<(u8, i32, Card)> = None;
        for &card in hand.cards() {
            let rest = hand.without(card);
            let score = self.score_of(&rest);
            let key = (score, -(card_points(card, self.wcj) as i32), card);
            if best.map_or(true, |b| key < b) {
                best = Some(key);
            }
        }
        let (score, _, discard) = best.unwrap();
        Ok(ScoreDiscard { discard, score })
    }

    /// Resulting `min_dist` for each discard of a 14-card hand, in canonical
    /// card order. Discarding moves the distance by at most one off its best
    /// value, and each successful search certifies every card its template
    /// did without, so a few passes of one shared search settle the scan: a
    /// pass is forced to leave an unresolved card out, and when it cannot,
    /// all the cards it was asked about are refuted together.
    pub fn dist_removals(&mut self, hand: &Hand) -> Result<Vec<(Card, u8)>> {
        expect_len(hand, HAND_SIZE + 1)?;
        let wcj_rank = self.wcj.0.map(|r| r.value());
        let mut dist: Vec<Option<u8>> = hand
            .cards()
            .iter()
            .map(|&c| self.dist_cache.get(&hand.without(c).mask()).copied())
            .collect();
        if dist.iter().all(Option::is_some) {
            let pairs = hand.cards().iter().zip(&dist);
            return Ok(pairs.map(|(&c, d)| (c, d.unwrap())).collect());
        }

        let mut search = DistSearch::new(hand, self.wcj);
        let mut best = MAX_DIST;
        for budget in 0..MAX_DIST {
            if !search.relax_exceeds(budget) && search.feasible(budget) {
                best = budget;
                break;
            }
        }
        self.dist_cache.insert(hand.mask(), best);

        let mark = |leaf: &LeafCert, dist: &mut [Option<u8>]| {
            let spare = leaf.spare_wild(best);
            for (i, &card) in hand.cards().iter().enumerate() {
                if dist[i].is_some() {
                    continue;
                }
                let wild = match card {
                    Card::Joker => true,
                    c => {
                        let id = c.deck_index();
                        if leaf.faced & (1u64 << id) != 0 {
                            continue;
                        }
                        Some(id % 13 + 1) == wcj_rank
                    }
                };
                if !wild || spare {
                    dist[i] = Some(best);
                }
            }
        };
        if let Some(leaf) = search.leaf {
            mark(&leaf, &mut dist);
        }

        loop {
            let mut req = 0u64;
            for (i, &card) in hand.cards().iter().enumerate() {
                if dist[i].is_some() {
                    continue;
                }
                match card {
                    Card::Joker => {}
                    c => {
                        let id = c.deck_index();
                        if Some(id % 13 + 1) != wcj_rank {
                            req |= 1u64 << id;
                        }
                    }
                }
            }
            if req == 0 {
                break;
            }
            search.require_unfaced = req;
            search.require_positions = {
                let mut m = 0u16;
                let mut r = req;
                while r != 0 {
                    let id = r.trailing_zeros() as usize;
                    r &= r - 1;
                    m |= 1u16 << search.id_pos[id];
                }
                m
            };
            if search.feasible(best) {
                let leaf = search.leaf.unwrap();
                mark(&leaf, &mut dist);
            } else {
                for (i, &card) in hand.cards().iter().enumerate() {
                    if dist[i].is_some() {
                        continue;
                    }
                    if let Card::Standard { .. } = card {
                        if req & (1u64 << card.deck_index()) != 0 {
                            dist[i] = Some(best + 1);
                        }
                    }
                }
                break;
            }
        }

        // A removed wildcard shrinks the substitute supply itself, so when
        // no certificate spared it, only a search of the remaining thirteen
        // tells its side of the story.
        for (i, &card) in hand.cards().iter().enumerate() {
            if dist[i].is_some() {
                continue;
            }
            let rest = hand.without(card);
            let key = rest.mask();
            let d = if let Some(&v) = self.dist_cache.get(&key) {
                v
            } else {
                let mut sub = DistSearch::new(&rest, self.wcj);
                let v = if !sub.relax_exceeds(best) && sub.feasible(best) {
                    best
                } else {
                    best + 1
                };
                self.dist_cache.insert(key, v);
                v
            };
            dist[i] = Some(d);
        }

        let mut out = Vec::with_capacity(hand.len());
        for (i, &card) in hand.cards().iter().enumerate() {
            let d = dist[i].unwrap();
            self.dist_cache.insert(hand.without(card).mask(), d);
            out.push((card, d));
        }
        Ok(out)
    }

    /// Best discard from a 14-card hand by resulting `min_dist`.
    pub fn min_dist14(&mut self, hand: &Hand, tie: DistTieBreak) -> Result<DistDiscard> {
        let removals = self.dist_removals(hand)?;
        let best_dist = removals.iter().map(|&(_, d)| d).min().unwrap();
        let mut best: Option<(u8, i32, Card)> = None;
        for &(card, dist) in &removals {
            if dist > best_dist {
                continue;
            }
            let secondary = match tie {
                DistTieBreak::Points => 0,
                DistTieBreak::Score => self.score_of(&hand.without(card)),
            };
            let key = (secondary, -(card_points(card, self.wcj) as i32), card);
            if best.map_or(true, |b| key < b) {
                best = Some(key);
            }
        }
        let (_, _, discard) = best.unwrap();
        Ok(DistDiscard {
            discard,
            dist: best_dist,
        })
    }

    /// An arrangement achieving `min_score`, for display and debugging.
    pub fn best_arrangement(&mut self, hand: &Hand) -> Result<Arrangement> {
        expect_len(hand, HAND_SIZE)?;
        let score = self.score_of(hand);
        let wcj_rank = self.wcj.0.map(|r| r.value());
        let (ids, jokers) = self.split(hand);
        let duals = ids
            .iter()
            .filter(|&&id| Some(id % 13 + 1) == wcj_rank)
            .count() as u8;
        let pool = jokers + duals;
        let total: u32 = hand.points(self.wcj);

        let mut search = ScoreSearch::new(&ids, wcj_rank, pool);
        let full_mask = if ids.is_empty() {
            0
        } else {
            ((1u32 << ids.len()) - 1) as u16
        };
        let covered = search.best_full(full_mask, pool, false, 0);

        if covered != INF && covered.min(SCORE_CAP) == score {
            return Ok(self.rebuild(&ids, jokers, &mut search, pool, covered, score));
        }

        let pure_pts = best_pure_sequence_points(&ids, wcj_rank);
        if pure_pts > 0 && (total - pure_pts).min(SCORE_CAP as u32) == score as u32 {
            let meld_cards = best_pure_sequence_cards(&ids, wcj_rank);
            let mut deadwood = hand.cards().to_vec();
            for c in &meld_cards {
                if let Some(at) = deadwood.iter().position(|d| d == c) {
                    deadwood.remove(at);
                }
            }
            return Ok(Arrangement {
                melds: vec![Meld {
                    kind: MeldKind::PureSequence,
                    cards: meld_cards,
                }],
                deadwood,
                score,
            });
        }

        Ok(Arrangement {
            melds: Vec::new(),
            deadwood: hand.cards().to_vec(),
            score,
        })
    }

    /// Retraces one optimal path of the covering search and assigns wildcard
    /// substitutes: printed jokers first, then wildcard-rank cards.
    fn rebuild(
        &self,
        ids: &[u8],
        jokers: u8,
        search: &mut ScoreSearch,
        pool: u8,
        covered: u8,
        score: u8,
    ) -> Arrangement {
        let id_card = |id: u8| -> Card {
            Card::new(
                Rank::new(id % 13 + 1).unwrap(),
                Suit::all()[(id / 13) as usize],
            )
        };
        let mut mask = if ids.is_empty() {
            0u16
        } else {
            ((1u32 << ids.len()) - 1) as u16
        };
        let mut pool_left = pool;
        let mut pure = false;
        let mut seqs = 0u8;
        let mut remaining = covered;
        let mut deadwood: Vec<Card> = Vec::new();
        let mut picked: Vec<(Cand, Vec<Card>)> = Vec::new();

        while mask != 0 {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let dead = search
                .best_full(rest, pool_left, pure, seqs)
                .saturating_add(search.pts[low]);
            if dead == remaining {
                // A skipped wildcard-rank card stays in the substitute pool;
                // whatever the melds do not consume is deadwood at the end.
                if search.dual_mask & (1u16 << low) == 0 {
                    deadwood.push(id_card(ids[low]));
                }
                remaining -= search.pts[low];
                mask = rest;
                continue;
            }
            let mut advanced = false;
            for i in 0..search.by_low[low].len() {
                let cand = search.cands[search.by_low[low][i] as usize];
                if cand.mask & !mask != 0 {
                    continue;
                }
                let duals_faced = (cand.mask & search.dual_mask).count_ones() as u8;
                if cand.fills + duals_faced > pool_left {
                    continue;
                }
                let v = search.best_full(
                    mask & !cand.mask,
                    pool_left - cand.fills - duals_faced,
                    pure || cand.is_pure,
                    (seqs + cand.is_seq as u8).min(2),
                );
                if v == remaining {
                    let faces: Vec<Card> = (0..16u8)
                        .filter(|&b| cand.mask & (1u16 << b) != 0)
                        .map(|b| id_card(ids[b as usize]))
                        .collect();
                    mask &= !cand.mask;
                    pool_left -= cand.fills + duals_faced;
                    pure |= cand.is_pure;
                    seqs = (seqs + cand.is_seq as u8).min(2);
                    picked.push((cand, faces));
                    advanced = true;
                    break;
                }
            }
            debug_assert!(advanced, "optimal path must be retraceable");
            if !advanced {
                break;
            }
        }

        let faced: Vec<Card> = picked.iter().flat_map(|(_, f)| f.clone()).collect();
        let mut dual_pool: Vec<Card> = ids
            .iter()
            .map(|&id| id_card(id))
            .filter(|c| self.wcj.is_wild(*c) && !faced.contains(c))
            .collect();
        dual_pool.sort();
        let mut jokers_left = jokers;

        let mut melds = Vec::new();
        for (cand, faces) in picked {
            let mut cards = faces;
            for _ in 0..cand.fills {
                if jokers_left > 0 {
                    jokers_left -= 1;
                    cards.push(Card::Joker);
                } else {
                    cards.push(dual_pool.remove(0));
                }
            }
            let kind = if cand.is_pure {
                MeldKind::PureSequence
            } else if cand.is_seq {
                MeldKind::ImpureSequence
            } else {
                MeldKind::Set
            };
            melds.push(Meld { kind, cards });
        }
        for _ in 0..jokers_left {
            deadwood.push(Card::Joker);
        }
        deadwood.extend(dual_pool);
        deadwood.sort();
        Arrangement {
            melds,
            deadwood,
            score,
        }
    }
}

fn expect_len(hand: &Hand, expected: usize) -> Result<()> {
    if hand.len() != expected {
        return Err(Error::HandSize {
            expected,
            got: hand.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hand(codes: &str) -> Hand {
        Hand::parse_codes(codes).unwrap()
    }

    fn wcj(code: &str) -> WildcardRank {
        if code == "none" {
            WildcardRank(None)
        } else {
            WildcardRank(Some(code.parse().unwrap()))
        }
    }

    #[test]
    fn textbook_declaration_is_valid() {
        let mut solver = MeldSolver::new(wcj("5"));
        let h = hand("2H 3H 4H 5S 6S 7S 9C 9D 9S 10D JD QD KD");
        assert!(solver.is_valid_declaration(&h).unwrap());
        assert_eq!(solver.min_score(&h).unwrap(), 0);
        assert_eq!(solver.min_dist(&h).unwrap(), 0);
    }

    #[test]
    fn no_second_sequence_is_not_a_declaration() {
        let mut solver = MeldSolver::new(wcj("none"));
        let h = hand("2C 2D 2H 5C 5D 5H 8C 8D 8H JC JD JH KS");
        assert!(!solver.is_valid_declaration(&h).unwrap());
    }

    #[test]
    fn cap_applies_when_no_pure_sequence_exists() {
        // 13 high cards with no three consecutive ranks in one suit.
        let mut solver = MeldSolver::new(wcj("5"));
        let h = hand("10C JC KC AC 10D QD AD 10H QH AH 10S QS AS");
        assert_eq!(solver.min_score(&h).unwrap(), SCORE_CAP);
    }

    #[test]
    fn pure_sequence_alone_excludes_only_its_cards() {
        // 10H JH QH is pure; the rest are sets, which the ladder ignores
        // until a second sequence exists. 85 total minus the pure 30.
        let mut solver = MeldSolver::new(wcj("none"));
        let h = hand("10H JH QH AC 2C 5C 8C 2D 5D 8D 2S 5S 8S");
        assert_eq!(solver.min_score(&h).unwrap(), 55);
    }

    #[test]
    fn wildcards_substitute_in_sequences_and_sets() {
        let mut solver = MeldSolver::new(wcj("9"));
        // 5H 6H 7H and 2C 3C 4C pure; 2S 3S + joker runs; KD KH + wild set;
        // the leftover wildcard counts zero and is absorbable.
        let h = hand("5H 6H 7H 2S 3S JK 9C 9D 2C 3C 4C KD KH");
        assert_eq!(solver.min_score(&h).unwrap(), 0);
    }

    #[test]
    fn wildcard_rank_cards_still_cover_their_rank() {
        let mut solver = MeldSolver::new(wcj("9"));
        // The nines are wildcards here, yet the king still gets covered and
        // the spare nine counts zero.
        let h = hand("9C 9D 9S 2H 3H 4H 5S 6S 7S AC 2C 3C KD");
        assert_eq!(solver.min_score(&h).unwrap(), 0);
    }

    #[test]
    fn pure_sequence_may_not_contain_wildcard_rank_cards() {
        let mut solver = MeldSolver::new(wcj("6"));
        // The only consecutive run is 5H 6H 7H, but the 6 is a wildcard, so
        // no pure sequence exists and the whole hand counts, capped. The
        // other suits hold 10/Q/A plus a lone 2C: nothing consecutive.
        let h = hand("5H 6H 7H 2C 10C QC AC 10D QD AD 10S QS AS");
        assert_eq!(solver.min_score(&h).unwrap(), SCORE_CAP);
    }

    #[test]
    fn min_dist_one_for_a_skeleton_plus_junk() {
        let mut solver = MeldSolver::new(wcj("5"));
        let h = hand("2H 3H 4H 6S 7S 8S 9C 9D 9S 10D JD QD KC");
        assert!(!solver.is_valid_declaration(&h).unwrap());
        assert_eq!(solver.min_dist(&h).unwrap(), 1);
    }

    #[test]
    fn min_dist_counts_missing_sequences() {
        // Four sets, no sequence material, no wildcard rank. Any sequence
        // through a hand card needs two outside cards (ranks are spread),
        // and two sequences are required: distance exactly 4.
        let mut solver = MeldSolver::new(wcj("none"));
        let h = hand("2C 2D 2H 5C 5D 5H 8C 8D 8H JC JD JH KS");
        assert_eq!(solver.min_dist(&h).unwrap(), 4);
    }

    #[test]
    fn score_zero_and_dist_zero_coincide_on_dealt_hands() {
        for seed in 0..40u64 {
            let layout = crate::cards::deal(seed);
            let mut solver = MeldSolver::new(layout.wcj);
            for hand in &layout.hands {
                let s = solver.min_score(hand).unwrap();
                let d = solver.min_dist(hand).unwrap();
                assert_eq!(s == 0, d == 0, "seed {seed} hand {hand}: s={s} d={d}");
                assert!(d <= MAX_DIST);
                assert!(s as u32 <= hand.points(layout.wcj).min(SCORE_CAP as u32));
            }
        }
    }

    #[test]
    fn min_score14_reports_optimal_removal() {
        let mut solver = MeldSolver::new(wcj("5"));
        let h = hand("2H 3H 4H 5S 6S 7S 9C 9D 9S 10D JD QD KD KC");
        let pick = solver.min_score14(&h).unwrap();
        assert_eq!(pick.score, 0);
        assert_eq!(pick.discard, "KC".parse().unwrap());
    }

    #[test]
    fn is_meld_classifies_shapes() {
        let w = wcj("9");
        let m = |codes: &str| {
            let h = hand(codes);
            is_meld(h.cards(), w)
        };
        assert_eq!(m("2H 3H 4H"), Some(MeldKind::PureSequence));
        assert_eq!(m("2H 3H JK"), Some(MeldKind::ImpureSequence));
        assert_eq!(m("2H 3H 9C"), Some(MeldKind::ImpureSequence));
        assert_eq!(m("KC KD KH"), Some(MeldKind::Set));
        assert_eq!(m("KC KD 9H"), Some(MeldKind::Set));
        assert_eq!(m("9C 9D 9S"), Some(MeldKind::Set));
        // The nine faces itself; printed jokers substitute for the others.
        assert_eq!(m("JK JK 9C"), Some(MeldKind::Set));
        assert_eq!(m("QS KS AS"), Some(MeldKind::PureSequence));
        assert_eq!(m("AS 2S 3S"), Some(MeldKind::PureSequence));
        assert_eq!(m("KS AS 2S"), None, "sequences do not wrap");
        assert_eq!(m("2H 3H 5H"), None);
        assert_eq!(m("2H 3H"), None, "two cards are never a meld");
        assert_eq!(m("2H 3H 4S"), None, "mixed suits break a run");
    }

    #[test]
    fn arrangement_matches_score_and_uses_whole_hand() {
        let w = wcj("5");
        let mut solver = MeldSolver::new(w);
        let h = hand("2H 3H 4H 5S 6S 7S 9C 9D 9S 10D JD QD KC");
        let arr = solver.best_arrangement(&h).unwrap();
        assert_eq!(arr.score, solver.min_score(&h).unwrap());
        let mut count = arr.deadwood.len();
        for meld in &arr.melds {
            count += meld.cards.len();
            assert!(is_meld(&meld.cards, w).is_some(), "bad meld {:?}", meld.cards);
        }
        assert_eq!(count, 13);
    }

    #[test]
    fn arrangements_are_consistent_on_dealt_hands() {
        for seed in 100..130u64 {
            let layout = crate::cards::deal(seed);
            let mut solver = MeldSolver::new(layout.wcj);
            let arr = solver.best_arrangement(&layout.hands[0]).unwrap();
            let mut count = arr.deadwood.len();
            for meld in &arr.melds {
                count += meld.cards.len();
                assert!(
                    is_meld(&meld.cards, layout.wcj).is_some(),
                    "seed {seed}: bad meld {:?} (wcj {})",
                    meld.cards,
                    layout.wcj
                );
            }
            assert_eq!(count, 13, "seed {seed}");
            assert_eq!(arr.score, solver.min_score(&layout.hands[0]).unwrap());
        }
    }

    // The removal scan resolves discards in batches off shared certificates;
    // every answer must equal a from-scratch search of the remaining cards.
    #[test]
    fn removal_scan_matches_full_searches() {
        for seed in 40..48u64 {
            let layout = crate::cards::deal(seed);
            for (i, h) in layout.hands.iter().enumerate() {
                let mut cards = h.cards().to_vec();
                cards.push(layout.stock[i]);
                let hand14 = Hand::new(cards);

                let mut fast = MeldSolver::new(layout.wcj);
                for (card, d) in fast.dist_removals(&hand14).unwrap() {
                    let mut slow = MeldSolver::new(layout.wcj);
                    let full = slow.min_dist(&hand14.without(card)).unwrap();
                    assert_eq!(d, full, "seed {seed} hand {i} discard {card}");
                }
            }
        }
    }
}
