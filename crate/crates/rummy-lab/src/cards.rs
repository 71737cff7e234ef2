//! Cards, the 54-card deck, hands, and the seeded deal.
//!
//! A deck holds the 52 standard cards plus two printed jokers. Card text
//! codes are rank then suit (`A`, `2`..`10`, `J`, `Q`, `K` and `C`, `D`, `H`,
//! `S`), e.g. `9H` or `10C`; a printed joker is `JK`. The canonical card
//! order is clubs, diamonds, hearts, spades, each ace to king, jokers last;
//! deterministic tie-breaks throughout the crate use this order.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;

use crate::error::Error;
use crate::rng::{stream_rng, STREAM_DEAL};

/// Number of cards in a full deck (52 standard + 2 printed jokers).
pub const DECK_SIZE: usize = 54;
/// Cards dealt to each player.
pub const HAND_SIZE: usize = 13;

/// Card rank, ace = 1 through king = 13. Aces may sit at either end of a
/// sequence but a sequence never wraps through king-ace-two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank(u8);

impl Rank {
    pub const ACE: Rank = Rank(1);
    pub const JACK: Rank = Rank(11);
    pub const QUEEN: Rank = Rank(12);
    pub const KING: Rank = Rank(13);

    /// Ranks ace through king in order.
    pub fn all() -> impl Iterator<Item = Rank> {
        (1..=13).map(Rank)
    }

    pub fn new(value: u8) -> Option<Rank> {
        (1..=13).contains(&value).then_some(Rank(value))
    }

    /// Numeric value, 1..=13.
    pub fn value(self) -> u8 {
        self.0
    }

    /// Point value: aces and face cards count 10, pip cards their face value.
    pub fn points(self) -> u8 {
        match self.0 {
            1 => 10,
            v if v >= 10 => 10,
            v => v,
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            1 => write!(f, "A"),
            11 => write!(f, "J"),
            12 => write!(f, "Q"),
            13 => write!(f, "K"),
            v => write!(f, "{v}"),
        }
    }
}

impl FromStr for Rank {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "A" => Ok(Rank(1)),
            "J" => Ok(Rank(11)),
            "Q" => Ok(Rank(12)),
            "K" => Ok(Rank(13)),
            _ => s
                .parse::<u8>()
                .ok()
                .filter(|v| (2..=10).contains(v))
                .map(Rank)
                .ok_or_else(|| Error::Parse(format!("invalid rank {s:?}"))),
        }
    }
}

/// Card suit in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suit {
    Clubs,
    Diamonds,
    Hearts,
    Spades,
}

impl Suit {
    pub fn all() -> [Suit; 4] {
        [Suit::Clubs, Suit::Diamonds, Suit::Hearts, Suit::Spades]
    }

    pub fn index(self) -> u8 {
        match self {
            Suit::Clubs => 0,
            Suit::Diamonds => 1,
            Suit::Hearts => 2,
            Suit::Spades => 3,
        }
    }

    fn letter(self) -> char {
        match self {
            Suit::Clubs => 'C',
            Suit::Diamonds => 'D',
            Suit::Hearts => 'H',
            Suit::Spades => 'S',
        }
    }
}

impl fmt::Display for Suit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A playing card: a standard rank-suit card or a printed joker.
///
/// The derived order is the canonical card order. The two printed jokers in
/// a deck are indistinguishable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Card {
    Standard { suit: Suit, rank: Rank },
    Joker,
}

impl Card {
    pub fn new(rank: Rank, suit: Suit) -> Card {
        Card::Standard { suit, rank }
    }

    pub fn rank(self) -> Option<Rank> {
        match self {
            Card::Standard { rank, .. } => Some(rank),
            Card::Joker => None,
        }
    }

    pub fn suit(self) -> Option<Suit> {
        match self {
            Card::Standard { suit, .. } => Some(suit),
            Card::Joker => None,
        }
    }

    pub fn is_joker(self) -> bool {
        matches!(self, Card::Joker)
    }

    /// Deck slot in canonical order: 0..52 standard, 52 for a joker.
    /// The second joker in a hand is tracked by count, not identity.
    pub fn deck_index(self) -> u8 {
        match self {
            Card::Standard { suit, rank } => suit.index() * 13 + rank.value() - 1,
            Card::Joker => 52,
        }
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Card::Standard { suit, rank } => write!(f, "{rank}{suit}"),
            Card::Joker => write!(f, "JK"),
        }
    }
}

impl FromStr for Card {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if s == "JK" {
            return Ok(Card::Joker);
        }
        if s.len() < 2 {
            return Err(Error::Parse(format!("invalid card code {s:?}")));
        }
        let (rank_str, suit_str) = s.split_at(s.len() - 1);
        let rank: Rank = rank_str
            .parse()
            .map_err(|_| Error::Parse(format!("invalid card code {s:?}")))?;
        let suit = match suit_str {
            "C" => Suit::Clubs,
            "D" => Suit::Diamonds,
            "H" => Suit::Hearts,
            "S" => Suit::Spades,
            _ => return Err(Error::Parse(format!("invalid card code {s:?}"))),
        };
        Ok(Card::new(rank, suit))
    }
}

/// The wildcard rank for a game, fixed by the card exposed at the deal.
/// `None` means the exposed card was a printed joker, leaving only printed
/// jokers wild for that game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WildcardRank(pub Option<Rank>);

impl WildcardRank {
    /// Whether a card counts as a wildcard under this rule: printed jokers
    /// always, plus every card of the wildcard rank.
    pub fn is_wild(self, card: Card) -> bool {
        match card {
            Card::Joker => true,
            Card::Standard { rank, .. } => self.0 == Some(rank),
        }
    }
}

impl fmt::Display for WildcardRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(rank) => write!(f, "{rank}"),
            None => write!(f, "none"),
        }
    }
}

/// Point value of a card: wildcards and printed jokers count zero, aces and
/// face cards ten, pip cards their face value.
pub fn card_points(card: Card, wcj: WildcardRank) -> u8 {
    if wcj.is_wild(card) {
        return 0;
    }
    match card {
        Card::Standard { rank, .. } => rank.points(),
        Card::Joker => 0,
    }
}

/// The full 54-card deck in canonical order.
pub fn full_deck() -> Vec<Card> {
    let mut deck = Vec::with_capacity(DECK_SIZE);
    for suit in Suit::all() {
        for rank in Rank::all() {
            deck.push(Card::new(rank, suit));
        }
    }
    deck.push(Card::Joker);
    deck.push(Card::Joker);
    deck
}

/// A hand of cards kept sorted in canonical order. Duplicate standard cards
/// cannot occur with a single deck; two printed jokers can.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hand {
    cards: Vec<Card>,
}

impl Hand {
    pub fn new(mut cards: Vec<Card>) -> Hand {
        cards.sort();
        Hand { cards }
    }

    pub fn len(&self) -> usize {
        self.cards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cards.is_empty()
    }

    pub fn cards(&self) -> &[Card] {
        &self.cards
    }

    pub fn contains(&self, card: Card) -> bool {
        self.cards.binary_search(&card).is_ok()
    }

    pub fn add(&mut self, card: Card) {
        let at = self.cards.partition_point(|&c| c <= card);
        self.cards.insert(at, card);
    }

    /// Removes one copy of `card`; false if the hand does not hold it.
    pub fn remove(&mut self, card: Card) -> bool {
        match self.cards.binary_search(&card) {
            Ok(at) => {
                self.cards.remove(at);
                true
            }
            Err(_) => false,
        }
    }

    /// Hand with one copy of `card` removed.
    pub fn without(&self, card: Card) -> Hand {
        let mut h = self.clone();
        h.remove(card);
        h
    }

    /// Hand with `card` added.
    pub fn with(&self, card: Card) -> Hand {
        let mut h = self.clone();
        h.add(card);
        h
    }

    /// Occupancy mask over deck slots: bits 0..52 for standard cards, bits
    /// 52 and 53 for the first and second printed joker. Canonical key for
    /// caching per-hand computations.
    pub fn mask(&self) -> u64 {
        let mut mask = 0u64;
        for &card in &self.cards {
            let idx = card.deck_index() as u64;
            if mask & (1 << idx) != 0 {
                mask |= 1 << (idx + 1); // second printed joker
            } else {
                mask |= 1 << idx;
            }
        }
        mask
    }

    /// Total point value of the hand under the wildcard rule.
    pub fn points(&self, wcj: WildcardRank) -> u32 {
        self.cards.iter().map(|&c| card_points(c, wcj) as u32).sum()
    }

    pub fn parse_codes(codes: &str) -> Result<Hand, Error> {
        let cards: Vec<Card> = codes
            .split_whitespace()
            .map(Card::from_str)
            .collect::<Result<_, _>>()?;
        Ok(Hand::new(cards))
    }
}

impl fmt::Display for Hand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for card in &self.cards {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{card}")?;
            first = false;
        }
        Ok(())
    }
}

/// Result of dealing one game.
///
/// From the shuffled deck: 13 cards to each seat, one card exposed to fix
/// the wildcard rank (it stays out of play), one card opening the discard
/// pile, and the remaining 26 forming the stock. `stock` is ordered so that
/// the next card drawn is `stock.last()`.
#[derive(Debug, Clone)]
pub struct DealLayout {
    pub hands: [Hand; 2],
    pub exposed: Card,
    pub wcj: WildcardRank,
    pub open: Card,
    pub stock: Vec<Card>,
}

/// Deals a game from `game_seed`, shuffling with Fisher-Yates driven by the
/// deal stream of the seed (see the `rng` module for the derivation).
pub fn deal(game_seed: u64) -> DealLayout {
    let mut deck = full_deck();
    let mut rng = stream_rng(game_seed, STREAM_DEAL);
    deck.shuffle(&mut rng);

    let hand1 = Hand::new(deck[0..13].to_vec());
    let hand2 = Hand::new(deck[13..26].to_vec());
    let exposed = deck[26];
    let open = deck[27];
    // Draw order follows shuffled order: deck[28] is drawn first.
    let mut stock = deck[28..].to_vec();
    stock.reverse();

    let wcj = WildcardRank(exposed.rank());
    DealLayout {
        hands: [hand1, hand2],
        exposed,
        wcj,
        open,
        stock,
    }
}

impl DealLayout {
    /// Serializes the layout as CSV, one row per zone, one card per cell.
    /// Stock cards are listed in draw order.
    pub fn to_csv(&self) -> String {
        let row = |cards: &[Card]| {
            cards
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let stock_draw_order: Vec<Card> = self.stock.iter().rev().copied().collect();
        format!(
            "hand1,{}\nhand2,{}\nexposed,{}\nwcj,{}\nopen,{}\nstock,{}\n",
            row(self.hands[0].cards()),
            row(self.hands[1].cards()),
            self.exposed,
            self.wcj,
            self.open,
            row(&stock_draw_order),
        )
    }
}
