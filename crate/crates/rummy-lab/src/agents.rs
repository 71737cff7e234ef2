//! The six benchmark policies, from a coin-flipping baseline to an
//! opponent-aware distance minimizer.
//!
//! Every agent sees only its own cards, the open discard, and the
//! opponent's discard history. Randomness comes from a per-seat stream of
//! the game seed, so agent choices never disturb the deal and identical
//! seeds replay identical games.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cards::{card_points, Card, Hand, WildcardRank};
use crate::error::{Error, Result};
use crate::game::{DiscardView, DrawSource, Player, TurnView};
use crate::melds::{is_meld, DistTieBreak, MeldSolver};
use crate::rng::stream_rng;

/// The six built-in policies, named by their command-line ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyId {
    Random,
    Defeat,
    MinScore,
    MinDist,
    MinDistScore,
    MinDistOpp,
}

impl StrategyId {
    pub const ALL: [StrategyId; 6] = [
        StrategyId::Random,
        StrategyId::Defeat,
        StrategyId::MinScore,
        StrategyId::MinDist,
        StrategyId::MinDistScore,
        StrategyId::MinDistOpp,
    ];

    /// Command-line id, also used as the seat name in game records.
    pub fn as_str(self) -> &'static str {
        match self {
            StrategyId::Random => "random",
            StrategyId::Defeat => "defeat",
            StrategyId::MinScore => "minscore",
            StrategyId::MinDist => "mindist",
            StrategyId::MinDistScore => "mindistscore",
            StrategyId::MinDistOpp => "mindistopp",
        }
    }

    /// Reporting label used in rating summaries.
    pub fn label(self) -> &'static str {
        match self {
            StrategyId::Random => "Random",
            StrategyId::Defeat => "Defeat Heuristic",
            StrategyId::MinScore => "Minscore",
            StrategyId::MinDist => "Mindist",
            StrategyId::MinDistScore => "MindistScore",
            StrategyId::MinDistOpp => "MindistOpp",
        }
    }
}

impl std::fmt::Display for StrategyId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for StrategyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<StrategyId> {
        StrategyId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown strategy {s:?}; expected one of random, defeat, \
                     minscore, mindist, mindistscore, mindistopp"
                ))
            })
    }
}

/// Tunable knobs shared by all agents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AgentConfig {
    /// Points of improvement in the best 13-of-14 score that make the
    /// score-driven agent take the open card.
    pub pickup_threshold: u8,
}

impl Default for AgentConfig {
    fn default() -> AgentConfig {
        AgentConfig {
            pickup_threshold: 3,
        }
    }
}

/// One seat's policy for one game. Holds its own solver cache and random
/// stream; build a fresh agent per game.
pub struct Agent {
    id: StrategyId,
    config: AgentConfig,
    rng: ChaCha8Rng,
    solver: Option<MeldSolver>,
    // Distance of the 13 cards seen at the latest draw decision; the
    // opponent-aware discard compares against it.
    pre_draw_dist: Option<u8>,
}

impl Agent {
    pub fn new(id: StrategyId, config: AgentConfig, rng: ChaCha8Rng) -> Agent {
        Agent {
            id,
            config,
            rng,
            solver: None,
            pre_draw_dist: None,
        }
    }

    /// Agent for `seat` (0 or 1) of the game at `game_seed`, drawing its
    /// randomness from that seat's stream.
    pub fn for_seat(id: StrategyId, config: AgentConfig, game_seed: u64, seat: usize) -> Agent {
        Agent::new(id, config, stream_rng(game_seed, seat as u64 + 1))
    }

    pub fn id(&self) -> StrategyId {
        self.id
    }

    fn solver(&mut self, wcj: WildcardRank) -> &mut MeldSolver {
        self.solver.get_or_insert_with(|| MeldSolver::new(wcj))
    }
}

impl Player for Agent {
    fn label(&self) -> &str {
        self.id.as_str()
    }

    fn choose_draw(&mut self, view: &TurnView) -> DrawSource {
        match self.id {
            StrategyId::Random => {
                if self.rng.gen_range(0..2) == 0 {
                    DrawSource::Stock
                } else {
                    DrawSource::DiscardTop
                }
            }
            StrategyId::Defeat => {
                if completes_a_meld(view.hand, view.open, view.wcj) {
                    DrawSource::DiscardTop
                } else {
                    DrawSource::Stock
                }
            }
            StrategyId::MinScore => {
                let threshold = self.config.pickup_threshold;
                let solver = self.solver(view.wcj);
                let now = solver.min_score(view.hand).expect("13-card hand");
                let with_open = solver
                    .min_score14(&view.hand.with(view.open))
                    .expect("14-card hand")
                    .score;
                if with_open == 0 || with_open + threshold <= now {
                    DrawSource::DiscardTop
                } else {
                    DrawSource::Stock
                }
            }
            StrategyId::MinDist | StrategyId::MinDistScore | StrategyId::MinDistOpp => {
                let tie = self.discard_tie_break();
                let solver = self.solver(view.wcj);
                let now = solver.min_dist(view.hand).expect("13-card hand");
                self.pre_draw_dist = Some(now);
                let with_open = self
                    .solver(view.wcj)
                    .min_dist14(&view.hand.with(view.open), tie)
                    .expect("14-card hand")
                    .dist;
                if with_open < now {
                    DrawSource::DiscardTop
                } else {
                    DrawSource::Stock
                }
            }
        }
    }

    fn choose_discard(&mut self, view: &DiscardView) -> Card {
        match self.id {
            StrategyId::Random => {
                let cards = view.hand.cards();
                cards[self.rng.gen_range(0..cards.len())]
            }
            StrategyId::Defeat => defeat_discard(view.hand, view.wcj),
            StrategyId::MinScore => self
                .solver(view.wcj)
                .min_score14(view.hand)
                .expect("14-card hand")
                .discard,
            StrategyId::MinDist => self
                .solver(view.wcj)
                .min_dist14(view.hand, DistTieBreak::Points)
                .expect("14-card hand")
                .discard,
            StrategyId::MinDistScore => self
                .solver(view.wcj)
                .min_dist14(view.hand, DistTieBreak::Score)
                .expect("14-card hand")
                .discard,
            StrategyId::MinDistOpp => {
                let pre = self.pre_draw_dist;
                let solver = self.solver(view.wcj);
                let removals = solver.dist_removals(view.hand).expect("14-card hand");
                let best = removals.iter().map(|&(_, d)| d).min().unwrap();
                // Only a stuck hand looks at the opponent: if the draw
                // improved matters, discard as the distance agent would.
                let improved = pre.map_or(false, |d0| best < d0);
                let similar = |card: Card| {
                    !improved && similar_to_any(card, view.opponent_discards)
                };
                let mut choice: Option<(i32, i32, Card)> = None;
                for &(card, d) in &removals {
                    if d > best {
                        continue;
                    }
                    let key = (
                        -(similar(card) as i32),
                        -(card_points(card, view.wcj) as i32),
                        card,
                    );
                    if choice.map_or(true, |c| key < c) {
                        choice = Some(key);
                    }
                }
                choice.unwrap().2
            }
        }
    }
}

impl Agent {
    fn discard_tie_break(&self) -> DistTieBreak {
        match self.id {
            StrategyId::MinDistScore => DistTieBreak::Score,
            _ => DistTieBreak::Points,
        }
    }
}

/// Whether `open` forms a meld with any two held cards.
fn completes_a_meld(hand: &Hand, open: Card, wcj: WildcardRank) -> bool {
    let cards = hand.cards();
    for i in 0..cards.len() {
        for j in (i + 1)..cards.len() {
            let mut trio = [open, cards[i], cards[j]];
            trio.sort();
            if is_meld(&trio, wcj).is_some() {
                return true;
            }
        }
    }
    false
}

/// Lowest-point card sitting in some meld of the 14; lowest-point card
/// overall when the hand holds no meld at all. Ties break on canonical card
/// order for determinism.
fn defeat_discard(hand: &Hand, wcj: WildcardRank) -> Card {
    let cards = hand.cards();
    let mut in_meld: Option<(u8, Card)> = None;
    for i in 0..cards.len() {
        for j in (i + 1)..cards.len() {
            for k in (j + 1)..cards.len() {
                let trio = [cards[i], cards[j], cards[k]];
                if is_meld(&trio, wcj).is_none() {
                    continue;
                }
                for &card in &trio {
                    let key = (card_points(card, wcj), card);
                    if in_meld.map_or(true, |m| key < m) {
                        in_meld = Some(key);
                    }
                }
            }
        }
    }
    if let Some((_, card)) = in_meld {
        return card;
    }
    *cards
        .iter()
        .min_by_key(|&&c| (card_points(c, wcj), c))
        .unwrap()
}

/// Similarity used by the opponent-aware agent: same rank in any suit, or
/// same suit within one rank step, with the ace adjacent to both king and
/// two. Printed jokers are never similar to anything.
fn similar_to_any(card: Card, history: &[Card]) -> bool {
    let (Some(rank), Some(suit)) = (card.rank(), card.suit()) else {
        return false;
    };
    history.iter().any(|&past| {
        let (Some(pr), Some(ps)) = (past.rank(), past.suit()) else {
            return false;
        };
        if pr == rank {
            return true;
        }
        if ps != suit {
            return false;
        }
        let (a, b) = (rank.value(), pr.value());
        let diff = a.abs_diff(b);
        diff <= 1 || diff == 12
    })
}
