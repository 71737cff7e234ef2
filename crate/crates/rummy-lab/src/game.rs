//! One full two-player game: the turn loop of draws and discards, automatic
//! declaration, and final scoring.
//!
//! Each turn the acting player draws from the stock or the open discard,
//! then discards one card. A player whose thirteen cards arrange into a
//! valid declaration after discarding wins immediately. An empty stock is
//! rebuilt by a seeded shuffle of the discard pile under its top card, and
//! a global turn cap scores the game as a draw so degenerate policies still
//! terminate.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;

use crate::cards::{deal, Card, Hand, WildcardRank};
use crate::error::{Error, Result};
use crate::melds::MeldSolver;
use crate::rng::{stream_rng, STREAM_RESHUFFLE};

/// Completed turns after which an undecided game is scored as a draw.
pub const TURN_CAP: u32 = 200;

/// Where a draw comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DrawSource {
    Stock,
    DiscardTop,
}

/// The actions open to the player to move: draw choices on a 13-card hand,
/// discard choices once a draw made it 14.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LegalActions {
    Draw(Vec<DrawSource>),
    Discard(Vec<Card>),
}

/// How a game ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// A player arranged all thirteen cards into a valid declaration.
    Declaration,
    /// The stock emptied with nothing left to rebuild it from.
    StockExhaustedDraw,
    /// The turn cap elapsed with no declaration.
    TurnCapDraw,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::Declaration => "declaration",
            Termination::StockExhaustedDraw => "stock_exhausted_draw",
            Termination::TurnCapDraw => "turn_cap_draw",
        })
    }
}

impl FromStr for Termination {
    type Err = Error;

    fn from_str(s: &str) -> Result<Termination> {
        match s {
            "declaration" => Ok(Termination::Declaration),
            "stock_exhausted_draw" => Ok(Termination::StockExhaustedDraw),
            "turn_cap_draw" => Ok(Termination::TurnCapDraw),
            other => Err(Error::Parse(format!("unknown termination {other:?}"))),
        }
    }
}

/// What a player sees when choosing where to draw from.
pub struct TurnView<'a> {
    pub hand: &'a Hand,
    pub open: Card,
    pub opponent_discards: &'a [Card],
    pub wcj: WildcardRank,
}

/// What a player sees when choosing a discard from fourteen cards.
pub struct DiscardView<'a> {
    pub hand: &'a Hand,
    pub opponent_discards: &'a [Card],
    pub wcj: WildcardRank,
}

/// A decision policy driving one seat. Implementations see only their own
/// hand, the open card, and the opponent's discard history.
pub trait Player {
    fn label(&self) -> &str;
    fn choose_draw(&mut self, view: &TurnView) -> DrawSource;
    fn choose_discard(&mut self, view: &DiscardView) -> Card;
}

/// Full table state. `turn` is the seat to act; a 14-card hand means that
/// seat has drawn and owes a discard. The top of the discard pile and the
/// next stock card are the last elements of their vectors.
#[derive(Debug, Clone)]
pub struct GameState {
    pub hands: [Hand; 2],
    pub stock: Vec<Card>,
    pub discard_pile: Vec<Card>,
    pub exposed: Card,
    pub wcj: WildcardRank,
    pub turn: usize,
    pub turn_count: u32,
}

/// Enumerates what the player to move may do in the current phase.
pub fn legal_actions(state: &GameState) -> LegalActions {
    let hand = &state.hands[state.turn];
    if hand.len() == 14 {
        LegalActions::Discard(hand.cards().to_vec())
    } else if state.stock.is_empty() {
        LegalActions::Draw(vec![DrawSource::DiscardTop])
    } else {
        LegalActions::Draw(vec![DrawSource::Stock, DrawSource::DiscardTop])
    }
}

/// Outcome summary of one game. Indexing is by seat: `h[0]` and `a[0]` are
/// the first seat's initial-hand score and final score.
#[derive(Debug, Clone, PartialEq)]
pub struct GameRecord {
    pub seats: [String; 2],
    /// Minimum score of each dealt hand, before any draw.
    pub h: [u8; 2],
    /// Final scores: 0 for the declarer, the minimum score of the terminal
    /// hand otherwise.
    pub a: [u8; 2],
    /// Outcome indicators: 1 for the winner, 0 for the loser, 0.5 each on a
    /// draw.
    pub w: [f64; 2],
    pub turns: u32,
    pub termination: Termination,
    pub seed: u64,
}

/// Plays one game to completion. Deterministic given the players' own seeded
/// state and the game seed.
pub fn play_game(
    first: &mut dyn Player,
    second: &mut dyn Player,
    seed: u64,
) -> Result<GameRecord> {
    run(first, second, seed, &mut None)
}

/// As [`play_game`], also returning one text line per event for debugging
/// and golden tests.
pub fn play_game_logged(
    first: &mut dyn Player,
    second: &mut dyn Player,
    seed: u64,
) -> Result<(GameRecord, Vec<String>)> {
    let mut log = Some(Vec::new());
    let record = run(first, second, seed, &mut log)?;
    Ok((record, log.unwrap()))
}

fn run(
    first: &mut dyn Player,
    second: &mut dyn Player,
    seed: u64,
    log: &mut Option<Vec<String>>,
) -> Result<GameRecord> {
    let layout = deal(seed);
    let mut solver = MeldSolver::new(layout.wcj);
    let h = [
        solver.min_score(&layout.hands[0])?,
        solver.min_score(&layout.hands[1])?,
    ];
    let mut state = GameState {
        hands: layout.hands,
        stock: layout.stock,
        discard_pile: vec![layout.open],
        exposed: layout.exposed,
        wcj: layout.wcj,
        turn: 0,
        turn_count: 0,
    };
    if let Some(lines) = log.as_mut() {
        lines.push(format!(
            "deal seed {} wcj {} open {}",
            seed, state.wcj, layout.open
        ));
    }
    let seats = [first.label().to_string(), second.label().to_string()];
    let mut discards: [Vec<Card>; 2] = [Vec::new(), Vec::new()];
    let mut reshuffles = 0u64;
    let mut winner = 0usize;

    let termination = loop {
        if state.turn_count == TURN_CAP {
            break Termination::TurnCapDraw;
        }
        let seat = state.turn;
        let opp = 1 - seat;

        if state.stock.is_empty() {
            let top = state.discard_pile.pop().expect("pile holds the top card");
            let mut rest = std::mem::take(&mut state.discard_pile);
            state.discard_pile.push(top);
            if rest.is_empty() {
                break Termination::StockExhaustedDraw;
            }
            // Each rebuild gets its own stream so two in one game cannot
            // repeat a permutation.
            let mut rng = stream_rng(seed, STREAM_RESHUFFLE + reshuffles);
            reshuffles += 1;
            rest.shuffle(&mut rng);
            state.stock = rest;
            if let Some(lines) = log.as_mut() {
                lines.push(format!(
                    "turn {} reshuffle {} cards",
                    state.turn_count + 1,
                    state.stock.len()
                ));
            }
        }

        state.turn_count += 1;
        let open = *state
            .discard_pile
            .last()
            .expect("pile is never empty at a turn start");
        let source = {
            let view = TurnView {
                hand: &state.hands[seat],
                open,
                opponent_discards: &discards[opp],
                wcj: state.wcj,
            };
            if seat == 0 {
                first.choose_draw(&view)
            } else {
                second.choose_draw(&view)
            }
        };
        let drawn = match source {
            DrawSource::Stock => state.stock.pop().expect("reshuffle refilled the stock"),
            DrawSource::DiscardTop => state
                .discard_pile
                .pop()
                .expect("pile is never empty at a turn start"),
        };
        state.hands[seat].add(drawn);
        if let Some(lines) = log.as_mut() {
            let action = match source {
                DrawSource::Stock => "draw",
                DrawSource::DiscardTop => "take",
            };
            lines.push(format!(
                "turn {} seat {} {} {}",
                state.turn_count,
                seat + 1,
                action,
                drawn
            ));
        }
        debug_assert!(conserved(&state), "card conservation broke after a draw");

        let discard = {
            let view = DiscardView {
                hand: &state.hands[seat],
                opponent_discards: &discards[opp],
                wcj: state.wcj,
            };
            if seat == 0 {
                first.choose_discard(&view)
            } else {
                second.choose_discard(&view)
            }
        };
        if !state.hands[seat].remove(discard) {
            return Err(Error::ProtocolViolation {
                seat: seat + 1,
                detail: format!("discarded {discard} which is not in hand"),
            });
        }
        state.discard_pile.push(discard);
        discards[seat].push(discard);
        if let Some(lines) = log.as_mut() {
            lines.push(format!(
                "turn {} seat {} discard {}",
                state.turn_count,
                seat + 1,
                discard
            ));
        }
        debug_assert!(conserved(&state), "card conservation broke after a discard");

        if solver.min_score(&state.hands[seat])? == 0 {
            if let Some(lines) = log.as_mut() {
                lines.push(format!("turn {} seat {} declare", state.turn_count, seat + 1));
            }
            winner = seat;
            break Termination::Declaration;
        }
        state.turn = opp;
    };

    let (a, w) = match termination {
        Termination::Declaration => {
            let loser = 1 - winner;
            let mut a = [0u8; 2];
            a[loser] = solver.min_score(&state.hands[loser])?;
            let mut w = [0f64; 2];
            w[winner] = 1.0;
            (a, w)
        }
        _ => {
            let a = [
                solver.min_score(&state.hands[0])?,
                solver.min_score(&state.hands[1])?,
            ];
            (a, [0.5, 0.5])
        }
    };
    if let Some(lines) = log.as_mut() {
        lines.push(format!(
            "end {} turns {} a1 {} a2 {} w1 {} w2 {}",
            termination, state.turn_count, a[0], a[1], w[0], w[1]
        ));
    }

    Ok(GameRecord {
        seats,
        h,
        a,
        w,
        turns: state.turn_count,
        termination,
        seed,
    })
}

/// The deck is intact: every standard card in exactly one zone, both printed
/// jokers present across all zones.
fn conserved(state: &GameState) -> bool {
    let mut seen = [0u8; 52];
    let mut jokers = 0u8;
    let mut tally = |cards: &[Card]| {
        for &card in cards {
            if card.is_joker() {
                jokers += 1;
            } else {
                seen[card.deck_index() as usize] += 1;
            }
        }
    };
    tally(state.hands[0].cards());
    tally(state.hands[1].cards());
    tally(&state.stock);
    tally(&state.discard_pile);
    tally(&[state.exposed]);
    jokers == 2 && seen.iter().all(|&n| n == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cards::HAND_SIZE;

    /// Scripted seat: draws from a fixed source, discards the first held
    /// card, or a named card once, for violation tests.
    struct Scripted {
        source: DrawSource,
        bad_discard: Option<Card>,
    }

    impl Player for Scripted {
        fn label(&self) -> &str {
            "scripted"
        }
        fn choose_draw(&mut self, _view: &TurnView) -> DrawSource {
            self.source
        }
        fn choose_discard(&mut self, view: &DiscardView) -> Card {
            match self.bad_discard.take() {
                Some(card) => card,
                None => view.hand.cards()[0],
            }
        }
    }

    fn stock_drawer() -> Scripted {
        Scripted {
            source: DrawSource::Stock,
            bad_discard: None,
        }
    }

    #[test]
    fn scripted_game_is_deterministic_and_conserved() {
        let mut a1 = stock_drawer();
        let mut b1 = stock_drawer();
        let r1 = play_game(&mut a1, &mut b1, 9).unwrap();
        let mut a2 = stock_drawer();
        let mut b2 = stock_drawer();
        let r2 = play_game(&mut a2, &mut b2, 9).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(r1.seed, 9);
        assert_eq!(r1.w[0] + r1.w[1], 1.0);
    }

    #[test]
    fn discarding_a_card_not_held_is_a_violation() {
        // 5H cannot be in hand on the first discard if it opened the pile or
        // sat in the stock; pick a card from the opponent's dealt hand.
        let layout = deal(4);
        let foreign = layout.hands[1].cards()[0];
        let mut bad = Scripted {
            source: DrawSource::Stock,
            bad_discard: Some(foreign),
        };
        let mut ok = stock_drawer();
        let err = play_game(&mut bad, &mut ok, 4).unwrap_err();
        match err {
            Error::ProtocolViolation { seat, .. } => assert_eq!(seat, 1),
            other => panic!("expected a protocol violation, got {other}"),
        }
    }

    #[test]
    fn turn_cap_scores_a_draw_with_terminal_hand_scores() {
        // First-card discarders churn without progress; the cap must end it.
        let mut a = stock_drawer();
        let mut b = stock_drawer();
        let record = play_game(&mut a, &mut b, 11).unwrap();
        if record.termination == Termination::TurnCapDraw {
            assert_eq!(record.turns, TURN_CAP);
            assert_eq!(record.w, [0.5, 0.5]);
            assert!(record.a[0] > 0 && record.a[1] > 0);
        } else {
            // A lucky declaration is possible; the record must then be decided.
            assert_eq!(record.w[0] + record.w[1], 1.0);
        }
    }

    #[test]
    fn initial_hand_scores_match_the_deal() {
        let layout = deal(21);
        let mut solver = MeldSolver::new(layout.wcj);
        let expect = [
            solver.min_score(&layout.hands[0]).unwrap(),
            solver.min_score(&layout.hands[1]).unwrap(),
        ];
        let mut a = stock_drawer();
        let mut b = stock_drawer();
        let record = play_game(&mut a, &mut b, 21).unwrap();
        assert_eq!(record.h, expect);
    }

    #[test]
    fn legal_actions_follow_the_phase() {
        let layout = deal(2);
        let mut state = GameState {
            hands: layout.hands,
            stock: layout.stock,
            discard_pile: vec![layout.open],
            exposed: layout.exposed,
            wcj: layout.wcj,
            turn: 0,
            turn_count: 0,
        };
        match legal_actions(&state) {
            LegalActions::Draw(sources) => {
                assert_eq!(sources, vec![DrawSource::Stock, DrawSource::DiscardTop]);
            }
            other => panic!("expected draw options, got {other:?}"),
        }
        state.stock.clear();
        match legal_actions(&state) {
            LegalActions::Draw(sources) => {
                assert_eq!(sources, vec![DrawSource::DiscardTop]);
            }
            other => panic!("expected draw options, got {other:?}"),
        }
        let top = *state.discard_pile.last().unwrap();
        state.hands[0].add(top);
        match legal_actions(&state) {
            LegalActions::Discard(cards) => assert_eq!(cards.len(), HAND_SIZE + 1),
            other => panic!("expected discard options, got {other:?}"),
        }
    }

    #[test]
    fn event_log_narrates_every_turn() {
        let mut a = stock_drawer();
        let mut b = stock_drawer();
        let (record, log) = play_game_logged(&mut a, &mut b, 9).unwrap();
        // One deal line, two lines per turn, one end line, plus any
        // reshuffle and declare lines.
        let turn_lines = log
            .iter()
            .filter(|l| l.contains(" draw ") || l.contains(" take "))
            .count();
        assert_eq!(turn_lines as u32, record.turns);
        assert!(log.first().unwrap().starts_with("deal seed 9"));
        assert!(log.last().unwrap().starts_with("end "));
    }
}
