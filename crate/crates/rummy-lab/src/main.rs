//! Command-line front end: simulate tournaments, sweep the hand-quality
//! weight, recompute statistics from saved records, replay single games,
//! and inspect hands.
//!
//! Exit codes: 0 success, 2 usage (malformed flags), 3 configuration or
//! input parsing, 4 runtime failure.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use rummy_lab::agents::{Agent, AgentConfig, StrategyId};
use rummy_lab::cards::{Card, Hand, Rank, WildcardRank};
use rummy_lab::config::Settings;
use rummy_lab::error::{Error, Result};
use rummy_lab::game::{play_game_logged, GameRecord};
use rummy_lab::harness::{build_schedule, replay_custom, replay_traditional, simulate_games};
use rummy_lab::melds::MeldSolver;
use rummy_lab::report;
use rummy_lab::tuning::tune;

#[derive(Parser)]
#[command(
    name = "rummy-lab",
    version,
    about = "Deterministic Indian Rummy tournaments with score-based ratings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a tournament and write records, trajectories, and summaries.
    Simulate(SimulateArgs),
    /// Sweep the hand-quality weight and report the best-predicting value.
    Tune(TuneArgs),
    /// Recompute rating tables from a saved records file.
    Stats(StatsArgs),
    /// Replay one game with full event narration.
    ReplayGame(ReplayGameArgs),
    /// Print the metrics and best arrangement of a 13-card hand.
    InspectHand(InspectHandArgs),
}

/// Settings sources, lowest to highest precedence: defaults, --config
/// file, repeated --set overrides, then the named flags.
#[derive(Args)]
struct SettingsArgs {
    /// Settings file of key = value lines.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override one settings key, e.g. --set k=-0.5 (repeatable).
    #[arg(long, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Master seed driving schedule, deals, and agents.
    #[arg(long)]
    seed: Option<u64>,
    /// Experiment size: desk (150 games per pair) or paper (4500).
    #[arg(long)]
    scale: Option<String>,
    /// Explicit games per directed pair, overriding the scale preset.
    #[arg(long)]
    games: Option<u32>,
    /// Worker threads for game simulation; 0 uses all cores.
    #[arg(long)]
    threads: Option<usize>,
    /// Score-based step size K (negative).
    #[arg(long, allow_hyphen_values = true)]
    k: Option<f64>,
    /// Rating-gap weight alpha (negative).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Hand-quality weight beta.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    /// Points of improvement that make the score agent take the open card.
    #[arg(long)]
    pickup_threshold: Option<u8>,
    /// Moving-average window for smoothed trajectories.
    #[arg(long)]
    window: Option<usize>,
    /// Leading fraction of each trajectory excluded from summaries.
    #[arg(long)]
    burn_in: Option<f64>,
}

impl SettingsArgs {
    fn load(&self) -> Result<Settings> {
        let mut settings = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    Error::Config(format!("reading {}: {e}", path.display()))
                })?;
                Settings::parse(&text)?
            }
            None => Settings::default(),
        };
        for pair in &self.set {
            let (key, value) = pair.split_once('=').ok_or_else(|| {
                Error::Config(format!("--set {pair:?}: expected KEY=VALUE"))
            })?;
            settings.apply(key.trim(), value.trim())?;
        }
        if let Some(seed) = self.seed {
            settings.master_seed = seed;
        }
        if let Some(scale) = &self.scale {
            settings.scale = scale.parse()?;
        }
        if let Some(games) = self.games {
            settings.games_per_pair = games;
        }
        if let Some(threads) = self.threads {
            settings.threads = threads;
        }
        if let Some(k) = self.k {
            settings.k = k;
        }
        if let Some(alpha) = self.alpha {
            settings.alpha = alpha;
        }
        if let Some(beta) = self.beta {
            settings.beta = beta;
        }
        if let Some(threshold) = self.pickup_threshold {
            settings.pickup_threshold = threshold;
        }
        if let Some(window) = self.window {
            settings.window = window;
        }
        if let Some(burn_in) = self.burn_in {
            settings.burn_in = burn_in;
        }
        settings.validate()?;
        Ok(settings)
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    settings: SettingsArgs,
    /// Output directory for CSV files.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct TuneArgs {
    #[command(flatten)]
    settings: SettingsArgs,
    /// Records file from a previous simulate run; omitting it simulates
    /// fresh records under the current settings first.
    #[arg(long, value_name = "PATH")]
    records: Option<PathBuf>,
    /// Output directory for the curve and best-weight files.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    settings: SettingsArgs,
    /// Records file to recompute ratings from.
    #[arg(long, value_name = "PATH")]
    records: PathBuf,
    /// Optional directory to also write summary and trajectory CSVs to.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReplayGameArgs {
    /// Seed of the game to replay, as found in records.csv.
    #[arg(long)]
    seed: u64,
    /// First seat's strategy.
    #[arg(long)]
    first: StrategyId,
    /// Second seat's strategy.
    #[arg(long)]
    second: StrategyId,
    /// Points of improvement that make the score agent take the open card.
    #[arg(long, default_value_t = 3)]
    pickup_threshold: u8,
}

#[derive(Args)]
struct InspectHandArgs {
    /// Thirteen space-separated card codes, e.g. "2H 3H 4H 7C ... JK".
    #[arg(long, value_name = "CODES")]
    cards: String,
    /// Wildcard rank (A, 2..10, J, Q, K) or "none" when a printed joker
    /// was exposed.
    #[arg(long, value_name = "RANK")]
    wcj: String,
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(Error::Io)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run_simulate(args: &SimulateArgs) -> Result<()> {
    let settings = args.settings.load()?;
    fs::create_dir_all(&args.out).map_err(Error::Io)?;
    print!("effective settings:\n{}", settings.render());

    let schedule = build_schedule(&settings.schedule_config())?;
    let started = std::time::Instant::now();
    let records = simulate_games(&schedule, settings.agent_config(), settings.threads)?;
    let strategies = settings.strategies.len() as u64;
    let per_strategy = 2 * records.len() as u64 / strategies;
    println!(
        "simulated {} games in {:.1}s ({} participations per strategy, {} total)",
        records.len(),
        started.elapsed().as_secs_f64(),
        per_strategy,
        2 * records.len(),
    );

    write_file(&args.out, "config.txt", &settings.render())?;
    write_file(&args.out, "records.csv", &report::render_records_csv(&records))?;

    if settings.systems.custom {
        let replay = replay_custom(&records, &settings.rating_params())?;
        if replay.skipped_draws > 0 {
            println!(
                "score-based system skipped {} drawn games (unrated)",
                replay.skipped_draws
            );
        }
        let rows = report::summary_rows(&replay, settings.burn_in)?;
        write_file(
            &args.out,
            "trajectory_custom.csv",
            &report::render_trajectories_csv(&replay, settings.window)?,
        )?;
        write_file(&args.out, "summary_custom.csv", &report::render_summary_csv(&rows))?;
        write_file(&args.out, "audit_custom.csv", &report::render_audit_csv(&replay))?;
        print!(
            "\n{}",
            report::render_summary_table("score-based rating summary", &rows)
        );
    }
    if settings.systems.traditional {
        let replay = replay_traditional(&records, settings.elo_k)?;
        let rows = report::summary_rows(&replay, settings.burn_in)?;
        write_file(
            &args.out,
            "trajectory_traditional.csv",
            &report::render_trajectories_csv(&replay, settings.window)?,
        )?;
        write_file(
            &args.out,
            "summary_traditional.csv",
            &report::render_summary_csv(&rows),
        )?;
        print!(
            "\n{}",
            report::render_summary_table("traditional Elo summary", &rows)
        );
    }
    Ok(())
}

fn run_tune(args: &TuneArgs) -> Result<()> {
    let settings = args.settings.load()?;
    fs::create_dir_all(&args.out).map_err(Error::Io)?;
    let records = match &args.records {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("reading {}: {e}", path.display())))?;
            report::parse_records_csv(&text)?
        }
        None => {
            println!("no records file given; simulating fresh records first");
            let schedule = build_schedule(&settings.schedule_config())?;
            simulate_games(&schedule, settings.agent_config(), settings.threads)?
        }
    };
    println!("sweeping {} weights over {} games", settings.beta_grid_points, records.len());
    let result = tune(&records, &settings.tune_config()?)?;
    write_file(&args.out, "f1_curve.csv", &report::render_f1_curve_csv(&result.curve))?;
    write_file(&args.out, "best_beta.txt", &report::render_best_beta(&result))?;
    print!("{}", report::render_best_beta(&result));
    Ok(())
}

fn run_stats(args: &StatsArgs) -> Result<()> {
    let settings = args.settings.load()?;
    let text = fs::read_to_string(&args.records)
        .map_err(|e| Error::Config(format!("reading {}: {e}", args.records.display())))?;
    let records = report::parse_records_csv(&text)?;
    println!("loaded {} games from {}", records.len(), args.records.display());
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).map_err(Error::Io)?;
    }
    if settings.systems.custom {
        let replay = replay_custom(&records, &settings.rating_params())?;
        if replay.skipped_draws > 0 {
            println!(
                "score-based system skipped {} drawn games (unrated)",
                replay.skipped_draws
            );
        }
        let rows = report::summary_rows(&replay, settings.burn_in)?;
        print!(
            "\n{}",
            report::render_summary_table("score-based rating summary", &rows)
        );
        if let Some(dir) = &args.out {
            write_file(dir, "summary_custom.csv", &report::render_summary_csv(&rows))?;
            write_file(
                dir,
                "trajectory_custom.csv",
                &report::render_trajectories_csv(&replay, settings.window)?,
            )?;
        }
    }
    if settings.systems.traditional {
        let replay = replay_traditional(&records, settings.elo_k)?;
        let rows = report::summary_rows(&replay, settings.burn_in)?;
        print!(
            "\n{}",
            report::render_summary_table("traditional Elo summary", &rows)
        );
        if let Some(dir) = &args.out {
            write_file(
                dir,
                "summary_traditional.csv",
                &report::render_summary_csv(&rows),
            )?;
            write_file(
                dir,
                "trajectory_traditional.csv",
                &report::render_trajectories_csv(&replay, settings.window)?,
            )?;
        }
    }
    Ok(())
}

fn describe_record(rec: &GameRecord) -> String {
    format!(
        "seats {} vs {}\ndealt-hand scores h1={} h2={}\nfinal scores a1={} a2={}\n\
         outcome w1={} w2={}\nturns {}\ntermination {}\nseed {}",
        rec.seats[0],
        rec.seats[1],
        rec.h[0],
        rec.h[1],
        rec.a[0],
        rec.a[1],
        rec.w[0],
        rec.w[1],
        rec.turns,
        rec.termination,
        rec.seed,
    )
}

fn run_replay_game(args: &ReplayGameArgs) -> Result<()> {
    let cfg = AgentConfig {
        pickup_threshold: args.pickup_threshold,
    };
    let mut one = Agent::for_seat(args.first, cfg, args.seed, 0);
    let mut two = Agent::for_seat(args.second, cfg, args.seed, 1);
    let (record, log) = play_game_logged(&mut one, &mut two, args.seed)?;
    for line in &log {
        println!("{line}");
    }
    println!("\n{}", describe_record(&record));
    Ok(())
}

fn parse_wcj(text: &str) -> Result<WildcardRank> {
    if text.eq_ignore_ascii_case("none") {
        return Ok(WildcardRank(None));
    }
    let rank: Rank = text.parse()?;
    Ok(WildcardRank(Some(rank)))
}

fn run_inspect_hand(args: &InspectHandArgs) -> Result<()> {
    let hand = Hand::parse_codes(&args.cards)?;
    let mut jokers = 0u8;
    let mut seen: Vec<Card> = Vec::new();
    for &card in hand.cards() {
        if card.is_joker() {
            jokers += 1;
        } else if seen.contains(&card) {
            return Err(Error::Parse(format!("duplicate card {card}")));
        } else {
            seen.push(card);
        }
    }
    if jokers > 2 {
        return Err(Error::Parse(format!(
            "{jokers} printed jokers exceed the deck's two"
        )));
    }
    let wcj = parse_wcj(&args.wcj)?;
    let mut solver = MeldSolver::new(wcj);
    let metrics = solver.metrics(&hand)?;
    let arrangement = solver.best_arrangement(&hand)?;

    println!("hand: {hand}");
    match wcj.0 {
        Some(rank) => println!("wildcard rank: {rank}"),
        None => println!("wildcard rank: none (printed joker exposed)"),
    }
    println!("min_score: {}", metrics.min_score);
    println!("min_dist: {}", metrics.min_dist);
    println!("declarable: {}", if metrics.declarable { "yes" } else { "no" });
    println!("best arrangement:");
    for meld in &arrangement.melds {
        let kind = match meld.kind {
            rummy_lab::melds::MeldKind::PureSequence => "pure sequence",
            rummy_lab::melds::MeldKind::ImpureSequence => "sequence",
            rummy_lab::melds::MeldKind::Set => "set",
        };
        let cards: Vec<String> = meld.cards.iter().map(Card::to_string).collect();
        println!("  {kind}: {}", cards.join(" "));
    }
    if arrangement.deadwood.is_empty() {
        println!("  deadwood: none");
    } else {
        let cards: Vec<String> = arrangement.deadwood.iter().map(Card::to_string).collect();
        println!("  deadwood: {} ({} points)", cards.join(" "), arrangement.score);
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Simulate(args) => run_simulate(args),
        Command::Tune(args) => run_tune(args),
        Command::Stats(args) => run_stats(args),
        Command::ReplayGame(args) => run_replay_game(args),
        Command::InspectHand(args) => run_inspect_hand(args),
    };
    if let Err(error) = outcome {
        eprintln!("error: {error}");
        let code = match error {
            Error::Config(_) | Error::Parse(_) => 3,
            _ => 4,
        };
        std::process::exit(code);
    }
}
