//! The `persuade` command line.

use crate::concavify::{Engine, EquilibriumWitness, InformationPolicy, PayoffInterval};
use crate::credibility::{default_chi_grid, default_epsilon, robustness_with, CredibilityReport};
use crate::diagnostics::{
    analyze, genericity_check, global_uniqueness, no_relevant_ties, ordered_check, potentially_unique_actions,
    pubr_at, GenericityReport, OrderedReport, Theorem1Verdict, UniquenessVerdict,
};
use crate::error::{Error, Result};
use crate::games;
use crate::geometry::Cell;
use crate::model::{load_game, Belief, GameSpec, StateMask};
use crate::oracle::{brute_force_interval, ApproxInterval};
use crate::rational::{display, format_rational, parse_rational, serde_exact, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "persuade", version, about = "Equilibrium payoffs of finite Bayesian persuasion games")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Args, Debug)]
struct GameArgs {
    /// Game file, or the name of a bundled game (judge, footnote, quadratic_loss).
    game: String,
    /// Prior override: comma-separated probabilities, or for two states the
    /// probability of the second state.
    #[arg(long, allow_hyphen_values = true)]
    prior: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact equilibrium payoff interval with witness policies.
    Interval(GameArgs),
    /// Uniqueness verdict from the sufficient-condition battery.
    Analyze(GameArgs),
    /// Run a single diagnostic.
    Check {
        #[arg(value_enum)]
        test: CheckKind,
        #[command(flatten)]
        game: GameArgs,
        /// Belief for `pubr` (default: the prior).
        #[arg(long)]
        belief: Option<String>,
    },
    /// An equilibrium reaching a target sender payoff.
    Witness {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
    },
    /// Limited-commitment lower bounds.
    Credibility {
        #[command(flatten)]
        game: GameArgs,
        /// Comma-separated credibility levels.
        #[arg(long)]
        chi: Option<String>,
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Value functions along an edge of the simplex, as CSV.
    Figure {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, default_value_t = 401)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        /// Edge `i,j` of the simplex (required with more than two states).
        #[arg(long)]
        edge: Option<String>,
    },
    /// Grid approximation of the payoff interval.
    Oracle {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, default_value_t = 200)]
        n: usize,
    },
    /// Cells of the best-response arrangement.
    Cells(GameArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Pubr,
    Generic,
    Ordered,
    Global,
    Ties,
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status: 0 on success, 2 on bad input, 1 on an internal failure.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.jobs {
        Some(0) => Err(Error::invalid("jobs", "must be positive")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::invalid("jobs", e.to_string()))
            .and_then(|pool| pool.install(|| execute(&cli))),
        None => execute(&cli),
    };
    match result.and_then(|text| out.write_all(text.as_bytes()).map_err(Error::from)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_validation() || matches!(e, Error::Io(_)) {
                2
            } else {
                1
            }
        }
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn load(args: &GameArgs) -> Result<GameSpec> {
    let path = Path::new(&args.game);
    let game = if path.exists() {
        load_game(&std::fs::read_to_string(path)?)?
    } else {
        let name = args.game.strip_suffix(".json").unwrap_or(&args.game);
        let name = Path::new(name).file_name().and_then(|s| s.to_str()).unwrap_or(name);
        match games::by_name(name) {
            Some(g) => g,
            None => {
                return Err(Error::Io(std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    format!("{}: no such file or bundled game", args.game),
                )))
            }
        }
    };
    match &args.prior {
        Some(text) => {
            let prior = parse_prior(text, game.num_states())?;
            game.with_prior(prior)
        }
        None => Ok(game),
    }
}

fn parse_number(field: &str, text: &str) -> Result<Rational> {
    parse_rational(text.trim()).map_err(|source| Error::Numeral {
        field: field.to_string(),
        source,
    })
}

fn parse_list(field: &str, text: &str) -> Result<Vec<Rational>> {
    text.split(',')
        .enumerate()
        .map(|(i, s)| parse_number(&format!("{field}[{i}]"), s))
        .collect()
}

fn parse_prior(text: &str, states: usize) -> Result<Belief> {
    parse_belief("prior", text, states)
}

fn parse_belief(field: &str, text: &str, states: usize) -> Result<Belief> {
    let values = parse_list(field, text)?;
    let probs = if values.len() == 1 && states == 2 {
        let p = values[0].clone();
        vec![Rational::from_integer(1.into()) - &p, p]
    } else if values.len() == states {
        values
    } else {
        return Err(Error::dimension(field, states, values.len()));
    };
    Belief::new(probs).map_err(|e| match e {
        Error::NotProbability { reason, .. } => Error::NotProbability {
            field: field.to_string(),
            reason,
        },
        other => other,
    })
}

fn parse_edge(text: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || Error::invalid("edge", format!("expected two state indices `i,j`, got {text:?}"));
    match parts.as_slice() {
        [i, j] => Ok((i.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn q(x: &Rational) -> String {
    format!("{} (~{})", format_rational(x), display(x))
}

fn belief(b: &Belief) -> String {
    let items: Vec<String> = b.probs().iter().map(format_rational).collect();
    format!("({})", items.join(", "))
}

fn policy_lines(s: &mut String, label: &str, p: &InformationPolicy) {
    let _ = writeln!(s, "{label}:");
    for (b, w) in p.support() {
        let _ = writeln!(s, "  {} with weight {}", belief(b), q(w));
    }
}

#[derive(Serialize)]
struct CheckReport<'a, T: Serialize> {
    check: &'a str,
    result: T,
}

#[derive(Serialize)]
struct PubrReport {
    belief: Belief,
    pubr: bool,
    strong_pubr: bool,
    potentially_unique: crate::model::ActionSet,
    theorem1: Theorem1Verdict,
}

#[derive(Serialize)]
struct WitnessReport<'a> {
    interval: (Repr<'a>, Repr<'a>),
    witness: &'a EquilibriumWitness,
}

#[derive(Serialize)]
struct Repr<'a>(#[serde(with = "serde_exact")] &'a Rational);

#[derive(Serialize)]
struct FigureReport<'a> {
    path: &'a Path,
    edge: (usize, usize),
    rows: usize,
}

#[derive(Serialize)]
struct OracleReport<'a> {
    approx: &'a ApproxInterval,
    #[serde(with = "serde_exact")]
    exact_lo: Rational,
    #[serde(with = "serde_exact")]
    exact_hi: Rational,
}

fn execute(cli: &Cli) -> Result<String> {
    let human = cli.format == Format::Human;
    match &cli.command {
        Command::Interval(args) => {
            let game = load(args)?;
            let iv = Engine::new(&game)?.equilibrium_interval(game.prior())?;
            if human {
                Ok(interval_text(&game, &iv))
            } else {
                json(&iv)
            }
        }
        Command::Analyze(args) => {
            let game = load(args)?;
            let v = analyze(&game, game.prior())?;
            if human {
                Ok(analyze_text(&v))
            } else {
                json(&v)
            }
        }
        Command::Check { test, game, belief: at } => {
            let game = load(game)?;
            check(&game, *test, at.as_deref(), human)
        }
        Command::Witness { game, target } => {
            let game = load(game)?;
            let s = parse_number("target", target)?;
            let engine = Engine::new(&game)?;
            let iv = engine.equilibrium_interval(game.prior())?;
            let w = engine.equilibrium_witness(game.prior(), &s)?;
            if human {
                let mut t = String::new();
                let _ = writeln!(t, "target payoff: {}", q(&w.target));
                let _ = writeln!(t, "interval: [{}, {}]", q(&iv.lo), q(&iv.hi));
                let _ = writeln!(t, "lambda: {}", q(&w.lambda));
                let _ = writeln!(t, "zeta: {}", q(&w.zeta));
                let _ = writeln!(t, "adversarial payoff: {}", q(&w.adversarial_payoff));
                let _ = writeln!(t, "favorable payoff: {}", q(&w.favorable_payoff));
                let _ = writeln!(t, "realized payoff: {}", q(&w.realized_payoff));
                policy_lines(&mut t, "policy", &w.policy);
                Ok(t)
            } else {
                json(&WitnessReport {
                    interval: (Repr(&iv.lo), Repr(&iv.hi)),
                    witness: &w,
                })
            }
        }
        Command::Credibility { game, chi, epsilon } => {
            let game = load(game)?;
            let grid = match chi {
                Some(text) => parse_list("chi", text)?,
                None => default_chi_grid(),
            };
            let eps = match epsilon {
                Some(text) => parse_number("epsilon", text)?,
                None => default_epsilon(),
            };
            let r = robustness_with(&game, game.prior(), grid, eps)?;
            if human {
                Ok(credibility_text(&r))
            } else {
                json(&r)
            }
        }
        Command::Figure { game, n, out, edge } => {
            let game = load(game)?;
            let edge = edge.as_deref().map(parse_edge).transpose()?;
            let fig = crate::concavify::emit_figure(&game, *n, edge, out)?;
            if human {
                Ok(format!(
                    "wrote {} rows along edge ({}, {}) to {}\n",
                    fig.rows.len(),
                    fig.edge.0,
                    fig.edge.1,
                    out.display()
                ))
            } else {
                json(&FigureReport {
                    path: out,
                    edge: fig.edge,
                    rows: fig.rows.len(),
                })
            }
        }
        Command::Oracle { game, n } => {
            let game = load(game)?;
            let approx = brute_force_interval(&game, game.prior(), *n)?;
            let iv = Engine::new(&game)?.equilibrium_interval(game.prior())?;
            if human {
                let mut t = String::new();
                let _ = writeln!(t, "grid resolution: {}", approx.n);
                let _ = writeln!(t, "grid lower: {}", q(&approx.lo));
                let _ = writeln!(t, "grid upper: {}", q(&approx.hi));
                let _ = writeln!(t, "tolerance: {}", q(&approx.tolerance));
                let _ = writeln!(t, "exact interval: [{}, {}]", q(&iv.lo), q(&iv.hi));
                Ok(t)
            } else {
                json(&OracleReport {
                    approx: &approx,
                    exact_lo: iv.lo,
                    exact_hi: iv.hi,
                })
            }
        }
        Command::Cells(args) => {
            let game = load(args)?;
            let engine = Engine::new(&game)?;
            let cells = engine.cells(StateMask::full(game.num_states()))?;
            if human {
                Ok(cells_text(&game, cells))
            } else {
                json(&cells)
            }
        }
    }
}

fn check(game: &GameSpec, test: CheckKind, at: Option<&str>, human: bool) -> Result<String> {
    match test {
        CheckKind::Pubr => {
            let mu = match at {
                Some(text) => parse_belief("belief", text, game.num_states())?,
                None => game.prior().clone(),
            };
            let report = PubrReport {
                pubr: pubr_at(game, &mu, false)?,
                strong_pubr: pubr_at(game, &mu, true)?,
                potentially_unique: potentially_unique_actions(game, game.prior().support())?,
                theorem1: crate::diagnostics::theorem1_verdict(game, game.prior())?,
                belief: mu,
            };
            if !human {
                return json(&CheckReport {
                    check: "pubr",
                    result: report,
                });
            }
            let mut t = String::new();
            let names: Vec<&str> = report.potentially_unique.iter().map(|a| game.actions()[a].label.as_str()).collect();
            let _ = writeln!(t, "potentially unique actions: {{{}}}", names.join(", "));
            let _ = writeln!(t, "PUBR at {}: {}", belief(&report.belief), report.pubr);
            let _ = writeln!(t, "strong PUBR at {}: {}", belief(&report.belief), report.strong_pubr);
            let _ = writeln!(t, "PUBR on an optimal policy's support: {}", report.theorem1.applies);
            for b in &report.theorem1.failing {
                let _ = writeln!(t, "  fails at {}", belief(b));
            }
            Ok(t)
        }
        CheckKind::Generic => {
            let r = genericity_check(game);
            if human {
                Ok(generic_text(game, &r))
            } else {
                json(&CheckReport {
                    check: "generic",
                    result: r,
                })
            }
        }
        CheckKind::Ordered => {
            let r = ordered_check(game, game.prior())?;
            if human {
                Ok(ordered_text(&r))
            } else {
                json(&CheckReport {
                    check: "ordered",
                    result: r,
                })
            }
        }
        CheckKind::Global => {
            let r = global_uniqueness(game)?;
            if human {
                Ok(format!("unique payoff at every prior: {r}\n"))
            } else {
                json(&CheckReport { check: "global", result: r })
            }
        }
        CheckKind::Ties => {
            let r = no_relevant_ties(game)?;
            if human {
                Ok(format!("no relevant ties: {r}\n"))
            } else {
                json(&CheckReport { check: "ties", result: r })
            }
        }
    }
}

fn interval_text(game: &GameSpec, iv: &PayoffInterval) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "prior: {}", belief(game.prior()));
    let _ = writeln!(t, "lo = {}", q(&iv.lo));
    let _ = writeln!(t, "hi = {}", q(&iv.hi));
    let _ = writeln!(t, "width = {}", q(&iv.width()));
    if iv.lo_attained {
        let _ = writeln!(t, "lower end attained");
    } else {
        let _ = writeln!(
            t,
            "lower end not attained; witness is within {} (pull {})",
            q(&iv.lo_epsilon),
            iv.lo_delta.as_ref().map(q).unwrap_or_default()
        );
    }
    policy_lines(&mut t, "lower witness", &iv.lo_witness);
    policy_lines(&mut t, "upper witness", &iv.hi_witness);
    t
}

fn analyze_text(v: &UniquenessVerdict) -> String {
    let mut t = String::new();
    let e = &v.evidence;
    let _ = writeln!(t, "verdict: {}", serde_name(&v.verdict));
    let _ = writeln!(t, "winning test: {}", serde_name(&v.winning_test));
    let _ = writeln!(t, "interval: [{}, {}]", q(&e.interval.lo), q(&e.interval.hi));
    let _ = writeln!(t, "width: {}", q(&e.interval.width));
    let _ = writeln!(t, "no relevant ties: {}", e.no_relevant_ties);
    if let Some(t1) = &e.theorem1 {
        let d: Vec<String> = t1.d.iter().map(belief).collect();
        let _ = writeln!(t, "PUBR on optimal support {{{}}}: {}", d.join(", "), t1.applies);
    }
    if let Some(o) = &e.ordered {
        let _ = writeln!(t, "ordered-model theorem applies: {}", o.theorem2_applies);
    }
    if let Some(g) = e.global {
        let _ = writeln!(t, "global uniqueness: {g}");
    }
    if let Some(b) = &e.failing_belief {
        let _ = writeln!(t, "failing belief: {}", belief(b));
    }
    t
}

fn generic_text(game: &GameSpec, r: &GenericityReport) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "in U_R: {}", r.in_u_r);
    for v in &r.phi_values {
        let states: Vec<&str> = v.index.states.iter().map(|s| game.states()[s].label.as_str()).collect();
        let _ = writeln!(
            t,
            "phi({}, {{{}}}) = {}{}",
            game.actions()[v.index.action].label,
            states.join(", "),
            q(&v.phi),
            if r.failing_indices.contains(&v.index) { "  <- zero" } else { "" }
        );
    }
    t
}

fn ordered_text(r: &OrderedReport) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "ordered: {}", serde_name(&r.is_ordered));
    let _ = writeln!(t, "strictly increasing differences: {}", r.increasing_differences);
    let _ = writeln!(t, "quasi condition: {}", serde_json::to_string(&r.quasi_condition).unwrap_or_default());
    let _ = writeln!(t, "boundary condition: {}", r.boundary_condition);
    let _ = writeln!(t, "theorem applies: {}", r.theorem2_applies);
    if let Some(reason) = &r.reason {
        let _ = writeln!(t, "note: {reason}");
    }
    t
}

fn credibility_text(r: &CredibilityReport) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "full-credibility interval: [{}, {}]", q(&r.chi1_interval.lo), q(&r.chi1_interval.hi));
    let _ = writeln!(t, "strongly robust: {}", r.strongly_robust);
    let _ = writeln!(t, "min w: {}", q(&r.min_w));
    let _ = writeln!(t, "epsilon: {}", q(&r.epsilon));
    for (chi, b) in r.chi_grid.iter().zip(&r.lower_bounds) {
        let _ = writeln!(t, "chi = {}: payoff >= {}", format_rational(chi), q(b));
    }
    let _ = writeln!(t, "bound as chi -> 1: {}", q(&r.limit_bound));
    t
}

fn cells_text(game: &GameSpec, cells: &[Cell]) -> String {
    let mut t = String::new();
    for c in cells {
        let names: Vec<&str> = c.tie_set.iter().map(|a| game.actions()[a].label.as_str()).collect();
        let verts: Vec<String> = c.vertices.iter().map(belief).collect();
        let _ = writeln!(t, "{{{}}}: {}", names.join(", "), verts.join(" "));
    }
    t
}

fn serde_name<T: Serialize>(value: &T) -> String {
    serde_json::to_value(value)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}
