use super::ordered::{ordered_check, OrderedReport};
use super::pubr::{theorem1_with, Theorem1Verdict};
use crate::concavify::Engine;
use crate::error::{Error, Result};
use crate::model::{value_upper, Belief, GameSpec, StateMask};
use crate::rational::{serde_exact, Rational};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;

/// True when, on every cell with tied best responses, the sender is
/// indifferent among the tied actions.
pub fn no_relevant_ties(game: &GameSpec) -> Result<bool> {
    no_ties_with(&Engine::new(game)?)
}

fn no_ties_with(engine: &Engine<'_>) -> Result<bool> {
    let game = engine.game();
    let cells = engine.cells(StateMask::full(game.num_states()))?;
    Ok(cells.iter().filter(|c| c.tie_set.len() >= 2).all(|c| {
        c.vertices.iter().all(|x| {
            let mut payoffs = c.tie_set.iter().map(|a| game.sender_payoff(a, x));
            let first = payoffs.next().expect("nonempty");
            payoffs.all(|p| p == first)
        })
    }))
}

/// True when the sender's payoff is unique at every prior: `ŵ ≥ v` at every
/// cell vertex of the simplex.
pub fn global_uniqueness(game: &GameSpec) -> Result<bool> {
    Ok(global_counterexample(&Engine::new(game)?)?.is_none())
}

fn global_counterexample(engine: &Engine<'_>) -> Result<Option<Belief>> {
    let game = engine.game();
    let points: BTreeSet<Belief> = engine
        .cells(StateMask::full(game.num_states()))?
        .iter()
        .flat_map(|c| c.vertices.iter().cloned())
        .collect();
    let points: Vec<Belief> = points.into_iter().collect();
    let checks = points
        .par_iter()
        .map(|x| Ok(engine.cav_lower_value(x)? >= value_upper(game, x)))
        .collect::<Result<Vec<bool>>>()?;
    Ok(points.into_iter().zip(checks).find(|(_, ok)| !ok).map(|(x, _)| x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Unique,
    NonUnique,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WinningTest {
    None,
    NoTies,
    PubrTheorem,
    Global,
    Ordered,
    IntervalWidthZero,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalSummary {
    #[serde(with = "serde_exact")]
    pub lo: Rational,
    #[serde(with = "serde_exact")]
    pub hi: Rational,
    #[serde(with = "serde_exact")]
    pub width: Rational,
    pub lo_attained: bool,
}

/// What each test found. Tests after the first success are skipped and left empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub prior: Belief,
    pub interval: IntervalSummary,
    pub no_relevant_ties: bool,
    pub theorem1: Option<Theorem1Verdict>,
    pub ordered: Option<OrderedReport>,
    pub global: Option<bool>,
    /// A belief where a sufficient condition fails, when one was found.
    pub failing_belief: Option<Belief>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniquenessVerdict {
    pub verdict: Verdict,
    pub winning_test: WinningTest,
    pub evidence: Evidence,
}

/// Runs the sufficient conditions cheapest first, stopping at the first
/// success, then computes the exact payoff interval and cross-checks.
pub fn analyze(game: &GameSpec, prior: &Belief) -> Result<UniquenessVerdict> {
    game.check_belief("prior", prior)?;
    let engine = Engine::new(game)?;
    let mut winner = WinningTest::None;
    let mut failing_belief = None;

    let no_ties = no_ties_with(&engine)?;
    if no_ties {
        winner = WinningTest::NoTies;
    }
    let theorem1 = if winner == WinningTest::None {
        let t1 = theorem1_with(&engine, prior)?;
        if t1.applies {
            winner = WinningTest::PubrTheorem;
        }
        failing_belief = t1.failing.first().cloned();
        Some(t1)
    } else {
        None
    };
    let ordered = if winner == WinningTest::None {
        let report = ordered_check(game, prior)?;
        if report.theorem2_applies {
            winner = WinningTest::Ordered;
        }
        Some(report)
    } else {
        None
    };
    let global = if winner == WinningTest::None {
        let counter = global_counterexample(&engine)?;
        if counter.is_none() {
            winner = WinningTest::Global;
        }
        if failing_belief.is_none() {
            failing_belief = counter.clone();
        }
        Some(counter.is_none())
    } else {
        None
    };

    let iv = engine.equilibrium_interval(prior)?;
    let width = iv.width();
    if winner != WinningTest::None && !iv.is_degenerate() {
        return Err(Error::Internal(format!(
            "test {winner:?} reports uniqueness but the payoff interval [{}, {}] has positive width",
            iv.lo, iv.hi
        )));
    }
    let verdict = if iv.is_degenerate() {
        if winner == WinningTest::None {
            winner = WinningTest::IntervalWidthZero;
        }
        Verdict::Unique
    } else {
        Verdict::NonUnique
    };
    Ok(UniquenessVerdict {
        verdict,
        winning_test: winner,
        evidence: Evidence {
            prior: prior.clone(),
            interval: IntervalSummary {
                lo: iv.lo.clone(),
                hi: iv.hi.clone(),
                width,
                lo_attained: iv.lo_attained,
            },
            no_relevant_ties: no_ties,
            theorem1,
            ordered,
            global,
            failing_belief,
        },
    })
}
