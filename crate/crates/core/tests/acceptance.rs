//! End-to-end acceptance criteria. Each prints one PASS/FAIL line; the test
//! fails if any criterion fails.

use num_traits::{One, Signed, Zero};
use persuasion::concavify::{
    cav_upper_obedience, equilibrium_witness, evaluate_policy, figure, Engine, InformationPolicy, Mixing, TieRule,
};
use persuasion::credibility::{credibility_lower_bound, robustness_verdict};
use persuasion::diagnostics::{analyze, genericity_check, PhiIndex, Verdict, WinningTest};
use persuasion::games;
use persuasion::geometry::reduce_support;
use persuasion::linalg::rank;
use persuasion::model::{Belief, GameSpec, StateMask};
use persuasion::oracle::{grid_cav, lipschitz_constant, random_game, EnvelopeKind};
use persuasion::rational::{int, ratio};
use persuasion::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Time limits. Debug builds of the exact arithmetic are several times
/// slower than release builds, so limits scale up without optimizations.
fn budget(seconds: u64) -> Duration {
    let factor = if cfg!(debug_assertions) { 4 } else { 1 };
    Duration::from_secs(seconds * factor)
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    f()?;
    let took = start.elapsed();
    ensure!(took <= limit, "took {took:?}, limit {limit:?}");
    Ok(())
}

fn judge_p_star() -> InformationPolicy {
    InformationPolicy::new(vec![
        (Belief::binary(int(0)).unwrap(), ratio(1, 2)),
        (Belief::binary(ratio(1, 2)).unwrap(), ratio(1, 2)),
    ])
    .unwrap()
}

/// The fifty random games shared by the cross-method and oracle criteria.
fn random_batch() -> Vec<GameSpec> {
    (0..50u64)
        .map(|i| random_game(1000 + i, 2 + (i % 2) as usize, 2 + (i / 2 % 3) as usize, 1000).unwrap())
        .collect()
}

fn judge_exactness() -> Outcome {
    timed(budget(1), || {
        let game = games::judge();
        let prior = Belief::binary(ratio(1, 4)).unwrap();
        let iv = Engine::new(&game).unwrap().equilibrium_interval(&prior).unwrap();
        ensure!(iv.lo == int(0) && iv.hi == ratio(1, 2), "interval [{}, {}]", iv.lo, iv.hi);
        let p = judge_p_star();
        let fav = evaluate_policy(&game, &p, &TieRule::Favorable).unwrap();
        let adv = evaluate_policy(&game, &p, &TieRule::Adversarial).unwrap();
        ensure!(fav == ratio(1, 2), "favorable {fav}");
        ensure!(adv == ratio(-1, 2), "adversarial {adv}");
        Ok(())
    })
}

fn figure_reproduction() -> Outcome {
    timed(budget(5), || {
        let fig = figure(&games::judge(), 401, None).unwrap();
        let half = ratio(1, 2);
        let mut samples = 0;
        for k in 0..401 {
            let mu = ratio(k, 400);
            let row = fig.row_at(&mu).ok_or(format!("missing row at {mu}"))?;
            let cavv = if mu <= half { &mu * int(2) } else { int(1) };
            let cavw = if mu <= half { int(0) } else { int(1) - &mu * int(2) };
            ensure!(row.cavv == cavv, "cav v at {mu}: {} != {cavv}", row.cavv);
            ensure!(row.cavw == cavw, "cav w at {mu}: {} != {cavw}", row.cavw);
            samples += 1;
        }
        ensure!(samples == 401, "{samples} samples");
        Ok(())
    })
}

fn cross_method() -> Outcome {
    timed(budget(60), || {
        for (i, game) in random_batch().iter().enumerate() {
            let (a, _) = Engine::new(game).unwrap().cav_upper(game.prior()).unwrap();
            let b = cav_upper_obedience(game, game.prior()).unwrap();
            ensure!(a == b, "game {i}: generator {a} vs obedience {b}");
        }
        Ok(())
    })
}

fn oracle_sandwich() -> Outcome {
    let n = 200;
    let mut strict = 0;
    for (i, game) in random_batch().iter().enumerate() {
        let engine = Engine::new(game).unwrap();
        let tol = lipschitz_constant(game) / int(n as i64);
        let exact = [
            (EnvelopeKind::Upper, engine.cav_upper_value(game.prior()).unwrap()),
            (EnvelopeKind::Lower, engine.cav_lower_value(game.prior()).unwrap()),
        ];
        for (kind, value) in exact {
            let coarse = &value - grid_cav(game, game.prior(), n, kind).unwrap();
            let fine = &value - grid_cav(game, game.prior(), 2 * n, kind).unwrap();
            ensure!(!coarse.is_negative() && coarse <= tol, "game {i} {kind:?}: gap {coarse} vs C/n = {tol}");
            ensure!(fine <= coarse, "game {i} {kind:?}: gap grew from {coarse} to {fine}");
            if fine < coarse {
                strict += 1;
            }
        }
    }
    println!("    oracle gaps shrank strictly on {strict} of 100 envelope instances and never grew");
    Ok(())
}

fn footnote_counterexample() -> Outcome {
    let game = games::footnote();
    let iv = Engine::new(&game).unwrap().equilibrium_interval(game.prior()).unwrap();
    ensure!(iv.lo == int(-1) && iv.hi == ratio(-1, 2), "interval [{}, {}]", iv.lo, iv.hi);
    let r = genericity_check(&game);
    ensure!(!r.in_u_r, "reported generic");
    let idx = PhiIndex {
        action: 0,
        states: StateMask::single(0),
    };
    ensure!(r.failing_indices.contains(&idx), "failing indices {:?}", r.failing_indices);
    Ok(())
}

fn genericity_statistics() -> Outcome {
    let mut generic = 0;
    for seed in 0..100 {
        let game = random_game(seed, 3, 3, 1_000_000).unwrap();
        if !genericity_check(&game).in_u_r {
            continue;
        }
        generic += 1;
        let v = analyze(&game, game.prior()).unwrap();
        ensure!(v.verdict == Verdict::Unique, "seed {seed}: verdict {:?}", v.verdict);
        ensure!(v.evidence.interval.width.is_zero(), "seed {seed}: width {}", v.evidence.interval.width);
    }
    ensure!(generic >= 99, "only {generic} of 100 draws generic");
    Ok(())
}

fn example_one() -> Outcome {
    let game = games::quadratic_loss();
    let v = analyze(&game, game.prior()).unwrap();
    ensure!(v.verdict == Verdict::Unique, "verdict {:?}", v.verdict);
    ensure!(v.winning_test == WinningTest::PubrTheorem, "winning test {:?}", v.winning_test);
    ensure!(v.evidence.interval.width.is_zero(), "width {}", v.evidence.interval.width);
    Ok(())
}

fn witness() -> Outcome {
    let game = games::judge();
    let prior = Belief::binary(ratio(1, 4)).unwrap();
    for s in [int(0), ratio(1, 8), ratio(1, 4), ratio(3, 8), ratio(1, 2)] {
        let w = equilibrium_witness(&game, &prior, &s).unwrap();
        ensure!(w.policy.barycenter() == &prior, "s = {s}: barycenter moved");
        let got = evaluate_policy(&game, &w.policy, &TieRule::Mixed(Mixing::Scalar(w.zeta.clone()))).unwrap();
        ensure!(got == s, "s = {s}: policy pays {got}");
    }
    Ok(())
}

fn random_policy(rng: &mut ChaCha8Rng) -> (InformationPolicy, BTreeMap<Belief, Rational>) {
    let mut support = Vec::new();
    let mut values = BTreeMap::new();
    while support.len() < 10 {
        let k: Vec<i64> = (0..3).map(|_| rng.gen_range(0..=12)).collect();
        let total: i64 = k.iter().sum();
        if total == 0 {
            continue;
        }
        let b = Belief::new(k.iter().map(|&x| ratio(x, total)).collect()).unwrap();
        if values.contains_key(&b) {
            continue;
        }
        values.insert(b.clone(), ratio(rng.gen_range(-50..=50), 7));
        support.push((b, int(rng.gen_range(1..=9))));
    }
    let total: Rational = support.iter().map(|(_, w)| w.clone()).sum();
    let support = support.into_iter().map(|(b, w)| (b, w / &total)).collect();
    (InformationPolicy::new(support).unwrap(), values)
}

fn affinely_independent(points: &[&Belief]) -> bool {
    let rows: Vec<Vec<Rational>> = points
        .iter()
        .map(|b| b.probs().iter().cloned().chain(std::iter::once(Rational::one())).collect())
        .collect();
    rank(&rows) == points.len()
}

/// Best objective over subsets of at most three affinely independent support
/// points whose convex hull contains the barycenter.
fn exhaustive_best(policy: &InformationPolicy, values: &BTreeMap<Belief, Rational>) -> Option<Rational> {
    let pts: Vec<&Belief> = policy.beliefs().collect();
    let target = policy.barycenter().probs();
    let mut best: Option<Rational> = None;
    let mut consider = |subset: &[usize]| {
        let chosen: Vec<&Belief> = subset.iter().map(|&i| pts[i]).collect();
        if !affinely_independent(&chosen) {
            return;
        }
        // barycentric weights from the first two coordinates and the unit sum
        let rows: Vec<Vec<Rational>> = (0..3)
            .map(|t| {
                if t == 2 {
                    vec![Rational::one(); chosen.len()]
                } else {
                    chosen.iter().map(|b| b.probs()[t].clone()).collect()
                }
            })
            .collect();
        let rhs = vec![target[0].clone(), target[1].clone(), Rational::one()];
        let Some(lambda) = persuasion::linalg::solve_unique(&rows, &rhs) else {
            return;
        };
        if lambda.iter().any(|l| l.is_negative()) {
            return;
        }
        let obj: Rational = lambda.iter().zip(&chosen).map(|(l, b)| l * &values[*b]).sum();
        if best.as_ref().map_or(true, |b| &obj > b) {
            best = Some(obj);
        }
    };
    let n = pts.len();
    for i in 0..n {
        consider(&[i]);
        for j in i + 1..n {
            consider(&[i, j]);
            for k in j + 1..n {
                consider(&[i, j, k]);
            }
        }
    }
    best
}

fn support_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for trial in 0..100 {
        let (policy, values) = random_policy(&mut rng);
        let vals: Vec<Rational> = policy.beliefs().map(|b| values[b].clone()).collect();
        let before = policy.expectation(|b| values[b].clone());
        let reduced = reduce_support(&policy, &vals).unwrap();
        let after = reduced.expectation(|b| values[b].clone());
        ensure!(reduced.len() <= 3, "trial {trial}: {} points", reduced.len());
        ensure!(
            affinely_independent(&reduced.beliefs().collect::<Vec<_>>()),
            "trial {trial}: dependent support"
        );
        ensure!(reduced.barycenter() == policy.barycenter(), "trial {trial}: barycenter moved");
        ensure!(after >= before, "trial {trial}: objective fell from {before} to {after}");
        let best = exhaustive_best(&policy, &values).ok_or(format!("trial {trial}: no feasible subset"))?;
        ensure!(best >= after, "trial {trial}: reduced {after} beats exhaustive {best}");
        ensure!(best >= before, "trial {trial}: exhaustive {best} below original {before}");
    }
    Ok(())
}

fn credibility() -> Outcome {
    let game = games::judge();
    let prior = Belief::binary(ratio(1, 4)).unwrap();
    let eps = ratio(1, 1000);
    let grid = [int(0), ratio(1, 4), ratio(1, 2), ratio(3, 4), ratio(99, 100), int(1)];
    let bounds: Vec<Rational> = grid
        .iter()
        .map(|chi| credibility_lower_bound(&game, &prior, chi, &eps).unwrap())
        .collect();
    ensure!(bounds.windows(2).all(|w| w[0] <= w[1]), "bounds {bounds:?}");
    let w_hat = Engine::new(&game).unwrap().cav_lower_value(&prior).unwrap();
    ensure!(bounds[5] == &w_hat - &eps, "bound at 1 is {}", bounds[5]);
    ensure!(bounds[4] == ratio(-1099, 100000), "bound at 99/100 is {}", bounds[4]);
    ensure!(!robustness_verdict(&game, &prior).unwrap().strongly_robust, "judge reported strongly robust");
    let q = games::quadratic_loss();
    ensure!(robustness_verdict(&q, q.prior()).unwrap().strongly_robust, "quadratic loss not strongly robust");
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("judge example exactness", judge_exactness),
        ("figure reproduction", figure_reproduction),
        ("cross-method agreement", cross_method),
        ("oracle sandwich", oracle_sandwich),
        ("footnote counterexample", footnote_counterexample),
        ("genericity statistics", genericity_statistics),
        ("quadratic-loss uniqueness", example_one),
        ("equilibrium witness", witness),
        ("support reduction", support_reduction),
        ("credibility bounds", credibility),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let took = start.elapsed();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({took:.2?})", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name} ({took:.2?}): {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
