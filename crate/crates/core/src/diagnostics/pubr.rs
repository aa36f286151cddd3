use crate::concavify::Engine;
use crate::error::Result;
use crate::geometry::{check_mask, receiver_gap};
use crate::lp::{solve_lp, Bounds, LinearProgram, LpSolution, Relation};
use crate::model::{best_responses, ActionSet, Belief, GameSpec, StateMask};
use crate::rational::Rational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// `max_{μ ∈ Δ(mask)} min_{b ≠ a} (u_R(a,·) − u_R(b,·))·μ`, exactly.
pub(crate) fn phi(game: &GameSpec, a: usize, mask: StateMask) -> Rational {
    let states: Vec<usize> = mask.iter().collect();
    let m = states.len();
    let mut objective = vec![Rational::zero(); m + 1];
    objective[m] = Rational::one();
    let mut lp = LinearProgram::maximize(objective);
    let mut ones = vec![Rational::one(); m + 1];
    ones[m] = Rational::zero();
    lp.constrain(ones, Relation::Eq, Rational::one());
    for b in (0..game.num_actions()).filter(|&b| b != a) {
        let gap = receiver_gap(game, a, b);
        let mut row: Vec<Rational> = states.iter().map(|&t| gap[t].clone()).collect();
        row.push(-Rational::one());
        lp.constrain(row, Relation::Ge, Rational::zero());
    }
    lp.bounds[m] = Bounds::free();
    match solve_lp(&lp) {
        LpSolution::Optimal { value, .. } => value,
        other => unreachable!("the margin program is feasible and bounded: {other:?}"),
    }
}

/// Actions that are the receiver's unique best response at some belief
/// supported in `mask`.
pub fn potentially_unique_actions(game: &GameSpec, mask: StateMask) -> Result<ActionSet> {
    check_mask(game, mask)?;
    Ok(ActionSet::from_indices(
        (0..game.num_actions()).filter(|&a| phi(game, a, mask).is_positive()),
    ))
}

/// Whether the favorable tie-break payoff at `mu` is reached by a tied action
/// that is uniquely optimal somewhere in `Δ(mask)`.
pub(crate) fn pubr_with(game: &GameSpec, mu: &Belief, unique: ActionSet) -> bool {
    let ties = best_responses(game, mu);
    let best = ties.iter().map(|a| game.sender_payoff(a, mu)).max();
    let best_unique = ties.intersection(unique).iter().map(|a| game.sender_payoff(a, mu)).max();
    matches!((best, best_unique), (Some(x), Some(y)) if x == y)
}

/// PUBR property at `mu`. The plain variant draws potentially unique actions
/// from the support of the game's prior, the strong one from the support of `mu`.
pub fn pubr_at(game: &GameSpec, mu: &Belief, strong: bool) -> Result<bool> {
    game.check_belief("mu", mu)?;
    let mask = if strong { mu.support() } else { game.prior().support() };
    Ok(pubr_with(game, mu, potentially_unique_actions(game, mask)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theorem1Verdict {
    pub applies: bool,
    /// Support of an optimal policy: a persuasion-sufficient set of beliefs.
    pub d: Vec<Belief>,
    /// Strong PUBR holds at every belief of `d`.
    pub strong_on_d: bool,
    /// Beliefs of `d` where plain PUBR fails.
    pub failing: Vec<Belief>,
}

pub fn theorem1_verdict(game: &GameSpec, prior: &Belief) -> Result<Theorem1Verdict> {
    theorem1_with(&Engine::new(game)?, prior)
}

pub(crate) fn theorem1_with(engine: &Engine<'_>, prior: &Belief) -> Result<Theorem1Verdict> {
    let game = engine.game();
    let (_, policy) = engine.cav_upper(prior)?;
    let plain = potentially_unique_actions(game, prior.support())?;
    let d: Vec<Belief> = policy.beliefs().cloned().collect();
    let failing: Vec<Belief> = d.iter().filter(|mu| !pubr_with(game, mu, plain)).cloned().collect();
    let mut strong_on_d = true;
    for mu in &d {
        if !pubr_with(game, mu, potentially_unique_actions(game, mu.support())?) {
            strong_on_d = false;
        }
    }
    Ok(Theorem1Verdict {
        applies: failing.is_empty(),
        d,
        strong_on_d,
        failing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games;
    use crate::oracle::random_game;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn judge_potentially_unique() {
        let game = games::judge();
        let au = potentially_unique_actions(&game, StateMask::full(2)).unwrap();
        assert_eq!(au, ActionSet::single(1));
    }

    #[test]
    fn quadratic_loss_all_potentially_unique() {
        let game = games::quadratic_loss();
        assert_eq!(potentially_unique_actions(&game, StateMask::full(3)).unwrap(), ActionSet::full(3));
        for t in 0..3 {
            assert!(pubr_at(&game, &Belief::degenerate(3, t), false).unwrap());
            assert!(pubr_at(&game, &Belief::degenerate(3, t), true).unwrap());
        }
    }

    #[test]
    fn footnote_potentially_unique() {
        let game = games::footnote();
        assert_eq!(potentially_unique_actions(&game, StateMask::full(2)).unwrap(), ActionSet::single(1));
        assert_eq!(phi(&game, 0, StateMask::single(0)), int(0));
    }

    #[test]
    fn judge_pubr_fails_at_half() {
        let game = games::judge();
        let half = Belief::binary(ratio(1, 2)).unwrap();
        assert!(!pubr_at(&game, &half, false).unwrap());
        assert!(pubr_at(&game, &Belief::binary(ratio(1, 4)).unwrap(), false).unwrap());
    }

    #[test]
    fn theorem1_examples() {
        let game = games::quadratic_loss();
        let t1 = theorem1_verdict(&game, game.prior()).unwrap();
        assert!(t1.applies);
        assert!(t1.failing.is_empty());

        let judge = games::judge();
        let t1 = theorem1_verdict(&judge, judge.prior()).unwrap();
        assert!(!t1.applies);
        assert_eq!(t1.failing, vec![Belief::binary(ratio(1, 2)).unwrap()]);

        let constant = GameSpec::new(
            judge.states().to_vec(),
            judge.actions().to_vec(),
            judge.prior().probs().to_vec(),
            vec![vec![int(2), int(2)]; 3],
            judge.u_receiver().to_vec(),
        )
        .unwrap();
        assert!(theorem1_verdict(&constant, constant.prior()).unwrap().applies);
    }

    #[test]
    fn empty_mask_is_rejected() {
        assert!(potentially_unique_actions(&games::judge(), StateMask(0)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn unique_actions_grow_with_the_mask(seed in any::<u64>(), ns in 2usize..4, na in 2usize..5, m1 in 1u32..8, m2 in 1u32..8) {
            let game = random_game(seed, ns, na, 4).unwrap();
            let full = (1u32 << ns) - 1;
            let (small, big) = (StateMask(m1 & m2 & full), StateMask((m1 | m2) & full));
            prop_assume!(!small.is_empty());
            let a = potentially_unique_actions(&game, small).unwrap();
            let b = potentially_unique_actions(&game, big).unwrap();
            prop_assert!(a.is_subset(b));
        }
    }
}
