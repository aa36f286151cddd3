//! Limited commitment: the sender's report is honored with probability `χ`.
//! At `χ = 1` the payoff set is the full-commitment interval; for `χ < 1` only
//! a certified lower bound is provided.

use crate::concavify::{Engine, PayoffInterval};
use crate::error::{Error, Result};
use crate::model::{value_lower, Belief, GameSpec, StateMask};
use crate::rational::{ratio, serde_exact, Rational};
use num_traits::{One, Signed};
use serde::Serialize;

pub fn default_chi_grid() -> Vec<Rational> {
    vec![ratio(0, 1), ratio(1, 4), ratio(1, 2), ratio(3, 4), ratio(99, 100), ratio(1, 1)]
}

pub fn default_epsilon() -> Rational {
    ratio(1, 1000)
}

fn check_state_independent(game: &GameSpec) -> Result<()> {
    if game.sender_is_state_independent() {
        Ok(())
    } else {
        Err(Error::Precondition(
            "credibility analysis requires a state-independent sender payoff (every row of u_sender constant)".into(),
        ))
    }
}

fn check_chi(chi: &Rational) -> Result<()> {
    if chi.is_negative() || chi > &Rational::one() {
        return Err(Error::invalid("chi", format!("{chi} is outside [0, 1]")));
    }
    Ok(())
}

fn check_epsilon(epsilon: &Rational) -> Result<()> {
    if !epsilon.is_positive() {
        return Err(Error::invalid("epsilon", "must be positive"));
    }
    Ok(())
}

/// Equilibrium payoffs with full credibility.
pub fn chi_one_payoff_set(game: &GameSpec, prior: &Belief) -> Result<PayoffInterval> {
    check_state_independent(game)?;
    Engine::new(game)?.equilibrium_interval(prior)
}

/// Minimum of `w` over the simplex, attained at a cell vertex.
pub fn min_w(game: &GameSpec) -> Result<Rational> {
    let engine = Engine::new(game)?;
    min_w_with(&engine)
}

fn min_w_with(engine: &Engine<'_>) -> Result<Rational> {
    let game = engine.game();
    Ok(engine
        .cells(StateMask::full(game.num_states()))?
        .iter()
        .flat_map(|c| c.vertices.iter())
        .map(|x| value_lower(game, x))
        .min()
        .expect("the simplex has vertices"))
}

/// `χ·(ŵ(prior) − ε) + (1 − χ)·min w`: below every sender payoff in any
/// equilibrium with credibility `χ`.
pub fn credibility_lower_bound(game: &GameSpec, prior: &Belief, chi: &Rational, epsilon: &Rational) -> Result<Rational> {
    check_state_independent(game)?;
    check_chi(chi)?;
    check_epsilon(epsilon)?;
    let engine = Engine::new(game)?;
    let w_hat = engine.cav_lower_value(prior)?;
    Ok(bound(chi, &w_hat, epsilon, &min_w_with(&engine)?))
}

fn bound(chi: &Rational, w_hat: &Rational, epsilon: &Rational, min_w: &Rational) -> Rational {
    chi * (w_hat - epsilon) + (Rational::one() - chi) * min_w
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CredibilityReport {
    #[serde(with = "serde_exact::vec")]
    pub chi_grid: Vec<Rational>,
    #[serde(with = "serde_exact::vec")]
    pub lower_bounds: Vec<Rational>,
    #[serde(with = "serde_exact")]
    pub epsilon: Rational,
    pub chi1_interval: PayoffInterval,
    /// The full-commitment value survives vanishing manipulation risk under
    /// adversarial selection: `ŵ(prior) = v̂(prior)`.
    pub strongly_robust: bool,
    #[serde(with = "serde_exact")]
    pub min_w: Rational,
    /// `ŵ(prior) − ε`, the bound as `χ` rises to one.
    #[serde(with = "serde_exact")]
    pub limit_bound: Rational,
}

pub fn robustness_verdict(game: &GameSpec, prior: &Belief) -> Result<CredibilityReport> {
    robustness_with(game, prior, default_chi_grid(), default_epsilon())
}

pub fn robustness_with(game: &GameSpec, prior: &Belief, chi_grid: Vec<Rational>, epsilon: Rational) -> Result<CredibilityReport> {
    check_state_independent(game)?;
    check_epsilon(&epsilon)?;
    for chi in &chi_grid {
        check_chi(chi)?;
    }
    let mut chi_grid = chi_grid;
    chi_grid.sort();
    chi_grid.dedup();
    let engine = Engine::new(game)?;
    let interval = engine.equilibrium_interval(prior)?;
    let min_w = min_w_with(&engine)?;
    let lower_bounds = chi_grid.iter().map(|chi| bound(chi, &interval.lo, &epsilon, &min_w)).collect();
    Ok(CredibilityReport {
        chi_grid,
        lower_bounds,
        limit_bound: &interval.lo - &epsilon,
        strongly_robust: interval.is_degenerate(),
        chi1_interval: interval,
        epsilon,
        min_w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::{analyze, genericity_check, Verdict};
    use crate::games;
    use crate::oracle::random_game;
    use crate::rational::int;
    use proptest::prelude::*;

    #[test]
    fn judge_bound() {
        let game = games::judge();
        let b = credibility_lower_bound(&game, game.prior(), &ratio(99, 100), &ratio(1, 1000)).unwrap();
        assert_eq!(b, ratio(-1099, 100000));
        assert_eq!(min_w(&game).unwrap(), int(-1));
        assert_eq!(
            credibility_lower_bound(&game, game.prior(), &int(1), &ratio(1, 1000)).unwrap(),
            ratio(-1, 1000)
        );
        assert_eq!(credibility_lower_bound(&game, game.prior(), &int(0), &ratio(1, 1000)).unwrap(), int(-1));
    }

    #[test]
    fn judge_is_not_strongly_robust() {
        let game = games::judge();
        let r = robustness_verdict(&game, game.prior()).unwrap();
        assert!(!r.strongly_robust);
        assert_eq!((r.chi1_interval.lo.clone(), r.chi1_interval.hi.clone()), (int(0), ratio(1, 2)));
        assert!(r.lower_bounds.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(r.lower_bounds.last(), Some(&r.limit_bound));
    }

    #[test]
    fn quadratic_loss_is_strongly_robust() {
        let game = games::quadratic_loss();
        let r = robustness_verdict(&game, game.prior()).unwrap();
        assert!(r.strongly_robust);
        assert_eq!(r.chi1_interval.width(), int(0));
    }

    #[test]
    fn state_dependent_sender_is_rejected() {
        let q = games::quadratic_loss();
        let mut u = q.u_sender().to_vec();
        u[0][0] = int(5);
        let game = GameSpec::new(q.states().to_vec(), q.actions().to_vec(), q.prior().probs().to_vec(), u, q.u_receiver().to_vec()).unwrap();
        assert!(matches!(chi_one_payoff_set(&game, game.prior()), Err(Error::Precondition(_))));
        assert!(robustness_verdict(&game, game.prior()).is_err());
    }

    #[test]
    fn parameters_are_validated() {
        let game = games::judge();
        assert!(credibility_lower_bound(&game, game.prior(), &ratio(3, 2), &ratio(1, 10)).is_err());
        assert!(credibility_lower_bound(&game, game.prior(), &ratio(1, 2), &int(0)).is_err());
    }

    fn state_independent(seed: u64, ns: usize, na: usize) -> GameSpec {
        let g = random_game(seed, ns, na, 1000).unwrap();
        let u: Vec<Vec<Rational>> = g.u_sender().iter().map(|r| vec![r[0].clone(); ns]).collect();
        GameSpec::new(g.states().to_vec(), g.actions().to_vec(), g.prior().probs().to_vec(), u, g.u_receiver().to_vec()).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn bound_is_monotone_and_matches_uniqueness(seed in any::<u64>(), ns in 2usize..4, na in 2usize..4) {
            let game = state_independent(seed, ns, na);
            let r = robustness_verdict(&game, game.prior()).unwrap();
            if r.limit_bound >= r.min_w {
                prop_assert!(r.lower_bounds.windows(2).all(|w| w[0] <= w[1]));
            }
            prop_assert_eq!(r.lower_bounds.last().unwrap(), &r.limit_bound);
            let unique = analyze(&game, game.prior()).unwrap().verdict == Verdict::Unique;
            prop_assert_eq!(r.strongly_robust, unique);
            if genericity_check(&game).in_u_r {
                prop_assert!(r.strongly_robust);
            }
        }
    }
}
