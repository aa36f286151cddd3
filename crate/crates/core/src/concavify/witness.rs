use super::envelope::Engine;
use super::policy::{evaluate_policy, InformationPolicy, Mixing, TieRule};
use crate::error::{Error, Result};
use crate::geometry::{receiver_gap, sender_gap};
use crate::model::{value_lower, value_upper, Belief, GameSpec};
use crate::rational::{dot, ratio, serde_exact, Rational};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeSet;

/// An equilibrium reaching a target payoff: the policy `p_λ` that shrinks the
/// favorable optimum toward the prior by `λ`, with the receiver breaking ties
/// favorably with probability `ζ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumWitness {
    #[serde(with = "serde_exact")]
    pub target: Rational,
    #[serde(with = "serde_exact")]
    pub lambda: Rational,
    pub policy: InformationPolicy,
    #[serde(with = "serde_exact")]
    pub zeta: Rational,
    #[serde(with = "serde_exact")]
    pub realized_payoff: Rational,
    /// `∫ w dp_λ`.
    #[serde(with = "serde_exact")]
    pub adversarial_payoff: Rational,
    /// `∫ v dp_λ`.
    #[serde(with = "serde_exact")]
    pub favorable_payoff: Rational,
}

struct Path<'a> {
    game: &'a GameSpec,
    prior: &'a Belief,
    atoms: Vec<(Belief, Rational)>,
}

impl Path<'_> {
    fn point(&self, x: &Belief, lambda: &Rational) -> Belief {
        self.prior.mix(x, lambda)
    }

    fn policy(&self, lambda: &Rational) -> InformationPolicy {
        InformationPolicy::new(self.atoms.iter().map(|(x, w)| (self.point(x, lambda), w.clone())).collect())
            .expect("shrinking a policy keeps it valid")
    }

    /// `(∫ w dp_λ, ∫ v dp_λ)`.
    fn bounds(&self, lambda: &Rational) -> (Rational, Rational) {
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        for (x, w) in &self.atoms {
            let p = self.point(x, lambda);
            lo += w * value_lower(self.game, &p);
            hi += w * value_upper(self.game, &p);
        }
        (lo, hi)
    }

    /// Every `λ ∈ [0, 1]` at which some segment crosses a receiver
    /// indifference or a sender indifference between two actions.
    fn breakpoints(&self) -> Vec<Rational> {
        let na = self.game.num_actions();
        let mut out: BTreeSet<Rational> = [Rational::zero(), Rational::one()].into_iter().collect();
        let mut forms = Vec::new();
        for a in 0..na {
            for b in a + 1..na {
                forms.push(receiver_gap(self.game, a, b));
                forms.push(sender_gap(self.game, a, b));
            }
        }
        for (x, _) in &self.atoms {
            let dir: Vec<Rational> = x.probs().iter().zip(self.prior.probs()).map(|(a, b)| a - b).collect();
            for f in &forms {
                let slope = dot(f, &dir);
                if slope.is_zero() {
                    continue;
                }
                let root = -dot(f, self.prior.probs()) / slope;
                if root.is_positive() && root < Rational::one() {
                    out.insert(root);
                }
            }
        }
        out.into_iter().collect()
    }
}

fn covers(bounds: &(Rational, Rational), s: &Rational) -> bool {
    &bounds.0 <= s && s <= &bounds.1
}

/// Smallest `λ` in the open interval `(l, r)` at which the affine bounds cover
/// `s`, if any. `λ ↦ (lo, hi)` is affine on the interval.
fn solve_on_interval(path: &Path, l: &Rational, r: &Rational, s: &Rational) -> Option<Rational> {
    let third = (r - l) / Rational::from_integer(3.into());
    let (l1, l2) = (l + &third, l + &third + &third);
    let (w1, v1) = path.bounds(&l1);
    let (w2, v2) = path.bounds(&l2);
    let sw = (&w2 - &w1) / &third;
    let sv = (&v2 - &v1) / &third;
    // feasible set is [lower, upper] ∩ (l, r)
    let mut lower: Option<Rational> = None;
    let mut upper: Option<Rational> = None;
    let mut tighten = |bound: Rational, is_upper: bool| {
        let slot = if is_upper { &mut upper } else { &mut lower };
        let replace = match slot {
            None => true,
            Some(cur) => (is_upper && bound < *cur) || (!is_upper && bound > *cur),
        };
        if replace {
            *slot = Some(bound);
        }
    };
    // w(λ) ≤ s
    if sw.is_zero() {
        if &w1 > s {
            return None;
        }
    } else {
        let at = &l1 + (s - &w1) / &sw;
        tighten(at, sw.is_positive());
    }
    // v(λ) ≥ s
    if sv.is_zero() {
        if &v1 < s {
            return None;
        }
    } else {
        let at = &l1 + (s - &v1) / &sv;
        tighten(at, sv.is_negative());
    }
    let lo = match lower {
        Some(x) if &x > l => x,
        _ => l.clone(),
    };
    let hi = match upper {
        Some(x) if &x < r => x,
        _ => r.clone(),
    };
    if lo > hi {
        return None;
    }
    let mid = if lo == hi { lo } else { (&lo + &hi) * ratio(1, 2) };
    (&mid > l && &mid < r && covers(&path.bounds(&mid), s)).then_some(mid)
}

impl Engine<'_> {
    /// An equilibrium policy and tie-breaking probability realizing payoff `s`.
    pub fn equilibrium_witness(&self, prior: &Belief, s: &Rational) -> Result<EquilibriumWitness> {
        let game = self.game();
        let (hi, top) = self.cav_upper(prior)?;
        let lo = self.cav_lower_value(prior)?;
        if s < &lo || s > &hi {
            return Err(Error::invalid(
                "target",
                format!("{s} is outside the equilibrium payoff interval [{lo}, {hi}]"),
            ));
        }
        let path = Path {
            game,
            prior,
            atoms: top.support().to_vec(),
        };
        let breaks = path.breakpoints();
        let mut lambda = None;
        for (k, b) in breaks.iter().enumerate() {
            if covers(&path.bounds(b), s) {
                lambda = Some(b.clone());
                break;
            }
            if let Some(next) = breaks.get(k + 1) {
                if let Some(l) = solve_on_interval(&path, b, next, s) {
                    lambda = Some(l);
                    break;
                }
            }
        }
        let lambda = lambda.ok_or_else(|| Error::Internal(format!("no λ realizes {s}")))?;
        let policy = path.policy(&lambda);
        let (w, v) = path.bounds(&lambda);
        let zeta = if v == w { Rational::one() } else { (s - &w) / (&v - &w) };
        let realized = evaluate_policy(game, &policy, &TieRule::Mixed(Mixing::Scalar(zeta.clone())))?;
        if &realized != s {
            return Err(Error::Internal(format!("witness realizes {realized}, not {s}")));
        }
        Ok(EquilibriumWitness {
            target: s.clone(),
            lambda,
            policy,
            zeta,
            realized_payoff: realized,
            adversarial_payoff: w,
            favorable_payoff: v,
        })
    }
}

pub fn equilibrium_witness(game: &GameSpec, prior: &Belief, s: &Rational) -> Result<EquilibriumWitness> {
    Engine::new(game)?.equilibrium_witness(prior, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games;
    use crate::rational::int;

    #[test]
    fn judge_top_of_interval() {
        let game = games::judge();
        let w = equilibrium_witness(&game, game.prior(), &ratio(1, 2)).unwrap();
        assert_eq!(w.lambda, int(1));
        assert_eq!(w.zeta, int(1));
        assert_eq!(w.realized_payoff, ratio(1, 2));
    }

    #[test]
    fn judge_bottom_of_interval() {
        let game = games::judge();
        let w = equilibrium_witness(&game, game.prior(), &int(0)).unwrap();
        assert_eq!(w.lambda, int(0));
        assert_eq!(w.policy, InformationPolicy::point_mass(game.prior().clone()));
        assert_eq!(w.realized_payoff, int(0));
    }

    #[test]
    fn judge_interior_target() {
        let game = games::judge();
        let s = ratio(1, 4);
        let w = equilibrium_witness(&game, game.prior(), &s).unwrap();
        assert!(w.lambda.is_positive() && w.lambda <= int(1));
        assert!(!w.zeta.is_negative() && w.zeta <= int(1));
        assert_eq!(w.policy.barycenter(), game.prior());
        let again = evaluate_policy(&game, &w.policy, &TieRule::Mixed(Mixing::Scalar(w.zeta.clone()))).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn targets_outside_interval_are_rejected() {
        let game = games::judge();
        assert!(equilibrium_witness(&game, game.prior(), &ratio(3, 4)).is_err());
        assert!(equilibrium_witness(&game, game.prior(), &ratio(-1, 100)).is_err());
    }

    #[test]
    fn unattained_lower_end_still_has_a_witness() {
        let game = games::judge();
        let prior = Belief::binary(ratio(3, 4)).unwrap();
        let w = equilibrium_witness(&game, &prior, &ratio(-1, 2)).unwrap();
        assert_eq!(w.realized_payoff, ratio(-1, 2));
    }
}
