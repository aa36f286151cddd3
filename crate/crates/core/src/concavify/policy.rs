use crate::error::{Error, Result};
use crate::model::{value_lower, value_upper, Belief, GameSpec};
use crate::rational::{serde_exact, Rational};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A finitely supported distribution over posterior beliefs.
///
/// Support beliefs are distinct and kept in lexicographic order; weights are
/// positive and sum to one; the barycenter is stored exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InformationPolicy {
    support: Vec<(Belief, Rational)>,
    barycenter: Belief,
}

impl InformationPolicy {
    /// Merges repeated beliefs and validates the weights.
    pub fn new(support: Vec<(Belief, Rational)>) -> Result<Self> {
        let dim = support
            .first()
            .map(|(b, _)| b.dim())
            .ok_or_else(|| Error::invalid("policy", "support is empty"))?;
        let mut merged: BTreeMap<Belief, Rational> = BTreeMap::new();
        for (i, (b, w)) in support.into_iter().enumerate() {
            if b.dim() != dim {
                return Err(Error::dimension(format!("policy.support[{i}]"), dim, b.dim()));
            }
            if !w.is_positive() {
                return Err(Error::invalid(format!("policy.support[{i}]"), "weights must be positive"));
            }
            *merged.entry(b).or_insert_with(Rational::zero) += w;
        }
        let total: Rational = merged.values().sum();
        if !total.is_one() {
            return Err(Error::NotProbability {
                field: "policy weights".into(),
                reason: format!("sum to {total}"),
            });
        }
        let mut mean = vec![Rational::zero(); dim];
        for (b, w) in &merged {
            for (m, p) in mean.iter_mut().zip(b.probs()) {
                *m += w * p;
            }
        }
        Ok(InformationPolicy {
            support: merged.into_iter().collect(),
            barycenter: Belief::from_probs_unchecked(mean),
        })
    }

    pub fn point_mass(mu: Belief) -> Self {
        InformationPolicy {
            barycenter: mu.clone(),
            support: vec![(mu, Rational::one())],
        }
    }

    pub fn support(&self) -> &[(Belief, Rational)] {
        &self.support
    }

    pub fn beliefs(&self) -> impl Iterator<Item = &Belief> {
        self.support.iter().map(|(b, _)| b)
    }

    pub fn barycenter(&self) -> &Belief {
        &self.barycenter
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// `Σ weight · f(belief)`.
    pub fn expectation(&self, mut f: impl FnMut(&Belief) -> Rational) -> Rational {
        self.support.iter().map(|(b, w)| w * f(b)).sum()
    }
}

#[derive(Serialize, Deserialize)]
struct Atom {
    belief: Belief,
    #[serde(with = "serde_exact")]
    weight: Rational,
}

#[derive(Serialize, Deserialize)]
struct PolicyRepr {
    support: Vec<Atom>,
    barycenter: Belief,
}

impl Serialize for InformationPolicy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolicyRepr {
            support: self
                .support
                .iter()
                .map(|(b, w)| Atom {
                    belief: b.clone(),
                    weight: w.clone(),
                })
                .collect(),
            barycenter: self.barycenter.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for InformationPolicy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolicyRepr::deserialize(d)?;
        let policy = InformationPolicy::new(repr.support.into_iter().map(|a| (a.belief, a.weight)).collect())
            .map_err(serde::de::Error::custom)?;
        if policy.barycenter != repr.barycenter {
            return Err(serde::de::Error::custom("barycenter does not match the support"));
        }
        Ok(policy)
    }
}

/// How the receiver breaks indifference when a policy is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum TieRule {
    /// In the sender's favor: `v`.
    Favorable,
    /// Against the sender: `w`.
    Adversarial,
    /// `(1 − ζ)·w + ζ·v` at each belief.
    Mixed(Mixing),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Mixing {
    Scalar(Rational),
    /// One weight per support belief, in the policy's support order.
    PerPoint(Vec<Rational>),
}

fn check_unit_interval(field: &str, z: &Rational) -> Result<()> {
    if z.is_negative() || z > &Rational::one() {
        return Err(Error::invalid(field, format!("{z} is outside [0, 1]")));
    }
    Ok(())
}

/// Expected sender payoff of `policy` under `rule`.
pub fn evaluate_policy(game: &GameSpec, policy: &InformationPolicy, rule: &TieRule) -> Result<Rational> {
    game.check_belief("policy", policy.barycenter())?;
    match rule {
        TieRule::Favorable => Ok(policy.expectation(|b| value_upper(game, b))),
        TieRule::Adversarial => Ok(policy.expectation(|b| value_lower(game, b))),
        TieRule::Mixed(Mixing::Scalar(z)) => {
            check_unit_interval("zeta", z)?;
            let one_minus = Rational::one() - z;
            Ok(policy.expectation(|b| &one_minus * value_lower(game, b) + z * value_upper(game, b)))
        }
        TieRule::Mixed(Mixing::PerPoint(zs)) => {
            if zs.len() != policy.len() {
                return Err(Error::dimension("zeta", policy.len(), zs.len()));
            }
            for (i, z) in zs.iter().enumerate() {
                check_unit_interval(&format!("zeta[{i}]"), z)?;
            }
            Ok(policy
                .support()
                .iter()
                .zip(zs)
                .map(|((b, w), z)| w * ((Rational::one() - z) * value_lower(game, b) + z * value_upper(game, b)))
                .sum())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games;
    use crate::rational::{int, ratio};

    pub(crate) fn judge_p_star() -> InformationPolicy {
        InformationPolicy::new(vec![
            (Belief::binary(int(0)).unwrap(), ratio(1, 2)),
            (Belief::binary(ratio(1, 2)).unwrap(), ratio(1, 2)),
        ])
        .unwrap()
    }

    #[test]
    fn judge_optimal_policy_payoffs() {
        let game = games::judge();
        let p = judge_p_star();
        assert_eq!(p.barycenter(), game.prior());
        assert_eq!(evaluate_policy(&game, &p, &TieRule::Favorable).unwrap(), ratio(1, 2));
        assert_eq!(evaluate_policy(&game, &p, &TieRule::Adversarial).unwrap(), ratio(-1, 2));
        assert_eq!(
            evaluate_policy(&game, &p, &TieRule::Mixed(Mixing::Scalar(int(1)))).unwrap(),
            ratio(1, 2)
        );
        assert_eq!(
            evaluate_policy(&game, &p, &TieRule::Mixed(Mixing::PerPoint(vec![ratio(1, 2), int(0)]))).unwrap(),
            int(0)
        );
    }

    #[test]
    fn zeta_must_be_a_probability() {
        let game = games::judge();
        let err = evaluate_policy(&game, &judge_p_star(), &TieRule::Mixed(Mixing::Scalar(ratio(3, 2))));
        assert!(err.is_err());
        let err = evaluate_policy(&game, &judge_p_star(), &TieRule::Mixed(Mixing::PerPoint(vec![int(1)])));
        assert!(err.is_err());
    }

    #[test]
    fn duplicate_beliefs_merge() {
        let half = Belief::binary(ratio(1, 2)).unwrap();
        let p = InformationPolicy::new(vec![(half.clone(), ratio(1, 4)), (half.clone(), ratio(3, 4))]).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.barycenter(), &half);
    }

    #[test]
    fn policy_json_round_trip() {
        let p = judge_p_star();
        let text = serde_json::to_string(&p).unwrap();
        let back: InformationPolicy = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn bad_weights_are_rejected() {
        let b = Belief::uniform(2);
        assert!(InformationPolicy::new(vec![(b.clone(), ratio(1, 2))]).is_err());
        assert!(InformationPolicy::new(vec![(b.clone(), int(0)), (b, int(1))]).is_err());
        assert!(InformationPolicy::new(vec![]).is_err());
    }
}
