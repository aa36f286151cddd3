use crate::error::Result;
use crate::geometry::enumerate_cells;
use crate::model::{best_responses, Belief, GameSpec, Label, StateMask};
use crate::rational::Rational;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Random beliefs tried when no structural certificate applies.
pub const QUASI_SAMPLES: usize = 512;
const QUASI_SEED: u64 = 0x6f72_6465_7265_64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Ordered {
    Yes,
    No,
    Uncertified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    BinaryActions,
    SenderMonotone,
    SenderConvex,
    ReceiverConcaveCertified,
}

/// How the per-belief quasiconcavity/quasiconvexity clause was settled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuasiCondition {
    CertifiedBy(Certificate),
    /// No sampled belief violated the clause; this is not a proof.
    SampledOnly,
    /// Violated at the recorded belief.
    Failed(Belief),
    /// Positions are missing, so the clause was not examined.
    NotChecked,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderedReport {
    pub is_ordered: Ordered,
    pub increasing_differences: bool,
    pub quasi_condition: QuasiCondition,
    pub boundary_condition: bool,
    pub theorem2_applies: bool,
    pub reason: Option<String>,
}

fn order_by_position(labels: &[Label]) -> Option<Vec<usize>> {
    let mut idx: Vec<usize> = (0..labels.len()).collect();
    if labels.iter().any(|l| l.position.is_none()) {
        return None;
    }
    idx.sort_by(|&i, &j| labels[i].position.cmp(&labels[j].position));
    Some(idx)
}

fn increasing_differences(game: &GameSpec, acts: &[usize], states: &[usize]) -> bool {
    let u = game.u_receiver();
    for (i, &a) in acts.iter().enumerate() {
        for &b in &acts[i + 1..] {
            for (k, &s) in states.iter().enumerate() {
                for &t in &states[k + 1..] {
                    if &u[b][t] - &u[a][t] <= &u[b][s] - &u[a][s] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Slopes of `f` between consecutive positions.
fn slopes(pos: &[Rational], f: &[Rational]) -> Vec<Rational> {
    (1..f.len()).map(|i| (&f[i] - &f[i - 1]) / (&pos[i] - &pos[i - 1])).collect()
}

fn column(m: &[Vec<Rational>], acts: &[usize], t: usize) -> Vec<Rational> {
    acts.iter().map(|&a| m[a][t].clone()).collect()
}

fn certificate(game: &GameSpec, acts: &[usize], pos: &[Rational]) -> Option<Certificate> {
    if acts.len() == 2 {
        return Some(Certificate::BinaryActions);
    }
    let n = game.num_states();
    let sender: Vec<Vec<Rational>> = (0..n).map(|t| slopes(pos, &column(game.u_sender(), acts, t))).collect();
    let zero = Rational::from_integer(0.into());
    let up = sender.iter().flatten().all(|s| s >= &zero);
    let down = sender.iter().flatten().all(|s| s <= &zero);
    if up || down {
        return Some(Certificate::SenderMonotone);
    }
    if sender.iter().all(|s| s.windows(2).all(|w| w[0] <= w[1])) {
        return Some(Certificate::SenderConvex);
    }
    let receiver_concave = (0..n).all(|t| {
        slopes(pos, &column(game.u_receiver(), acts, t))
            .windows(2)
            .all(|w| w[0] > w[1])
    });
    receiver_concave.then_some(Certificate::ReceiverConcaveCertified)
}

/// Whether the clause holds at one belief, checked over all ordered triples.
fn quasi_at(game: &GameSpec, acts: &[usize], mu: &Belief) -> bool {
    let r: Vec<Rational> = acts.iter().map(|&a| game.receiver_payoff(a, mu)).collect();
    let s: Vec<Rational> = acts.iter().map(|&a| game.sender_payoff(a, mu)).collect();
    let triples = |ok: &dyn Fn(usize, usize, usize) -> bool| {
        (0..acts.len()).all(|l| (l + 1..acts.len()).all(|m| (m + 1..acts.len()).all(|h| ok(l, m, h))))
    };
    let receiver = triples(&|l, m, h| r[m] > std::cmp::min(&r[l], &r[h]).clone());
    receiver || triples(&|l, m, h| s[m] <= std::cmp::max(&s[l], &s[h]).clone())
}

fn random_belief(rng: &mut ChaCha8Rng, n: usize) -> Belief {
    let k: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=1000)).collect();
    let total: u32 = k.iter().sum();
    if total == 0 {
        return Belief::uniform(n);
    }
    Belief::new(k.iter().map(|&x| Rational::new(BigInt::from(x), BigInt::from(total))).collect())
        .expect("normalized weights")
}

fn sampled(game: &GameSpec, acts: &[usize]) -> Result<QuasiCondition> {
    let n = game.num_states();
    let mut points: Vec<Belief> = (0..n).map(|t| Belief::degenerate(n, t)).collect();
    points.push(Belief::uniform(n));
    for cell in enumerate_cells(game, StateMask::full(n))? {
        points.extend(cell.vertices.iter().cloned());
        points.push(cell.interior_witness.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(QUASI_SEED);
    points.extend((0..QUASI_SAMPLES).map(|_| random_belief(&mut rng, n)));
    Ok(match points.into_iter().find(|mu| !quasi_at(game, acts, mu)) {
        Some(mu) => QuasiCondition::Failed(mu),
        None => QuasiCondition::SampledOnly,
    })
}

/// Checks the hypotheses of the ordered-model uniqueness theorem at `prior`.
pub fn ordered_check(game: &GameSpec, prior: &Belief) -> Result<OrderedReport> {
    game.check_belief("prior", prior)?;
    let (Some(acts), Some(states)) = (order_by_position(game.actions()), order_by_position(game.states())) else {
        return Ok(OrderedReport {
            is_ordered: Ordered::Uncertified,
            increasing_differences: false,
            quasi_condition: QuasiCondition::NotChecked,
            boundary_condition: false,
            theorem2_applies: false,
            reason: Some("states and actions need numeric positions".into()),
        });
    };
    let pos: Vec<Rational> = acts
        .iter()
        .map(|&a| game.actions()[a].position.clone().expect("checked"))
        .collect();
    let inc = increasing_differences(game, &acts, &states);
    let quasi = match certificate(game, &acts, &pos) {
        Some(c) => QuasiCondition::CertifiedBy(c),
        None => sampled(game, &acts)?,
    };
    let support: Vec<usize> = states.iter().copied().filter(|&t| prior.support().contains(t)).collect();
    let extremes = [support.first(), support.last()];
    let boundary = extremes.iter().flatten().all(|&&t| {
        prior.probs()[t] == Rational::from_integer(0.into())
            || best_responses(game, &Belief::degenerate(game.num_states(), t)).len() == 1
    });
    let is_ordered = match (&quasi, inc) {
        (_, false) | (QuasiCondition::Failed(_), _) => Ordered::No,
        (QuasiCondition::CertifiedBy(_), true) => Ordered::Yes,
        _ => Ordered::Uncertified,
    };
    let reason = match (&is_ordered, &quasi) {
        (Ordered::No, _) if !inc => Some("receiver payoffs lack strictly increasing differences".into()),
        (Ordered::No, _) => Some("the quasiconcavity/quasiconvexity clause fails at a belief".into()),
        (Ordered::Uncertified, _) => Some("no structural certificate for the quasi condition; sampling found no violation".into()),
        _ if !boundary => Some("an extreme state of the prior's support has tied best responses".into()),
        _ => None,
    };
    Ok(OrderedReport {
        theorem2_applies: is_ordered == Ordered::Yes && boundary,
        is_ordered,
        increasing_differences: inc,
        quasi_condition: quasi,
        boundary_condition: boundary,
        reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games;
    use crate::rational::{int, ratio};

    #[test]
    fn quadratic_loss_is_ordered() {
        let game = games::quadratic_loss();
        let r = ordered_check(&game, game.prior()).unwrap();
        assert!(r.increasing_differences);
        assert_eq!(r.quasi_condition, QuasiCondition::CertifiedBy(Certificate::SenderMonotone));
        assert!(r.boundary_condition);
        assert!(r.theorem2_applies);
        assert_eq!(r.is_ordered, Ordered::Yes);
    }

    #[test]
    fn judge_lacks_strict_increasing_differences() {
        let game = games::judge();
        let r = ordered_check(&game, game.prior()).unwrap();
        assert!(!r.increasing_differences);
        assert_eq!(r.is_ordered, Ordered::No);
        assert!(!r.theorem2_applies);
    }

    #[test]
    fn binary_actions_are_certified() {
        let game = GameSpec::new(
            vec![Label::at("lo", int(0)), Label::at("hi", int(1))],
            vec![Label::at("a", int(0)), Label::at("b", int(1))],
            vec![ratio(1, 3), ratio(2, 3)],
            vec![vec![int(1), int(0)], vec![int(0), int(1)]],
            vec![vec![int(1), int(0)], vec![int(0), int(1)]],
        )
        .unwrap();
        let r = ordered_check(&game, game.prior()).unwrap();
        assert_eq!(r.quasi_condition, QuasiCondition::CertifiedBy(Certificate::BinaryActions));
        assert!(r.theorem2_applies);
    }

    #[test]
    fn missing_positions_are_uncertified() {
        let q = games::quadratic_loss();
        let game = GameSpec::new(
            vec![Label::new("x"), Label::new("y"), Label::new("z")],
            q.actions().to_vec(),
            q.prior().probs().to_vec(),
            q.u_sender().to_vec(),
            q.u_receiver().to_vec(),
        )
        .unwrap();
        let r = ordered_check(&game, game.prior()).unwrap();
        assert_eq!(r.is_ordered, Ordered::Uncertified);
        assert_eq!(r.quasi_condition, QuasiCondition::NotChecked);
        assert!(!r.theorem2_applies);
    }

    #[test]
    fn boundary_requires_unique_responses_at_extremes() {
        let q = games::quadratic_loss();
        // action 1 ties action 0 at the lowest state
        let mut u = q.u_receiver().to_vec();
        u[1][0] = int(0);
        u[1][2] = int(-2);
        let game = q.with_receiver_payoffs(u).unwrap();
        let r = ordered_check(&game, game.prior()).unwrap();
        assert!(!r.boundary_condition);
        assert!(!r.theorem2_applies);
        let off = ordered_check(&game, &Belief::new(vec![int(0), ratio(1, 2), ratio(1, 2)]).unwrap()).unwrap();
        assert!(off.boundary_condition);
    }

    #[test]
    fn sampling_finds_violations() {
        // sender prefers the middle action and the receiver's payoff is not quasiconcave
        let game = GameSpec::new(
            vec![Label::at("lo", int(0)), Label::at("hi", int(1))],
            vec![Label::at("a", int(0)), Label::at("b", int(1)), Label::at("c", int(2))],
            vec![ratio(1, 2), ratio(1, 2)],
            vec![vec![int(0), int(0)], vec![int(1), int(1)], vec![int(0), int(0)]],
            vec![vec![int(0), int(-3)], vec![int(-2), int(-2)], vec![int(-6), int(3)]],
        )
        .unwrap();
        let r = ordered_check(&game, game.prior()).unwrap();
        assert!(matches!(r.quasi_condition, QuasiCondition::Failed(_)));
        assert_eq!(r.is_ordered, Ordered::No);
    }
}
