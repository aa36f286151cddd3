//! Decomposition of a face of the belief simplex into the closed polytopes on
//! which the receiver's exact best-response set is constant.

use super::vertices::Halfspaces;
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearProgram, LpSolution, Relation};
use crate::model::{best_responses, ActionSet, Belief, GameSpec, StateMask};
use crate::rational::{serde_exact, Rational};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;

/// Closed polytope `{μ ∈ Δ(mask) : S ⊆ A*_R(μ)}` for a tie set `S` that occurs
/// exactly somewhere in `Δ(mask)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub tie_set: ActionSet,
    pub mask: StateMask,
    /// States of `mask` that carry zero probability everywhere on the cell.
    pub forced_zero: StateMask,
    pub vertices: Vec<Belief>,
    /// A belief whose exact best-response set is `tie_set` and whose support
    /// is `mask` minus `forced_zero`.
    pub interior_witness: Belief,
}

impl Cell {
    pub fn contains(&self, game: &GameSpec, mu: &Belief) -> bool {
        mu.support().is_subset(self.mask) && self.tie_set.is_subset(best_responses(game, mu))
    }

    pub fn in_relative_interior(&self, game: &GameSpec, mu: &Belief) -> bool {
        mu.support() == StateMask(self.mask.0 & !self.forced_zero.0) && best_responses(game, mu) == self.tie_set
    }

    pub(crate) fn halfspaces(&self, game: &GameSpec) -> Halfspaces {
        cell_halfspaces(game, self.mask, self.forced_zero, self.tie_set)
    }
}

/// A (point, value) pair feeding the envelope programs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub point: Belief,
    #[serde(with = "serde_exact")]
    pub value: Rational,
    pub source_tie_set: ActionSet,
    pub kind: GeneratorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    Upper,
    Lower,
}

/// Receiver payoff advantage of `a` over `b` as a linear form on beliefs.
pub(crate) fn receiver_gap(game: &GameSpec, a: usize, b: usize) -> Vec<Rational> {
    let u = game.u_receiver();
    u[a].iter().zip(&u[b]).map(|(x, y)| x - y).collect()
}

pub(crate) fn sender_gap(game: &GameSpec, a: usize, b: usize) -> Vec<Rational> {
    let u = game.u_sender();
    u[a].iter().zip(&u[b]).map(|(x, y)| x - y).collect()
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); n];
    e[i] = Rational::one();
    e
}

pub(crate) fn cell_halfspaces(game: &GameSpec, mask: StateMask, forced_zero: StateMask, tie_set: ActionSet) -> Halfspaces {
    let n = game.num_states();
    let mut h = Halfspaces::new(n);
    h.eq(vec![Rational::one(); n], Rational::one());
    for theta in 0..n {
        if !mask.contains(theta) || forced_zero.contains(theta) {
            h.eq(unit(n, theta), Rational::zero());
        } else {
            h.ge(unit(n, theta), Rational::zero());
        }
    }
    let a0 = tie_set.first().expect("tie sets are nonempty");
    for a in tie_set.iter().skip(1) {
        h.eq(receiver_gap(game, a, a0), Rational::zero());
    }
    for b in (0..game.num_actions()).filter(|&b| !tie_set.contains(b)) {
        h.ge(receiver_gap(game, a0, b), Rational::zero());
    }
    h
}

struct Probe {
    /// Some belief in `Δ(mask)` has every action of the tie set optimal.
    weakly_feasible: bool,
    /// Some belief has exactly this tie set.
    realized: bool,
    forced_zero: StateMask,
    witness: Option<Belief>,
}

/// One homogenized program decides everything about a candidate tie set.
///
/// Over the cone `{y ≥ 0 on mask : ties hold}` maximize `Σ z_j` with
/// `z_j ≤ min(1, slack_j(y))`, where the slacks are the mask coordinates and
/// the advantages over outside actions. Scaling makes every slack that can be
/// positive reach 1 simultaneously, so `z_j ∈ {0, 1}` flags exactly the
/// constraints that are not implied equalities, and the optimal `y` normalized
/// is a relative-interior point.
fn probe(game: &GameSpec, mask: StateMask, tie_set: ActionSet) -> Probe {
    let states: Vec<usize> = mask.iter().filter(|&t| t < game.num_states()).collect();
    let outside: Vec<usize> = (0..game.num_actions()).filter(|&b| !tie_set.contains(b)).collect();
    let m = states.len();
    let nz = m + outside.len();
    let nvars = m + nz;
    let mut objective = vec![Rational::zero(); nvars];
    for c in objective.iter_mut().skip(m) {
        *c = Rational::one();
    }
    let mut lp = LinearProgram::maximize(objective);
    let restrict = |full: Vec<Rational>| -> Vec<Rational> {
        let mut row = vec![Rational::zero(); nvars];
        for (j, &t) in states.iter().enumerate() {
            row[j] = full[t].clone();
        }
        row
    };
    let a0 = tie_set.first().expect("nonempty");
    for a in tie_set.iter().skip(1) {
        lp.constrain(restrict(receiver_gap(game, a, a0)), Relation::Eq, Rational::zero());
    }
    for j in 0..m {
        let mut row = vec![Rational::zero(); nvars];
        row[m + j] = Rational::one();
        row[j] = -Rational::one();
        lp.constrain(row, Relation::Le, Rational::zero());
    }
    for (k, &b) in outside.iter().enumerate() {
        let mut row: Vec<Rational> = restrict(receiver_gap(game, a0, b)).into_iter().map(|x| -x).collect();
        row[m + m + k] = Rational::one();
        lp.constrain(row, Relation::Le, Rational::zero());
    }
    for j in m..nvars {
        lp.set_bounds(j, Some(Rational::zero()), Some(Rational::one()));
    }
    let LpSolution::Optimal { point, .. } = solve_lp(&lp) else {
        unreachable!("the probe program is feasible and bounded")
    };
    let z = &point[m..];
    debug_assert!(z.iter().all(|x| x.is_zero() || x.is_one()), "{z:?}");
    let positive_states: Vec<usize> = (0..m).filter(|&j| z[j].is_one()).collect();
    let weakly_feasible = !positive_states.is_empty();
    let realized = weakly_feasible && z[m..].iter().all(|x| x.is_one());
    let forced_zero = StateMask(
        (0..m)
            .filter(|&j| !z[j].is_one())
            .fold(0, |acc, j| acc | 1 << states[j]),
    );
    let witness = realized.then(|| {
        let total: Rational = point[..m].iter().sum();
        let mut probs = vec![Rational::zero(); game.num_states()];
        for (j, &t) in states.iter().enumerate() {
            probs[t] = &point[j] / &total;
        }
        Belief::from_probs_unchecked(probs)
    });
    Probe {
        weakly_feasible,
        realized,
        forced_zero,
        witness,
    }
}

pub(crate) fn check_mask(game: &GameSpec, mask: StateMask) -> Result<()> {
    if mask.is_empty() {
        return Err(Error::invalid("support mask", "must be nonempty"));
    }
    if !mask.is_subset(StateMask::full(game.num_states())) {
        return Err(Error::invalid("support mask", "refers to states the game does not have"));
    }
    Ok(())
}

/// Every cell of the best-response arrangement on `Δ(mask)`, sorted by tie
/// set, each with its vertices in lexicographic order.
///
/// Candidate tie sets are generated level by level: a set is only tried when
/// all of its one-smaller subsets can be simultaneously optimal, since that
/// property is inherited by subsets.
pub fn enumerate_cells(game: &GameSpec, mask: StateMask) -> Result<Vec<Cell>> {
    game.check_desk_scale()?;
    check_mask(game, mask)?;
    Ok(enumerate_cells_unchecked(game, mask))
}

pub(crate) fn enumerate_cells_unchecked(game: &GameSpec, mask: StateMask) -> Vec<Cell> {
    let na = game.num_actions();
    let mut weak: BTreeSet<u64> = BTreeSet::new();
    let mut level: Vec<ActionSet> = (0..na).map(ActionSet::single).collect();
    let mut cells = Vec::new();
    while !level.is_empty() {
        let probes: Vec<(ActionSet, Probe)> = level.par_iter().map(|&s| (s, probe(game, mask, s))).collect();
        for (s, p) in probes {
            if !p.weakly_feasible {
                continue;
            }
            weak.insert(s.0);
            if p.realized {
                let h = cell_halfspaces(game, mask, p.forced_zero, s);
                let vertices = h.vertices().into_iter().map(Belief::from_probs_unchecked).collect();
                cells.push(Cell {
                    tie_set: s,
                    mask,
                    forced_zero: p.forced_zero,
                    vertices,
                    interior_witness: p.witness.expect("realized cells have a witness"),
                });
            }
        }
        let mut next = BTreeSet::new();
        for &bits in weak.iter().filter(|b| b.count_ones() as usize == level[0].len()) {
            let top = 63 - bits.leading_zeros() as usize;
            for b in top + 1..na {
                let cand = bits | 1 << b;
                let all_subsets_weak = ActionSet(cand).iter().all(|a| weak.contains(&(cand & !(1 << a))));
                if all_subsets_weak {
                    next.insert(cand);
                }
            }
        }
        level = next.into_iter().map(ActionSet).collect();
    }
    cells.sort_by(|a, b| a.tie_set.cmp(&b.tie_set));
    cells
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    #[test]
    fn judge_cells() {
        let game = games::judge();
        let cells = enumerate_cells(&game, StateMask::full(2)).unwrap();
        let summary: Vec<(Vec<usize>, Vec<Rational>)> = cells
            .iter()
            .map(|c| (c.tie_set.to_vec(), c.vertices.iter().map(|v| v.probs()[1].clone()).collect()))
            .collect();
        assert_eq!(
            summary,
            vec![
                (vec![1], vec![ratio(1, 2), int(0)]),
                (vec![0, 2], vec![int(1), ratio(1, 2)]),
                (vec![0, 1, 2], vec![ratio(1, 2)]),
            ]
        );
        for c in &cells {
            assert_eq!(best_responses(&game, &c.interior_witness), c.tie_set);
        }
    }

    #[test]
    fn footnote_cells() {
        let game = games::footnote();
        let cells = enumerate_cells(&game, StateMask::full(2)).unwrap();
        assert_eq!(cells.len(), 2);
        assert_eq!(cells[0].tie_set, ActionSet::single(1));
        assert_eq!(cells[0].vertices.len(), 2);
        assert_eq!(cells[1].tie_set, ActionSet::full(2));
        assert_eq!(cells[1].vertices, vec![Belief::degenerate(2, 0)]);
        assert_eq!(cells[1].forced_zero, StateMask::single(1));
    }

    #[test]
    fn dominant_action_gives_one_cell() {
        let game = games::judge()
            .with_receiver_payoffs(vec![vec![int(0), int(0)], vec![int(1), int(1)], vec![int(0), int(0)]])
            .unwrap();
        let cells = enumerate_cells(&game, StateMask::full(2)).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].tie_set, ActionSet::single(1));
        assert_eq!(cells[0].vertices.len(), 2);
    }

    #[test]
    fn restricted_mask_stays_on_face() {
        let game = games::quadratic_loss();
        let cells = enumerate_cells(&game, StateMask(0b101)).unwrap();
        for c in &cells {
            for v in &c.vertices {
                assert!(v.probs()[1].is_zero());
                assert!(c.contains(&game, v));
            }
            assert!(c.in_relative_interior(&game, &c.interior_witness));
        }
        // a ∈ {0,1,2} each win somewhere on the edge between δ₀ and δ₂
        let singles: Vec<_> = cells.iter().filter(|c| c.tie_set.len() == 1).map(|c| c.tie_set).collect();
        assert_eq!(singles.len(), 3);
    }

    #[test]
    fn empty_mask_is_rejected() {
        assert!(enumerate_cells(&games::judge(), StateMask(0)).is_err());
    }

    fn random_belief(n: usize) -> impl Strategy<Value = Belief> {
        proptest::collection::vec(1i64..40, n).prop_map(|w| {
            let t: i64 = w.iter().sum();
            Belief::new(w.iter().map(|&x| ratio(x, t)).collect()).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn cells_cover_and_partition_interiors(mu in random_belief(3)) {
            for game in [games::quadratic_loss(), crate::oracle::random_game(7, 3, 4, 10).unwrap()] {
                let cells = enumerate_cells(&game, StateMask::full(3)).unwrap();
                prop_assert!(cells.iter().any(|c| c.contains(&game, &mu)));
                let interiors = cells.iter().filter(|c| c.in_relative_interior(&game, &mu)).count();
                prop_assert_eq!(interiors, 1);
            }
        }
    }

    #[test]
    fn witnesses_are_exact_on_random_games() {
        for seed in 0..20 {
            let game = crate::oracle::random_game(seed, 3, 3, 5).unwrap();
            let cells = enumerate_cells(&game, StateMask::full(3)).unwrap();
            for c in &cells {
                assert_eq!(best_responses(&game, &c.interior_witness), c.tie_set);
                let distinct: BTreeSet<_> = c.vertices.iter().collect();
                assert_eq!(distinct.len(), c.vertices.len());
                for v in &c.vertices {
                    assert!(c.tie_set.is_subset(best_responses(&game, v)));
                }
            }
        }
    }
}
