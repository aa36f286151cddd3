use super::policy::{evaluate_policy, InformationPolicy, TieRule};
use crate::error::{Error, Result};
use crate::geometry::{
    check_mask, enumerate_cells_unchecked, receiver_gap, reduce_support, sender_gap, solve_lp,
    Cell, Generator, GeneratorKind, Halfspaces, LinearProgram, LpSolution, Relation,
};
use crate::model::{value_lower, value_upper, ActionSet, Belief, GameSpec, StateMask};
use crate::rational::{dot, ratio, serde_exact, Rational};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

/// Default interior pull used when the lower envelope is not attained.
pub fn default_delta() -> Rational {
    ratio(1, 1024)
}

/// Region of a cell on which one tied action is the sender's worst.
#[derive(Debug, Clone)]
pub(crate) struct Piece {
    pub tie_set: ActionSet,
    pub action: usize,
    pub halfspaces: Halfspaces,
}

/// Everything the envelope programs need on one face `Δ(mask)`.
#[derive(Debug)]
pub(crate) struct Arrangement {
    pub cells: Vec<Cell>,
    pub upper: Vec<Generator>,
    pub lower: Vec<Generator>,
    /// Cell index of each lower generator's source.
    pub lower_cell: Vec<usize>,
    pub pieces: Vec<Piece>,
}

impl Arrangement {
    fn build(game: &GameSpec, mask: StateMask) -> Self {
        let cells = enumerate_cells_unchecked(game, mask);
        let us = game.u_sender();

        let mut upper: BTreeMap<Belief, Generator> = BTreeMap::new();
        for cell in &cells {
            for x in &cell.vertices {
                let value = cell.tie_set.iter().map(|a| dot(&us[a], x.probs())).max().expect("nonempty");
                keep_best(&mut upper, x, value, cell.tie_set, GeneratorKind::Upper);
            }
        }

        let per_cell: Vec<Vec<(Piece, Vec<Belief>)>> = cells.par_iter().map(|cell| pieces_of(game, cell)).collect();
        let mut lower: BTreeMap<Belief, (Generator, usize)> = BTreeMap::new();
        let mut pieces = Vec::new();
        for (ci, list) in per_cell.into_iter().enumerate() {
            for (piece, verts) in list {
                for x in &verts {
                    let value = dot(&us[piece.action], x.probs());
                    let better = lower.get(x).map_or(true, |(g, _)| value > g.value);
                    if better {
                        let g = Generator {
                            point: x.clone(),
                            value,
                            source_tie_set: piece.tie_set,
                            kind: GeneratorKind::Lower,
                        };
                        lower.insert(x.clone(), (g, ci));
                    }
                }
                pieces.push(piece);
            }
        }
        let (lower, lower_cell) = lower.into_values().unzip();
        Arrangement {
            cells,
            upper: upper.into_values().collect(),
            lower,
            lower_cell,
            pieces,
        }
    }
}

fn keep_best(map: &mut BTreeMap<Belief, Generator>, x: &Belief, value: Rational, s: ActionSet, kind: GeneratorKind) {
    if map.get(x).map_or(true, |g| value > g.value) {
        map.insert(
            x.clone(),
            Generator {
                point: x.clone(),
                value,
                source_tie_set: s,
                kind,
            },
        );
    }
}

/// Splits a cell by which tied action minimizes the sender's payoff. Actions
/// with identical sender rows share a piece.
fn pieces_of(game: &GameSpec, cell: &Cell) -> Vec<(Piece, Vec<Belief>)> {
    let us = game.u_sender();
    let mut reps: Vec<usize> = Vec::new();
    for a in cell.tie_set.iter() {
        if !reps.iter().any(|&r| us[r] == us[a]) {
            reps.push(a);
        }
    }
    let base = cell.halfspaces(game);
    if reps.len() == 1 {
        let piece = Piece {
            tie_set: cell.tie_set,
            action: reps[0],
            halfspaces: base,
        };
        return vec![(piece, cell.vertices.clone())];
    }
    reps.iter()
        .filter_map(|&a| {
            let mut h = base.clone();
            for &b in reps.iter().filter(|&&b| b != a) {
                h.ge(sender_gap(game, b, a), Rational::zero());
            }
            let verts: Vec<Belief> = h.vertices().into_iter().map(Belief::from_probs_unchecked).collect();
            (!verts.is_empty()).then(|| {
                (
                    Piece {
                        tie_set: cell.tie_set,
                        action: a,
                        halfspaces: h,
                    },
                    verts,
                )
            })
        })
        .collect()
}

/// Solution of the lower concavification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerEnvelope {
    #[serde(with = "serde_exact")]
    pub value: Rational,
    /// Exactly optimal when `attained`; otherwise within `epsilon` of `value`
    /// under adversarial tie-breaking.
    pub policy: InformationPolicy,
    pub attained: bool,
    #[serde(with = "serde_exact")]
    pub epsilon: Rational,
    #[serde(with = "serde_exact::option")]
    pub delta: Option<Rational>,
}

/// The sender's equilibrium payoff set `[ŵ(μ₀), v̂(μ₀)]` with witnesses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PayoffInterval {
    #[serde(with = "serde_exact")]
    pub lo: Rational,
    #[serde(with = "serde_exact")]
    pub hi: Rational,
    pub lo_attained: bool,
    #[serde(with = "serde_exact")]
    pub lo_epsilon: Rational,
    #[serde(with = "serde_exact::option")]
    pub lo_delta: Option<Rational>,
    pub lo_witness: InformationPolicy,
    pub hi_witness: InformationPolicy,
}

impl PayoffInterval {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, s: &Rational) -> bool {
        &self.lo <= s && s <= &self.hi
    }
}

/// Envelope computations for one game, caching the cell arrangement of every
/// face of the simplex that has been visited.
pub struct Engine<'g> {
    game: &'g GameSpec,
    cache: Vec<OnceLock<Arrangement>>,
}

impl<'g> Engine<'g> {
    pub fn new(game: &'g GameSpec) -> Result<Self> {
        game.check_desk_scale()?;
        Ok(Engine {
            game,
            cache: (0..1usize << game.num_states()).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn game(&self) -> &'g GameSpec {
        self.game
    }

    pub(crate) fn arrangement(&self, mask: StateMask) -> &Arrangement {
        self.cache[mask.0 as usize].get_or_init(|| Arrangement::build(self.game, mask))
    }

    /// Cells of the arrangement on `Δ(mask)`.
    pub fn cells(&self, mask: StateMask) -> Result<&[Cell]> {
        check_mask(self.game, mask)?;
        Ok(&self.arrangement(mask).cells)
    }

    pub fn generators(&self, mask: StateMask, kind: GeneratorKind) -> Result<&[Generator]> {
        check_mask(self.game, mask)?;
        let arr = self.arrangement(mask);
        Ok(match kind {
            GeneratorKind::Upper => &arr.upper,
            GeneratorKind::Lower => &arr.lower,
        })
    }

    fn check_prior(&self, prior: &Belief) -> Result<StateMask> {
        self.game.check_belief("prior", prior)?;
        Ok(prior.support())
    }

    /// `v̂(prior)` and an optimal policy with affinely independent support.
    pub fn cav_upper(&self, prior: &Belief) -> Result<(Rational, InformationPolicy)> {
        let mask = self.check_prior(prior)?;
        let gens = &self.arrangement(mask).upper;
        let (value, used) = generator_program(gens, prior, mask);
        let policy = policy_from(gens, &used);
        let values: Vec<Rational> = policy.beliefs().map(|b| value_upper(self.game, b)).collect();
        let policy = reduce_support(&policy, &values)?;
        let achieved = evaluate_policy(self.game, &policy, &TieRule::Favorable)?;
        if achieved != value {
            return Err(Error::Internal(format!(
                "upper policy achieves {achieved}, envelope program reports {value}"
            )));
        }
        Ok((value, policy))
    }

    pub fn cav_upper_value(&self, prior: &Belief) -> Result<Rational> {
        let mask = self.check_prior(prior)?;
        Ok(generator_program(&self.arrangement(mask).upper, prior, mask).0)
    }

    pub fn cav_lower_value(&self, prior: &Belief) -> Result<Rational> {
        let mask = self.check_prior(prior)?;
        Ok(generator_program(&self.arrangement(mask).lower, prior, mask).0)
    }

    pub fn cav_lower(&self, prior: &Belief) -> Result<LowerEnvelope> {
        self.cav_lower_with_delta(prior, &default_delta())
    }

    /// `ŵ(prior)`, with an attainment verdict and a witness policy. When the
    /// supremum is not attained the witness pulls the offending support points
    /// a fraction `delta` toward their cells' interior witnesses.
    pub fn cav_lower_with_delta(&self, prior: &Belief, delta: &Rational) -> Result<LowerEnvelope> {
        if !delta.is_positive() || delta >= &Rational::one() {
            return Err(Error::invalid("delta", "must lie strictly between 0 and 1"));
        }
        let mask = self.check_prior(prior)?;
        let arr = self.arrangement(mask);
        let game = self.game;
        let (value, used) = generator_program(&arr.lower, prior, mask);
        let is_exact = |i: usize| value_lower(game, &arr.lower[i].point) == arr.lower[i].value;

        let attained_policy = if used.iter().all(|(i, _)| is_exact(*i)) {
            Some(policy_from(&arr.lower, &used))
        } else {
            let exact: Vec<Generator> = (0..arr.lower.len())
                .filter(|&i| is_exact(i))
                .map(|i| arr.lower[i].clone())
                .collect();
            match try_generator_program(&exact, prior, mask) {
                Some((v2, used2)) if v2 == value => Some(policy_from(&exact, &used2)),
                _ => attained_by_pieces(game, arr, prior, mask, &value)?,
            }
        };

        if let Some(policy) = attained_policy {
            let values: Vec<Rational> = policy.beliefs().map(|b| value_lower(game, b)).collect();
            let policy = reduce_support(&policy, &values)?;
            let achieved = evaluate_policy(game, &policy, &TieRule::Adversarial)?;
            if achieved != value {
                return Err(Error::Internal(format!(
                    "lower policy achieves {achieved}, envelope program reports {value}"
                )));
            }
            return Ok(LowerEnvelope {
                value,
                policy,
                attained: true,
                epsilon: Rational::zero(),
                delta: None,
            });
        }

        let policy = pulled_policy(game, arr, prior, mask, &used, delta)?;
        let achieved = evaluate_policy(game, &policy, &TieRule::Adversarial)?;
        let epsilon = &value - achieved;
        if !epsilon.is_positive() {
            return Err(Error::Internal(format!(
                "supremum {value} reported unattained but a policy reaches it"
            )));
        }
        Ok(LowerEnvelope {
            value,
            policy,
            attained: false,
            epsilon,
            delta: Some(delta.clone()),
        })
    }

    pub fn equilibrium_interval(&self, prior: &Belief) -> Result<PayoffInterval> {
        let (hi, hi_witness) = self.cav_upper(prior)?;
        let lower = self.cav_lower(prior)?;
        if lower.value > hi {
            return Err(Error::Internal(format!("lower envelope {} exceeds upper {}", lower.value, hi)));
        }
        Ok(PayoffInterval {
            lo: lower.value,
            hi,
            lo_attained: lower.attained,
            lo_epsilon: lower.epsilon,
            lo_delta: lower.delta,
            lo_witness: lower.policy,
            hi_witness,
        })
    }
}

/// `max Σ λ_g value_g` subject to `Σ λ_g point_g = prior`, `λ ≥ 0`. Returns
/// the optimum and the positive weights of an optimal basic solution.
fn generator_program(gens: &[Generator], prior: &Belief, mask: StateMask) -> (Rational, Vec<(usize, Rational)>) {
    try_generator_program(gens, prior, mask).expect("generators of a face span it")
}

fn try_generator_program(
    gens: &[Generator],
    prior: &Belief,
    mask: StateMask,
) -> Option<(Rational, Vec<(usize, Rational)>)> {
    let mut lp = LinearProgram::maximize(gens.iter().map(|g| g.value.clone()).collect());
    for theta in mask.iter() {
        lp.constrain(
            gens.iter().map(|g| g.point.probs()[theta].clone()).collect(),
            Relation::Eq,
            prior.probs()[theta].clone(),
        );
    }
    match solve_lp(&lp) {
        LpSolution::Optimal { value, point, .. } => {
            let used = point
                .into_iter()
                .enumerate()
                .filter(|(_, l)| l.is_positive())
                .collect();
            Some((value, used))
        }
        LpSolution::Infeasible { .. } => None,
        LpSolution::Unbounded { .. } => unreachable!("weights are bounded by the prior"),
    }
}

fn policy_from(gens: &[Generator], used: &[(usize, Rational)]) -> InformationPolicy {
    InformationPolicy::new(used.iter().map(|(i, l)| (gens[*i].point.clone(), l.clone())).collect())
        .expect("optimal weights form a policy")
}

/// Decides whether some genuine policy reaches `target` by searching the
/// optimal face of the homogenized piece program for a solution in which every
/// used piece sits strictly inside its tie region. Returns such a policy.
fn attained_by_pieces(
    game: &GameSpec,
    arr: &Arrangement,
    prior: &Belief,
    mask: StateMask,
    target: &Rational,
) -> Result<Option<InformationPolicy>> {
    let prog = PieceProgram::new(game, arr, prior, mask);
    let mut excluded = vec![false; prog.pieces.len()];
    loop {
        let (best, _) = prog.solve(&excluded);
        if &best < target {
            return Ok(None);
        }
        if &best > target {
            return Err(Error::Internal(format!(
                "piece program exceeds the generator program ({best} > {target})"
            )));
        }
        let (positive, solutions) = prog.classify(&excluded, target);
        let mut bad = false;
        for p in 0..prog.pieces.len() {
            if excluded[p] || !positive.contains(&Item::Mass(p)) {
                continue;
            }
            if prog.outside[p].iter().enumerate().any(|(k, _)| !positive.contains(&Item::Slack(p, k))) {
                excluded[p] = true;
                bad = true;
            }
        }
        if bad {
            continue;
        }
        let count = Rational::from_integer((solutions.len() as i64).into());
        let mut avg = vec![Rational::zero(); prog.block * prog.pieces.len()];
        for sol in &solutions {
            for (a, x) in avg.iter_mut().zip(sol) {
                *a += x / &count;
            }
        }
        let mut support = Vec::new();
        for p in 0..prog.pieces.len() {
            let y = &avg[p * prog.block..(p + 1) * prog.block];
            let mass: Rational = y.iter().sum();
            if mass.is_positive() {
                let mut probs = vec![Rational::zero(); game.num_states()];
                for (j, &t) in prog.states.iter().enumerate() {
                    probs[t] = &y[j] / &mass;
                }
                let point = Belief::from_probs_unchecked(probs);
                let piece = &prog.pieces[p];
                if value_lower(game, &point) != dot(&game.u_sender()[piece.action], point.probs()) {
                    return Err(Error::Internal("averaged piece point left its tie region".into()));
                }
                support.push((point, mass));
            }
        }
        return InformationPolicy::new(support).map(Some);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Item {
    Mass(usize),
    Slack(usize, usize),
}

struct PieceProgram<'a> {
    pieces: &'a [Piece],
    states: Vec<usize>,
    block: usize,
    /// Per piece, the restricted advantage rows over actions outside its tie set.
    outside: Vec<Vec<Vec<Rational>>>,
    base: LinearProgram,
}

impl<'a> PieceProgram<'a> {
    fn new(game: &GameSpec, arr: &'a Arrangement, prior: &Belief, mask: StateMask) -> Self {
        let states: Vec<usize> = mask.iter().filter(|&t| t < game.num_states()).collect();
        let block = states.len();
        let pieces = &arr.pieces;
        let nvars = block * pieces.len();
        let restrict = |row: &[Rational], shift: &Rational| -> Vec<Rational> {
            states.iter().map(|&t| &row[t] - shift).collect()
        };
        let place = |p: usize, local: Vec<Rational>| -> Vec<Rational> {
            let mut row = vec![Rational::zero(); nvars];
            for (j, x) in local.into_iter().enumerate() {
                row[p * block + j] = x;
            }
            row
        };
        let mut objective = vec![Rational::zero(); nvars];
        let mut base_rows = Vec::new();
        let mut outside = Vec::new();
        for (p, piece) in pieces.iter().enumerate() {
            for (j, &t) in states.iter().enumerate() {
                objective[p * block + j] = game.u_sender()[piece.action][t].clone();
            }
            // homogenize a·μ (rel) b into (a − b·1)·y (rel) 0
            for (a, b) in &piece.halfspaces.eqs {
                let local = restrict(a, b);
                if local.iter().any(|x| !x.is_zero()) {
                    base_rows.push((place(p, local), Relation::Eq));
                }
            }
            for (a, b) in &piece.halfspaces.ineqs {
                let local = restrict(a, b);
                if local.iter().any(|x| !x.is_zero()) {
                    base_rows.push((place(p, local), Relation::Ge));
                }
            }
            let a0 = piece.tie_set.first().expect("nonempty");
            outside.push(
                (0..game.num_actions())
                    .filter(|&b| !piece.tie_set.contains(b))
                    .map(|b| restrict(&receiver_gap(game, a0, b), &Rational::zero()))
                    .collect(),
            );
        }
        let mut base = LinearProgram::maximize(objective);
        for (row, rel) in base_rows {
            base.constrain(row, rel, Rational::zero());
        }
        for (j, &t) in states.iter().enumerate() {
            let mut row = vec![Rational::zero(); nvars];
            for p in 0..pieces.len() {
                row[p * block + j] = Rational::one();
            }
            base.constrain(row, Relation::Eq, prior.probs()[t].clone());
        }
        PieceProgram {
            pieces,
            states,
            block,
            outside,
            base,
        }
    }

    fn nvars(&self) -> usize {
        self.block * self.pieces.len()
    }

    fn with_exclusions(&self, excluded: &[bool], extra: usize) -> LinearProgram {
        let mut lp = self.base.clone();
        lp.objective.extend(std::iter::repeat(Rational::zero()).take(extra));
        for c in lp.constraints.iter_mut() {
            c.coeffs.extend(std::iter::repeat(Rational::zero()).take(extra));
        }
        lp.bounds.extend(std::iter::repeat(crate::lp::Bounds::nonnegative()).take(extra));
        for (p, &ex) in excluded.iter().enumerate() {
            if ex {
                for j in 0..self.block {
                    lp.set_bounds(p * self.block + j, Some(Rational::zero()), Some(Rational::zero()));
                }
            }
        }
        lp
    }

    fn solve(&self, excluded: &[bool]) -> (Rational, Vec<Rational>) {
        match solve_lp(&self.with_exclusions(excluded, 0)) {
            LpSolution::Optimal { value, point, .. } => (value, point),
            other => panic!("piece program must be solvable, got {other:?}"),
        }
    }

    fn item_row(&self, item: Item) -> Vec<Rational> {
        let mut row = vec![Rational::zero(); self.nvars()];
        match item {
            Item::Mass(p) => {
                for j in 0..self.block {
                    row[p * self.block + j] = Rational::one();
                }
            }
            Item::Slack(p, k) => {
                for (j, x) in self.outside[p][k].iter().enumerate() {
                    row[p * self.block + j] = x.clone();
                }
            }
        }
        row
    }

    /// Items that are positive somewhere on the optimal face, together with
    /// optimal solutions that jointly witness every one of them.
    fn classify(&self, excluded: &[bool], target: &Rational) -> (BTreeSet<Item>, Vec<Vec<Rational>>) {
        let mut open: Vec<Item> = Vec::new();
        for p in (0..self.pieces.len()).filter(|&p| !excluded[p]) {
            open.push(Item::Mass(p));
            open.extend((0..self.outside[p].len()).map(|k| Item::Slack(p, k)));
        }
        let mut positive = BTreeSet::new();
        let mut solutions = Vec::new();
        while !open.is_empty() {
            let n = self.nvars();
            let extra = open.len();
            let mut lp = self.with_exclusions(excluded, extra);
            let mut face = self.base.objective.clone();
            face.extend(std::iter::repeat(Rational::zero()).take(extra));
            lp.constrain(face, Relation::Ge, target.clone());
            for (k, &item) in open.iter().enumerate() {
                let mut row: Vec<Rational> = self.item_row(item).into_iter().map(|x| -x).collect();
                row.extend(std::iter::repeat(Rational::zero()).take(extra));
                row[n + k] = Rational::one();
                lp.constrain(row, Relation::Le, Rational::zero());
                lp.set_bounds(n + k, Some(Rational::zero()), Some(Rational::one()));
            }
            for c in lp.objective.iter_mut().take(n) {
                *c = Rational::zero();
            }
            for c in lp.objective.iter_mut().skip(n) {
                *c = Rational::one();
            }
            let LpSolution::Optimal { value, point, .. } = solve_lp(&lp) else {
                panic!("the optimal face is nonempty")
            };
            if value.is_zero() {
                break;
            }
            let newly: Vec<Item> = open
                .iter()
                .enumerate()
                .filter(|(k, _)| point[n + k].is_positive())
                .map(|(_, &it)| it)
                .collect();
            positive.extend(newly.iter().copied());
            open.retain(|it| !newly.contains(it));
            solutions.push(point[..n].to_vec());
        }
        if solutions.is_empty() {
            solutions.push(self.solve(excluded).1);
        }
        (positive, solutions)
    }
}

/// ε-optimal lower witness: offending support points move a fraction `delta`
/// toward their cells' interior witnesses, and one compensating belief restores
/// the barycenter.
fn pulled_policy(
    game: &GameSpec,
    arr: &Arrangement,
    prior: &Belief,
    mask: StateMask,
    used: &[(usize, Rational)],
    delta: &Rational,
) -> Result<InformationPolicy> {
    let n = game.num_states();
    let mut atoms: Vec<(Belief, Rational)> = Vec::new();
    let mut drift = vec![Rational::zero(); n];
    for (i, lambda) in used {
        let g = &arr.lower[*i];
        if value_lower(game, &g.point) == g.value {
            atoms.push((g.point.clone(), lambda.clone()));
            continue;
        }
        let c = &arr.cells[arr.lower_cell[*i]].interior_witness;
        for t in 0..n {
            drift[t] += lambda * (&c.probs()[t] - &g.point.probs()[t]);
        }
        atoms.push((g.point.mix(c, delta), lambda.clone()));
    }
    let scale = mask
        .iter()
        .filter(|&t| drift[t].is_positive())
        .map(|t| &drift[t] / &prior.probs()[t])
        .max();
    if let Some(k) = scale {
        let dk = delta * &k;
        let eta = &dk / (Rational::one() + &dk);
        let keep = Rational::one() - &eta;
        for (_, w) in atoms.iter_mut() {
            *w *= &keep;
        }
        let r: Vec<Rational> = (0..n).map(|t| &prior.probs()[t] - &drift[t] / &k).collect();
        atoms.push((Belief::new(r)?, eta));
    }
    let policy = InformationPolicy::new(atoms)?;
    if policy.barycenter() != prior {
        return Err(Error::Internal("pulled witness lost Bayes plausibility".into()));
    }
    Ok(policy)
}

fn with_engine<T>(game: &GameSpec, f: impl FnOnce(&Engine) -> Result<T>) -> Result<T> {
    f(&Engine::new(game)?)
}

/// `v̂(prior)` and an optimal policy.
pub fn cav_upper(game: &GameSpec, prior: &Belief) -> Result<(Rational, InformationPolicy)> {
    with_engine(game, |e| e.cav_upper(prior))
}

/// `ŵ(prior)` with attainment metadata.
pub fn cav_lower(game: &GameSpec, prior: &Belief) -> Result<LowerEnvelope> {
    with_engine(game, |e| e.cav_lower(prior))
}

pub fn equilibrium_interval(game: &GameSpec, prior: &Belief) -> Result<PayoffInterval> {
    with_engine(game, |e| e.equilibrium_interval(prior))
}

/// `v̂(prior)` from the recommendation program: variables `x(a,θ) ≥ 0` with
/// `Σ_a x(a,θ) = prior(θ)` and obedience `Σ_θ x(a,θ)(u_R(a,θ) − u_R(a',θ)) ≥ 0`.
pub fn cav_upper_obedience(game: &GameSpec, prior: &Belief) -> Result<Rational> {
    game.check_belief("prior", prior)?;
    let (na, ns) = (game.num_actions(), game.num_states());
    let idx = |a: usize, t: usize| a * ns + t;
    let mut objective = vec![Rational::zero(); na * ns];
    for a in 0..na {
        for t in 0..ns {
            objective[idx(a, t)] = game.u_sender()[a][t].clone();
        }
    }
    let mut lp = LinearProgram::maximize(objective);
    for t in 0..ns {
        let mut row = vec![Rational::zero(); na * ns];
        for a in 0..na {
            row[idx(a, t)] = Rational::one();
        }
        lp.constrain(row, Relation::Eq, prior.probs()[t].clone());
    }
    for a in 0..na {
        for b in (0..na).filter(|&b| b != a) {
            let gap = receiver_gap(game, a, b);
            let mut row = vec![Rational::zero(); na * ns];
            for t in 0..ns {
                row[idx(a, t)] = gap[t].clone();
            }
            if row.iter().any(|x| !x.is_zero()) {
                lp.constrain(row, Relation::Ge, Rational::zero());
            }
        }
    }
    match solve_lp(&lp) {
        LpSolution::Optimal { value, .. } => Ok(value),
        other => Err(Error::Internal(format!("obedience program not optimal: {other:?}"))),
    }
}

/// Best favorable payoff from policies supported on `beliefs`, or `None` when
/// the prior is not in their convex hull.
pub fn cav_restricted(game: &GameSpec, prior: &Belief, beliefs: &[Belief]) -> Result<Option<Rational>> {
    game.check_belief("prior", prior)?;
    if beliefs.is_empty() {
        return Err(Error::invalid("D", "must contain at least one belief"));
    }
    for (i, b) in beliefs.iter().enumerate() {
        game.check_belief(&format!("D[{i}]"), b)?;
    }
    let mut lp = LinearProgram::maximize(beliefs.iter().map(|b| value_upper(game, b)).collect());
    for t in 0..game.num_states() {
        lp.constrain(
            beliefs.iter().map(|b| b.probs()[t].clone()).collect(),
            Relation::Eq,
            prior.probs()[t].clone(),
        );
    }
    Ok(match solve_lp(&lp) {
        LpSolution::Optimal { value, .. } => Some(value),
        LpSolution::Infeasible { .. } => None,
        LpSolution::Unbounded { .. } => unreachable!("weights are bounded by the prior"),
    })
}

/// Whether policies supported on `beliefs` reach `v̂(prior)`.
pub fn check_persuasion_sufficient(game: &GameSpec, prior: &Belief, beliefs: &[Belief]) -> Result<bool> {
    let restricted = cav_restricted(game, prior, beliefs)?;
    let (full, _) = cav_upper(game, prior)?;
    Ok(restricted == Some(full))
}
