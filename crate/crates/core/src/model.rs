//! Finite persuasion games, beliefs, receiver best responses and the
//! pointwise sender value functions.
//!
//! For a belief `μ` the receiver's best-response set is the exact argmax of
//! `a ↦ Σθ u_R(a,θ) μ(θ)`. The sender's value under favorable tie-breaking is
//! the max of her expected payoff over that set ([`value_upper`]); under
//! adversarial tie-breaking it is the min ([`value_lower`]).

use crate::error::{Error, Result};
use crate::rational::{self, dot, from_json_value, format_rational, serde_exact, Rational};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

/// Largest number of states the exact engine accepts.
pub const MAX_STATES: usize = 5;
/// Largest number of actions the exact engine accepts.
pub const MAX_ACTIONS: usize = 10;

/// Subset of state indices, as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateMask(pub u32);

impl StateMask {
    pub fn full(n: usize) -> Self {
        StateMask(((1u64 << n) - 1) as u32)
    }

    pub fn single(theta: usize) -> Self {
        StateMask(1 << theta)
    }

    pub fn contains(self, theta: usize) -> bool {
        self.0 >> theta & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: StateMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&t| self.contains(t))
    }

    /// All nonempty subsets of `{0, …, n−1}`, in increasing bitmask order.
    pub fn nonempty_subsets(n: usize) -> impl Iterator<Item = StateMask> {
        (1..(1u32 << n)).map(StateMask)
    }
}

impl Serialize for StateMask {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for StateMask {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if v.iter().any(|&t| t >= 32) {
            return Err(serde::de::Error::custom("state index out of range"));
        }
        Ok(StateMask(v.into_iter().fold(0, |acc, t| acc | 1 << t)))
    }
}

/// Subset of action indices, as a bitmask. Ordered by bit pattern, which is
/// the order cells are reported in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionSet(pub u64);

impl ActionSet {
    pub fn empty() -> Self {
        ActionSet(0)
    }

    pub fn single(a: usize) -> Self {
        ActionSet(1 << a)
    }

    pub fn full(n: usize) -> Self {
        ActionSet(if n >= 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        ActionSet(indices.into_iter().fold(0, |acc, a| acc | 1 << a))
    }

    pub fn insert(&mut self, a: usize) {
        self.0 |= 1 << a;
    }

    pub fn contains(self, a: usize) -> bool {
        self.0 >> a & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn intersection(self, other: ActionSet) -> ActionSet {
        ActionSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: ActionSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&a| self.contains(a))
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Display for ActionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|a| a.to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

impl Serialize for ActionSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for ActionSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(ActionSet::from_indices(Vec::<usize>::deserialize(d)?))
    }
}

/// A point of the belief simplex: nonnegative rationals summing exactly to 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Belief {
    #[serde(with = "serde_exact::vec")]
    probs: Vec<Rational>,
}

impl Belief {
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        validate_probability("belief", &probs)?;
        Ok(Belief { probs })
    }

    /// Caller guarantees the simplex invariant.
    pub(crate) fn from_probs_unchecked(probs: Vec<Rational>) -> Self {
        debug_assert!(validate_probability("belief", &probs).is_ok(), "{probs:?}");
        Belief { probs }
    }

    pub fn degenerate(n: usize, theta: usize) -> Self {
        let mut probs = vec![Rational::zero(); n];
        probs[theta] = Rational::one();
        Belief { probs }
    }

    pub fn uniform(n: usize) -> Self {
        Belief {
            probs: vec![rational::ratio(1, n as i64); n],
        }
    }

    /// Two-state belief putting probability `p` on the second state.
    pub fn binary(p: Rational) -> Result<Self> {
        Belief::new(vec![Rational::one() - &p, p])
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn support(&self) -> StateMask {
        StateMask(
            self.probs
                .iter()
                .enumerate()
                .filter(|(_, p)| p.is_positive())
                .fold(0, |acc, (t, _)| acc | 1 << t),
        )
    }

    /// `(1 − t)·self + t·other`.
    pub fn mix(&self, other: &Belief, t: &Rational) -> Belief {
        let s = Rational::one() - t;
        Belief {
            probs: self
                .probs
                .iter()
                .zip(&other.probs)
                .map(|(a, b)| &s * a + t * b)
                .collect(),
        }
    }
}

impl<'de> Deserialize<'de> for Belief {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let probs = serde_exact::vec::deserialize(d)?;
        Belief::new(probs).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Belief {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.probs.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", items.join(", "))
    }
}

fn validate_probability(field: &str, probs: &[Rational]) -> Result<()> {
    if let Some((i, p)) = probs.iter().enumerate().find(|(_, p)| p.is_negative()) {
        return Err(Error::NotProbability {
            field: field.to_string(),
            reason: format!("entry {i} is negative ({p})"),
        });
    }
    let total = rational::sum(probs);
    if !total.is_one() {
        return Err(Error::NotProbability {
            field: field.to_string(),
            reason: format!("entries sum to {total}, not 1"),
        });
    }
    Ok(())
}

/// A state or action label with an optional numeric position on the real line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Label {
    pub label: String,
    pub position: Option<Rational>,
}

impl Label {
    pub fn new(label: impl Into<String>) -> Self {
        Label {
            label: label.into(),
            position: None,
        }
    }

    pub fn at(label: impl Into<String>, position: Rational) -> Self {
        Label {
            label: label.into(),
            position: Some(position),
        }
    }
}

/// A finite persuasion game. Payoff matrices are indexed `[action][state]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GameSpec {
    states: Vec<Label>,
    actions: Vec<Label>,
    prior: Belief,
    u_sender: Vec<Vec<Rational>>,
    u_receiver: Vec<Vec<Rational>>,
}

impl GameSpec {
    pub fn new(
        states: Vec<Label>,
        actions: Vec<Label>,
        prior: Vec<Rational>,
        u_sender: Vec<Vec<Rational>>,
        u_receiver: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if states.len() < 2 {
            return Err(Error::invalid("states", "at least two states are required"));
        }
        if actions.len() < 2 {
            return Err(Error::invalid("actions", "at least two actions are required"));
        }
        if states.len() > 32 {
            return Err(Error::TooLarge(format!("{} states (at most 32 representable)", states.len())));
        }
        if actions.len() > 64 {
            return Err(Error::TooLarge(format!("{} actions (at most 64 representable)", actions.len())));
        }
        check_labels("states", &states)?;
        check_labels("actions", &actions)?;
        let (ns, na) = (states.len(), actions.len());
        if prior.len() != ns {
            return Err(Error::dimension("prior", ns, prior.len()));
        }
        validate_probability("prior", &prior)?;
        for (name, m) in [("u_sender", &u_sender), ("u_receiver", &u_receiver)] {
            if m.len() != na {
                return Err(Error::dimension(name, na, m.len()));
            }
            for (a, row) in m.iter().enumerate() {
                if row.len() != ns {
                    return Err(Error::dimension(format!("{name}[{a}]"), ns, row.len()));
                }
            }
        }
        Ok(GameSpec {
            states,
            actions,
            prior: Belief { probs: prior },
            u_sender,
            u_receiver,
        })
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn states(&self) -> &[Label] {
        &self.states
    }

    pub fn actions(&self) -> &[Label] {
        &self.actions
    }

    pub fn prior(&self) -> &Belief {
        &self.prior
    }

    pub fn u_sender(&self) -> &[Vec<Rational>] {
        &self.u_sender
    }

    pub fn u_receiver(&self) -> &[Vec<Rational>] {
        &self.u_receiver
    }

    /// Same game with a different prior.
    pub fn with_prior(&self, prior: Belief) -> Result<GameSpec> {
        self.check_belief("prior", &prior)?;
        Ok(GameSpec {
            prior,
            ..self.clone()
        })
    }

    /// Same game with a different receiver payoff matrix.
    pub fn with_receiver_payoffs(&self, u_receiver: Vec<Vec<Rational>>) -> Result<GameSpec> {
        GameSpec::new(
            self.states.clone(),
            self.actions.clone(),
            self.prior.probs.clone(),
            self.u_sender.clone(),
            u_receiver,
        )
    }

    /// Rejects games beyond the sizes the exact engine is meant for.
    pub fn check_desk_scale(&self) -> Result<()> {
        if self.num_states() > MAX_STATES {
            return Err(Error::TooLarge(format!(
                "{} states (the exact engine handles at most {MAX_STATES})",
                self.num_states()
            )));
        }
        if self.num_actions() > MAX_ACTIONS {
            return Err(Error::TooLarge(format!(
                "{} actions (the exact engine handles at most {MAX_ACTIONS})",
                self.num_actions()
            )));
        }
        Ok(())
    }

    pub fn check_belief(&self, field: &str, mu: &Belief) -> Result<()> {
        if mu.dim() != self.num_states() {
            return Err(Error::dimension(field, self.num_states(), mu.dim()));
        }
        Ok(())
    }

    pub fn receiver_payoff(&self, action: usize, mu: &Belief) -> Rational {
        dot(&self.u_receiver[action], &mu.probs)
    }

    pub fn sender_payoff(&self, action: usize, mu: &Belief) -> Rational {
        dot(&self.u_sender[action], &mu.probs)
    }

    /// True when every row of `u_sender` is constant across states.
    pub fn sender_is_state_independent(&self) -> bool {
        self.u_sender.iter().all(|row| row.iter().all(|x| *x == row[0]))
    }

    pub fn to_document(&self) -> GameDocument {
        let label = |l: &Label| LabelDocument {
            label: l.label.clone(),
            position: l.position.as_ref().map(format_rational),
        };
        let matrix = |m: &[Vec<Rational>]| m.iter().map(|row| row.iter().map(format_rational).collect()).collect();
        GameDocument {
            states: self.states.iter().map(label).collect(),
            actions: self.actions.iter().map(label).collect(),
            prior: self.prior.probs.iter().map(format_rational).collect(),
            u_sender: matrix(&self.u_sender),
            u_receiver: matrix(&self.u_receiver),
        }
    }

    /// Serializes to the game document format (exact `p/q` strings).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("game documents always serialize")
    }
}

fn check_labels(field: &str, labels: &[Label]) -> Result<()> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.label.as_str()) {
            return Err(Error::DuplicateLabel {
                field: field.to_string(),
                label: l.label.clone(),
            });
        }
    }
    let with_pos = labels.iter().filter(|l| l.position.is_some()).count();
    if with_pos > 0 {
        if with_pos < labels.len() {
            return Err(Error::invalid(field, "positions must be given for all entries or none"));
        }
        let mut positions: Vec<&Rational> = labels.iter().filter_map(|l| l.position.as_ref()).collect();
        positions.sort();
        if positions.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(field, "positions must be distinct"));
        }
    }
    Ok(())
}

/// Serialized form of a game.
#[derive(Debug, Clone, Serialize)]
pub struct GameDocument {
    pub states: Vec<LabelDocument>,
    pub actions: Vec<LabelDocument>,
    pub prior: Vec<String>,
    pub u_sender: Vec<Vec<String>>,
    pub u_receiver: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LabelDocument {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<String>,
}

/// Parses and validates a game document.
///
/// ```
/// let game = persuasion::model::load_game(r#"{
///     "states": [{"label": "low"}, {"label": "high"}],
///     "actions": [{"label": "no"}, {"label": "yes"}],
///     "prior": ["0.25", "3/4"],
///     "u_sender": [[0, 0], [1, 1]],
///     "u_receiver": [[0, 0], [-1, 1]]
/// }"#).unwrap();
/// assert_eq!(game.num_states(), 2);
/// ```
pub fn load_game(source: &str) -> Result<GameSpec> {
    let doc: serde_json::Value = serde_json::from_str(source)?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::invalid("document", "expected a JSON object"))?;
    let get = |key: &str| obj.get(key).ok_or_else(|| Error::invalid(key, "missing"));

    let states = parse_labels("states", get("states")?)?;
    let actions = parse_labels("actions", get("actions")?)?;
    let prior = parse_vector("prior", get("prior")?)?;
    let u_sender = parse_matrix("u_sender", get("u_sender")?)?;
    let u_receiver = parse_matrix("u_receiver", get("u_receiver")?)?;
    GameSpec::new(states, actions, prior, u_sender, u_receiver)
}

fn parse_number(field: String, value: &serde_json::Value) -> Result<Rational> {
    from_json_value(value).map_err(|source| Error::Numeral { field, source })
}

fn parse_vector(field: &str, value: &serde_json::Value) -> Result<Vec<Rational>> {
    let arr = value
        .as_array()
        .ok_or_else(|| Error::invalid(field, "expected an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, v)| parse_number(format!("{field}[{i}]"), v))
        .collect()
}

fn parse_matrix(field: &str, value: &serde_json::Value) -> Result<Vec<Vec<Rational>>> {
    let arr = value
        .as_array()
        .ok_or_else(|| Error::invalid(field, "expected an array of rows"))?;
    arr.iter()
        .enumerate()
        .map(|(i, row)| parse_vector(&format!("{field}[{i}]"), row))
        .collect()
}

fn parse_labels(field: &str, value: &serde_json::Value) -> Result<Vec<Label>> {
    let arr = value
        .as_array()
        .ok_or_else(|| Error::invalid(field, "expected an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, entry)| {
            let here = format!("{field}[{i}]");
            match entry {
                serde_json::Value::String(s) => Ok(Label::new(s.clone())),
                serde_json::Value::Object(map) => {
                    let label = map
                        .get("label")
                        .and_then(|l| l.as_str())
                        .ok_or_else(|| Error::invalid(format!("{here}.label"), "missing or not a string"))?;
                    let position = match map.get("position") {
                        None | Some(serde_json::Value::Null) => None,
                        Some(p) => Some(parse_number(format!("{here}.position"), p)?),
                    };
                    Ok(Label {
                        label: label.to_string(),
                        position,
                    })
                }
                _ => Err(Error::invalid(here, "expected a label object")),
            }
        })
        .collect()
}

/// Exact receiver argmax at `mu`. Never empty.
pub fn best_responses(game: &GameSpec, mu: &Belief) -> ActionSet {
    assert_eq!(mu.dim(), game.num_states(), "belief dimension");
    let payoffs: Vec<Rational> = (0..game.num_actions()).map(|a| game.receiver_payoff(a, mu)).collect();
    let best = payoffs.iter().max().expect("at least two actions");
    ActionSet::from_indices(payoffs.iter().enumerate().filter(|(_, p)| *p == best).map(|(a, _)| a))
}

fn sender_extreme(game: &GameSpec, mu: &Belief, upper: bool) -> Rational {
    let values = best_responses(game, mu).iter().map(|a| game.sender_payoff(a, mu));
    if upper {
        values.max()
    } else {
        values.min()
    }
    .expect("best responses are nonempty")
}

/// Sender value under favorable tie-breaking, `v(μ)`.
pub fn value_upper(game: &GameSpec, mu: &Belief) -> Rational {
    sender_extreme(game, mu, true)
}

/// Sender value under adversarial tie-breaking, `w(μ)`.
pub fn value_lower(game: &GameSpec, mu: &Belief) -> Rational {
    sender_extreme(game, mu, false)
}

/// The value correspondence `[w(μ), v(μ)]` at one belief.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueInterval {
    #[serde(with = "serde_exact")]
    pub lo: Rational,
    #[serde(with = "serde_exact")]
    pub hi: Rational,
}

impl ValueInterval {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

pub fn value_interval(game: &GameSpec, mu: &Belief) -> ValueInterval {
    let payoffs: Vec<Rational> = best_responses(game, mu).iter().map(|a| game.sender_payoff(a, mu)).collect();
    ValueInterval {
        lo: payoffs.iter().min().cloned().expect("nonempty"),
        hi: payoffs.iter().max().cloned().expect("nonempty"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn guilty(p: Rational) -> Belief {
        Belief::binary(p).unwrap()
    }

    #[test]
    fn judge_document_loads() {
        let game = load_game(games::JUDGE_JSON).unwrap();
        assert_eq!(game.num_states(), 2);
        assert_eq!(game.num_actions(), 3);
        assert_eq!(game.prior().probs(), &[ratio(3, 4), ratio(1, 4)]);
    }

    #[test]
    fn prior_must_sum_to_one() {
        let text = games::JUDGE_JSON.replace(r#""prior": ["3/4", "0.25"]"#, r#""prior": ["1/2", "1/3"]"#);
        let err = load_game(&text).unwrap_err();
        assert!(matches!(err, Error::NotProbability { ref field, .. } if field == "prior"), "{err}");
        assert!(err.to_string().contains("5/6"));
    }

    #[test]
    fn decimal_prior_is_exact() {
        let game = load_game(games::JUDGE_JSON).unwrap();
        assert_eq!(game.prior().probs()[1], ratio(1, 4));
    }

    #[test]
    fn validation_names_offending_field() {
        let bad = games::JUDGE_JSON.replace(r#"["1", "0"]"#, r#"["1", "x"]"#);
        match load_game(&bad).unwrap_err() {
            Error::Numeral { field, .. } => assert_eq!(field, "u_receiver[1][1]"),
            e => panic!("unexpected {e}"),
        }
        let bad = games::JUDGE_JSON.replace(r#"["-1", "-1"]"#, r#"["-1"]"#);
        match load_game(&bad).unwrap_err() {
            Error::Dimension { field, .. } => assert_eq!(field, "u_sender[0]"),
            e => panic!("unexpected {e}"),
        }
        let bad = games::JUDGE_JSON.replace(r#""label": "life""#, r#""label": "death""#);
        assert!(matches!(load_game(&bad).unwrap_err(), Error::DuplicateLabel { .. }));
    }

    #[test]
    fn judge_best_responses() {
        let game = games::judge();
        assert_eq!(best_responses(&game, &guilty(ratio(1, 4))), ActionSet::single(1));
        assert_eq!(best_responses(&game, &guilty(ratio(1, 2))), ActionSet::full(3));
    }

    #[test]
    fn judge_values() {
        let game = games::judge();
        assert_eq!(value_upper(&game, &guilty(ratio(1, 2))), int(1));
        assert_eq!(value_upper(&game, &guilty(ratio(1, 4))), int(0));
        assert_eq!(value_lower(&game, &guilty(ratio(1, 2))), int(-1));
        assert_eq!(value_lower(&game, &guilty(int(0))), int(0));
        assert_eq!(
            value_interval(&game, &guilty(ratio(1, 2))),
            ValueInterval { lo: int(-1), hi: int(1) }
        );
        assert_eq!(
            value_interval(&game, &guilty(ratio(1, 4))),
            ValueInterval { lo: int(0), hi: int(0) }
        );
    }

    #[test]
    fn footnote_lower_value_at_zero() {
        let game = games::footnote();
        assert_eq!(value_lower(&game, &Belief::degenerate(2, 0)), int(-1));
        assert_eq!(value_upper(&game, &Belief::degenerate(2, 0)), int(0));
    }

    #[test]
    fn degenerate_beliefs_use_column_argmax() {
        for game in [games::judge(), games::footnote(), games::quadratic_loss()] {
            for theta in 0..game.num_states() {
                let col: Vec<&Rational> = game.u_receiver().iter().map(|row| &row[theta]).collect();
                let best = col.iter().max().unwrap();
                let expected = ActionSet::from_indices((0..col.len()).filter(|&a| col[a] == *best));
                assert_eq!(best_responses(&game, &Belief::degenerate(game.num_states(), theta)), expected);
            }
        }
    }

    #[test]
    fn document_round_trip() {
        let game = games::judge();
        assert_eq!(load_game(&game.to_json()).unwrap(), game);
    }

    fn belief3() -> impl Strategy<Value = Belief> {
        proptest::collection::vec(0i64..50, 3)
            .prop_filter("nonzero", |w| w.iter().sum::<i64>() > 0)
            .prop_map(|w| {
                let t: i64 = w.iter().sum();
                Belief::new(w.iter().map(|&x| ratio(x, t)).collect()).unwrap()
            })
    }

    proptest! {
        #[test]
        fn lower_never_exceeds_upper(mu in belief3()) {
            let game = games::quadratic_loss();
            prop_assert!(value_lower(&game, &mu) <= value_upper(&game, &mu));
            prop_assert!(!best_responses(&game, &mu).is_empty());
        }

        #[test]
        fn best_responses_invariant_under_positive_scaling(mu in belief3(), num in 1i64..20, den in 1i64..20) {
            let game = games::quadratic_loss();
            let k = ratio(num, den);
            let scaled: Vec<Vec<Rational>> = game.u_receiver().iter()
                .map(|row| row.iter().map(|x| x * &k).collect()).collect();
            let other = game.with_receiver_payoffs(scaled).unwrap();
            prop_assert_eq!(best_responses(&game, &mu), best_responses(&other, &mu));
        }

        #[test]
        fn upper_value_is_convex_on_tie_regions(a in belief3(), b in belief3()) {
            // on a fixed tie set v is the max of the tied sender payoffs
            let game = games::quadratic_loss();
            let s = best_responses(&game, &a);
            let mid = a.mix(&b, &ratio(1, 2));
            if best_responses(&game, &b) == s && best_responses(&game, &mid) == s {
                let piece = |m: &Belief| s.iter().map(|x| game.sender_payoff(x, m)).max().unwrap();
                prop_assert_eq!(value_upper(&game, &mid), piece(&mid));
                prop_assert!(piece(&mid) * int(2) <= piece(&a) + piece(&b));
            }
        }
    }
}
