//! Envelope values restricted to policies supported on the grid
//! `{k/n : k ∈ ℕ^Θ, Σk = n}`, solved by a small revised simplex of its own so
//! that it shares nothing with the engine beyond the game itself.

use crate::error::{Error, Result};
use crate::linalg::solve_unique;
use crate::model::{Belief, GameSpec};
use crate::rational::{serde_exact, to_f64, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

/// Refuse grids with more points than this.
pub const MAX_GRID_POINTS: u128 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub n: usize,
    pub dim: usize,
}

impl GridSpec {
    pub fn new(n: usize, dim: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("n", "grid resolution must be at least 2"));
        }
        if dim < 1 {
            return Err(Error::invalid("dim", "must be positive"));
        }
        let spec = GridSpec { n, dim };
        let count = spec.num_points();
        if count > MAX_GRID_POINTS {
            return Err(Error::TooLarge(format!(
                "grid with {count} points (limit {MAX_GRID_POINTS})"
            )));
        }
        Ok(spec)
    }

    /// `C(n + dim − 1, dim − 1)`.
    pub fn num_points(&self) -> u128 {
        let (top, k) = ((self.n + self.dim - 1) as u128, (self.dim - 1) as u128);
        (0..k).fold(1u128, |acc, i| acc * (top - i) / (i + 1))
    }

    /// Integer coordinates `k` of every grid point, in lexicographic order.
    pub fn points(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.dim];
        fill(&mut out, &mut cur, 0, self.n as u32);
        out
    }
}

fn fill(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, i: usize, left: u32) {
    if i + 1 == cur.len() {
        cur[i] = left;
        out.push(cur.clone());
        return;
    }
    for k in 0..=left {
        cur[i] = k;
        fill(out, cur, i + 1, left - k);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvelopeKind {
    Upper,
    Lower,
}

/// Error scale of the grid oracle: `C = 2 · max|u_S| · 2`, the largest change
/// of a sender payoff across the simplex (whose ℓ¹ diameter is 2) counted
/// once for moving support points onto the grid and once for restoring the
/// barycenter. The oracle is compared with tolerance `C/n`.
pub fn lipschitz_constant(game: &GameSpec) -> Rational {
    let max = game
        .u_sender()
        .iter()
        .flatten()
        .map(|x| x.abs())
        .max()
        .unwrap_or_else(Rational::zero);
    max * Rational::from_integer(4.into())
}

/// A payoff matrix scaled to integers by the common denominator of its
/// entries, when that fits in machine words.
struct Scaled {
    rows: Vec<Vec<i64>>,
    denom: BigInt,
}

impl Scaled {
    fn new(m: &[Vec<Rational>]) -> Option<Scaled> {
        let denom = m.iter().flatten().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
        let rows = m
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| (x.numer() * (&denom / x.denom())).to_i64())
                    .collect::<Option<Vec<i64>>>()
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Scaled { rows, denom })
    }

    fn expect(&self, a: usize, k: &[u32]) -> i128 {
        self.rows[a].iter().zip(k).map(|(&u, &w)| u as i128 * w as i128).sum()
    }
}

/// `v` or `w` at `k/n`, computed from exact receiver comparisons.
fn value_at(game: &GameSpec, scaled: Option<&(Scaled, Scaled)>, k: &[u32], n: usize, kind: EnvelopeKind) -> Rational {
    let pick = |vals: &mut dyn Iterator<Item = Rational>| match kind {
        EnvelopeKind::Upper => vals.max(),
        EnvelopeKind::Lower => vals.min(),
    };
    if let Some((r, s)) = scaled {
        let payoffs: Vec<i128> = (0..game.num_actions()).map(|a| r.expect(a, k)).collect();
        let best = *payoffs.iter().max().expect("actions exist");
        let value = (0..game.num_actions())
            .filter(|&a| payoffs[a] == best)
            .map(|a| s.expect(a, k));
        let value = match kind {
            EnvelopeKind::Upper => value.max(),
            EnvelopeKind::Lower => value.min(),
        }
        .expect("nonempty");
        return Rational::new(BigInt::from(value), &s.denom * BigInt::from(n));
    }
    let weights: Vec<BigInt> = k.iter().map(|&x| BigInt::from(x)).collect();
    let expect = |row: &[Rational]| -> Rational {
        row.iter()
            .zip(&weights)
            .map(|(u, w)| u * Rational::from_integer(w.clone()))
            .sum()
    };
    let payoffs: Vec<Rational> = game.u_receiver().iter().map(|r| expect(r)).collect();
    let best = payoffs.iter().max().expect("actions exist").clone();
    let mut sender = payoffs
        .iter()
        .enumerate()
        .filter(|(_, p)| **p == best)
        .map(|(a, _)| expect(&game.u_sender()[a]));
    pick(&mut sender).expect("nonempty") / Rational::from_integer(BigInt::from(n))
}

/// Optimal value of `max Σ λ_j f_j` subject to `Σ λ_j k_j = n·prior`,
/// `λ ≥ 0`. Pricing uses floating point to pick candidates; every entering
/// column and the final optimality certificate are checked exactly, and a
/// degenerate step switches to Bland's rule for the next pivot.
fn grid_program(points: &[Vec<u32>], values: &[Rational], n: usize, prior: &Belief) -> Rational {
    let dim = prior.dim();
    let nr = Rational::from_integer(BigInt::from(n));
    let rhs: Vec<Rational> = prior.probs().iter().map(|p| p * &nr).collect();
    let col = |j: usize| -> Vec<Rational> { points[j].iter().map(|&x| Rational::from_integer(x.into())).collect() };
    let mut basis: Vec<usize> = (0..dim)
        .map(|t| {
            points
                .iter()
                .position(|k| k[t] as usize == n)
                .expect("grid contains the vertices")
        })
        .collect();
    let fvals: Vec<f64> = values.iter().map(to_f64).collect();
    let mut bland = false;
    loop {
        let b_rows: Vec<Vec<Rational>> = (0..dim).map(|t| basis.iter().map(|&j| col(j)[t].clone()).collect()).collect();
        let bt_rows: Vec<Vec<Rational>> = basis.iter().map(|&j| col(j)).collect();
        let lambda = solve_unique(&b_rows, &rhs).expect("basis is nonsingular");
        let y = solve_unique(&bt_rows, &basis.iter().map(|&j| values[j].clone()).collect::<Vec<_>>())
            .expect("basis is nonsingular");
        let reduced = |j: usize| -> Rational {
            let mut r = values[j].clone();
            for (t, &k) in points[j].iter().enumerate() {
                if k != 0 {
                    r -= &y[t] * Rational::from_integer(k.into());
                }
            }
            r
        };
        let entering = if bland {
            (0..points.len()).find(|&j| reduced(j).is_positive())
        } else {
            let yf: Vec<f64> = y.iter().map(to_f64).collect();
            let scale = 1.0 + fvals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let (best, score) = (0..points.len())
                .into_par_iter()
                .map(|j| {
                    let r = fvals[j] - points[j].iter().zip(&yf).map(|(&k, yt)| k as f64 * yt).sum::<f64>();
                    (j, r)
                })
                .reduce(|| (usize::MAX, f64::NEG_INFINITY), |a, b| if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a });
            if score > 1e-9 * scale && reduced(best).is_positive() {
                Some(best)
            } else {
                (0..points.len())
                    .into_par_iter()
                    .find_first(|&j| reduced(j).is_positive())
            }
        };
        let Some(j) = entering else {
            return basis.iter().zip(&lambda).map(|(&b, l)| &values[b] * l).sum();
        };
        let dir = solve_unique(&b_rows, &col(j)).expect("basis is nonsingular");
        let leave = (0..dim)
            .filter(|&i| dir[i].is_positive())
            .map(|i| (&lambda[i] / &dir[i], basis[i], i))
            .min()
            .map(|(step, _, i)| (step, i))
            .expect("columns are nonnegative with positive sum, so the program is bounded");
        bland = leave.0.is_zero();
        basis[leave.1] = j;
    }
}

/// Grid approximation of `v̂(prior)` or `ŵ(prior)` at resolution `n`. Both are
/// lower bounds on the exact envelope.
pub fn grid_cav(game: &GameSpec, prior: &Belief, n: usize, kind: EnvelopeKind) -> Result<Rational> {
    game.check_belief("prior", prior)?;
    let spec = GridSpec::new(n, game.num_states())?;
    let points = spec.points();
    let scaled = Scaled::new(game.u_receiver()).zip(Scaled::new(game.u_sender()));
    let values: Vec<Rational> = points
        .par_iter()
        .map(|k| value_at(game, scaled.as_ref(), k, n, kind))
        .collect();
    Ok(grid_program(&points, &values, n, prior))
}

/// Oracle estimate of the equilibrium payoff interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApproxInterval {
    #[serde(with = "serde_exact")]
    pub lo: Rational,
    #[serde(with = "serde_exact")]
    pub hi: Rational,
    /// `C/n`: each end is below the exact one by at most this much.
    #[serde(with = "serde_exact")]
    pub tolerance: Rational,
    pub n: usize,
}

pub fn brute_force_interval(game: &GameSpec, prior: &Belief, n: usize) -> Result<ApproxInterval> {
    Ok(ApproxInterval {
        lo: grid_cav(game, prior, n, EnvelopeKind::Lower)?,
        hi: grid_cav(game, prior, n, EnvelopeKind::Upper)?,
        tolerance: lipschitz_constant(game) / Rational::from_integer(BigInt::from(n)),
        n,
    })
}
