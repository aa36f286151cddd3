//! Brute-force vertex enumeration: every basis of tight constraints is solved
//! exactly and kept when feasible. Cost grows like `C(m, d)` for `m`
//! inequalities in dimension `d`, which is fine for the desk-scale games this
//! crate targets (at most five states).

use crate::error::{Error, Result};
use crate::linalg::{rank, solve_unique};
use crate::lp::{LinearProgram, Relation};
use crate::model::Belief;
use crate::rational::{dot, Rational};
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// Upper limit on the number of constraint subsets tried by [`polytope_vertices`].
pub const MAX_BASES: u128 = 2_000_000;

/// A polyhedron `{x : E x = e, G x ≥ g}`.
#[derive(Debug, Clone, Default)]
pub(crate) struct Halfspaces {
    pub dim: usize,
    pub eqs: Vec<(Vec<Rational>, Rational)>,
    pub ineqs: Vec<(Vec<Rational>, Rational)>,
}

impl Halfspaces {
    pub fn new(dim: usize) -> Self {
        Halfspaces {
            dim,
            ..Default::default()
        }
    }

    pub fn eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.eqs.push((coeffs, rhs));
    }

    pub fn ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.ineqs.push((coeffs, rhs));
    }

    fn basis_count(&self) -> (usize, u128) {
        let eq_rows: Vec<Vec<Rational>> = self.eqs.iter().map(|(a, _)| a.clone()).collect();
        let k = self.dim.saturating_sub(rank(&eq_rows));
        (k, binomial(self.ineqs.len(), k))
    }

    /// All vertices in lexicographic order.
    pub fn vertices(&self) -> Vec<Vec<Rational>> {
        let (k, _) = self.basis_count();
        let mut found = BTreeSet::new();
        if k > self.ineqs.len() {
            return Vec::new();
        }
        let mut chosen = Vec::with_capacity(k);
        self.search(0, k, &mut chosen, &mut found);
        found.into_iter().collect()
    }

    fn search(&self, start: usize, k: usize, chosen: &mut Vec<usize>, found: &mut BTreeSet<Vec<Rational>>) {
        if chosen.len() == k {
            let mut rows: Vec<Vec<Rational>> = self.eqs.iter().map(|(a, _)| a.clone()).collect();
            let mut rhs: Vec<Rational> = self.eqs.iter().map(|(_, b)| b.clone()).collect();
            for &i in chosen.iter() {
                rows.push(self.ineqs[i].0.clone());
                rhs.push(self.ineqs[i].1.clone());
            }
            if rows.is_empty() {
                return;
            }
            if let Some(x) = solve_unique(&rows, &rhs) {
                if self.ineqs.iter().all(|(a, b)| dot(a, &x) >= *b) {
                    found.insert(x);
                }
            }
            return;
        }
        let remaining = k - chosen.len();
        for i in start..=self.ineqs.len() - remaining {
            chosen.push(i);
            self.search(i + 1, k, chosen, found);
            chosen.pop();
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn halfspaces_of(lp: &LinearProgram) -> Result<Halfspaces> {
    lp.validate().map_err(|reason| Error::invalid("linear program", reason))?;
    let n = lp.num_vars();
    let mut h = Halfspaces::new(n);
    for c in &lp.constraints {
        match c.relation {
            Relation::Eq => h.eq(c.coeffs.clone(), c.rhs.clone()),
            Relation::Ge => h.ge(c.coeffs.clone(), c.rhs.clone()),
            Relation::Le => h.ge(c.coeffs.iter().map(|x| -x).collect(), -c.rhs.clone()),
        }
    }
    for (j, b) in lp.bounds.iter().enumerate() {
        let unit = |s: i64| {
            let mut e = vec![Rational::zero(); n];
            e[j] = Rational::from_integer(s.into());
            e
        };
        if let Some(l) = &b.lower {
            h.ge(unit(1), l.clone());
        }
        if let Some(u) = &b.upper {
            h.ge(unit(-1), -u.clone());
        }
    }
    Ok(h)
}

/// Exact vertex set of the feasible region of `lp` (objective ignored).
pub fn polytope_vertices(lp: &LinearProgram) -> Result<Vec<Vec<Rational>>> {
    let h = halfspaces_of(lp)?;
    let (k, bases) = h.basis_count();
    if bases > MAX_BASES {
        return Err(Error::TooLarge(format!(
            "vertex enumeration would try {bases} bases of size {k}"
        )));
    }
    Ok(h.vertices())
}

/// Vertices of a region of the belief simplex, as beliefs.
pub fn cell_vertices(lp: &LinearProgram) -> Result<Vec<Belief>> {
    polytope_vertices(lp)?
        .into_iter()
        .map(|x| {
            let total: Rational = x.iter().sum();
            if !total.is_one() || x.iter().any(|p| p < &Rational::zero()) {
                return Err(Error::Precondition(
                    "region is not contained in the belief simplex".into(),
                ));
            }
            Ok(Belief::from_probs_unchecked(x))
        })
        .collect()
}

/// The probability simplex over `n` states as a feasible region.
pub fn simplex_region(n: usize) -> LinearProgram {
    LinearProgram::maximize(vec![Rational::zero(); n]).with(vec![Rational::one(); n], Relation::Eq, Rational::one())
}
