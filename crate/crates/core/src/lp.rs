//! Exact rational linear programming.
//!
//! [`solve_lp`] runs a dense two-phase primal simplex over [`Rational`] with
//! Bland's smallest-index rule, so it terminates on degenerate problems and
//! never rounds. Every outcome carries a certificate that can be checked
//! independently of the solver:
//!
//! * optimal: row duals `y` with [`LinearProgram::dual_bound`]`(y)` equal to
//!   the optimal value;
//! * infeasible: a Farkas vector accepted by
//!   [`LinearProgram::certifies_infeasibility`];
//! * unbounded: a recession direction with strictly improving objective.
//!
//! Dual sign conventions follow the Lagrangian `c·x + Σ yᵢ (bᵢ − Aᵢ x)`.
//! For maximization `≤` rows carry `y ≥ 0` and `≥` rows `y ≤ 0`; for
//! minimization the signs are reversed. Equality rows are free.

use crate::rational::{dot, Rational};
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Per-variable bounds; `None` means unbounded on that side.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl Bounds {
    pub fn nonnegative() -> Self {
        Bounds {
            lower: Some(Rational::zero()),
            upper: None,
        }
    }

    pub fn free() -> Self {
        Bounds {
            lower: None,
            upper: None,
        }
    }

    pub fn fixed(value: Rational) -> Self {
        Bounds {
            lower: Some(value.clone()),
            upper: Some(value),
        }
    }

    fn contains(&self, x: &Rational) -> bool {
        self.lower.as_ref().map_or(true, |l| x >= l) && self.upper.as_ref().map_or(true, |u| x <= u)
    }

    fn is_empty(&self) -> bool {
        matches!((&self.lower, &self.upper), (Some(l), Some(u)) if l > u)
    }

    /// `sup { d·x : x in bounds }`, `None` when infinite.
    fn sup_linear(&self, d: &Rational) -> Option<Rational> {
        if d.is_zero() {
            Some(Rational::zero())
        } else if d.is_positive() {
            self.upper.as_ref().map(|u| d * u)
        } else {
            self.lower.as_ref().map(|l| d * l)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<Bounds>,
}

impl LinearProgram {
    /// New program over `objective.len()` variables, all bounded below by zero.
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            sense,
            objective,
            constraints: Vec::new(),
            bounds: vec![Bounds::nonnegative(); n],
        }
    }

    pub fn maximize(objective: Vec<Rational>) -> Self {
        Self::new(Sense::Maximize, objective)
    }

    pub fn minimize(objective: Vec<Rational>) -> Self {
        Self::new(Sense::Minimize, objective)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constrain(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> &mut Self {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn with(mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        self.constrain(coeffs, relation, rhs);
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<Rational>, upper: Option<Rational>) -> &mut Self {
        self.bounds[var] = Bounds { lower, upper };
        self
    }

    pub fn validate(&self) -> Result<(), String> {
        let n = self.num_vars();
        if n == 0 {
            return Err("linear program needs at least one variable".into());
        }
        if self.bounds.len() != n {
            return Err(format!("{} bounds for {n} variables", self.bounds.len()));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(format!("constraint {i} has {} coefficients, expected {n}", c.coeffs.len()));
            }
        }
        Ok(())
    }

    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && self.bounds.iter().zip(x).all(|(b, v)| b.contains(v))
            && self.constraints.iter().all(|c| {
                let lhs = dot(&c.coeffs, x);
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                }
            })
    }

    fn dual_sign_ok(&self, y: &[Rational], sense: Sense) -> bool {
        y.len() == self.constraints.len()
            && self.constraints.iter().zip(y).all(|(c, yi)| {
                let flip = sense == Sense::Minimize;
                match (c.relation, flip) {
                    (Relation::Eq, _) => true,
                    (Relation::Le, false) | (Relation::Ge, true) => !yi.is_negative(),
                    (Relation::Ge, false) | (Relation::Le, true) => !yi.is_positive(),
                }
            })
    }

    /// Lagrangian dual bound `b·y + sup/inf over the bounds of (c − Aᵀy)·x`.
    /// Returns `None` when `y` has the wrong signs or the bound is infinite.
    /// By weak duality the result is `≥` (maximize) or `≤` (minimize) every
    /// feasible objective value.
    pub fn dual_bound(&self, y: &[Rational]) -> Option<Rational> {
        if !self.dual_sign_ok(y, self.sense) {
            return None;
        }
        let sign = match self.sense {
            Sense::Maximize => Rational::from_integer(1.into()),
            Sense::Minimize => Rational::from_integer((-1).into()),
        };
        let mut total: Rational = self.constraints.iter().zip(y).map(|(c, yi)| &c.rhs * yi).sum();
        for j in 0..self.num_vars() {
            let mut d = self.objective[j].clone();
            for (c, yi) in self.constraints.iter().zip(y) {
                d -= &c.coeffs[j] * yi;
            }
            // inf(d x) = -sup(-d x)
            let s = self.bounds[j].sup_linear(&(&d * &sign))?;
            total += s * &sign;
        }
        Some(total)
    }

    /// Checks a Farkas certificate: `y` with maximization signs such that
    /// `b·y < inf { yᵀA x : x in bounds }`.
    pub fn certifies_infeasibility(&self, y: &[Rational]) -> bool {
        if self.bounds.iter().any(Bounds::is_empty) {
            return true;
        }
        if !self.dual_sign_ok(y, Sense::Maximize) {
            return false;
        }
        let mut total: Rational = self.constraints.iter().zip(y).map(|(c, yi)| &c.rhs * yi).sum();
        for j in 0..self.num_vars() {
            let mut d = Rational::zero();
            for (c, yi) in self.constraints.iter().zip(y) {
                d -= &c.coeffs[j] * yi;
            }
            match self.bounds[j].sup_linear(&d) {
                Some(s) => total += s,
                None => return false,
            }
        }
        total.is_negative()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
        duals: Vec<Rational>,
    },
    Infeasible {
        farkas: Vec<Rational>,
    },
    Unbounded {
        ray: Vec<Rational>,
    },
}

impl LpSolution {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpSolution::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpSolution::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        matches!(self, LpSolution::Optimal { .. })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpSolution::Infeasible { .. })
    }
}

/// How an original variable maps onto nonnegative internal columns.
#[derive(Debug, Clone)]
enum VarMap {
    Shift { col: usize, lower: Rational },
    Flip { col: usize, upper: Rational },
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    reduced: Vec<Rational>,
    basis: Vec<usize>,
    rhs: usize,
}

impl Tableau {
    fn pivot(&mut self, p: usize, q: usize) {
        let inv = self.rows[p][q].recip();
        for x in self.rows[p].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let prow = self.rows[p].clone();
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == p || row[q].is_zero() {
                continue;
            }
            let f = row[q].clone();
            for &j in &nz {
                row[j] -= &f * &prow[j];
            }
        }
        if !self.reduced[q].is_zero() {
            let f = self.reduced[q].clone();
            for &j in &nz {
                self.reduced[j] -= &f * &prow[j];
            }
        }
        self.basis[p] = q;
    }

    fn set_costs(&mut self, costs: &[Rational]) {
        let mut r: Vec<Rational> = costs.to_vec();
        r.push(Rational::zero());
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &costs[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    r[j] -= cb * x;
                }
            }
        }
        self.reduced = r;
    }

    /// Bland's rule iterations; `Err(q)` reports an unbounded entering column.
    fn run(&mut self, allowed: &dyn Fn(usize) -> bool) -> Result<(), usize> {
        loop {
            let Some(q) = (0..self.rhs).find(|&j| allowed(j) && self.reduced[j].is_positive()) else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[q].is_positive() {
                    continue;
                }
                let ratio = &row[self.rhs] / &row[q];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((p, _)) => self.pivot(p, q),
                None => return Err(q),
            }
        }
    }

    fn duals(&self, costs: &[Rational], init_cols: &[usize]) -> Vec<Rational> {
        init_cols
            .iter()
            .map(|&col| {
                self.rows
                    .iter()
                    .enumerate()
                    .fold(Rational::zero(), |acc, (k, row)| acc + &costs[self.basis[k]] * &row[col])
            })
            .collect()
    }
}

/// Solves `lp` exactly. Panics if the program is malformed (see
/// [`LinearProgram::validate`]).
pub fn solve_lp(lp: &LinearProgram) -> LpSolution {
    if let Err(e) = lp.validate() {
        panic!("malformed linear program: {e}");
    }
    let n = lp.num_vars();
    let m0 = lp.constraints.len();
    if lp.bounds.iter().any(Bounds::is_empty) {
        return LpSolution::Infeasible {
            farkas: vec![Rational::zero(); m0],
        };
    }

    // maximize form
    let c: Vec<Rational> = match lp.sense {
        Sense::Maximize => lp.objective.clone(),
        Sense::Minimize => lp.objective.iter().map(|x| -x).collect(),
    };

    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0;
    let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
    for b in &lp.bounds {
        let map = match (&b.lower, &b.upper) {
            (Some(l), upper) => {
                if let Some(u) = upper {
                    bound_rows.push((ncols, u - l));
                }
                VarMap::Shift {
                    col: ncols,
                    lower: l.clone(),
                }
            }
            (None, Some(u)) => VarMap::Flip {
                col: ncols,
                upper: u.clone(),
            },
            (None, None) => {
                ncols += 1;
                VarMap::Split {
                    pos: ncols - 1,
                    neg: ncols,
                }
            }
        };
        ncols += 1;
        maps.push(map);
    }
    let nstruct = ncols;

    // internal rows over structural columns
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::with_capacity(m0 + bound_rows.len());
    for con in &lp.constraints {
        let mut coeffs = vec![Rational::zero(); nstruct];
        let mut rhs = con.rhs.clone();
        for (j, a) in con.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            match &maps[j] {
                VarMap::Shift { col, lower } => {
                    coeffs[*col] += a;
                    rhs -= a * lower;
                }
                VarMap::Flip { col, upper } => {
                    coeffs[*col] -= a;
                    rhs -= a * upper;
                }
                VarMap::Split { pos, neg } => {
                    coeffs[*pos] += a;
                    coeffs[*neg] -= a;
                }
            }
        }
        rows.push((coeffs, con.relation, rhs));
    }
    for (col, width) in &bound_rows {
        let mut coeffs = vec![Rational::zero(); nstruct];
        coeffs[*col] = Rational::from_integer(1.into());
        rows.push((coeffs, Relation::Le, width.clone()));
    }
    let mut cost = vec![Rational::zero(); nstruct];
    for (j, map) in maps.iter().enumerate() {
        match map {
            VarMap::Shift { col, .. } => cost[*col] += &c[j],
            VarMap::Flip { col, .. } => cost[*col] -= &c[j],
            VarMap::Split { pos, neg } => {
                cost[*pos] += &c[j];
                cost[*neg] -= &c[j];
            }
        }
    }

    let m = rows.len();
    let mut flipped = vec![false; m];
    for (i, (coeffs, rel, rhs)) in rows.iter_mut().enumerate() {
        if rhs.is_negative() {
            flipped[i] = true;
            for x in coeffs.iter_mut() {
                *x = -x.clone();
            }
            *rhs = -rhs.clone();
            *rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    let nslack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let nart = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let total = nstruct + nslack + nart;
    let one = Rational::from_integer(1.into());
    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        reduced: Vec::new(),
        basis: Vec::with_capacity(m),
        rhs: total,
    };
    let mut init_cols = Vec::with_capacity(m);
    let (mut next_slack, mut next_art) = (nstruct, nstruct + nslack);
    for (coeffs, rel, rhs) in &rows {
        let mut row = coeffs.clone();
        row.resize(total + 1, Rational::zero());
        row[total] = rhs.clone();
        match rel {
            Relation::Le => {
                row[next_slack] = one.clone();
                init_cols.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -one.clone();
                next_slack += 1;
                row[next_art] = one.clone();
                init_cols.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = one.clone();
                init_cols.push(next_art);
                next_art += 1;
            }
        }
        tab.basis.push(*init_cols.last().unwrap());
        tab.rows.push(row);
    }
    let art_start = nstruct + nslack;
    let is_art = |j: usize| j >= art_start;

    let map_duals = |y_int: Vec<Rational>| -> Vec<Rational> {
        y_int
            .into_iter()
            .take(m0)
            .zip(&flipped)
            .map(|(y, &f)| {
                let y = if f { -y } else { y };
                match lp.sense {
                    Sense::Maximize => y,
                    Sense::Minimize => -y,
                }
            })
            .collect()
    };

    if nart > 0 {
        let mut phase1 = vec![Rational::zero(); total];
        for x in phase1.iter_mut().skip(art_start) {
            *x = -one.clone();
        }
        tab.set_costs(&phase1);
        tab.run(&|_| true)
            .expect("phase one objective is bounded by zero");
        let infeasibility: Rational = tab
            .rows
            .iter()
            .zip(&tab.basis)
            .filter(|(_, &b)| is_art(b))
            .map(|(row, _)| row[total].clone())
            .sum();
        if infeasibility.is_positive() {
            let y_int = tab.duals(&phase1, &init_cols);
            // Farkas vectors use maximization signs regardless of sense
            let farkas = y_int
                .into_iter()
                .take(m0)
                .zip(&flipped)
                .map(|(y, &f)| if f { -y } else { y })
                .collect();
            return LpSolution::Infeasible { farkas };
        }
        // drive zero-level artificials out of the basis where possible
        for i in 0..m {
            if !is_art(tab.basis[i]) {
                continue;
            }
            if let Some(q) = (0..art_start).find(|&j| !tab.rows[i][j].is_zero()) {
                tab.pivot(i, q);
            }
        }
    }

    let mut phase2 = cost.clone();
    phase2.resize(total, Rational::zero());
    tab.set_costs(&phase2);
    if let Err(q) = tab.run(&|j| !is_art(j)) {
        let mut dir = vec![Rational::zero(); total];
        dir[q] = one.clone();
        for (i, row) in tab.rows.iter().enumerate() {
            dir[tab.basis[i]] = -row[q].clone();
        }
        let ray = maps
            .iter()
            .map(|map| match map {
                VarMap::Shift { col, .. } => dir[*col].clone(),
                VarMap::Flip { col, .. } => -dir[*col].clone(),
                VarMap::Split { pos, neg } => &dir[*pos] - &dir[*neg],
            })
            .collect();
        return LpSolution::Unbounded { ray };
    }

    let mut internal = vec![Rational::zero(); total];
    for (i, row) in tab.rows.iter().enumerate() {
        internal[tab.basis[i]] = row[total].clone();
    }
    let point: Vec<Rational> = maps
        .iter()
        .map(|map| match map {
            VarMap::Shift { col, lower } => lower + &internal[*col],
            VarMap::Flip { col, upper } => upper - &internal[*col],
            VarMap::Split { pos, neg } => &internal[*pos] - &internal[*neg],
        })
        .collect();
    let value = dot(&lp.objective, &point);
    let duals = map_duals(tab.duals(&phase2, &init_cols));
    LpSolution::Optimal { value, point, duals }
}
