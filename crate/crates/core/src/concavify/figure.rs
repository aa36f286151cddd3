use super::envelope::Engine;
use crate::error::{Error, Result};
use crate::model::{value_lower, value_upper, Belief, GameSpec, StateMask};
use crate::rational::{format_rational, ratio, serde_exact, to_decimal_string, Rational, DISPLAY_DIGITS};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;
use std::path::Path;

/// `v`, `w`, `v̂` and `ŵ` at one belief on an edge of the simplex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FigureRow {
    /// Probability of the edge's second state.
    #[serde(with = "serde_exact")]
    pub mu: Rational,
    #[serde(with = "serde_exact")]
    pub v: Rational,
    #[serde(with = "serde_exact")]
    pub w: Rational,
    #[serde(with = "serde_exact")]
    pub cavv: Rational,
    #[serde(with = "serde_exact")]
    pub cavw: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Figure {
    pub edge: (usize, usize),
    pub rows: Vec<FigureRow>,
}

pub const CSV_HEADER: &str = "mu,v,w,cavv,cavw,mu_f,v_f,w_f,cavv_f,cavw_f";

impl Figure {
    pub fn row_at(&self, mu: &Rational) -> Option<&FigureRow> {
        self.rows.iter().find(|r| &r.mu == mu)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let cols = [&r.mu, &r.v, &r.w, &r.cavv, &r.cavw];
            let exact: Vec<String> = cols.iter().map(|q| format_rational(q)).collect();
            let approx: Vec<String> = cols.iter().map(|q| to_decimal_string(q, DISPLAY_DIGITS)).collect();
            out.push_str(&exact.join(","));
            out.push(',');
            out.push_str(&approx.join(","));
            out.push('\n');
        }
        out
    }
}

/// Samples the four value functions along the edge from `δ_i` to `δ_j` at
/// `n` evenly spaced beliefs plus every cell boundary on the edge. With two
/// states the edge defaults to the whole simplex.
pub fn figure(game: &GameSpec, n: usize, edge: Option<(usize, usize)>) -> Result<Figure> {
    let ns = game.num_states();
    let (i, j) = match edge {
        Some(e) => e,
        None if ns == 2 => (0, 1),
        None => {
            return Err(Error::invalid(
                "edge",
                format!("the game has {ns} states; choose an edge of the simplex to slice along"),
            ))
        }
    };
    if i == j || i >= ns || j >= ns {
        return Err(Error::invalid("edge", format!("({i}, {j}) is not an edge of a {ns}-state simplex")));
    }
    if n < 2 {
        return Err(Error::invalid("n", "at least two sample points are required"));
    }
    let engine = Engine::new(game)?;
    let at = |mu: &Rational| {
        let mut probs = vec![Rational::zero(); ns];
        probs[i] = Rational::one() - mu;
        probs[j] = mu.clone();
        Belief::from_probs_unchecked(probs)
    };
    let mut grid: BTreeSet<Rational> = (0..n).map(|k| ratio(k as i64, n as i64 - 1)).collect();
    let edge_mask = StateMask((1 << i) | (1 << j));
    for cell in engine.cells(edge_mask)? {
        for v in &cell.vertices {
            grid.insert(v.probs()[j].clone());
        }
    }
    let grid: Vec<Rational> = grid.into_iter().collect();
    let rows = grid
        .par_iter()
        .map(|mu| {
            let b = at(mu);
            Ok(FigureRow {
                mu: mu.clone(),
                v: value_upper(game, &b),
                w: value_lower(game, &b),
                cavv: engine.cav_upper_value(&b)?,
                cavw: engine.cav_lower_value(&b)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Figure { edge: (i, j), rows })
}

/// Writes [`figure`] as comma-separated text to `path`.
pub fn emit_figure(game: &GameSpec, n: usize, edge: Option<(usize, usize)>, path: &Path) -> Result<Figure> {
    let fig = figure(game, n, edge)?;
    std::fs::write(path, fig.to_csv())?;
    Ok(fig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games;
    use crate::rational::int;

    #[test]
    fn judge_figure_rows() {
        let fig = figure(&games::judge(), 5, None).unwrap();
        let row = fig.row_at(&ratio(1, 2)).unwrap();
        assert_eq!((&row.v, &row.w, &row.cavv, &row.cavw), (&int(1), &int(-1), &int(1), &int(0)));
        let row = fig.row_at(&int(0)).unwrap();
        assert!([&row.v, &row.w, &row.cavv, &row.cavw].iter().all(|x| x.is_zero()));
        let row = fig.row_at(&int(1)).unwrap();
        assert_eq!((&row.v, &row.w, &row.cavv, &row.cavw), (&int(1), &int(-1), &int(1), &int(-1)));
        let row = fig.row_at(&ratio(3, 4)).unwrap();
        assert_eq!((&row.v, &row.w, &row.cavw), (&int(1), &int(-1), &ratio(-1, 2)));
    }

    #[test]
    fn csv_has_header_and_one_line_per_row() {
        let fig = figure(&games::judge(), 3, None).unwrap();
        let csv = fig.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), fig.rows.len() + 1);
        assert!(lines[1].starts_with("0/1,0/1,0/1,0/1,0/1,0,"));
    }

    #[test]
    fn three_states_need_an_edge() {
        let game = games::quadratic_loss();
        assert!(figure(&game, 3, None).is_err());
        let fig = figure(&game, 3, Some((0, 2))).unwrap();
        assert!(fig.rows.len() >= 3);
        assert!(figure(&game, 3, Some((1, 1))).is_err());
    }
}
