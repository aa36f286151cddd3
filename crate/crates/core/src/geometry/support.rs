use crate::concavify::InformationPolicy;
use crate::error::{Error, Result};
use crate::linalg::null_vector;
use crate::rational::Rational;
use num_traits::{One, Signed, Zero};

/// Shrinks the support of `policy` to an affinely independent set, keeping the
/// barycenter exactly and never lowering `Σ weight · value`.
///
/// `values[i]` belongs to the `i`-th support belief. Each round finds an affine
/// dependency `Σ α_i x_i = 0, Σ α_i = 0`, orients it so that `Σ α_i values_i ≥ 0`
/// and moves the weights along it until one of them reaches zero.
pub fn reduce_support(policy: &InformationPolicy, values: &[Rational]) -> Result<InformationPolicy> {
    if values.len() != policy.len() {
        return Err(Error::dimension("values", policy.len(), values.len()));
    }
    let mut atoms: Vec<(crate::model::Belief, Rational, Rational)> = policy
        .support()
        .iter()
        .zip(values)
        .map(|((b, w), f)| (b.clone(), w.clone(), f.clone()))
        .collect();
    let dim = policy.barycenter().dim();
    loop {
        let k = atoms.len();
        let mut rows: Vec<Vec<Rational>> = (0..dim)
            .map(|t| atoms.iter().map(|(b, _, _)| b.probs()[t].clone()).collect())
            .collect();
        rows.push(vec![Rational::one(); k]);
        let Some(mut alpha) = null_vector(&rows, k) else {
            break;
        };
        let gain: Rational = alpha.iter().zip(&atoms).map(|(a, (_, _, f))| a * f).sum();
        if gain.is_negative() {
            alpha.iter_mut().for_each(|a| *a = -a.clone());
        }
        let step = atoms
            .iter()
            .zip(&alpha)
            .filter(|(_, a)| a.is_negative())
            .map(|((_, w, _), a)| w / -a)
            .min()
            .expect("an affine dependency has a negative coefficient");
        for ((_, w, _), a) in atoms.iter_mut().zip(&alpha) {
            *w += &step * a;
        }
        atoms.retain(|(_, w, _)| !w.is_zero());
    }
    InformationPolicy::new(atoms.into_iter().map(|(b, w, _)| (b, w)).collect())
}
