use crate::error::{Error, Result};
use crate::model::{GameSpec, Label, MAX_ACTIONS, MAX_STATES};
use crate::rational::{ratio, Rational};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random game with payoffs `(k − denom²/2) / denom` for `k` uniform on
/// `0..=denom²`, sender matrix drawn first, and a uniform prior. The same
/// seed always yields the same game.
pub fn random_game(seed: u64, nstates: usize, nactions: usize, denom: u64) -> Result<GameSpec> {
    if !(2..=MAX_STATES).contains(&nstates) {
        return Err(Error::invalid("nstates", format!("must be between 2 and {MAX_STATES}")));
    }
    if !(2..=MAX_ACTIONS).contains(&nactions) {
        return Err(Error::invalid("nactions", format!("must be between 2 and {MAX_ACTIONS}")));
    }
    if !(2..=1_000_000_000).contains(&denom) {
        return Err(Error::invalid("denom", "must be between 2 and 10^9"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = denom * denom;
    let shift = BigInt::from(top / 2);
    let d = BigInt::from(denom);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<Vec<Rational>> {
        (0..nactions)
            .map(|_| {
                (0..nstates)
                    .map(|_| Rational::new(BigInt::from(rng.gen_range(0..=top)) - &shift, d.clone()))
                    .collect()
            })
            .collect()
    };
    let u_sender = draw(&mut rng);
    let u_receiver = draw(&mut rng);
    GameSpec::new(
        (0..nstates).map(|t| Label::new(format!("s{t}"))).collect(),
        (0..nactions).map(|a| Label::new(format!("a{a}"))).collect(),
        vec![ratio(1, nstates as i64); nstates],
        u_sender,
        u_receiver,
    )
}

/// Adds an independent uniform perturbation in `[−1/denom, 1/denom]`, on a grid
/// of spacing `1/denom²`, to every receiver payoff.
pub fn perturb_receiver(game: &GameSpec, seed: u64, denom: u64) -> Result<GameSpec> {
    if !(2..=1_000_000_000).contains(&denom) {
        return Err(Error::invalid("denom", "must be between 2 and 10^9"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sq = BigInt::from(denom) * BigInt::from(denom);
    let d = BigInt::from(denom);
    let u = game
        .u_receiver()
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| x + Rational::new(BigInt::from(rng.gen_range(0..=2 * denom)) - &d, sq.clone()))
                .collect()
        })
        .collect();
    game.with_receiver_payoffs(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::load_game;

    #[test]
    fn reproducible_and_round_trips() {
        let a = random_game(1, 2, 3, 1000).unwrap();
        let b = random_game(1, 2, 3, 1000).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(load_game(&a.to_json()).unwrap(), a);
        assert_ne!(random_game(2, 2, 3, 1000).unwrap(), a);
    }

    #[test]
    fn entries_are_sign_varied_and_bounded() {
        let g = random_game(5, 3, 4, 10).unwrap();
        let all: Vec<&Rational> = g.u_sender().iter().chain(g.u_receiver()).flatten().collect();
        assert!(all.iter().all(|x| **x >= ratio(-5, 1) && **x <= ratio(5, 1)));
        assert!(all.iter().any(|x| **x < ratio(0, 1)));
        assert!(all.iter().any(|x| **x > ratio(0, 1)));
    }

    #[test]
    fn size_guards() {
        assert!(random_game(0, 1, 3, 10).is_err());
        assert!(random_game(0, 6, 3, 10).is_err());
        assert!(random_game(0, 2, 11, 10).is_err());
        assert!(random_game(0, 2, 2, 1).is_err());
    }

    #[test]
    fn perturbation_is_small() {
        let g = crate::games::footnote();
        let p = perturb_receiver(&g, 3, 1_000_000).unwrap();
        for (r0, r1) in g.u_receiver().iter().zip(p.u_receiver()) {
            for (x, y) in r0.iter().zip(r1) {
                let diff = x - y;
                assert!(diff <= ratio(1, 1_000_000) && diff >= ratio(-1, 1_000_000));
            }
        }
    }
}
