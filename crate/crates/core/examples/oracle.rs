//! Compare the exact envelopes with the independent grid approximation.

use persuasion::concavify::equilibrium_interval;
use persuasion::oracle::{brute_force_interval, random_game};

fn main() -> persuasion::Result<()> {
    for seed in 0..5 {
        let game = random_game(seed, 3, 3, 1000)?;
        let exact = equilibrium_interval(&game, game.prior())?;
        for n in [50, 100] {
            let approx = brute_force_interval(&game, game.prior(), n)?;
            println!(
                "seed {seed}, n = {n}: lower gap {}, upper gap {}, tolerance {}",
                &exact.lo - &approx.lo,
                &exact.hi - &approx.hi,
                approx.tolerance
            );
        }
    }
    Ok(())
}
