//! The judge game: exact payoff interval, the optimal policy, and the value
//! functions at a few beliefs.

use persuasion::concavify::{equilibrium_interval, evaluate_policy, TieRule};
use persuasion::games;
use persuasion::model::{value_lower, value_upper, Belief};
use persuasion::rational::ratio;

fn main() -> persuasion::Result<()> {
    let game = games::judge();
    let prior = game.prior();
    println!("prior (innocent, guilty) = {prior}");

    let iv = equilibrium_interval(&game, prior)?;
    println!("equilibrium payoffs: [{}, {}]", iv.lo, iv.hi);

    println!("optimal policy:");
    for (b, w) in iv.hi_witness.support() {
        println!("  {b} with probability {w}");
    }
    let fav = evaluate_policy(&game, &iv.hi_witness, &TieRule::Favorable)?;
    let adv = evaluate_policy(&game, &iv.hi_witness, &TieRule::Adversarial)?;
    println!("  pays {fav} with favorable tie-breaking, {adv} with adversarial tie-breaking");

    for p in [ratio(0, 1), ratio(1, 4), ratio(1, 2), ratio(3, 4), ratio(1, 1)] {
        let mu = Belief::binary(p.clone())?;
        println!("  mu(guilty) = {p}: v = {}, w = {}", value_upper(&game, &mu), value_lower(&game, &mu));
    }
    Ok(())
}
