//! Every payoff between the two envelopes is an equilibrium payoff: build the
//! equilibrium for a few targets in the judge game.

use persuasion::concavify::{equilibrium_interval, equilibrium_witness, evaluate_policy, Mixing, TieRule};
use persuasion::games;
use persuasion::rational::ratio;

fn main() -> persuasion::Result<()> {
    let game = games::judge();
    let prior = game.prior();
    let iv = equilibrium_interval(&game, prior)?;
    println!("interval [{}, {}]", iv.lo, iv.hi);
    for s in [ratio(0, 1), ratio(1, 8), ratio(1, 4), ratio(3, 8), ratio(1, 2)] {
        let w = equilibrium_witness(&game, prior, &s)?;
        let check = evaluate_policy(&game, &w.policy, &TieRule::Mixed(Mixing::Scalar(w.zeta.clone())))?;
        let support: Vec<String> = w.policy.support().iter().map(|(b, p)| format!("{p}@{b}")).collect();
        println!("s = {s}: lambda = {}, zeta = {}, policy = {}, pays {check}", w.lambda, w.zeta, support.join(" + "));
    }
    Ok(())
}
