//! A game where the receiver's knife-edge indifference makes the sender's
//! payoff non-unique, detected by the genericity test.

use persuasion::concavify::equilibrium_interval;
use persuasion::diagnostics::{analyze, genericity_check};
use persuasion::games;

fn main() -> persuasion::Result<()> {
    let game = games::footnote();
    let iv = equilibrium_interval(&game, game.prior())?;
    println!("equilibrium payoffs: [{}, {}]", iv.lo, iv.hi);
    println!("lower end attained: {}", iv.lo_attained);

    let generic = genericity_check(&game);
    println!("receiver payoffs generic: {}", generic.in_u_r);
    for idx in &generic.failing_indices {
        let states: Vec<String> = idx.states.iter().map(|t| t.to_string()).collect();
        println!("  phi(action {}, states {{{}}}) = 0", idx.action, states.join(", "));
    }

    let verdict = analyze(&game, game.prior())?;
    println!("verdict: {:?}", verdict.verdict);
    Ok(())
}
