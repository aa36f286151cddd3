//! Quadratic-loss receiver with a sender who wants high actions: the sender's
//! payoff is unique, certified by the PUBR test and by the ordered-model test.

use persuasion::diagnostics::{analyze, genericity_check, ordered_check, potentially_unique_actions};
use persuasion::games;
use persuasion::model::StateMask;

fn main() -> persuasion::Result<()> {
    let game = games::quadratic_loss();
    let au = potentially_unique_actions(&game, StateMask::full(game.num_states()))?;
    println!("potentially unique best responses: {au}");
    println!("receiver payoffs generic: {}", genericity_check(&game).in_u_r);

    let ordered = ordered_check(&game, game.prior())?;
    println!(
        "ordered: {:?}, increasing differences: {}, quasi condition: {:?}, theorem applies: {}",
        ordered.is_ordered, ordered.increasing_differences, ordered.quasi_condition, ordered.theorem2_applies
    );

    let v = analyze(&game, game.prior())?;
    println!("verdict: {:?} via {:?}", v.verdict, v.winning_test);
    println!("interval: [{}, {}]", v.evidence.interval.lo, v.evidence.interval.hi);
    Ok(())
}
