//! Limited commitment: lower bounds on the sender's payoff when the report is
//! honored only with probability chi.

use persuasion::credibility::robustness_verdict;
use persuasion::games;

fn main() -> persuasion::Result<()> {
    for (name, game) in [("judge", games::judge()), ("quadratic loss", games::quadratic_loss())] {
        let r = robustness_verdict(&game, game.prior())?;
        println!("{name}:");
        println!("  full-credibility interval [{}, {}]", r.chi1_interval.lo, r.chi1_interval.hi);
        println!("  strongly robust: {}", r.strongly_robust);
        for (chi, b) in r.chi_grid.iter().zip(&r.lower_bounds) {
            println!("  chi = {chi}: payoff >= {b}");
        }
    }
    Ok(())
}
