//! Random receiver payoffs are generic with overwhelming frequency, and
//! generic games have a unique sender payoff.

use persuasion::diagnostics::{analyze, genericity_check, Verdict};
use persuasion::games;
use persuasion::oracle::{perturb_receiver, random_game};

fn main() -> persuasion::Result<()> {
    let mut generic = 0;
    let mut unique = 0;
    for seed in 0..100 {
        let game = random_game(seed, 3, 3, 1_000_000)?;
        if genericity_check(&game).in_u_r {
            generic += 1;
            if analyze(&game, game.prior())?.verdict == Verdict::Unique {
                unique += 1;
            }
        }
    }
    println!("random 3x3 games: {generic}/100 generic, {unique} of those unique");

    let footnote = games::footnote();
    let escaped = (0..100)
        .filter(|&seed| perturb_receiver(&footnote, seed, 1_000_000).map(|g| genericity_check(&g).in_u_r).unwrap_or(false))
        .count();
    println!("footnote game perturbed by at most 1e-6: {escaped}/100 generic");
    Ok(())
}
