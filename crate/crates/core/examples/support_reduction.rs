//! Shrink a ten-point policy to at most three affinely independent beliefs
//! without moving its barycenter or lowering its value.

use persuasion::concavify::InformationPolicy;
use persuasion::games;
use persuasion::geometry::reduce_support;
use persuasion::model::{value_upper, Belief};
use persuasion::rational::ratio;

fn main() -> persuasion::Result<()> {
    let game = games::quadratic_loss();
    let support: Vec<(Belief, persuasion::Rational)> = (0..10)
        .map(|i| {
            let (a, b) = (i % 4 + 1, (i * 7) % 5 + 1);
            let c = 12 - a - b;
            Ok((Belief::new(vec![ratio(a, 12), ratio(b, 12), ratio(c, 12)])?, ratio(1, 10)))
        })
        .collect::<persuasion::Result<_>>()?;
    let policy = InformationPolicy::new(support)?;
    let values: Vec<_> = policy.beliefs().map(|b| value_upper(&game, b)).collect();
    let reduced = reduce_support(&policy, &values)?;

    println!("{} beliefs reduced to {}", policy.len(), reduced.len());
    println!("barycenter {} -> {}", policy.barycenter(), reduced.barycenter());
    println!(
        "value {} -> {}",
        policy.expectation(|b| value_upper(&game, b)),
        reduced.expectation(|b| value_upper(&game, b))
    );
    for (b, w) in reduced.support() {
        println!("  {b} with weight {w}");
    }
    Ok(())
}
