//! Write the value functions of the judge game as CSV.
//!
//! Usage: `cargo run --example figure [OUT.csv]`

use persuasion::concavify::emit_figure;
use persuasion::games;
use std::path::PathBuf;

fn main() -> persuasion::Result<()> {
    let out: PathBuf = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("judge_figure.csv"));
    let fig = emit_figure(&games::judge(), 401, None, &out)?;
    println!("wrote {} rows to {}", fig.rows.len(), out.display());
    for row in fig.rows.iter().step_by(100) {
        println!("mu = {}: v = {}, w = {}, cav v = {}, cav w = {}", row.mu, row.v, row.w, row.cavv, row.cavw);
    }
    Ok(())
}
