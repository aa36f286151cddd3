//! Load a game from JSON and list the cells of its best-response arrangement.
//!
//! Usage: `cargo run --example cells [GAME.json]`

use persuasion::geometry::enumerate_cells;
use persuasion::model::{load_game, StateMask};

fn main() -> persuasion::Result<()> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => persuasion::games::QUADRATIC_LOSS_JSON.to_string(),
    };
    let game = load_game(&text)?;
    for cell in enumerate_cells(&game, StateMask::full(game.num_states()))? {
        let names: Vec<&str> = cell.tie_set.iter().map(|a| game.actions()[a].label.as_str()).collect();
        let verts: Vec<String> = cell.vertices.iter().map(|v| v.to_string()).collect();
        println!("{{{}}}: {}", names.join(", "), verts.join(" "));
    }
    Ok(())
}
