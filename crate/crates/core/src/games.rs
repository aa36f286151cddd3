//! Small bundled games used by the examples, the tests and the command line.

use crate::model::{load_game, GameSpec};

pub const JUDGE_JSON: &str = include_str!("../examples/games/judge.json");
pub const FOOTNOTE_JSON: &str = include_str!("../examples/games/footnote.json");
pub const QUADRATIC_LOSS_JSON: &str = include_str!("../examples/games/quadratic_loss.json");

/// Prosecutor and judge: two states (innocent, guilty), three sentences.
pub fn judge() -> GameSpec {
    load_game(JUDGE_JSON).expect("bundled game is valid")
}

/// Two-by-two game whose receiver payoffs are not generic.
pub fn footnote() -> GameSpec {
    load_game(FOOTNOTE_JSON).expect("bundled game is valid")
}

/// Three ordered states and actions, quadratic-loss receiver, sender wants high actions.
pub fn quadratic_loss() -> GameSpec {
    load_game(QUADRATIC_LOSS_JSON).expect("bundled game is valid")
}

pub fn by_name(name: &str) -> Option<GameSpec> {
    match name {
        "judge" => Some(judge()),
        "footnote" => Some(footnote()),
        "quadratic_loss" | "quadratic-loss" => Some(quadratic_loss()),
        _ => None,
    }
}
