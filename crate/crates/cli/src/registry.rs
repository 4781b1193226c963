use std::path::Path;

use weakcore::anonymous::AnonymousGame;
use weakcore::continuum::ContinuumGame;
use weakcore::finite::{game_from_json, LoadedGame};
use weakcore::fixtures::{ConcaveTest, Example1, Example2};

pub const FIXTURES: &[(&str, &str)] = &[
    ("example1", "running-average payoff whose weak-core is empty"),
    ("example2", "running-average payoff whose alpha-core is empty and weak-core is not"),
    ("concave-test", "U(t, f) = 1 - |mean(f) - t|, concave in f and continuous in t"),
    ("anonymous-W", "four-action anonymous game with the blocking cycle"),
    ("anonymous-Wtilde", "smoothed anonymous game: empty weak-core, best responses exist"),
];

pub enum Game {
    Continuum(Box<dyn ContinuumGame>),
    Anonymous(AnonymousGame),
    Finite(LoadedGame),
}

impl Game {
    pub fn kind(&self) -> &'static str {
        match self {
            Game::Continuum(_) => "continuum",
            Game::Anonymous(_) => "anonymous",
            Game::Finite(_) => "finite",
        }
    }
}

/// A fixture name, or a path to a JSON game.
pub fn resolve(name: &str) -> Result<Game, String> {
    match name {
        "example1" => Ok(Game::Continuum(Box::new(Example1))),
        "example2" => Ok(Game::Continuum(Box::new(Example2))),
        "concave-test" => Ok(Game::Continuum(Box::new(ConcaveTest))),
        "anonymous-W" => Ok(Game::Anonymous(AnonymousGame::w())),
        "anonymous-Wtilde" => Ok(Game::Anonymous(AnonymousGame::w_tilde())),
        path if path.ends_with(".json") || Path::new(path).is_file() => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| format!("{path} is not JSON: {e}"))?;
            let game = game_from_json(&value).map_err(|e| format!("{path}: {e}"))?;
            Ok(Game::Finite(game))
        }
        other => Err(format!(
            "unknown game {other:?}; expected one of {} or a path to a JSON game",
            FIXTURES.iter().map(|f| f.0).collect::<Vec<_>>().join(", ")
        )),
    }
}
