//! JSON forms of finite games and blocking certificates.
//!
//! Game:
//! ```json
//! { "schema": "weakcore.game/1",
//!   "arithmetic": "exact",
//!   "players": [ { "id": "a", "weight": "1/2", "actions": ["0", "1"] } ],
//!   "payoffs": [ ["0/1"], ["1/1"] ],
//!   "bound": "1/1" }
//! ```
//! `payoffs[k]` is the payoff vector of the joint tuple with index `k`
//! (mixed radix, first player most significant). `arithmetic` is `"exact"`
//! (rationals as `"p/q"` strings, the default) or `"float"`.
//!
//! Certificate:
//! `{ "coalition": [ids], "deviation": { id: action }, "epsilon": .., "margin": .. }`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{invalid, Result};
use crate::finite::blocking::BlockingCertificate;
use crate::finite::game::{Coalition, FiniteGame, Player};
use crate::scalar::{Rational, Scalar};

pub const GAME_SCHEMA: &str = "weakcore.game/1";

#[derive(Serialize, Deserialize)]
struct GameDoc {
    #[serde(default)]
    schema: Option<String>,
    #[serde(default)]
    arithmetic: Option<String>,
    players: Vec<Player>,
    payoffs: Vec<Vec<Value>>,
    bound: Value,
}

/// A finite game loaded from JSON, in whichever arithmetic it declares.
#[derive(Clone, Debug)]
pub enum LoadedGame {
    Exact(FiniteGame<Rational>),
    Float(FiniteGame<f64>),
}

pub fn game_to_json<P: Scalar>(game: &FiniteGame<P>) -> Value {
    let payoffs: Vec<Vec<Value>> = (0..game.joint_count())
        .map(|k| (0..game.n()).map(|i| game.payoff_at(k, i).to_json()).collect())
        .collect();
    json!({
        "schema": GAME_SCHEMA,
        "arithmetic": if P::is_exact() { "exact" } else { "float" },
        "players": game.players(),
        "payoffs": payoffs,
        "bound": game.bound().to_json(),
    })
}

fn build<P: Scalar>(doc: GameDoc) -> Result<FiniteGame<P>> {
    let table = doc
        .payoffs
        .iter()
        .map(|row| row.iter().map(P::from_json).collect::<Result<Vec<P>>>())
        .collect::<Result<Vec<_>>>()?;
    FiniteGame::new(doc.players, table, P::from_json(&doc.bound)?)
}

pub fn game_from_json(value: &Value) -> Result<LoadedGame> {
    let doc: GameDoc = serde_json::from_value(value.clone())?;
    if let Some(s) = &doc.schema {
        if s != GAME_SCHEMA {
            return Err(invalid(format!("unsupported game schema {s:?}")));
        }
    }
    match doc.arithmetic.as_deref().unwrap_or("exact") {
        "exact" => Ok(LoadedGame::Exact(build(doc)?)),
        "float" => Ok(LoadedGame::Float(build(doc)?)),
        other => Err(invalid(format!("unknown arithmetic {other:?}"))),
    }
}

pub fn certificate_to_json<P: Scalar>(game: &FiniteGame<P>, cert: &BlockingCertificate<P>) -> Value {
    let players = game.players();
    let coalition: Vec<&str> = cert
        .coalition
        .members()
        .iter()
        .map(|&i| players[i].id.as_str())
        .collect();
    let deviation: BTreeMap<&str, &str> = cert
        .coalition
        .members()
        .iter()
        .zip(&cert.deviation)
        .map(|(&i, &a)| (players[i].id.as_str(), players[i].actions[a].as_str()))
        .collect();
    json!({
        "coalition": coalition,
        "deviation": deviation,
        "epsilon": cert.epsilon.to_json(),
        "margin": cert.margin.to_json(),
    })
}

pub fn certificate_from_json<P: Scalar>(
    game: &FiniteGame<P>,
    value: &Value,
) -> Result<BlockingCertificate<P>> {
    #[derive(Deserialize)]
    struct Doc {
        coalition: Vec<String>,
        deviation: BTreeMap<String, String>,
        epsilon: Value,
        margin: Value,
    }
    let doc: Doc = serde_json::from_value(value.clone())?;
    let members = doc
        .coalition
        .iter()
        .map(|id| game.player_index(id).ok_or_else(|| invalid(format!("unknown player {id:?}"))))
        .collect::<Result<Vec<_>>>()?;
    let coalition = Coalition::new(members)?;
    if doc.deviation.len() != coalition.len() {
        return Err(invalid("deviation must assign exactly the coalition members"));
    }
    let deviation = coalition
        .members()
        .iter()
        .map(|&i| {
            let p = &game.players()[i];
            let label = doc
                .deviation
                .get(&p.id)
                .ok_or_else(|| invalid(format!("deviation misses player {:?}", p.id)))?;
            p.actions
                .iter()
                .position(|a| a == label)
                .ok_or_else(|| invalid(format!("unknown action {label:?} for {:?}", p.id)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BlockingCertificate {
        coalition,
        deviation,
        epsilon: P::from_json(&doc.epsilon)?,
        margin: P::from_json(&doc.margin)?,
    })
}
