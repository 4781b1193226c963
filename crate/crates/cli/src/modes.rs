use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use weakcore::anonymous::{
    best_response_check, blocking_cycle_report_at, contrast_report, find_blocking_anonymous,
    sweep_profiles, verify_anonymous_certificate, AnonymousGame, ACTIONS, CELLS,
};
use weakcore::continuum::{
    discretize, equi_usc_falsifier, existence_pipeline, find_blocking_continuum, indicator_probes, lift,
    t_oscillation, verify_continuum_certificate, ContinuumGame, IntervalPartition, Neighborhood,
    PartitionNet, PipelineConfig, SearchSpace, StepProfile, TestFamily, RESOLUTION_CAVEAT,
};
use weakcore::finite::{
    certificate_to_json, find_blocking, verify_certificate, weak_core_members, FiniteGame, LoadedGame,
};
use weakcore::scalar::{dyadic_midpoints, format_rational, parse_rational, q, qi};
use weakcore::{Execution, Rational, Scalar};

use crate::registry::Game;
use crate::{Cli, Failure, Mode, Outcome};

fn usage(m: impl Into<String>) -> Failure {
    Failure::Usage(m.into())
}

fn epsilon(cli: &Cli, default: Rational) -> Result<Rational, Failure> {
    match &cli.epsilon {
        Some(s) => {
            let e = parse_rational(s)?;
            if e < qi(0) {
                return Err(usage("epsilon must be nonnegative"));
            }
            Ok(e)
        }
        None => Ok(default),
    }
}

fn action_grid(cli: &Cli) -> Result<Vec<Rational>, Failure> {
    if cli.grid < 2 {
        return Err(usage("--grid needs at least two actions"));
    }
    let last = cli.grid as i64 - 1;
    Ok((0..=last).map(|k| q(k, last)).collect())
}

fn samples(cli: &Cli) -> Result<Vec<Rational>, Failure> {
    if !(1..=20).contains(&cli.samples) {
        return Err(usage("--samples is a dyadic level between 1 and 20"));
    }
    Ok(dyadic_midpoints(cli.samples))
}

fn search_space(cli: &Cli) -> Result<SearchSpace, Failure> {
    if cli.cells == 0 {
        return Err(usage("--cells must be positive"));
    }
    Ok(SearchSpace::new(IntervalPartition::uniform(cli.cells)?, action_grid(cli)?, samples(cli)?)?)
}

fn continuum_profile(cli: &Cli) -> Result<StepProfile, Failure> {
    let Some(text) = &cli.profile else {
        return Ok(StepProfile::constant(qi(0))?);
    };
    let values = text.split(',').map(parse_rational).collect::<weakcore::Result<Vec<_>>>()?;
    Ok(lift(&IntervalPartition::uniform(values.len())?, &values)?)
}

fn anonymous_profile(cli: &Cli) -> Result<Vec<usize>, Failure> {
    let text = cli.profile.as_deref().unwrap_or("0000");
    let joint: Vec<usize> = text
        .chars()
        .map(|c| c.to_digit(10).map(|d| d as usize).filter(|&d| d < ACTIONS))
        .collect::<Option<_>>()
        .ok_or_else(|| usage(format!("anonymous profile {text:?} must be digits 0-3")))?;
    if joint.len() != CELLS {
        return Err(usage(format!("anonymous profile {text:?} needs {CELLS} digits")));
    }
    Ok(joint)
}

fn profile_labels<P: Scalar>(game: &FiniteGame<P>, cli: &Cli) -> Result<Vec<usize>, Failure> {
    let text = cli
        .profile
        .as_deref()
        .ok_or_else(|| usage("finite games need --profile with one action label per player"))?;
    let labels: Vec<&str> = text.split(',').map(str::trim).collect();
    Ok(game.joint_from_labels(&labels)?)
}

fn joint_labels<P: Scalar>(game: &FiniteGame<P>, joint: &[usize]) -> Vec<String> {
    joint
        .iter()
        .zip(game.players())
        .map(|(&a, p)| p.actions[a].clone())
        .collect()
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

pub fn dispatch(cli: &Cli, mode: Mode, game: &Game) -> Result<Outcome, Failure> {
    match (mode, game) {
        (Mode::BlockSearch, Game::Finite(g)) => match g {
            LoadedGame::Exact(g) => finite_block(cli, g),
            LoadedGame::Float(g) => finite_block(cli, g),
        },
        (Mode::BlockSearch, Game::Continuum(g)) => continuum_block(cli, g.as_ref()),
        (Mode::BlockSearch, Game::Anonymous(g)) => anonymous_block(cli, g),
        (Mode::WeakCore | Mode::AlphaCore, _) => {
            let eps = if mode == Mode::AlphaCore {
                if cli.epsilon.is_some() {
                    return Err(usage("alpha-core fixes epsilon at 0"));
                }
                qi(0)
            } else {
                epsilon(cli, q(1, 20))?
            };
            core_members(cli, game, &eps)
        }
        (Mode::Pipeline, Game::Continuum(g)) => pipeline(cli, g.as_ref()),
        (Mode::Cycle, Game::Anonymous(g)) => cycle(cli, g),
        (Mode::Contrast, Game::Anonymous(g)) => contrast(cli, g),
        (Mode::Diagnostics, Game::Continuum(g)) => continuum_diagnostics(cli, g.as_ref()),
        (Mode::Diagnostics, Game::Anonymous(g)) => {
            let report = best_response_check(g, &anonymous_profile(cli)?)?;
            Ok(Outcome {
                result: to_json(&report),
                assertion: None,
            })
        }
        (m, g) => Err(usage(format!("mode {} does not apply to {} games", m.name(), g.kind()))),
    }
}

fn finite_block<P: Scalar>(cli: &Cli, game: &FiniteGame<P>) -> Result<Outcome, Failure> {
    let sq = profile_labels(game, cli)?;
    let eps = P::from_rational(&epsilon(cli, qi(0))?);
    let cert = find_blocking(game, &sq, &eps)?;
    let verified = match &cert {
        Some(c) => Some(verify_certificate(game, &sq, c)?),
        None => None,
    };
    Ok(Outcome {
        result: json!({
            "status_quo": joint_labels(game, &sq),
            "epsilon": eps.to_json(),
            "blocked": cert.is_some(),
            "certificate": cert.as_ref().map(|c| certificate_to_json(game, c)),
            "verified": verified,
        }),
        assertion: None,
    })
}

fn continuum_block(cli: &Cli, game: &dyn ContinuumGame) -> Result<Outcome, Failure> {
    let sq = continuum_profile(cli)?;
    let eps = epsilon(cli, qi(0))?;
    let space = search_space(cli)?;
    let cert = find_blocking_continuum(game, &sq, &eps, &space)?;
    let verification = match &cert {
        Some(c) => Some(verify_continuum_certificate(game, &sq, c, &space)?),
        None => None,
    };
    Ok(Outcome {
        result: json!({
            "status_quo": to_json(&sq),
            "epsilon": format_rational(&eps),
            "search_space": to_json(&space),
            "blocked": cert.is_some(),
            "certificate": to_json(&cert),
            "verification": to_json(&verification),
            "caveat": RESOLUTION_CAVEAT,
        }),
        assertion: None,
    })
}

fn anonymous_block(cli: &Cli, game: &AnonymousGame) -> Result<Outcome, Failure> {
    let sq = anonymous_profile(cli)?;
    let eps = epsilon(cli, game.sweep_epsilon())?;
    let cert = find_blocking_anonymous(game, &sq, &eps)?;
    let finite = game.to_finite()?;
    let verified = match &cert {
        Some(c) => Some(verify_anonymous_certificate(game, &sq, c)?),
        None => None,
    };
    Ok(Outcome {
        result: json!({
            "status_quo": sq,
            "epsilon": format_rational(&eps),
            "blocked": cert.is_some(),
            "certificate": cert.as_ref().map(|c| certificate_to_json(&finite, c)),
            "verified": verified,
        }),
        assertion: None,
    })
}

fn finite_members<P: Scalar>(game: &FiniteGame<P>, eps: &Rational) -> Result<Value, Failure> {
    let members = weak_core_members(game, &P::from_rational(eps), None)?;
    Ok(json!({
        "epsilon": format_rational(eps),
        "candidates": game.joint_count(),
        "members": members.iter().map(|j| joint_labels(game, j)).collect::<Vec<_>>(),
    }))
}

fn core_members(cli: &Cli, game: &Game, eps: &Rational) -> Result<Outcome, Failure> {
    let result = match game {
        Game::Finite(LoadedGame::Exact(g)) => finite_members(g, eps)?,
        Game::Finite(LoadedGame::Float(g)) => finite_members(g, eps)?,
        Game::Continuum(g) => {
            let disc = discretize(g.as_ref(), &IntervalPartition::uniform(cli.cells)?, &action_grid(cli)?)?;
            let members = weak_core_members(&disc.game, &eps.to_f64(), None)?;
            let profiles = members
                .iter()
                .map(|j| disc.profile_of(j).map(|p| to_json(&p)))
                .collect::<weakcore::Result<Vec<_>>>()?;
            json!({
                "epsilon": format_rational(eps),
                "cells": cli.cells,
                "grid": action_grid(cli)?.iter().map(format_rational).collect::<Vec<_>>(),
                "candidates": disc.game.joint_count(),
                "members": profiles,
                "note": "members of the discretized finite game",
            })
        }
        Game::Anonymous(g) => {
            let sweep = sweep_profiles(g, eps, Execution::default())?;
            json!({
                "epsilon": format_rational(eps),
                "candidates": sweep.summary.total_profiles,
                "members": sweep.surviving,
            })
        }
    };
    Ok(Outcome { result, assertion: None })
}

fn pipeline(cli: &Cli, game: &dyn ContinuumGame) -> Result<Outcome, Failure> {
    if cli.stages.is_empty() || cli.stages.contains(&0) {
        return Err(usage("--stages needs positive cell counts"));
    }
    let net = PartitionNet::uniform(&cli.stages)?;
    let mut config = PipelineConfig::new(action_grid(cli)?, epsilon(cli, q(1, 20))?);
    config.samples = samples(cli)?;
    let report = existence_pipeline(game, &net, &config)?;
    if let Some(path) = &cli.csv {
        let mut w = csv::Writer::from_path(path).map_err(|e| Failure::Run(e.to_string()))?;
        w.write_record(["stage", "cells", "test_function", "integral"])
            .map_err(|e| Failure::Run(e.to_string()))?;
        for (s, k, v) in report.integral_rows() {
            let cells = report.stages[s].cells.to_string();
            w.write_record([s.to_string(), cells, k.to_string(), format_rational(&v)])
                .map_err(|e| Failure::Run(e.to_string()))?;
        }
        w.flush().map_err(|e| Failure::Run(e.to_string()))?;
    }
    let holds = report.final_unblocked();
    Ok(Outcome {
        result: to_json(&report),
        assertion: Some(("final profile unblocked over the tested coalition family", holds)),
    })
}

fn cycle(cli: &Cli, game: &AnonymousGame) -> Result<Outcome, Failure> {
    let eps = epsilon(cli, game.sweep_epsilon())?;
    let report = blocking_cycle_report_at(game, &eps, Execution::default())?;
    if let Some(path) = &cli.csv {
        let mut w = csv::Writer::from_path(path).map_err(|e| Failure::Run(e.to_string()))?;
        w.write_record(["profile", "blocked", "margin"]).map_err(|e| Failure::Run(e.to_string()))?;
        for p in &report.sweep.profiles {
            let margin = p.margin.clone().unwrap_or_default();
            w.write_record([p.profile.as_str(), if p.verified { "true" } else { "false" }, margin.as_str()])
                .map_err(|e| Failure::Run(e.to_string()))?;
        }
        w.flush().map_err(|e| Failure::Run(e.to_string()))?;
    }
    let empty = report.empty;
    Ok(Outcome {
        result: to_json(&report),
        assertion: Some(("every cellwise-constant profile is blocked", empty)),
    })
}

fn contrast(cli: &Cli, game: &AnonymousGame) -> Result<Outcome, Failure> {
    if cli.epsilon.is_some() {
        return Err(usage("contrast uses the game's own sweep epsilon"));
    }
    let report = contrast_report(game, Execution::default())?;
    let holds = report.holds;
    Ok(Outcome {
        result: to_json(&report),
        assertion: Some(("weak-core empty while a profile passes the best-response check", holds)),
    })
}

/// Indicator probes `c·χ_(0,2^-k]` plus seeded random two-piece profiles.
fn probes(cli: &Cli) -> Result<Vec<StepProfile>, Failure> {
    let widths: Vec<Rational> = (4..=10).map(|k| q(1, 1 << k)).collect();
    let mut out = indicator_probes(&[q(1, 2), qi(1)], &widths)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let grid = action_grid(cli)?;
    for _ in 0..16 {
        let k: i64 = rng.gen_range(4..=10);
        let v = grid[rng.gen_range(0..grid.len())].clone();
        out.push(StepProfile::scaled_indicator(v, qi(0), q(1, 1 << k))?);
    }
    Ok(out)
}

fn continuum_diagnostics(cli: &Cli, game: &dyn ContinuumGame) -> Result<Outcome, Failure> {
    let at = continuum_profile(cli)?;
    let eps = epsilon(cli, q(2, 5))?;
    if eps <= qi(0) {
        return Err(usage("the equi-usc falsifier needs a positive epsilon"));
    }
    let nbhd = Neighborhood {
        tests: TestFamily::dyadic(3),
        radius: q(1, 16),
    };
    let ts = samples(cli)?;
    let witness = equi_usc_falsifier(game, &at, &eps, &nbhd, &ts, &probes(cli)?)?;
    let oscillation = t_oscillation(game, &at, &ts).map(|(a, b, j)| {
        json!({ "t": format_rational(&a), "t_next": format_rational(&b), "jump": format_rational(&j) })
    });
    Ok(Outcome {
        result: json!({
            "at": to_json(&at),
            "epsilon": format_rational(&eps),
            "neighborhood": to_json(&nbhd),
            "equi_usc_witness": to_json(&witness),
            "equi_usc_refuted": witness.is_some(),
            "t_oscillation": oscillation,
            "note": "a witness refutes equi-upper-semicontinuity at this profile; its absence is inconclusive",
        }),
        assertion: None,
    })
}
