//! The blocking cycle, the exhaustive emptiness sweep and the
//! best-response contrast, with their JSON reports.

use serde::Serialize;
use serde_json::Value;

use crate::anonymous::blocking::{
    anonymous_certificate, deviator_mass_gain, find_blocking_in, verify_in,
};
use crate::anonymous::game::{cell_profiles, constant_profile, profile_label, AnonymousGame};
use crate::anonymous::params::{Distribution, ACTIONS, CELLS, CELL_NAMES};
use crate::error::{Error, Result};
use crate::finite::{certificate_to_json, Coalition, Joint};
use crate::par::Execution;
use crate::scalar::{format_rational, qi, Rational};

/// One profile with the certificate found or checked against it.
#[derive(Clone, Debug, Serialize)]
pub struct ProfileEntry {
    pub profile: String,
    pub certificate: Option<Value>,
    /// Worst-case improvement minus epsilon.
    pub margin: Option<String>,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepSummary {
    pub total_profiles: usize,
    pub blocked: usize,
    pub epsilon: String,
    #[serde(rename = "D")]
    pub d: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub game: String,
    pub summary: SweepSummary,
    pub surviving: Vec<String>,
    pub profiles: Vec<ProfileEntry>,
}

impl SweepReport {
    pub fn all_blocked(&self) -> bool {
        self.summary.blocked == self.summary.total_profiles
    }
}

/// Searches every cellwise-constant profile for a blocking certificate at
/// `epsilon` and verifies each one found.
pub fn sweep_profiles(game: &AnonymousGame, epsilon: &Rational, exec: Execution) -> Result<SweepReport> {
    let finite = game.to_finite()?;
    let profiles = cell_profiles();
    let results = exec.map(profiles.len(), |k| -> Result<ProfileEntry> {
        let sq = &profiles[k];
        let cert = find_blocking_in(&finite, game, sq, epsilon)?;
        Ok(match cert {
            Some(c) => ProfileEntry {
                profile: profile_label(sq),
                verified: verify_in(&finite, game, sq, &c)?,
                margin: Some(format_rational(&c.margin)),
                certificate: Some(certificate_to_json(&finite, &c)),
            },
            None => ProfileEntry {
                profile: profile_label(sq),
                certificate: None,
                margin: None,
                verified: false,
            },
        })
    });
    let entries = results.into_iter().collect::<Result<Vec<_>>>()?;
    let surviving: Vec<String> = entries
        .iter()
        .filter(|e| !e.verified)
        .map(|e| e.profile.clone())
        .collect();
    Ok(SweepReport {
        game: game.name().into(),
        summary: SweepSummary {
            total_profiles: entries.len(),
            blocked: entries.len() - surviving.len(),
            epsilon: format_rational(epsilon),
            d: format_rational(&game.d()),
        },
        surviving,
        profiles: entries,
    })
}

/// The four stages of the cycle: status quo `≡i` and the coalition and
/// constant deviation that block it.
pub fn focal_pairs() -> Vec<(Joint, Vec<usize>, usize)> {
    vec![
        (constant_profile(0), vec![0, 1], 1),
        (constant_profile(1), vec![0, 2], 2),
        (constant_profile(2), vec![1, 2], 3),
        (constant_profile(3), vec![0, 1, 2, 3], 0),
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct FocalEntry {
    pub profile: String,
    pub certificate: Value,
    /// Worst-case improvement minus the sweep epsilon.
    pub margin: String,
    /// Worst-case improvement itself.
    pub improvement: String,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleReport {
    pub schema: &'static str,
    pub game: String,
    pub focal: Vec<FocalEntry>,
    pub sweep: SweepReport,
    pub empty: bool,
}

impl CycleReport {
    pub fn min_focal_improvement(&self) -> Rational {
        self.focal
            .iter()
            .map(|f| crate::scalar::parse_rational(&f.improvement).expect("written by format_rational"))
            .min()
            .unwrap_or_else(|| qi(0))
    }
}

fn focal_entries(game: &AnonymousGame, epsilon: &Rational) -> Result<Vec<FocalEntry>> {
    let finite = game.to_finite()?;
    focal_pairs()
        .into_iter()
        .map(|(sq, cells, action)| {
            let coalition = Coalition::new(cells)?;
            let deviation = vec![action; coalition.len()];
            let cert = anonymous_certificate(game, &sq, coalition, deviation, epsilon.clone())?;
            let verified = verify_in(&finite, game, &sq, &cert)?
                && deviator_mass_gain(game, &sq, &cert.coalition, &cert.deviation)? == cert.improvement();
            Ok(FocalEntry {
                profile: profile_label(&sq),
                certificate: certificate_to_json(&finite, &cert),
                margin: format_rational(&cert.margin),
                improvement: format_rational(&cert.improvement()),
                verified,
            })
        })
        .collect()
}

/// The cycle `≡0 → ≡1 → ≡2 → ≡3 → ≡0` at the game's sweep epsilon, and the
/// exhaustive sweep over all cellwise-constant profiles. A focal certificate
/// that fails verification is a fixture corruption.
pub fn blocking_cycle_report(game: &AnonymousGame, exec: Execution) -> Result<CycleReport> {
    blocking_cycle_report_at(game, &game.sweep_epsilon(), exec)
}

pub fn blocking_cycle_report_at(game: &AnonymousGame, epsilon: &Rational, exec: Execution) -> Result<CycleReport> {
    let epsilon = epsilon.clone();
    let focal = focal_entries(game, &epsilon)?;
    if let Some(bad) = focal.iter().find(|f| !f.verified) {
        return Err(Error::FixtureCorruption(format!(
            "{}: the cycle certificate against ≡{} does not verify at epsilon {} (margin {})",
            game.name(),
            &bad.profile[..1],
            format_rational(&epsilon),
            bad.margin
        )));
    }
    let sweep = sweep_profiles(game, &epsilon, exec)?;
    Ok(CycleReport {
        schema: "weakcore.cycle/1",
        game: game.name().into(),
        empty: sweep.all_blocked(),
        focal,
        sweep,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CellCheck {
    pub cell: &'static str,
    pub action: usize,
    pub payoff: String,
    pub best_action: usize,
    pub best_payoff: String,
    pub passes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BestResponseReport {
    pub profile: String,
    pub distribution: Distribution,
    pub cells: Vec<CellCheck>,
    pub passes: bool,
}

/// Whether each cell's action maximizes its payoff at the profile's own
/// distribution of play.
pub fn best_response_check(game: &AnonymousGame, profile: &[usize]) -> Result<BestResponseReport> {
    let p = game.params.distribution_of(profile)?;
    let cells: Vec<CellCheck> = (0..CELLS)
        .map(|c| {
            let payoff = game.cell_payoff(c, profile[c], &p);
            let (best_action, best) = (0..ACTIONS)
                .map(|a| (a, game.cell_payoff(c, a, &p)))
                .fold(None::<(usize, Rational)>, |acc, (a, v)| match acc {
                    Some((_, ref bv)) if *bv >= v => acc,
                    _ => Some((a, v)),
                })
                .expect("four actions");
            CellCheck {
                cell: CELL_NAMES[c],
                action: profile[c],
                payoff: format_rational(&payoff),
                best_action,
                best_payoff: format_rational(&best),
                passes: payoff >= best,
            }
        })
        .collect();
    Ok(BestResponseReport {
        profile: profile_label(profile),
        distribution: p,
        passes: cells.iter().all(|c| c.passes),
        cells,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ContrastReport {
    pub schema: &'static str,
    pub game: String,
    pub summary: SweepSummary,
    pub weak_core_empty: bool,
    /// First cellwise-constant profile passing the best-response check.
    pub best_response_profile: Option<BestResponseReport>,
    pub profiles_checked: usize,
    pub holds: bool,
}

/// Emptiness at the sweep epsilon together with a search for a profile
/// passing the best-response check. Finding none is not a claim that no
/// equilibrium exists.
pub fn contrast_report(game: &AnonymousGame, exec: Execution) -> Result<ContrastReport> {
    let sweep = sweep_profiles(game, &game.sweep_epsilon(), exec)?;
    let profiles = cell_profiles();
    let mut found = None;
    for p in &profiles {
        let r = best_response_check(game, p)?;
        if r.passes {
            found = Some(r);
            break;
        }
    }
    let empty = sweep.all_blocked();
    Ok(ContrastReport {
        schema: "weakcore.contrast/1",
        game: game.name().into(),
        holds: empty && found.is_some(),
        weak_core_empty: empty,
        best_response_profile: found,
        profiles_checked: profiles.len(),
        summary: sweep.summary,
    })
}
