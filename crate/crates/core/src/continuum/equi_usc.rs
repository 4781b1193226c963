//! Falsification search for equi-upper-semicontinuity of `{U(t, ·)}_t`.
//!
//! A witness `(t, f')` with `f'` in a weak neighbourhood of `f` and
//! `U(t, f') >= U(t, f) + ε` refutes equi-usc at `f` for that `ε` and
//! neighbourhood. Finding nothing is inconclusive.

use serde::{Deserialize, Serialize};

use crate::continuum::game::ContinuumGame;
use crate::continuum::profile::{StepProfile, TestFamily};
use crate::error::{invalid, Result};
use crate::scalar::{serde_q, Rational, Scalar};

/// `{f' : |∫ (f' - f) g| < radius for every g in tests}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Neighborhood {
    pub tests: TestFamily,
    #[serde(with = "serde_q")]
    pub radius: Rational,
}

impl Neighborhood {
    pub fn contains(&self, center: &StepProfile, f: &StepProfile) -> bool {
        self.tests
            .functions
            .iter()
            .all(|g| Scalar::abs(&(g.integrate(f) - g.integrate(center))) < self.radius)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquiUscWitness {
    #[serde(with = "serde_q")]
    pub t: Rational,
    pub probe: StepProfile,
    /// `U(t, probe) - U(t, at)`.
    #[serde(with = "serde_q")]
    pub jump: Rational,
}

/// `c · χ_(0, w]` for every value `c` and width `w`.
pub fn indicator_probes(values: &[Rational], widths: &[Rational]) -> Result<Vec<StepProfile>> {
    let mut out = vec![];
    for w in widths {
        for c in values {
            out.push(StepProfile::scaled_indicator(c.clone(), Rational::from_i64(0), w.clone())?);
        }
    }
    Ok(out)
}

/// First `(probe, sample)` pair, in probe order then sample order, whose
/// payoff jumps by at least `epsilon`. Probes outside the neighbourhood are
/// skipped.
pub fn equi_usc_falsifier<G: ContinuumGame + ?Sized>(
    game: &G,
    at: &StepProfile,
    epsilon: &Rational,
    neighborhood: &Neighborhood,
    samples: &[Rational],
    probes: &[StepProfile],
) -> Result<Option<EquiUscWitness>> {
    if *epsilon <= Rational::from_i64(0) {
        return Err(invalid("epsilon must be positive"));
    }
    if samples.iter().any(|t| *t < Rational::from_i64(0) || *t > Rational::from_i64(1)) {
        return Err(invalid("samples must lie in [0,1]"));
    }
    let base: Vec<Rational> = samples.iter().map(|t| game.payoff(t, at)).collect();
    for probe in probes.iter().filter(|p| neighborhood.contains(at, p)) {
        for (t, b) in samples.iter().zip(&base) {
            let jump = game.payoff(t, probe) - b.clone();
            if jump >= *epsilon {
                return Ok(Some(EquiUscWitness {
                    t: t.clone(),
                    probe: probe.clone(),
                    jump,
                }));
            }
        }
    }
    Ok(None)
}

/// Largest payoff jump between adjacent samples in `t`, as
/// `(t, t', |U(t', f) - U(t, f)|)`. A sampling view of continuity in `t`.
pub fn t_oscillation<G: ContinuumGame + ?Sized>(
    game: &G,
    f: &StepProfile,
    samples: &[Rational],
) -> Option<(Rational, Rational, Rational)> {
    let mut ts = samples.to_vec();
    ts.sort();
    ts.dedup();
    let us: Vec<Rational> = ts.iter().map(|t| game.payoff(t, f)).collect();
    ts.windows(2)
        .zip(us.windows(2))
        .map(|(t, u)| (t[0].clone(), t[1].clone(), Scalar::abs(&(u[1].clone() - u[0].clone()))))
        .max_by(|a, b| a.2.cmp(&b.2))
}
