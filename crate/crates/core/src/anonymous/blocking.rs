//! Blocking in distribution form over unions of the four cells.
//!
//! Members of `S` playing `a` secure at least their own mass `m_S(a)` on
//! `a`, and both payoffs only read `p(a)`. When the complement is nonempty
//! it can move all its mass to another action, so `m_S(a)` is also the
//! worst case; when `S = T` the distribution is fixed. The exhaustive
//! search over complement cell assignments reaches that worst case too,
//! and the two routes are cross-checked.

use crate::anonymous::game::AnonymousGame;
use crate::anonymous::params::{ACTIONS, CELLS};
use crate::error::{invalid, Error, Result};
use crate::finite::{self, BlockingCertificate, Coalition, FiniteGame};
use crate::par::Execution;
use crate::scalar::{qi, Rational};

fn check_profile(joint: &[usize]) -> Result<()> {
    if joint.len() != CELLS || joint.iter().any(|&a| a >= ACTIONS) {
        return Err(invalid("a cell profile assigns one action of A0 to each of the four cells"));
    }
    Ok(())
}

/// Worst-case gain of the coalition's members from the deviator-mass bound.
pub fn deviator_mass_gain(
    game: &AnonymousGame,
    status_quo: &[usize],
    coalition: &Coalition,
    deviation: &[usize],
) -> Result<Rational> {
    check_profile(status_quo)?;
    if deviation.len() != coalition.len() || coalition.members().iter().any(|&c| c >= CELLS) {
        return Err(invalid("deviation must assign exactly the coalition's cells"));
    }
    let p = game.params.distribution_of(status_quo)?;
    let mut mass = vec![qi(0); ACTIONS];
    for (&c, &a) in coalition.members().iter().zip(deviation) {
        mass[a] += game.params.cell_measure(c);
    }
    let gains = coalition.members().iter().zip(deviation).map(|(&c, &a)| {
        game.payoff_given_mass(c, a, &mass[a]) - game.cell_payoff(c, status_quo[c], &p)
    });
    Ok(gains.min().expect("coalitions are nonempty"))
}

/// First certificate in (coalition size, lex, deviation lex) order.
pub fn find_blocking_anonymous(
    game: &AnonymousGame,
    status_quo: &[usize],
    epsilon: &Rational,
) -> Result<Option<BlockingCertificate<Rational>>> {
    find_blocking_in(&game.to_finite()?, game, status_quo, epsilon)
}

pub(crate) fn find_blocking_in(
    finite: &FiniteGame<Rational>,
    game: &AnonymousGame,
    status_quo: &[usize],
    epsilon: &Rational,
) -> Result<Option<BlockingCertificate<Rational>>> {
    check_profile(status_quo)?;
    let cert = finite::find_blocking_with(Execution::Sequential, finite, status_quo, epsilon)?;
    if let Some(c) = &cert {
        let bound = deviator_mass_gain(game, status_quo, &c.coalition, &c.deviation)?;
        if bound != c.improvement() {
            return Err(Error::FixtureCorruption(format!(
                "complement enumeration gives {} but the deviator-mass bound gives {bound}",
                c.improvement()
            )));
        }
    }
    Ok(cert)
}

/// The certificate for a given coalition and deviation, margin by exhaustive
/// complement enumeration.
pub fn anonymous_certificate(
    game: &AnonymousGame,
    status_quo: &[usize],
    coalition: Coalition,
    deviation: Vec<usize>,
    epsilon: Rational,
) -> Result<BlockingCertificate<Rational>> {
    check_profile(status_quo)?;
    let finite = game.to_finite()?;
    let gain = finite::worst_case_gain(&finite, status_quo, &coalition, &deviation)?;
    Ok(BlockingCertificate {
        coalition,
        deviation,
        margin: gain - epsilon.clone(),
        epsilon,
    })
}

/// Independent check: the finite verifier and the deviator-mass bound must
/// both confirm strict improvement by more than `epsilon`.
pub fn verify_anonymous_certificate(
    game: &AnonymousGame,
    status_quo: &[usize],
    cert: &BlockingCertificate<Rational>,
) -> Result<bool> {
    verify_in(&game.to_finite()?, game, status_quo, cert)
}

pub(crate) fn verify_in(
    finite: &FiniteGame<Rational>,
    game: &AnonymousGame,
    status_quo: &[usize],
    cert: &BlockingCertificate<Rational>,
) -> Result<bool> {
    let table = finite::verify_certificate(finite, status_quo, cert)?;
    let bound = deviator_mass_gain(game, status_quo, &cert.coalition, &cert.deviation)?;
    Ok(table && bound > cert.epsilon)
}
