//! Blocking search and certificate verification for finite games.
//!
//! A coalition `S` blocks a status quo `h` at slack `eps` when some joint
//! action `v_S` of its members gives every member strictly more than
//! `u_i(h) + eps` against every action tuple of the complement.

use crate::error::{invalid, Result};
use crate::finite::game::{Coalition, FiniteGame, Joint, SubGrid};
use crate::par::Execution;
use crate::scalar::{exceeds, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct BlockingCertificate<P> {
    pub coalition: Coalition,
    /// One action index per coalition member, in member order.
    pub deviation: Vec<usize>,
    pub epsilon: P,
    /// Worst-case improvement over the status quo, minus `epsilon`.
    pub margin: P,
}

impl<P: Scalar> BlockingCertificate<P> {
    pub fn improvement(&self) -> P {
        self.margin.clone() + self.epsilon.clone()
    }

    /// Same coalition and deviation, re-targeted at another slack.
    pub fn with_epsilon(&self, epsilon: P) -> Self {
        Self {
            coalition: self.coalition.clone(),
            deviation: self.deviation.clone(),
            margin: self.improvement() - epsilon.clone(),
            epsilon,
        }
    }
}

pub(crate) fn status_quo_payoffs<P: Scalar>(game: &FiniteGame<P>, sq: &[usize]) -> Vec<P> {
    let k = game.indexer().index(sq);
    (0..game.n()).map(|i| game.payoff_at(k, i).clone()).collect()
}

/// Minimum over complement tuples and members of `u_i - base_i`.
///
/// `joint` must already carry the members' actions. With `floor` set, the
/// scan stops and returns `None` as soon as some gain fails to exceed it.
pub(crate) fn worst_gain<P: Scalar>(
    game: &FiniteGame<P>,
    base: &[P],
    members: &[usize],
    complement: &[usize],
    joint: &mut [usize],
    floor: Option<&P>,
) -> Option<P> {
    let mut min: Option<P> = None;
    let mut grid = SubGrid::new(complement, game.radix());
    while grid.advance(joint) {
        let k = game.indexer().index(joint);
        for &i in members {
            let gain = game.payoff_at(k, i).clone() - base[i].clone();
            if let Some(f) = floor {
                if !exceeds(&gain, f) {
                    return None;
                }
            }
            if min.as_ref().map_or(true, |m| gain < *m) {
                min = Some(gain);
            }
        }
    }
    min
}

fn check_epsilon<P: Scalar>(epsilon: &P) -> Result<()> {
    if *epsilon < P::zero() || !epsilon.is_finite() {
        return Err(invalid("epsilon must be a nonnegative finite number"));
    }
    Ok(())
}

/// First blocking certificate in (coalition size, coalition lex, deviation
/// lex) order, or `None` when the status quo is unblocked at `epsilon`.
pub fn find_blocking<P: Scalar>(
    game: &FiniteGame<P>,
    status_quo: &[usize],
    epsilon: &P,
) -> Result<Option<BlockingCertificate<P>>> {
    find_blocking_with(Execution::default(), game, status_quo, epsilon)
}

pub fn find_blocking_with<P: Scalar>(
    exec: Execution,
    game: &FiniteGame<P>,
    status_quo: &[usize],
    epsilon: &P,
) -> Result<Option<BlockingCertificate<P>>> {
    game.validate_joint(status_quo)?;
    check_epsilon(epsilon)?;
    let base = status_quo_payoffs(game, status_quo);
    let coalitions = Coalition::all(game.n());
    Ok(exec.find_map_first(coalitions.len(), |c| {
        search_coalition(game, &base, &coalitions[c], epsilon)
    }))
}

fn search_coalition<P: Scalar>(
    game: &FiniteGame<P>,
    base: &[P],
    coalition: &Coalition,
    epsilon: &P,
) -> Option<BlockingCertificate<P>> {
    let members = coalition.members();
    let complement = coalition.complement(game.n());
    let mut joint: Joint = vec![0; game.n()];
    let mut deviations = SubGrid::new(members, game.radix());
    while deviations.advance(&mut joint) {
        let mut scratch = joint.clone();
        if let Some(min) = worst_gain(game, base, members, &complement, &mut scratch, Some(epsilon))
        {
            return Some(BlockingCertificate {
                coalition: coalition.clone(),
                deviation: members.iter().map(|&i| joint[i]).collect(),
                epsilon: epsilon.clone(),
                margin: min - epsilon.clone(),
            });
        }
    }
    None
}

/// Recomputes the certificate's claim from the payoff table alone: every
/// outcome in which the coalition plays its deviation must give every
/// member strictly more than its status-quo payoff plus `epsilon`.
pub fn verify_certificate<P: Scalar>(
    game: &FiniteGame<P>,
    status_quo: &[usize],
    cert: &BlockingCertificate<P>,
) -> Result<bool> {
    game.validate_joint(status_quo)?;
    check_epsilon(&cert.epsilon)?;
    let members = cert.coalition.members();
    if members.iter().any(|&i| i >= game.n()) {
        return Err(invalid("certificate coalition names an unknown player"));
    }
    if cert.deviation.len() != members.len() {
        return Err(invalid("deviation must assign exactly the coalition members"));
    }
    for (&i, &a) in members.iter().zip(&cert.deviation) {
        if a >= game.radix()[i] {
            return Err(invalid(format!("deviation action {a} out of range for player {i}")));
        }
    }
    let before = game.evaluate(status_quo)?;
    for joint in game.all_joints() {
        if members.iter().zip(&cert.deviation).any(|(&i, &a)| joint[i] != a) {
            continue;
        }
        let after = game.evaluate(&joint)?;
        for &i in members {
            let target = before.0[i].clone() + cert.epsilon.clone();
            if !exceeds(&after.0[i], &target) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Minimum over complement tuples and coalition members of the gain
/// `u_i(deviation, v_-S) - u_i(status_quo)`.
pub fn worst_case_gain<P: Scalar>(
    game: &FiniteGame<P>,
    status_quo: &[usize],
    coalition: &Coalition,
    deviation: &[usize],
) -> Result<P> {
    game.validate_joint(status_quo)?;
    let members = coalition.members();
    if members.iter().any(|&i| i >= game.n()) {
        return Err(invalid("coalition names an unknown player"));
    }
    if deviation.len() != members.len() {
        return Err(invalid("deviation must assign exactly the coalition members"));
    }
    let mut joint: Joint = vec![0; game.n()];
    for (&i, &a) in members.iter().zip(deviation) {
        if a >= game.radix()[i] {
            return Err(invalid(format!("deviation action {a} out of range for player {i}")));
        }
        joint[i] = a;
    }
    let base = status_quo_payoffs(game, status_quo);
    Ok(worst_gain(game, &base, members, &coalition.complement(game.n()), &mut joint, None)
        .expect("a nonempty coalition always yields at least one gain"))
}

/// Candidates (default: the full joint grid) that no coalition blocks at
/// `epsilon`, in candidate order. At `epsilon = 0` this is the alpha-core
/// restricted to the grid.
pub fn weak_core_members<P: Scalar>(
    game: &FiniteGame<P>,
    epsilon: &P,
    candidates: Option<&[Joint]>,
) -> Result<Vec<Joint>> {
    weak_core_members_with(Execution::default(), game, epsilon, candidates)
}

pub fn weak_core_members_with<P: Scalar>(
    exec: Execution,
    game: &FiniteGame<P>,
    epsilon: &P,
    candidates: Option<&[Joint]>,
) -> Result<Vec<Joint>> {
    check_epsilon(epsilon)?;
    let all;
    let candidates = match candidates {
        Some(c) => c,
        None => {
            all = game.all_joints().collect::<Vec<_>>();
            &all
        }
    };
    for c in candidates {
        game.validate_joint(c)?;
    }
    let keep = exec.filter(candidates.len(), |k| {
        is_unblocked(game, &candidates[k], epsilon)
    });
    Ok(keep.into_iter().map(|k| candidates[k].clone()).collect())
}

/// Membership test without certificate bookkeeping (sequential inner scan).
pub fn is_unblocked<P: Scalar>(game: &FiniteGame<P>, status_quo: &[usize], epsilon: &P) -> bool {
    let base = status_quo_payoffs(game, status_quo);
    Coalition::all(game.n())
        .iter()
        .all(|c| search_coalition(game, &base, c, epsilon).is_none())
}

/// First unblocked candidate in candidate order.
pub fn first_weak_core_member<P: Scalar>(
    exec: Execution,
    game: &FiniteGame<P>,
    epsilon: &P,
    candidates: &[Joint],
) -> Option<Joint> {
    exec.find_map_first(candidates.len(), |k| {
        is_unblocked(game, &candidates[k], epsilon).then(|| candidates[k].clone())
    })
}
