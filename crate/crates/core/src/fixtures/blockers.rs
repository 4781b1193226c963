//! Constructive blocking coalitions for the two running-average examples,
//! following their emptiness arguments case by case.
//!
//! Both constructions read the first piece of the status quo: on it `Γ`
//! equals the piece value `v0`, so `lim sup_{t→0} Γ(t, f) = 1` holds exactly
//! when `v0 = 1`.

use num_traits::One;

use crate::continuum::{
    lift, verify_continuum_certificate, ContinuumCertificate, ContinuumGame, Interval,
    IntervalPartition, IntervalSet, SearchSpace, StepProfile,
};
use crate::error::{Error, Result};
use crate::fixtures::payoffs::{Example1, Example2};
use crate::scalar::{dyadic_midpoints, q, qi, Rational};

/// Extra room kept between `1 - t1` and `α + ε` in the first example.
pub fn example1_slack() -> Rational {
    q(1, 16)
}

/// Action grid of the verification spaces and of the profile family.
pub fn five_point_grid() -> Vec<Rational> {
    (0..=4).map(|k| q(k, 4)).collect()
}

fn first_piece(f: &StepProfile) -> (Rational, Rational) {
    let n = f.normalized();
    (n.values()[0].clone(), n.breaks()[1].clone())
}

fn dyadic(k: u32) -> Rational {
    q(1, 1i64 << k)
}

/// Largest `2^-k`, `k >= 1`, with `2^-k <= cap` and `ok(2^-k)`.
fn largest_dyadic(cap: &Rational, ok: impl Fn(&Rational) -> bool) -> Option<(Rational, u32)> {
    (1..=60).map(|k| (dyadic(k), k)).find(|(t, _)| t <= cap && ok(t))
}

/// Samples for a coalition `(0, 2^-k]`: dyadic midpoints at a level fine
/// enough to put at least eight of them inside.
pub fn blocker_space(k: u32) -> SearchSpace {
    let level = (k + 4).max(10);
    SearchSpace::new(
        IntervalPartition::uniform(1).expect("one cell"),
        five_point_grid(),
        dyadic_midpoints(level),
    )
    .expect("valid verification space")
}

fn initial_segment(end: &Rational) -> IntervalSet {
    IntervalSet::single(Interval::new(qi(0), end.clone()).expect("0 < end <= 1"))
}

fn certify<G: ContinuumGame>(
    game: &G,
    status_quo: &StepProfile,
    end: Rational,
    k: u32,
    deviation: StepProfile,
    epsilon: Rational,
) -> Result<ContinuumCertificate> {
    let mut cert = ContinuumCertificate {
        coalition: initial_segment(&end),
        deviation,
        epsilon,
        margin: qi(0),
    };
    let v = verify_continuum_certificate(game, status_quo, &cert, &blocker_space(k))?;
    if !v.holds {
        return Err(Error::FixtureCorruption(format!(
            "{} blocker on (0, {end}] failed its own verification (margin {})",
            game.name(),
            v.margin
        )));
    }
    cert.margin = v.margin;
    Ok(cert)
}

/// Blocker for the first example at slack `epsilon`.
///
/// If `v0 = 1`, `(0, 1/2]` playing `1/2` earns `1/2` against a status quo
/// paying 0. Otherwise `α = v0` bounds `U(t, f)` on the first piece and
/// `(0, t1]` playing `1 - t1` earns `1 - t1` there, where `t1` is the largest
/// dyadic below the first piece's end with `1 - t1 > α + ε + 1/16`.
/// Returns `None` when `epsilon` is too large for the construction.
pub fn example1_blocker(status_quo: &StepProfile, epsilon: &Rational) -> Result<Option<ContinuumCertificate>> {
    let (v0, end) = first_piece(status_quo);
    if v0.is_one() {
        if *epsilon >= q(1, 2) {
            return Ok(None);
        }
        let dev = StepProfile::constant(q(1, 2))?;
        return certify(&Example1, status_quo, q(1, 2), 1, dev, epsilon.clone()).map(Some);
    }
    let floor = v0 + epsilon.clone() + example1_slack();
    let Some((t1, k)) = largest_dyadic(&end, |t| qi(1) - t.clone() > floor) else {
        return Ok(None);
    };
    let dev = StepProfile::constant(qi(1) - t1.clone())?;
    certify(&Example1, status_quo, t1, k, dev, epsilon.clone()).map(Some)
}

/// Alpha-core blocker (`ε = 0`) for the second example.
///
/// If `v0 = 1`, as in the first example. Otherwise, with `α = v0`,
/// `t0 = min(first piece end, 1/2)`, `α1 = (1 - α)/2` and `δ = (1 - α)/4`,
/// picks `t1 <= t0` with `α t1 < α1` and `t2 <= t1` with `(α + δ) t2 < α1`,
/// both the largest such dyadics, and lets `(0, t2]` play `f + δ(1 - f)`.
pub fn example2_alpha_blocker(status_quo: &StepProfile) -> Result<ContinuumCertificate> {
    let (v0, end) = first_piece(status_quo);
    if v0.is_one() {
        let dev = StepProfile::constant(q(1, 2))?;
        return certify(&Example2, status_quo, q(1, 2), 1, dev, qi(0));
    }
    let alpha = v0;
    let t0 = if end < q(1, 2) { end } else { q(1, 2) };
    let alpha1 = (qi(1) - alpha.clone()) / qi(2);
    let delta = (qi(1) - alpha.clone()) / qi(4);
    let corrupt = || Error::FixtureCorruption("no dyadic satisfies the chain inequality".into());
    let (t1, _) = largest_dyadic(&t0, |t| alpha.clone() * t.clone() < alpha1).ok_or_else(corrupt)?;
    let (t2, k) = largest_dyadic(&t1, |t| (alpha.clone() + delta.clone()) * t.clone() < alpha1)
        .ok_or_else(corrupt)?;
    let dev = status_quo.toward_one(&delta)?;
    certify(&Example2, status_quo, t2, k, dev, qi(0))
}

/// Every profile constant on the cells of the uniform `cells`-partition
/// with values on `grid`, in lexicographic order.
pub fn grid_profiles(cells: usize, grid: &[Rational]) -> Result<Vec<StepProfile>> {
    let partition = IntervalPartition::uniform(cells)?;
    let g = grid.len();
    let total = g.pow(cells as u32);
    (0..total)
        .map(|k| {
            let mut r = k;
            let mut values = vec![qi(0); cells];
            for v in values.iter_mut().rev() {
                *v = grid[r % g].clone();
                r /= g;
            }
            lift(&partition, &values)
        })
        .collect()
}
