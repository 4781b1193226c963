//! Games with a continuum of players `t ∈ [0,1]` and reduced payoffs
//! `U(t, f)`, and their discretization into finite games.

use crate::continuum::profile::{lift, FloatProfile, Interval, IntervalPartition, StepProfile};
use crate::continuum::quadrature::{integrate_split, QUADRATURE_TOLERANCE};
use crate::error::{invalid, Error, Result};
use crate::finite::{FiniteGame, Joint, Player};
use crate::par::Execution;
use crate::scalar::{format_rational, Rational, Scalar};

/// A payoff `U(t, f)` bounded by `bound()` in absolute value.
///
/// `payoff` is exact and drives certificate verification. `payoff_f64`
/// evaluates the same formula in floating point for quadrature and for the
/// fast rejection pass of the blocking search.
pub trait ContinuumGame: Send + Sync {
    fn name(&self) -> &str;

    fn bound(&self) -> Rational;

    fn payoff(&self, t: &Rational, f: &StepProfile) -> Rational;

    fn payoff_f64(&self, t: f64, f: &FloatProfile) -> f64;

    /// Closed form of `∫_lo^hi U(t, f) dt` when one is known.
    fn cell_integral(&self, _lo: f64, _hi: f64, _f: &FloatProfile) -> Option<f64> {
        None
    }

    /// Points beyond the profile breakpoints where `U(·, f)` may kink.
    fn kinks(&self, _f: &FloatProfile) -> Vec<f64> {
        Vec::new()
    }

    /// `U(t, f)` depends on `f` only through its restriction to `(0, t]`.
    fn is_causal(&self) -> bool {
        false
    }
}

/// `U ≡ c`.
#[derive(Clone, Debug)]
pub struct ConstantGame {
    pub value: Rational,
}

impl ContinuumGame for ConstantGame {
    fn name(&self) -> &str {
        "constant"
    }
    fn bound(&self) -> Rational {
        Scalar::abs(&self.value)
    }
    fn payoff(&self, _t: &Rational, _f: &StepProfile) -> Rational {
        self.value.clone()
    }
    fn payoff_f64(&self, _t: f64, _f: &FloatProfile) -> f64 {
        self.value.to_f64()
    }
    fn cell_integral(&self, lo: f64, hi: f64, _f: &FloatProfile) -> Option<f64> {
        Some(self.value.to_f64() * (hi - lo))
    }
    fn is_causal(&self) -> bool {
        true
    }
}

/// `U(t, f) = ∫_0^1 f`: every player is paid the profile mean.
#[derive(Clone, Debug, Default)]
pub struct MeanGame;

impl ContinuumGame for MeanGame {
    fn name(&self) -> &str {
        "profile-mean"
    }
    fn bound(&self) -> Rational {
        Rational::from_i64(1)
    }
    fn payoff(&self, _t: &Rational, f: &StepProfile) -> Rational {
        f.integral_to(&Rational::from_i64(1))
    }
    fn payoff_f64(&self, _t: f64, f: &FloatProfile) -> f64 {
        f.integral_to(1.0)
    }
    fn cell_integral(&self, lo: f64, hi: f64, f: &FloatProfile) -> Option<f64> {
        Some(f.integral_to(1.0) * (hi - lo))
    }
}

/// `∫_cell U(t, f) dt`: closed form when the game provides one, otherwise
/// adaptive quadrature split at the profile breakpoints and declared kinks.
pub fn integrate_payoff<G: ContinuumGame + ?Sized>(
    game: &G,
    cell: &Interval,
    profile: &StepProfile,
) -> Result<f64> {
    integrate_float(game, cell.lo.to_f64(), cell.hi.to_f64(), &profile.to_float())
}

pub(crate) fn integrate_float<G: ContinuumGame + ?Sized>(
    game: &G,
    lo: f64,
    hi: f64,
    f: &FloatProfile,
) -> Result<f64> {
    let value = match game.cell_integral(lo, hi, f) {
        Some(v) => v,
        None => {
            let mut splits = f.interior_breaks().to_vec();
            splits.extend(game.kinks(f));
            integrate_split(|t| game.payoff_f64(t, f), lo, hi, &splits, QUADRATURE_TOLERANCE)?
        }
    };
    let cap = game.bound().to_f64() * (hi - lo) + QUADRATURE_TOLERANCE;
    if !value.is_finite() || value.abs() > cap {
        return Err(Error::Numerical(format!(
            "integral {value} over ({lo}, {hi}] exceeds the declared bound"
        )));
    }
    Ok(value)
}

/// The finite game `G_π` together with the data needed to map joint tuples
/// back to step profiles.
#[derive(Clone, Debug)]
pub struct Discretized {
    pub game: FiniteGame<f64>,
    pub partition: IntervalPartition,
    pub grid: Vec<Rational>,
}

impl Discretized {
    pub fn profile_of(&self, joint: &[usize]) -> Result<StepProfile> {
        let values: Vec<Rational> = joint.iter().map(|&a| self.grid[a].clone()).collect();
        lift(&self.partition, &values)
    }

    /// The joint tuple whose lift equals `profile`, if it is cellwise
    /// constant on this partition with values on the grid.
    pub fn joint_of(&self, profile: &StepProfile) -> Option<Joint> {
        self.partition
            .cells()
            .iter()
            .map(|c| {
                let mut vals = profile
                    .pieces()
                    .filter(|(iv, _)| iv.intersect(c).is_some())
                    .map(|(_, v)| v.clone());
                let v = vals.next()?;
                if vals.any(|w| w != v) {
                    return None;
                }
                self.grid.iter().position(|g| *g == v)
            })
            .collect()
    }
}

fn check_grid(grid: &[Rational]) -> Result<()> {
    if grid.is_empty() {
        return Err(invalid("action grid must be nonempty"));
    }
    let zero = Rational::from_i64(0);
    let one = Rational::from_i64(1);
    if grid.iter().any(|a| *a < zero || *a > one) {
        return Err(invalid("action grid must lie in [0,1]"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("action grid must be strictly increasing"));
    }
    Ok(())
}

/// One finite player per cell, weighted by the cell length, choosing from
/// `grid`; player `j` is paid `∫_{K_j} U(t, h_y) dt` where `h_y` lifts the
/// joint tuple `y`.
pub fn discretize<G: ContinuumGame + ?Sized>(
    game: &G,
    partition: &IntervalPartition,
    grid: &[Rational],
) -> Result<Discretized> {
    discretize_with(Execution::default(), game, partition, grid)
}

pub fn discretize_with<G: ContinuumGame + ?Sized>(
    exec: Execution,
    game: &G,
    partition: &IntervalPartition,
    grid: &[Rational],
) -> Result<Discretized> {
    check_grid(grid)?;
    let m = partition.len();
    let labels: Vec<String> = grid.iter().map(format_rational).collect();
    let players: Vec<Player> = (0..m)
        .map(|j| Player::new(format!("K{}", j + 1), partition.weight(j), labels.clone()))
        .collect();
    let breaks: Vec<f64> = partition.breaks().iter().map(Scalar::to_f64).collect();
    let grid_f: Vec<f64> = grid.iter().map(Scalar::to_f64).collect();
    let indexer = crate::finite::JointIndexer::new(vec![grid.len(); m])?;
    let rows = exec.map(indexer.len(), |k| {
        let joint = indexer.decode(k);
        let f = FloatProfile {
            breaks: breaks.clone(),
            values: joint.iter().map(|&a| grid_f[a]).collect(),
        };
        (0..m)
            .map(|j| integrate_float(game, breaks[j], breaks[j + 1], &f))
            .collect::<Result<Vec<f64>>>()
    });
    let table = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let max_weight = (0..m)
        .map(|j| partition.weight(j))
        .max()
        .expect("partition has a cell");
    let bound = (game.bound() * max_weight).to_f64() + QUADRATURE_TOLERANCE;
    Ok(Discretized {
        game: FiniteGame::new(players, table, bound)?,
        partition: partition.clone(),
        grid: grid.to_vec(),
    })
}
