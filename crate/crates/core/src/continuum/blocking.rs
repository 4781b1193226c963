//! Blocking search for continuum games at a finite resolution.
//!
//! Coalitions are unions of search-space cells and deviations are constant
//! per cell, plus the affine family `f + δ(1 - f)` on the coalition. The
//! universal quantifier over complement strategies is discharged by
//! enumerating grid values per complement cell, and "almost every member"
//! is checked at the sample points inside the coalition.

use serde::{Deserialize, Serialize};

use crate::continuum::game::ContinuumGame;
use crate::continuum::profile::{FloatProfile, Interval, IntervalPartition, IntervalSet, StepProfile};
use crate::error::{invalid, Result};
use crate::finite::Coalition;
use crate::par::Execution;
use crate::scalar::{serde_q, serde_q_vec, Rational, Scalar};

/// Attached to every report built on sampled blocking checks.
pub const RESOLUTION_CAVEAT: &str = "blocking is checked at finitely many sample points, \
for coalitions that are unions of search cells, against complement strategies that are \
constant per cell on the action grid; a certificate is a witness at that resolution and \
the absence of one is not a proof of core membership";

/// Float pass slack: gains within this distance of the threshold are
/// decided exactly.
const FLOAT_GUARD: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    pub partition: IntervalPartition,
    #[serde(with = "serde_q_vec")]
    pub grid: Vec<Rational>,
    #[serde(with = "serde_q_vec")]
    pub samples: Vec<Rational>,
    #[serde(with = "serde_q_vec")]
    pub affine_steps: Vec<Rational>,
}

impl SearchSpace {
    pub fn new(partition: IntervalPartition, grid: Vec<Rational>, samples: Vec<Rational>) -> Result<Self> {
        let zero = Rational::from_i64(0);
        let one = Rational::from_i64(1);
        if grid.is_empty() || grid.iter().any(|a| *a < zero || *a > one) {
            return Err(invalid("search grid must be a nonempty subset of [0,1]"));
        }
        if samples.is_empty() || samples.iter().any(|t| *t <= zero || *t > one) {
            return Err(invalid("sample points must be a nonempty subset of (0,1]"));
        }
        let mut samples = samples;
        samples.sort();
        samples.dedup();
        Ok(Self {
            partition,
            grid,
            samples,
            affine_steps: Vec::new(),
        })
    }

    pub fn with_affine_steps(mut self, steps: Vec<Rational>) -> Result<Self> {
        let zero = Rational::from_i64(0);
        let one = Rational::from_i64(1);
        if steps.iter().any(|d| *d <= zero || *d > one) {
            return Err(invalid("affine steps must lie in (0,1]"));
        }
        self.affine_steps = steps;
        Ok(self)
    }

    fn samples_in(&self, set: &IntervalSet) -> Vec<Rational> {
        self.samples.iter().filter(|t| set.contains(t)).cloned().collect()
    }
}

/// A coalition `E`, its strategy `f_E` and the sampled worst-case margin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuumCertificate {
    pub coalition: IntervalSet,
    /// Only its restriction to the coalition is meaningful.
    pub deviation: StepProfile,
    #[serde(with = "serde_q")]
    pub epsilon: Rational,
    /// Minimum over checked (complement, sample) pairs of the gain minus
    /// `epsilon`.
    #[serde(with = "serde_q")]
    pub margin: Rational,
}

/// Outcome of an exact re-verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuumVerification {
    pub holds: bool,
    /// Minimum of gain minus `epsilon` over every check performed.
    #[serde(with = "serde_q")]
    pub margin: Rational,
    pub checks: usize,
}

/// Complement cells: `∁E` cut at the partition breakpoints. Pieces starting
/// at or beyond `horizon` cannot influence a causal payoff at the samples.
fn complement_pieces(
    partition: &IntervalPartition,
    coalition: &IntervalSet,
    horizon: Option<&Rational>,
) -> (Vec<Interval>, Vec<Interval>) {
    let mut relevant = vec![];
    let mut inert = vec![];
    for gap in coalition.complement().intervals() {
        for cell in partition.cells() {
            if let Some(piece) = cell.intersect(gap) {
                match horizon {
                    Some(h) if piece.lo >= *h => inert.push(piece),
                    _ => relevant.push(piece),
                }
            }
        }
    }
    (relevant, inert)
}

/// Enumerates complement assignments: the constant ones first, then every
/// tuple in lexicographic order. Constants are the usual worst cases, so
/// failing deviations are usually rejected within a few steps.
struct ComplementOrder {
    slots: usize,
    grid: usize,
    next: usize,
    total: usize,
}

impl ComplementOrder {
    fn new(slots: usize, grid: usize) -> Self {
        let lex = grid.checked_pow(slots as u32).unwrap_or(usize::MAX);
        let total = if slots == 0 { 1 } else { grid.saturating_add(lex) };
        Self { slots, grid, next: 0, total }
    }

    fn advance(&mut self, out: &mut [usize]) -> bool {
        if self.next >= self.total {
            return false;
        }
        let k = self.next;
        self.next += 1;
        if self.slots == 0 {
            return true;
        }
        if k < self.grid {
            out.fill(k);
        } else {
            let mut r = k - self.grid;
            for slot in out.iter_mut().rev() {
                *slot = r % self.grid;
                r /= self.grid;
            }
        }
        true
    }
}

#[derive(Clone)]
enum Slot {
    Fixed(Rational),
    Free(usize),
    Inert,
}

/// The profile `f_E // h_∁E` as a list of pieces with the complement left
/// open.
struct Layout {
    breaks: Vec<Rational>,
    breaks_f: Vec<f64>,
    slots: Vec<Slot>,
    free: usize,
}

impl Layout {
    fn new(relevant: &[Interval], inert: &[Interval], coalition: &IntervalSet, deviation: &StepProfile) -> Self {
        let mut pieces: Vec<(Interval, Slot)> = vec![];
        for (k, iv) in relevant.iter().enumerate() {
            pieces.push((iv.clone(), Slot::Free(k)));
        }
        for iv in inert {
            pieces.push((iv.clone(), Slot::Inert));
        }
        for iv in coalition.intervals() {
            for (piece, v) in deviation.pieces() {
                if let Some(part) = piece.intersect(iv) {
                    pieces.push((part, Slot::Fixed(v.clone())));
                }
            }
        }
        pieces.sort_by(|a, b| a.0.lo.cmp(&b.0.lo));
        let mut breaks = vec![Rational::from_i64(0)];
        breaks.extend(pieces.iter().map(|(iv, _)| iv.hi.clone()));
        let breaks_f = breaks.iter().map(Scalar::to_f64).collect();
        Self {
            breaks,
            breaks_f,
            slots: pieces.into_iter().map(|(_, s)| s).collect(),
            free: relevant.len(),
        }
    }

    fn exact(&self, grid: &[Rational], comp: &[usize]) -> StepProfile {
        let values = self
            .slots
            .iter()
            .map(|s| match s {
                Slot::Fixed(v) => v.clone(),
                Slot::Free(k) => grid[comp[*k]].clone(),
                Slot::Inert => grid[0].clone(),
            })
            .collect();
        StepProfile::from_parts_unchecked(self.breaks.clone(), values)
    }

    fn fill_float(&self, fixed: &[f64], grid: &[f64], comp: &[usize], out: &mut FloatProfile) {
        out.breaks.clone_from(&self.breaks_f);
        out.values.clear();
        out.values.extend(self.slots.iter().zip(fixed).map(|(s, &v)| match s {
            Slot::Fixed(_) => v,
            Slot::Free(k) => grid[comp[*k]],
            Slot::Inert => grid[0],
        }));
    }

    fn fixed_f64(&self) -> Vec<f64> {
        self.slots
            .iter()
            .map(|s| match s {
                Slot::Fixed(v) => v.to_f64(),
                _ => 0.0,
            })
            .collect()
    }
}

struct Baseline {
    samples: Vec<Rational>,
    samples_f: Vec<f64>,
    exact: Vec<Rational>,
    float: Vec<f64>,
}

fn baseline<G: ContinuumGame + ?Sized>(game: &G, status_quo: &StepProfile, samples: &[Rational]) -> Baseline {
    let sq_f = status_quo.to_float();
    Baseline {
        samples: samples.to_vec(),
        samples_f: samples.iter().map(Scalar::to_f64).collect(),
        exact: samples.iter().map(|t| game.payoff(t, status_quo)).collect(),
        float: samples.iter().map(|t| game.payoff_f64(t.to_f64(), &sq_f)).collect(),
    }
}

/// Exact minimum of gain minus `epsilon` over every complement assignment
/// and sample, or `None` as soon as one check fails.
fn exact_margin<G: ContinuumGame + ?Sized>(
    game: &G,
    layout: &Layout,
    grid: &[Rational],
    base: &Baseline,
    epsilon: &Rational,
) -> Option<Rational> {
    let mut comp = vec![0; layout.free];
    let mut order = ComplementOrder::new(layout.free, grid.len());
    let mut min: Option<Rational> = None;
    while order.advance(&mut comp) {
        let profile = layout.exact(grid, &comp);
        for (t, before) in base.samples.iter().zip(&base.exact) {
            let m = game.payoff(t, &profile) - before.clone() - epsilon.clone();
            if m <= Rational::from_i64(0) {
                return None;
            }
            if min.as_ref().map_or(true, |x| m < *x) {
                min = Some(m);
            }
        }
    }
    min
}

/// Fast float screen; borderline checks are settled exactly.
fn passes_screen<G: ContinuumGame + ?Sized>(
    game: &G,
    layout: &Layout,
    grid: &[Rational],
    grid_f: &[f64],
    base: &Baseline,
    epsilon: &Rational,
    scratch: &mut FloatProfile,
) -> bool {
    let eps_f = epsilon.to_f64();
    let fixed = layout.fixed_f64();
    let mut comp = vec![0; layout.free];
    let mut order = ComplementOrder::new(layout.free, grid.len());
    while order.advance(&mut comp) {
        layout.fill_float(&fixed, grid_f, &comp, scratch);
        for k in 0..base.samples.len() {
            let gain = game.payoff_f64(base.samples_f[k], scratch) - base.float[k] - eps_f;
            if gain < -FLOAT_GUARD {
                return false;
            }
            if gain <= FLOAT_GUARD {
                let profile = layout.exact(grid, &comp);
                let exact = game.payoff(&base.samples[k], &profile) - base.exact[k].clone() - epsilon.clone();
                if exact <= Rational::from_i64(0) {
                    return false;
                }
            }
        }
    }
    true
}

fn check_epsilon(epsilon: &Rational) -> Result<()> {
    if *epsilon < Rational::from_i64(0) {
        return Err(invalid("epsilon must be nonnegative"));
    }
    Ok(())
}

fn deviations_for(space: &SearchSpace, status_quo: &StepProfile, cells: &[usize]) -> Vec<StepProfile> {
    let g = space.grid.len();
    let total = g.checked_pow(cells.len() as u32).unwrap_or(usize::MAX);
    let mut out = Vec::new();
    let mut values = vec![Rational::from_i64(0); space.partition.len()];
    for k in 0..total {
        let mut r = k;
        for &c in cells.iter().rev() {
            values[c] = space.grid[r % g].clone();
            r /= g;
        }
        out.push(StepProfile::from_parts_unchecked(space.partition.breaks().to_vec(), values.clone()));
    }
    for delta in &space.affine_steps {
        if let Ok(p) = status_quo.toward_one(delta) {
            out.push(p);
        }
    }
    out
}

/// First blocking certificate in (coalition size, coalition lex, constant
/// deviations in lex order, then affine steps) order, verified exactly at
/// the samples. `None` carries [`RESOLUTION_CAVEAT`].
pub fn find_blocking_continuum<G: ContinuumGame + ?Sized>(
    game: &G,
    status_quo: &StepProfile,
    epsilon: &Rational,
    space: &SearchSpace,
) -> Result<Option<ContinuumCertificate>> {
    find_blocking_continuum_with(Execution::default(), game, status_quo, epsilon, space)
}

pub fn find_blocking_continuum_with<G: ContinuumGame + ?Sized>(
    exec: Execution,
    game: &G,
    status_quo: &StepProfile,
    epsilon: &Rational,
    space: &SearchSpace,
) -> Result<Option<ContinuumCertificate>> {
    check_epsilon(epsilon)?;
    let coalitions = Coalition::all(space.partition.len());
    let grid_f: Vec<f64> = space.grid.iter().map(Scalar::to_f64).collect();
    Ok(exec.find_map_first(coalitions.len(), |c| {
        let cells = coalitions[c].members();
        let set = space.partition.union_of(cells);
        let samples = space.samples_in(&set);
        if samples.is_empty() {
            return None;
        }
        let base = baseline(game, status_quo, &samples);
        let horizon = game.is_causal().then(|| samples.last().expect("nonempty"));
        let (relevant, inert) = complement_pieces(&space.partition, &set, horizon);
        let mut scratch = FloatProfile {
            breaks: vec![],
            values: vec![],
        };
        for deviation in deviations_for(space, status_quo, cells) {
            let layout = Layout::new(&relevant, &inert, &set, &deviation);
            if !passes_screen(game, &layout, &space.grid, &grid_f, &base, epsilon, &mut scratch) {
                continue;
            }
            if let Some(margin) = exact_margin(game, &layout, &space.grid, &base, epsilon) {
                return Some(ContinuumCertificate {
                    coalition: set,
                    deviation,
                    epsilon: epsilon.clone(),
                    margin,
                });
            }
        }
        None
    }))
}

/// Re-checks a certificate from scratch with exact arithmetic: every
/// complement assignment that is constant on the pieces of `∁E` cut by the
/// space's partition, at every sample inside `E`.
pub fn verify_continuum_certificate<G: ContinuumGame + ?Sized>(
    game: &G,
    status_quo: &StepProfile,
    cert: &ContinuumCertificate,
    space: &SearchSpace,
) -> Result<ContinuumVerification> {
    check_epsilon(&cert.epsilon)?;
    if cert.coalition.is_empty() {
        return Err(invalid("certificate coalition is empty"));
    }
    let samples = space.samples_in(&cert.coalition);
    if samples.is_empty() {
        return Err(invalid("no sample point lies inside the certificate coalition"));
    }
    let horizon = samples.last().expect("nonempty").clone();
    let mut pieces = vec![];
    for gap in cert.coalition.complement().intervals() {
        for cell in space.partition.cells() {
            if let Some(p) = cell.intersect(gap) {
                if !(game.is_causal() && p.lo >= horizon) {
                    pieces.push(p);
                }
            }
        }
    }
    let before: Vec<Rational> = samples.iter().map(|t| game.payoff(t, status_quo)).collect();
    let g = space.grid.len();
    let total = g.checked_pow(pieces.len() as u32).ok_or_else(|| invalid("complement space too large"))?;
    let mut margin: Option<Rational> = None;
    let mut checks = 0;
    let mut holds = true;
    for k in 0..total {
        let mut r = k;
        let mut comp = StepProfile::constant(space.grid[0].clone())?;
        for piece in pieces.iter().rev() {
            let v = space.grid[r % g].clone();
            r /= g;
            let region = IntervalSet::single(piece.clone());
            comp = comp.splice(&region, &StepProfile::constant(v)?);
        }
        let profile = comp.splice(&cert.coalition, &cert.deviation);
        for (t, b) in samples.iter().zip(&before) {
            checks += 1;
            let m = game.payoff(t, &profile) - b.clone() - cert.epsilon.clone();
            if m <= Rational::from_i64(0) {
                holds = false;
            }
            if margin.as_ref().map_or(true, |x| m < *x) {
                margin = Some(m);
            }
        }
    }
    Ok(ContinuumVerification {
        holds,
        margin: margin.expect("at least one check"),
        checks,
    })
}
