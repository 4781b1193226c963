//! Step-function strategy profiles on the player interval (0, 1], interval
//! partitions, partition nets and the weak test-integral geometry.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::{q, serde_q, serde_q_opt, serde_q_vec, Rational, Scalar};

/// Half-open interval `(lo, hi]` with `lo < hi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "serde_q")]
    pub lo: Rational,
    #[serde(with = "serde_q")]
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo >= hi || lo.is_negative() || hi > Rational::one() {
            return Err(invalid(format!("({lo}, {hi}] is not a nonempty subinterval of (0,1]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn length(&self) -> Rational {
        self.hi.clone() - self.lo.clone()
    }

    pub fn contains(&self, t: &Rational) -> bool {
        *t > self.lo && *t <= self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (self.lo.clone() + self.hi.clone()) / Rational::from_integer(2.into())
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = if self.lo > other.lo { &self.lo } else { &other.lo };
        let hi = if self.hi < other.hi { &self.hi } else { &other.hi };
        (lo < hi).then(|| Interval {
            lo: lo.clone(),
            hi: hi.clone(),
        })
    }
}

/// Finite union of half-open intervals, kept sorted, disjoint and merged.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn new(mut intervals: Vec<Interval>) -> Self {
        intervals.sort_by(|a, b| a.lo.cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => merged.push(iv),
            }
        }
        Self { intervals: merged }
    }

    pub fn single(iv: Interval) -> Self {
        Self { intervals: vec![iv] }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> Rational {
        self.intervals.iter().map(Interval::length).sum()
    }

    pub fn contains(&self, t: &Rational) -> bool {
        self.intervals.iter().any(|iv| iv.contains(t))
    }

    /// `(0,1]` minus this set.
    pub fn complement(&self) -> IntervalSet {
        let mut out = vec![];
        let mut cursor = Rational::zero();
        for iv in &self.intervals {
            if iv.lo > cursor {
                out.push(Interval {
                    lo: cursor.clone(),
                    hi: iv.lo.clone(),
                });
            }
            cursor = iv.hi.clone();
        }
        if cursor < Rational::one() {
            out.push(Interval {
                lo: cursor,
                hi: Rational::one(),
            });
        }
        IntervalSet { intervals: out }
    }

    pub fn sup(&self) -> Option<&Rational> {
        self.intervals.last().map(|iv| &iv.hi)
    }
}

/// A strategy profile `f: [0,1] -> [0,1]` constant on finitely many pieces
/// `(b_k, b_{k+1}]` with rational breakpoints `0 = b_0 < ... < b_m = 1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ProfileDoc", into = "ProfileDoc")]
pub struct StepProfile {
    breaks: Vec<Rational>,
    values: Vec<Rational>,
    at_zero: Option<Rational>,
}

#[derive(Serialize, Deserialize)]
struct ProfileDoc {
    #[serde(with = "serde_q_vec")]
    breaks: Vec<Rational>,
    #[serde(with = "serde_q_vec")]
    values: Vec<Rational>,
    #[serde(default, with = "serde_q_opt", skip_serializing_if = "Option::is_none")]
    at_zero: Option<Rational>,
}

impl TryFrom<ProfileDoc> for StepProfile {
    type Error = crate::error::Error;
    fn try_from(d: ProfileDoc) -> Result<Self> {
        let mut p = StepProfile::new(d.breaks, d.values)?;
        if let Some(z) = d.at_zero {
            p = p.with_value_at_zero(z)?;
        }
        Ok(p)
    }
}

impl From<StepProfile> for ProfileDoc {
    fn from(p: StepProfile) -> Self {
        ProfileDoc {
            breaks: p.breaks,
            values: p.values,
            at_zero: p.at_zero,
        }
    }
}

impl PartialEq for StepProfile {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.normalized(), other.normalized());
        a.breaks == b.breaks && a.values == b.values && self.at_zero == other.at_zero
    }
}

fn in_unit(v: &Rational) -> bool {
    !v.is_negative() && *v <= Rational::one()
}

impl StepProfile {
    pub fn new(breaks: Vec<Rational>, values: Vec<Rational>) -> Result<Self> {
        if breaks.len() < 2 || values.len() + 1 != breaks.len() {
            return Err(invalid("a profile needs m+1 breakpoints for m values"));
        }
        if !breaks[0].is_zero() || !breaks[breaks.len() - 1].is_one() {
            return Err(invalid("breakpoints must run from 0 to 1"));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("breakpoints must be strictly increasing"));
        }
        if let Some(v) = values.iter().find(|v| !in_unit(v)) {
            return Err(invalid(format!("profile value {v} outside [0,1]")));
        }
        Ok(Self::build(breaks, values, None))
    }

    fn build(breaks: Vec<Rational>, values: Vec<Rational>, at_zero: Option<Rational>) -> Self {
        Self {
            breaks,
            values,
            at_zero,
        }
    }

    /// Assembles a profile from pieces already known to be valid.
    pub(crate) fn from_parts_unchecked(breaks: Vec<Rational>, values: Vec<Rational>) -> Self {
        Self::build(breaks, values, None)
    }

    pub fn with_value_at_zero(mut self, v: Rational) -> Result<Self> {
        if !in_unit(&v) {
            return Err(invalid("value at 0 outside [0,1]"));
        }
        self.at_zero = Some(v);
        Ok(self)
    }

    pub fn constant(c: Rational) -> Result<Self> {
        Self::new(vec![Rational::zero(), Rational::one()], vec![c])
    }

    /// `c` on `(lo, hi]`, zero elsewhere.
    pub fn scaled_indicator(c: Rational, lo: Rational, hi: Rational) -> Result<Self> {
        let iv = Interval::new(lo, hi)?;
        let mut breaks = vec![Rational::zero()];
        let mut values = vec![];
        if !iv.lo.is_zero() {
            breaks.push(iv.lo.clone());
            values.push(Rational::zero());
        }
        values.push(c);
        if iv.hi < Rational::one() {
            breaks.push(iv.hi.clone());
            values.push(Rational::zero());
        }
        breaks.push(Rational::one());
        Self::new(breaks, values)
    }

    pub fn breaks(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn to_float(&self) -> FloatProfile {
        FloatProfile {
            breaks: self.breaks.iter().map(Scalar::to_f64).collect(),
            values: self.values.iter().map(Scalar::to_f64).collect(),
        }
    }

    pub fn at_zero(&self) -> Option<&Rational> {
        self.at_zero.as_ref()
    }

    pub fn interior_breaks(&self) -> &[Rational] {
        &self.breaks[1..self.breaks.len() - 1]
    }

    pub fn pieces(&self) -> impl Iterator<Item = (Interval, &Rational)> + '_ {
        self.breaks
            .windows(2)
            .zip(&self.values)
            .map(|(w, v)| (Interval { lo: w[0].clone(), hi: w[1].clone() }, v))
    }

    /// Index of the piece `(b_k, b_{k+1}]` containing `t > 0`.
    fn piece_index(&self, t: &Rational) -> usize {
        let first_ge = self.breaks.partition_point(|b| b < t);
        first_ge.saturating_sub(1).min(self.values.len() - 1)
    }

    pub fn value_at(&self, t: &Rational) -> Rational {
        if t.is_zero() {
            return self.at_zero.clone().unwrap_or_else(|| self.values[0].clone());
        }
        self.values[self.piece_index(t)].clone()
    }

    /// `∫_0^t f dλ`, exact.
    pub fn integral_to(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (w, v) in self.breaks.windows(2).zip(&self.values) {
            if w[0] >= *t {
                break;
            }
            let hi = if w[1] < *t { &w[1] } else { t };
            acc += v.clone() * (hi.clone() - w[0].clone());
        }
        acc
    }

    pub fn integral_over(&self, iv: &Interval) -> Rational {
        self.integral_to(&iv.hi) - self.integral_to(&iv.lo)
    }

    /// Merges adjacent pieces carrying the same value.
    pub fn normalized(&self) -> StepProfile {
        let mut breaks = vec![self.breaks[0].clone()];
        let mut values: Vec<Rational> = vec![];
        for (w, v) in self.breaks.windows(2).zip(&self.values) {
            if values.last() == Some(v) {
                *breaks.last_mut().expect("nonempty") = w[1].clone();
            } else {
                values.push(v.clone());
                breaks.push(w[1].clone());
            }
        }
        Self::build(breaks, values, self.at_zero.clone())
    }

    /// Pointwise combination `g(f(t), other(t))` over the common refinement.
    fn zip_with(&self, other: &StepProfile, g: impl Fn(&Rational, &Rational, &Rational) -> Rational) -> StepProfile {
        let mut breaks: Vec<Rational> = self.breaks.iter().chain(&other.breaks).cloned().collect();
        breaks.sort();
        breaks.dedup();
        let values = breaks
            .windows(2)
            .map(|w| {
                let mid = (w[0].clone() + w[1].clone()) / Rational::from_integer(2.into());
                g(&mid, &self.value_at(&mid), &other.value_at(&mid))
            })
            .collect();
        Self::build(breaks, values, self.at_zero.clone()).normalized()
    }

    /// `other` on `region`, `self` elsewhere: the concatenation `other_E // self`.
    pub fn splice(&self, region: &IntervalSet, other: &StepProfile) -> StepProfile {
        let mut extra = other.clone();
        let mut breaks: Vec<Rational> = other.breaks.clone();
        for iv in region.intervals() {
            breaks.push(iv.lo.clone());
            breaks.push(iv.hi.clone());
        }
        breaks.sort();
        breaks.dedup();
        extra = extra.refined_at(&breaks);
        self.zip_with(&extra, |t, mine, theirs| {
            if region.contains(t) {
                theirs.clone()
            } else {
                mine.clone()
            }
        })
    }

    fn refined_at(&self, extra: &[Rational]) -> StepProfile {
        let mut breaks: Vec<Rational> = self.breaks.iter().chain(extra).cloned().collect();
        breaks.sort();
        breaks.dedup();
        let values = breaks
            .windows(2)
            .map(|w| self.value_at(&((w[0].clone() + w[1].clone()) / Rational::from_integer(2.into()))))
            .collect();
        Self::build(breaks, values, self.at_zero.clone())
    }

    /// `a·self + (1-a)·other`, pointwise; `a` in [0,1].
    pub fn mix(&self, a: &Rational, other: &StepProfile) -> Result<StepProfile> {
        if !in_unit(a) {
            return Err(invalid("mixing weight outside [0,1]"));
        }
        let b = Rational::one() - a.clone();
        Ok(self.zip_with(other, |_, x, y| a.clone() * x.clone() + b.clone() * y.clone()))
    }

    /// `f + δ(1 - f)`, which stays in [0,1] for δ in [0,1].
    pub fn toward_one(&self, delta: &Rational) -> Result<StepProfile> {
        if !in_unit(delta) {
            return Err(invalid("shift outside [0,1]"));
        }
        let values = self
            .values
            .iter()
            .map(|v| v.clone() + delta.clone() * (Rational::one() - v.clone()))
            .collect();
        Ok(Self::build(self.breaks.clone(), values, self.at_zero.clone()))
    }
}

/// Float image of a [`StepProfile`], used by quadrature and by the fast
/// rejection pass of the blocking search.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatProfile {
    pub breaks: Vec<f64>,
    pub values: Vec<f64>,
}

impl FloatProfile {
    pub fn value_at(&self, t: f64) -> f64 {
        let first_ge = self.breaks.partition_point(|&b| b < t);
        self.values[first_ge.saturating_sub(1).min(self.values.len() - 1)]
    }

    pub fn integral_to(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for (w, v) in self.breaks.windows(2).zip(&self.values) {
            if w[0] >= t {
                break;
            }
            acc += v * (w[1].min(t) - w[0]);
        }
        acc
    }

    pub fn interior_breaks(&self) -> &[f64] {
        &self.breaks[1..self.breaks.len() - 1]
    }
}

/// Ordered cells `(b_j, b_{j+1}]` of positive length covering (0,1].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PartitionDoc", into = "PartitionDoc")]
pub struct IntervalPartition {
    breaks: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct PartitionDoc {
    #[serde(with = "serde_q_vec")]
    breaks: Vec<Rational>,
}

impl TryFrom<PartitionDoc> for IntervalPartition {
    type Error = crate::error::Error;
    fn try_from(d: PartitionDoc) -> Result<Self> {
        IntervalPartition::new(d.breaks)
    }
}

impl From<IntervalPartition> for PartitionDoc {
    fn from(p: IntervalPartition) -> Self {
        PartitionDoc { breaks: p.breaks }
    }
}

impl IntervalPartition {
    pub fn new(breaks: Vec<Rational>) -> Result<Self> {
        if breaks.len() < 2 || !breaks[0].is_zero() || !breaks[breaks.len() - 1].is_one() {
            return Err(invalid("partition breakpoints must run from 0 to 1"));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("partition breakpoints must be strictly increasing"));
        }
        Ok(Self { breaks })
    }

    /// `m` cells of equal length.
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(invalid("a partition needs at least one cell"));
        }
        Self::new((0..=m).map(|k| q(k as i64, m as i64)).collect())
    }

    pub fn breaks(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn len(&self) -> usize {
        self.breaks.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell(&self, j: usize) -> Interval {
        Interval {
            lo: self.breaks[j].clone(),
            hi: self.breaks[j + 1].clone(),
        }
    }

    pub fn cells(&self) -> Vec<Interval> {
        (0..self.len()).map(|j| self.cell(j)).collect()
    }

    pub fn weight(&self, j: usize) -> Rational {
        self.cell(j).length()
    }

    pub fn cell_of(&self, t: &Rational) -> Option<usize> {
        if *t <= Rational::zero() || *t > Rational::one() {
            return None;
        }
        Some(self.breaks.partition_point(|b| b < t) - 1)
    }

    /// Every breakpoint of `coarser` is a breakpoint here.
    pub fn refines(&self, coarser: &IntervalPartition) -> bool {
        coarser
            .breaks
            .iter()
            .all(|b| self.breaks.binary_search(b).is_ok())
    }

    pub fn is_union_of_cells(&self, set: &IntervalSet) -> bool {
        set.intervals().iter().all(|iv| {
            self.breaks.binary_search(&iv.lo).is_ok() && self.breaks.binary_search(&iv.hi).is_ok()
        })
    }

    pub fn union_of(&self, cells: &[usize]) -> IntervalSet {
        IntervalSet::new(cells.iter().map(|&j| self.cell(j)).collect())
    }

    /// Indices of the cells contained in `set` (assumed a union of cells).
    pub fn cells_in(&self, set: &IntervalSet) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| set.contains(&self.cell(j).midpoint()))
            .collect()
    }
}

/// The step profile equal to `values[j]` on cell `j`.
pub fn lift(partition: &IntervalPartition, values: &[Rational]) -> Result<StepProfile> {
    if values.len() != partition.len() {
        return Err(invalid(format!(
            "lift needs one value per cell ({} cells, {} values)",
            partition.len(),
            values.len()
        )));
    }
    StepProfile::new(partition.breaks.clone(), values.to_vec())
}

/// An anchor coalition that every stage from `from_stage` on must resolve
/// as a union of cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub from_stage: usize,
    pub set: IntervalSet,
}

/// Increasing sequence of interval partitions, each refining the last.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionNet {
    stages: Vec<IntervalPartition>,
    anchors: Vec<Anchor>,
}

impl PartitionNet {
    pub fn new(stages: Vec<IntervalPartition>, anchors: Vec<Anchor>) -> Result<Self> {
        if stages.is_empty() {
            return Err(invalid("a partition net needs at least one stage"));
        }
        for (k, w) in stages.windows(2).enumerate() {
            if !w[1].refines(&w[0]) {
                return Err(invalid(format!("stage {} does not refine stage {k}", k + 1)));
            }
        }
        for a in &anchors {
            if a.from_stage >= stages.len() {
                return Err(invalid("anchor introduced after the last stage"));
            }
            if let Some(k) = (a.from_stage..stages.len()).find(|&k| !stages[k].is_union_of_cells(&a.set)) {
                return Err(invalid(format!("anchor is not a union of cells at stage {k}")));
            }
        }
        Ok(Self { stages, anchors })
    }

    /// Uniform stages with the given cell counts.
    pub fn uniform(cells: &[usize]) -> Result<Self> {
        let stages = cells
            .iter()
            .map(|&m| IntervalPartition::uniform(m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(stages, vec![])
    }

    pub fn stages(&self) -> &[IntervalPartition] {
        &self.stages
    }

    pub fn anchors(&self) -> &[Anchor] {
        &self.anchors
    }
}

/// A bounded linear test function for the weak geometry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunction {
    /// `χ_(0, upper]`
    Indicator {
        #[serde(with = "serde_q")]
        upper: Rational,
    },
    /// `t ↦ 1`
    One,
}

impl TestFunction {
    pub fn integrate(&self, f: &StepProfile) -> Rational {
        match self {
            TestFunction::Indicator { upper } => f.integral_to(upper),
            TestFunction::One => f.integral_to(&Rational::one()),
        }
    }

    /// `∫ χ_cell · g`, i.e. the measure of the cell seen by this function.
    pub fn cell_mass(&self, cell: &Interval) -> Rational {
        match self {
            TestFunction::Indicator { upper } => {
                if *upper <= cell.lo {
                    Rational::zero()
                } else if *upper >= cell.hi {
                    cell.length()
                } else {
                    upper.clone() - cell.lo.clone()
                }
            }
            TestFunction::One => cell.length(),
        }
    }
}

/// Finite family of test functions; `|∫ (f - g) φ|` over the family is the
/// weak distance used for convergence diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFamily {
    pub functions: Vec<TestFunction>,
}

impl TestFamily {
    /// `χ_(0, k/2^level]` for `k = 1..2^level - 1`, plus the constant 1.
    pub fn dyadic(level: u32) -> Self {
        let den = 1i64 << level;
        let mut functions: Vec<TestFunction> = (1..den)
            .map(|k| TestFunction::Indicator { upper: q(k, den) })
            .collect();
        functions.push(TestFunction::One);
        Self { functions }
    }

    pub fn integrals(&self, f: &StepProfile) -> Vec<Rational> {
        self.functions.iter().map(|g| g.integrate(f)).collect()
    }

    pub fn distance(&self, f: &StepProfile, g: &StepProfile) -> Rational {
        self.functions
            .iter()
            .map(|phi| Signed::abs(&(phi.integrate(f) - phi.integrate(g))))
            .max_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal))
            .unwrap_or_else(Rational::zero)
    }
}
