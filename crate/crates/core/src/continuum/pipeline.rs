//! The discretize-and-limit pipeline: one finite game per stage of a
//! partition net, a finite weak-core member per stage, and diagnostics on
//! how the lifted members settle.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::continuum::blocking::{find_blocking_continuum_with, ContinuumCertificate, SearchSpace, RESOLUTION_CAVEAT};
use crate::continuum::game::{discretize_with, ContinuumGame, Discretized};
use crate::continuum::profile::{PartitionNet, StepProfile, TestFamily};
use crate::error::{invalid, Result};
use crate::finite::{first_weak_core_member, Joint};
use crate::par::Execution;
use crate::scalar::{dyadic_midpoints, q, serde_q, serde_q_opt, serde_q_vec, Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    #[serde(with = "serde_q_vec")]
    pub grid: Vec<Rational>,
    #[serde(with = "serde_q")]
    pub epsilon: Rational,
    pub tests: TestFamily,
    /// How many times a stage may halve the grid spacing when its finite
    /// weak-core is empty.
    pub grid_refinements: usize,
    /// Samples for the final continuum blocking check.
    #[serde(with = "serde_q_vec")]
    pub samples: Vec<Rational>,
    #[serde(with = "serde_q_vec")]
    pub affine_steps: Vec<Rational>,
}

impl PipelineConfig {
    pub fn new(grid: Vec<Rational>, epsilon: Rational) -> Self {
        Self {
            grid,
            epsilon,
            tests: TestFamily::dyadic(3),
            grid_refinements: 1,
            samples: dyadic_midpoints(6),
            affine_steps: vec![q(1, 4), q(1, 2)],
        }
    }

    /// Slack used inside every finite game.
    pub fn stage_epsilon(&self) -> Rational {
        self.epsilon.clone() / Rational::from_i64(4)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub cells: usize,
    #[serde(with = "serde_q_vec")]
    pub grid: Vec<Rational>,
    pub grid_refinements_used: usize,
    pub joint: Joint,
    pub profile: StepProfile,
    #[serde(with = "serde_q_vec")]
    pub test_integrals: Vec<Rational>,
    /// `g_j` at the member, one per cell.
    pub finite_payoffs: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub game: String,
    pub config: PipelineConfig,
    #[serde(with = "serde_q")]
    pub stage_epsilon: Rational,
    pub stages: Vec<StageReport>,
    /// Weak distance between consecutive stage profiles.
    #[serde(with = "serde_q_vec")]
    pub successive_distances: Vec<Rational>,
    pub final_profile: Option<StepProfile>,
    pub final_search: Option<SearchSpace>,
    pub final_certificate: Option<ContinuumCertificate>,
    /// Largest weak distance between consecutive stages.
    #[serde(with = "serde_q_opt")]
    pub max_successive_distance: Option<Rational>,
    pub failure: Option<String>,
    pub caveat: String,
}

impl PipelineReport {
    pub fn converged(&self) -> bool {
        self.failure.is_none() && self.final_profile.is_some()
    }

    /// The final profile exists and the final search found no blocker.
    pub fn final_unblocked(&self) -> bool {
        self.converged() && self.final_certificate.is_none()
    }

    /// `(stage, test function index, integral)` rows for tabular export.
    pub fn integral_rows(&self) -> Vec<(usize, usize, Rational)> {
        self.stages
            .iter()
            .enumerate()
            .flat_map(|(s, st)| {
                st.test_integrals
                    .iter()
                    .enumerate()
                    .map(move |(k, v)| (s, k, v.clone()))
            })
            .collect()
    }
}

fn refine_grid(grid: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(2 * grid.len());
    for w in grid.windows(2) {
        out.push(w[0].clone());
        out.push((w[0].clone() + w[1].clone()) / Rational::from_i64(2));
    }
    out.extend(grid.last().cloned());
    out
}

/// Candidate order: closest to the previous stage in the test integrals,
/// then largest total payoff, then joint index.
fn candidate_order(disc: &Discretized, tests: &TestFamily, previous: Option<&[f64]>) -> Vec<Joint> {
    let cells = disc.partition.cells();
    let mass: Vec<Vec<f64>> = tests
        .functions
        .iter()
        .map(|phi| cells.iter().map(|c| phi.cell_mass(c).to_f64()).collect())
        .collect();
    let grid_f: Vec<f64> = disc.grid.iter().map(Scalar::to_f64).collect();
    let game = &disc.game;
    let mut keyed: Vec<(f64, f64, usize)> = (0..game.joint_count())
        .map(|k| {
            let joint = game.indexer().decode(k);
            let dist = previous.map_or(0.0, |prev| {
                mass.iter()
                    .zip(prev)
                    .map(|(row, p)| {
                        let v: f64 = row.iter().zip(&joint).map(|(m, &a)| m * grid_f[a]).sum();
                        (v - p).abs()
                    })
                    .fold(0.0, f64::max)
            });
            let total: f64 = (0..game.n()).map(|i| *game.payoff_at(k, i)).sum();
            (dist, -total, k)
        })
        .collect();
    keyed.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap_or(Ordering::Equal)
            .then(a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
            .then(a.2.cmp(&b.2))
    });
    keyed.into_iter().map(|(_, _, k)| game.indexer().decode(k)).collect()
}

/// Runs the pipeline over every stage of `net`. Failures (an empty finite
/// weak-core after the grid budget) are reported, not raised.
pub fn existence_pipeline<G: ContinuumGame + ?Sized>(
    game: &G,
    net: &PartitionNet,
    config: &PipelineConfig,
) -> Result<PipelineReport> {
    existence_pipeline_with(Execution::default(), game, net, config)
}

pub fn existence_pipeline_with<G: ContinuumGame + ?Sized>(
    exec: Execution,
    game: &G,
    net: &PartitionNet,
    config: &PipelineConfig,
) -> Result<PipelineReport> {
    if config.epsilon <= Rational::from_i64(0) {
        return Err(invalid("pipeline epsilon must be positive"));
    }
    let stage_eps = config.stage_epsilon().to_f64();
    let mut stages: Vec<StageReport> = vec![];
    let mut failure = None;
    let mut last_grid = config.grid.clone();
    for partition in net.stages() {
        let previous: Option<Vec<f64>> = stages
            .last()
            .map(|s| s.test_integrals.iter().map(Scalar::to_f64).collect());
        let mut grid = config.grid.clone();
        let mut found = None;
        for attempt in 0..=config.grid_refinements {
            let disc = discretize_with(exec, game, partition, &grid)?;
            let order = candidate_order(&disc, &config.tests, previous.as_deref());
            if let Some(joint) = first_weak_core_member(exec, &disc.game, &stage_eps, &order) {
                found = Some((disc, joint, attempt));
                break;
            }
            grid = refine_grid(&grid);
        }
        let Some((disc, joint, used)) = found else {
            failure = Some(format!(
                "finite weak-core empty at {} cells after {} grid refinements",
                partition.len(),
                config.grid_refinements
            ));
            break;
        };
        let profile = disc.profile_of(&joint)?;
        let k = disc.game.indexer().index(&joint);
        stages.push(StageReport {
            cells: partition.len(),
            grid: disc.grid.clone(),
            grid_refinements_used: used,
            finite_payoffs: (0..disc.game.n()).map(|i| *disc.game.payoff_at(k, i)).collect(),
            test_integrals: config.tests.integrals(&profile),
            joint,
            profile,
        });
        last_grid = disc.grid;
    }
    let successive_distances: Vec<Rational> = stages
        .windows(2)
        .map(|w| config.tests.distance(&w[0].profile, &w[1].profile))
        .collect();
    let max_successive_distance = successive_distances.iter().max().cloned();
    let (final_profile, final_search, final_certificate) = match (&failure, stages.last()) {
        (None, Some(last)) => {
            let partition = net.stages().last().expect("nonempty net").clone();
            let space = SearchSpace::new(partition, last_grid, config.samples.clone())?
                .with_affine_steps(config.affine_steps.clone())?;
            let cert = find_blocking_continuum_with(exec, game, &last.profile, &config.epsilon, &space)?;
            (Some(last.profile.clone()), Some(space), cert)
        }
        _ => (None, None, None),
    };
    Ok(PipelineReport {
        game: game.name().to_string(),
        config: config.clone(),
        stage_epsilon: config.stage_epsilon(),
        stages,
        successive_distances,
        max_successive_distance,
        final_profile,
        final_search,
        final_certificate,
        failure,
        caveat: RESOLUTION_CAVEAT.to_string(),
    })
}
