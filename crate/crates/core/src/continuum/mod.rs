//! Continuum-player games on `[0,1]`: step profiles, partition nets, the
//! discretized finite games `G_π`, sampled blocking search and the limit
//! pipeline.

pub mod blocking;
pub mod equi_usc;
pub mod game;
pub mod pipeline;
pub mod profile;
pub mod quadrature;

pub use blocking::{
    find_blocking_continuum, find_blocking_continuum_with, verify_continuum_certificate,
    ContinuumCertificate, ContinuumVerification, SearchSpace, RESOLUTION_CAVEAT,
};
pub use equi_usc::{equi_usc_falsifier, indicator_probes, t_oscillation, EquiUscWitness, Neighborhood};
pub use game::{discretize, discretize_with, integrate_payoff, ConstantGame, ContinuumGame, Discretized, MeanGame};
pub use pipeline::{existence_pipeline, PipelineConfig, PipelineReport, StageReport};
pub use profile::{
    lift, Anchor, FloatProfile, Interval, IntervalPartition, IntervalSet, PartitionNet, StepProfile,
    TestFamily, TestFunction,
};
