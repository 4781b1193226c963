//! Closed-form continuum fixtures built on the running average `Γ` and its
//! running supremum `G`, with the constructive blockers from their
//! emptiness arguments.

pub mod blockers;
pub mod payoffs;
pub mod running;

pub use blockers::{
    blocker_space, example1_blocker, example1_slack, example2_alpha_blocker, five_point_grid, grid_profiles,
};
pub use payoffs::{payoff_example1, payoff_example2, ConcaveTest, Example1, Example2};
pub use running::{gamma, running_sup};
