//! Games in distribution form over `A0 = {0,1,2,3}` whose weak-core is empty
//! through a four-stage blocking cycle, and a smoothed variant whose
//! weak-core stays empty while best responses exist.

mod blocking;
mod game;
mod params;
mod report;

pub use blocking::{
    anonymous_certificate, deviator_mass_gain, find_blocking_anonymous, verify_anonymous_certificate,
};
pub use game::{
    cell_profiles, constant_profile, payoff_w, payoff_w_tilde, AnonymousGame, PayoffKind, RemainderPolicy,
    ValueTable,
};
pub use params::{tv_distance, AnonymousParams, Distribution, ACTIONS, CELLS, CELL_NAMES};
pub use report::{
    best_response_check, blocking_cycle_report, blocking_cycle_report_at, contrast_report, focal_pairs, sweep_profiles,
    BestResponseReport, CellCheck, ContrastReport, CycleReport, FocalEntry, ProfileEntry, SweepReport,
    SweepSummary,
};
