//! Finite NTU strategic games: payoff evaluation, blocking search,
//! weak-core and alpha-core membership, and the characteristic-function
//! machinery `V(S)` with its balancedness check.

pub mod balanced;
pub mod blocking;
pub mod characteristic;
pub mod game;
pub mod json;

pub use balanced::{
    balancing_weights, check_balanced, minimal_balanced_collections, BalancedCollection,
};
pub use blocking::{
    find_blocking, find_blocking_with, first_weak_core_member, is_unblocked, verify_certificate,
    weak_core_members, weak_core_members_with, worst_case_gain, BlockingCertificate,
};
pub use characteristic::{core_point_from_characteristic, h_value, in_v, payoff_lattice, CoreSearch};
pub use game::{Coalition, FiniteGame, Joint, JointIndexer, PayoffVector, Player};
pub use json::{certificate_from_json, certificate_to_json, game_from_json, game_to_json, LoadedGame};
