//! Three-player symmetric games played over 64-entry joint-probability
//! behaviors in the three-observer EPR-Bohm setting.
//!
//! The crate models the full pipeline: defining symmetric games and
//! classifying generalized Prisoner's Dilemmas ([`game`]), representing and
//! constraining behaviors ([`behavior`]), evaluating payoffs over coins or
//! behaviors ([`payoff`]), verifying and enumerating Nash equilibria
//! ([`equilibrium`]), generating behaviors from tripartite quantum states
//! ([`quantum`]), and searching for behaviors that make full cooperation an
//! equilibrium ([`search`]). All probability and payoff arithmetic is
//! generic over [`scalar::Scalar`], so every analysis can run either in
//! `f64` or exactly over arbitrary-precision rationals.

pub mod behavior;
pub mod equilibrium;
pub mod files;
pub mod game;
pub mod payoff;
pub mod quantum;
pub mod search;
pub mod scalar;
mod simplex;

pub use behavior::{Behavior, CoinParameters, FactorizabilityResult, IndependentSet};
pub use game::{GeneralThreePlayerGame, PayoffTriple, PureProfile, SymmetricGame};
pub use payoff::MixedProfile;
pub use scalar::Scalar;
