//! Payoff evaluation for the three-coin and six-coin setups.
//!
//! Three-coin: players mix directly over the symmetric game's pure profiles.
//! Six-coin: players mix over which of their two coins (settings) to use,
//! and payoffs are trilinear in the context weights and linear in the shared
//! 64-entry behavior. The outcome-to-payoff mapping sends outcome +1 to the
//! first-strategy payoff role and -1 to the second, so for instance the
//! outcome (+,-,+) earns the coefficient triple of the profile (1,2,1).

use crate::behavior::{
    check_embedding_zeros, zero_constrained_indices, Behavior, OutcomeTriple,
    CONTEXT_ORDER, DEFAULT_LINEAR_TOL,
};
use crate::game::{PayoffTriple, PureProfile, SymmetricGame};
use crate::scalar::Scalar;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PayoffError {
    #[error("probability {name} = {value} outside [0,1]")]
    ProbabilityOutOfRange { name: &'static str, value: String },
    #[error("behavior violates the embedding zero constraints at {0:?}")]
    ZeroConstraintViolated(Vec<usize>),
}

/// Each player's probability of choosing their first strategy / coin /
/// direction.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedProfile<S> {
    pub x: S,
    pub y: S,
    pub z: S,
}

impl<S: Scalar> MixedProfile<S> {
    pub fn new(x: S, y: S, z: S) -> Result<Self, PayoffError> {
        for (name, v) in [("x", &x), ("y", &y), ("z", &z)] {
            if !v.is_finite_value() || *v < S::zero() || *v > S::one() {
                return Err(PayoffError::ProbabilityOutOfRange { name, value: format!("{v}") });
            }
        }
        Ok(MixedProfile { x, y, z })
    }

    /// The deterministic profile at a corner of the cube (first choice -> 1).
    pub fn corner(profile: PureProfile) -> Self {
        let ind = |c| match c {
            crate::game::Choice::First => S::one(),
            crate::game::Choice::Second => S::zero(),
        };
        MixedProfile { x: ind(profile.alice), y: ind(profile.bob), z: ind(profile.chris) }
    }

    /// Probability that the players jointly select `context`.
    pub fn context_weight(&self, context: &PureProfile) -> S {
        use crate::game::Choice::First;
        let term = |prob: &S, choice| {
            if choice == First {
                prob.clone()
            } else {
                S::one() - prob.clone()
            }
        };
        term(&self.x, context.alice) * term(&self.y, context.bob) * term(&self.z, context.chris)
    }
}

/// Mixed-strategy payoffs in the three-coin setup: the trilinear expansion
/// of the symmetric game's pure payoffs with weights x, y, z.
pub fn three_coin_payoffs<S: Scalar>(
    game: &SymmetricGame<S>,
    profile: &MixedProfile<S>,
) -> PayoffTriple<S> {
    let mut total = PayoffTriple::new(S::zero(), S::zero(), S::zero());
    for pure in PureProfile::CANONICAL {
        let w = profile.context_weight(&pure);
        let payoffs = game.pure_payoffs(pure);
        total.alice = total.alice + w.clone() * payoffs.alice;
        total.bob = total.bob + w.clone() * payoffs.bob;
        total.chris = total.chris + w * payoffs.chris;
    }
    total
}

/// Payoff coefficient triple attached to one measurement outcome: the
/// symmetric game's payoffs at the profile the outcome selects (+1 in the
/// first-strategy role).
///
/// Full mapping, in within-block outcome order:
///   (+,+,+) -> (a,a,a)   (+,-,+) -> (d,b,d)   (+,+,-) -> (d,d,b)
///   (+,-,-) -> (e,t,t)   (-,+,+) -> (b,d,d)   (-,-,+) -> (t,t,e)
///   (-,+,-) -> (t,e,t)   (-,-,-) -> (o,o,o)
/// with (a,b,d,e,t,o) = (alpha, beta, delta, epsilon, theta, omega).
pub fn outcome_payoff_coefficients<S: Scalar>(
    game: &SymmetricGame<S>,
    outcome: &OutcomeTriple,
) -> PayoffTriple<S> {
    game.pure_payoffs(outcome.as_profile())
}

/// Mixed-strategy payoffs over an arbitrary behavior: contexts weighted by
/// the players' coin choices, outcomes weighted by the behavior.
pub fn payoffs_from_joint<S: Scalar>(
    game: &SymmetricGame<S>,
    behavior: &Behavior<S>,
    profile: &MixedProfile<S>,
) -> PayoffTriple<S> {
    let mut total = PayoffTriple::new(S::zero(), S::zero(), S::zero());
    for (ci, ctx) in CONTEXT_ORDER.iter().enumerate() {
        let w = profile.context_weight(ctx);
        if w == S::zero() {
            continue;
        }
        let mut block = PayoffTriple::new(S::zero(), S::zero(), S::zero());
        for (oi, outcome) in OutcomeTriple::CANONICAL.iter().enumerate() {
            let c = outcome_payoff_coefficients(game, outcome);
            let p = behavior.at(ci, oi);
            block.alice = block.alice + c.alice * p.clone();
            block.bob = block.bob + c.bob * p.clone();
            block.chris = block.chris + c.chris * p.clone();
        }
        total.alice = total.alice + w.clone() * block.alice;
        total.bob = total.bob + w.clone() * block.bob;
        total.chris = total.chris + w * block.chris;
    }
    total
}

/// Pure-strategy payoffs over a zero-constrained behavior, evaluated through
/// the shortened payoff relations in which only the entries that can be
/// nonzero appear. Must agree with [`payoffs_from_joint`] at the same pure
/// profile.
pub fn reduced_payoffs<S: Scalar>(
    game: &SymmetricGame<S>,
    behavior: &Behavior<S>,
    profile: PureProfile,
) -> Result<PayoffTriple<S>, PayoffError> {
    let tol = S::default_tol(DEFAULT_LINEAR_TOL);
    let zeros = check_embedding_zeros(behavior, &tol);
    if !zeros.pass {
        return Err(PayoffError::ZeroConstraintViolated(
            zeros.violations.into_iter().map(|(i, _)| i).collect(),
        ));
    }
    let ci = profile.canonical_index();
    let zero_set = zero_constrained_indices();
    let mut total = PayoffTriple::new(S::zero(), S::zero(), S::zero());
    for (oi, outcome) in OutcomeTriple::CANONICAL.iter().enumerate() {
        if zero_set.contains(&crate::behavior::entry_index(ci, oi)) {
            continue;
        }
        let c = outcome_payoff_coefficients(game, outcome);
        let p = behavior.at(ci, oi);
        total.alice = total.alice + c.alice * p.clone();
        total.bob = total.bob + c.bob * p.clone();
        total.chris = total.chris + c.chris * p.clone();
    }
    Ok(total)
}
