//! Nash equilibrium verification and the reduced equilibrium conditions of
//! the zero-constrained game.
//!
//! Payoffs are affine in each player's own mixing probability, so unilateral
//! deviations only need checking at the probability corners 0 and 1. On top
//! of the generic verifier this module provides the three specialized
//! reductions: the delta-coefficient brackets for factorizable
//! zero-constrained behaviors, the full-cooperation margins in ratio form,
//! and the full-defection persistence margins.

use crate::behavior::{
    check_embedding_zeros, check_reduced_constraints, factorizability_certificate, Behavior,
    FactorizabilityResult, DEFAULT_PRODUCT_TOL,
};
use crate::game::{Player, PureProfile, SymmetricGame};
use crate::payoff::{payoffs_from_joint, MixedProfile};
use crate::scalar::Scalar;
use thiserror::Error;

/// Default tolerance on equilibrium margins; ties (margin exactly zero)
/// count as equilibria, matching the weak inequalities.
pub const DEFAULT_NE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum EquilibriumError {
    #[error("behavior violates preconditions: {0:?}")]
    ConstraintViolation(Vec<String>),
    #[error("behavior is not a zero-constrained factorizable behavior: {0}")]
    NotFactorizable(String),
    #[error("ratio form requires beta > 0, got {0}")]
    NonPositiveBeta(String),
    #[error("ratio form requires nonzero {0}")]
    ZeroRatioDivisor(&'static str),
    #[error("ratio value {name} is not finite")]
    NonFiniteRatio { name: &'static str },
}

/// Verdict of a Nash-equilibrium check at one mixed profile.
///
/// The margin for a player is their payoff at the profile minus their best
/// payoff over the unilateral corner deviations tested (own probability
/// moved to 0 or 1, skipping the corner the profile already sits on). The
/// profile is an equilibrium iff every margin is `>= -tol`.
#[derive(Clone, Debug)]
pub struct NeVerdict<S> {
    pub is_ne: bool,
    /// Best-deviation payoff differences for Alice, Bob, Chris.
    pub margins: [S; 3],
    /// The maximizing deviation probability tested for each player.
    pub deviations: [S; 3],
}

fn with_coordinate<S: Scalar>(m: &MixedProfile<S>, player: Player, value: S) -> MixedProfile<S> {
    let mut out = m.clone();
    match player {
        Player::Alice => out.x = value,
        Player::Bob => out.y = value,
        Player::Chris => out.z = value,
    }
    out
}

fn coordinate<S: Scalar>(m: &MixedProfile<S>, player: Player) -> &S {
    match player {
        Player::Alice => &m.x,
        Player::Bob => &m.y,
        Player::Chris => &m.z,
    }
}

/// Check whether `profile` is a Nash equilibrium of the game played over
/// `behavior`.
pub fn verify_ne<S: Scalar>(
    game: &SymmetricGame<S>,
    behavior: &Behavior<S>,
    profile: &MixedProfile<S>,
    tol: &S,
) -> NeVerdict<S> {
    let base = payoffs_from_joint(game, behavior, profile);
    let mut margins: Vec<S> = Vec::with_capacity(3);
    let mut deviations: Vec<S> = Vec::with_capacity(3);
    for player in Player::ALL {
        let own = coordinate(profile, player);
        let mut best: Option<(S, S)> = None; // (deviation payoff, deviation)
        for corner in [S::zero(), S::one()] {
            if corner == *own {
                continue;
            }
            let deviated = payoffs_from_joint(
                game,
                behavior,
                &with_coordinate(profile, player, corner.clone()),
            );
            let value = deviated.get(player).clone();
            if best.as_ref().is_none_or(|(v, _)| value > *v) {
                best = Some((value, corner));
            }
        }
        let (best_value, deviation) =
            best.expect("at least one corner differs from any probability in [0,1]");
        margins.push(base.get(player).clone() - best_value);
        deviations.push(deviation);
    }
    let margins: [S; 3] = margins.try_into().expect("three players");
    let deviations: [S; 3] = deviations.try_into().expect("three players");
    let is_ne = margins.iter().all(|m| *m >= S::zero() - tol.clone());
    NeVerdict { is_ne, margins, deviations }
}

/// All pure profiles (cube corners) that are Nash equilibria, in canonical
/// profile order.
pub fn enumerate_pure_ne<S: Scalar>(
    game: &SymmetricGame<S>,
    behavior: &Behavior<S>,
    tol: &S,
) -> Vec<PureProfile> {
    PureProfile::CANONICAL
        .into_iter()
        .filter(|&p| verify_ne(game, behavior, &MixedProfile::corner(p), tol).is_ne)
        .collect()
}

/// The three payoff-difference coefficients of the zero-constrained game.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaCoefficients<S> {
    /// alpha - beta - 2 delta + 2 theta + epsilon - omega
    pub delta_1: S,
    /// delta - epsilon - theta + omega
    pub delta_2: S,
    /// epsilon - omega
    pub delta_3: S,
}

impl<S: Scalar> DeltaCoefficients<S> {
    pub fn from_game(game: &SymmetricGame<S>) -> Self {
        let two = S::from_int(2);
        DeltaCoefficients {
            delta_1: game.alpha.clone() - game.beta.clone() - two.clone() * game.delta.clone()
                + two * game.theta.clone()
                + game.epsilon.clone()
                - game.omega.clone(),
            delta_2: game.delta.clone() - game.epsilon.clone() - game.theta.clone()
                + game.omega.clone(),
            delta_3: game.epsilon.clone() - game.omega.clone(),
        }
    }
}

/// Evaluate the three deviation-slope brackets of the equilibrium condition
/// for a factorizable behavior with vanishing second-coin probabilities.
///
/// The bracket for a player is the slope of their payoff in their own mixing
/// probability at `profile`; `(own* - own) * bracket >= 0` for all
/// deviations characterizes the equilibrium. The first-coin head
/// probabilities are recovered from the behavior's marginals.
pub fn delta_reduction_check<S: Scalar>(
    game: &SymmetricGame<S>,
    behavior: &Behavior<S>,
    profile: &MixedProfile<S>,
) -> Result<[S; 3], EquilibriumError> {
    let tol = S::default_tol(DEFAULT_PRODUCT_TOL);
    let coins = match factorizability_certificate(behavior, &tol) {
        Ok(FactorizabilityResult::Factorizable(coins)) => coins,
        Ok(FactorizabilityResult::NonFactorizable(w)) => {
            return Err(EquilibriumError::NotFactorizable(format!(
                "entry p{} deviates from the marginal product by {}",
                w.entry_index, w.deviation
            )));
        }
        Err(e) => return Err(EquilibriumError::NotFactorizable(e.to_string())),
    };
    for (name, value) in [
        ("alice_second", &coins.alice_second),
        ("bob_second", &coins.bob_second),
        ("chris_second", &coins.chris_second),
    ] {
        if value.abs() > tol {
            return Err(EquilibriumError::NotFactorizable(format!(
                "second-coin probability {name} = {value} is nonzero"
            )));
        }
    }

    let deltas = DeltaCoefficients::from_game(game);
    let (r, rp, rpp) = (
        coins.alice_first.clone(),
        coins.bob_first.clone(),
        coins.chris_first.clone(),
    );
    let (x, y, z) = (profile.x.clone(), profile.y.clone(), profile.z.clone());
    let triple = r.clone() * rp.clone() * rpp.clone();

    let bracket = |own_head: S, co1: (S, S), co2: (S, S)| {
        // co1/co2: (other player's profile probability, other player's head
        // probability), in either order.
        co1.0.clone() * co2.0.clone() * triple.clone() * deltas.delta_1.clone()
            + own_head.clone()
                * (co2.0 * co2.1 + co1.0 * co1.1)
                * deltas.delta_2.clone()
            + own_head * deltas.delta_3.clone()
    };

    Ok([
        bracket(r.clone(), (y.clone(), rp.clone()), (z.clone(), rpp.clone())),
        bracket(rp.clone(), (x.clone(), r.clone()), (z, rpp.clone())),
        bracket(rpp, (x, r), (y, rp)),
    ])
}

/// A symmetric game in the ratio form used by the reduced full-cooperation
/// conditions; all five ratios are finite and beta is positive.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioGame<S> {
    pub alpha_over_beta: S,
    pub theta_over_beta: S,
    pub delta_over_theta: S,
    pub omega_over_beta: S,
    pub epsilon_over_omega: S,
}

impl<S: Scalar> RatioGame<S> {
    pub fn new(
        alpha_over_beta: S,
        theta_over_beta: S,
        delta_over_theta: S,
        omega_over_beta: S,
        epsilon_over_omega: S,
    ) -> Result<Self, EquilibriumError> {
        let game = RatioGame {
            alpha_over_beta,
            theta_over_beta,
            delta_over_theta,
            omega_over_beta,
            epsilon_over_omega,
        };
        for (name, v) in game.named() {
            if !v.is_finite_value() {
                return Err(EquilibriumError::NonFiniteRatio { name });
            }
        }
        Ok(game)
    }

    pub fn named(&self) -> [(&'static str, &S); 5] {
        [
            ("alpha_over_beta", &self.alpha_over_beta),
            ("theta_over_beta", &self.theta_over_beta),
            ("delta_over_theta", &self.delta_over_theta),
            ("omega_over_beta", &self.omega_over_beta),
            ("epsilon_over_omega", &self.epsilon_over_omega),
        ]
    }

    /// Ratio form of an absolute game. Requires beta > 0 (the conditions
    /// divide by beta) and nonzero theta and omega.
    pub fn from_game(game: &SymmetricGame<S>) -> Result<Self, EquilibriumError> {
        if game.beta <= S::zero() {
            return Err(EquilibriumError::NonPositiveBeta(format!("{}", game.beta)));
        }
        if game.theta == S::zero() {
            return Err(EquilibriumError::ZeroRatioDivisor("theta"));
        }
        if game.omega == S::zero() {
            return Err(EquilibriumError::ZeroRatioDivisor("omega"));
        }
        Ok(RatioGame {
            alpha_over_beta: game.alpha.clone() / game.beta.clone(),
            theta_over_beta: game.theta.clone() / game.beta.clone(),
            delta_over_theta: game.delta.clone() / game.theta.clone(),
            omega_over_beta: game.omega.clone() / game.beta.clone(),
            epsilon_over_omega: game.epsilon.clone() / game.omega.clone(),
        })
    }

    /// The absolute game with beta = 1 carrying these ratios.
    pub fn to_unit_beta_game(&self) -> SymmetricGame<S> {
        SymmetricGame {
            alpha: self.alpha_over_beta.clone(),
            beta: S::one(),
            delta: self.theta_over_beta.clone() * self.delta_over_theta.clone(),
            epsilon: self.omega_over_beta.clone() * self.epsilon_over_omega.clone(),
            theta: self.theta_over_beta.clone(),
            omega: self.omega_over_beta.clone(),
        }
    }
}

fn require_zero_constrained<S: Scalar>(
    behavior: &Behavior<S>,
    tol: &S,
) -> Result<(), EquilibriumError> {
    let mut violations: Vec<String> = Vec::new();
    let zeros = check_embedding_zeros(behavior, tol);
    for (idx, v) in zeros.violations {
        violations.push(format!("p{idx} = {v} must vanish"));
    }
    let reduced = check_reduced_constraints(behavior, tol);
    for (label, r) in reduced.violations {
        violations.push(format!("constraint {label} has residual {r}"));
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(EquilibriumError::ConstraintViolation(violations))
    }
}

/// Left-hand sides of the three full-cooperation equilibrium inequalities
/// in ratio form. The profile (1,1,1) is an equilibrium iff all three are
/// nonnegative; multiplied by beta they equal the [`verify_ne`] margins at
/// (1,1,1) of the corresponding absolute game.
pub fn ccc_margins<S: Scalar>(
    ratios: &RatioGame<S>,
    behavior: &Behavior<S>,
    tol: &S,
) -> Result<[S; 3], EquilibriumError> {
    require_zero_constrained(behavior, tol)?;
    let p = |i: usize| behavior.p(i).clone();
    let r_ab = ratios.alpha_over_beta.clone();
    let r_tb = ratios.theta_over_beta.clone();
    let r_dt = ratios.delta_over_theta.clone();
    let r_ob = ratios.omega_over_beta.clone();
    let r_eo = ratios.epsilon_over_omega.clone();

    let alice = (p(5) + r_ab.clone() * p(1) - p(13))
        + r_tb.clone() * (p(6) + p(7) - p(14) - p(15) + r_dt.clone() * (p(2) + p(3)))
        + r_ob.clone() * (p(8) - p(16) + r_eo.clone() * p(4));
    let bob = (p(2) + r_ab.clone() * p(1) - p(18))
        + r_tb.clone() * (p(4) + p(6) - p(20) - p(22) + r_dt.clone() * (p(3) + p(5)))
        + r_ob.clone() * (p(8) - p(24) + r_eo.clone() * p(7));
    let chris = (p(3) + r_ab * p(1) - p(27))
        + r_tb * (p(4) + p(7) - p(28) - p(31) + r_dt * (p(2) + p(5)))
        + r_ob * (p(8) - p(32) + r_eo * p(6));
    Ok([alice, bob, chris])
}

/// Full-defection persistence margins: the payoff loss each player incurs by
/// unilaterally deviating from (0,0,0) with probabilities (x,y,z). Equals
/// (x p36 (omega-epsilon), y p47 (omega-epsilon), z p54 (omega-epsilon));
/// nonnegative whenever omega >= epsilon, so defection stays an equilibrium
/// on every zero-constrained behavior.
pub fn ddd_margins<S: Scalar>(
    game: &SymmetricGame<S>,
    behavior: &Behavior<S>,
    deviation: &MixedProfile<S>,
    tol: &S,
) -> Result<[S; 3], EquilibriumError> {
    require_zero_constrained(behavior, tol)?;
    let gap = game.omega.clone() - game.epsilon.clone();
    Ok([
        deviation.x.clone() * behavior.p(36).clone() * gap.clone(),
        deviation.y.clone() * behavior.p(47).clone() * gap.clone(),
        deviation.z.clone() * behavior.p(54).clone() * gap,
    ])
}
