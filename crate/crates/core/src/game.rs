//! Three-player symmetric games and generalized Prisoner's Dilemma
//! classification.
//!
//! A general three-player game is an 8-row payoff table indexed by the pure
//! profiles in canonical order. A symmetric game is fully described by six
//! payoff constants; [`reduce_to_symmetric`] certifies the symmetry
//! conditions, and [`classify_generalized_pd`] evaluates the eleven strict
//! inequalities that make a symmetric game a generalized three-player
//! Prisoner's Dilemma.

use crate::scalar::{abs_diff, Scalar};
use thiserror::Error;

/// One player's binary choice (first or second strategy, coin, or
/// measurement direction).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Choice {
    First,
    Second,
}

/// The three players.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    Alice,
    Bob,
    Chris,
}

impl Player {
    pub const ALL: [Player; 3] = [Player::Alice, Player::Bob, Player::Chris];

    pub fn index(self) -> usize {
        match self {
            Player::Alice => 0,
            Player::Bob => 1,
            Player::Chris => 2,
        }
    }
}

/// A triple of choices, one per player. Read as a pure-strategy profile in
/// game contexts and as a triple of chosen settings (a measurement context)
/// in behavior contexts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PureProfile {
    pub alice: Choice,
    pub bob: Choice,
    pub chris: Choice,
}

impl PureProfile {
    /// The eight profiles in canonical order: 111, 211, 121, 112, 122, 212,
    /// 221, 222 (1 = first choice, 2 = second). All 64-entry indexing is
    /// built on this order.
    pub const CANONICAL: [PureProfile; 8] = {
        use Choice::{First as F, Second as S};
        [
            PureProfile { alice: F, bob: F, chris: F },
            PureProfile { alice: S, bob: F, chris: F },
            PureProfile { alice: F, bob: S, chris: F },
            PureProfile { alice: F, bob: F, chris: S },
            PureProfile { alice: F, bob: S, chris: S },
            PureProfile { alice: S, bob: F, chris: S },
            PureProfile { alice: S, bob: S, chris: F },
            PureProfile { alice: S, bob: S, chris: S },
        ]
    };

    pub fn choice(&self, player: Player) -> Choice {
        match player {
            Player::Alice => self.alice,
            Player::Bob => self.bob,
            Player::Chris => self.chris,
        }
    }

    /// Position of this profile in [`PureProfile::CANONICAL`].
    pub fn canonical_index(&self) -> usize {
        Self::CANONICAL
            .iter()
            .position(|p| p == self)
            .expect("every profile is canonical")
    }
}

/// Per-player payoffs for one outcome of the game.
#[derive(Clone, Debug, PartialEq)]
pub struct PayoffTriple<S> {
    pub alice: S,
    pub bob: S,
    pub chris: S,
}

impl<S: Scalar> PayoffTriple<S> {
    pub fn new(alice: S, bob: S, chris: S) -> Self {
        PayoffTriple { alice, bob, chris }
    }

    pub fn get(&self, player: Player) -> &S {
        match player {
            Player::Alice => &self.alice,
            Player::Bob => &self.bob,
            Player::Chris => &self.chris,
        }
    }
}

#[derive(Debug, Error)]
pub enum GameError {
    #[error("payoff table entry is not finite: {0}")]
    NonFinitePayoff(String),
    #[error("payoff table is not symmetric; failed equalities: {0:?}")]
    NotSymmetric(Vec<String>),
}

/// A general three-player game: one payoff triple per pure profile, in
/// canonical profile order.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralThreePlayerGame<S> {
    table: [PayoffTriple<S>; 8],
}

impl<S: Scalar> GeneralThreePlayerGame<S> {
    pub fn new(table: [PayoffTriple<S>; 8]) -> Result<Self, GameError> {
        for (i, row) in table.iter().enumerate() {
            for player in Player::ALL {
                if !row.get(player).is_finite_value() {
                    return Err(GameError::NonFinitePayoff(format!(
                        "profile {}, {:?}",
                        i + 1,
                        player
                    )));
                }
            }
        }
        Ok(GeneralThreePlayerGame { table })
    }

    pub fn payoffs(&self, profile: PureProfile) -> &PayoffTriple<S> {
        &self.table[profile.canonical_index()]
    }

    pub fn table(&self) -> &[PayoffTriple<S>; 8] {
        &self.table
    }
}

/// A symmetric three-player game, described by its six payoff constants.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricGame<S> {
    pub alpha: S,
    pub beta: S,
    pub delta: S,
    pub epsilon: S,
    pub theta: S,
    pub omega: S,
}

impl<S: Scalar> SymmetricGame<S> {
    pub fn new(alpha: S, beta: S, delta: S, epsilon: S, theta: S, omega: S) -> Result<Self, GameError> {
        let game = SymmetricGame { alpha, beta, delta, epsilon, theta, omega };
        for (name, v) in game.constants() {
            if !v.is_finite_value() {
                return Err(GameError::NonFinitePayoff(name.to_string()));
            }
        }
        Ok(game)
    }

    /// Convenience constructor from integer constants.
    pub fn from_ints(alpha: i64, beta: i64, delta: i64, epsilon: i64, theta: i64, omega: i64) -> Self {
        SymmetricGame {
            alpha: S::from_int(alpha),
            beta: S::from_int(beta),
            delta: S::from_int(delta),
            epsilon: S::from_int(epsilon),
            theta: S::from_int(theta),
            omega: S::from_int(omega),
        }
    }

    pub fn constants(&self) -> [(&'static str, &S); 6] {
        [
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("delta", &self.delta),
            ("epsilon", &self.epsilon),
            ("theta", &self.theta),
            ("omega", &self.omega),
        ]
    }

    /// Payoffs for a pure profile. One symmetric row per profile:
    /// 111 -> (a,a,a); 211 -> (b,d,d); 121 -> (d,b,d); 112 -> (d,d,b);
    /// 122 -> (e,t,t); 212 -> (t,e,t); 221 -> (t,t,e); 222 -> (o,o,o).
    pub fn pure_payoffs(&self, profile: PureProfile) -> PayoffTriple<S> {
        use Choice::{First as F, Second as Sc};
        let (a, b, c) = (profile.alice, profile.bob, profile.chris);
        let t = |x: &S| x.clone();
        match (a, b, c) {
            (F, F, F) => PayoffTriple::new(t(&self.alpha), t(&self.alpha), t(&self.alpha)),
            (Sc, F, F) => PayoffTriple::new(t(&self.beta), t(&self.delta), t(&self.delta)),
            (F, Sc, F) => PayoffTriple::new(t(&self.delta), t(&self.beta), t(&self.delta)),
            (F, F, Sc) => PayoffTriple::new(t(&self.delta), t(&self.delta), t(&self.beta)),
            (F, Sc, Sc) => PayoffTriple::new(t(&self.epsilon), t(&self.theta), t(&self.theta)),
            (Sc, F, Sc) => PayoffTriple::new(t(&self.theta), t(&self.epsilon), t(&self.theta)),
            (Sc, Sc, F) => PayoffTriple::new(t(&self.theta), t(&self.theta), t(&self.epsilon)),
            (Sc, Sc, Sc) => PayoffTriple::new(t(&self.omega), t(&self.omega), t(&self.omega)),
        }
    }

    /// Expand into the full 8-row general payoff table.
    pub fn expand(&self) -> GeneralThreePlayerGame<S> {
        let table = PureProfile::CANONICAL.map(|p| self.pure_payoffs(p));
        GeneralThreePlayerGame { table }
    }
}

/// Pure-strategy payoffs of a symmetric game (free-function form of
/// [`SymmetricGame::pure_payoffs`]).
pub fn pure_strategy_payoffs<S: Scalar>(game: &SymmetricGame<S>, profile: PureProfile) -> PayoffTriple<S> {
    game.pure_payoffs(profile)
}

/// Default absolute tolerance for the symmetry equalities.
pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-12;

/// Reduce a general payoff table to symmetric form.
///
/// Checks the eighteen symmetry equalities on the table entries; if all hold
/// within `tol` the six defining constants are returned, otherwise the list
/// of failed equalities.
pub fn reduce_to_symmetric<S: Scalar>(
    game: &GeneralThreePlayerGame<S>,
    tol: &S,
) -> Result<SymmetricGame<S>, GameError> {
    let alice = |i: usize| game.table[i - 1].alice.clone();
    let bob = |i: usize| game.table[i - 1].bob.clone();
    let chris = |i: usize| game.table[i - 1].chris.clone();

    // (lhs, rhs, label); alpha_i/beta_i/gamma_i follow the canonical row order.
    let equalities: [(S, S, &str); 18] = [
        (bob(1), alice(1), "beta_1 = alpha_1"),
        (bob(2), alice(3), "beta_2 = alpha_3"),
        (bob(3), alice(2), "beta_3 = alpha_2"),
        (bob(4), alice(3), "beta_4 = alpha_3"),
        (bob(5), alice(6), "beta_5 = alpha_6"),
        (bob(6), alice(5), "beta_6 = alpha_5"),
        (bob(7), alice(6), "beta_7 = alpha_6"),
        (bob(8), alice(8), "beta_8 = alpha_8"),
        (chris(1), alice(1), "gamma_1 = alpha_1"),
        (chris(2), alice(3), "gamma_2 = alpha_3"),
        (chris(3), alice(3), "gamma_3 = alpha_3"),
        (chris(4), alice(2), "gamma_4 = alpha_2"),
        (chris(5), alice(6), "gamma_5 = alpha_6"),
        (chris(6), alice(6), "gamma_6 = alpha_6"),
        (chris(7), alice(5), "gamma_7 = alpha_5"),
        (chris(8), alice(8), "gamma_8 = alpha_8"),
        (alice(6), alice(7), "alpha_6 = alpha_7"),
        (alice(3), alice(4), "alpha_3 = alpha_4"),
    ];

    let failed: Vec<String> = equalities
        .iter()
        .filter(|(lhs, rhs, _)| abs_diff(lhs, rhs) > *tol)
        .map(|(_, _, label)| label.to_string())
        .collect();
    if !failed.is_empty() {
        return Err(GameError::NotSymmetric(failed));
    }
    Ok(SymmetricGame {
        alpha: alice(1),
        beta: alice(2),
        delta: alice(3),
        epsilon: alice(5),
        theta: alice(6),
        omega: alice(8),
    })
}

/// Outcome of the generalized Prisoner's Dilemma classification.
#[derive(Clone, Debug, PartialEq)]
pub struct PdReport {
    pub condition_a: bool,
    pub condition_b: bool,
    pub condition_c: bool,
    pub violated_inequalities: Vec<String>,
    pub is_generalized_pd: bool,
}

/// Classify a symmetric game as a generalized three-player Prisoner's
/// Dilemma, with strict comparisons (margin zero).
pub fn classify_generalized_pd<S: Scalar>(game: &SymmetricGame<S>) -> PdReport {
    classify_generalized_pd_with_margin(game, &S::zero())
}

/// Classification with a required strictness margin: an inequality `l > r`
/// counts as satisfied only when `l - r > margin`. A margin of zero gives
/// plain strict comparison, so borderline ties surface as violations.
pub fn classify_generalized_pd_with_margin<S: Scalar>(game: &SymmetricGame<S>, margin: &S) -> PdReport {
    let half = S::from_ratio(1, 2);
    let g = game;
    // (lhs, rhs, label, condition group)
    let checks: [(S, S, &str, u8); 11] = [
        (g.beta.clone(), g.alpha.clone(), "beta > alpha", 0),
        (g.omega.clone(), g.epsilon.clone(), "omega > epsilon", 0),
        (g.theta.clone(), g.delta.clone(), "theta > delta", 0),
        (g.beta.clone(), g.theta.clone(), "beta > theta", 1),
        (g.theta.clone(), g.omega.clone(), "theta > omega", 1),
        (g.alpha.clone(), g.delta.clone(), "alpha > delta", 1),
        (g.delta.clone(), g.epsilon.clone(), "delta > epsilon", 1),
        (g.delta.clone(), g.omega.clone(), "delta > omega", 2),
        (g.alpha.clone(), g.theta.clone(), "alpha > theta", 2),
        (
            g.delta.clone(),
            half.clone() * (g.epsilon.clone() + g.theta.clone()),
            "delta > (epsilon + theta)/2",
            2,
        ),
        (
            g.alpha.clone(),
            half * (g.delta.clone() + g.beta.clone()),
            "alpha > (delta + beta)/2",
            2,
        ),
    ];

    let mut ok = [true, true, true];
    let mut violated = Vec::new();
    for (lhs, rhs, label, group) in checks {
        if lhs - rhs <= *margin {
            ok[group as usize] = false;
            violated.push(label.to_string());
        }
    }
    PdReport {
        condition_a: ok[0],
        condition_b: ok[1],
        condition_c: ok[2],
        violated_inequalities: violated,
        is_generalized_pd: ok[0] && ok[1] && ok[2],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn pd7() -> SymmetricGame<f64> {
        SymmetricGame::from_ints(7, 9, 3, 0, 5, 1)
    }

    #[test]
    fn expand_then_reduce_round_trips() {
        let g = pd7();
        let reduced = reduce_to_symmetric(&g.expand(), &0.0).unwrap();
        assert_eq!(reduced, g);

        let zero: SymmetricGame<f64> = SymmetricGame::from_ints(0, 0, 0, 0, 0, 0);
        assert_eq!(reduce_to_symmetric(&zero.expand(), &0.0).unwrap(), zero);
    }

    #[test]
    fn broken_equality_is_reported() {
        let g = pd7();
        let mut table = g.expand().table.clone();
        // beta_2 is row 2's Bob payoff; alpha_3 is row 3's Alice payoff.
        table[1].bob = table[2].alice + 0.5;
        let general = GeneralThreePlayerGame::new(table).unwrap();
        match reduce_to_symmetric(&general, &1e-12) {
            Err(GameError::NotSymmetric(failed)) => {
                assert!(failed.contains(&"beta_2 = alpha_3".to_string()));
            }
            other => panic!("expected NotSymmetric, got {other:?}"),
        }
    }

    #[test]
    fn symmetry_tolerance_accepts_small_perturbations() {
        let g = pd7();
        let mut table = g.expand().table.clone();
        table[1].bob += 1e-14;
        let general = GeneralThreePlayerGame::new(table).unwrap();
        assert!(reduce_to_symmetric(&general, &1e-12).is_ok());
    }

    #[test]
    fn pure_payoffs_match_symmetric_rows() {
        use Choice::{First as F, Second as S};
        let g = pd7();
        let p = pure_strategy_payoffs(&g, PureProfile { alice: F, bob: F, chris: F });
        assert_eq!((p.alice, p.bob, p.chris), (7.0, 7.0, 7.0));
        let p = g.pure_payoffs(PureProfile { alice: S, bob: S, chris: S });
        assert_eq!((p.alice, p.bob, p.chris), (1.0, 1.0, 1.0));
        let p = g.pure_payoffs(PureProfile { alice: F, bob: S, chris: S });
        assert_eq!((p.alice, p.bob, p.chris), (0.0, 5.0, 5.0));
        let p = g.pure_payoffs(PureProfile { alice: S, bob: F, chris: F });
        assert_eq!((p.alice, p.bob, p.chris), (9.0, 3.0, 3.0));
    }

    /// Payoff symmetry at pure profiles: Alice's payoff under (a,b,c) equals
    /// her payoff under (a,c,b), Bob's under (b,a,c) and (c,a,b), and Chris'
    /// under (b,c,a) and (c,b,a).
    #[test]
    fn pure_profile_symmetry_holds_on_all_profiles() {
        let g = pd7();
        for profile in PureProfile::CANONICAL {
            let (a, b, c) = (profile.alice, profile.bob, profile.chris);
            let reference = g.pure_payoffs(profile).alice;
            let variants = [
                g.pure_payoffs(PureProfile { alice: a, bob: c, chris: b }).alice,
                g.pure_payoffs(PureProfile { alice: b, bob: a, chris: c }).bob,
                g.pure_payoffs(PureProfile { alice: c, bob: a, chris: b }).bob,
                g.pure_payoffs(PureProfile { alice: b, bob: c, chris: a }).chris,
                g.pure_payoffs(PureProfile { alice: c, bob: b, chris: a }).chris,
            ];
            for v in variants {
                assert_eq!(v, reference, "asymmetry at {profile:?}");
            }
        }
    }

    #[test]
    fn pd7_is_a_generalized_pd() {
        let report = classify_generalized_pd(&pd7());
        assert!(report.condition_a && report.condition_b && report.condition_c);
        assert!(report.is_generalized_pd);
        assert!(report.violated_inequalities.is_empty());
    }

    #[test]
    fn constant_game_violates_every_inequality() {
        let g: SymmetricGame<f64> = SymmetricGame::from_ints(1, 1, 1, 1, 1, 1);
        let report = classify_generalized_pd(&g);
        assert!(!report.is_generalized_pd);
        assert_eq!(report.violated_inequalities.len(), 11);
        assert!(!report.condition_a && !report.condition_b && !report.condition_c);
    }

    /// The unit-beta ratio game from the worked example fails strict PD
    /// membership because theta = omega (among other violations).
    #[test]
    fn ratio_game_with_theta_equal_omega_is_not_pd() {
        let g = SymmetricGame::new(0.9, 1.0, 0.002, 0.009, 0.01, 0.01).unwrap();
        let report = classify_generalized_pd(&g);
        assert!(!report.is_generalized_pd);
        assert!(report
            .violated_inequalities
            .contains(&"theta > omega".to_string()));
        assert!(!report.condition_b);
    }

    /// Perturbing a single constant to flip one inequality makes exactly the
    /// checks naming that constant fail.
    #[test]
    fn single_flip_trips_named_checks() {
        // Dropping omega below epsilon trips only "omega > epsilon": the
        // other omega inequalities (theta > omega, delta > omega) only get
        // slacker.
        let g: SymmetricGame<f64> = SymmetricGame::from_ints(7, 9, 3, 0, 5, -1);
        let report = classify_generalized_pd(&g);
        assert!(!report.is_generalized_pd);
        assert_eq!(report.violated_inequalities, vec!["omega > epsilon".to_string()]);

        let g: SymmetricGame<f64> = SymmetricGame::from_ints(7, 9, 3, 0, 10, 1);
        let report = classify_generalized_pd(&g);
        assert_eq!(
            report.violated_inequalities,
            vec![
                "beta > theta".to_string(),
                "alpha > theta".to_string(),
                "delta > (epsilon + theta)/2".to_string()
            ]
        );
    }

    #[test]
    fn classification_is_exact_in_rational_mode() {
        let g: SymmetricGame<BigRational> = SymmetricGame::from_ints(7, 9, 3, 0, 5, 1);
        assert!(classify_generalized_pd(&g).is_generalized_pd);
    }

    #[test]
    fn classification_margin_rejects_borderline_games() {
        let g: SymmetricGame<f64> = SymmetricGame::from_ints(7, 9, 3, 0, 5, 1);
        // alpha - theta = 2; a margin of 2 makes "alpha > theta" borderline.
        let report = classify_generalized_pd_with_margin(&g, &2.0);
        assert!(report
            .violated_inequalities
            .contains(&"alpha > theta".to_string()));
    }

    #[test]
    fn non_finite_payoffs_are_rejected() {
        assert!(SymmetricGame::new(f64::NAN, 1.0, 1.0, 1.0, 1.0, 1.0).is_err());
    }
}
