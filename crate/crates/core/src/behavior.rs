//! 64-entry joint-probability behaviors.
//!
//! A behavior is the full table of joint outcome probabilities across the 8
//! measurement contexts (one context per triple of chosen settings), stored
//! flat in the canonical order: context blocks of 8, outcome order
//! (+,+,+), (+,-,+), (+,+,-), (+,-,-), (-,+,+), (-,-,+), (-,+,-), (-,-,-)
//! within each block. Entry `p_i` uses 1-based indices throughout, so every
//! index cited by the constraint systems (`p_36`, `p_47`, ...) maps directly.
//!
//! This module checks normalization and no-signaling, certifies
//! factorizability against six coin parameters, enforces the 37 embedding
//! zeros, and completes a behavior from the 10 independent probabilities of
//! the zero-constrained polytope.

use crate::game::{Choice, Player, PureProfile};
use crate::scalar::{abs_diff, sum, Scalar};
use thiserror::Error;

/// Total number of joint probabilities.
pub const NUM_ENTRIES: usize = 64;

/// Default tolerance for linear constraint residuals (block sums, marginal
/// chains, completion residuals).
pub const DEFAULT_LINEAR_TOL: f64 = 1e-12;

/// Default tolerance for factorization products, which amplify marginal
/// error.
pub const DEFAULT_PRODUCT_TOL: f64 = 1e-9;

/// A single measurement outcome, +1 or -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// One outcome triple (Alice, Bob, Chris).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OutcomeTriple {
    pub alice: Sign,
    pub bob: Sign,
    pub chris: Sign,
}

impl OutcomeTriple {
    /// The eight outcomes in canonical within-block order.
    pub const CANONICAL: [OutcomeTriple; 8] = {
        use Sign::{Minus as M, Plus as P};
        [
            OutcomeTriple { alice: P, bob: P, chris: P },
            OutcomeTriple { alice: P, bob: M, chris: P },
            OutcomeTriple { alice: P, bob: P, chris: M },
            OutcomeTriple { alice: P, bob: M, chris: M },
            OutcomeTriple { alice: M, bob: P, chris: P },
            OutcomeTriple { alice: M, bob: M, chris: P },
            OutcomeTriple { alice: M, bob: P, chris: M },
            OutcomeTriple { alice: M, bob: M, chris: M },
        ]
    };

    pub fn sign(&self, player: Player) -> Sign {
        match player {
            Player::Alice => self.alice,
            Player::Bob => self.bob,
            Player::Chris => self.chris,
        }
    }

    /// The pure profile whose payoff row this outcome selects: +1 plays the
    /// first-strategy role, -1 the second.
    pub fn as_profile(&self) -> PureProfile {
        let choice = |s: Sign| match s {
            Sign::Plus => Choice::First,
            Sign::Minus => Choice::Second,
        };
        PureProfile {
            alice: choice(self.alice),
            bob: choice(self.bob),
            chris: choice(self.chris),
        }
    }
}

/// The eight measurement contexts in canonical order (a context is a triple
/// of chosen settings, one per player).
pub const CONTEXT_ORDER: [PureProfile; 8] = PureProfile::CANONICAL;

/// Flat 0-based index of (context block, outcome slot).
pub fn flat_index(context: usize, outcome: usize) -> usize {
    debug_assert!(context < 8 && outcome < 8);
    context * 8 + outcome
}

/// 1-based entry index of (context block, outcome slot).
pub fn entry_index(context: usize, outcome: usize) -> usize {
    flat_index(context, outcome) + 1
}

/// Entry indices forced to zero by the embedding constraint (an entry
/// vanishes when some player's chosen setting is their second one and their
/// outcome is +1; with second-coin head probabilities zero, such outcomes
/// cannot occur). There are exactly 37.
pub fn zero_constrained_indices() -> Vec<usize> {
    let mut out = Vec::with_capacity(37);
    for (ci, ctx) in CONTEXT_ORDER.iter().enumerate() {
        for (oi, outcome) in OutcomeTriple::CANONICAL.iter().enumerate() {
            let vanishes = Player::ALL.iter().any(|&pl| {
                ctx.choice(pl) == Choice::Second && outcome.sign(pl) == Sign::Plus
            });
            if vanishes {
                out.push(entry_index(ci, oi));
            }
        }
    }
    out
}

/// Entry indices of the 10 independent probabilities of the zero-constrained
/// polytope, in the order used by [`IndependentSet`].
pub const INDEPENDENT_INDICES: [usize; 10] = [1, 3, 5, 6, 13, 15, 18, 20, 22, 27];

#[derive(Debug, Error)]
pub enum BehaviorError {
    #[error("behavior must have exactly {NUM_ENTRIES} entries, got {0}")]
    WrongLength(usize),
    #[error("behavior entry p{index} is not finite")]
    NonFiniteEntry { index: usize },
    #[error("coin probability {name} = {value} outside [0,1]")]
    CoinOutOfRange { name: &'static str, value: String },
    #[error("not a behavior: {0}")]
    NotABehavior(String),
    #[error("infeasible completion: {0:?}")]
    Infeasible(Vec<String>),
}

/// A 64-entry joint-probability table in canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct Behavior<S> {
    entries: Vec<S>,
}

impl<S: Scalar> Behavior<S> {
    /// Validates length and finiteness only; range and constraint checks
    /// are report operations so that defective tables can be loaded and
    /// diagnosed.
    pub fn new(entries: Vec<S>) -> Result<Self, BehaviorError> {
        if entries.len() != NUM_ENTRIES {
            return Err(BehaviorError::WrongLength(entries.len()));
        }
        for (i, v) in entries.iter().enumerate() {
            if !v.is_finite_value() {
                return Err(BehaviorError::NonFiniteEntry { index: i + 1 });
            }
        }
        Ok(Behavior { entries })
    }

    /// Entry by 1-based entry index.
    pub fn p(&self, entry_index: usize) -> &S {
        assert!((1..=NUM_ENTRIES).contains(&entry_index), "entry index out of range");
        &self.entries[entry_index - 1]
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn at(&self, context: usize, outcome: usize) -> &S {
        &self.entries[flat_index(context, outcome)]
    }

    /// Sum of the four entries in `context` where `player`'s outcome is
    /// `sign`: one single-party marginal read from one context.
    pub fn one_party_sum(&self, player: Player, sign: Sign, context: usize) -> S {
        sum(
            OutcomeTriple::CANONICAL
                .iter()
                .enumerate()
                .filter(|(_, o)| o.sign(player) == sign)
                .map(|(oi, _)| self.at(context, oi).clone()),
        )
    }

    /// Lossy float view, mostly for display.
    pub fn to_f64(&self) -> Behavior<f64> {
        Behavior {
            entries: self.entries.iter().map(|v| v.to_f64_lossy()).collect(),
        }
    }
}

/// Head probabilities (probability of outcome +1) for each player's two
/// coins / directions.
#[derive(Clone, Debug, PartialEq)]
pub struct CoinParameters<S> {
    pub alice_first: S,
    pub alice_second: S,
    pub bob_first: S,
    pub bob_second: S,
    pub chris_first: S,
    pub chris_second: S,
}

impl<S: Scalar> CoinParameters<S> {
    pub fn new(
        alice_first: S,
        alice_second: S,
        bob_first: S,
        bob_second: S,
        chris_first: S,
        chris_second: S,
    ) -> Result<Self, BehaviorError> {
        let coins = CoinParameters {
            alice_first,
            alice_second,
            bob_first,
            bob_second,
            chris_first,
            chris_second,
        };
        for (name, v) in coins.named() {
            if !v.is_finite_value() || *v < S::zero() || *v > S::one() {
                return Err(BehaviorError::CoinOutOfRange { name, value: format!("{v}") });
            }
        }
        Ok(coins)
    }

    pub fn named(&self) -> [(&'static str, &S); 6] {
        [
            ("alice_first", &self.alice_first),
            ("alice_second", &self.alice_second),
            ("bob_first", &self.bob_first),
            ("bob_second", &self.bob_second),
            ("chris_first", &self.chris_first),
            ("chris_second", &self.chris_second),
        ]
    }

    pub fn head_prob(&self, player: Player, choice: Choice) -> &S {
        match (player, choice) {
            (Player::Alice, Choice::First) => &self.alice_first,
            (Player::Alice, Choice::Second) => &self.alice_second,
            (Player::Bob, Choice::First) => &self.bob_first,
            (Player::Bob, Choice::Second) => &self.bob_second,
            (Player::Chris, Choice::First) => &self.chris_first,
            (Player::Chris, Choice::Second) => &self.chris_second,
        }
    }
}

/// Expand six coin parameters into the factorizable behavior whose entries
/// are products of single-party probabilities.
pub fn expand_factorizable<S: Scalar>(coins: &CoinParameters<S>) -> Behavior<S> {
    let mut entries = Vec::with_capacity(NUM_ENTRIES);
    for ctx in CONTEXT_ORDER.iter() {
        for outcome in OutcomeTriple::CANONICAL.iter() {
            let mut value = S::one();
            for pl in Player::ALL {
                let head = coins.head_prob(pl, ctx.choice(pl)).clone();
                value = value
                    * match outcome.sign(pl) {
                        Sign::Plus => head,
                        Sign::Minus => S::one() - head,
                    };
            }
            entries.push(value);
        }
    }
    Behavior { entries }
}

/// Normalization check: each context block sums to 1 and every entry lies in
/// [-tol, 1+tol].
#[derive(Clone, Debug)]
pub struct NormalizationReport<S> {
    /// Block sum minus one, per context.
    pub block_residuals: [S; 8],
    /// (entry index, value) of entries outside [-tol, 1+tol].
    pub out_of_range: Vec<(usize, S)>,
    pub pass: bool,
}

pub fn check_normalization<S: Scalar>(behavior: &Behavior<S>, tol: &S) -> NormalizationReport<S> {
    let block_residuals: [S; 8] = std::array::from_fn(|ci| {
        sum((0..8).map(|oi| behavior.at(ci, oi).clone())) - S::one()
    });
    let mut out_of_range = Vec::new();
    for (i, v) in behavior.entries.iter().enumerate() {
        if *v < S::zero() - tol.clone() || *v > S::one() + tol.clone() {
            out_of_range.push((i + 1, v.clone()));
        }
    }
    let pass = out_of_range.is_empty()
        && block_residuals.iter().all(|r| r.abs() <= *tol);
    NormalizationReport { block_residuals, out_of_range, pass }
}

/// One marginal chain: the same single-party marginal read from all four
/// contexts that contain the given setting. No-signaling requires the four
/// values to agree.
#[derive(Clone, Debug)]
pub struct MarginalChain<S> {
    pub player: Player,
    pub setting: Choice,
    pub sign: Sign,
    /// Context block indices, ascending.
    pub contexts: [usize; 4],
    /// The marginal as read from each of those contexts.
    pub values: [S; 4],
    /// Largest pairwise deviation among the four values.
    pub max_deviation: S,
}

/// No-signaling (parameter independence) check across all 12 marginal
/// chains.
#[derive(Clone, Debug)]
pub struct NoSignalingReport<S> {
    pub chains: Vec<MarginalChain<S>>,
    pub pass: bool,
}

fn contexts_with_setting(player: Player, setting: Choice) -> [usize; 4] {
    let mut out = [0usize; 4];
    let mut n = 0;
    for (ci, ctx) in CONTEXT_ORDER.iter().enumerate() {
        if ctx.choice(player) == setting {
            out[n] = ci;
            n += 1;
        }
    }
    debug_assert_eq!(n, 4);
    out
}

fn marginal_chain<S: Scalar>(
    behavior: &Behavior<S>,
    player: Player,
    setting: Choice,
    sign: Sign,
) -> MarginalChain<S> {
    let contexts = contexts_with_setting(player, setting);
    let values: [S; 4] = std::array::from_fn(|k| behavior.one_party_sum(player, sign, contexts[k]));
    let mut max_deviation = S::zero();
    for i in 0..4 {
        for j in (i + 1)..4 {
            let d = abs_diff(&values[i], &values[j]);
            if d > max_deviation {
                max_deviation = d;
            }
        }
    }
    MarginalChain { player, setting, sign, contexts, values, max_deviation }
}

pub fn check_no_signaling<S: Scalar>(behavior: &Behavior<S>, tol: &S) -> NoSignalingReport<S> {
    let mut chains = Vec::with_capacity(12);
    for pl in Player::ALL {
        for setting in [Choice::First, Choice::Second] {
            for sign in [Sign::Plus, Sign::Minus] {
                chains.push(marginal_chain(behavior, pl, setting, sign));
            }
        }
    }
    let pass = chains.iter().all(|c| c.max_deviation <= *tol);
    NoSignalingReport { chains, pass }
}

/// The 12 single-party marginals. For a no-signaling behavior these are
/// context-independent; in general each is the average of its four
/// per-context readings.
#[derive(Clone, Debug)]
pub struct MarginalTable<S> {
    /// `values[player][setting][sign]` with indices per [`Player::index`],
    /// setting 0 = first, sign 0 = plus.
    values: [[[S; 2]; 2]; 3],
}

impl<S: Scalar> MarginalTable<S> {
    pub fn prob(&self, player: Player, setting: Choice, sign: Sign) -> &S {
        let s = match setting {
            Choice::First => 0,
            Choice::Second => 1,
        };
        let g = match sign {
            Sign::Plus => 0,
            Sign::Minus => 1,
        };
        &self.values[player.index()][s][g]
    }

    /// Residuals of Pr(+1) + Pr(-1) - 1 per (player, setting).
    pub fn pair_sum_residuals(&self) -> [[S; 2]; 3] {
        std::array::from_fn(|p| {
            std::array::from_fn(|s| {
                self.values[p][s][0].clone() + self.values[p][s][1].clone() - S::one()
            })
        })
    }
}

/// Compute the marginal table by averaging each chain over its four
/// contexts.
pub fn compute_marginals<S: Scalar>(behavior: &Behavior<S>) -> MarginalTable<S> {
    let quarter = S::from_ratio(1, 4);
    let values = std::array::from_fn(|p| {
        let player = Player::ALL[p];
        std::array::from_fn(|s| {
            let setting = if s == 0 { Choice::First } else { Choice::Second };
            std::array::from_fn(|g| {
                let sign = if g == 0 { Sign::Plus } else { Sign::Minus };
                let chain = marginal_chain(behavior, player, setting, sign);
                quarter.clone() * sum(chain.values.iter().cloned())
            })
        })
    });
    MarginalTable { values }
}

/// Witness of non-factorizability: the entry where the product of recovered
/// marginals deviates most from the behavior.
#[derive(Clone, Debug)]
pub struct NonFactorizableWitness<S> {
    pub entry_index: usize,
    pub product: S,
    pub entry: S,
    pub deviation: S,
}

/// Verdict of the factorizability certificate.
#[derive(Clone, Debug)]
pub enum FactorizabilityResult<S> {
    Factorizable(CoinParameters<S>),
    NonFactorizable(NonFactorizableWitness<S>),
}

impl<S> FactorizabilityResult<S> {
    pub fn is_factorizable(&self) -> bool {
        matches!(self, FactorizabilityResult::Factorizable(_))
    }
}

/// Certify whether a behavior factorizes into six coin parameters.
///
/// Candidate parameters are read from the lowest-index context containing
/// each setting (contexts 1, 2, 1, 3, 1, 4 for the first and second coins
/// of Alice, Bob, Chris respectively); for a no-signaling behavior the
/// choice of context is immaterial. The verdict is `Factorizable` iff every
/// entry matches the corresponding product within `tol`; otherwise the
/// witness is the lowest-index entry whose deviation exceeds `tol`.
///
/// Fails with `NotABehavior` when the behavior does not pass normalization
/// and no-signaling at `tol`.
pub fn factorizability_certificate<S: Scalar>(
    behavior: &Behavior<S>,
    tol: &S,
) -> Result<FactorizabilityResult<S>, BehaviorError> {
    if !check_normalization(behavior, tol).pass {
        return Err(BehaviorError::NotABehavior(
            "normalization check failed".to_string(),
        ));
    }
    if !check_no_signaling(behavior, tol).pass {
        return Err(BehaviorError::NotABehavior(
            "no-signaling check failed".to_string(),
        ));
    }

    // Marginal sums of an in-range normalized block can overshoot [0,1] by a
    // few tol; snap those back so the candidate coins are valid.
    let clamp = |v: S, name: &'static str| -> Result<S, BehaviorError> {
        let slack = tol.clone() * S::from_int(8);
        if v < S::zero() {
            if v >= S::zero() - slack.clone() {
                return Ok(S::zero());
            }
        } else if v > S::one() {
            if v <= S::one() + slack {
                return Ok(S::one());
            }
        } else {
            return Ok(v);
        }
        Err(BehaviorError::CoinOutOfRange { name, value: format!("{v}") })
    };

    let coins = CoinParameters {
        alice_first: clamp(behavior.one_party_sum(Player::Alice, Sign::Plus, 0), "alice_first")?,
        alice_second: clamp(behavior.one_party_sum(Player::Alice, Sign::Plus, 1), "alice_second")?,
        bob_first: clamp(behavior.one_party_sum(Player::Bob, Sign::Plus, 0), "bob_first")?,
        bob_second: clamp(behavior.one_party_sum(Player::Bob, Sign::Plus, 2), "bob_second")?,
        chris_first: clamp(behavior.one_party_sum(Player::Chris, Sign::Plus, 0), "chris_first")?,
        chris_second: clamp(behavior.one_party_sum(Player::Chris, Sign::Plus, 3), "chris_second")?,
    };

    let product = expand_factorizable(&coins);
    for i in 1..=NUM_ENTRIES {
        let deviation = abs_diff(behavior.p(i), product.p(i));
        if deviation > *tol {
            return Ok(FactorizabilityResult::NonFactorizable(NonFactorizableWitness {
                entry_index: i,
                product: product.p(i).clone(),
                entry: behavior.p(i).clone(),
                deviation,
            }));
        }
    }
    Ok(FactorizabilityResult::Factorizable(coins))
}

/// Embedding-zeros check: the 37 zero-constrained entries must vanish.
#[derive(Clone, Debug)]
pub struct ZeroConstraintReport<S> {
    /// (entry index, value) of entries with |value| > tol.
    pub violations: Vec<(usize, S)>,
    pub pass: bool,
}

pub fn check_embedding_zeros<S: Scalar>(behavior: &Behavior<S>, tol: &S) -> ZeroConstraintReport<S> {
    let violations: Vec<(usize, S)> = zero_constrained_indices()
        .into_iter()
        .filter(|&i| behavior.p(i).abs() > *tol)
        .map(|i| (i, behavior.p(i).clone()))
        .collect();
    let pass = violations.is_empty();
    ZeroConstraintReport { violations, pass }
}

/// One linear equation of the reduced (zero-constrained) constraint system:
/// `sum(lhs) - sum(rhs) = constant`.
#[derive(Clone, Copy, Debug)]
pub struct ReducedConstraint {
    pub lhs: &'static [usize],
    pub rhs: &'static [usize],
    pub constant: i64,
}

impl ReducedConstraint {
    pub fn residual<S: Scalar>(&self, behavior: &Behavior<S>) -> S {
        let l = sum(self.lhs.iter().map(|&i| behavior.p(i).clone()));
        let r = sum(self.rhs.iter().map(|&i| behavior.p(i).clone()));
        l - r - S::from_int(self.constant)
    }

    pub fn label(&self) -> String {
        let join = |ix: &[usize]| {
            ix.iter()
                .map(|i| format!("p{i}"))
                .collect::<Vec<_>>()
                .join("+")
        };
        if self.rhs.is_empty() {
            format!("{} = {}", join(self.lhs), self.constant)
        } else {
            format!("{} = {}", join(self.lhs), join(self.rhs))
        }
    }
}

/// The reduced normalization and locality constraints that remain once the
/// 37 embedding zeros are imposed (each locality chain written as pairwise
/// equalities against its first expression).
pub const REDUCED_CONSTRAINTS: [ReducedConstraint; 26] = [
    // Normalization of the eight blocks.
    ReducedConstraint { lhs: &[1, 2, 3, 4, 5, 6, 7, 8], rhs: &[], constant: 1 },
    ReducedConstraint { lhs: &[13, 14, 15, 16], rhs: &[], constant: 1 },
    ReducedConstraint { lhs: &[18, 20, 22, 24], rhs: &[], constant: 1 },
    ReducedConstraint { lhs: &[27, 28, 31, 32], rhs: &[], constant: 1 },
    ReducedConstraint { lhs: &[36, 40], rhs: &[], constant: 1 },
    ReducedConstraint { lhs: &[47, 48], rhs: &[], constant: 1 },
    ReducedConstraint { lhs: &[54, 56], rhs: &[], constant: 1 },
    ReducedConstraint { lhs: &[64], rhs: &[], constant: 1 },
    // Alice's marginals.
    ReducedConstraint { lhs: &[1, 2, 3, 4], rhs: &[27, 28], constant: 0 },
    ReducedConstraint { lhs: &[1, 2, 3, 4], rhs: &[18, 20], constant: 0 },
    ReducedConstraint { lhs: &[1, 2, 3, 4], rhs: &[36], constant: 0 },
    ReducedConstraint { lhs: &[5, 6, 7, 8], rhs: &[31, 32], constant: 0 },
    ReducedConstraint { lhs: &[5, 6, 7, 8], rhs: &[22, 24], constant: 0 },
    ReducedConstraint { lhs: &[5, 6, 7, 8], rhs: &[40], constant: 0 },
    // Bob's marginals.
    ReducedConstraint { lhs: &[1, 3, 5, 7], rhs: &[27, 31], constant: 0 },
    ReducedConstraint { lhs: &[1, 3, 5, 7], rhs: &[13, 15], constant: 0 },
    ReducedConstraint { lhs: &[1, 3, 5, 7], rhs: &[47], constant: 0 },
    ReducedConstraint { lhs: &[2, 4, 6, 8], rhs: &[28, 32], constant: 0 },
    ReducedConstraint { lhs: &[2, 4, 6, 8], rhs: &[14, 16], constant: 0 },
    ReducedConstraint { lhs: &[2, 4, 6, 8], rhs: &[48], constant: 0 },
    // Chris' marginals.
    ReducedConstraint { lhs: &[1, 2, 5, 6], rhs: &[18, 22], constant: 0 },
    ReducedConstraint { lhs: &[1, 2, 5, 6], rhs: &[13, 14], constant: 0 },
    ReducedConstraint { lhs: &[1, 2, 5, 6], rhs: &[54], constant: 0 },
    ReducedConstraint { lhs: &[3, 4, 7, 8], rhs: &[20, 24], constant: 0 },
    ReducedConstraint { lhs: &[3, 4, 7, 8], rhs: &[15, 16], constant: 0 },
    ReducedConstraint { lhs: &[3, 4, 7, 8], rhs: &[56], constant: 0 },
];

/// Residual check of the reduced constraint system.
#[derive(Clone, Debug)]
pub struct ReducedConstraintReport<S> {
    /// (equation label, residual) for equations with |residual| > tol.
    pub violations: Vec<(String, S)>,
    pub pass: bool,
}

pub fn check_reduced_constraints<S: Scalar>(
    behavior: &Behavior<S>,
    tol: &S,
) -> ReducedConstraintReport<S> {
    let violations: Vec<(String, S)> = REDUCED_CONSTRAINTS
        .iter()
        .filter_map(|c| {
            let r = c.residual(behavior);
            (r.abs() > *tol).then(|| (c.label(), r))
        })
        .collect();
    let pass = violations.is_empty();
    ReducedConstraintReport { violations, pass }
}

/// The 10 independent probabilities that parameterize a zero-constrained
/// no-signaling behavior, named by their entry indices.
#[derive(Clone, Debug, PartialEq)]
pub struct IndependentSet<S> {
    pub p1: S,
    pub p3: S,
    pub p5: S,
    pub p6: S,
    pub p13: S,
    pub p15: S,
    pub p18: S,
    pub p20: S,
    pub p22: S,
    pub p27: S,
}

impl<S: Scalar> IndependentSet<S> {
    pub fn values(&self) -> [(usize, &S); 10] {
        [
            (1, &self.p1),
            (3, &self.p3),
            (5, &self.p5),
            (6, &self.p6),
            (13, &self.p13),
            (15, &self.p15),
            (18, &self.p18),
            (20, &self.p20),
            (22, &self.p22),
            (27, &self.p27),
        ]
    }

    pub fn from_values(values: [S; 10]) -> Self {
        let [p1, p3, p5, p6, p13, p15, p18, p20, p22, p27] = values;
        IndependentSet { p1, p3, p5, p6, p13, p15, p18, p20, p22, p27 }
    }

    /// Read the independents out of an existing behavior.
    pub fn from_behavior(behavior: &Behavior<S>) -> Self {
        Self::from_values(INDEPENDENT_INDICES.map(|i| behavior.p(i).clone()))
    }
}

/// Complete a zero-constrained behavior from its 10 independent
/// probabilities.
///
/// Sets the 37 zeros, solves the remaining entries through the reduced
/// normalization and locality equations, then re-verifies every reduced
/// constraint rather than trusting the solved subset. Completed values
/// within the linear tolerance of the unit-interval boundary are snapped;
/// anything further out is an infeasibility.
pub fn complete_from_independent<S: Scalar>(
    ind: &IndependentSet<S>,
) -> Result<Behavior<S>, BehaviorError> {
    let tol = S::default_tol(DEFAULT_LINEAR_TOL);
    let mut violations: Vec<String> = Vec::new();

    for (idx, v) in ind.values() {
        if !v.is_finite_value() || *v < S::zero() - tol.clone() || *v > S::one() + tol.clone() {
            violations.push(format!("independent p{idx} = {v} outside [0,1]"));
        }
    }

    let mut p: Vec<S> = vec![S::zero(); NUM_ENTRIES + 1]; // 1-based
    for (idx, v) in ind.values() {
        p[idx] = v.clone();
    }
    let one = S::one();
    p[7] = p[13].clone() + p[15].clone() - p[1].clone() - p[3].clone() - p[5].clone();
    p[2] = p[18].clone() + p[22].clone() - p[1].clone() - p[5].clone() - p[6].clone();
    p[14] = p[18].clone() + p[22].clone() - p[13].clone();
    p[4] = p[18].clone() + p[20].clone() - p[1].clone() - p[2].clone() - p[3].clone();
    p[8] = one.clone() - sum((1..=7).map(|i| p[i].clone()));
    p[16] = one.clone() - p[13].clone() - p[14].clone() - p[15].clone();
    p[24] = one.clone() - p[18].clone() - p[20].clone() - p[22].clone();
    p[28] = p[18].clone() + p[20].clone() - p[27].clone();
    p[31] = p[13].clone() + p[15].clone() - p[27].clone();
    p[32] = one.clone() - p[27].clone() - p[28].clone() - p[31].clone();
    p[36] = p[1].clone() + p[2].clone() + p[3].clone() + p[4].clone();
    p[40] = p[5].clone() + p[6].clone() + p[7].clone() + p[8].clone();
    p[47] = p[13].clone() + p[15].clone();
    p[48] = p[14].clone() + p[16].clone();
    p[54] = p[13].clone() + p[14].clone();
    p[56] = p[15].clone() + p[16].clone();
    p[64] = one.clone();

    let completed = [7, 2, 14, 4, 8, 16, 24, 28, 31, 32, 36, 40, 47, 48, 54, 56, 64];
    for &idx in completed.iter() {
        let v = p[idx].clone();
        if v < S::zero() || v > S::one() {
            if v >= S::zero() - tol.clone() && v <= S::one() + tol.clone() {
                // Snap rounding residue back onto the boundary.
                p[idx] = if v < S::zero() { S::zero() } else { S::one() };
            } else {
                violations.push(format!("p{idx} = {v} outside [0,1]"));
            }
        }
    }

    let behavior = Behavior { entries: p[1..].to_vec() };
    for c in REDUCED_CONSTRAINTS.iter() {
        let r = c.residual(&behavior);
        if r.abs() > tol {
            violations.push(format!("constraint {} has residual {r}", c.label()));
        }
    }

    if violations.is_empty() {
        Ok(behavior)
    } else {
        Err(BehaviorError::Infeasible(violations))
    }
}
