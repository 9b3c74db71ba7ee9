//! Feasibility search for behaviors that make full cooperation an
//! equilibrium, plus a random generator of zero-constrained no-signaling
//! behaviors.
//!
//! Everything in the zero-constrained polytope is affine in the 10
//! independent probabilities, including the three full-cooperation margin
//! expressions, so the search is a small linear feasibility program over
//! those 10 variables solved by the in-crate dense simplex.

use crate::behavior::{
    complete_from_independent, factorizability_certificate, Behavior, BehaviorError,
    FactorizabilityResult, IndependentSet, DEFAULT_LINEAR_TOL, DEFAULT_PRODUCT_TOL,
};
use crate::equilibrium::{ccc_margins, EquilibriumError, RatioGame};
use crate::scalar::Scalar;
use crate::simplex::{solve, DenseLp, LpResult};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Re-solves with randomized objectives before giving up on finding a
/// non-factorizable witness.
pub const NONFACTORIZABLE_RETRIES: usize = 16;

/// Redraws before the sampler reports exhaustion.
pub const SAMPLER_REJECTION_BOUND: usize = 10_000;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("margin must be nonnegative and finite, got {0}")]
    InvalidMargin(String),
    #[error("sampler exhausted after {0} rejected draws")]
    SamplingExhausted(usize),
    #[error("every feasible solve ({0} randomized retries) returned a factorizable behavior")]
    OnlyFactorizableFound(usize),
    #[error(transparent)]
    Behavior(#[from] BehaviorError),
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
}

/// A full-cooperation feasibility query.
#[derive(Clone, Debug)]
pub struct SearchProblem<S> {
    pub ratios: RatioGame<S>,
    /// Required slack in each of the three equilibrium inequalities.
    pub margin: S,
    /// Reject factorizable solutions and re-solve with randomized
    /// objectives.
    pub require_nonfactorizable: bool,
    /// Optional starting point; returned directly when it already satisfies
    /// every constraint at the requested margin.
    pub warm_start: Option<IndependentSet<S>>,
    /// Seed for the randomized objective directions.
    pub seed: u64,
}

impl<S: Scalar> SearchProblem<S> {
    pub fn new(ratios: RatioGame<S>, margin: S) -> Result<Self, SearchError> {
        if !margin.is_finite_value() || margin < S::zero() {
            return Err(SearchError::InvalidMargin(format!("{margin}")));
        }
        Ok(SearchProblem {
            ratios,
            margin,
            require_nonfactorizable: false,
            warm_start: None,
            seed: 0,
        })
    }
}

#[derive(Clone, Debug)]
pub enum SearchStatus<S> {
    Feasible(Behavior<S>),
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct SearchResult<S> {
    pub status: SearchStatus<S>,
    /// Full-cooperation margins achieved by the found behavior.
    pub margins: Option<[S; 3]>,
    /// Factorizability verdict of the found behavior.
    pub factorizability: Option<FactorizabilityResult<S>>,
}

impl<S> SearchResult<S> {
    pub fn is_feasible(&self) -> bool {
        matches!(self.status, SearchStatus::Feasible(_))
    }
}

/// Affine expression over the 10 independent probabilities.
#[derive(Clone, Debug)]
struct Affine<S> {
    constant: S,
    coeffs: [S; 10],
}

impl<S: Scalar> Affine<S> {
    fn constant(value: S) -> Self {
        Affine { constant: value, coeffs: std::array::from_fn(|_| S::zero()) }
    }

    fn variable(k: usize) -> Self {
        let mut coeffs: [S; 10] = std::array::from_fn(|_| S::zero());
        coeffs[k] = S::one();
        Affine { constant: S::zero(), coeffs }
    }

    fn add(&self, other: &Self) -> Self {
        Affine {
            constant: self.constant.clone() + other.constant.clone(),
            coeffs: std::array::from_fn(|i| self.coeffs[i].clone() + other.coeffs[i].clone()),
        }
    }

    fn sub(&self, other: &Self) -> Self {
        Affine {
            constant: self.constant.clone() - other.constant.clone(),
            coeffs: std::array::from_fn(|i| self.coeffs[i].clone() - other.coeffs[i].clone()),
        }
    }

    fn scale(&self, by: &S) -> Self {
        Affine {
            constant: by.clone() * self.constant.clone(),
            coeffs: std::array::from_fn(|i| by.clone() * self.coeffs[i].clone()),
        }
    }
}

/// Affine forms of every entry that can be nonzero, keyed by entry index,
/// mirroring the completion formulas.
fn completion_affine<S: Scalar>() -> Vec<(usize, Affine<S>)> {
    // Variable order matches INDEPENDENT_INDICES:
    // q0..q9 = p1, p3, p5, p6, p13, p15, p18, p20, p22, p27.
    let v = |k: usize| Affine::<S>::variable(k);
    let one = Affine::<S>::constant(S::one());

    let p1 = v(0);
    let p3 = v(1);
    let p5 = v(2);
    let p6 = v(3);
    let p13 = v(4);
    let p15 = v(5);
    let p18 = v(6);
    let p20 = v(7);
    let p22 = v(8);
    let p27 = v(9);

    let p7 = p13.add(&p15).sub(&p1).sub(&p3).sub(&p5);
    let p2 = p18.add(&p22).sub(&p1).sub(&p5).sub(&p6);
    let p14 = p18.add(&p22).sub(&p13);
    let p4 = p18.add(&p20).sub(&p1).sub(&p2).sub(&p3);
    let p8 = one
        .sub(&p1)
        .sub(&p2)
        .sub(&p3)
        .sub(&p4)
        .sub(&p5)
        .sub(&p6)
        .sub(&p7);
    let p16 = one.sub(&p13).sub(&p14).sub(&p15);
    let p24 = one.sub(&p18).sub(&p20).sub(&p22);
    let p28 = p18.add(&p20).sub(&p27);
    let p31 = p13.add(&p15).sub(&p27);
    let p32 = one.sub(&p27).sub(&p28).sub(&p31);
    let p36 = p1.add(&p2).add(&p3).add(&p4);
    let p40 = p5.add(&p6).add(&p7).add(&p8);
    let p47 = p13.add(&p15);
    let p48 = p14.add(&p16);
    let p54 = p13.add(&p14);
    let p56 = p15.add(&p16);
    let p64 = one.clone();

    vec![
        (1, p1),
        (2, p2),
        (3, p3),
        (4, p4),
        (5, p5),
        (6, p6),
        (7, p7),
        (8, p8),
        (13, p13),
        (14, p14),
        (15, p15),
        (16, p16),
        (18, p18),
        (20, p20),
        (22, p22),
        (24, p24),
        (27, p27),
        (28, p28),
        (31, p31),
        (32, p32),
        (36, p36),
        (40, p40),
        (47, p47),
        (48, p48),
        (54, p54),
        (56, p56),
        (64, p64),
    ]
}

/// The three full-cooperation margins as affine expressions over the 10
/// independents.
fn margin_affine<S: Scalar>(ratios: &RatioGame<S>) -> [Affine<S>; 3] {
    let table: std::collections::BTreeMap<usize, Affine<S>> =
        completion_affine().into_iter().collect();
    let p = |i: usize| table[&i].clone();
    let r_ab = ratios.alpha_over_beta.clone();
    let r_tb = ratios.theta_over_beta.clone();
    let r_dt = ratios.delta_over_theta.clone();
    let r_ob = ratios.omega_over_beta.clone();
    let r_eo = ratios.epsilon_over_omega.clone();

    let alice = p(5)
        .add(&p(1).scale(&r_ab))
        .sub(&p(13))
        .add(
            &p(6)
                .add(&p(7))
                .sub(&p(14))
                .sub(&p(15))
                .add(&p(2).add(&p(3)).scale(&r_dt))
                .scale(&r_tb),
        )
        .add(&p(8).sub(&p(16)).add(&p(4).scale(&r_eo)).scale(&r_ob));
    let bob = p(2)
        .add(&p(1).scale(&r_ab))
        .sub(&p(18))
        .add(
            &p(4)
                .add(&p(6))
                .sub(&p(20))
                .sub(&p(22))
                .add(&p(3).add(&p(5)).scale(&r_dt))
                .scale(&r_tb),
        )
        .add(&p(8).sub(&p(24)).add(&p(7).scale(&r_eo)).scale(&r_ob));
    let chris = p(3)
        .add(&p(1).scale(&r_ab))
        .sub(&p(27))
        .add(
            &p(4)
                .add(&p(7))
                .sub(&p(28))
                .sub(&p(31))
                .add(&p(2).add(&p(5)).scale(&r_dt))
                .scale(&r_tb),
        )
        .add(&p(8).sub(&p(32)).add(&p(6).scale(&r_eo)).scale(&r_ob));
    [alice, bob, chris]
}

fn build_lp<S: Scalar>(ratios: &RatioGame<S>, margin: &S) -> DenseLp<S> {
    let mut rows: Vec<(Vec<S>, S)> = Vec::new();
    // Box: each independent at most one (>= 0 is implicit in the solver).
    for k in 0..10 {
        let mut a = vec![S::zero(); 10];
        a[k] = S::one();
        rows.push((a, S::one()));
    }
    // Completed entries in [0, 1].
    for (idx, aff) in completion_affine::<S>() {
        if crate::behavior::INDEPENDENT_INDICES.contains(&idx) || idx == 64 {
            continue;
        }
        let coeffs: Vec<S> = aff.coeffs.to_vec();
        rows.push((coeffs.clone(), S::one() - aff.constant.clone()));
        rows.push((
            coeffs.iter().map(|c| S::zero() - c.clone()).collect(),
            aff.constant.clone(),
        ));
    }
    // Margins at least the requested slack: -m(q) <= const - margin.
    for aff in margin_affine(ratios) {
        rows.push((
            aff.coeffs.iter().map(|c| S::zero() - c.clone()).collect(),
            aff.constant.clone() - margin.clone(),
        ));
    }
    DenseLp { n_vars: 10, rows }
}

fn result_for<S: Scalar>(
    problem: &SearchProblem<S>,
    behavior: Behavior<S>,
) -> Result<Option<SearchResult<S>>, SearchError> {
    let lin_tol = S::default_tol(DEFAULT_LINEAR_TOL);
    let prod_tol = S::default_tol(DEFAULT_PRODUCT_TOL);
    let margins = ccc_margins(&problem.ratios, &behavior, &lin_tol)?;
    if margins.iter().any(|m| *m < problem.margin) {
        return Ok(None);
    }
    let verdict = factorizability_certificate(&behavior, &prod_tol)?;
    if problem.require_nonfactorizable && verdict.is_factorizable() {
        return Ok(None);
    }
    Ok(Some(SearchResult {
        status: SearchStatus::Feasible(behavior),
        margins: Some(margins),
        factorizability: Some(verdict),
    }))
}

/// Search for a zero-constrained no-signaling behavior whose three
/// full-cooperation margins all reach `margin`.
///
/// A warm start satisfying everything is returned as-is. Otherwise a
/// phase-one solve finds a vertex; when a factorizable solution must be
/// rejected, up to [`NONFACTORIZABLE_RETRIES`] re-solves with seeded random
/// objective directions look for a different vertex.
pub fn search_ccc_feasible<S: Scalar>(
    problem: &SearchProblem<S>,
) -> Result<SearchResult<S>, SearchError> {
    if !problem.margin.is_finite_value() || problem.margin < S::zero() {
        return Err(SearchError::InvalidMargin(format!("{}", problem.margin)));
    }

    if let Some(start) = &problem.warm_start {
        if let Ok(behavior) = complete_from_independent(start) {
            if let Some(result) = result_for(problem, behavior)? {
                return Ok(result);
            }
        }
    }

    // In the float backend, ask the solver for a hair more slack than
    // requested so the re-verified margins cannot round below it.
    let solver_margin = if S::EXACT {
        problem.margin.clone()
    } else {
        problem.margin.clone() + S::from_f64_exact(1e-9)
    };
    let lp = build_lp(&problem.ratios, &solver_margin);
    let eps = S::default_tol(1e-9);

    let infeasible = SearchResult {
        status: SearchStatus::Infeasible,
        margins: None,
        factorizability: None,
    };

    let q = match solve(&lp, None, &eps) {
        LpResult::Feasible(q) => q,
        LpResult::Infeasible => return Ok(infeasible),
    };
    let ind = IndependentSet::from_values(std::array::from_fn(|k| q[k].clone()));
    let behavior = complete_from_independent(&ind)?;
    if let Some(result) = result_for(problem, behavior)? {
        return Ok(result);
    }

    // The phase-one vertex was factorizable (possible only at margin ~ 0);
    // walk to other vertices along random directions.
    let mut rng = ChaCha8Rng::seed_from_u64(problem.seed);
    for _ in 0..NONFACTORIZABLE_RETRIES {
        let objective: Vec<S> = (0..10)
            .map(|_| S::from_f64_exact(rng.gen_range(-1.0..1.0)))
            .collect();
        let q = match solve(&lp, Some(&objective), &eps) {
            LpResult::Feasible(q) => q,
            LpResult::Infeasible => return Ok(infeasible),
        };
        let ind = IndependentSet::from_values(std::array::from_fn(|k| q[k].clone()));
        let behavior = complete_from_independent(&ind)?;
        if let Some(result) = result_for(problem, behavior)? {
            return Ok(result);
        }
    }
    Err(SearchError::OnlyFactorizableFound(NONFACTORIZABLE_RETRIES))
}

/// Draw a random zero-constrained no-signaling behavior, deterministic per
/// seed.
///
/// The first context block is drawn uniformly on the outcome simplex; the
/// three cross-context blocks then have fixed margins, and their one free
/// entry each is drawn uniformly within its admissible interval, so every
/// draw completes to a feasible behavior (up to floating-point dust, which
/// triggers a redraw).
pub fn random_nosignaling_sample(seed: u64) -> Result<Behavior<f64>, SearchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SAMPLER_REJECTION_BOUND {
        // Uniform point of the 8-outcome simplex via normalized exponentials.
        let mut block1 = [0.0f64; 8];
        let mut total = 0.0;
        for v in block1.iter_mut() {
            *v = -(1.0 - rng.gen::<f64>()).ln();
            total += *v;
        }
        for v in block1.iter_mut() {
            *v /= total;
        }
        let alice_plus = block1[0] + block1[1] + block1[2] + block1[3];
        let bob_plus = block1[0] + block1[2] + block1[4] + block1[6];
        let chris_plus = block1[0] + block1[1] + block1[4] + block1[5];

        // Joint (+,+) mass of a 2x2 distribution with the given margins.
        let mut couple = |a: f64, b: f64| {
            let lo = (a + b - 1.0).max(0.0);
            let hi = a.min(b);
            lo + (hi - lo) * rng.gen::<f64>()
        };
        let p13 = couple(bob_plus, chris_plus);
        let p18 = couple(alice_plus, chris_plus);
        let p27 = couple(alice_plus, bob_plus);

        let ind = IndependentSet {
            p1: block1[0],
            p3: block1[2],
            p5: block1[4],
            p6: block1[5],
            p13,
            p15: bob_plus - p13,
            p18,
            p20: alice_plus - p18,
            p22: chris_plus - p18,
            p27,
        };
        if let Ok(behavior) = complete_from_independent(&ind) {
            return Ok(behavior);
        }
    }
    Err(SearchError::SamplingExhausted(SAMPLER_REJECTION_BOUND))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behavior::testutil::{example_behavior, example_independents, rat};
    use crate::behavior::{
        check_embedding_zeros, check_no_signaling, check_normalization,
    };
    use crate::equilibrium::verify_ne;
    use crate::payoff::MixedProfile;
    use num_rational::BigRational;

    fn ratio_game_f64() -> RatioGame<f64> {
        RatioGame::new(0.9, 0.01, 0.2, 0.01, 0.9).unwrap()
    }

    fn ratio_game_exact() -> RatioGame<BigRational> {
        RatioGame::new(rat(9, 10), rat(1, 100), rat(1, 5), rat(1, 100), rat(9, 10)).unwrap()
    }

    #[test]
    fn affine_completion_matches_the_numeric_completion() {
        let ind = example_independents();
        let q: [BigRational; 10] =
            std::array::from_fn(|k| ind.values()[k].1.clone());
        let behavior = example_behavior();
        for (idx, aff) in completion_affine::<BigRational>() {
            let mut value = aff.constant.clone();
            for (k, c) in aff.coeffs.iter().enumerate() {
                value += c.clone() * q[k].clone();
            }
            assert_eq!(value, *behavior.p(idx), "p{idx}");
        }
    }

    #[test]
    fn affine_margins_match_ccc_margins() {
        let ind = example_independents();
        let q: [BigRational; 10] =
            std::array::from_fn(|k| ind.values()[k].1.clone());
        let from_op = ccc_margins(
            &ratio_game_exact(),
            &example_behavior(),
            &BigRational::from_int(0),
        )
        .unwrap();
        for (aff, expected) in margin_affine(&ratio_game_exact()).iter().zip(from_op.iter()) {
            let mut value = aff.constant.clone();
            for (k, c) in aff.coeffs.iter().enumerate() {
                value += c.clone() * q[k].clone();
            }
            assert_eq!(value, *expected);
        }
    }

    #[test]
    fn warm_start_at_the_example_values_returns_them_unchanged() {
        let mut problem = SearchProblem::new(ratio_game_exact(), BigRational::from_int(0)).unwrap();
        problem.warm_start = Some(example_independents());
        let result = search_ccc_feasible(&problem).unwrap();
        match result.status {
            SearchStatus::Feasible(b) => assert_eq!(b, example_behavior()),
            SearchStatus::Infeasible => panic!("warm start rejected"),
        }
        assert_eq!(
            result.margins.unwrap(),
            [rat(10663, 100000), rat(9643, 100000), rat(172, 10000)]
        );
    }

    #[test]
    fn example_ratios_are_feasible_with_positive_margin() {
        let mut problem = SearchProblem::new(ratio_game_f64(), 0.01).unwrap();
        problem.require_nonfactorizable = true;
        let result = search_ccc_feasible(&problem).unwrap();
        let behavior = match &result.status {
            SearchStatus::Feasible(b) => b.clone(),
            SearchStatus::Infeasible => panic!("worked-example ratios reported infeasible"),
        };
        let margins = result.margins.unwrap();
        assert!(margins.iter().all(|&m| m >= 0.01), "{margins:?}");
        assert!(!result.factorizability.unwrap().is_factorizable());

        // Independent re-verification through the equilibrium module.
        let game = ratio_game_f64().to_unit_beta_game();
        let verdict = verify_ne(
            &game,
            &behavior,
            &MixedProfile::new(1.0, 1.0, 1.0).unwrap(),
            &1e-9,
        );
        assert!(verdict.is_ne);
        assert!(check_embedding_zeros(&behavior, &1e-12).pass);
    }

    #[test]
    fn absurd_margin_is_infeasible() {
        let problem = SearchProblem::new(ratio_game_f64(), 10.0).unwrap();
        let result = search_ccc_feasible(&problem).unwrap();
        assert!(!result.is_feasible());
    }

    #[test]
    fn feasibility_is_monotone_in_the_margin() {
        let ladder = [0.0, 0.01, 0.05, 0.1, 0.3, 1.0, 3.0, 10.0];
        let mut seen_infeasible = false;
        for margin in ladder {
            let problem = SearchProblem::new(ratio_game_f64(), margin).unwrap();
            let feasible = search_ccc_feasible(&problem).unwrap().is_feasible();
            if seen_infeasible {
                assert!(!feasible, "margin {margin} feasible after an infeasible one");
            }
            if !feasible {
                seen_infeasible = true;
            }
        }
        assert!(seen_infeasible, "the ladder should top out");
    }

    #[test]
    fn exact_search_returns_exact_margins() {
        let problem =
            SearchProblem::new(ratio_game_exact(), rat(1, 100)).unwrap();
        let result = search_ccc_feasible(&problem).unwrap();
        assert!(result.is_feasible());
        let margins = result.margins.unwrap();
        assert!(margins.iter().all(|m| *m >= rat(1, 100)));
    }

    #[test]
    fn negative_margin_is_rejected() {
        assert!(matches!(
            SearchProblem::new(ratio_game_f64(), -0.5),
            Err(SearchError::InvalidMargin(_))
        ));
    }

    #[test]
    fn sampler_is_deterministic_and_valid() {
        let a = random_nosignaling_sample(42).unwrap();
        let b = random_nosignaling_sample(42).unwrap();
        assert_eq!(a, b);
        let c = random_nosignaling_sample(43).unwrap();
        assert_ne!(a, c);

        let mut accepted = 0;
        for seed in 0..100 {
            let behavior = match random_nosignaling_sample(seed) {
                Ok(b) => b,
                Err(_) => continue,
            };
            accepted += 1;
            assert!(check_embedding_zeros(&behavior, &1e-12).pass);
            assert!(check_normalization(&behavior, &1e-12).pass);
            assert!(check_no_signaling(&behavior, &1e-12).pass);
        }
        println!("sampler acceptance fraction: {}/100", accepted);
        assert!(accepted > 0);
    }

    #[test]
    fn search_results_reverify_on_many_problem_instances() {
        // A small grid of PD-style ratio games; every feasible result must
        // re-verify through the public checks.
        for (i, (ab, tb, dt, ob, eo)) in [
            (0.9, 0.01, 0.2, 0.01, 0.9),
            (0.8, 0.1, 0.5, 0.05, 0.5),
            (0.95, 0.2, 0.3, 0.1, 0.2),
        ]
        .iter()
        .enumerate()
        {
            let ratios = RatioGame::new(*ab, *tb, *dt, *ob, *eo).unwrap();
            let mut problem = SearchProblem::new(ratios.clone(), 0.005).unwrap();
            problem.seed = i as u64;
            let result = search_ccc_feasible(&problem).unwrap();
            if let SearchStatus::Feasible(behavior) = result.status {
                let margins = ccc_margins(&ratios, &behavior, &1e-9).unwrap();
                assert!(margins.iter().all(|&m| m >= 0.005), "{margins:?}");
            }
        }
    }

    #[test]
    fn infeasible_results_carry_no_behavior() {
        let problem = SearchProblem::new(ratio_game_f64(), 10.0).unwrap();
        let result = search_ccc_feasible(&problem).unwrap();
        assert!(result.margins.is_none());
        assert!(result.factorizability.is_none());
    }
}
