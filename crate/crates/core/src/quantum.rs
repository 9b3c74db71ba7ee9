//! Behavior generation from tripartite qubit states.
//!
//! Each player's two settings are unit directions; the referee measures the
//! Pauli spin observable along the three chosen directions. Outcome
//! probabilities come from the Born rule with the projectors
//! `(I + sign * n.sigma) / 2`, filling the 64-entry behavior in canonical
//! order. Quantum behaviors always satisfy normalization and no-signaling;
//! entangled states can produce non-factorizable ones.
//!
//! This backend is float-only: Born probabilities are generically
//! irrational.

use crate::behavior::{Behavior, OutcomeTriple, Sign, CONTEXT_ORDER, NUM_ENTRIES};
use crate::game::Player;
use num_complex::Complex64;
use thiserror::Error;

/// Tolerance for state invariants (normalization, hermiticity, trace).
pub const STATE_TOL: f64 = 1e-12;

/// Tolerance below which density eigenvalues may dip negative.
pub const EIGENVALUE_TOL: f64 = 1e-10;

/// Probabilities may stray this far outside the unit interval (or off the
/// real axis) before generation errors out instead of clamping.
pub const PROBABILITY_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum QuantumError {
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid setup: {0}")]
    InvalidSetup(String),
    #[error("probability at p{entry_index} out of range: {value}")]
    ProbabilityOutOfRange { entry_index: usize, value: f64 },
    #[error("probability at p{entry_index} has imaginary part {imag}")]
    ComplexProbability { entry_index: usize, imag: f64 },
}

/// A three-qubit state: a pure state vector of 8 amplitudes in basis order
/// |000> .. |111> (qubit order Alice, Bob, Chris), or an 8x8 density
/// operator in the same basis.
#[derive(Clone, Debug)]
pub enum TripartiteState {
    Pure(Vec<Complex64>),
    Density(Vec<Vec<Complex64>>),
}

impl TripartiteState {
    pub fn pure(amplitudes: Vec<Complex64>) -> Result<Self, QuantumError> {
        if amplitudes.len() != 8 {
            return Err(QuantumError::InvalidState(format!(
                "pure state needs 8 amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let state = TripartiteState::Pure(amplitudes);
        state.validated()
    }

    pub fn density(matrix: Vec<Vec<Complex64>>) -> Result<Self, QuantumError> {
        if matrix.len() != 8 || matrix.iter().any(|row| row.len() != 8) {
            return Err(QuantumError::InvalidState("density operator must be 8x8".into()));
        }
        let state = TripartiteState::Density(matrix);
        state.validated()
    }

    fn validated(self) -> Result<Self, QuantumError> {
        let report = validate_state(&self);
        if report.pass {
            Ok(self)
        } else {
            Err(QuantumError::InvalidState(report.describe()))
        }
    }

    /// Density operator |psi><psi| of a pure state, or the stored operator.
    pub fn density_matrix(&self) -> Vec<Vec<Complex64>> {
        match self {
            TripartiteState::Pure(amps) => (0..8)
                .map(|i| (0..8).map(|j| amps[i] * amps[j].conj()).collect())
                .collect(),
            TripartiteState::Density(rho) => rho.clone(),
        }
    }
}

/// The GHZ state (|000> + |111>) / sqrt(2).
pub fn ghz_state() -> TripartiteState {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    TripartiteState::Pure(vec![h, zero, zero, zero, zero, zero, zero, h])
}

/// A measurement direction: a unit vector in R^3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction([f64; 3]);

impl Direction {
    pub fn new(v: [f64; 3]) -> Result<Self, QuantumError> {
        let norm2: f64 = v.iter().map(|c| c * c).sum();
        if !norm2.is_finite() || (norm2.sqrt() - 1.0).abs() > STATE_TOL {
            return Err(QuantumError::InvalidSetup(format!(
                "direction {v:?} is not a unit vector (norm {})",
                norm2.sqrt()
            )));
        }
        Ok(Direction(v))
    }

    /// Unit vector from spherical angles (polar theta from +z, azimuth phi).
    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        Direction([theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()])
    }

    /// Direction in the x-y plane at azimuth phi.
    pub fn from_xy_angle(phi: f64) -> Self {
        Direction([phi.cos(), phi.sin(), 0.0])
    }

    pub fn x() -> Self {
        Direction([1.0, 0.0, 0.0])
    }

    pub fn y() -> Self {
        Direction([0.0, 1.0, 0.0])
    }

    pub fn z() -> Self {
        Direction([0.0, 0.0, 1.0])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    /// Spin projector (I + sign * n.sigma) / 2 as a 2x2 matrix.
    pub fn projector(&self, sign: Sign) -> [[Complex64; 2]; 2] {
        let s = match sign {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        };
        let [nx, ny, nz] = self.0;
        let c = |re, im| Complex64::new(re, im);
        [
            [c((1.0 + s * nz) / 2.0, 0.0), c(s * nx / 2.0, -s * ny / 2.0)],
            [c(s * nx / 2.0, s * ny / 2.0), c((1.0 - s * nz) / 2.0, 0.0)],
        ]
    }
}

/// The six measurement directions: two per player.
#[derive(Clone, Debug)]
pub struct MeasurementSetup {
    pub alice: [Direction; 2],
    pub bob: [Direction; 2],
    pub chris: [Direction; 2],
}

impl MeasurementSetup {
    pub fn new(alice: [Direction; 2], bob: [Direction; 2], chris: [Direction; 2]) -> Self {
        MeasurementSetup { alice, bob, chris }
    }

    /// Same pair of directions for every player.
    pub fn uniform(first: Direction, second: Direction) -> Self {
        MeasurementSetup {
            alice: [first, second],
            bob: [first, second],
            chris: [first, second],
        }
    }

    fn direction(&self, player: Player, choice: crate::game::Choice) -> &Direction {
        let pair = match player {
            Player::Alice => &self.alice,
            Player::Bob => &self.bob,
            Player::Chris => &self.chris,
        };
        match choice {
            crate::game::Choice::First => &pair[0],
            crate::game::Choice::Second => &pair[1],
        }
    }
}

/// Validation report for a tripartite state.
#[derive(Clone, Debug)]
pub struct StateReport {
    /// |sum of squared amplitudes - 1| for pure states.
    pub norm_residual: Option<f64>,
    /// max |rho - rho^dagger| entry for density operators.
    pub hermiticity_residual: Option<f64>,
    /// |trace - 1| for density operators.
    pub trace_residual: Option<f64>,
    /// Smallest eigenvalue for density operators.
    pub min_eigenvalue: Option<f64>,
    pub pass: bool,
}

impl StateReport {
    fn describe(&self) -> String {
        let mut parts = Vec::new();
        if let Some(r) = self.norm_residual {
            parts.push(format!("norm residual {r:.3e}"));
        }
        if let Some(r) = self.hermiticity_residual {
            parts.push(format!("hermiticity residual {r:.3e}"));
        }
        if let Some(r) = self.trace_residual {
            parts.push(format!("trace residual {r:.3e}"));
        }
        if let Some(r) = self.min_eigenvalue {
            parts.push(format!("min eigenvalue {r:.3e}"));
        }
        parts.join(", ")
    }
}

/// Check the state invariants: unit norm for pure states; hermiticity, unit
/// trace, and nonnegative spectrum (within [`EIGENVALUE_TOL`]) for density
/// operators.
pub fn validate_state(state: &TripartiteState) -> StateReport {
    match state {
        TripartiteState::Pure(amps) => {
            let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
            let residual = (norm2 - 1.0).abs();
            StateReport {
                norm_residual: Some(residual),
                hermiticity_residual: None,
                trace_residual: None,
                min_eigenvalue: None,
                pass: amps.len() == 8 && residual <= STATE_TOL,
            }
        }
        TripartiteState::Density(rho) => {
            let mut herm: f64 = 0.0;
            for i in 0..8 {
                for j in 0..8 {
                    herm = herm.max((rho[i][j] - rho[j][i].conj()).norm());
                }
            }
            let trace: Complex64 = (0..8).map(|i| rho[i][i]).sum();
            let trace_residual = (trace - Complex64::new(1.0, 0.0)).norm();
            let min_eig = hermitian_min_eigenvalue(rho);
            StateReport {
                norm_residual: None,
                hermiticity_residual: Some(herm),
                trace_residual: Some(trace_residual),
                min_eigenvalue: Some(min_eig),
                pass: herm <= STATE_TOL && trace_residual <= STATE_TOL && min_eig >= -EIGENVALUE_TOL,
            }
        }
    }
}

/// Smallest eigenvalue of an 8x8 Hermitian matrix, via the real symmetric
/// embedding [[Re, -Im], [Im, Re]] (which carries each eigenvalue twice) and
/// cyclic Jacobi sweeps.
fn hermitian_min_eigenvalue(rho: &[Vec<Complex64>]) -> f64 {
    const N: usize = 16;
    let mut a = [[0.0f64; N]; N];
    for i in 0..8 {
        for j in 0..8 {
            // Symmetrize first so the embedding is exactly symmetric even if
            // the input is only approximately Hermitian.
            let h = (rho[i][j] + rho[j][i].conj()) / 2.0;
            a[i][j] = h.re;
            a[i + 8][j + 8] = h.re;
            a[i][j + 8] = -h.im;
            a[i + 8][j] = h.im;
        }
    }
    for _sweep in 0..50 {
        let mut off: f64 = 0.0;
        for p in 0..N {
            for q in (p + 1)..N {
                off += a[p][q] * a[p][q];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                if a[p][q].abs() < 1e-18 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..N).map(|i| a[i][i]).fold(f64::INFINITY, f64::min)
}

/// Kronecker product of three 2x2 matrices into 8x8, with qubit order
/// Alice (most significant), Bob, Chris.
fn kron3(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2], c: &[[Complex64; 2]; 2]) -> [[Complex64; 8]; 8] {
    let mut out = [[Complex64::new(0.0, 0.0); 8]; 8];
    for (i, row) in out.iter_mut().enumerate() {
        let (ia, ib, ic) = (i >> 2 & 1, i >> 1 & 1, i & 1);
        for (j, entry) in row.iter_mut().enumerate() {
            let (ja, jb, jc) = (j >> 2 & 1, j >> 1 & 1, j & 1);
            *entry = a[ia][ja] * b[ib][jb] * c[ic][jc];
        }
    }
    out
}

/// Generate the 64-entry behavior of a state measured with the given setup.
///
/// Probabilities within [`PROBABILITY_TOL`] of the unit-interval boundary
/// (or of the real axis) are clamped; anything further out is an error, so
/// numerical defects are not silently masked.
pub fn born_joint_probabilities(
    state: &TripartiteState,
    setup: &MeasurementSetup,
) -> Result<Behavior<f64>, QuantumError> {
    let report = validate_state(state);
    if !report.pass {
        return Err(QuantumError::InvalidState(report.describe()));
    }
    let mut entries = Vec::with_capacity(NUM_ENTRIES);
    for (ci, ctx) in CONTEXT_ORDER.iter().enumerate() {
        for (oi, outcome) in OutcomeTriple::CANONICAL.iter().enumerate() {
            let proj = kron3(
                &setup.direction(Player::Alice, ctx.alice).projector(outcome.alice),
                &setup.direction(Player::Bob, ctx.bob).projector(outcome.bob),
                &setup.direction(Player::Chris, ctx.chris).projector(outcome.chris),
            );
            let entry_index = crate::behavior::entry_index(ci, oi);
            let value = match state {
                TripartiteState::Pure(amps) => {
                    // <psi| P |psi>
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..8 {
                        for j in 0..8 {
                            acc += amps[i].conj() * proj[i][j] * amps[j];
                        }
                    }
                    acc
                }
                TripartiteState::Density(rho) => {
                    // tr(rho P)
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..8 {
                        for j in 0..8 {
                            acc += rho[i][j] * proj[j][i];
                        }
                    }
                    acc
                }
            };
            if value.im.abs() > PROBABILITY_TOL {
                return Err(QuantumError::ComplexProbability { entry_index, imag: value.im });
            }
            let p = value.re;
            let clamped = if (-PROBABILITY_TOL..0.0).contains(&p) {
                0.0
            } else if p > 1.0 && p <= 1.0 + PROBABILITY_TOL {
                1.0
            } else if (0.0..=1.0).contains(&p) {
                p
            } else {
                return Err(QuantumError::ProbabilityOutOfRange { entry_index, value: p });
            };
            entries.push(clamped);
        }
    }
    Ok(Behavior::new(entries).expect("64 finite entries"))
}
