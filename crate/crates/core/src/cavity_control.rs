//! Entanglement control in a two-mode cavity.
//!
//! Atom `B` sits outside the cavity; atom `A` couples resonantly to mode
//! `M₁` (Jaynes–Cummings) and, in alternating stages, to the detuned
//! orthogonal mode `M₂`, which plays the auxiliary role. The initial state
//! `|g_a⟩(α|1₁,g_b⟩ + β|0₁,e_b⟩)|0₂⟩` has a single excitation, so the whole
//! evolution lives in a four-dimensional space:
//!
//! * a three-dimensional block `(M₂ excited, A excited, M₁ excited) ⊗ |g_b⟩`,
//! * the one-dimensional branch `|g_a, 0₁, 0₂⟩ ⊗ |e_b⟩`.
//!
//! Propagators are the bracketed stage matrices with the common
//! `e^{−iω₁t₁}`, `e^{−iω₂t₂}` factors stripped off the excitation block. The
//! `|e_b⟩` branch evolves with `e^{−iω₁t}` throughout, so relative to the
//! block it picks up `e^{−iδt₂}` per control stage (`δ = ω₁ − ω₂`).

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use thiserror::Error;

use crate::linalg::{eig_hermitian, kron, pauli_y, ComplexMatrix, LinalgError, C64, I, ONE, ZERO};

/// Detuning `ω₁ − ω₂` used for the entanglement-preservation curve, s⁻¹.
pub const FIG4_DELTA: f64 = 8.0e5;
/// Atom–mode coupling used for the entanglement-preservation curve, s⁻¹.
pub const FIG4_G: f64 = 1.5e4;

const DENSITY_TOL: f64 = 1e-10;
const AMPLITUDE_NORM_TOL: f64 = 1e-12;

/// Eigenvalues of ρ below this are treated as exact zeros in the
/// concurrence; keeps square roots of rounding noise out of the result.
pub const CONCURRENCE_RANK_FLOOR: f64 = 1e-13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CavityError {
    #[error("invalid cavity parameter: {0}")]
    InvalidParameter(String),
    #[error("not a density matrix: {0}")]
    InvalidDensity(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, CavityError>;

fn check_amplitudes(alpha: C64, beta: C64) -> Result<()> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if !norm.is_finite() || (norm - 1.0).abs() > AMPLITUDE_NORM_TOL {
        return Err(CavityError::InvalidParameter(format!(
            "|alpha|^2 + |beta|^2 = {norm}, expected 1"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    /// Atom–mode coupling `g`, 1/time.
    pub g: f64,
    /// Detuning `δ = ω₁ − ω₂`, 1/time.
    pub delta: f64,
    /// Stage-1 (atom–`M₁`) duration.
    pub t1: f64,
    /// Stage-2 (atom–`M₂`) duration.
    pub t2: f64,
    pub n_steps: u64,
    pub alpha: C64,
    pub beta: C64,
}

impl CavityParams {
    pub fn new(
        g: f64,
        delta: f64,
        t1: f64,
        t2: f64,
        n_steps: u64,
        alpha: C64,
        beta: C64,
    ) -> Result<Self> {
        if !(g.is_finite() && g > 0.0) {
            return Err(CavityError::InvalidParameter(format!(
                "g must be positive, got {g}"
            )));
        }
        if !delta.is_finite() {
            return Err(CavityError::InvalidParameter("delta must be finite".into()));
        }
        for (name, t) in [("t1", t1), ("t2", t2)] {
            if !(t.is_finite() && t >= 0.0) {
                return Err(CavityError::InvalidParameter(format!(
                    "{name} must be non-negative, got {t}"
                )));
            }
        }
        if n_steps == 0 {
            return Err(CavityError::InvalidParameter(
                "n_steps must be at least 1".into(),
            ));
        }
        check_amplitudes(alpha, beta)?;
        Ok(Self {
            g,
            delta,
            t1,
            t2,
            n_steps,
            alpha,
            beta,
        })
    }

    /// Swap-time schedule: `N·t₁ = π/(2g)`, `g·t₂ = π/2`, with the
    /// entanglement-preservation detuning and coupling and `α = β = 1/√2`.
    pub fn fig4(n_steps: u64) -> Self {
        let a = C64::new(FRAC_1_SQRT_2, 0.0);
        Self::swap_schedule(FIG4_G, FIG4_DELTA, PI / (2.0 * FIG4_G), n_steps, a, a)
            .expect("valid entanglement-preservation parameters")
    }

    /// `t₁ = π/(2gN)` so that the total `A–M₁` interaction time equals the
    /// bare swap time.
    pub fn swap_schedule(
        g: f64,
        delta: f64,
        t2: f64,
        n_steps: u64,
        alpha: C64,
        beta: C64,
    ) -> Result<Self> {
        let t1 = PI / (2.0 * g * n_steps.max(1) as f64);
        Self::new(g, delta, t1, t2, n_steps, alpha, beta)
    }

    pub fn with_steps_on_swap_schedule(&self, n_steps: u64) -> Result<Self> {
        Self::swap_schedule(self.g, self.delta, self.t2, n_steps, self.alpha, self.beta)
    }
}

/// Slot indices of the excitation block.
pub const SLOT_M2: usize = 0;
pub const SLOT_A: usize = 1;
pub const SLOT_M1: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityState {
    /// `(M₂, A, M₁)` single-excitation amplitudes, atom `B` in `g`.
    pub c_exc: [C64; 3],
    /// Amplitude of `|g_a, 0₁, 0₂, e_b⟩`.
    pub c_vac: C64,
}

impl CavityState {
    /// `|g_a⟩(α|1₁,g_b⟩ + β|0₁,e_b⟩)|0₂⟩`.
    pub fn initial(alpha: C64, beta: C64) -> Result<Self> {
        check_amplitudes(alpha, beta)?;
        Ok(Self {
            c_exc: [ZERO, ZERO, alpha],
            c_vac: beta,
        })
    }

    pub fn norm(&self) -> f64 {
        (self.c_exc.iter().map(|z| z.norm_sqr()).sum::<f64>() + self.c_vac.norm_sqr()).sqrt()
    }

    /// Expected total excitation number over `A`, `M₁`, `M₂` and `B`.
    pub fn excitation_number(&self) -> f64 {
        // Each basis state here carries exactly one quantum.
        self.norm().powi(2)
    }

    fn apply_block(&mut self, u: &ComplexMatrix) {
        let c = self.c_exc;
        for (i, out) in self.c_exc.iter_mut().enumerate() {
            *out = (0..3).map(|j| u[(i, j)] * c[j]).sum();
        }
    }
}

/// Uncontrolled Jaynes–Cummings evolution of the initial state for time `t`.
pub fn free_evolution(alpha: C64, beta: C64, g: f64, t: f64) -> Result<CavityState> {
    check_amplitudes(alpha, beta)?;
    let (s, c) = (g * t).sin_cos();
    Ok(CavityState {
        c_exc: [ZERO, -I * alpha * s, alpha * c],
        c_vac: beta,
    })
}

/// `C_{M₁,B}(t) = 2|αβ cos(gt)|` for the uncontrolled evolution.
pub fn concurrence_uncontrolled(alpha: C64, beta: C64, g: f64, t: f64) -> f64 {
    2.0 * (alpha * beta).norm() * (g * t).cos().abs()
}

/// Stage 1: `A–M₁` exchange; `M₂` only accumulates `e^{iδt₁}`.
pub fn stage1_propagator(params: &CavityParams) -> ComplexMatrix {
    let (s, c) = (params.g * params.t1).sin_cos();
    let (c, ms) = (C64::new(c, 0.0), -I * s);
    let phase = C64::from_polar(1.0, params.delta * params.t1);
    ComplexMatrix::from_rows(&[[phase, ZERO, ZERO], [ZERO, c, ms], [ZERO, ms, c]])
        .expect("finite stage-1 parameters")
}

/// Stage 2: `A–M₂` exchange with the imaginary coupling of the orthogonal
/// polarization (a real rotation); `M₁` only accumulates `e^{−iδt₂}`.
pub fn stage2_propagator(params: &CavityParams) -> ComplexMatrix {
    let (s, c) = (params.g * params.t2).sin_cos();
    let phase = C64::from_polar(1.0, -params.delta * params.t2);
    let (c, s) = (C64::new(c, 0.0), C64::new(s, 0.0));
    ComplexMatrix::from_rows(&[[c, -s, ZERO], [s, c, ZERO], [ZERO, ZERO, phase]])
        .expect("finite stage-2 parameters")
}

/// Stage-1 generator on the excitation block in the frame rotating at `ω₂`
/// on `M₂` and `ω₁` elsewhere: `−δ|M₂⟩⟨M₂| + g(|A⟩⟨M₁| + |M₁⟩⟨A|)`.
pub fn stage1_hamiltonian(params: &CavityParams) -> ComplexMatrix {
    let g = C64::new(params.g, 0.0);
    let d = C64::new(-params.delta, 0.0);
    ComplexMatrix::from_rows(&[[d, ZERO, ZERO], [ZERO, ZERO, g], [ZERO, g, ZERO]]).unwrap()
}

/// Stage-2 generator on the excitation block, frame at `ω₂` on `M₂` and `A`:
/// `δ|M₁⟩⟨M₁| + g(i|A⟩⟨M₂| − i|M₂⟩⟨A|)`.
pub fn stage2_hamiltonian(params: &CavityParams) -> ComplexMatrix {
    let ig = I * params.g;
    let d = C64::new(params.delta, 0.0);
    ComplexMatrix::from_rows(&[[ZERO, -ig, ZERO], [ig, ZERO, ZERO], [ZERO, ZERO, d]]).unwrap()
}

/// `N` alternating stage-1/stage-2 steps from the initial state.
pub fn evolve_controlled(params: &CavityParams) -> CavityState {
    let step = &stage2_propagator(params) * &stage1_propagator(params);
    let vac_phase = C64::from_polar(1.0, -params.delta * params.t2);
    let mut state = CavityState {
        c_exc: [ZERO, ZERO, params.alpha],
        c_vac: params.beta,
    };
    for _ in 0..params.n_steps {
        state.apply_block(&step);
        state.c_vac *= vac_phase;
    }
    state
}

/// Density matrix of mode `M₁` and atom `B` on `{|0,g⟩, |0,e⟩, |1,g⟩, |1,e⟩}`
/// (`M₁` photon number first).
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity(ComplexMatrix);

impl TwoQubitDensity {
    /// Validates Hermiticity, unit trace and positivity, each to 1e-10.
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        if rho.rows() != 4 || rho.cols() != 4 {
            return Err(CavityError::InvalidDensity(format!(
                "expected 4x4, got {}x{}",
                rho.rows(),
                rho.cols()
            )));
        }
        let herm = rho.hermiticity_defect();
        if herm > DENSITY_TOL {
            return Err(CavityError::InvalidDensity(format!("asymmetry {herm:e}")));
        }
        let tr = rho.trace();
        if (tr - ONE).norm() > DENSITY_TOL {
            return Err(CavityError::InvalidDensity(format!("trace {tr}")));
        }
        let min_eig = *eig_hermitian(&rho)?.values.last().unwrap();
        if min_eig < -DENSITY_TOL {
            return Err(CavityError::InvalidDensity(format!(
                "eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self(rho))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// Traces atom `A` and mode `M₂` out of a cavity state.
///
/// The `|1,g⟩` and `|0,e⟩` components share the same environment state
/// `|g_a, 0₂⟩`, which is the only source of coherence; the result is an
/// X-state with an empty `|1,e⟩` corner.
pub fn reduced_density_m1_b(state: &CavityState) -> TwoQubitDensity {
    let [c_m2, c_a, c_m1] = state.c_exc;
    let c_vac = state.c_vac;
    let mut rho = ComplexMatrix::zeros(4, 4);
    rho[(0, 0)] = C64::new(c_m2.norm_sqr() + c_a.norm_sqr(), 0.0);
    rho[(1, 1)] = C64::new(c_vac.norm_sqr(), 0.0);
    rho[(2, 2)] = C64::new(c_m1.norm_sqr(), 0.0);
    rho[(2, 1)] = c_m1 * c_vac.conj();
    rho[(1, 2)] = c_vac * c_m1.conj();
    TwoQubitDensity(rho)
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`.
///
/// The `λᵢ` are the singular values of `τ = Wᵀ(σ_y⊗σ_y)W` for any
/// decomposition `ρ = WW†`; they equal the square roots of the eigenvalues
/// of `ρ(σ_y⊗σ_y)ρ*(σ_y⊗σ_y)`. Here `W` comes from the eigendecomposition of
/// ρ and the singular values from the Hermitian dilation `[[0, τ], [τ†, 0]]`,
/// which avoids taking square roots of near-zero eigenvalues.
pub fn concurrence_wootters(rho: &TwoQubitDensity) -> f64 {
    let eig = eig_hermitian(rho.matrix()).expect("validated density matrix");
    let mut w = ComplexMatrix::zeros(4, 4);
    for (k, &p) in eig.values.iter().enumerate() {
        if p <= CONCURRENCE_RANK_FLOOR {
            continue;
        }
        let amp = p.sqrt();
        for i in 0..4 {
            w[(i, k)] = eig.vectors[(i, k)] * amp;
        }
    }
    let yy = kron(&pauli_y(), &pauli_y());
    let tau = &(&w.transpose() * &yy) * &w;

    let mut dilation = ComplexMatrix::zeros(8, 8);
    for i in 0..4 {
        for j in 0..4 {
            dilation[(i, 4 + j)] = tau[(i, j)];
            dilation[(4 + j, i)] = tau[(i, j)].conj();
        }
    }
    let sv = eig_hermitian(&dilation).expect("Hermitian dilation").values;
    let c = sv[0] - sv[1] - sv[2] - sv[3];
    c.clamp(0.0, 1.0)
}

/// Validates a raw 4×4 matrix and returns its concurrence.
pub fn concurrence_of_matrix(rho: &ComplexMatrix) -> Result<f64> {
    Ok(concurrence_wootters(&TwoQubitDensity::new(rho.clone())?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub n: u64,
    pub t1: f64,
    pub concurrence: f64,
}

/// Concurrence at the end of the schedule for each `N`, with `t₁ = π/(2gN)`
/// recomputed per point and every other parameter taken from `params`.
pub fn fig4_sweep(params: &CavityParams, n_values: &[u64]) -> Result<Vec<SweepPoint>> {
    if n_values.is_empty() {
        return Err(CavityError::InvalidParameter(
            "n_values must not be empty".into(),
        ));
    }
    n_values
        .iter()
        .map(|&n| {
            let p = params.with_steps_on_swap_schedule(n)?;
            let c = concurrence_wootters(&reduced_density_m1_b(&evolve_controlled(&p)));
            Ok(SweepPoint {
                n,
                t1: p.t1,
                concurrence: c,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expm_series, ComplexVector};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const S: f64 = FRAC_1_SQRT_2;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn random_params(rng: &mut StdRng) -> CavityParams {
        let a = rng.random_range(0.0..1.0f64);
        let phase = rng.random_range(-PI..PI);
        CavityParams::new(
            rng.random_range(0.1..3.0),
            rng.random_range(-20.0..20.0),
            rng.random_range(0.0..2.0),
            rng.random_range(0.0..2.0),
            rng.random_range(1..30),
            c(a.sqrt()),
            C64::from_polar((1.0 - a).sqrt(), phase),
        )
        .unwrap()
    }

    fn x_state_concurrence(state: &CavityState) -> f64 {
        2.0 * (state.c_exc[SLOT_M1] * state.c_vac.conj()).norm()
    }

    #[test]
    fn free_evolution_at_zero_is_initial() {
        let s = free_evolution(c(0.6), c(0.8), 2.0, 0.0).unwrap();
        assert_eq!(s, CavityState::initial(c(0.6), c(0.8)).unwrap());
    }

    #[test]
    fn swap_time_kills_m1_b_concurrence() {
        let s = free_evolution(c(S), c(S), 1.0, PI / 2.0).unwrap();
        assert!(s.c_exc[SLOT_M1].norm() < 1e-16);
        assert!(concurrence_wootters(&reduced_density_m1_b(&s)) < 1e-12);
    }

    #[test]
    fn concurrence_at_third_period() {
        let s = free_evolution(c(S), c(S), 1.0, PI / 3.0).unwrap();
        let cw = concurrence_wootters(&reduced_density_m1_b(&s));
        assert!((cw - 0.5).abs() < 1e-12);
        assert!((concurrence_uncontrolled(c(S), c(S), 1.0, PI / 3.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn uncontrolled_formula_limits() {
        assert!((concurrence_uncontrolled(c(S), c(S), 3.0, 0.0) - 1.0).abs() < 1e-15);
        for k in [1.0, 3.0, 5.0] {
            assert!(concurrence_uncontrolled(c(S), c(S), 1.0, k * PI / 2.0) < 1e-15);
        }
        for t in [0.0, 0.3, 1.1] {
            assert_eq!(concurrence_uncontrolled(ONE, ZERO, 1.0, t), 0.0);
        }
    }

    #[test]
    fn stage_propagators() {
        let mut p = CavityParams::fig4(3);
        p.t1 = 0.0;
        assert!(stage1_propagator(&p).max_abs_diff(&ComplexMatrix::identity(3)) == 0.0);

        let p = CavityParams::new(2.0, 13.0, 0.1, PI / 4.0, 1, c(S), c(S)).unwrap();
        let u2 = stage2_propagator(&p);
        let (x, y) = (C64::new(0.3, 0.1), C64::new(-0.2, 0.5));
        let out_m2 = u2[(0, 0)] * x + u2[(0, 1)] * y;
        let out_a = u2[(1, 0)] * x + u2[(1, 1)] * y;
        assert!((out_m2 + y).norm() < 1e-15);
        assert!((out_a - x).norm() < 1e-15);
    }

    #[test]
    fn stage_propagators_are_exponentials_of_hamiltonians() {
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..100 {
            let p = random_params(&mut rng);
            let e1 = expm_series(&stage1_hamiltonian(&p).scale(-I * p.t1)).unwrap();
            let e2 = expm_series(&stage2_hamiltonian(&p).scale(-I * p.t2)).unwrap();
            assert!(e1.max_abs_diff(&stage1_propagator(&p)) < 1e-10);
            assert!(e2.max_abs_diff(&stage2_propagator(&p)) < 1e-10);
            assert!(stage1_propagator(&p).unitarity_defect() < 1e-13);
            assert!(stage2_propagator(&p).unitarity_defect() < 1e-13);
        }
    }

    #[test]
    fn control_off_reduces_to_free_evolution() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..50 {
            let mut p = random_params(&mut rng);
            p.t2 = 0.0;
            let controlled = evolve_controlled(&p);
            let free = free_evolution(p.alpha, p.beta, p.g, p.n_steps as f64 * p.t1).unwrap();
            for k in 0..3 {
                assert!((controlled.c_exc[k] - free.c_exc[k]).norm() < 1e-11);
            }
            assert!((controlled.c_vac - free.c_vac).norm() < 1e-11);
        }
    }

    #[test]
    fn controlled_evolution_preserves_norm_and_excitations() {
        let mut rng = StdRng::seed_from_u64(43);
        for _ in 0..50 {
            let s = evolve_controlled(&random_params(&mut rng));
            assert!((s.norm() - 1.0).abs() < 1e-10);
            assert!((s.excitation_number() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn reduced_state_of_initial() {
        let (alpha, beta) = (c(0.6), C64::new(0.0, 0.8));
        let rho = reduced_density_m1_b(&CavityState::initial(alpha, beta).unwrap());
        let m = rho.matrix();
        assert_eq!(m[(2, 1)], alpha * beta.conj());
        assert_eq!(m[(2, 2)].re, alpha.norm_sqr());
        assert_eq!(m[(1, 1)].re, beta.norm_sqr());
        assert!(TwoQubitDensity::new(m.clone()).is_ok());
    }

    #[test]
    fn excitation_parked_in_m2_is_separable() {
        let s = CavityState {
            c_exc: [ONE, ZERO, ZERO],
            c_vac: ZERO,
        };
        let rho = reduced_density_m1_b(&s);
        let expected = ComplexMatrix::from_diag(&[ONE, ZERO, ZERO, ZERO]);
        assert_eq!(rho.matrix(), &expected);
        assert_eq!(concurrence_wootters(&rho), 0.0);
    }

    #[test]
    fn reduced_state_is_valid_x_state() {
        let mut rng = StdRng::seed_from_u64(44);
        for _ in 0..100 {
            let s = evolve_controlled(&random_params(&mut rng));
            let rho = reduced_density_m1_b(&s);
            let validated = TwoQubitDensity::new(rho.matrix().clone()).unwrap();
            let m = validated.matrix();
            for (i, j) in [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3), (3, 3)] {
                assert_eq!(m[(i, j)], ZERO);
                assert_eq!(m[(j, i)], ZERO);
            }
            let cw = concurrence_wootters(&rho);
            assert!((cw - x_state_concurrence(&s)).abs() < 1e-11);
        }
    }

    #[test]
    fn reduced_state_matches_full_partial_trace() {
        use crate::linalg::partial_trace;
        let mut rng = StdRng::seed_from_u64(45);
        let s = evolve_controlled(&random_params(&mut rng));
        // Full order: A, M1, M2, B.
        let mut full = vec![ZERO; 16];
        let idx = |a: usize, m1: usize, m2: usize, b: usize| 8 * a + 4 * m1 + 2 * m2 + b;
        full[idx(0, 0, 1, 0)] = s.c_exc[SLOT_M2];
        full[idx(1, 0, 0, 0)] = s.c_exc[SLOT_A];
        full[idx(0, 1, 0, 0)] = s.c_exc[SLOT_M1];
        full[idx(0, 0, 0, 1)] = s.c_vac;
        let psi = ComplexVector::new(full);
        let rho = ComplexMatrix::outer(&psi, &psi);
        let traced = partial_trace(&rho, &[2, 2, 2, 2], &[1, 3]).unwrap();
        assert!(traced.max_abs_diff(reduced_density_m1_b(&s).matrix()) < 1e-15);
    }

    #[test]
    fn wootters_reference_states() {
        let bell = ComplexVector::from_real(&[S, 0.0, 0.0, S]);
        let rho = ComplexMatrix::outer(&bell, &bell);
        assert!((concurrence_of_matrix(&rho).unwrap() - 1.0).abs() < 1e-12);

        let mut rng = StdRng::seed_from_u64(46);
        for _ in 0..50 {
            let mut q = || {
                let (a, b) = (
                    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                );
                let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
                ComplexVector::new(vec![a / n, b / n])
            };
            let product = q().kron(&q());
            let rho = ComplexMatrix::outer(&product, &product);
            assert!(concurrence_of_matrix(&rho).unwrap() < 1e-12);
        }

        let mixed = ComplexMatrix::identity(4).scale(c(0.25));
        assert_eq!(concurrence_of_matrix(&mixed).unwrap(), 0.0);
    }

    #[test]
    fn wootters_rejects_non_density() {
        let mut m = ComplexMatrix::identity(4).scale(c(0.25));
        m[(0, 1)] = c(0.5);
        assert!(matches!(
            concurrence_of_matrix(&m),
            Err(CavityError::InvalidDensity(_))
        ));
        let m = ComplexMatrix::identity(4);
        assert!(matches!(
            concurrence_of_matrix(&m),
            Err(CavityError::InvalidDensity(_))
        ));
        let m = ComplexMatrix::from_diag(&[c(1.5), c(-0.5), ZERO, ZERO]);
        assert!(matches!(
            concurrence_of_matrix(&m),
            Err(CavityError::InvalidDensity(_))
        ));
    }

    #[test]
    fn sweep_edge_cases() {
        let mut base = CavityParams::fig4(1);
        base.t2 = 0.0;
        let pts = fig4_sweep(&base, &[1]).unwrap();
        assert!(pts[0].concurrence < 1e-12);

        let product =
            CavityParams::swap_schedule(FIG4_G, FIG4_DELTA, PI / (2.0 * FIG4_G), 1, ONE, ZERO)
                .unwrap();
        for p in fig4_sweep(&product, &[1, 2, 5, 10]).unwrap() {
            assert_eq!(p.concurrence, 0.0);
        }
        assert!(fig4_sweep(&base, &[]).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(CavityParams::new(0.0, 1.0, 1.0, 1.0, 1, c(S), c(S)).is_err());
        assert!(CavityParams::new(1.0, 1.0, -1.0, 1.0, 1, c(S), c(S)).is_err());
        assert!(CavityParams::new(1.0, 1.0, 1.0, 1.0, 0, c(S), c(S)).is_err());
        assert!(CavityParams::new(1.0, 1.0, 1.0, 1.0, 1, c(0.5), c(0.5)).is_err());
    }
}
