//! Brute-force reference for the cavity model.
//!
//! Works in the full 16-dimensional space of atom `A`, mode `M₁`, mode `M₂`
//! and atom `B` (each truncated to two levels, tensor order `A⊗M₁⊗M₂⊗B`),
//! builds the two stage Hamiltonians from ladder operators, exponentiates
//! them numerically and traces out `A` and `M₂`. Nothing here uses the
//! closed-form stage matrices of [`crate::cavity_control`].
//!
//! Frame: everything rotates at `ω₁` times the total excitation number,
//! which commutes with both Hamiltonians.

use crate::cavity_control::{CavityParams, TwoQubitDensity};
use crate::linalg::{
    expm_series, kron_all, partial_trace, ComplexMatrix, ComplexVector, LinalgError, C64, I, ONE,
    ZERO,
};

pub const FULL_DIM: usize = 16;
const DIMS: [usize; 4] = [2, 2, 2, 2];
const SLOT_A: usize = 0;
const SLOT_M1: usize = 1;
const SLOT_M2: usize = 2;
const SLOT_B: usize = 3;

/// Raising operator on a two-level factor (`σ⁺` for atoms, truncated `a†`
/// for modes).
fn raise() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[ZERO, ZERO], [ONE, ZERO]]).unwrap()
}

fn lower() -> ComplexMatrix {
    raise().adjoint()
}

fn number() -> ComplexMatrix {
    ComplexMatrix::from_diag(&[ZERO, ONE])
}

/// `op` acting on factor `slot`, identity elsewhere.
fn on(slot: usize, op: &ComplexMatrix) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let factors: Vec<&ComplexMatrix> = (0..4).map(|k| if k == slot { op } else { &id }).collect();
    kron_all(factors)
}

fn basis_index(a: usize, m1: usize, m2: usize, b: usize) -> usize {
    8 * a + 4 * m1 + 2 * m2 + b
}

/// `−δ a₂†a₂ + g(σ_a⁺a₁ + σ_a⁻a₁†)`.
pub fn full_stage1_hamiltonian(g: f64, delta: f64) -> ComplexMatrix {
    let jc = &(&on(SLOT_A, &raise()) * &on(SLOT_M1, &lower()))
        + &(&on(SLOT_A, &lower()) * &on(SLOT_M1, &raise()));
    &on(SLOT_M2, &number()).scale(C64::new(-delta, 0.0)) + &jc.scale(C64::new(g, 0.0))
}

/// `−δ(a₂†a₂ + σ_a⁺σ_a⁻) + g(iσ_a⁺a₂ − iσ_a⁻a₂†)`.
pub fn full_stage2_hamiltonian(g: f64, delta: f64) -> ComplexMatrix {
    let detuned = &on(SLOT_M2, &number()) + &on(SLOT_A, &number());
    let jc = &(&on(SLOT_A, &raise()) * &on(SLOT_M2, &lower())).scale(I)
        - &(&on(SLOT_A, &lower()) * &on(SLOT_M2, &raise())).scale(I);
    &detuned.scale(C64::new(-delta, 0.0)) + &jc.scale(C64::new(g, 0.0))
}

/// `α|g,1,0,g⟩ + β|g,0,0,e⟩`.
pub fn full_initial_state(alpha: C64, beta: C64) -> ComplexVector {
    let mut v = vec![ZERO; FULL_DIM];
    v[basis_index(0, 1, 0, 0)] = alpha;
    v[basis_index(0, 0, 0, 1)] = beta;
    ComplexVector::new(v)
}

/// Final full-space state after `N` numerically exponentiated steps.
pub fn full_evolve(params: &CavityParams) -> Result<ComplexVector, LinalgError> {
    let u1 = expm_series(&full_stage1_hamiltonian(params.g, params.delta).scale(-I * params.t1))?;
    let u2 = expm_series(&full_stage2_hamiltonian(params.g, params.delta).scale(-I * params.t2))?;
    let step = u2.matmul(&u1)?.pow(params.n_steps)?;
    step.apply(&full_initial_state(params.alpha, params.beta))
}

/// `ρ_{M₁B}` by explicit partial trace over `A` and `M₂`.
pub fn full_reduced_density(psi: &ComplexVector) -> Result<ComplexMatrix, LinalgError> {
    let rho = ComplexMatrix::outer(psi, psi);
    partial_trace(&rho, &DIMS, &[SLOT_M1, SLOT_B])
}

/// Concurrence from the spectrum of `ρ^{1/2}ρ̃ρ^{1/2}`, which is Hermitian
/// and shares its eigenvalues with `ρρ̃`. Square roots of near-zero
/// eigenvalues amplify rounding, so expect ~1e-8 agreement for
/// rank-deficient states.
pub fn concurrence_via_fidelity_form(rho: &ComplexMatrix) -> Result<f64, LinalgError> {
    use crate::linalg::{eig_hermitian, kron, pauli_y};
    let eig = eig_hermitian(rho)?;
    let mut sqrt_rho = ComplexMatrix::zeros(4, 4);
    for k in 0..4 {
        let v = eig.vector(k);
        let w = eig.values[k].max(0.0).sqrt();
        sqrt_rho = &sqrt_rho + &ComplexMatrix::outer(&v, &v).scale(C64::new(w, 0.0));
    }
    let yy = kron(&pauli_y(), &pauli_y());
    let rho_tilde = &(&yy * &rho.conj()) * &yy;
    let m = &(&sqrt_rho * &rho_tilde) * &sqrt_rho;
    let mut lam: Vec<f64> = eig_hermitian(&m)?
        .values
        .iter()
        .map(|&x| x.max(0.0).sqrt())
        .collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

/// Reduced `M₁–B` density of the brute-force evolution, validated.
pub fn full_reduced_state(params: &CavityParams) -> Result<TwoQubitDensity, String> {
    let psi = full_evolve(params).map_err(|e| e.to_string())?;
    let rho = full_reduced_density(&psi).map_err(|e| e.to_string())?;
    TwoQubitDensity::new(rho).map_err(|e| e.to_string())
}
