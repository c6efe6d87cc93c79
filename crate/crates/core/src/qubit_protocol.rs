//! Three-qubit excitation freezing.
//!
//! Qubits `S_b` and `S_c` exchange a single excitation; the auxiliary qubit
//! `S_a` interrupts that exchange `N` times. With equal free energies the
//! dynamics stays in the one-excitation subspace `{|100⟩, |010⟩, |001⟩}`
//! (ordered `a, b, c`), where each step is the 3×3 product
//! `U_ab(φ)·U_bc(θ)` with `θ = G_bc·t_bc` and `φ = G_ab·t_ab`.
//!
//! Amplitudes here are in the physical basis. The rotated basis with the
//! `−i` on the middle ket lives in [`crate::so3`].

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::linalg::{ComplexMatrix, ComplexVector, C64, I, ONE, ZERO};

pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtocolError {
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("invalid protocol parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, ProtocolError>;

/// Amplitudes on `{|1_a 0_b 0_c⟩, |0_a 1_b 0_c⟩, |0_a 0_b 1_c⟩}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneExcitationState([C64; 3]);

impl OneExcitationState {
    /// Excitation parked in `S_c`: `|0_a 0_b 1_c⟩`.
    pub const EXCITED_C: Self = Self([ZERO, ZERO, ONE]);

    pub fn new(amplitudes: [C64; 3]) -> Result<Self> {
        let s = Self(amplitudes);
        let n = s.norm();
        if !n.is_finite() || (n - 1.0).abs() > NORM_TOL {
            return Err(ProtocolError::NotNormalized(n));
        }
        Ok(s)
    }

    pub(crate) fn from_amplitudes_unchecked(amplitudes: [C64; 3]) -> Self {
        Self(amplitudes)
    }

    pub fn amplitudes(&self) -> [C64; 3] {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    /// Applies a 3×3 operator.
    pub fn evolve_by(&self, u: &ComplexMatrix) -> Self {
        let v = u
            .apply(&ComplexVector::new(self.0.to_vec()))
            .expect("3x3 propagator");
        let e = v.entries();
        Self([e[0], e[1], e[2]])
    }

    /// Expected number of excitations in the three-qubit register; one for
    /// any normalized state of this subspace.
    pub fn excitation_number(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    pub n_steps: u64,
    /// `θ = G_bc·t_bc`, radians.
    pub theta: f64,
    /// `φ = G_ab·t_ab`, radians.
    pub phi: f64,
    pub g_bc: f64,
    pub g_ab: f64,
}

impl ProtocolParams {
    pub fn new(n_steps: u64, theta: f64, phi: f64) -> Result<Self> {
        Self::with_couplings(n_steps, theta, phi, 1.0, 1.0)
    }

    pub fn with_couplings(
        n_steps: u64,
        theta: f64,
        phi: f64,
        g_bc: f64,
        g_ab: f64,
    ) -> Result<Self> {
        if n_steps == 0 {
            return Err(ProtocolError::InvalidParameter(
                "n_steps must be at least 1".into(),
            ));
        }
        if !(theta.is_finite() && phi.is_finite()) {
            return Err(ProtocolError::InvalidParameter(
                "angles must be finite".into(),
            ));
        }
        for (name, g) in [("g_bc", g_bc), ("g_ab", g_ab)] {
            if !(g.is_finite() && g > 0.0) {
                return Err(ProtocolError::InvalidParameter(format!(
                    "{name} must be positive, got {g}"
                )));
            }
        }
        Ok(Self {
            n_steps,
            theta,
            phi,
            g_bc,
            g_ab,
        })
    }

    /// The freezing schedule: the bare `b–c` transfer time `π/2` split into
    /// `n` pieces, so `θ = π/(2n)`.
    pub fn freezing(n_steps: u64, phi: f64) -> Result<Self> {
        Self::new(n_steps, PI / (2.0 * n_steps.max(1) as f64), phi)
    }

    /// `t_bc = θ/G_bc`.
    pub fn bc_duration(&self) -> f64 {
        self.theta / self.g_bc
    }

    /// `t_ab = φ/G_ab`.
    pub fn ab_duration(&self) -> f64 {
        self.phi / self.g_ab
    }

    pub fn step_duration(&self) -> f64 {
        self.bc_duration() + self.ab_duration()
    }
}

/// `b–c` exchange propagator on the one-excitation subspace.
pub fn u_bc(theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    let (c, ms) = (C64::new(c, 0.0), -I * s);
    ComplexMatrix::from_rows(&[[ONE, ZERO, ZERO], [ZERO, c, ms], [ZERO, ms, c]])
        .expect("finite angle")
}

/// `a–b` exchange propagator on the one-excitation subspace.
pub fn u_ab(phi: f64) -> ComplexMatrix {
    let (s, c) = phi.sin_cos();
    let (c, ms) = (C64::new(c, 0.0), -I * s);
    ComplexMatrix::from_rows(&[[c, ms, ZERO], [ms, c, ZERO], [ZERO, ZERO, ONE]])
        .expect("finite angle")
}

/// `d/dθ U_bc(θ)`.
fn u_bc_derivative(theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    let (ms, mc) = (C64::new(-s, 0.0), -I * c);
    ComplexMatrix::from_rows(&[[ZERO, ZERO, ZERO], [ZERO, ms, mc], [ZERO, mc, ms]])
        .expect("finite angle")
}

/// `d/dφ U_ab(φ)`.
fn u_ab_derivative(phi: f64) -> ComplexMatrix {
    let (s, c) = phi.sin_cos();
    let (ms, mc) = (C64::new(-s, 0.0), -I * c);
    ComplexMatrix::from_rows(&[[ms, mc, ZERO], [mc, ms, ZERO], [ZERO, ZERO, ZERO]])
        .expect("finite angle")
}

/// One full step `U_ab(φ)·U_bc(θ)`.
pub fn step_propagator(theta: f64, phi: f64) -> ComplexMatrix {
    &u_ab(phi) * &u_bc(theta)
}

/// `(U_ab(φ)·U_bc(θ))ᴺ |ψ(0)⟩`, applied step by step.
pub fn evolve_n(params: &ProtocolParams, initial: &OneExcitationState) -> OneExcitationState {
    let step = step_propagator(params.theta, params.phi);
    (0..params.n_steps).fold(*initial, |psi, _| psi.evolve_by(&step))
}

/// `|⟨initial|final⟩|²`.
pub fn survival_probability(final_state: &OneExcitationState, initial: &OneExcitationState) -> f64 {
    initial.inner(final_state).norm_sqr()
}

/// Which quantum-Zeno baseline to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZenoMode {
    /// `cosᴺ(π/2N)`, the baseline the freezing curve is usually compared
    /// with; written to the `zeno_paper` CSV column.
    #[default]
    Single,
    /// `cos²ᴺ(π/2N)`, the textbook survival probability after `N`
    /// projective measurements.
    Squared,
}

/// Survival probability of an undisturbed `π/2` transfer interrupted by `n`
/// ideal measurements.
pub fn zeno_survival(n: u64, mode: ZenoMode) -> f64 {
    assert!(n >= 1, "zeno_survival needs n >= 1");
    let c = (PI / (2.0 * n as f64)).cos();
    let exponent = match mode {
        ZenoMode::Single => n as f64,
        ZenoMode::Squared => 2.0 * n as f64,
    };
    c.powf(exponent)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Segment {
    /// `S_b–S_c` exchange.
    Bc,
    /// `S_a–S_b` control interaction.
    Ab,
}

impl Segment {
    pub fn label(self) -> &'static str {
        match self {
            Segment::Bc => "bc",
            Segment::Ab => "ab",
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub p001: f64,
    pub dp001_dt: f64,
    pub segment: Segment,
    /// 1-based step index.
    pub step: u64,
}

/// Piecewise evolution over the schedule: each step is a `bc` segment of
/// length `t_bc` followed by an `ab` segment of length `t_ab`.
#[derive(Debug, Clone)]
pub struct Schedule {
    params: ProtocolParams,
    initial: OneExcitationState,
    /// State at the start of each step, `N + 1` entries.
    step_starts: Vec<OneExcitationState>,
}

impl Schedule {
    pub fn new(params: &ProtocolParams, initial: &OneExcitationState) -> Result<Self> {
        if params.theta < 0.0 || params.phi < 0.0 {
            return Err(ProtocolError::InvalidParameter(
                "time-resolved schedules need non-negative angles".into(),
            ));
        }
        let step = step_propagator(params.theta, params.phi);
        let mut step_starts = Vec::with_capacity(params.n_steps as usize + 1);
        let mut psi = *initial;
        step_starts.push(psi);
        for _ in 0..params.n_steps {
            psi = psi.evolve_by(&step);
            step_starts.push(psi);
        }
        Ok(Self {
            params: *params,
            initial: *initial,
            step_starts,
        })
    }

    pub fn total_duration(&self) -> f64 {
        self.params.n_steps as f64 * self.params.step_duration()
    }

    /// `(P, dP/dt)` at offset `tau` into a given segment of a given step
    /// (1-based).
    pub fn evaluate(&self, step: u64, segment: Segment, tau: f64) -> (f64, f64) {
        let start = &self.step_starts[(step - 1) as usize];
        let (seg_start, u, du, g) = match segment {
            Segment::Bc => {
                let x = self.params.g_bc * tau;
                (*start, u_bc(x), u_bc_derivative(x), self.params.g_bc)
            }
            Segment::Ab => {
                let mid = start.evolve_by(&u_bc(self.params.theta));
                let x = self.params.g_ab * tau;
                (mid, u_ab(x), u_ab_derivative(x), self.params.g_ab)
            }
        };
        let amp = self.initial.inner(&seg_start.evolve_by(&u));
        let damp = self.initial.inner(&seg_start.evolve_by(&du)) * g;
        (amp.norm_sqr(), 2.0 * (amp.conj() * damp).re)
    }

    /// Locates absolute time `t` in the schedule. Times on a segment
    /// boundary belong to the later segment; `t` past the end clamps to
    /// the final `ab` segment.
    pub fn locate(&self, t: f64) -> (u64, Segment, f64) {
        let (t_bc, t_ab) = (self.params.bc_duration(), self.params.ab_duration());
        let step_len = t_bc + t_ab;
        let n = self.params.n_steps;
        let mut step = if step_len > 0.0 {
            ((t / step_len).floor().max(0.0) as u64).min(n - 1) + 1
        } else {
            1
        };
        let mut local = t - (step - 1) as f64 * step_len;
        if local >= step_len && step < n {
            step += 1;
            local -= step_len;
        }
        if local < t_bc {
            (step, Segment::Bc, local.max(0.0))
        } else {
            (step, Segment::Ab, (local - t_bc).min(t_ab))
        }
    }

    /// `(P, dP/dt)` at absolute time `t`.
    pub fn sample_at(&self, t: f64) -> (f64, f64) {
        let (step, segment, tau) = self.locate(t);
        self.evaluate(step, segment, tau)
    }

    /// Uniform samples: `samples_per_segment` points per segment, both
    /// segment endpoints included.
    pub fn sample(&self, samples_per_segment: usize) -> Vec<TrajectoryPoint> {
        let (t_bc, t_ab) = (self.params.bc_duration(), self.params.ab_duration());
        let step_len = t_bc + t_ab;
        let mut out = Vec::with_capacity(2 * samples_per_segment * self.params.n_steps as usize);
        for step in 1..=self.params.n_steps {
            let step_t0 = (step - 1) as f64 * step_len;
            for (segment, seg_t0, len) in [(Segment::Bc, 0.0, t_bc), (Segment::Ab, t_bc, t_ab)] {
                for j in 0..samples_per_segment {
                    let tau = len * j as f64 / (samples_per_segment - 1) as f64;
                    let (p001, dp001_dt) = self.evaluate(step, segment, tau);
                    out.push(TrajectoryPoint {
                        t: step_t0 + seg_t0 + tau,
                        p001,
                        dp001_dt,
                        segment,
                        step,
                    });
                }
            }
        }
        out
    }
}

/// Time-resolved survival probability and transition rate over the whole
/// schedule.
pub fn trajectory(
    params: &ProtocolParams,
    initial: &OneExcitationState,
    samples_per_segment: usize,
) -> Result<Vec<TrajectoryPoint>> {
    if samples_per_segment < 2 {
        return Err(ProtocolError::InvalidParameter(
            "samples_per_segment must be at least 2".into(),
        ));
    }
    Ok(Schedule::new(params, initial)?.sample(samples_per_segment))
}
