//! Real three-dimensional picture of the three-qubit protocol.
//!
//! With the middle basis ket carrying a `−i` factor, the interaction step
//! `U_ab(φ)·U_bc(θ)` acts on real amplitude vectors as the rotation
//! `R₃(φ)·R₁(−θ)`. That composite is a single rotation about an axis `n̂` by
//! an angle `ϑ`, so `N` steps collapse to one rotation by `N·ϑ` evaluated
//! with the Rodrigues expansion
//!
//! ```text
//! exp(ϑ n̂·J) = 1 + (1 − cos ϑ)(n̂·J)² + sin ϑ (n̂·J)
//! ```
//!
//! The axis and angle come in closed form from `(θ, φ)`; near the zeros of
//! the closed-form denominator they are read back from the product matrix
//! instead.

use std::f64::consts::PI;
use std::ops::{Index, Mul, Sub};

use thiserror::Error;

use crate::linalg::{ComplexMatrix, C64, I};
use crate::qubit_protocol::OneExcitationState;

/// Closed-form denominator below which axis and angle are taken from the
/// product matrix.
pub const AXIS_DENOMINATOR_FLOOR: f64 = 1e-8;

/// Largest imaginary part tolerated by [`extract`] in the rotated basis.
pub const REALNESS_TOL: f64 = 1e-10;

const UNIT_TOL: f64 = 1e-10;

/// `‖R − I‖_max` at or below which the composite rotation is the identity.
const IDENTITY_TOL: f64 = 4.0 * f64::EPSILON;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum So3Error {
    #[error("composite rotation R3({phi})R1(-{theta}) is the identity; its axis is undefined")]
    DegenerateRotation { theta: f64, phi: f64 },
    #[error("control angle phi = {0} is a multiple of 2*pi; the auxiliary rotation is trivial")]
    TrivialControl(f64),
    #[error("vector is not a unit vector (norm {0})")]
    NotUnit(f64),
    #[error("non-finite value: {0}")]
    NonFinite(&'static str),
    #[error("state is not real-representable in the rotated basis (imaginary part {0:e})")]
    NotRealRepresentable(f64),
}

pub type Result<T> = std::result::Result<T, So3Error>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealVec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl RealVec3 {
    pub const E1: Self = Self::new(1.0, 0.0, 0.0);
    pub const E2: Self = Self::new(0.0, 1.0, 0.0);
    pub const E3: Self = Self::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.x * k, self.y * k, self.z * k)
    }

    pub fn normalized(self) -> Self {
        self.scale(1.0 / self.norm())
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        let d = self - other;
        d.x.abs().max(d.y.abs()).max(d.z.abs())
    }

    fn require_unit(self) -> Result<Self> {
        if !(self.x.is_finite() && self.y.is_finite() && self.z.is_finite()) {
            return Err(So3Error::NonFinite("vector component"));
        }
        let n = self.norm();
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(So3Error::NotUnit(n));
        }
        Ok(self)
    }
}

impl From<[f64; 3]> for RealVec3 {
    fn from([x, y, z]: [f64; 3]) -> Self {
        Self::new(x, y, z)
    }
}

impl Sub for RealVec3 {
    type Output = Self;

    fn sub(self, other: Self) -> Self {
        Self::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }
}

/// A proper rotation of real 3-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix3(pub [[f64; 3]; 3]);

impl RotationMatrix3 {
    pub const IDENTITY: Self = Self([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        let mut t = [[0.0; 3]; 3];
        for (i, row) in t.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = m[j][i];
            }
        }
        Self(t)
    }

    pub fn apply(&self, v: RealVec3) -> RealVec3 {
        let m = &self.0;
        let a = v.to_array();
        let row = |i: usize| m[i][0] * a[0] + m[i][1] * a[1] + m[i][2] * a[2];
        RealVec3::new(row(0), row(1), row(2))
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                d = d.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        d
    }

    /// `‖RᵀR − I‖_max`.
    pub fn orthogonality_defect(&self) -> f64 {
        (self.transpose() * *self).max_abs_diff(&Self::IDENTITY)
    }

    /// `k`-fold product by direct repeated multiplication.
    pub fn direct_power(&self, k: u64) -> Self {
        (0..k).fold(Self::IDENTITY, |acc, _| *self * acc)
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        let rows: Vec<[C64; 3]> = self.0.iter().map(|r| r.map(|x| C64::new(x, 0.0))).collect();
        ComplexMatrix::from_rows(&rows).expect("finite 3x3 entries")
    }
}

impl Index<(usize, usize)> for RotationMatrix3 {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl Mul for RotationMatrix3 {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..3).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        Self(out)
    }
}

/// Rotation axis (unit) and angle in `(−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisAngle {
    pub axis: RealVec3,
    pub angle: f64,
}

impl AxisAngle {
    /// Normalizes the axis and wraps the angle into `(−π, π]`.
    pub fn new(axis: RealVec3, angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(So3Error::NonFinite("rotation angle"));
        }
        let n = axis.norm();
        if !n.is_finite() || n == 0.0 {
            return Err(So3Error::NotUnit(n));
        }
        Ok(Self {
            axis: axis.scale(1.0 / n),
            angle: wrap_angle(angle),
        })
    }
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_angle(angle: f64) -> f64 {
    let mut a = angle.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// Rotation about `ê₁`.
pub fn r1(angle: f64) -> RotationMatrix3 {
    let (s, c) = angle.sin_cos();
    RotationMatrix3([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
}

/// Rotation about `ê₃`.
pub fn r3(angle: f64) -> RotationMatrix3 {
    let (s, c) = angle.sin_cos();
    RotationMatrix3([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
}

/// Generators `(J₁, J₂, J₃)` of rotations about the x, y and z axes.
pub fn generators() -> [[[f64; 3]; 3]; 3] {
    [
        [[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]],
        [[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]],
        [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
    ]
}

/// `n̂·J`, the antisymmetric generator for rotations about `n`.
pub fn axis_generator(n: RealVec3) -> [[f64; 3]; 3] {
    let RealVec3 { x: a, y: b, z: c } = n;
    [[0.0, -c, b], [c, 0.0, -a], [-b, a, 0.0]]
}

/// One protocol step as a rotation: `R₃(φ)·R₁(−θ)`.
pub fn step_rotation(theta: f64, phi: f64) -> RotationMatrix3 {
    r3(phi) * r1(-theta)
}

fn closed_form_denominator(theta: f64, phi: f64) -> f64 {
    let (sp, st) = ((phi / 2.0).sin(), (theta / 2.0).sin());
    let radicand = sp * sp + st * st - st * st * sp * sp;
    4.0 * (phi / 2.0).cos() * (theta / 2.0).cos() * radicand.sqrt()
}

/// Axis and angle of the composite rotation `R₃(φ)·R₁(−θ)`.
///
/// Uses the closed-form trigonometric expressions for `sin ϑ`, `cos ϑ` and
/// the axis components; when their common denominator falls below
/// [`AXIS_DENOMINATOR_FLOOR`] the decomposition is read off the product
/// matrix instead. Fails only when the composite is the identity.
pub fn axis_angle_of(theta: f64, phi: f64) -> Result<AxisAngle> {
    if !(theta.is_finite() && phi.is_finite()) {
        return Err(So3Error::NonFinite("protocol angle"));
    }
    let product = step_rotation(theta, phi);
    if product.max_abs_diff(&RotationMatrix3::IDENTITY) <= IDENTITY_TOL {
        return Err(So3Error::DegenerateRotation { theta, phi });
    }

    let denom = closed_form_denominator(theta, phi);
    if denom.abs() < AXIS_DENOMINATOR_FLOOR {
        return Ok(axis_angle_from_matrix(&product));
    }

    let sin_rot = denom / 2.0;
    let cos_rot = (phi.cos() + theta.cos() + phi.cos() * theta.cos() - 1.0) / 2.0;
    // 1 + cos x written as 2cos²(x/2) to keep precision near x = π.
    let one_plus_cos_phi = 2.0 * (phi / 2.0).cos().powi(2);
    let one_plus_cos_theta = 2.0 * (theta / 2.0).cos().powi(2);
    let a = -theta.sin() * one_plus_cos_phi / denom;
    let b = -phi.sin() * theta.sin() / denom;
    let c = phi.sin() * one_plus_cos_theta / denom;
    let axis = RealVec3::new(a, b, c);
    Ok(AxisAngle {
        // a² + b² + c² = 1 analytically; renormalize away the last ulp.
        axis: axis.normalized(),
        angle: sin_rot.atan2(cos_rot),
    })
}

/// Raw closed-form quantities `(sin ϑ, cos ϑ, a, b, c)` without any fallback.
///
/// Exposed so the trigonometric identities can be checked directly.
pub fn closed_form_components(theta: f64, phi: f64) -> (f64, f64, f64, f64, f64) {
    let denom = closed_form_denominator(theta, phi);
    let sin_rot = denom / 2.0;
    let cos_rot = (phi.cos() + theta.cos() + phi.cos() * theta.cos() - 1.0) / 2.0;
    let a = -theta.sin() * (phi.cos() + 1.0) / denom;
    let b = -phi.sin() * theta.sin() / denom;
    let c = phi.sin() * (theta.cos() + 1.0) / denom;
    (sin_rot, cos_rot, a, b, c)
}

/// Axis-angle of an arbitrary non-identity rotation matrix.
///
/// The angle comes from the trace and the antisymmetric part. For angles
/// past π/2 the axis is taken from the symmetric part, which stays well
/// conditioned as the angle approaches π; its sign follows the
/// antisymmetric part (or `c ≥ 0` exactly at π).
pub fn axis_angle_from_matrix(r: &RotationMatrix3) -> AxisAngle {
    let m = &r.0;
    let v = RealVec3::new(m[2][1] - m[1][2], m[0][2] - m[2][0], m[1][0] - m[0][1]).scale(0.5);
    let sin_rot = v.norm();
    let cos_rot = ((r.trace() - 1.0) / 2.0).clamp(-1.0, 1.0);
    let angle = sin_rot.atan2(cos_rot);

    let axis = if cos_rot >= 0.0 {
        v.scale(1.0 / sin_rot)
    } else {
        // (R + Rᵀ)/2 − cos ϑ·I = (1 − cos ϑ) n nᵀ
        let k = 1.0 - cos_rot;
        let sym = |i: usize, j: usize| {
            let base = (m[i][j] + m[j][i]) / 2.0;
            (if i == j { base - cos_rot } else { base }) / k
        };
        let pivot = (0..3)
            .max_by(|&i, &j| sym(i, i).total_cmp(&sym(j, j)))
            .unwrap();
        let col = RealVec3::new(sym(0, pivot), sym(1, pivot), sym(2, pivot)).normalized();
        let reference = v.dot(col);
        let flip = if reference != 0.0 {
            reference < 0.0
        } else {
            col.z < 0.0 || (col.z == 0.0 && (col.y < 0.0 || (col.y == 0.0 && col.x < 0.0)))
        };
        if flip {
            col.scale(-1.0)
        } else {
            col
        }
    };
    AxisAngle { axis, angle }
}

/// Rodrigues expansion `1 + (1 − cos ϑ)(n̂·J)² + sin ϑ (n̂·J)`, written out
/// entrywise.
pub fn rodrigues(aa: &AxisAngle) -> RotationMatrix3 {
    let RealVec3 { x: a, y: b, z: c } = aa.axis;
    let (s, co) = aa.angle.sin_cos();
    let v = 1.0 - co;
    RotationMatrix3([
        [
            (1.0 - a * a) * co + a * a,
            a * b * v - c * s,
            a * c * v + b * s,
        ],
        [
            a * b * v + c * s,
            (1.0 - b * b) * co + b * b,
            b * c * v - a * s,
        ],
        [
            a * c * v - b * s,
            b * c * v + a * s,
            (1.0 - c * c) * co + c * c,
        ],
    ])
}

/// `[R₃(φ)·R₁(−θ)]ⁿ`, evaluated as a single rotation by `n·ϑ`.
pub fn rotation_power(theta: f64, phi: f64, n: u64) -> Result<RotationMatrix3> {
    let aa = axis_angle_of(theta, phi)?;
    Ok(rodrigues(&AxisAngle {
        axis: aa.axis,
        angle: n as f64 * aa.angle,
    }))
}

/// Freezing-schedule step angle `θ = π/(2N)`.
pub fn freezing_theta(n: u64) -> f64 {
    PI / (2.0 * n as f64)
}

fn require_control(phi: f64) -> Result<()> {
    if !phi.is_finite() {
        return Err(So3Error::NonFinite("control angle"));
    }
    let wrapped = wrap_angle(phi);
    if wrapped.abs() < 1e-12 {
        return Err(So3Error::TrivialControl(phi));
    }
    Ok(())
}

/// State vector after `n` steps of the freezing schedule `θ = π/(2n)`.
///
/// For `initial = ê₃` this is the third column of the Rodrigues matrix at
/// angle `n·ϑ`. A control angle that is a multiple of 2π is rejected.
pub fn closed_form_rn(phi: f64, n: u64, initial: RealVec3) -> Result<RealVec3> {
    require_control(phi)?;
    let initial = initial.require_unit()?;
    Ok(rotation_power(freezing_theta(n), phi, n)?.apply(initial))
}

/// Points of a unit-sphere trajectory and the axis of the step rotation.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereTrajectory {
    pub points: Vec<RealVec3>,
    pub axis: RealVec3,
    pub step_angle: f64,
}

/// Terminal points `[R₃(φ)R₁(−π/2n)]ᵏ·initial` for `k = 0..=n`.
pub fn sphere_trajectory(phi: f64, n: u64, initial: RealVec3) -> Result<SphereTrajectory> {
    require_control(phi)?;
    let initial = initial.require_unit()?;
    let aa = axis_angle_of(freezing_theta(n), phi)?;
    let points = (0..=n)
        .map(|k| {
            rodrigues(&AxisAngle {
                axis: aa.axis,
                angle: k as f64 * aa.angle,
            })
            .apply(initial)
        })
        .collect();
    Ok(SphereTrajectory {
        points,
        axis: aa.axis,
        step_angle: aa.angle,
    })
}

/// Real vector to physical amplitudes on `{|100⟩, |010⟩, |001⟩}`; the middle
/// component picks up the `−i` of the rotated basis.
pub fn embed(state: RealVec3) -> Result<OneExcitationState> {
    let state = state.require_unit()?;
    Ok(OneExcitationState::from_amplitudes_unchecked([
        C64::new(state.x, 0.0),
        -I * state.y,
        C64::new(state.z, 0.0),
    ]))
}

/// Inverse of [`embed`]; fails if the rotated-basis amplitudes are not real.
pub fn extract(state: &OneExcitationState) -> Result<RealVec3> {
    let [p1, p2, p3] = state.amplitudes();
    let rotated = [p1, I * p2, p3];
    let worst = rotated.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if worst > REALNESS_TOL {
        return Err(So3Error::NotRealRepresentable(worst));
    }
    Ok(RealVec3::new(rotated[0].re, rotated[1].re, rotated[2].re))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::expm_series;
    use crate::qubit_protocol::{u_ab, u_bc};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_unit(rng: &mut StdRng) -> RealVec3 {
        loop {
            let v = RealVec3::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            let n = v.norm();
            if n > 0.1 && n <= 1.0 {
                return v.scale(1.0 / n);
            }
        }
    }

    fn mat_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
        (RotationMatrix3(*a) * RotationMatrix3(*b)).0
    }

    #[test]
    fn elementary_rotations() {
        assert_eq!(r1(0.0), RotationMatrix3::IDENTITY);
        assert!(r1(-PI / 2.0).apply(RealVec3::E3).max_abs_diff(RealVec3::E2) < 1e-16);
        assert!(
            r3(PI / 2.0)
                .apply(RealVec3::E2)
                .max_abs_diff(RealVec3::new(-1.0, 0.0, 0.0))
                < 1e-16
        );
    }

    #[test]
    fn generator_structure() {
        let [j1, j2, j3] = generators();
        assert_eq!(j3[1][0], 1.0);
        assert_eq!(j3[0][1], -1.0);
        assert!(j3[2].iter().all(|&x| x == 0.0));
        assert!((0..3).all(|i| j3[i][2] == 0.0));
        for j in [j1, j2, j3] {
            for (r, row) in j.iter().enumerate() {
                for (c, &x) in row.iter().enumerate() {
                    assert_eq!(x, -j[c][r]);
                }
            }
        }
        let comm = |a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]| {
            let (ab, ba) = (mat_mul(a, b), mat_mul(b, a));
            let mut out = [[0.0; 3]; 3];
            for r in 0..3 {
                for c in 0..3 {
                    out[r][c] = ab[r][c] - ba[r][c];
                }
            }
            out
        };
        assert_eq!(comm(&j1, &j2), j3);
        assert_eq!(comm(&j2, &j3), j1);
        assert_eq!(comm(&j3, &j1), j2);
    }

    #[test]
    fn axis_angle_at_quarter_turns() {
        let aa = axis_angle_of(PI / 2.0, PI / 2.0).unwrap();
        assert!((aa.angle - 2.0 * PI / 3.0).abs() < 1e-12);
        let expected = RealVec3::new(-1.0, -1.0, 1.0).normalized();
        assert!(aa.axis.max_abs_diff(expected) < 1e-12);
    }

    #[test]
    fn axis_angle_of_pure_z_rotation() {
        for x in [0.1, 0.9, 2.0, 3.0] {
            let aa = axis_angle_of(0.0, x).unwrap();
            assert!((aa.angle - x).abs() < 1e-14);
            assert!(aa.axis.max_abs_diff(RealVec3::E3) < 1e-14);
        }
    }

    #[test]
    fn axis_tends_to_z_as_theta_vanishes() {
        let phi = PI / 10.0;
        let mut last = 0.0;
        for theta in [1e-1, 1e-2, 1e-3, 1e-4, 1e-6] {
            let c = axis_angle_of(theta, phi).unwrap().axis.z;
            assert!(c > last);
            last = c;
        }
        assert!(1.0 - last < 1e-10);
    }

    #[test]
    fn identity_is_degenerate() {
        assert!(matches!(
            axis_angle_of(0.0, 0.0),
            Err(So3Error::DegenerateRotation { .. })
        ));
        assert!(matches!(
            axis_angle_of(2.0 * PI, 0.0),
            Err(So3Error::DegenerateRotation { .. })
        ));
    }

    #[test]
    fn reconstruction_across_regimes() {
        // Includes the matrix-fallback zones: tiny angles and ϑ ≈ π.
        let cases = [
            (0.3, 0.4),
            (1e-9, 2e-9),
            (0.0, 1e-10),
            (1e-10, 0.0),
            (PI, PI),
            (PI, 0.7),
            (0.7, PI),
            (PI - 1e-9, PI - 1e-9),
            (2.5, -1.0),
            (-0.4, 5.0),
            (7.0, 11.0),
        ];
        for (theta, phi) in cases {
            let aa = axis_angle_of(theta, phi).unwrap();
            let diff = rodrigues(&aa).max_abs_diff(&step_rotation(theta, phi));
            assert!(diff < 1e-12, "theta={theta} phi={phi}: {diff:e}");
            assert!((aa.axis.norm() - 1.0).abs() < 1e-12);
            assert!(aa.angle > -PI && aa.angle <= PI);
        }
    }

    #[test]
    fn closed_form_identities_hold() {
        let mut rng = StdRng::seed_from_u64(21);
        for _ in 0..1000 {
            let theta = rng.random_range(0.01..PI - 0.01);
            let phi = rng.random_range(0.01..PI - 0.01);
            let (s, c, a, b, cc) = closed_form_components(theta, phi);
            assert!((s * s + c * c - 1.0).abs() < 1e-12);
            assert!((a * a + b * b + cc * cc - 1.0).abs() < 1e-12);
            assert!(s >= 0.0);
        }
    }

    #[test]
    fn rodrigues_special_cases() {
        let zero = AxisAngle::new(RealVec3::new(0.3, -0.2, 0.9), 0.0).unwrap();
        assert!(rodrigues(&zero).max_abs_diff(&RotationMatrix3::IDENTITY) < 1e-16);
        for phi in [0.2, 1.0, -2.5] {
            let aa = AxisAngle::new(RealVec3::E3, phi).unwrap();
            assert_eq!(rodrigues(&aa), r3(phi));
        }
    }

    #[test]
    fn rodrigues_matches_series_exponential() {
        let mut rng = StdRng::seed_from_u64(22);
        let gens = generators();
        for _ in 0..200 {
            let n = random_unit(&mut rng);
            let angle = rng.random_range(-PI..PI);
            let mut gen = [[0.0; 3]; 3];
            for (k, comp) in n.to_array().iter().enumerate() {
                for r in 0..3 {
                    for c in 0..3 {
                        gen[r][c] += angle * comp * gens[k][r][c];
                    }
                }
            }
            let series = expm_series(&RotationMatrix3(gen).to_complex()).unwrap();
            let closed = rodrigues(&AxisAngle::new(n, angle).unwrap()).to_complex();
            assert!(series.max_abs_diff(&closed) < 1e-11);
        }
    }

    #[test]
    fn power_base_cases() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..50 {
            let theta = rng.random_range(0.0..PI);
            let phi = rng.random_range(0.0..PI);
            let step = step_rotation(theta, phi);
            assert!(rotation_power(theta, phi, 1).unwrap().max_abs_diff(&step) < 1e-12);
            assert!(
                rotation_power(theta, phi, 2)
                    .unwrap()
                    .max_abs_diff(&(step * step))
                    < 1e-12
            );
        }
        let third = rotation_power(PI / 2.0, PI / 2.0, 3).unwrap();
        assert!(third.max_abs_diff(&RotationMatrix3::IDENTITY) < 1e-14);
    }

    #[test]
    fn generator_power_law() {
        let mut rng = StdRng::seed_from_u64(24);
        for _ in 0..100 {
            let n = random_unit(&mut rng);
            let angle = rng.random_range(-2.0..2.0);
            let g = RotationMatrix3(axis_generator(n));
            let scaled = RotationMatrix3(axis_generator(n.scale(angle)));
            let g2 = g * g;
            for k in 1..=3i32 {
                let power = scaled.direct_power(2 * k as u64);
                let factor = angle.powi(2 * k) * if k % 2 == 1 { 1.0 } else { -1.0 };
                let mut expected = g2;
                for row in expected.0.iter_mut() {
                    for x in row.iter_mut() {
                        *x *= factor;
                    }
                }
                assert!(power.max_abs_diff(&expected) < 1e-12);
                let odd = scaled.direct_power(2 * k as u64 + 1);
                let factor = angle.powi(2 * k) * if k % 2 == 0 { 1.0 } else { -1.0 };
                let mut expected = scaled;
                for row in expected.0.iter_mut() {
                    for x in row.iter_mut() {
                        *x *= factor;
                    }
                }
                assert!(odd.max_abs_diff(&expected) < 1e-12);
            }
            // (n̂·J)² = n nᵀ − I
            let nn = n.to_array();
            for r in 0..3 {
                for c in 0..3 {
                    let expected = nn[r] * nn[c] - if r == c { 1.0 } else { 0.0 };
                    assert!((g2.0[r][c] - expected).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn closed_form_rn_values() {
        let r = closed_form_rn(PI / 2.0, 1, RealVec3::E3).unwrap();
        assert!(r.max_abs_diff(RealVec3::new(-1.0, 0.0, 0.0)) < 1e-15);

        let frozen = closed_form_rn(PI / 10.0, 1000, RealVec3::E3).unwrap();
        assert!(frozen.z >= 0.999);

        let aa = axis_angle_of(freezing_theta(7), 0.9).unwrap();
        let RealVec3 { x: a, y: b, z: c } = aa.axis;
        let (s, co) = (7.0 * aa.angle).sin_cos();
        let expected = RealVec3::new(
            a * c * (1.0 - co) + b * s,
            b * c * (1.0 - co) - a * s,
            (1.0 - c * c) * co + c * c,
        );
        let r = closed_form_rn(0.9, 7, RealVec3::E3).unwrap();
        assert!(r.max_abs_diff(expected) < 1e-15);
    }

    #[test]
    fn closed_form_rn_full_revolution_returns_initial() {
        // θ = φ = π/2 at N = 1 is not a full turn, but N = 3 with the same
        // step is; drive it through rotation_power instead of the schedule.
        let v = RealVec3::new(0.6, 0.0, 0.8);
        let back = rotation_power(PI / 2.0, PI / 2.0, 3).unwrap().apply(v);
        assert!(back.max_abs_diff(v) < 1e-14);
    }

    #[test]
    fn closed_form_rn_rejects_trivial_control() {
        for phi in [0.0, 2.0 * PI, -4.0 * PI] {
            assert!(matches!(
                closed_form_rn(phi, 5, RealVec3::E3),
                Err(So3Error::TrivialControl(_))
            ));
        }
        assert!(matches!(
            closed_form_rn(0.3, 5, RealVec3::new(1.0, 1.0, 0.0)),
            Err(So3Error::NotUnit(_))
        ));
    }

    #[test]
    fn sphere_trajectory_orderings() {
        let t = sphere_trajectory(PI / 16.0, 10, RealVec3::E3).unwrap();
        assert_eq!(t.points.len(), 11);
        assert!(t.points.iter().all(|p| (p.norm() - 1.0).abs() < 1e-12));
        assert!((t.axis.norm() - 1.0).abs() < 1e-12);

        let dist = |n: u64| {
            let t = sphere_trajectory(PI / 16.0, n, RealVec3::E3).unwrap();
            (*t.points.last().unwrap() - RealVec3::E3).norm()
        };
        assert!(dist(10) > dist(20) && dist(20) > dist(40));

        let axis_z = |phi: f64| sphere_trajectory(phi, 20, RealVec3::E3).unwrap().axis.z;
        assert!(axis_z(PI / 32.0) < axis_z(PI / 16.0) && axis_z(PI / 16.0) < axis_z(PI / 8.0));
    }

    #[test]
    fn sphere_points_match_direct_products() {
        let t = sphere_trajectory(0.4, 12, RealVec3::E3).unwrap();
        let step = step_rotation(freezing_theta(12), 0.4);
        let mut p = RealVec3::E3;
        for point in &t.points {
            assert!(point.max_abs_diff(p) < 1e-13);
            p = step.apply(p);
        }
    }

    #[test]
    fn embedding_basis_and_round_trip() {
        let e3 = embed(RealVec3::E3).unwrap();
        assert_eq!(
            e3.amplitudes(),
            [C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
        );
        let e2 = embed(RealVec3::E2).unwrap();
        assert_eq!(e2.amplitudes()[1], C64::new(0.0, -1.0));

        let mut rng = StdRng::seed_from_u64(25);
        for _ in 0..100 {
            let v = random_unit(&mut rng);
            let back = extract(&embed(v).unwrap()).unwrap();
            assert!(back.max_abs_diff(v) < 1e-14);
        }
    }

    #[test]
    fn extract_rejects_complex_phase() {
        let s = OneExcitationState::new([C64::new(0.0, 0.0), C64::new(0.0, 0.0), I]).unwrap();
        assert!(matches!(
            extract(&s),
            Err(So3Error::NotRealRepresentable(_))
        ));
    }

    #[test]
    fn complex_step_is_the_real_rotation() {
        let mut rng = StdRng::seed_from_u64(26);
        for _ in 0..200 {
            let theta = rng.random_range(0.0..PI);
            let phi = rng.random_range(0.0..PI);
            let v = random_unit(&mut rng);
            let u = &u_ab(phi) * &u_bc(theta);
            let evolved = embed(v).unwrap().evolve_by(&u);
            let got = extract(&evolved).unwrap();
            assert!(got.max_abs_diff(step_rotation(theta, phi).apply(v)) < 1e-12);
        }
    }
}
