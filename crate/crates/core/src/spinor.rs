//! Spin-1/2 building blocks and their symmetric tensor powers.
//!
//! The wave operator acts on four-component objects: two dynamical upper
//! components and two auxiliary lower ones. Low-velocity boosts mix lower
//! components into upper ones through a triangular block matrix, and the
//! projector onto the upper pair is exactly preserved by that action. These
//! identities are checked numerically by [`checks::run_checks`], which the
//! CLI exposes as a report.

use core::fmt;
use num_complex::Complex64;
// The test harness links std, whose inherent f64 methods shadow the trait.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;
use rand::Rng;

use crate::linalg::CMatrix;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn pauli(axis: usize) -> CMatrix {
    let z = Complex64::new(0.0, 0.0);
    match axis {
        1 => CMatrix::from_rows2([[z, ONE], [ONE, z]]),
        2 => CMatrix::from_rows2([[z, -I], [I, z]]),
        3 => CMatrix::from_rows2([[ONE, z], [z, -ONE]]),
        _ => panic!("pauli: axis must be 1, 2, or 3"),
    }
}

/// `v . sigma` as a 2x2 matrix.
pub fn sigma_dot(v: [f64; 3]) -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    for (k, &vk) in v.iter().enumerate() {
        let s = pauli(k + 1);
        for r in 0..2 {
            for c in 0..2 {
                m[(r, c)] += s[(r, c)] * vk;
            }
        }
    }
    m
}

/// Projector onto the two dynamical upper components, `diag(1,1,0,0)`.
pub fn upper_projector() -> CMatrix {
    let mut g = CMatrix::zeros(4, 4);
    g[(0, 0)] = ONE;
    g[(1, 1)] = ONE;
    g
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpinorError {
    /// Matrix handed to `Rotation::from_matrix` is not orthogonal with unit
    /// determinant.
    NotARotation,
    /// Requested tensor rank would allocate a dense matrix past the guard.
    RankTooLarge { two_s: u32 },
    /// Spin label outside the supported range.
    BadSpin { two_s: u32 },
}

impl fmt::Display for SpinorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpinorError::NotARotation => {
                write!(f, "matrix is not orthogonal with determinant +1")
            }
            SpinorError::RankTooLarge { two_s } => write!(
                f,
                "two_s = {two_s}: dense pairing tensor of side 2^{two_s} exceeds the memory guard (two_s <= 12)"
            ),
            SpinorError::BadSpin { two_s } => {
                write!(f, "two_s = {two_s}: spin label must satisfy two_s >= 1")
            }
        }
    }
}

/// Axis-angle rotation. The axis is kept normalized.
#[derive(Debug, Clone, Copy)]
pub struct Rotation {
    axis: [f64; 3],
    angle: f64,
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

impl Rotation {
    pub fn new(axis: [f64; 3], angle: f64) -> Rotation {
        let n = norm3(axis);
        assert!(n > 0.0 && n.is_finite(), "rotation axis must be nonzero");
        Rotation {
            axis: [axis[0] / n, axis[1] / n, axis[2] / n],
            angle,
        }
    }

    pub fn identity() -> Rotation {
        Rotation {
            axis: [0.0, 0.0, 1.0],
            angle: 0.0,
        }
    }

    pub fn axis(&self) -> [f64; 3] {
        self.axis
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// Validates orthogonality and unit determinant before extracting the
    /// axis-angle form.
    pub fn from_matrix(m: &[[f64; 3]; 3]) -> Result<Rotation, SpinorError> {
        let tol = 1e-9;
        for i in 0..3 {
            for j in 0..3 {
                let mut dot = 0.0;
                for k in 0..3 {
                    dot += m[k][i] * m[k][j];
                }
                let want = if i == j { 1.0 } else { 0.0 };
                if (dot - want).abs() > tol {
                    return Err(SpinorError::NotARotation);
                }
            }
        }
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if (det - 1.0).abs() > tol {
            return Err(SpinorError::NotARotation);
        }
        let cos_t = ((m[0][0] + m[1][1] + m[2][2] - 1.0) / 2.0).clamp(-1.0, 1.0);
        let angle = cos_t.acos();
        if angle < 1e-12 {
            return Ok(Rotation::identity());
        }
        if core::f64::consts::PI - angle > 1e-6 {
            let ax = [
                m[2][1] - m[1][2],
                m[0][2] - m[2][0],
                m[1][0] - m[0][1],
            ];
            return Ok(Rotation::new(ax, angle));
        }
        // Near angle = pi the skew part vanishes; recover the axis from the
        // dominant diagonal of (R + I)/2.
        let mut ax = [0.0_f64; 3];
        let mut best = 0;
        for i in 1..3 {
            if m[i][i] > m[best][best] {
                best = i;
            }
        }
        ax[best] = ((m[best][best] + 1.0) / 2.0).max(0.0).sqrt();
        for j in 0..3 {
            if j != best {
                ax[j] = (m[best][j] + m[j][best]) / (4.0 * ax[best]);
            }
        }
        Ok(Rotation::new(ax, angle))
    }

    /// 3x3 matrix via the Rodrigues formula.
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        let (s, c) = self.angle.sin_cos();
        let n = self.axis;
        let mut m = [[0.0_f64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let id = if i == j { 1.0 } else { 0.0 };
                let skew = match (i, j) {
                    (0, 1) => -n[2],
                    (0, 2) => n[1],
                    (1, 0) => n[2],
                    (1, 2) => -n[0],
                    (2, 0) => -n[1],
                    (2, 1) => n[0],
                    _ => 0.0,
                };
                m[i][j] = id * c + skew * s + n[i] * n[j] * (1.0 - c);
            }
        }
        m
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let (s, c) = self.angle.sin_cos();
        let n = self.axis;
        let nxv = cross(n, v);
        let ndv = dot3(n, v);
        let mut out = [0.0_f64; 3];
        for i in 0..3 {
            out[i] = v[i] * c + nxv[i] * s + n[i] * ndv * (1.0 - c);
        }
        out
    }

    /// `self` after `first`, composed through unit quaternions so the axis
    /// stays exact for nearly antipodal pairs.
    pub fn compose(&self, first: &Rotation) -> Rotation {
        let q2 = self.quaternion();
        let q1 = first.quaternion();
        let w = q2.0 * q1.0 - dot3(q2.1, q1.1);
        let mut v = cross(q2.1, q1.1);
        for i in 0..3 {
            v[i] += q2.0 * q1.1[i] + q1.0 * q2.1[i];
        }
        let vn = norm3(v);
        if vn < 1e-15 {
            return Rotation::identity();
        }
        let angle = 2.0 * vn.atan2(w);
        // Keep the angle in [-pi, pi] so matrix() sees the short way round.
        let angle = if angle > core::f64::consts::PI {
            angle - 2.0 * core::f64::consts::PI
        } else {
            angle
        };
        Rotation::new(v, angle)
    }

    fn quaternion(&self) -> (f64, [f64; 3]) {
        let (s, c) = (self.angle / 2.0).sin_cos();
        (c, [self.axis[0] * s, self.axis[1] * s, self.axis[2] * s])
    }
}

/// Spin-1/2 rotation matrix `cos(t/2) I - i sin(t/2) n . sigma`.
pub fn half_spin_rotation(r: &Rotation) -> CMatrix {
    let (s, c) = (r.angle() / 2.0).sin_cos();
    let sn = sigma_dot(r.axis());
    let mut d = CMatrix::zeros(2, 2);
    for row in 0..2 {
        for col in 0..2 {
            let id = if row == col { ONE } else { Complex64::new(0.0, 0.0) };
            d[(row, col)] = id * c - I * sn[(row, col)] * s;
        }
    }
    d
}

/// Four-component representation of a boost by `velocity` combined with a
/// rotation: block lower triangular, rotation on the diagonal, and the
/// velocity feeding lower components from upper ones.
pub fn boost_rep(velocity: [f64; 3], r: &Rotation) -> CMatrix {
    let d = half_spin_rotation(r);
    let sv = sigma_dot(velocity);
    let mix = sv.mul(&d);
    let mut out = CMatrix::zeros(4, 4);
    for row in 0..2 {
        for col in 0..2 {
            out[(row, col)] = d[(row, col)];
            out[(row + 2, col + 2)] = d[(row, col)];
            out[(row + 2, col)] = -mix[(row, col)] * 0.5;
        }
    }
    out
}

/// Antisymmetric pairing matrix for one spin-1/2 factor.
pub fn pairing_half() -> CMatrix {
    pauli(2)
}

/// Pairing tensor for spin `two_s / 2`: the `two_s`-fold Kronecker power of
/// the spin-1/2 pairing matrix. Dense side is `2^two_s`, so the rank is
/// guarded.
pub fn pairing_tensor(two_s: u32) -> Result<CMatrix, SpinorError> {
    if two_s < 1 {
        return Err(SpinorError::BadSpin { two_s });
    }
    if two_s > 12 {
        return Err(SpinorError::RankTooLarge { two_s });
    }
    let base = pairing_half();
    let mut out = base.clone();
    for _ in 1..two_s {
        out = out.kron(&base);
    }
    Ok(out)
}

/// Sign `t` in `T^transpose = t T` for the pairing tensor, read off from the
/// matrix itself.
pub fn pairing_transpose_sign(t: &CMatrix) -> Option<f64> {
    let tt = t.transpose();
    let scale = t.max_abs();
    if tt.max_abs_diff(t) <= 1e-14 * scale {
        Some(1.0)
    } else {
        let neg = t.scale(Complex64::new(-1.0, 0.0));
        if tt.max_abs_diff(&neg) <= 1e-14 * scale {
            Some(-1.0)
        } else {
            None
        }
    }
}

/// Sign with which two identical fields of spin `two_s / 2` commute under
/// the statistics assignment probed here: plus for odd `two_s`, minus for
/// even. The product of this sign and the pairing transpose sign is what
/// forces one exchange channel to cancel.
pub fn exchange_sign(two_s: u32) -> f64 {
    if two_s % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

pub mod checks {
    //! Randomized identity checks over the boost representation and the
    //! pairing tensors. Deterministic given the caller's RNG.

    use super::*;
    use alloc::string::String;
    use alloc::vec::Vec;

    #[derive(Debug, Clone)]
    pub struct CheckLine {
        pub name: String,
        pub worst: f64,
        pub tolerance: f64,
        pub passed: bool,
    }

    #[derive(Debug, Clone)]
    pub struct CheckReport {
        pub trials: usize,
        pub max_two_s: u32,
        pub lines: Vec<CheckLine>,
        pub all_passed: bool,
    }

    pub fn random_rotation(rng: &mut impl Rng) -> Rotation {
        let axis = loop {
            let v = [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ];
            let n = norm3(v);
            if n > 0.1 && n <= 1.0 {
                break v;
            }
        };
        let angle = rng.gen_range(-core::f64::consts::PI..core::f64::consts::PI);
        Rotation::new(axis, angle)
    }

    pub fn random_velocity(rng: &mut impl Rng) -> [f64; 3] {
        [
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        ]
    }

    fn line(name: &str, worst: f64, tolerance: f64) -> CheckLine {
        CheckLine {
            name: String::from(name),
            worst,
            tolerance,
            passed: worst <= tolerance,
        }
    }

    /// Runs every identity check with `trials` random draws each and spins
    /// up to `max_two_s` for the pairing tensors.
    pub fn run_checks(max_two_s: u32, trials: usize, rng: &mut impl Rng) -> CheckReport {
        let mut lines = Vec::new();
        let gamma = upper_projector();

        let gg = gamma.mul(&gamma);
        lines.push(line("projector_idempotent", gg.max_abs_diff(&gamma), 0.0));
        lines.push(line(
            "projector_trace",
            (gamma.trace().re - 2.0).abs() + gamma.trace().im.abs(),
            0.0,
        ));

        let mut worst_inv = 0.0_f64;
        let mut worst_det = 0.0_f64;
        let mut worst_rot_block = 0.0_f64;
        let mut worst_unitary = 0.0_f64;
        let mut worst_adjoint = 0.0_f64;
        for _ in 0..trials {
            let r = random_rotation(rng);
            let v = random_velocity(rng);
            let b = boost_rep(v, &r);
            let inv = b.dagger().mul(&gamma).mul(&b);
            worst_inv = worst_inv.max(inv.max_abs_diff(&gamma));
            worst_det = worst_det.max((b.det() - ONE).norm());

            let d = half_spin_rotation(&r);
            for row in 0..2 {
                for col in 0..2 {
                    worst_rot_block =
                        worst_rot_block.max((b[(row, col)] - d[(row, col)]).norm());
                }
            }
            let uni = d.dagger().mul(&d);
            worst_unitary = worst_unitary.max(uni.max_abs_diff(&CMatrix::identity(2)));

            let lhs = d.mul(&sigma_dot(v)).mul(&d.dagger());
            let rhs = sigma_dot(r.apply(v));
            worst_adjoint = worst_adjoint.max(lhs.max_abs_diff(&rhs));
        }
        lines.push(line("boost_preserves_projector", worst_inv, 1e-12));
        lines.push(line("boost_unit_determinant", worst_det, 1e-12));
        lines.push(line("boost_upper_block_is_rotation", worst_rot_block, 1e-13));
        lines.push(line("half_spin_rotation_unitary", worst_unitary, 1e-13));
        lines.push(line("rotation_adjoint_action", worst_adjoint, 1e-12));

        let mut worst_comp = 0.0_f64;
        for _ in 0..trials {
            let r1 = random_rotation(rng);
            let r2 = random_rotation(rng);
            let v1 = random_velocity(rng);
            let v2 = random_velocity(rng);
            let lhs = boost_rep(v2, &r2).mul(&boost_rep(v1, &r1));
            let mut v_tot = r2.apply(v1);
            for i in 0..3 {
                v_tot[i] += v2[i];
            }
            let rhs = boost_rep(v_tot, &r2.compose(&r1));
            let plus = lhs.max_abs_diff(&rhs);
            let minus = lhs.max_abs_diff(&rhs.scale(Complex64::new(-1.0, 0.0)));
            worst_comp = worst_comp.max(plus.min(minus));
        }
        lines.push(line("boost_composition_up_to_sign", worst_comp, 1e-12));

        let mut worst_square = 0.0_f64;
        let mut worst_sign = 0.0_f64;
        let mut worst_product = 0.0_f64;
        for two_s in 1..=max_two_s {
            let t = pairing_tensor(two_s).expect("guarded spin range");
            let sq = t.mul(&t);
            let n = 1usize << two_s;
            worst_square = worst_square.max(sq.max_abs_diff(&CMatrix::identity(n)));
            match pairing_transpose_sign(&t) {
                Some(sign) => {
                    let expect = if two_s % 2 == 0 { 1.0 } else { -1.0 };
                    worst_sign = worst_sign.max((sign - expect).abs());
                    // Transpose sign times the field commutation sign: the
                    // combination is -1 for every spin, which is what removes
                    // one of the two exchange terms.
                    worst_product =
                        worst_product.max((exchange_sign(two_s) * sign + 1.0).abs());
                }
                None => {
                    worst_sign = f64::INFINITY;
                }
            }
        }
        lines.push(line("pairing_tensor_squares_to_identity", worst_square, 0.0));
        lines.push(line("pairing_transpose_sign_alternates", worst_sign, 0.0));
        lines.push(line("exchange_sign_product_fixed", worst_product, 0.0));

        let all_passed = lines.iter().all(|l| l.passed);
        CheckReport {
            trials,
            max_two_s,
            lines,
            all_passed,
        }
    }
}
