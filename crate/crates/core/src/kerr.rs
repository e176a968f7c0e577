//! Kerr metric in Boyer-Lindquist coordinates: auxiliary scalars, horizon
//! radii, and exact evaluation of the covariant metric and its inverse.
//!
//! Geometric units G = c = 1 throughout; the spin a and mass m both carry
//! dimension of length. The coordinate basis is fixed as (t, r, theta, phi)
//! in that order everywhere in this crate.

use num_complex::Complex64;

use crate::error::{KerrError, Result};
use crate::jet::Jet;

/// Coordinate slots in the fixed (t, r, theta, phi) ordering.
pub const T: usize = 0;
pub const R: usize = 1;
pub const TH: usize = 2;
pub const PH: usize = 3;

/// Default exterior margin: points are kept at r >= 1.05 r_plus so Delta
/// stays well conditioned.
pub const DEFAULT_R_MARGIN: f64 = 1.05;

/// Default polar margin in radians; the canonical horizontal basis is
/// singular at theta = 0, pi.
pub const DEFAULT_THETA_MARGIN: f64 = 0.05;

/// Hard guard against genuinely singular axis evaluations.
pub const AXIS_GUARD: f64 = 1e-9;

/// Spin and mass of a subextremal Kerr exterior.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KerrParams {
    a: f64,
    m: f64,
}

impl KerrParams {
    /// Validates m > 0 and |a| < m. The flat limit a = m = 0 is also accepted
    /// so Minkowski checks can share the code paths.
    pub fn new(a: f64, m: f64) -> Result<Self> {
        let ok = (m > 0.0 && a.abs() < m) || (a == 0.0 && m == 0.0);
        if ok {
            Ok(KerrParams { a, m })
        } else {
            Err(KerrError::NotSubextremal { a, m })
        }
    }

    pub fn spin(&self) -> f64 {
        self.a
    }

    pub fn mass(&self) -> f64 {
        self.m
    }

    /// Larger and smaller roots of Delta(r) = 0.
    pub fn horizon_radii(&self) -> (f64, f64) {
        let root = (self.m * self.m - self.a * self.a).sqrt();
        (self.m + root, self.m - root)
    }
}

/// Roots r_plus, r_minus of Delta; rejects extremal and superextremal input.
pub fn horizon_radii(a: f64, m: f64) -> Result<(f64, f64)> {
    let params = KerrParams::new(a, m)?;
    Ok(params.horizon_radii())
}

/// A spacetime point in Boyer-Lindquist coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BLPoint {
    pub t: f64,
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl BLPoint {
    pub fn new(t: f64, r: f64, theta: f64, phi: f64) -> Self {
        BLPoint { t, r, theta, phi }
    }
}

/// The scalars of the metric: Delta, q, |q|^2 and Sigma^2.
#[derive(Clone, Copy, Debug)]
pub struct AuxScalars {
    pub delta: f64,
    pub q: Complex64,
    pub q_norm_sq: f64,
    pub sigma_sq: f64,
}

/// Delta = r^2 + a^2 - 2mr, q = r + i a cos(theta),
/// Sigma^2 = (r^2 + a^2)|q|^2 + 2 m r a^2 sin^2(theta).
pub fn aux_scalars(params: KerrParams, r: f64, theta: f64) -> AuxScalars {
    let (a, m) = (params.a, params.m);
    let delta = r * r + a * a - 2.0 * m * r;
    let q = Complex64::new(r, a * theta.cos());
    let q_norm_sq = q.norm_sqr();
    let s = theta.sin();
    let sigma_sq = (r * r + a * a) * q_norm_sq + 2.0 * m * r * a * a * s * s;
    AuxScalars {
        delta,
        q,
        q_norm_sq,
        sigma_sq,
    }
}

/// The alternate expression Sigma^2 = (r^2+a^2)^2 - a^2 sin^2(theta) Delta;
/// agrees with the primary form to rounding and is used as an identity check.
pub fn sigma_sq_alt(params: KerrParams, r: f64, theta: f64) -> f64 {
    let (a, m) = (params.a, params.m);
    let delta = r * r + a * a - 2.0 * m * r;
    let s = theta.sin();
    let ra = r * r + a * a;
    ra * ra - a * a * s * s * delta
}

/// Covariant metric, inverse, and determinant at a point.
#[derive(Clone, Copy, Debug)]
pub struct MetricAt {
    pub g: [[f64; 4]; 4],
    pub g_inv: [[f64; 4]; 4],
    pub det: f64,
}

impl MetricAt {
    /// Maximum absolute entry of g . g_inv - identity.
    pub fn inverse_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let mut s = 0.0;
                for k in 0..4 {
                    s += self.g[i][k] * self.g_inv[k][j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }

    /// Eigenvalue signs (negative count, positive count) via Jacobi rotations.
    pub fn signature(&self) -> (usize, usize) {
        let mut a = self.g;
        for _ in 0..64 {
            // largest off-diagonal element
            let (mut p, mut q, mut big) = (0, 1, 0.0f64);
            for i in 0..4 {
                for j in (i + 1)..4 {
                    if a[i][j].abs() > big {
                        big = a[i][j].abs();
                        p = i;
                        q = j;
                    }
                }
            }
            if big < 1e-14 {
                break;
            }
            let phi = 0.5 * (2.0 * a[p][q]).atan2(a[p][p] - a[q][q]);
            let (s, c) = phi.sin_cos();
            let mut rot = [[0.0; 4]; 4];
            for (i, row) in rot.iter_mut().enumerate() {
                row[i] = 1.0;
            }
            rot[p][p] = c;
            rot[q][q] = c;
            rot[p][q] = -s;
            rot[q][p] = s;
            let mut tmp = [[0.0; 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    tmp[i][j] = (0..4).map(|k| rot[k][i] * a[k][j]).sum();
                }
            }
            for i in 0..4 {
                for j in 0..4 {
                    a[i][j] = (0..4).map(|k| tmp[i][k] * rot[k][j]).sum();
                }
            }
        }
        let neg = (0..4).filter(|&i| a[i][i] < 0.0).count();
        (neg, 4 - neg)
    }
}

/// Checks that the point lies strictly outside the horizon (Delta > 0).
pub fn check_exterior(params: KerrParams, p: &BLPoint) -> Result<()> {
    let delta = p.r * p.r + params.a * params.a - 2.0 * params.m * p.r;
    if delta <= 0.0 || p.r <= 0.0 {
        return Err(KerrError::InsideHorizon { r: p.r, delta });
    }
    Ok(())
}

/// Checks the polar angle is usable for frame computations.
pub fn check_off_axis(p: &BLPoint) -> Result<()> {
    if p.theta.sin() <= AXIS_GUARD {
        return Err(KerrError::OnAxis { theta: p.theta });
    }
    Ok(())
}

/// Metric entries as jets in (t, r, theta, phi) at truncation `order`.
///
/// The Boyer-Lindquist form in the fixed basis, with omega = 2amr/Sigma^2:
///   g_tt   = -|q|^2 Delta / Sigma^2 + Sigma^2 sin^2(theta) omega^2 / |q|^2
///   g_tphi = -Sigma^2 sin^2(theta) omega / |q|^2
///   g_phph =  Sigma^2 sin^2(theta) / |q|^2
///   g_rr   =  |q|^2 / Delta
///   g_thth =  |q|^2
pub fn metric_entries_jet(params: KerrParams, coords: &[Jet; 4]) -> [[Jet; 4]; 4] {
    let (a, m) = (params.a, params.m);
    let order = coords[0].order();
    let r = coords[R];
    let theta = coords[TH];
    let zero = Jet::constant(0.0, order);

    let cos = theta.cos();
    let sin = theta.sin();
    let sin2 = sin * sin;
    let r2 = r * r;
    let q2 = r2 + (cos * cos).scaled(a * a);
    let delta = r2 - r.scaled(2.0 * m) + a * a;
    let ra = r2 + a * a;
    let sigma2 = ra * q2 + (r * sin2).scaled(2.0 * m * a * a);

    let mut g = [[zero; 4]; 4];
    if a == 0.0 && m == 0.0 {
        // Minkowski in spherical coordinates; avoids 0/0 in omega assembly.
        g[T][T] = Jet::constant(-1.0, order);
        g[R][R] = Jet::constant(1.0, order);
        g[TH][TH] = r2;
        g[PH][PH] = r2 * sin2;
        return g;
    }

    let omega_num = r.scaled(2.0 * a * m); // Sigma^2 * omega
    g[T][T] = -(q2 * delta) / sigma2 + (omega_num * omega_num * sin2) / (sigma2 * q2);
    g[T][PH] = -(omega_num * sin2) / q2;
    g[PH][T] = g[T][PH];
    g[PH][PH] = sigma2 * sin2 / q2;
    g[R][R] = q2 / delta;
    g[TH][TH] = q2;
    g
}

/// Assembles the metric, its inverse and determinant at an exterior point.
pub fn metric(params: KerrParams, p: &BLPoint) -> Result<MetricAt> {
    check_exterior(params, p)?;
    let coords = crate::jet::coordinate_jets(p.t, p.r, p.theta, p.phi, 0);
    let gj = metric_entries_jet(params, &coords);
    let mut g = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            g[i][j] = gj[i][j].value();
        }
    }
    let (g_inv, det) = invert_sym4(&g);
    Ok(MetricAt { g, g_inv, det })
}

/// Inverse and determinant of a symmetric 4x4 via Gauss-Jordan with partial
/// pivoting. The BL metric block structure keeps this well conditioned in
/// the exterior.
fn invert_sym4(g: &[[f64; 4]; 4]) -> ([[f64; 4]; 4], f64) {
    let mut a = *g;
    let mut inv = [[0.0; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut det = 1.0;
    for col in 0..4 {
        let mut piv = col;
        for row in (col + 1)..4 {
            if a[row][col].abs() > a[piv][col].abs() {
                piv = row;
            }
        }
        if piv != col {
            a.swap(piv, col);
            inv.swap(piv, col);
            det = -det;
        }
        let d = a[col][col];
        det *= d;
        let inv_d = 1.0 / d;
        for j in 0..4 {
            a[col][j] *= inv_d;
            inv[col][j] *= inv_d;
        }
        for row in 0..4 {
            if row == col {
                continue;
            }
            let f = a[row][col];
            if f != 0.0 {
                for j in 0..4 {
                    a[row][j] -= f * a[col][j];
                    inv[row][j] -= f * inv[col][j];
                }
            }
        }
    }
    // symmetrize against rounding
    for i in 0..4 {
        for j in (i + 1)..4 {
            let s = 0.5 * (inv[i][j] + inv[j][i]);
            inv[i][j] = s;
            inv[j][i] = s;
        }
    }
    (inv, det)
}

/// Minkowski metric in spherical coordinates at the same point, for
/// asymptotic-flatness comparisons.
pub fn minkowski_spherical(p: &BLPoint) -> [[f64; 4]; 4] {
    let mut g = [[0.0; 4]; 4];
    g[T][T] = -1.0;
    g[R][R] = 1.0;
    g[TH][TH] = p.r * p.r;
    g[PH][PH] = p.r * p.r * p.theta.sin().powi(2);
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aux_scalars_examples() {
        // horizon root of r^2 - 2r at r = 2
        let p = KerrParams::new(0.0, 1.0).unwrap();
        assert_eq!(aux_scalars(p, 2.0, std::f64::consts::FRAC_PI_2).delta, 0.0);
        // direct arithmetic 9 - 6
        assert_eq!(aux_scalars(p, 3.0, 0.7).delta, 3.0);
        // q = 2 + 0.5i, |q|^2 = 4.25
        let p = KerrParams::new(0.5, 1.0).unwrap();
        let s = aux_scalars(p, 2.0, 0.0);
        assert!((s.q - Complex64::new(2.0, 0.5)).norm() < 1e-15);
        assert!((s.q_norm_sq - 4.25).abs() < 1e-15);
    }

    #[test]
    fn sigma_sq_double_formula() {
        for &(a, m) in &[(0.0, 1.0), (0.3, 1.0), (0.7, 1.0), (0.9, 2.0)] {
            let p = KerrParams::new(a, m).unwrap();
            for &r in &[1.9 * m + a, 3.0, 10.0, 1e4] {
                for &th in &[0.1, 1.0, std::f64::consts::FRAC_PI_2, 2.9] {
                    let s = aux_scalars(p, r, th);
                    let alt = sigma_sq_alt(p, r, th);
                    assert!(
                        (s.sigma_sq - alt).abs() < 1e-12 * s.sigma_sq,
                        "sigma identity failed at a={a} r={r} th={th}"
                    );
                }
            }
        }
    }

    #[test]
    fn horizon_radii_examples() {
        assert_eq!(horizon_radii(0.0, 1.0).unwrap(), (2.0, 0.0));
        let (rp, rm) = horizon_radii(0.6, 1.0).unwrap();
        assert!((rp - 1.8).abs() < 1e-15 && (rm - 0.2).abs() < 1e-15);
        assert!(matches!(
            horizon_radii(1.0, 1.0),
            Err(KerrError::NotSubextremal { .. })
        ));
        // Delta vanishes at both roots
        let p = KerrParams::new(0.6, 1.0).unwrap();
        assert!(aux_scalars(p, rp, 1.0).delta.abs() < 1e-14);
    }

    #[test]
    fn schwarzschild_metric_values() {
        let params = KerrParams::new(0.0, 1.0).unwrap();
        let p = BLPoint::new(0.0, 4.0, 1.2, 0.3);
        let m = metric(params, &p).unwrap();
        assert!((m.g[T][T] + 0.5).abs() < 1e-15);
        assert!((m.g[R][R] - 2.0).abs() < 1e-15);
        assert!((m.g[TH][TH] - 16.0).abs() < 1e-15);
        assert!(m.g[T][PH].abs() < 1e-15);
        assert!(m.inverse_defect() < 1e-14);
        assert_eq!(m.signature(), (1, 3));
    }

    #[test]
    fn flat_limit_is_minkowski() {
        let params = KerrParams::new(0.0, 0.0).unwrap();
        for &r in &[0.5, 3.0, 40.0] {
            let p = BLPoint::new(0.0, r, 0.9, 1.0);
            let m = metric(params, &p).unwrap();
            let eta = minkowski_spherical(&p);
            for i in 0..4 {
                for j in 0..4 {
                    assert!((m.g[i][j] - eta[i][j]).abs() < 1e-14 * (1.0 + r * r));
                }
            }
        }
    }

    #[test]
    fn kerr_metric_invariants() {
        let params = KerrParams::new(0.7, 1.0).unwrap();
        let p = BLPoint::new(0.0, 2.2, 0.8, 0.4);
        let m = metric(params, &p).unwrap();
        assert!(m.inverse_defect() < 1e-12);
        assert_eq!(m.signature(), (1, 3));
        // determinant matches the closed form -|q|^4 sin^2 theta
        let s = aux_scalars(params, p.r, p.theta);
        let expect = -s.q_norm_sq * s.q_norm_sq * p.theta.sin().powi(2);
        assert!((m.det - expect).abs() < 1e-12 * expect.abs());
    }

    #[test]
    fn asymptotic_flatness() {
        for &(a, m) in &[(0.3, 1.0), (0.7, 1.0)] {
            let params = KerrParams::new(a, m).unwrap();
            let r = 1e4 * m;
            let p = BLPoint::new(0.0, r, 1.3, 2.0);
            let g = metric(params, &p).unwrap().g;
            let eta = minkowski_spherical(&p);
            let scale = |i: usize| -> f64 {
                match i {
                    TH => r * r,
                    PH => r * r * p.theta.sin().powi(2),
                    _ => 1.0,
                }
            };
            for i in 0..4 {
                for j in 0..4 {
                    let s = (scale(i) * scale(j)).sqrt();
                    assert!(
                        (g[i][j] - eta[i][j]).abs() < 10.0 * m / r * s,
                        "component {i}{j} not asymptotically flat"
                    );
                }
            }
        }
    }

    #[test]
    fn horizon_rejection() {
        let params = KerrParams::new(0.0, 1.0).unwrap();
        let inside = BLPoint::new(0.0, 1.5, 1.0, 0.0);
        assert!(matches!(
            metric(params, &inside),
            Err(KerrError::InsideHorizon { .. })
        ));
    }
}
