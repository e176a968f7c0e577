//! GCM sphere ingredients: l = 1 mode projections against J^(0) = cos(theta),
//! J^(+) = sin(theta) cos(phi), J^(-) = sin(theta) sin(phi), and the effective
//! isothermal reparametrization of an axisymmetric sphere metric.

use crate::error::{KerrError, Result};
use crate::kerr::{aux_scalars, KerrParams};
use crate::quad::gauss_legendre;

/// Induced metric of the Kerr coordinate sphere S(t, r):
/// g_thth = |q|^2, g_phph = Sigma^2 sin^2(theta)/|q|^2.
pub fn kerr_sphere_metric(params: KerrParams, r: f64) -> impl Fn(f64) -> (f64, f64) {
    move |theta: f64| {
        let s = aux_scalars(params, r, theta);
        (
            s.q_norm_sq,
            s.sigma_sq * theta.sin().powi(2) / s.q_norm_sq,
        )
    }
}

/// Integrals of J^(p) h over the coordinate sphere of radius r, with the
/// induced area element dA = Sigma sin(theta) dtheta dphi.
///
/// Gauss-Legendre in cos(theta) crossed with a phi trapezoid; both are
/// spectrally accurate for smooth integrands, comfortably below the
/// 1e-10 * 4 pi r^2 max|h| contract.
pub fn ell1_modes(
    h: &dyn Fn(f64, f64) -> f64,
    params: KerrParams,
    r: f64,
) -> (f64, f64, f64) {
    let n_theta = 64;
    let n_phi = 128;
    let (nodes, weights) = gauss_legendre(n_theta);
    let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
    let mut i0 = 0.0;
    let mut ip = 0.0;
    let mut im = 0.0;
    for (x, w) in nodes.iter().zip(&weights) {
        // x = cos(theta); dA = Sigma dcos(theta) dphi
        let theta = x.acos();
        let sigma = aux_scalars(params, r, theta).sigma_sq.sqrt();
        let sin = theta.sin();
        for k in 0..n_phi {
            let phi = k as f64 * dphi;
            let v = h(theta, phi) * sigma * w * dphi;
            i0 += v * x;
            ip += v * sin * phi.cos();
            im += v * sin * phi.sin();
        }
    }
    (i0, ip, im)
}

/// Effective isothermal fit of an axisymmetric sphere metric
/// diag(g_thth(theta), g_phph(theta)).
///
/// Solves dtheta'/dtheta = sin(theta') sqrt(g_thth/g_phph) with
/// theta'(0) = 0 and theta'(pi) = pi. In the u = ln tan(theta'/2) variable
/// the ODE is linear, u' = k(theta), so the solution is
/// tan(theta'/2) = C tan(theta/2) exp(v(theta)) with v the integral of the
/// regular part of k; every C > 0 satisfies both boundary conditions, and
/// the shooting constant C is fixed by bisection on the equator condition
/// theta'(pi/2) = pi/2, which selects the reflection-symmetric representative.
pub struct IsothermalMap<F: Fn(f64) -> (f64, f64)> {
    metric: F,
    r: f64,
    c: f64,
}

impl<F: Fn(f64) -> (f64, f64)> IsothermalMap<F> {
    /// The reparametrized latitude theta'(theta).
    pub fn theta_prime(&self, theta: f64) -> f64 {
        let v = self.v_integral(theta);
        let tanh = self.c * (0.5 * theta).tan() * v.exp();
        2.0 * tanh.atan()
    }

    /// The conformal exponent phi_conf with e^{2 phi_conf} = g_phph / (r^2 sin^2 theta').
    pub fn conf_factor(&self, theta: f64) -> f64 {
        let tp = self.theta_prime(theta);
        let (_, g_ph) = (self.metric)(theta);
        0.5 * (g_ph / (self.r * self.r * tp.sin().powi(2))).ln()
    }

    /// v(theta) = integral_0^theta (k(s) - 1/sin s) ds, smooth through the poles.
    fn v_integral(&self, theta: f64) -> f64 {
        v_integral_of(&self.metric, theta)
    }
}

/// Composite Gauss-Legendre for the regular part of k; the integrand is
/// smooth so a handful of panels reaches rounding accuracy, and unlike an
/// adaptive rule it does not chase the O(eps/sin) rounding noise at the poles.
fn v_integral_of<F: Fn(f64) -> (f64, f64)>(metric: &F, theta: f64) -> f64 {
    if theta <= 0.0 {
        return 0.0;
    }
    let panels = (theta / 0.3).ceil().max(2.0) as usize;
    let (nodes, weights) = gauss_legendre(20);
    let h = theta / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let a = p as f64 * h;
        for (x, w) in nodes.iter().zip(&weights) {
            let s = a + 0.5 * h * (x + 1.0);
            total += 0.5 * h * w * regular_part(metric, s);
        }
    }
    total
}

/// k(theta) - 1/sin(theta) = (sin(theta) k(theta) - 1)/sin(theta), evaluated
/// cancellation-free; k = sqrt(g_thth/g_phph). Below sin = 1e-6 the value is
/// rounding noise over a vanishing integrand, so it is clamped to the limit 0.
fn regular_part<F: Fn(f64) -> (f64, f64)>(metric: &F, s: f64) -> f64 {
    let sin = s.sin();
    if sin < 1e-6 {
        return 0.0;
    }
    let (g_th, g_ph) = metric(s);
    let k = (g_th / g_ph).sqrt();
    (sin * k - 1.0) / sin
}

/// Fits the isothermal form; errors if the bisection cannot bracket the
/// equator condition.
pub fn isothermal_fit<F: Fn(f64) -> (f64, f64)>(metric: F, r: f64) -> Result<IsothermalMap<F>> {
    let half_pi = 0.5 * std::f64::consts::PI;
    let exp_v = v_integral_of(&metric, half_pi).exp();
    let probe = |c: f64| -> f64 { 2.0 * (c * exp_v).atan() - half_pi };
    // theta'(pi/2) = 2 atan(C e^v) is monotone in C; bracket and bisect
    let (mut lo, mut hi) = (1e-6, 1e6);
    if probe(lo) > 0.0 || probe(hi) < 0.0 {
        return Err(KerrError::ShootingFailed);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if probe(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-15 * hi {
            break;
        }
    }
    let c = 0.5 * (lo + hi);
    Ok(IsothermalMap { metric, r, c })
}
