//! Non-integrable horizontal calculus: Ricci coefficients and null curvature
//! components of a null frame, their complexification, the canonical complex
//! 1-form J, and the renormalization that subtracts exact Kerr values.
//!
//! Horizontal orientation: eps_12 = +1 in the (e1, e2) basis, so the dual of
//! a 1-form is (*u)_1 = u_2, (*u)_2 = -u_1. Complexified quantities are
//! U = u + i *u; they satisfy U_2 = -i U_1. The spacetime dual entering
//! *rho uses eps_{t r theta phi} = +sqrt(-det g); both choices are validated
//! against P = -2m/q^3 in the tests.

use num_complex::Complex64;

use crate::diffgeo::{christoffel_jets, curvature_at, value4x4, CurvatureAt, MetricJets};
use crate::error::{KerrError, Result};
use crate::frames::{directional_derivative, dot, FrameJets, NullFrame};
use crate::kerr::{aux_scalars, BLPoint, KerrParams};

/// Dual of a horizontal 1-form, eps_12 = +1.
pub fn star_one_form(u: [f64; 2]) -> [f64; 2] {
    [u[1], -u[0]]
}

/// Left dual of a horizontal 2-tensor: (*t)_ab = eps_a^c t_cb.
pub fn star_two_tensor(t: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [[t[1][0], t[1][1]], [-t[0][0], -t[0][1]]]
}

/// U = u + i *u; the components satisfy U_2 = -i U_1.
pub fn complexify_one_form(u: [f64; 2]) -> [Complex64; 2] {
    let s = star_one_form(u);
    [
        Complex64::new(u[0], s[0]),
        Complex64::new(u[1], s[1]),
    ]
}

/// T = t + i *t for 2-tensors.
pub fn complexify_two_tensor(t: [[f64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let s = star_two_tensor(t);
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            out[a][b] = Complex64::new(t[a][b], s[a][b]);
        }
    }
    out
}

/// Trace, antisymmetric trace, and symmetric trace-free part of a 2x2
/// horizontal tensor: t_ab = 1/2 tr delta_ab + 1/2 eps_ab atr + that_ab.
pub fn decompose(t: [[f64; 2]; 2]) -> (f64, f64, [[f64; 2]; 2]) {
    let tr = t[0][0] + t[1][1];
    let atr = t[0][1] - t[1][0];
    let hat = [
        [0.5 * (t[0][0] - t[1][1]), 0.5 * (t[0][1] + t[1][0])],
        [0.5 * (t[0][1] + t[1][0]), 0.5 * (t[1][1] - t[0][0])],
    ];
    (tr, atr, hat)
}

/// Ricci coefficients of a null frame at a point.
///
/// chi and chib are the full (generally non-symmetric) second fundamental
/// forms; the remaining coefficients follow the Ch-Kl conventions:
///   zeta_a = 1/2 g(D_a e4, e3),  eta_a = 1/2 g(D_3 e4, e_a),
///   etab_a = 1/2 g(D_4 e3, e_a), xi_a = 1/2 g(D_4 e4, e_a),
///   xib_a = 1/2 g(D_3 e3, e_a),  omega = 1/4 g(D_4 e4, e3),
///   omegab = 1/4 g(D_3 e3, e4).
#[derive(Clone, Copy, Debug)]
pub struct RicciCoefficients {
    pub chi: [[f64; 2]; 2],
    pub chib: [[f64; 2]; 2],
    pub zeta: [f64; 2],
    pub eta: [f64; 2],
    pub etab: [f64; 2],
    pub xi: [f64; 2],
    pub xib: [f64; 2],
    pub omega: f64,
    pub omegab: f64,
}

impl RicciCoefficients {
    pub fn tr_chi(&self) -> f64 {
        self.chi[0][0] + self.chi[1][1]
    }
    pub fn atr_chi(&self) -> f64 {
        self.chi[0][1] - self.chi[1][0]
    }
    pub fn chi_hat(&self) -> [[f64; 2]; 2] {
        decompose(self.chi).2
    }
    pub fn tr_chib(&self) -> f64 {
        self.chib[0][0] + self.chib[1][1]
    }
    pub fn atr_chib(&self) -> f64 {
        self.chib[0][1] - self.chib[1][0]
    }
    pub fn chib_hat(&self) -> [[f64; 2]; 2] {
        decompose(self.chib).2
    }

    /// tr X for X = chi + i *chi; equals tr chi - i atr chi.
    pub fn tr_x(&self) -> Complex64 {
        Complex64::new(self.tr_chi(), -self.atr_chi())
    }
    pub fn tr_xb(&self) -> Complex64 {
        Complex64::new(self.tr_chib(), -self.atr_chib())
    }
    pub fn x_hat(&self) -> [[Complex64; 2]; 2] {
        complexify_two_tensor(self.chi_hat())
    }
    pub fn xb_hat(&self) -> [[Complex64; 2]; 2] {
        complexify_two_tensor(self.chib_hat())
    }
    pub fn z(&self) -> [Complex64; 2] {
        complexify_one_form(self.zeta)
    }
    pub fn h(&self) -> [Complex64; 2] {
        complexify_one_form(self.eta)
    }
    pub fn hb(&self) -> [Complex64; 2] {
        complexify_one_form(self.etab)
    }
}

/// Computes all Ricci coefficients from a frame carried as jet fields of
/// order >= 1.
pub fn ricci_coefficients(
    params: KerrParams,
    p: &BLPoint,
    frame: &FrameJets,
) -> Result<RicciCoefficients> {
    if frame.e4[0].order() < 1 {
        return Err(KerrError::JetOrder {
            need: 1,
            have: frame.e4[0].order(),
        });
    }
    let mj = MetricJets::new(params, p, 2)?;
    let gamma_j = christoffel_jets(&mj);
    let mut gamma = [[[0.0; 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                gamma[i][j][k] = gamma_j[i][j][k].value();
            }
        }
    }
    let g = value4x4(&mj.g);
    let fr = frame.values();

    let d_a_e4 = [
        directional_derivative(&gamma, &fr.e1, &frame.e4),
        directional_derivative(&gamma, &fr.e2, &frame.e4),
    ];
    let d_a_e3 = [
        directional_derivative(&gamma, &fr.e1, &frame.e3),
        directional_derivative(&gamma, &fr.e2, &frame.e3),
    ];
    let d3_e4 = directional_derivative(&gamma, &fr.e3, &frame.e4);
    let d4_e3 = directional_derivative(&gamma, &fr.e4, &frame.e3);
    let d4_e4 = directional_derivative(&gamma, &fr.e4, &frame.e4);
    let d3_e3 = directional_derivative(&gamma, &fr.e3, &frame.e3);

    let mut chi = [[0.0; 2]; 2];
    let mut chib = [[0.0; 2]; 2];
    let mut zeta = [0.0; 2];
    let mut eta = [0.0; 2];
    let mut etab = [0.0; 2];
    let mut xi = [0.0; 2];
    let mut xib = [0.0; 2];
    for a in 0..2 {
        let ea = fr.horizontal(a);
        for b in 0..2 {
            let eb = fr.horizontal(b);
            chi[a][b] = dot(&g, &d_a_e4[a], &eb);
            chib[a][b] = dot(&g, &d_a_e3[a], &eb);
        }
        zeta[a] = 0.5 * dot(&g, &d_a_e4[a], &fr.e3);
        eta[a] = 0.5 * dot(&g, &d3_e4, &ea);
        etab[a] = 0.5 * dot(&g, &d4_e3, &ea);
        xi[a] = 0.5 * dot(&g, &d4_e4, &ea);
        xib[a] = 0.5 * dot(&g, &d3_e3, &ea);
    }
    Ok(RicciCoefficients {
        chi,
        chib,
        zeta,
        eta,
        etab,
        xi,
        xib,
        omega: 0.25 * dot(&g, &d4_e4, &fr.e3),
        omegab: 0.25 * dot(&g, &d3_e3, &fr.e4),
    })
}

/// Null curvature components of a frame.
#[derive(Clone, Copy, Debug)]
pub struct CurvatureComponents {
    pub alpha: [[f64; 2]; 2],
    pub beta: [f64; 2],
    pub rho: f64,
    pub rho_star: f64,
    pub betab: [f64; 2],
    pub alphab: [[f64; 2]; 2],
}

impl CurvatureComponents {
    pub fn big_a(&self) -> [[Complex64; 2]; 2] {
        complexify_two_tensor(self.alpha)
    }
    pub fn big_ab(&self) -> [[Complex64; 2]; 2] {
        complexify_two_tensor(self.alphab)
    }
    pub fn big_b(&self) -> [Complex64; 2] {
        complexify_one_form(self.beta)
    }
    pub fn big_bb(&self) -> [Complex64; 2] {
        complexify_one_form(self.betab)
    }
    /// P = rho + i *rho.
    pub fn big_p(&self) -> Complex64 {
        Complex64::new(self.rho, self.rho_star)
    }
}

fn contract4(
    riem: &[[[[f64; 4]; 4]; 4]; 4],
    x: &[f64; 4],
    y: &[f64; 4],
    z: &[f64; 4],
    w: &[f64; 4],
) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        if x[i] == 0.0 {
            continue;
        }
        for j in 0..4 {
            if y[j] == 0.0 {
                continue;
            }
            for k in 0..4 {
                if z[k] == 0.0 {
                    continue;
                }
                for l in 0..4 {
                    let r = riem[i][j][k][l];
                    if r != 0.0 && w[l] != 0.0 {
                        s += r * x[i] * y[j] * z[k] * w[l];
                    }
                }
            }
        }
    }
    s
}

/// Null curvature components from precomputed curvature data:
/// alpha_ab = R(ea, e4, eb, e4), beta_a = 1/2 R(ea, e4, e3, e4),
/// rho = 1/4 R(e3, e4, e3, e4), *rho = 1/4 *R(e3, e4, e3, e4),
/// betab_a = 1/2 R(ea, e3, e3, e4), alphab_ab = R(ea, e3, eb, e3).
pub fn curvature_components_from(curv: &CurvatureAt, fr: &NullFrame) -> CurvatureComponents {
    let e = [fr.e1, fr.e2];
    let mut alpha = [[0.0; 2]; 2];
    let mut alphab = [[0.0; 2]; 2];
    let mut beta = [0.0; 2];
    let mut betab = [0.0; 2];
    for a in 0..2 {
        for b in 0..2 {
            alpha[a][b] = contract4(&curv.riem, &e[a], &fr.e4, &e[b], &fr.e4);
            alphab[a][b] = contract4(&curv.riem, &e[a], &fr.e3, &e[b], &fr.e3);
        }
        beta[a] = 0.5 * contract4(&curv.riem, &e[a], &fr.e4, &fr.e3, &fr.e4);
        betab[a] = 0.5 * contract4(&curv.riem, &e[a], &fr.e3, &fr.e3, &fr.e4);
    }
    let rho = 0.25 * contract4(&curv.riem, &fr.e3, &fr.e4, &fr.e3, &fr.e4);
    let rho_star = 0.25 * contract4(&curv.riem_dual, &fr.e3, &fr.e4, &fr.e3, &fr.e4);
    CurvatureComponents {
        alpha,
        beta,
        rho,
        rho_star,
        betab,
        alphab,
    }
}

/// Convenience wrapper that assembles the curvature first.
pub fn curvature_components(
    params: KerrParams,
    p: &BLPoint,
    fr: &NullFrame,
) -> Result<CurvatureComponents> {
    let curv = curvature_at(params, p)?;
    Ok(curvature_components_from(&curv, fr))
}

/// The canonical complex 1-form J in the principal (e1, e2) basis:
/// J_1 = i sin(theta)/|q|, J_2 = sin(theta)/|q|. Regular at the axis even
/// though the basis is not.
pub fn jk_form(params: KerrParams, r: f64, theta: f64) -> [Complex64; 2] {
    let s = aux_scalars(params, r, theta);
    let q = s.q_norm_sq.sqrt();
    let sin = theta.sin();
    [
        Complex64::new(0.0, sin / q),
        Complex64::new(sin / q, 0.0),
    ]
}

/// Exact Kerr values of the non-vanishing complexified quantities in the
/// principal null frame:
///   P = -2m/q^3, tr X = (2/q)(Delta/|q|^2), tr Xb = -2/conj(q),
///   Z = H = (a q/|q|^2) J, Hb = -(a conj(q)/|q|^2) J.
#[derive(Clone, Copy, Debug)]
pub struct KerrTable {
    pub p: Complex64,
    pub tr_x: Complex64,
    pub tr_xb: Complex64,
    pub z: [Complex64; 2],
    pub h: [Complex64; 2],
    pub hb: [Complex64; 2],
}

pub fn kerr_table(params: KerrParams, r: f64, theta: f64) -> KerrTable {
    let s = aux_scalars(params, r, theta);
    let a = params.spin();
    let m = params.mass();
    let q = s.q;
    let jk = jk_form(params, r, theta);
    let zf = a * q / s.q_norm_sq;
    let hbf = -a * q.conj() / s.q_norm_sq;
    KerrTable {
        p: -2.0 * m / (q * q * q),
        tr_x: 2.0 / q * (s.delta / s.q_norm_sq),
        tr_xb: -2.0 / q.conj(),
        z: [zf * jk[0], zf * jk[1]],
        h: [zf * jk[0], zf * jk[1]],
        hb: [hbf * jk[0], hbf * jk[1]],
    }
}

/// Renormalized (checked) quantities: measured values minus their exact Kerr
/// counterparts built from (a, m, r, theta) and the supplied J.
#[derive(Clone, Copy, Debug)]
pub struct CheckedQuantities {
    pub p_check: Complex64,
    pub tr_x_check: Complex64,
    pub tr_xb_check: Complex64,
    pub z_check: [Complex64; 2],
    pub h_check: [Complex64; 2],
    pub hb_check: [Complex64; 2],
}

impl CheckedQuantities {
    /// Largest modulus over all checked entries.
    pub fn max_norm(&self) -> f64 {
        let mut m = self.p_check.norm();
        m = m.max(self.tr_x_check.norm());
        m = m.max(self.tr_xb_check.norm());
        for i in 0..2 {
            m = m.max(self.z_check[i].norm());
            m = m.max(self.h_check[i].norm());
            m = m.max(self.hb_check[i].norm());
        }
        m
    }
}

pub fn renormalize(
    rc: &RicciCoefficients,
    cc: &CurvatureComponents,
    params: KerrParams,
    r: f64,
    theta: f64,
    jk: &[Complex64; 2],
) -> CheckedQuantities {
    let s = aux_scalars(params, r, theta);
    let a = params.spin();
    let m = params.mass();
    let q = s.q;
    let zf = a * q / s.q_norm_sq;
    let hbf = -a * q.conj() / s.q_norm_sq;
    let sub2 = |u: [Complex64; 2], f: Complex64| [u[0] - f * jk[0], u[1] - f * jk[1]];
    CheckedQuantities {
        p_check: cc.big_p() + 2.0 * m / (q * q * q),
        tr_x_check: rc.tr_x() - 2.0 / q * (s.delta / s.q_norm_sq),
        tr_xb_check: rc.tr_xb() + 2.0 / q.conj(),
        z_check: sub2(rc.z(), zf),
        h_check: sub2(rc.h(), zf),
        hb_check: sub2(rc.hb(), hbf),
    }
}
