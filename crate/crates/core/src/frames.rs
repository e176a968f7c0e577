//! Principal null frames of the Kerr exterior, the general 5-parameter
//! frame transformation, its numerical inverse, the PG rescaling, and the
//! integrability defect of the horizontal distribution.

use crate::diffgeo::{christoffel_jets, value4x4, MetricJets};
use crate::error::{KerrError, Result};
use crate::jet::{coordinate_jets, Jet};
use crate::kerr::{check_exterior, check_off_axis, metric, BLPoint, KerrParams, PH, R, T, TH};

/// An ordered null frame (e4, e3, e1, e2) of contravariant BL components.
///
/// Invariants (up to rounding): g(e4,e4) = g(e3,e3) = 0, g(e3,e4) = -2,
/// g(ea,eb) = delta_ab, g(ea,e3) = g(ea,e4) = 0.
#[derive(Clone, Copy, Debug)]
pub struct NullFrame {
    pub e4: [f64; 4],
    pub e3: [f64; 4],
    pub e1: [f64; 4],
    pub e2: [f64; 4],
}

impl NullFrame {
    pub fn vectors(&self) -> [[f64; 4]; 4] {
        [self.e4, self.e3, self.e1, self.e2]
    }

    pub fn horizontal(&self, a: usize) -> [f64; 4] {
        if a == 0 {
            self.e1
        } else {
            self.e2
        }
    }
}

/// The same frame with each component carried as a jet field, for
/// derivative-taking.
#[derive(Clone, Copy)]
pub struct FrameJets {
    pub e4: [Jet; 4],
    pub e3: [Jet; 4],
    pub e1: [Jet; 4],
    pub e2: [Jet; 4],
}

impl FrameJets {
    pub fn values(&self) -> NullFrame {
        let v = |comp: &[Jet; 4]| [comp[0].value(), comp[1].value(), comp[2].value(), comp[3].value()];
        NullFrame {
            e4: v(&self.e4),
            e3: v(&self.e3),
            e1: v(&self.e1),
            e2: v(&self.e2),
        }
    }

    pub fn horizontal(&self, a: usize) -> [Jet; 4] {
        if a == 0 {
            self.e1
        } else {
            self.e2
        }
    }
}

/// Principal null frame components as jet fields at truncation `order`:
///   e4 = ((r^2+a^2) dt + Delta dr + a dphi) / |q|^2
///   e3 = ((r^2+a^2) dt - Delta dr + a dphi) / Delta
///   e1 = dtheta / |q|
///   e2 = (a sin(theta) dt + dphi / sin(theta)) / |q|
pub fn principal_frame_jets(params: KerrParams, p: &BLPoint, order: usize) -> Result<FrameJets> {
    check_exterior(params, p)?;
    check_off_axis(p)?;
    let a = params.spin();
    let m = params.mass();
    let coords = coordinate_jets(p.t, p.r, p.theta, p.phi, order);
    let r = coords[R];
    let theta = coords[TH];
    let zero = Jet::constant(0.0, order);

    let cos = theta.cos();
    let sin = theta.sin();
    let r2 = r * r;
    let q2 = r2 + (cos * cos).scaled(a * a);
    let delta = r2 - r.scaled(2.0 * m) + a * a;
    let ra = r2 + a * a;
    let inv_q2 = q2.recip();
    let inv_delta = delta.recip();
    let inv_q = q2.sqrt().recip();

    let mut e4 = [zero; 4];
    e4[T] = ra * inv_q2;
    e4[R] = delta * inv_q2;
    e4[PH] = inv_q2.scaled(a);

    let mut e3 = [zero; 4];
    e3[T] = ra * inv_delta;
    e3[R] = Jet::constant(-1.0, order);
    e3[PH] = inv_delta.scaled(a);

    let mut e1 = [zero; 4];
    e1[TH] = inv_q;

    let mut e2 = [zero; 4];
    e2[T] = (sin * inv_q).scaled(a);
    e2[PH] = inv_q * sin.recip();

    Ok(FrameJets { e4, e3, e1, e2 })
}

/// Principal null frame values at a point.
pub fn principal_frame(params: KerrParams, p: &BLPoint) -> Result<NullFrame> {
    Ok(principal_frame_jets(params, p, 0)?.values())
}

/// PG-normalized frame: the principal frame boosted by lambda = |q|^2/Delta,
/// so that e4(r) = 1 and e4(theta) = 0.
pub fn pg_frame_jets(params: KerrParams, p: &BLPoint, order: usize) -> Result<FrameJets> {
    let base = principal_frame_jets(params, p, order)?;
    let a = params.spin();
    let m = params.mass();
    let coords = coordinate_jets(p.t, p.r, p.theta, p.phi, order);
    let r = coords[R];
    let cos = coords[TH].cos();
    let q2 = r * r + (cos * cos).scaled(a * a);
    let delta = r * r - r.scaled(2.0 * m) + a * a;
    let lam = q2 / delta;
    let inv_lam = delta / q2;
    let scale = |v: &[Jet; 4], s: Jet| -> [Jet; 4] { [v[0] * s, v[1] * s, v[2] * s, v[3] * s] };
    Ok(FrameJets {
        e4: scale(&base.e4, lam),
        e3: scale(&base.e3, inv_lam),
        e1: base.e1,
        e2: base.e2,
    })
}

pub fn pg_normalized_frame(params: KerrParams, p: &BLPoint) -> Result<NullFrame> {
    Ok(pg_frame_jets(params, p, 0)?.values())
}

/// The general null-frame transformation: two horizontal 1-forms f, fbar in
/// the (e1, e2) basis of the input frame and a positive boost lambda.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameTransform {
    pub f: [f64; 2],
    pub fbar: [f64; 2],
    pub lambda: f64,
}

impl FrameTransform {
    pub fn identity() -> Self {
        FrameTransform {
            f: [0.0, 0.0],
            fbar: [0.0, 0.0],
            lambda: 1.0,
        }
    }

    pub fn boost(lambda: f64) -> Self {
        FrameTransform {
            f: [0.0, 0.0],
            fbar: [0.0, 0.0],
            lambda,
        }
    }
}

fn axpy(out: &mut [f64; 4], c: f64, v: &[f64; 4]) {
    for i in 0..4 {
        out[i] += c * v[i];
    }
}

/// Applies the transformation
///   e4' = lambda (e4 + f^b e_b + 1/4 |f|^2 e3)
///   e_a' = (delta_a^b + 1/2 fbar_a f^b) e_b + 1/2 fbar_a e4
///          + (1/2 f_a + 1/8 |f|^2 fbar_a) e3
///   e3' = lambda^-1 ((1 + 1/2 f.fbar + 1/16 |f|^2 |fbar|^2) e3
///          + (fbar^b + 1/4 |fbar|^2 f^b) e_b + 1/4 |fbar|^2 e4)
pub fn transform_frame(frame: &NullFrame, x: &FrameTransform) -> Result<NullFrame> {
    if x.lambda <= 0.0 {
        return Err(KerrError::NonPositiveBoost(x.lambda));
    }
    let f = x.f;
    let fb = x.fbar;
    let lam = x.lambda;
    let f2 = f[0] * f[0] + f[1] * f[1];
    let fb2 = fb[0] * fb[0] + fb[1] * fb[1];
    let fdfb = f[0] * fb[0] + f[1] * fb[1];

    let mut e4 = [0.0; 4];
    axpy(&mut e4, 1.0, &frame.e4);
    axpy(&mut e4, f[0], &frame.e1);
    axpy(&mut e4, f[1], &frame.e2);
    axpy(&mut e4, 0.25 * f2, &frame.e3);
    for v in e4.iter_mut() {
        *v *= lam;
    }

    let mut horiz = [[0.0; 4]; 2];
    for a in 0..2 {
        let mut ea = [0.0; 4];
        axpy(&mut ea, 1.0, &frame.horizontal(a));
        axpy(&mut ea, 0.5 * fb[a] * f[0], &frame.e1);
        axpy(&mut ea, 0.5 * fb[a] * f[1], &frame.e2);
        axpy(&mut ea, 0.5 * fb[a], &frame.e4);
        axpy(&mut ea, 0.5 * f[a] + 0.125 * f2 * fb[a], &frame.e3);
        horiz[a] = ea;
    }

    let mut e3 = [0.0; 4];
    axpy(&mut e3, 1.0 + 0.5 * fdfb + f2 * fb2 / 16.0, &frame.e3);
    axpy(&mut e3, fb[0] + 0.25 * fb2 * f[0], &frame.e1);
    axpy(&mut e3, fb[1] + 0.25 * fb2 * f[1], &frame.e2);
    axpy(&mut e3, 0.25 * fb2, &frame.e4);
    for v in e3.iter_mut() {
        *v /= lam;
    }

    Ok(NullFrame {
        e4,
        e3,
        e1: horiz[0],
        e2: horiz[1],
    })
}

/// Inner product of two vectors under a covariant metric.
pub fn dot(g: &[[f64; 4]; 4], u: &[f64; 4], v: &[f64; 4]) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            s += g[i][j] * u[i] * v[j];
        }
    }
    s
}

/// Deviations of the ten frame inner products from their target values.
/// Order: (44, 33, 34, 11, 22, 12, 13, 14, 23, 24).
pub fn frame_invariant_defects(g: &[[f64; 4]; 4], fr: &NullFrame) -> [f64; 10] {
    [
        dot(g, &fr.e4, &fr.e4),
        dot(g, &fr.e3, &fr.e3),
        dot(g, &fr.e3, &fr.e4) + 2.0,
        dot(g, &fr.e1, &fr.e1) - 1.0,
        dot(g, &fr.e2, &fr.e2) - 1.0,
        dot(g, &fr.e1, &fr.e2),
        dot(g, &fr.e1, &fr.e3),
        dot(g, &fr.e1, &fr.e4),
        dot(g, &fr.e2, &fr.e3),
        dot(g, &fr.e2, &fr.e4),
    ]
}

/// Largest absolute invariant defect.
pub fn max_invariant_defect(g: &[[f64; 4]; 4], fr: &NullFrame) -> f64 {
    frame_invariant_defects(g, fr)
        .iter()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Numerical inverse of a frame transformation at a point.
///
/// Reads the boost and f off the contractions of the base frame against the
/// primed frame, then solves the remaining 2x2 system for fbar by fixed
/// point, which contracts precisely in the perturbative regime |f||fbar| < 1.
/// The round trip reproduces the null pair e3, e4 of the original frame; the
/// horizontal pair is recovered up to the rotation by roughly
/// (f1 fbar2 - f2 fbar1)/2 that the 5-parameter family cannot represent
/// (B o Nbar o N products are not closed under inversion), so the
/// componentwise residual of a full round trip stalls at that floor and the
/// solve reports failure when asked for more.
pub fn invert_transform(
    params: KerrParams,
    p: &BLPoint,
    frame: &NullFrame,
    x: &FrameTransform,
) -> Result<FrameTransform> {
    let g = metric(params, p)?.g;
    let primed = transform_frame(frame, x)?;

    // lambda' and f' from contractions of the target e4 (= frame.e4) against
    // the primed frame: g(e4, e3') = -2 lambda', g(e4, e_a') = lambda' f'_a.
    let lam = -0.5 * dot(&g, &frame.e4, &primed.e3);
    if lam <= 0.0 {
        return Err(KerrError::NonPositiveBoost(lam));
    }
    let f = [
        dot(&g, &frame.e4, &primed.e1) / lam,
        dot(&g, &frame.e4, &primed.e2) / lam,
    ];
    // fbar' from g(e3, e_a') = lambda'^-1 (fbar'_a + 1/4 |fbar'|^2 f'_a)
    let u = [
        lam * dot(&g, &frame.e3, &primed.e1),
        lam * dot(&g, &frame.e3, &primed.e2),
    ];
    let mut fb = u;
    let mut converged = false;
    for _ in 0..200 {
        let fb2 = fb[0] * fb[0] + fb[1] * fb[1];
        let next = [u[0] - 0.25 * fb2 * f[0], u[1] - 0.25 * fb2 * f[1]];
        let step = ((next[0] - fb[0]).powi(2) + (next[1] - fb[1]).powi(2)).sqrt();
        fb = next;
        if step < 1e-15 {
            converged = true;
            break;
        }
    }
    let inv = FrameTransform { f, fbar: fb, lambda: lam };
    if !converged {
        let back = transform_frame(&primed, &inv)?;
        let mut res: f64 = 0.0;
        for (got, want) in back.vectors().iter().zip(frame.vectors().iter()) {
            for (x1, x2) in got.iter().zip(want.iter()) {
                res = res.max((x1 - x2).abs());
            }
        }
        return Err(KerrError::InversionStalled { residual: res });
    }
    Ok(inv)
}

/// Commutator defect of the horizontal distribution:
/// d3 = -1/2 g([e1,e2], e4), d4 = -1/2 g([e1,e2], e3).
/// Both vanish iff the distribution is integrable at the point.
pub fn integrability_defect(params: KerrParams, p: &BLPoint) -> Result<(f64, f64)> {
    let fj = principal_frame_jets(params, p, 1)?;
    let g = metric(params, p)?.g;
    let lie = commutator(&fj.e1, &fj.e2);
    let fr = fj.values();
    Ok((
        -0.5 * dot(&g, &lie, &fr.e4),
        -0.5 * dot(&g, &lie, &fr.e3),
    ))
}

/// [X, Y]^mu = X^nu d_nu Y^mu - Y^nu d_nu X^mu, evaluated at the base point.
pub fn commutator(x: &[Jet; 4], y: &[Jet; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for mu in 0..4 {
        let mut s = 0.0;
        for nu in 0..4 {
            s += x[nu].value() * y[mu].partial(nu).value()
                - y[nu].value() * x[mu].partial(nu).value();
        }
        out[mu] = s;
    }
    out
}

/// Covariant derivative of a jet vector field along a direction with known
/// components: (D_X Y)^mu = X^nu (d_nu Y^mu + Gamma^mu_{nu s} Y^s).
pub fn directional_derivative(
    gamma: &[[[f64; 4]; 4]; 4],
    x: &[f64; 4],
    y: &[Jet; 4],
) -> [f64; 4] {
    let mut out = [0.0; 4];
    for mu in 0..4 {
        let mut s = 0.0;
        for nu in 0..4 {
            if x[nu] == 0.0 {
                continue;
            }
            let mut d = y[mu].partial(nu).value();
            for sg in 0..4 {
                d += gamma[mu][nu][sg] * y[sg].value();
            }
            s += x[nu] * d;
        }
        out[mu] = s;
    }
    out
}

/// Residual of the PG transport condition nabla_4 (q J) on the PG frame.
pub fn pg_transport_defect(params: KerrParams, p: &BLPoint) -> Result<f64> {
    let fj = pg_frame_jets(params, p, 1)?;
    transport_defect(params, p, &fj)
}

/// Horizontal transport residual nabla_4 (q J) for a given frame, where J is
/// the canonical complex 1-form in the frame's (e1, e2) basis. Returns the
/// max norm over the two complexified components. The condition is invariant
/// under boosts of e4, so the principal and PG frames share the value.
pub fn transport_defect(params: KerrParams, p: &BLPoint, fj: &FrameJets) -> Result<f64> {
    use num_complex::Complex64;
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
    let fr = fj.values();
    let g = value4x4(&mj.g);

    // q J as a complex function of (r, theta); components in the frame basis
    let a = params.spin();
    let coords = coordinate_jets(p.t, p.r, p.theta, p.phi, 1);
    let r = coords[R];
    let theta = coords[TH];
    let sin = theta.sin();
    let q2 = r * r + (theta.cos() * theta.cos()).scaled(a * a);
    let qj_re = [-(theta.cos() * sin * q2.sqrt().recip()).scaled(a), sin * r * q2.sqrt().recip()];
    let qj_im = [r * sin * q2.sqrt().recip(), (theta.cos() * sin * q2.sqrt().recip()).scaled(a)];
    // (q J)_1 = q * i sin/|q| = i r sin/|q| - a cos sin/|q|
    // (q J)_2 = q * sin/|q|   = r sin/|q| + i a cos sin/|q|

    // horizontal connection along e4: Lam_ab = g(D_4 e_a, e_b)
    let d4e1 = directional_derivative(&gamma, &fr.e4, &fj.e1);
    let d4e2 = directional_derivative(&gamma, &fr.e4, &fj.e2);
    let lam = [
        [dot(&g, &d4e1, &fr.e1), dot(&g, &d4e1, &fr.e2)],
        [dot(&g, &d4e2, &fr.e1), dot(&g, &d4e2, &fr.e2)],
    ];

    // e4(U_a) - Lam_ab U_b, complexified
    let e4_of = |jet: &Jet| -> f64 {
        let mut s = 0.0;
        for nu in 0..4 {
            s += fr.e4[nu] * jet.partial(nu).value();
        }
        s
    };
    let u = [
        Complex64::new(qj_re[0].value(), qj_im[0].value()),
        Complex64::new(qj_re[1].value(), qj_im[1].value()),
    ];
    let mut worst: f64 = 0.0;
    for a_idx in 0..2 {
        let du = Complex64::new(
            e4_of(if a_idx == 0 { &qj_re[0] } else { &qj_re[1] }),
            e4_of(if a_idx == 0 { &qj_im[0] } else { &qj_im[1] }),
        );
        let conn = lam[a_idx][0] * u[0] + lam[a_idx][1] * u[1];
        worst = worst.max((du - conn).norm());
    }
    Ok(worst)
}
