//! The Carter Killing tensor C = -a^2 cos^2(theta) g + |q|^2 (e1 (x) e1 + e2 (x) e2)
//! and the second-order Carter operator C = D_a (C^{ab} D_b), with residual
//! checks for the Killing-tensor equation and the commutation with the wave
//! operator.

use crate::diffgeo::{christoffel_jets, wave_operator_jet, MetricJets, ScalarField};
use crate::error::{KerrError, Result};
use crate::jet::{coordinate_jets, Jet};
use crate::kerr::{BLPoint, KerrParams, PH, R, T, TH};

/// Carter tensor at a point: covariant components and the contravariant form
/// raised with the metric.
#[derive(Clone, Copy, Debug)]
pub struct CarterTensorAt {
    pub c: [[f64; 4]; 4],
    pub c_up: [[f64; 4]; 4],
}

/// Covariant Carter tensor entries as jets. The defining expression is
/// type-covariant: raising it term by term gives the same contravariant
/// tensor, so the index placement ambiguity is immaterial.
pub fn carter_jets(params: KerrParams, p: &BLPoint, order: usize) -> Result<[[Jet; 4]; 4]> {
    let mj = MetricJets::new(params, p, order)?;
    carter_jets_from(params, p, &mj, order)
}

fn carter_jets_from(
    params: KerrParams,
    p: &BLPoint,
    mj: &MetricJets,
    order: usize,
) -> Result<[[Jet; 4]; 4]> {
    let a = params.spin();
    let coords = coordinate_jets(p.t, p.r, p.theta, p.phi, order);
    let cos = coords[TH].cos();
    let r = coords[R];
    let q2 = r * r + (cos * cos).scaled(a * a);
    let prefac = -(cos * cos).scaled(a * a);

    // e1, e2 lowered with g; built from closed forms so the axis limit of the
    // coordinate components stays finite (|q| e1_flat = |q| dtheta etc.)
    let frame = principal_frame_like_covectors(params, &coords, mj, order);

    let mut c = [[Jet::constant(0.0, order); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = prefac * mj.g[i][j]
                + q2 * (frame.0[i] * frame.0[j] + frame.1[i] * frame.1[j]);
        }
    }
    Ok(c)
}

/// Metric duals of the canonical horizontal basis: e1_flat = |q| dtheta and
/// e2_flat = (g . e2). Multiplying out the 1/sin(theta) lets every component
/// extend smoothly to the axis.
fn principal_frame_like_covectors(
    params: KerrParams,
    coords: &[Jet; 4],
    mj: &MetricJets,
    order: usize,
) -> ([Jet; 4], [Jet; 4]) {
    let a = params.spin();
    let r = coords[R];
    let theta = coords[TH];
    let sin = theta.sin();
    let cos = theta.cos();
    let q2 = r * r + (cos * cos).scaled(a * a);
    let q = q2.sqrt();
    let zero = Jet::constant(0.0, order);

    let mut e1_flat = [zero; 4];
    e1_flat[TH] = q;

    // e2 = (a sin dt + dphi/sin)/|q|; lower with g. The t and phi columns of
    // g are proportional to sin^2, so e2_flat is regular on the axis.
    let inv_q = q.recip();
    let mut e2_flat = [zero; 4];
    for mu in [T, PH] {
        // g_{mu t} * a sin / |q| + g_{mu phi} / (|q| sin)
        let g_t = mj.g[mu][T];
        let g_ph = mj.g[mu][PH];
        e2_flat[mu] = (g_t * sin).scaled(a) * inv_q + g_ph * sin.recip() * inv_q;
    }
    (e1_flat, e2_flat)
}

/// Carter tensor values with both index placements.
pub fn carter_tensor(params: KerrParams, p: &BLPoint) -> Result<CarterTensorAt> {
    let mj = MetricJets::new(params, p, 0)?;
    let cj = carter_jets_from(params, p, &mj, 0)?;
    let mut c = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = cj[i][j].value();
        }
    }
    let ginv = crate::diffgeo::value4x4(&mj.g_inv);
    let mut c_up = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0.0;
            for k in 0..4 {
                for l in 0..4 {
                    s += ginv[i][k] * ginv[j][l] * c[k][l];
                }
            }
            c_up[i][j] = s;
        }
    }
    Ok(CarterTensorAt { c, c_up })
}

/// Max over (gamma, alpha, beta) of |D_(gamma C_alpha beta)| normalized by
/// max|C|/r.
pub fn killing_tensor_residual(params: KerrParams, p: &BLPoint) -> Result<f64> {
    let mj = MetricJets::new(params, p, 2)?;
    let cj = carter_jets_from(params, p, &mj, 1)?;
    let gamma_j = christoffel_jets(&mj);
    killing_tensor_residual_of(&cj, &gamma_j, p)
}

/// Same residual for an arbitrary symmetric 2-tensor given as order-1 jets;
/// used by the deliberate-violation control test.
pub fn killing_tensor_residual_of(
    cj: &[[Jet; 4]; 4],
    gamma_j: &[[[Jet; 4]; 4]; 4],
    p: &BLPoint,
) -> Result<f64> {
    let mut c = [[0.0; 4]; 4];
    let mut scale: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = cj[i][j].value();
            scale = scale.max(c[i][j].abs());
        }
    }
    // D_g C_ab = d_g C_ab - Gamma^s_{g a} C_sb - Gamma^s_{g b} C_as
    let mut dc = [[[0.0; 4]; 4]; 4];
    for g in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                let mut v = cj[a][b].partial(g).value();
                for s in 0..4 {
                    v -= gamma_j[s][g][a].value() * c[s][b] + gamma_j[s][g][b].value() * c[a][s];
                }
                dc[g][a][b] = v;
            }
        }
    }
    let mut worst: f64 = 0.0;
    for g in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                let sym = (dc[g][a][b] + dc[a][b][g] + dc[b][g][a]) / 3.0;
                worst = worst.max(sym.abs());
            }
        }
    }
    Ok(worst / (scale / p.r))
}

/// Carter operator applied to a scalar-field jet:
/// C psi = (1/sqrt|g|) d_a ( sqrt|g| C^{ab} d_b psi ).
/// Returns a jet two orders below the inputs.
pub fn carter_operator_jet(
    params: KerrParams,
    p: &BLPoint,
    mj: &MetricJets,
    psi: &Jet,
) -> Result<Jet> {
    // the divergence form needs metric and Carter jets only one order below psi
    let order = psi.order().min(mj.order + 1);
    if order < 2 {
        return Err(KerrError::JetOrder {
            need: 2,
            have: order,
        });
    }
    let out_order = order - 2;
    let cj = carter_jets_from(params, p, mj, order - 1)?;
    // raise indices with jets
    let mut c_up = [[Jet::constant(0.0, order - 1); 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let mut s = Jet::constant(0.0, order - 1);
            for k in 0..4 {
                for l in 0..4 {
                    let c = cj[k][l];
                    if c.value() == 0.0 && c.partial_max() == 0.0 {
                        continue;
                    }
                    s += mj.g_inv[i][k].truncated(order - 1)
                        * mj.g_inv[j][l].truncated(order - 1)
                        * c;
                }
            }
            c_up[i][j] = s;
            c_up[j][i] = s;
        }
    }
    let mut div = Jet::constant(0.0, out_order);
    for a in 0..4 {
        let mut flux = Jet::constant(0.0, order - 1);
        for b in 0..4 {
            let cab = c_up[a][b];
            if cab.value() == 0.0 && cab.partial_max() == 0.0 {
                continue;
            }
            flux += mj.vol.truncated(order - 1) * cab * psi.partial(b).truncated(order - 1);
        }
        div += flux.partial(a).truncated(out_order);
    }
    Ok(div / mj.vol.truncated(out_order))
}

/// Carter operator at a point for fields with at least two derivative orders.
pub fn carter_operator_apply(params: KerrParams, psi: &ScalarField, p: &BLPoint) -> Result<f64> {
    let mj = MetricJets::new(params, p, 3)?;
    let coords = coordinate_jets(p.t, p.r, p.theta, p.phi, 3);
    let psi_jet = psi(&coords);
    Ok(carter_operator_jet(params, p, &mj, &psi_jet)?.value())
}

/// |(C box - box C) psi| normalized by the largest intermediate term.
/// Fourth-order jets keep the only error source at rounding level.
pub fn commutator_residual(params: KerrParams, psi: &ScalarField, p: &BLPoint) -> Result<f64> {
    let mj = MetricJets::new(params, p, 3)?;
    let coords = coordinate_jets(p.t, p.r, p.theta, p.phi, 4);
    let psi_jet = psi(&coords);
    if psi_jet.order() < 4 {
        return Err(KerrError::JetOrder {
            need: 4,
            have: psi_jet.order(),
        });
    }
    let box_psi = wave_operator_jet(&mj, &psi_jet)?; // order 2
    let carter_box = carter_operator_jet(params, p, &mj, &box_psi)?.value();
    let carter_psi = carter_operator_jet(params, p, &mj, &psi_jet)?; // order 2
    let box_carter = wave_operator_jet(&mj, &carter_psi)?.value();
    let scale = carter_box.abs().max(box_carter.abs()).max(f64::MIN_POSITIVE);
    Ok((carter_box - box_carter).abs() / scale)
}

/// Analytic test fields for the commutator suite: products of Gaussians,
/// polynomials and trigonometric factors, smooth on the exterior.
pub fn test_field_catalogue() -> Vec<(&'static str, Box<ScalarField>)> {
    let fields: Vec<(&'static str, Box<ScalarField>)> = vec![
        (
            "gaussian_r_cos_theta_cos_t",
            Box::new(|c: &[Jet; 4]| {
                let r = c[R];
                let u = (r - 4.0).scaled(0.5);
                (-(u * u)).exp() * c[TH].cos() * c[T].scaled(0.3).cos()
            }),
        ),
        (
            "poly_r_sin_theta_sin_phi",
            Box::new(|c: &[Jet; 4]| {
                let r = c[R];
                (r * r + r.scaled(2.0)) * c[TH].sin() * c[PH].sin()
            }),
        ),
        (
            "exp_decay_r_axisym",
            Box::new(|c: &[Jet; 4]| {
                let r = c[R];
                (-r.scaled(0.25)).exp() * (c[TH].cos() * c[TH].cos() + 1.0)
            }),
        ),
        (
            "time_gaussian_mode",
            Box::new(|c: &[Jet; 4]| {
                let t = c[T];
                let r = c[R];
                (-(t * t).scaled(0.1)).exp() * r.recip() * c[TH].sin() * c[PH].cos()
            }),
        ),
        (
            "oscillatory_r_t",
            Box::new(|c: &[Jet; 4]| {
                let r = c[R];
                (r.scaled(0.8)).sin() * (c[T].scaled(0.5)).cos() * c[TH].cos()
            }),
        ),
        (
            "rational_r_theta",
            Box::new(|c: &[Jet; 4]| {
                let r = c[R];
                (r * r + 1.0).recip() * c[TH].sin() * c[TH].cos()
            }),
        ),
    ];
    fields
}
