//! Verification suites: each produces one report row per check per sample,
//! in deterministic order.

use kerr_core::carter::{commutator_residual, killing_tensor_residual, test_field_catalogue};
use kerr_core::diffgeo::{killing_residual, ricci_residual, CoordinateField};
use kerr_core::frames::{
    integrability_defect, invert_transform, max_invariant_defect, principal_frame,
    principal_frame_jets, transform_frame,
};
use kerr_core::gcm::{ell1_modes, isothermal_fit, kerr_sphere_metric};
use kerr_core::horizontal::{
    curvature_components, jk_form, kerr_table, renormalize, ricci_coefficients,
};
use kerr_core::kerr::{aux_scalars, metric, sigma_sq_alt, BLPoint, KerrParams};
use kerr_core::Result;

use crate::config::RunConfig;
use crate::report::ReportRow;

pub const SUITE_NAMES: [&str; 12] = [
    "sigma2",
    "ricci-flat",
    "killing",
    "metric-inverse",
    "kerr-table",
    "renormalization",
    "frame-invariants",
    "transform-roundtrip",
    "carter-killing",
    "carter-commutator",
    "integrability",
    "gcm",
];

pub fn known_suite(name: &str) -> bool {
    SUITE_NAMES.contains(&name)
}

/// Runs the selected suites over the configured sample; rows come back in
/// suite order, then sample order.
pub fn run(config: &RunConfig, selected: &[String]) -> Result<Vec<ReportRow>> {
    let spec = config.sample.to_spec();
    let points = kerr_core::sampler::sample_points(&spec)?;
    let transforms = kerr_core::sampler::sample_transforms(&config.transforms.to_spec());
    let cap = config.verify.heavy_cap.max(1);

    let want = |name: &str| selected.is_empty() || selected.iter().any(|s| s == name);
    let mut rows = Vec::new();

    if want("sigma2") {
        for (params, p) in &points {
            let s = aux_scalars(*params, p.r, p.theta);
            let alt = sigma_sq_alt(*params, p.r, p.theta);
            rows.push(ReportRow::new(
                "sigma2",
                *params,
                *p,
                (s.sigma_sq - alt).abs() / s.sigma_sq,
                1e-12,
            ));
        }
    }

    if want("ricci-flat") {
        for (params, p) in &points {
            rows.push(ReportRow::new(
                "ricci-flat",
                *params,
                *p,
                ricci_residual(*params, p)?,
                1e-8,
            ));
        }
    }

    if want("killing") {
        for (params, p) in &points {
            let g = metric(*params, p)?.g;
            let scale = g
                .iter()
                .flatten()
                .fold(0.0f64, |acc, v| acc.max(v.abs()));
            for (tag, field) in [
                ("killing-t", CoordinateField::Stationary),
                ("killing-z", CoordinateField::Axial),
            ] {
                let lie = killing_residual(*params, &field.as_field(), p)?;
                let worst = lie
                    .iter()
                    .flatten()
                    .fold(0.0f64, |acc, v| acc.max(v.abs()));
                rows.push(ReportRow::new(tag, *params, *p, worst / scale, 1e-12));
            }
        }
    }

    if want("metric-inverse") {
        for (params, p) in &points {
            let m = metric(*params, p)?;
            rows.push(ReportRow::new(
                "metric-inverse",
                *params,
                *p,
                m.inverse_defect(),
                1e-12,
            ));
        }
    }

    if want("kerr-table") {
        for (params, p) in &points {
            let fj = principal_frame_jets(*params, p, 1)?;
            let rc = ricci_coefficients(*params, p, &fj)?;
            let cc = curvature_components(*params, p, &fj.values())?;
            let table = kerr_table(*params, p.r, p.theta);
            let p_scale = table.p.norm();
            let mut vanishing: f64 = 0.0;
            for row in cc.big_a().iter().chain(cc.big_ab().iter()) {
                for v in row {
                    vanishing = vanishing.max(v.norm());
                }
            }
            for v in cc.big_b().iter().chain(cc.big_bb().iter()) {
                vanishing = vanishing.max(v.norm());
            }
            for row in rc.x_hat().iter().chain(rc.xb_hat().iter()) {
                for v in row {
                    vanishing = vanishing.max(v.norm());
                }
            }
            rows.push(ReportRow::new(
                "kerr-table-vanishing",
                *params,
                *p,
                vanishing / p_scale,
                1e-10,
            ));
            let jk_scale = table.hb[0].norm().max(table.hb[1].norm()).max(p_scale);
            let mut closed = (cc.big_p() - table.p).norm() / p_scale;
            closed = closed.max((rc.tr_x() - table.tr_x).norm() / table.tr_x.norm());
            closed = closed.max((rc.tr_xb() - table.tr_xb).norm() / table.tr_xb.norm());
            for i in 0..2 {
                closed = closed.max((rc.z()[i] - table.z[i]).norm() / jk_scale);
                closed = closed.max((rc.h()[i] - table.h[i]).norm() / jk_scale);
                closed = closed.max((rc.hb()[i] - table.hb[i]).norm() / jk_scale);
            }
            rows.push(ReportRow::new(
                "kerr-table-closed",
                *params,
                *p,
                closed,
                1e-10,
            ));
        }
    }

    if want("renormalization") {
        for (params, p) in &points {
            let fj = principal_frame_jets(*params, p, 1)?;
            let rc = ricci_coefficients(*params, p, &fj)?;
            let cc = curvature_components(*params, p, &fj.values())?;
            let jk = jk_form(*params, p.r, p.theta);
            let checked = renormalize(&rc, &cc, *params, p.r, p.theta, &jk);
            let scale = kerr_table(*params, p.r, p.theta).p.norm();
            rows.push(ReportRow::new(
                "renormalization",
                *params,
                *p,
                checked.max_norm() / scale,
                1e-10,
            ));
        }
    }

    // every (len/20)-th point: a 20-point cross-parameter subset
    let stride = (points.len() / 20).max(1);
    let frame_points: Vec<(KerrParams, BLPoint)> = points.iter().step_by(stride).copied().collect();

    if want("frame-invariants") {
        for (params, p) in &frame_points {
            let g = metric(*params, p)?.g;
            let base = principal_frame(*params, p)?;
            for (k, x) in transforms.iter().enumerate() {
                let fr = transform_frame(&base, x)?;
                let mut q = *p;
                q.phi += 1e-6 * k as f64; // distinguish rows per transform index
                rows.push(ReportRow::new(
                    "frame-invariants",
                    *params,
                    q,
                    max_invariant_defect(&g, &fr),
                    1e-10,
                ));
            }
        }
    }

    if want("transform-roundtrip") {
        for (params, p) in frame_points.iter().take(5) {
            let base = principal_frame(*params, p)?;
            let mut frame_scale: f64 = 0.0;
            for v in base.vectors().iter().flatten() {
                frame_scale = frame_scale.max(v.abs());
            }
            for (k, x) in transforms.iter().take(cap).enumerate() {
                let primed = transform_frame(&base, x)?;
                let residual = match invert_transform(*params, p, &base, x) {
                    Ok(inv) => {
                        let back = transform_frame(&primed, &inv)?;
                        let mut worst: f64 = 0.0;
                        for (got, want) in back.vectors().iter().zip(base.vectors().iter()) {
                            for (u, v) in got.iter().zip(want.iter()) {
                                worst = worst.max((u - v).abs() / frame_scale);
                            }
                        }
                        worst
                    }
                    Err(_) => f64::INFINITY,
                };
                let mut q = *p;
                q.phi += 1e-6 * k as f64;
                rows.push(ReportRow::new(
                    "transform-roundtrip",
                    *params,
                    q,
                    residual,
                    1e-9,
                ));
            }
        }
    }

    if want("carter-killing") {
        let stride = (points.len() / 600).max(1);
        for (params, p) in points.iter().step_by(stride) {
            rows.push(ReportRow::new(
                "carter-killing",
                *params,
                *p,
                killing_tensor_residual(*params, p)?,
                1e-8,
            ));
        }
    }

    if want("carter-commutator") {
        for (params, p) in frame_points.iter().take(cap) {
            for (name, field) in test_field_catalogue() {
                let res = commutator_residual(*params, field.as_ref(), p)?;
                rows.push(ReportRow::new(
                    format!("carter-commutator-{name}"),
                    *params,
                    *p,
                    res,
                    1e-6,
                ));
            }
        }
    }

    if want("integrability") {
        let stride = (points.len() / 1000).max(1);
        for (params, p) in points.iter().step_by(stride) {
            let (d3, d4) = integrability_defect(*params, p)?;
            let fj = principal_frame_jets(*params, p, 1)?;
            let rc = ricci_coefficients(*params, p, &fj)?;
            // cross-module agreement, both null weights
            let gap = (d3 - 0.5 * rc.atr_chi())
                .abs()
                .max((d4 - 0.5 * rc.atr_chib()).abs());
            rows.push(ReportRow::new("integrability-link", *params, *p, gap, 1e-10));
            if params.spin() == 0.0 {
                rows.push(ReportRow::new(
                    "integrability-zero",
                    *params,
                    *p,
                    d3.abs().max(d4.abs()),
                    1e-12,
                ));
            } else {
                // nonzero defect: closed form atrchib = 2 a cos(theta)/|q|^2,
                // so the residual compares against it
                let s = aux_scalars(*params, p.r, p.theta);
                let expect = 2.0 * params.spin() * p.theta.cos().abs() / s.q_norm_sq;
                if expect > 1e-8 {
                    rows.push(ReportRow::new(
                        "integrability-nonzero",
                        *params,
                        *p,
                        (2.0 * d4.abs() - expect).abs() / expect,
                        1e-9,
                    ));
                }
            }
        }
    }

    if want("gcm") {
        for &m in &config.sample.masses {
            for &q in &config.sample.a_over_m {
                let params = KerrParams::new(q * m, m)?;
                for &rm in &[3.0, 6.0] {
                    let r = rm * m;
                    let point = BLPoint::new(0.0, r, std::f64::consts::FRAC_PI_2, 0.0);
                    let (i0, ip, im) = ell1_modes(&|_, _| 1.0, params, r);
                    let scale = 4.0 * std::f64::consts::PI * r * r;
                    rows.push(ReportRow::new(
                        "ell1-modes-const",
                        params,
                        point,
                        i0.abs().max(ip.abs()).max(im.abs()) / scale,
                        1e-12,
                    ));
                    if params.spin() == 0.0 {
                        let (i0, _, _) = ell1_modes(&|th, _| th.cos(), params, r);
                        let expect = scale / 3.0;
                        rows.push(ReportRow::new(
                            "ell1-modes-cos",
                            params,
                            point,
                            (i0 - expect).abs() / expect,
                            1e-10,
                        ));
                    }
                }
                // isothermal fit at r = 3m
                let r = 3.0 * m;
                let fit = isothermal_fit(kerr_sphere_metric(params, r), r)?;
                let metric_fn = kerr_sphere_metric(params, r);
                let mut worst: f64 = 0.0;
                if params.spin() == 0.0 {
                    for k in 1..10 {
                        let th = std::f64::consts::PI * k as f64 / 10.0;
                        worst = worst
                            .max((fit.theta_prime(th) - th).abs())
                            .max(fit.conf_factor(th).abs());
                    }
                    rows.push(ReportRow::new(
                        "isothermal-identity",
                        params,
                        BLPoint::new(0.0, r, 0.0, 0.0),
                        worst,
                        1e-10,
                    ));
                } else {
                    for k in 1..10 {
                        let th = std::f64::consts::PI * k as f64 / 10.0;
                        let h = 1e-3;
                        let d = (8.0 * (fit.theta_prime(th + h) - fit.theta_prime(th - h))
                            - (fit.theta_prime(th + 2.0 * h) - fit.theta_prime(th - 2.0 * h)))
                            / (12.0 * h);
                        let (g_th, _) = metric_fn(th);
                        let lhs = r * r * (2.0 * fit.conf_factor(th)).exp() * d * d;
                        worst = worst.max((lhs - g_th).abs() / g_th);
                    }
                    rows.push(ReportRow::new(
                        "isothermal-residual",
                        params,
                        BLPoint::new(0.0, r, 0.0, 0.0),
                        worst,
                        1e-8,
                    ));
                }
            }
        }
    }

    Ok(rows)
}
