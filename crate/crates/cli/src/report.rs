//! Machine-readable report rows. All floats print at 17 significant digits
//! so repeated runs with the same config are byte-identical.

use kerr_core::{BLPoint, KerrParams};

#[derive(Debug, Clone)]
pub struct ReportRow {
    pub check_id: String,
    pub a: f64,
    pub m: f64,
    pub point: BLPoint,
    pub residual: f64,
    pub tolerance: f64,
}

impl ReportRow {
    pub fn new(
        check_id: impl Into<String>,
        params: KerrParams,
        point: BLPoint,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        ReportRow {
            check_id: check_id.into(),
            a: params.spin(),
            m: params.mass(),
            point,
            residual,
            tolerance,
        }
    }

    pub fn pass(&self) -> bool {
        self.residual < self.tolerance
    }
}

pub const HEADER: &str = "check_id,a,m,t,r,theta,phi,residual,tolerance,pass";

pub fn to_csv(rows: &[ReportRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 96 + 64);
    out.push_str(HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
            r.check_id,
            r.a,
            r.m,
            r.point.t,
            r.point.r,
            r.point.theta,
            r.point.phi,
            r.residual,
            r.tolerance,
            r.pass()
        ));
    }
    out
}

/// Writes to the path or stdout; returns whether every row passed.
pub fn emit(rows: &[ReportRow], out: Option<&std::path::Path>) -> std::io::Result<bool> {
    let csv = to_csv(rows);
    match out {
        Some(p) => std::fs::write(p, csv)?,
        None => print!("{csv}"),
    }
    Ok(rows.iter().all(|r| r.pass()))
}
