//! Plain-text run configuration: TOML sections per subcommand, unknown keys
//! rejected. Every field has a documented default so a bare invocation runs
//! the standard verification.

use serde::Deserialize;

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub sample: SampleSection,
    #[serde(default)]
    pub transforms: TransformSection,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub evolve: EvolveSection,
    #[serde(default)]
    pub table: PointSection,
    #[serde(default)]
    pub modes: ModesSection,
    #[serde(default)]
    pub transform: TransformApplySection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SampleSection {
    pub seed: u64,
    pub n_points: usize,
    pub r_min_factor: f64,
    pub r_max_over_m: f64,
    pub theta_margin: f64,
    pub a_over_m: Vec<f64>,
    pub masses: Vec<f64>,
}

impl Default for SampleSection {
    fn default() -> Self {
        SampleSection {
            seed: 1,
            n_points: 500,
            r_min_factor: 1.05,
            r_max_over_m: 12.0,
            theta_margin: 0.05,
            a_over_m: vec![0.0, 0.05, 0.3, 0.7],
            masses: vec![0.5, 1.0, 2.0],
        }
    }
}

impl SampleSection {
    pub fn to_spec(&self) -> kerr_core::sampler::SampleSpec {
        kerr_core::sampler::SampleSpec {
            seed: self.seed,
            n_points: self.n_points,
            r_min_factor: self.r_min_factor,
            r_max_over_m: self.r_max_over_m,
            theta_margin: self.theta_margin,
            a_over_m: self.a_over_m.clone(),
            masses: self.masses.clone(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransformSection {
    pub seed: u64,
    pub count: usize,
    pub max_f: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

impl Default for TransformSection {
    fn default() -> Self {
        TransformSection {
            seed: 2,
            count: 100,
            max_f: 0.3,
            lambda_min: 0.5,
            lambda_max: 2.0,
        }
    }
}

impl TransformSection {
    pub fn to_spec(&self) -> kerr_core::sampler::TransformSpec {
        kerr_core::sampler::TransformSpec {
            seed: self.seed,
            count: self.count,
            max_f: self.max_f,
            lambda_min: self.lambda_min,
            lambda_max: self.lambda_max,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySection {
    /// Subset of suite names to run; empty means all.
    pub suites: Vec<String>,
    /// Point/transform budget cap for the heavier suites.
    pub heavy_cap: usize,
}

impl Default for VerifySection {
    fn default() -> Self {
        VerifySection {
            suites: Vec::new(),
            heavy_cap: 40,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolveSection {
    pub ell: usize,
    pub mass: f64,
    pub rstar_min: f64,
    pub rstar_max: f64,
    pub n_points: usize,
    /// dt = cfl * grid spacing.
    pub cfl: f64,
    pub t_end: f64,
    pub bc: String,
    pub pulse_center: f64,
    pub pulse_width: f64,
    pub sample_every: usize,
    pub observer_rstar: f64,
    /// Re-run at doubled resolution and report the convergence factor.
    #[serde(default)]
    pub refine: bool,
}

impl Default for EvolveSection {
    fn default() -> Self {
        EvolveSection {
            ell: 2,
            mass: 1.0,
            rstar_min: -150.0,
            rstar_max: 250.0,
            n_points: 8192,
            cfl: 0.4,
            t_end: 300.0,
            bc: "outgoing".into(),
            pulse_center: 2.0,
            pulse_width: 4.0,
            sample_every: 100,
            observer_rstar: 40.0,
            refine: false,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PointSection {
    pub a: f64,
    pub m: f64,
    pub r: f64,
    pub theta: f64,
}

impl Default for PointSection {
    fn default() -> Self {
        PointSection {
            a: 0.3,
            m: 1.0,
            r: 3.0,
            theta: 1.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModesSection {
    pub a: f64,
    pub m: f64,
    pub r: f64,
    /// One of: one, cos_theta, sin_sin, sin_cos.
    pub h: String,
}

impl Default for ModesSection {
    fn default() -> Self {
        ModesSection {
            a: 0.0,
            m: 1.0,
            r: 3.0,
            h: "cos_theta".into(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransformApplySection {
    pub a: f64,
    pub m: f64,
    pub r: f64,
    pub theta: f64,
    pub f: [f64; 2],
    pub fbar: [f64; 2],
    pub lambda: f64,
}

impl Default for TransformApplySection {
    fn default() -> Self {
        TransformApplySection {
            a: 0.3,
            m: 1.0,
            r: 3.0,
            theta: 1.0,
            f: [0.1, -0.05],
            fbar: [0.02, 0.2],
            lambda: 1.3,
        }
    }
}

/// Loads and validates a config file; `None` gives the documented defaults.
pub fn load(path: Option<&std::path::Path>) -> Result<RunConfig, String> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
            toml::from_str(&text).map_err(|e| format!("malformed config {}: {e}", p.display()))
        }
    }
}
