use serde::Serialize;

use crate::error::{Error, Result};

/// Numerical tolerances used by validation, crossing detection, and the
/// genericity screens. All comparisons in the crate go through a value from
/// this struct; nothing is hard-coded at call sites.
#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    /// Accept a collinearity (cross-product) residual below this.
    pub residual: f64,
    /// Crossing parameters within this distance of an edge endpoint are a
    /// genericity violation, and coefficients below it cannot classify loops.
    pub param: f64,
    /// Quadratic discriminants (max-normalized) closer to zero than this
    /// signal a tangency.
    pub disc: f64,
    /// Minimum |det4| (with unit tangents) for a trustworthy crossing sign.
    pub sign_margin: f64,
    /// Required projective separation between curves, and between a
    /// viewpoint and any curve.
    pub separation: f64,
    /// Margin for degenerate lifts: near-zero vectors, and consecutive
    /// lifts that are projectively equal or a quarter turn apart.
    pub degeneracy: f64,
    /// Residuals between `residual` and `ambiguity_band * residual` are
    /// neither a clean hit nor a clean miss; the viewpoint is resampled.
    pub ambiguity_band: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-9,
            param: 1e-7,
            disc: 1e-10,
            sign_margin: 1e-9,
            separation: 1e-6,
            degeneracy: 1e-7,
            ambiguity_band: 1e3,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("residual", self.residual),
            ("param", self.param),
            ("disc", self.disc),
            ("sign_margin", self.sign_margin),
            ("separation", self.separation),
            ("degeneracy", self.degeneracy),
            ("ambiguity_band", self.ambiguity_band),
        ];
        for (name, value) in fields {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::BadConfig {
                    message: format!("tolerance `{name}` must be positive and finite, got {value}"),
                });
            }
        }
        Ok(())
    }
}

/// Seed, trial count, and tolerances for one linking or self-linking run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    /// Number of independent generic viewpoints; their degrees must agree.
    pub trials: u32,
    /// Resampling budget per trial before giving up on genericity.
    pub max_resamples: u32,
    pub tol: Tolerances,
    /// Viewpoints to try before any sampled one (trial 0 only). Useful for
    /// reproducing a run from a report, and for exercising the rejection
    /// path with a deliberately degenerate viewpoint.
    #[serde(skip)]
    pub preview_viewpoints: Vec<[f64; 4]>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            trials: 5,
            max_resamples: 64,
            tol: Tolerances::default(),
            preview_viewpoints: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn with_seed(seed: u64) -> Self {
        RunConfig {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::BadConfig {
                message: "trials must be at least 1".into(),
            });
        }
        if self.max_resamples < 1 {
            return Err(Error::BadConfig {
                message: "max_resamples must be at least 1".into(),
            });
        }
        self.tol.validate()
    }
}
