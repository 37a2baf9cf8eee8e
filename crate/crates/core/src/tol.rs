//! Numerical tolerances.
//!
//! One process-wide set is used by default. It is initialised on first use,
//! optionally from the `ENTANGLE_TOL` environment variable, which overrides the
//! hermiticity, trace, eigenvalue and rank thresholds with a single value.

use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub herm: f64,
    pub trace: f64,
    /// Eigenvalues in `[-eig, 0)` count as zero.
    pub eig: f64,
    pub rank: f64,
    pub reconstruction: f64,
    /// Threshold for the two-qubit determinant test.
    pub det: f64,
    /// Threshold for entropic inequalities (bits).
    pub entropy: f64,
    pub probability: f64,
    /// Largest matrix side any operation may produce.
    pub max_side: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            herm: 1e-9,
            trace: 1e-9,
            eig: 1e-9,
            rank: 1e-9,
            reconstruction: 1e-8,
            det: 1e-12,
            entropy: 1e-8,
            probability: 1e-12,
            max_side: 4096,
        }
    }
}

pub const ENV_VAR: &str = "ENTANGLE_TOL";

static GLOBAL: OnceLock<Tolerances> = OnceLock::new();

impl Tolerances {
    pub fn global() -> &'static Tolerances {
        GLOBAL.get_or_init(Self::from_env)
    }

    /// Installs `tol` as the process-wide set. Fails if the set was already
    /// read or installed.
    pub fn set_global(tol: Tolerances) -> Result<(), Tolerances> {
        GLOBAL.set(tol)
    }

    pub fn from_env() -> Self {
        let mut tol = Tolerances::default();
        if let Some(v) = std::env::var(ENV_VAR).ok().and_then(|s| s.trim().parse::<f64>().ok()) {
            if v.is_finite() && v > 0.0 {
                tol.herm = v;
                tol.trace = v;
                tol.eig = v;
                tol.rank = v;
            }
        }
        tol
    }
}

pub(crate) fn tol() -> &'static Tolerances {
    Tolerances::global()
}
