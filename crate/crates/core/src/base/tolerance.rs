use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical tolerances shared by every certifier.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToleranceProfile {
    /// Equality tolerance.
    pub eps_eq: f64,
    /// Minimum slack for an inequality to count as strict.
    pub eps_strict: f64,
    /// Relative width at which radial bisections stop.
    pub eps_bisect: f64,
    /// Largest radial multiplier probed.
    pub max_bracket: f64,
    pub max_iter: u32,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        ToleranceProfile {
            eps_eq: 1e-9,
            eps_strict: 1e-7,
            eps_bisect: 1e-12,
            max_bracket: 1e12,
            max_iter: 200,
        }
    }
}

impl ToleranceProfile {
    /// Checks `0 < eps_bisect < eps_strict <= 100 eps_eq` and `max_bracket > 1`.
    pub fn validate(&self) -> Result<()> {
        let ok = self.eps_bisect > 0.0
            && self.eps_bisect < self.eps_strict
            && self.eps_strict <= self.eps_eq * 100.0
            && self.max_bracket > 1.0
            && self.max_iter >= 1
            && [
                self.eps_eq,
                self.eps_strict,
                self.eps_bisect,
                self.max_bracket,
            ]
            .iter()
            .all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::Input(format!(
                "inconsistent tolerance profile: eps_eq={}, eps_strict={}, eps_bisect={}, max_bracket={}, max_iter={}",
                self.eps_eq, self.eps_strict, self.eps_bisect, self.max_bracket, self.max_iter
            )))
        }
    }
}
