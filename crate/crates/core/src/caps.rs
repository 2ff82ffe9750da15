//! Resource caps shared by the space builders.

use serde::{Deserialize, Serialize};

/// Hard limits on construction sizes. Ball radii grow graphs exponentially,
/// so builders check these before allocating anything.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceCaps {
    /// Upper bound on the total vertex count of any built space.
    pub max_vertices: usize,
    /// Exhaustive four-point delta is refused above this vertex count.
    pub exact_delta_cutoff: usize,
    /// Exhaustive triple scans switch to sampling above this ball size.
    pub equilateral_auto_cutoff: usize,
    /// Explicitly requested exhaustive triple scans are refused above this.
    pub equilateral_exact_budget: usize,
}

impl Default for ResourceCaps {
    fn default() -> Self {
        ResourceCaps {
            max_vertices: 500_000,
            exact_delta_cutoff: 300,
            equilateral_auto_cutoff: 120,
            equilateral_exact_budget: 2_000,
        }
    }
}

impl ResourceCaps {
    /// Apply the `CUSPED_MAX_VERTICES` override if present and parseable.
    pub fn with_env_override(mut self) -> Self {
        if let Ok(v) = std::env::var("CUSPED_MAX_VERTICES") {
            if let Ok(n) = v.trim().parse::<usize>() {
                self.max_vertices = n;
            }
        }
        self
    }

    pub fn check_vertices(&self, needed: usize) -> crate::Result<()> {
        if needed > self.max_vertices {
            return Err(crate::Error::VertexBudget {
                needed,
                cap: self.max_vertices,
            });
        }
        Ok(())
    }
}
