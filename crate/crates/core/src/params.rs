use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default local-isometry radius.
pub const DEFAULT_LOCAL_RADIUS: u32 = 3;

/// Chooses the modulus parameter `ν(i)` used for level-`i` fin labels.
///
/// `ν(i) = max(per_level · i, floor)`. Separation of walls at level `i`
/// needs `ν(i) ≥ 4ni`; the floor `2·r_local + 2` makes labels injective on
/// everything visible from a ball of radius `r_local`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationParams {
    pub r_local: u32,
    pub per_level: u64,
    pub floor: u64,
}

impl SeparationParams {
    /// The default choice for `n` colours: `ν(i) = max(4ni, 2·r_local + 2)`.
    pub fn new(n_colours: usize, r_local: u32) -> Self {
        SeparationParams { r_local, per_level: 4 * n_colours as u64, floor: 2 * r_local as u64 + 2 }
    }

    /// Explicit constants; `per_level` must be at least `4n`.
    pub fn with_constants(n_colours: usize, r_local: u32, per_level: u64, floor: u64) -> Result<Self> {
        if per_level < 4 * n_colours as u64 {
            return Err(Error::InvalidParams(format!("per-level factor {per_level} is below 4n = {}", 4 * n_colours)));
        }
        Ok(SeparationParams { r_local, per_level, floor })
    }

    pub fn nu(&self, level: u32) -> u64 {
        (self.per_level * level as u64).max(self.floor)
    }

    /// Checks `ν(i) ≥ 4ni` for this colour count.
    pub fn validate(&self, n_colours: usize) -> Result<()> {
        Self::with_constants(n_colours, self.r_local, self.per_level, self.floor).map(|_| ())
    }
}
