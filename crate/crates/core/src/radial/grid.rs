use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform periodic grid `u_j = u_min + j·h`, `j = 0..N`, `h = (u_max − u_min)/N`,
/// representing the radii `r_j = e^{u_j}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogGrid {
    u_min: f64,
    u_max: f64,
    n: usize,
}

/// Largest grid size reached by refinement.
pub const MAX_GRID_SIZE: usize = 1 << 18;

impl LogGrid {
    pub fn new(u_min: f64, u_max: f64, n: usize) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::Argument(format!("grid size must be a power of two ≥ 16, got {n}")));
        }
        if !(u_min.is_finite() && u_max.is_finite() && u_min < u_max) {
            return Err(Error::Argument(format!("need u_min < u_max, got [{u_min}, {u_max}]")));
        }
        Ok(Self { u_min, u_max, n })
    }

    pub fn u_min(&self) -> f64 {
        self.u_min
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn h(&self) -> f64 {
        (self.u_max - self.u_min) / self.n as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        self.u_min + j as f64 * self.h()
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.h();
        (0..self.n).map(move |j| self.u_min + j as f64 * h)
    }

    pub fn radius(&self, j: usize) -> f64 {
        self.node(j).exp()
    }

    /// Doubles `N` and widens the interval by 25% about its centre.
    pub fn refined(&self) -> Option<Self> {
        if self.n * 2 > MAX_GRID_SIZE {
            return None;
        }
        let c = 0.5 * (self.u_min + self.u_max);
        let half = 0.5 * (self.u_max - self.u_min) * 1.25;
        Some(Self { u_min: c - half, u_max: c + half, n: self.n * 2 })
    }

    /// Same interval shifted by `s` in the log-radius.
    pub fn shifted(&self, s: f64) -> Self {
        Self { u_min: self.u_min + s, u_max: self.u_max + s, n: self.n }
    }

    /// Smallest admissible grid covering `[u_min, u_max]` with spacing at most `h_max`.
    pub fn covering(u_min: f64, u_max: f64, h_max: f64) -> Result<Self> {
        let cells = ((u_max - u_min) / h_max).ceil().max(16.0) as usize;
        let n = cells.next_power_of_two();
        if n > MAX_GRID_SIZE {
            return Err(Error::Accuracy(format!(
                "covering [{u_min}, {u_max}] at spacing {h_max} needs {n} > {MAX_GRID_SIZE} nodes"
            )));
        }
        Self::new(u_min, u_max, n)
    }
}

impl Default for LogGrid {
    fn default() -> Self {
        Self { u_min: -20.0, u_max: 20.0, n: 4096 }
    }
}
