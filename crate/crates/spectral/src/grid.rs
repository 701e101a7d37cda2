use crate::{Result, SpectralError};

/// Spatial and temporal discretization parameters.
///
/// `n` is the collocation resolution per axis (even, at least 4), `time_samples`
/// the number of uniform samples on `[0, period]` for time-dependent data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n: usize,
    pub time_samples: usize,
    pub period: f64,
}

impl GridSpec {
    pub fn new(n: usize, time_samples: usize, period: f64) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(SpectralError::InvalidParameter(format!(
                "resolution must be even and >= 4, got {n}"
            )));
        }
        if time_samples == 0 {
            return Err(SpectralError::InvalidParameter(
                "need at least one time sample".into(),
            ));
        }
        if !(period > 0.0) {
            return Err(SpectralError::InvalidParameter(format!(
                "period must be positive, got {period}"
            )));
        }
        Ok(Self { n, time_samples, period })
    }

    pub fn spatial(n: usize) -> Result<Self> {
        Self::new(n, 1, 1.0)
    }

    pub fn grid(&self) -> Grid {
        Grid { n: self.n }
    }

    /// Two-thirds-rule dealiasing cutoff.
    pub fn dealias_cutoff(&self) -> usize {
        self.n / 3
    }

    pub fn dt(&self) -> f64 {
        if self.time_samples > 1 {
            self.period / (self.time_samples - 1) as f64
        } else {
            self.period
        }
    }
}

/// Purely spatial grid handle carried by every field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    pub n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(SpectralError::InvalidParameter(format!(
                "resolution must be even and >= 4, got {n}"
            )));
        }
        Ok(Self { n })
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Integer frequency for a raw index along one axis.
    #[inline]
    pub fn wavenumber(&self, idx: usize) -> i64 {
        let n = self.n as i64;
        let i = idx as i64;
        if i <= n / 2 - 1 {
            i
        } else {
            i - n
        }
    }

    /// Lookup table of wavenumbers along one axis.
    pub fn wavenumbers(&self) -> Vec<i64> {
        (0..self.n).map(|i| self.wavenumber(i)).collect()
    }

    /// Two-thirds dealias cutoff.
    pub fn dealias_cutoff(&self) -> usize {
        self.n / 3
    }

    /// Grid spacing.
    pub fn h(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.n as f64
    }

    /// Collocation point for a raw index triple, in `[-pi, pi)^3`.
    #[inline]
    pub fn point(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        let h = self.h();
        [
            -std::f64::consts::PI + h * i as f64,
            -std::f64::consts::PI + h * j as f64,
            -std::f64::consts::PI + h * k as f64,
        ]
    }

    /// Raw index of the coefficient for integer frequency `xi` (each |xi_m| < n/2).
    pub fn index_of(&self, xi: [i64; 3]) -> usize {
        let n = self.n as i64;
        let fold = |v: i64| -> usize { v.rem_euclid(n) as usize };
        (fold(xi[0]) * self.n + fold(xi[1])) * self.n + fold(xi[2])
    }
}
