//! Sampling design: equispaced observation times on `(0, T]`.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DesignError {
    #[error("sample size must be positive")]
    EmptyDesign,
    #[error("horizon must be positive and finite, got {0}")]
    BadHorizon(f64),
    #[error("interior window [{lo}, {hi}] contains no grid points")]
    EmptyWindow { lo: f64, hi: f64 },
}

/// `n` observations at `t_i = i·T/n`, `i = 1..n`, with `t_0 = 0`.
///
/// Functions are evaluated on the "evaluation grid" `t_0, …, t_n`
/// (`n + 1` points) so that trapezoid integrals cover all of `[0, T]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentDesign {
    n: usize,
    horizon: f64,
}

impl ExperimentDesign {
    pub fn new(n: usize, horizon: f64) -> Result<Self, DesignError> {
        if n == 0 {
            return Err(DesignError::EmptyDesign);
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(DesignError::BadHorizon(horizon));
        }
        Ok(ExperimentDesign { n, horizon })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Grid spacing `T/n`.
    pub fn spacing(&self) -> f64 {
        self.horizon / self.n as f64
    }

    /// Grid-regularity constant: `max |t_i - t_{i-1}| / (T/n)`, 1 here.
    pub fn mu(&self) -> f64 {
        1.0
    }

    /// `t_k` for `k = 0..=n`.
    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.horizon / self.n as f64
    }

    /// Observation times `t_1..t_n`.
    pub fn observation_times(&self) -> Vec<f64> {
        (1..=self.n).map(|i| self.time(i)).collect()
    }

    /// Evaluation grid `t_0..t_n`.
    pub fn eval_grid(&self) -> Vec<f64> {
        (0..=self.n).map(|k| self.time(k)).collect()
    }

    /// `T²/n^α`, which must be small for the asymptotics to apply.
    pub fn regime_ratio(&self, alpha: f64) -> f64 {
        self.horizon * self.horizon / (self.n as f64).powf(alpha)
    }

    /// Logs a warning when `T²/n^α ≥ 1`; finite-n experiments are allowed
    /// outside the asymptotic regime.
    pub fn check_regime(&self, alpha: f64) -> bool {
        let ratio = self.regime_ratio(alpha);
        if ratio >= 1.0 {
            log::warn!(
                "T^2/n^alpha = {ratio:.3} (n = {}, T = {}, alpha = {alpha}) is not small",
                self.n,
                self.horizon
            );
            false
        } else {
            true
        }
    }

    /// Evaluation-grid indices with `margin ≤ t_k ≤ T - margin`.
    pub fn interior(&self, margin: f64) -> Result<Window, DesignError> {
        let h = self.spacing();
        let slack = 1e-9 * h;
        let lo = ((margin - slack) / h).ceil().max(0.0) as usize;
        let hi_t = self.horizon - margin;
        let hi = ((hi_t + slack) / h).floor();
        if hi < 0.0 || (hi as usize) < lo || lo > self.n {
            return Err(DesignError::EmptyWindow {
                lo: margin,
                hi: hi_t,
            });
        }
        Ok(Window {
            start: lo,
            end: (hi as usize).min(self.n),
        })
    }

    pub fn full_window(&self) -> Window {
        Window {
            start: 0,
            end: self.n,
        }
    }
}

/// Inclusive index range `start..=end` on the evaluation grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub start: usize,
    pub end: usize,
}

impl Window {
    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_and_window() {
        let d = ExperimentDesign::new(8, 4.0).unwrap();
        assert_eq!(d.spacing(), 0.5);
        assert_eq!(
            d.observation_times(),
            vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0]
        );
        assert_eq!(d.eval_grid().len(), 9);
        let w = d.interior(1.0).unwrap();
        assert_eq!((w.start, w.end), (2, 6));
        assert_eq!(w.len(), 5);
        assert!(d.interior(2.5).is_err());
    }

    #[test]
    fn rejects_bad_designs() {
        assert_eq!(ExperimentDesign::new(0, 1.0), Err(DesignError::EmptyDesign));
        assert!(ExperimentDesign::new(4, -1.0).is_err());
        assert!(ExperimentDesign::new(4, f64::NAN).is_err());
    }

    #[test]
    fn regime_ratio() {
        let d = ExperimentDesign::new(1024, 1.0).unwrap();
        assert!((d.regime_ratio(0.5) - 1.0 / 32.0).abs() < 1e-15);
        assert!(d.check_regime(1.0));
    }
}
