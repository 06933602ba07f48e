use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::NetsimError;

/// Rolling latency predictor.
///
/// `historical` is the running EWMA of every sample seen; the window keeps
/// the last `capacity` raw samples and supplies the "current" measurement.
/// A prediction blends the two with the same `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EwmaState {
    window: VecDeque<f64>,
    capacity: usize,
    historical: Option<f64>,
    alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EwmaParams {
    pub alpha: f64,
    pub window: usize,
}

impl Default for EwmaParams {
    fn default() -> Self {
        Self { alpha: 0.3, window: 10 }
    }
}

impl EwmaState {
    pub fn new(params: EwmaParams) -> Result<Self, NetsimError> {
        if !(0.0..=1.0).contains(&params.alpha) {
            return Err(NetsimError::InvalidEwma(format!(
                "alpha {} outside [0, 1]",
                params.alpha
            )));
        }
        if params.window == 0 {
            return Err(NetsimError::InvalidEwma("window must hold at least one sample".into()));
        }
        Ok(Self {
            window: VecDeque::with_capacity(params.window),
            capacity: params.window,
            historical: None,
            alpha: params.alpha,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn window(&self) -> impl Iterator<Item = f64> + '_ {
        self.window.iter().copied()
    }

    pub fn historical(&self) -> Option<f64> {
        self.historical
    }

    pub fn is_cold(&self) -> bool {
        self.historical.is_none()
    }

    pub fn observe(&mut self, sample: f64) -> Result<(), NetsimError> {
        if !sample.is_finite() || sample <= 0.0 {
            return Err(NetsimError::NonPositiveSample(sample));
        }
        if self.window.len() == self.capacity {
            self.window.pop_front();
        }
        self.window.push_back(sample);
        self.historical = Some(match self.historical {
            None => sample,
            Some(h) => self.alpha * sample + (1.0 - self.alpha) * h,
        });
        Ok(())
    }

    /// `alpha * latest + (1 - alpha) * historical`.
    pub fn predict(&self) -> Result<f64, NetsimError> {
        match (self.window.back(), self.historical) {
            (Some(&current), Some(h)) => Ok(self.alpha * current + (1.0 - self.alpha) * h),
            _ => Err(NetsimError::ColdStart),
        }
    }

    pub fn predict_or(&self, cold_start: f64) -> f64 {
        self.predict().unwrap_or(cold_start)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn state(alpha: f64) -> EwmaState {
        EwmaState::new(EwmaParams { alpha, window: 10 }).unwrap()
    }

    #[test]
    fn first_sample_initializes() {
        let mut s = state(0.3);
        assert!(matches!(s.predict(), Err(NetsimError::ColdStart)));
        assert_eq!(s.predict_or(1.5), 1.5);
        s.observe(100.0).unwrap();
        assert_eq!(s.historical(), Some(100.0));
        assert_eq!(s.predict().unwrap(), 100.0);
    }

    #[test]
    fn alpha_one_tracks_last_sample() {
        let mut s = state(1.0);
        for x in [3.0, 9.0, 4.0] {
            s.observe(x).unwrap();
        }
        assert_eq!(s.historical(), Some(4.0));
        assert_eq!(s.predict().unwrap(), 4.0);
    }

    #[test]
    fn two_sample_trace() {
        let mut s = state(0.3);
        s.observe(100.0).unwrap();
        s.observe(200.0).unwrap();
        // 0.3 * 200 + 0.7 * 100
        assert!((s.historical().unwrap() - 130.0).abs() < 1e-12);
        // 0.3 * 200 + 0.7 * 130
        assert!((s.predict().unwrap() - 151.0).abs() < 1e-12);
    }

    #[test]
    fn window_evicts_oldest() {
        let mut s = EwmaState::new(EwmaParams { alpha: 0.5, window: 2 }).unwrap();
        for x in [1.0, 2.0, 3.0] {
            s.observe(x).unwrap();
        }
        assert_eq!(s.window().collect::<Vec<_>>(), vec![2.0, 3.0]);
    }

    #[test]
    fn rejects_bad_input() {
        let mut s = state(0.3);
        assert!(s.observe(0.0).is_err());
        assert!(s.observe(-1.0).is_err());
        assert!(EwmaState::new(EwmaParams { alpha: 1.5, window: 3 }).is_err());
        assert!(EwmaState::new(EwmaParams { alpha: 0.5, window: 0 }).is_err());
    }

    proptest! {
        #[test]
        fn prediction_stays_within_observed_range(alpha in 0.0f64..=1.0,
                                                  samples in proptest::collection::vec(0.001f64..100.0, 1..40)) {
            let mut s = state(alpha);
            for &x in &samples {
                s.observe(x).unwrap();
            }
            let h = s.historical().unwrap();
            let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(h >= lo - 1e-9 && h <= hi + 1e-9);
            let p = s.predict().unwrap();
            let pool: Vec<f64> = s.window().chain(std::iter::once(h)).collect();
            let plo = pool.iter().copied().fold(f64::INFINITY, f64::min);
            let phi = pool.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(p >= plo - 1e-9 && p <= phi + 1e-9);
        }
    }
}
