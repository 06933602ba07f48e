use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::NetsimError;

/// Latencies never drop below one millisecond.
pub const LATENCY_FLOOR_S: f64 = 0.001;

/// Gaussian noise is truncated at this many standard deviations.
pub const NOISE_CLIP_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternKind {
    GoodToBadJitter,
    BadToGoodStable,
    StableFluctuating,
    StableHigh,
    StableNormal,
    SmoothScaled,
}

impl PatternKind {
    pub const RANDOM_SCENARIO: [PatternKind; 5] = [
        PatternKind::GoodToBadJitter,
        PatternKind::BadToGoodStable,
        PatternKind::StableFluctuating,
        PatternKind::StableHigh,
        PatternKind::StableNormal,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PatternKind::GoodToBadJitter => "good_to_bad_jitter",
            PatternKind::BadToGoodStable => "bad_to_good_stable",
            PatternKind::StableFluctuating => "stable_fluctuating",
            PatternKind::StableHigh => "stable_high",
            PatternKind::StableNormal => "stable_normal",
            PatternKind::SmoothScaled => "smooth_scaled",
        }
    }

    pub fn is_jittery(&self) -> bool {
        matches!(
            self,
            PatternKind::GoodToBadJitter | PatternKind::BadToGoodStable | PatternKind::StableFluctuating
        )
    }

    /// Probability the link stays up during one invocation.
    pub fn default_stability(&self) -> f64 {
        if self.is_jittery() {
            0.95
        } else {
            0.99
        }
    }
}

/// A named generator for one server's time-varying network latency.
///
/// Every kind produces `scale * shape(t) + noise`, floored at 1 ms, where
/// `shape` is:
///
/// * `good_to_bad_jitter`: `base * (1 + growth * t/T)`, noise sd growing by the same factor
/// * `bad_to_good_stable`: `plateau_factor * base` plus random spikes of
///   `spike_factor * base` before `transition_point`, then `base` with a quarter of the noise
/// * `stable_fluctuating`: `base + amplitude * sin(2*pi*t/period + phase)`
/// * `stable_high`: `high_factor * base`
/// * `stable_normal`, `smooth_scaled`: `base`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatencyPattern {
    pub pattern_id: String,
    pub kind: PatternKind,
    pub base_latency: f64,
    #[serde(default = "one")]
    pub scale: f64,
    /// Noise variance in seconds squared.
    pub variance: f64,
    #[serde(default)]
    pub amplitude: f64,
    #[serde(default = "default_period")]
    pub period: f64,
    #[serde(default)]
    pub phase: f64,
    #[serde(default = "default_transition")]
    pub transition_point: f64,
    #[serde(default = "default_growth")]
    pub growth: f64,
    #[serde(default = "default_plateau")]
    pub plateau_factor: f64,
    #[serde(default = "default_spike_prob")]
    pub spike_prob: f64,
    #[serde(default = "default_spike_factor")]
    pub spike_factor: f64,
    #[serde(default = "default_high_factor")]
    pub high_factor: f64,
    pub stability: f64,
}

fn one() -> f64 {
    1.0
}
fn default_period() -> f64 {
    20.0
}
fn default_transition() -> f64 {
    0.5
}
fn default_growth() -> f64 {
    3.0
}
fn default_plateau() -> f64 {
    3.0
}
fn default_spike_prob() -> f64 {
    0.15
}
fn default_spike_factor() -> f64 {
    2.0
}
fn default_high_factor() -> f64 {
    5.0
}

impl LatencyPattern {
    /// Default parameters for `kind` around `base_latency` seconds.
    pub fn preset(pattern_id: impl Into<String>, kind: PatternKind, base_latency: f64) -> Self {
        let rel_sd = match kind {
            PatternKind::GoodToBadJitter => 0.15,
            PatternKind::BadToGoodStable => 0.10,
            PatternKind::SmoothScaled => 0.03,
            _ => 0.05,
        };
        let sd = rel_sd * base_latency;
        Self {
            pattern_id: pattern_id.into(),
            kind,
            base_latency,
            scale: 1.0,
            variance: sd * sd,
            amplitude: if kind == PatternKind::StableFluctuating {
                0.4 * base_latency
            } else {
                0.0
            },
            period: default_period(),
            phase: 0.0,
            transition_point: default_transition(),
            growth: default_growth(),
            plateau_factor: default_plateau(),
            spike_prob: default_spike_prob(),
            spike_factor: default_spike_factor(),
            high_factor: default_high_factor(),
            stability: kind.default_stability(),
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_variance(mut self, variance: f64) -> Self {
        self.variance = variance;
        self
    }

    /// Field-level problems, each prefixed with `path`.
    pub fn violations(&self, path: &str) -> Vec<String> {
        let mut out = Vec::new();
        let mut need = |ok: bool, field: &str, what: &str| {
            if !ok {
                out.push(format!("{path}.{field}: {what}"));
            }
        };
        need(
            self.base_latency.is_finite() && self.base_latency > 0.0,
            "base_latency",
            "must be > 0",
        );
        need(self.scale.is_finite() && self.scale > 0.0, "scale", "must be > 0");
        need(
            self.variance.is_finite() && self.variance >= 0.0,
            "variance",
            "must be >= 0",
        );
        need(
            self.amplitude.is_finite() && self.amplitude >= 0.0,
            "amplitude",
            "must be >= 0",
        );
        need(self.period.is_finite() && self.period > 0.0, "period", "must be > 0");
        need(
            self.transition_point > 0.0 && self.transition_point < 1.0,
            "transition_point",
            "must lie in (0, 1)",
        );
        need(
            (0.0..=1.0).contains(&self.spike_prob),
            "spike_prob",
            "must lie in [0, 1]",
        );
        need((0.0..=1.0).contains(&self.stability), "stability", "must lie in [0, 1]");
        need(self.growth.is_finite() && self.growth >= 0.0, "growth", "must be >= 0");
        out
    }

    pub fn validate(&self) -> Result<(), NetsimError> {
        let v = self.violations(&self.pattern_id);
        if v.is_empty() {
            Ok(())
        } else {
            Err(NetsimError::InvalidPattern(v.join("; ")))
        }
    }
}

/// Draws the network latency of `pattern` at step `time_index` of a
/// `horizon`-step run. Always consumes one normal and one uniform draw.
pub fn sample_latency<R: Rng + ?Sized>(
    pattern: &LatencyPattern,
    time_index: usize,
    horizon: usize,
    rng: &mut R,
) -> Result<f64, NetsimError> {
    if time_index >= horizon {
        return Err(NetsimError::TimeOutOfRange { time_index, horizon });
    }
    pattern.validate()?;
    let z: f64 = rng
        .sample::<f64, _>(StandardNormal)
        .clamp(-NOISE_CLIP_SIGMAS, NOISE_CLIP_SIGMAS);
    let u: f64 = rng.random();
    let sd = pattern.variance.sqrt();
    let base = pattern.base_latency;
    let progress = time_index as f64 / horizon as f64;

    let (shape, noise_sd) = match pattern.kind {
        PatternKind::GoodToBadJitter => {
            let ramp = 1.0 + pattern.growth * progress;
            (base * ramp, sd * ramp)
        }
        PatternKind::BadToGoodStable => {
            if progress < pattern.transition_point {
                let spike = if u < pattern.spike_prob {
                    pattern.spike_factor * base
                } else {
                    0.0
                };
                (pattern.plateau_factor * base + spike, sd)
            } else {
                (base, 0.25 * sd)
            }
        }
        PatternKind::StableFluctuating => {
            let wave = (2.0 * PI * time_index as f64 / pattern.period + pattern.phase).sin();
            (base + pattern.amplitude * wave, sd)
        }
        PatternKind::StableHigh => (pattern.high_factor * base, sd),
        PatternKind::StableNormal | PatternKind::SmoothScaled => (base, sd),
    };
    Ok((pattern.scale * shape + noise_sd * z).max(LATENCY_FLOOR_S))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    fn series(p: &LatencyPattern, horizon: usize, seed: u64) -> Vec<f64> {
        let mut rng = substream(seed, &[0]);
        (0..horizon)
            .map(|t| sample_latency(p, t, horizon, &mut rng).unwrap())
            .collect()
    }

    fn mean(xs: &[f64]) -> f64 {
        xs.iter().sum::<f64>() / xs.len() as f64
    }

    #[test]
    fn zero_noise_stable_high_is_flat() {
        let p = LatencyPattern::preset("h", PatternKind::StableHigh, 1.0).with_variance(0.0);
        assert!(series(&p, 50, 1).iter().all(|&x| (x - 5.0).abs() < 1e-12));
        let q = LatencyPattern {
            high_factor: 1.0,
            base_latency: 5.0,
            ..p
        };
        assert!(series(&q, 10, 2).iter().all(|&x| x == 5.0));
    }

    #[test]
    fn normal_below_high_without_noise() {
        let normal = LatencyPattern::preset("n", PatternKind::StableNormal, 1.0).with_variance(0.0);
        let high = LatencyPattern {
            high_factor: 1.0,
            ..LatencyPattern::preset("h", PatternKind::StableHigh, 5.0).with_variance(0.0)
        };
        let mut rng = substream(3, &[]);
        let a = sample_latency(&normal, 0, 10, &mut rng).unwrap();
        let b = sample_latency(&high, 0, 10, &mut rng).unwrap();
        assert_eq!((a, b), (1.0, 5.0));
    }

    #[test]
    fn good_to_bad_endpoints() {
        let p = LatencyPattern::preset("g", PatternKind::GoodToBadJitter, 1.0).with_variance(0.0);
        let mut rng = substream(0, &[]);
        let early = sample_latency(&p, 0, 100, &mut rng).unwrap();
        let late = sample_latency(&p, 99, 100, &mut rng).unwrap();
        // base * (1 + 3 * 0/100) and base * (1 + 3 * 99/100)
        assert_eq!(early, 1.0);
        assert!((late - 3.97).abs() < 1e-12);
    }

    #[test]
    fn rejects_out_of_range_time_and_bad_params() {
        let p = LatencyPattern::preset("n", PatternKind::StableNormal, 1.0);
        let mut rng = substream(0, &[]);
        assert!(matches!(
            sample_latency(&p, 10, 10, &mut rng),
            Err(NetsimError::TimeOutOfRange { .. })
        ));
        let bad = LatencyPattern {
            base_latency: 0.0,
            ..p.clone()
        };
        assert!(sample_latency(&bad, 0, 10, &mut rng).is_err());
        let bad = LatencyPattern {
            transition_point: 1.0,
            ..p
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn unknown_kind_fails_to_parse() {
        let json = r#"{"pattern_id":"x","kind":"sideways","base_latency":1,"variance":0,"stability":1}"#;
        assert!(serde_json::from_str::<LatencyPattern>(json).is_err());
    }

    #[test]
    fn traces_are_deterministic() {
        let p = LatencyPattern::preset("b", PatternKind::BadToGoodStable, 0.8);
        assert_eq!(series(&p, 200, 11), series(&p, 200, 11));
        assert_ne!(series(&p, 200, 11), series(&p, 200, 12));
    }

    #[test]
    fn pattern_means_over_long_horizon() {
        let n = 10_000;
        let high = series(&LatencyPattern::preset("h", PatternKind::StableHigh, 1.0), n, 5);
        let normal = series(&LatencyPattern::preset("n", PatternKind::StableNormal, 1.0), n, 5);
        assert!(mean(&high) > mean(&normal));

        let decile = n / 10;
        let g2b = series(&LatencyPattern::preset("g", PatternKind::GoodToBadJitter, 1.0), n, 6);
        assert!(mean(&g2b[..decile]) < mean(&g2b[n - decile..]));
        let b2g = series(&LatencyPattern::preset("b", PatternKind::BadToGoodStable, 1.0), n, 7);
        assert!(mean(&b2g[..decile]) > mean(&b2g[n - decile..]));
    }

    #[test]
    fn fluctuating_stays_in_band() {
        let p = LatencyPattern::preset("f", PatternKind::StableFluctuating, 1.0);
        let bound = p.amplitude + 4.0 * p.variance.sqrt();
        for x in series(&p, 10_000, 9) {
            assert!((x - p.base_latency).abs() <= bound, "{x}");
        }
    }
}
