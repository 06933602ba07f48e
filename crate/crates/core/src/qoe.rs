//! User-centric QoE model.
//!
//! Latency is perceived logarithmically: the penalty for waiting `L` seconds is
//! `D(L) = w1 * ln(1 + L / l_th)`, so it starts at zero and grows sublinearly.
//! A completed task adds a satisfaction gain of `w2 * q_max` on top of that.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QoeError {
    #[error("invalid QoE parameter {name} = {value}: {reason}")]
    InvalidParam {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("latency must be a non-negative finite number of seconds, got {0}")]
    NegativeLatency(f64),
    #[error("probability factor {name} = {value} is outside [0, 1]")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },
}

/// Per-user sensitivities plus the task-level scale and latency threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QoeParams {
    w1: f64,
    w2: f64,
    q_max: f64,
    l_th: f64,
}

impl QoeParams {
    pub const DEFAULT_Q_MAX: f64 = 1.0;
    pub const DEFAULT_L_TH: f64 = 2.0;

    pub fn new(w1: f64, w2: f64, q_max: f64, l_th: f64) -> Result<Self, QoeError> {
        check_nonneg("w1", w1)?;
        check_nonneg("w2", w2)?;
        check_positive("q_max", q_max)?;
        check_positive("l_th", l_th)?;
        Ok(Self { w1, w2, q_max, l_th })
    }

    /// Parameters with the default scale (1.0) and threshold (2 s).
    pub fn with_weights(w1: f64, w2: f64) -> Result<Self, QoeError> {
        Self::new(w1, w2, Self::DEFAULT_Q_MAX, Self::DEFAULT_L_TH)
    }

    pub fn w1(&self) -> f64 {
        self.w1
    }

    pub fn w2(&self) -> f64 {
        self.w2
    }

    pub fn q_max(&self) -> f64 {
        self.q_max
    }

    pub fn l_th(&self) -> f64 {
        self.l_th
    }
}

fn check_nonneg(name: &'static str, value: f64) -> Result<(), QoeError> {
    if !value.is_finite() || value < 0.0 {
        return Err(QoeError::InvalidParam {
            name,
            value,
            reason: "must be finite and >= 0",
        });
    }
    Ok(())
}

fn check_positive(name: &'static str, value: f64) -> Result<(), QoeError> {
    if !value.is_finite() || value <= 0.0 {
        return Err(QoeError::InvalidParam {
            name,
            value,
            reason: "must be finite and > 0",
        });
    }
    Ok(())
}

/// Result of one tool invocation. Latency is kept as its network and
/// execution components; the QoE math only ever reads their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub success: bool,
    t_net: f64,
    t_tool: f64,
}

impl Outcome {
    pub fn new(success: bool, t_net: f64, t_tool: f64) -> Result<Self, QoeError> {
        for v in [t_net, t_tool] {
            if !v.is_finite() || v < 0.0 {
                return Err(QoeError::NegativeLatency(v));
            }
        }
        Ok(Self { success, t_net, t_tool })
    }

    pub fn t_net(&self) -> f64 {
        self.t_net
    }

    pub fn t_tool(&self) -> f64 {
        self.t_tool
    }

    /// End-to-end latency `t_net + t_tool`.
    pub fn latency(&self) -> f64 {
        self.t_net + self.t_tool
    }

    pub fn with_success(self, success: bool) -> Self {
        Self { success, ..self }
    }
}

/// The three independent factors whose product is the success probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuccessFactors {
    pub p_route: f64,
    pub p_tool: f64,
    pub p_net: f64,
}

impl SuccessFactors {
    pub fn new(p_route: f64, p_tool: f64, p_net: f64) -> Result<Self, QoeError> {
        let factors = Self { p_route, p_tool, p_net };
        factors.validate()?;
        Ok(factors)
    }

    fn validate(&self) -> Result<(), QoeError> {
        for (name, value) in [
            ("p_route", self.p_route),
            ("p_tool", self.p_tool),
            ("p_net", self.p_net),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(QoeError::ProbabilityOutOfRange { name, value });
            }
        }
        Ok(())
    }
}

/// Latency penalty `w1 * ln(1 + latency / l_th)`.
pub fn distortion(latency: f64, params: &QoeParams) -> Result<f64, QoeError> {
    if !latency.is_finite() || latency < 0.0 {
        return Err(QoeError::NegativeLatency(latency));
    }
    Ok(params.w1 * (latency / params.l_th).ln_1p())
}

/// QoE conditioned on the outcome: `w2 * q_max - D(L)` on success, `-D(L)` otherwise.
pub fn conditional_qoe(outcome: &Outcome, params: &QoeParams) -> f64 {
    // Outcome construction already rejected negative components.
    let penalty = params.w1 * (outcome.latency() / params.l_th).ln_1p();
    if outcome.success {
        params.w2 * params.q_max - penalty
    } else {
        -penalty
    }
}

pub fn success_probability(factors: &SuccessFactors) -> Result<f64, QoeError> {
    factors.validate()?;
    Ok(factors.p_route * factors.p_tool * factors.p_net)
}

/// Binary QoE: `q_max` on success, zero on failure.
pub fn basic_qoe(success: bool, q_max: f64) -> f64 {
    if success {
        q_max
    } else {
        0.0
    }
}
