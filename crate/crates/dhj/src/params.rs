//! Numeric invariants of the increment pipeline, as exact rationals.
//!
//! `ProofParameters` packages the constants the procedures compare
//! against; `TilingParameters` the ones the tiling rounds use. Both come
//! in two flavors: derived (recomputed from the defining formulas, with
//! the formulas' side conditions asserted) and toy (caller-overridden for
//! desk-scale runs, carried with a `toy` flag into every certificate).

use crate::error::{Error, Result};
use crate::ratio::{fmt_q, q_int, q_pow, Q};
use num::bigint::BigInt;
use num::{One, Zero};
use serde::Serialize;

/// The invariants delta, m0, theta, eta, gamma, lambda, M0.
#[derive(Clone, Debug, Serialize)]
pub struct ProofParameters {
    #[serde(serialize_with = "ser_q")]
    pub delta: Q,
    pub m0: u64,
    #[serde(serialize_with = "ser_q")]
    pub theta: Q,
    #[serde(serialize_with = "ser_q")]
    pub eta: Q,
    #[serde(serialize_with = "ser_q")]
    pub gamma: Q,
    #[serde(serialize_with = "ser_q")]
    pub lambda: Q,
    pub m_cap: u64,
    /// True when any field was overridden rather than derived.
    pub toy: bool,
}

pub(crate) fn ser_q<S: serde::Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(q))
}

impl ProofParameters {
    /// Derives every invariant from `k`, `delta` and `m0`:
    /// `theta = (delta/4) / ((k+1)^m0 - k^m0)`, `eta = delta*theta/48`,
    /// `gamma = delta*eta^2/k`, `lambda = (k+1)/k`, and `m_cap` (M0) the
    /// maximum of `m0` and the least integer `t` with `lambda^t >= 1/eta`
    /// (which dominates the real-valued log ratio).
    pub fn derive(k: u16, delta: &Q, m0: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::AlphabetTooSmall(k as u64));
        }
        if *delta <= Q::zero() || *delta > Q::one() {
            return Err(Error::ParameterOutOfRange("delta must satisfy 0 < delta <= 1".into()));
        }
        let kq = q_int(k as i64);
        let lines = q_pow(&q_int(k as i64 + 1), m0 as i64) - q_pow(&kq, m0 as i64);
        let theta = delta.clone() / q_int(4) / lines;
        let eta = delta.clone() * theta.clone() / q_int(48);
        let gamma = delta.clone() * eta.clone() * eta.clone() / kq.clone();
        let lambda = q_int(k as i64 + 1) / kq;
        let m_cap = m0.max(least_power_at_least(&lambda, &eta.clone().recip()));
        let params = ProofParameters {
            delta: delta.clone(),
            m0,
            theta,
            eta,
            gamma,
            lambda,
            m_cap,
            toy: false,
        };
        params.assert_derived_inequalities(k)?;
        Ok(params)
    }

    /// Fully caller-supplied parameters, flagged toy. Only basic sanity is
    /// enforced; procedures report HypothesisNotMet when a toy constant
    /// breaks a step.
    #[allow(clippy::too_many_arguments)]
    pub fn toy(k: u16, delta: Q, m0: u64, theta: Q, eta: Q, gamma: Q, m_cap: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::AlphabetTooSmall(k as u64));
        }
        for (name, v) in [("delta", &delta), ("theta", &theta), ("eta", &eta), ("gamma", &gamma)] {
            if *v <= Q::zero() || *v > Q::one() {
                return Err(Error::ParameterOutOfRange(format!(
                    "{name} = {} must lie in (0, 1]",
                    fmt_q(v)
                )));
            }
        }
        let lambda = q_int(k as i64 + 1) / q_int(k as i64);
        Ok(ProofParameters { delta, m0, theta, eta, gamma, lambda, m_cap, toy: true })
    }

    /// The derived invariants used downstream: eta < theta/2 (fiber
    /// intersection) and eta^2/2 >= gamma (early correlation branch).
    fn assert_derived_inequalities(&self, k: u16) -> Result<()> {
        let half_theta = self.theta.clone() / q_int(2);
        if self.eta >= half_theta {
            return Err(Error::internal("proof_parameters", "eta < theta/2 violated"));
        }
        let half_eta_sq = self.eta.clone() * self.eta.clone() / q_int(2);
        if half_eta_sq < self.gamma {
            return Err(Error::internal("proof_parameters", "eta^2/2 >= gamma violated"));
        }
        let lam_pow = q_pow(&self.lambda, self.m_cap as i64);
        if lam_pow < self.eta.clone().recip() {
            return Err(Error::internal("proof_parameters", "lambda^M0 >= 1/eta violated"));
        }
        let _ = k;
        Ok(())
    }

    /// Same constants with a different target density, keeping the toy flag.
    pub fn with_delta(&self, delta: Q) -> Self {
        ProofParameters { delta, toy: self.toy, ..self.clone() }
    }
}

/// Least `t >= 0` with `base^t >= bound`, by exact comparison.
fn least_power_at_least(base: &Q, bound: &Q) -> u64 {
    debug_assert!(*base > Q::one());
    let mut t = 0u64;
    let mut acc = Q::one();
    while acc < *bound {
        acc *= base.clone();
        t += 1;
    }
    t
}

/// The tiling invariants beta, m, M1 and the per-round gain Theta.
#[derive(Clone, Debug, Serialize)]
pub struct TilingParameters {
    #[serde(serialize_with = "ser_q")]
    pub beta: Q,
    pub m: u16,
    pub m1: u16,
    #[serde(serialize_with = "ser_q")]
    pub theta_gain: Q,
    pub toy: bool,
}

impl TilingParameters {
    /// `Theta = beta * (k+1+m)^(-M1) * (k+1)^(m-M1)`, for alphabet `k+1`.
    /// `ambient_k` is the full alphabet size (the paper's `k+1`).
    pub fn new(ambient_k: u16, beta: Q, m: u16, m1: u16, toy: bool) -> Result<Self> {
        if beta <= Q::zero() || beta > Q::one() {
            return Err(Error::ParameterOutOfRange("beta must satisfy 0 < beta <= 1".into()));
        }
        if m < 1 || m1 < m {
            return Err(Error::ParameterOutOfRange(format!(
                "tiling dimensions need 1 <= m <= M1, got m={m}, M1={m1}"
            )));
        }
        let candidates = q_int(ambient_k as i64 + m as i64);
        let theta_gain = beta.clone()
            * q_pow(&candidates, -(m1 as i64))
            * q_pow(&q_int(ambient_k as i64), m as i64 - m1 as i64);
        if theta_gain <= Q::zero() || theta_gain >= Q::one() {
            return Err(Error::ParameterOutOfRange(format!(
                "per-round gain Theta = {} outside (0, 1)",
                fmt_q(&theta_gain)
            )));
        }
        Ok(TilingParameters { beta, m, m1, theta_gain, toy })
    }

    /// Maximum number of completed rounds: each gains at least Theta.
    pub fn round_cap(&self) -> u64 {
        let inv = self.theta_gain.clone().recip();
        let floor: BigInt = inv.floor().to_integer();
        floor.try_into().unwrap_or(u64::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::q;

    #[test]
    fn derived_parameters_match_formulas() {
        // k = 2, delta = 1, m0 = 9: lines = 3^9 - 2^9 = 19171.
        let p = ProofParameters::derive(2, &q_int(1), 9).unwrap();
        assert_eq!(p.theta, q(1, 76684));
        assert_eq!(p.eta, q(1, 3680832));
        let eta_sq = q(1, 3680832) * q(1, 3680832);
        assert_eq!(p.gamma, eta_sq / q_int(2));
        assert_eq!(p.lambda, q(3, 2));
        assert!(!p.toy);
        // theta * lines = delta / 4 exactly.
        let lines = q_int(19171);
        assert_eq!(p.theta.clone() * lines, q(1, 4));
        // M0 dominates the real log ratio: lambda^M0 >= 1/eta.
        assert!(q_pow(&p.lambda, p.m_cap as i64) >= p.eta.recip());
        assert!(p.m_cap > 9);
    }

    #[test]
    fn toy_parameters_are_flagged() {
        let p = ProofParameters::toy(2, q(2, 3), 1, q(1, 4), q(1, 48), q(1, 6912), 1).unwrap();
        assert!(p.toy);
        assert!(ProofParameters::toy(2, q(3, 2), 1, q(1, 4), q(1, 48), q(1, 2), 1).is_err());
    }

    #[test]
    fn tiling_gain_formula() {
        // ambient alphabet 3 (k = 2): Theta = beta * 4^-1 * 3^0 = beta/4.
        let t = TilingParameters::new(3, q(1, 8), 1, 1, true).unwrap();
        assert_eq!(t.theta_gain, q(1, 32));
        assert_eq!(t.round_cap(), 32);
        assert!(TilingParameters::new(3, q_int(1), 1, 0, true).is_err());
    }
}
