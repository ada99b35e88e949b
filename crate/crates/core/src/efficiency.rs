//! Dynamic efficiency: a logistic efficiency curve over solver iterations
//! and its coupling to live colony parameters.
//!
//! `E(t) = 1 / (1 + exp(-k (t - t0)))` rises from ~0 to ~1. Early on (E
//! small) the colony evaporates fast and runs many ants; as E saturates it
//! moves to slow evaporation and a small colony.

use serde::{Deserialize, Serialize};

use crate::colony::ColonyConfig;
use crate::error::{Error, Result};

const SATURATION: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EfficiencySchedule {
    k: f64,
    t0: f64,
    t0_original: f64,
}

impl EfficiencySchedule {
    pub fn new(k: f64, t0: f64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::config(format!("efficiency rate k must be > 0, got {k}")));
        }
        if !t0.is_finite() {
            return Err(Error::config("inflection t0 must be finite"));
        }
        Ok(Self {
            k,
            t0,
            t0_original: t0,
        })
    }

    /// `t0 = budget / 3`, `k = 10 / budget`.
    pub fn for_budget(budget: usize) -> Self {
        let b = budget.max(1) as f64;
        Self {
            k: 10.0 / b,
            t0: b / 3.0,
            t0_original: b / 3.0,
        }
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t0_original(&self) -> f64 {
        self.t0_original
    }

    pub fn at(&self, t: f64) -> f64 {
        efficiency(self, t)
    }
}

pub fn efficiency(sched: &EfficiencySchedule, t: f64) -> f64 {
    let z = sched.k * (t - sched.t0);
    // Both branches share the denominator so that E(t0+d) + E(t0-d) = 1
    // up to a single rounding.
    let e = if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let q = z.exp();
        q / (1.0 + q)
    };
    e.clamp(SATURATION, 1.0 - SATURATION)
}

/// Restarts the curve at `t_now`: `t0 ← t_now + t0_original`.
pub fn reset_inflection(sched: &EfficiencySchedule, t_now: f64) -> EfficiencySchedule {
    EfficiencySchedule {
        t0: t_now + sched.t0_original,
        ..*sched
    }
}

/// How E(t) drives evaporation and colony size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingPolicy {
    pub rho_range: (f64, f64),
    pub ants_range: (usize, usize),
    pub stagnation_window: usize,
    pub stagnation_epsilon: f64,
    pub reset_on_stagnation: bool,
}

impl CouplingPolicy {
    /// Defaults for a colony of `ants`: evaporation in `[0.01, 0.1]`, colony
    /// size in `[ceil(ants/2), ants]`, stagnation window 50 at 1e-4.
    pub fn for_colony(ants: usize) -> Self {
        Self {
            rho_range: (0.01, 0.1),
            ants_range: (ants.div_ceil(2).max(1), ants.max(1)),
            stagnation_window: 50,
            stagnation_epsilon: 1e-4,
            reset_on_stagnation: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (rlo, rhi) = self.rho_range;
        if !(0.0 <= rlo && rlo <= rhi && rhi <= 1.0) {
            return Err(Error::config(format!("rho range [{rlo}, {rhi}] must satisfy 0 <= min <= max <= 1")));
        }
        let (mlo, mhi) = self.ants_range;
        if !(1 <= mlo && mlo <= mhi) {
            return Err(Error::config(format!("ants range [{mlo}, {mhi}] must satisfy 1 <= min <= max")));
        }
        if self.stagnation_window == 0 {
            return Err(Error::config("stagnation window must be >= 1"));
        }
        if !(self.stagnation_epsilon >= 0.0) {
            return Err(Error::config("stagnation epsilon must be >= 0"));
        }
        Ok(())
    }
}

/// `rho = rho_max − E (rho_max − rho_min)`,
/// `ants = round(m_max − E (m_max − m_min))`; everything else unchanged.
pub fn recalibrate(cfg: &ColonyConfig, policy: &CouplingPolicy, e: f64) -> ColonyConfig {
    let (rlo, rhi) = policy.rho_range;
    let (mlo, mhi) = (policy.ants_range.0 as f64, policy.ants_range.1 as f64);
    let rho = (rhi - e * (rhi - rlo)).clamp(rlo, rhi);
    let ants = (mhi - e * (mhi - mlo)).round().clamp(mlo, mhi) as usize;
    ColonyConfig {
        rho,
        ants: Some(ants),
        ..cfg.clone()
    }
}

/// True when the best cost improved by less than `eps` (relative) across
/// the last `window` entries of the trajectory.
pub fn detect_stagnation(trajectory: &[f64], window: usize, eps: f64) -> bool {
    if window == 0 || trajectory.len() < window {
        return false;
    }
    let first = trajectory[trajectory.len() - window];
    let last = trajectory[trajectory.len() - 1];
    let improvement = if first != 0.0 { (first - last) / first.abs() } else { first - last };
    improvement < eps
}

/// Schedule plus coupling, attached to a colony run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DynamicEfficiency {
    pub schedule: EfficiencySchedule,
    pub policy: CouplingPolicy,
}

impl DynamicEfficiency {
    /// Default schedule and coupling for a colony configuration.
    pub fn defaults_for(cfg: &ColonyConfig, n: usize) -> Self {
        Self {
            schedule: EfficiencySchedule::for_budget(cfg.max_iterations),
            policy: CouplingPolicy::for_colony(cfg.ants_for(n)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sched(k: f64, t0: f64) -> EfficiencySchedule {
        EfficiencySchedule::new(k, t0).unwrap()
    }

    #[test]
    fn midpoint_is_half() {
        assert_eq!(efficiency(&sched(0.3, 17.0), 17.0), 0.5);
    }

    #[test]
    fn known_value() {
        // 1 / (1 + e^-2) = 0.880797077977882444... (mpmath, 50 digits); the
        // double nearest to it is ...824, the naive f64 formula gives ...823.
        let e = efficiency(&sched(1.0, 0.0), 2.0);
        assert!((e - 0.8807970779778823).abs() <= 2.0 * f64::EPSILON, "{e}");
        assert!((e - 0.880_797_077_977_882_4).abs() <= f64::EPSILON, "{e}");
    }

    #[test]
    fn point_symmetry() {
        let s = sched(1.0, 5.0);
        assert!((efficiency(&s, 3.0) - (1.0 - efficiency(&s, 7.0))).abs() < 1e-15);
    }

    #[test]
    fn saturates_inside_open_interval() {
        let s = sched(5.0, 0.0);
        assert!(efficiency(&s, 1e6) < 1.0);
        assert!(efficiency(&s, -1e6) > 0.0);
    }

    #[test]
    fn non_positive_rate_rejected() {
        assert!(EfficiencySchedule::new(0.0, 1.0).is_err());
        assert!(EfficiencySchedule::new(-1.0, 1.0).is_err());
    }

    fn policy() -> CouplingPolicy {
        CouplingPolicy {
            rho_range: (0.02, 0.2),
            ants_range: (10, 50),
            ..CouplingPolicy::for_colony(50)
        }
    }

    #[test]
    fn recalibrate_midpoint() {
        let out = recalibrate(&ColonyConfig::default(), &policy(), 0.5);
        assert!((out.rho - 0.11).abs() < 1e-15);
        assert_eq!(out.ants, Some(30));
    }

    #[test]
    fn recalibrate_limits() {
        let cfg = ColonyConfig::default();
        let early = recalibrate(&cfg, &policy(), 1e-12);
        assert!((early.rho - 0.2).abs() < 1e-9);
        assert_eq!(early.ants, Some(50));
        let late = recalibrate(&cfg, &policy(), 1.0 - 1e-12);
        assert!((late.rho - 0.02).abs() < 1e-9);
        assert_eq!(late.ants, Some(10));
        assert_eq!(late.alpha, cfg.alpha);
        assert_eq!(late.max_iterations, cfg.max_iterations);
    }

    #[test]
    fn stagnation_cases() {
        let improving: Vec<f64> = (0..30).map(|i| 100.0 - i as f64).collect();
        assert!(!detect_stagnation(&improving, 10, 1e-6));
        assert!(detect_stagnation(&[5.0; 12], 10, 1e-6));
        assert!(!detect_stagnation(&[5.0; 9], 10, 1e-6));
        let mut t = vec![100.0; 20];
        t.push(99.0);
        assert!(!detect_stagnation(&t, 10, 1e-3));
    }

    #[test]
    fn reset_moves_inflection_forward() {
        let s = sched(0.1, 30.0);
        let r = reset_inflection(&s, 100.0);
        assert!(efficiency(&r, 100.0) < 0.51);
        assert_eq!(r.t0(), 130.0);
        assert_eq!(reset_inflection(&r, 100.0), r);
    }

    #[test]
    fn reset_with_zero_inflection_lands_on_midpoint() {
        let r = reset_inflection(&sched(2.0, 0.0), 42.0);
        assert_eq!(efficiency(&r, 42.0), 0.5);
    }
}
