//! Discrete-time resource allocation: tasks draw demand each timestep from a
//! shared capacity, and a policy decides each task's share.
//!
//! Served demand per task is `min(demand, allocation)`; utilization at a
//! timestep is total served over total allocated capacity.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::efficiency::EfficiencySchedule;
use crate::error::{Error, Result};
use crate::metrics::relative_improvement;
use crate::rng::SeededRng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    HighDemand,
    Emergency,
    Scalability,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [ScenarioKind::HighDemand, ScenarioKind::Emergency, ScenarioKind::Scalability];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::HighDemand => "high_demand",
            ScenarioKind::Emergency => "emergency",
            ScenarioKind::Scalability => "scalability",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| {
            Error::config(format!("unknown scenario `{s}` (valid: high_demand, emergency, scalability)"))
        })
    }
}

/// Generator and policy constants. Demand for task `i` is built around a
/// base level `b_i = load * capacity * w_i / sum(w)`, with `w_i` uniform in
/// `[1 - base_spread, 1 + base_spread]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioParams {
    pub horizon: usize,
    pub tasks: usize,
    /// Total resource units per timestep.
    pub capacity: f64,
    /// Mean total base demand as a fraction of capacity; per-kind default
    /// when absent.
    pub load: Option<f64>,
    pub base_spread: f64,
    /// high_demand: `b_i (1 + amplitude sin(2 pi t / period + phase_i))`.
    pub amplitude: f64,
    /// high_demand period in timesteps; `horizon / 2` when absent.
    pub period: Option<f64>,
    /// emergency: one task's demand multiplied by this during the burst.
    pub spike_factor: f64,
    /// emergency: burst length as a fraction of the horizon (rounded up).
    pub spike_fraction: f64,
    /// scalability: demand ramps linearly from 1x to this multiple of base.
    pub ramp_to: f64,
    /// Timesteps between reallocations of the adaptive policy.
    pub review_period: usize,
    /// Adaptive responsiveness curve; `k = 10 / horizon`, `t0 = horizon / 3`
    /// when absent.
    pub k: Option<f64>,
    pub t0: Option<f64>,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            horizon: 200,
            tasks: 5,
            capacity: 100.0,
            load: None,
            base_spread: 0.8,
            amplitude: 0.8,
            period: None,
            spike_factor: 3.0,
            spike_fraction: 0.1,
            ramp_to: 2.5,
            review_period: 5,
            k: None,
            t0: None,
        }
    }
}

impl ScenarioParams {
    pub fn default_load(kind: ScenarioKind) -> f64 {
        match kind {
            ScenarioKind::HighDemand => 0.95,
            ScenarioKind::Emergency => 0.95,
            ScenarioKind::Scalability => 0.5,
        }
    }

    pub fn load_for(&self, kind: ScenarioKind) -> f64 {
        self.load.unwrap_or_else(|| Self::default_load(kind))
    }

    pub fn schedule(&self) -> Result<EfficiencySchedule> {
        let d = EfficiencySchedule::for_budget(self.horizon);
        EfficiencySchedule::new(self.k.unwrap_or(d.k()), self.t0.unwrap_or(d.t0()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon < 10 {
            return Err(Error::config("scenario horizon must be >= 10"));
        }
        if self.tasks < 2 {
            return Err(Error::config("scenario needs at least 2 tasks"));
        }
        if !(self.capacity > 0.0 && self.capacity.is_finite()) {
            return Err(Error::config("capacity must be positive"));
        }
        if let Some(l) = self.load {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::config("load must be positive"));
            }
        }
        if !(0.0..1.0).contains(&self.base_spread) {
            return Err(Error::config("base_spread must lie in [0, 1)"));
        }
        if !(0.0..=1.0).contains(&self.amplitude) {
            return Err(Error::config("amplitude must lie in [0, 1]"));
        }
        if let Some(p) = self.period {
            if !(p > 0.0) {
                return Err(Error::config("period must be positive"));
            }
        }
        if !(self.spike_factor >= 1.0) || !(self.spike_fraction > 0.0 && self.spike_fraction <= 1.0) {
            return Err(Error::config("spike_factor must be >= 1 and spike_fraction in (0, 1]"));
        }
        if !(self.ramp_to > 0.0) {
            return Err(Error::config("ramp_to must be positive"));
        }
        if self.review_period == 0 {
            return Err(Error::config("review_period must be >= 1"));
        }
        self.schedule()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    /// `demand[t][task]`.
    pub demand: Vec<Vec<f64>>,
    /// Capacity per timestep.
    pub capacity: Vec<f64>,
}

impl Scenario {
    pub fn new(name: impl Into<String>, demand: Vec<Vec<f64>>, capacity: Vec<f64>) -> Result<Self> {
        if demand.is_empty() || demand.len() != capacity.len() {
            return Err(Error::config("scenario needs one capacity value per timestep"));
        }
        let tasks = demand[0].len();
        if tasks == 0 || demand.iter().any(|row| row.len() != tasks) {
            return Err(Error::config("every timestep needs the same number of task demands"));
        }
        if demand.iter().flatten().any(|d| !(*d >= 0.0 && d.is_finite())) {
            return Err(Error::config("demands must be finite and >= 0"));
        }
        if capacity.iter().any(|c| !(*c > 0.0 && c.is_finite())) {
            return Err(Error::config("capacity must be positive at every timestep"));
        }
        Ok(Self {
            name: name.into(),
            demand,
            capacity,
        })
    }

    pub fn horizon(&self) -> usize {
        self.demand.len()
    }

    pub fn tasks(&self) -> usize {
        self.demand[0].len()
    }
}

pub fn generate_scenario(kind: ScenarioKind, params: &ScenarioParams, rng: &mut SeededRng) -> Result<Scenario> {
    params.validate()?;
    let (h, n) = (params.horizon, params.tasks);
    let total = params.load_for(kind) * params.capacity;
    let weights: Vec<f64> = (0..n)
        .map(|_| 1.0 + params.base_spread * (2.0 * rng.gen::<f64>() - 1.0))
        .collect();
    let wsum: f64 = weights.iter().sum();
    let base: Vec<f64> = weights.iter().map(|w| total * w / wsum).collect();

    let demand: Vec<Vec<f64>> = match kind {
        ScenarioKind::HighDemand => {
            let period = params.period.unwrap_or(h as f64 / 2.0);
            let phases: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 2.0 * PI).collect();
            (0..h)
                .map(|t| {
                    (0..n)
                        .map(|i| base[i] * (1.0 + params.amplitude * (2.0 * PI * t as f64 / period + phases[i]).sin()))
                        .collect()
                })
                .collect()
        }
        ScenarioKind::Emergency => {
            let len = spike_length(h, params.spike_fraction);
            let onset = rng.gen_range(0..=h - len);
            let task = *(0..n).collect::<Vec<_>>().choose(rng).expect("n >= 2");
            (0..h)
                .map(|t| {
                    let mut row = base.clone();
                    if (onset..onset + len).contains(&t) {
                        row[task] *= params.spike_factor;
                    }
                    row
                })
                .collect()
        }
        ScenarioKind::Scalability => (0..h)
            .map(|t| {
                let scale = 1.0 + (params.ramp_to - 1.0) * t as f64 / (h - 1) as f64;
                base.iter().map(|b| b * scale).collect()
            })
            .collect(),
    };
    Scenario::new(kind.as_str(), demand, vec![params.capacity; h])
}

/// Number of burst timesteps for an emergency scenario.
pub fn spike_length(horizon: usize, fraction: f64) -> usize {
    // Guard against 0.1 * 200 = 20.000000000000004 rounding up to 21.
    let raw = fraction * horizon as f64;
    let len = if (raw - raw.round()).abs() < 1e-9 { raw.round() } else { raw.ceil() };
    (len as usize).clamp(1, horizon)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    Static,
    DeAdaptive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AllocationPolicy {
    pub kind: PolicyKind,
    /// Fixed shares for the static policy; initial forecast for the
    /// adaptive one.
    pub static_share: Vec<f64>,
    pub schedule: Option<EfficiencySchedule>,
    pub review_period: usize,
}

impl AllocationPolicy {
    pub fn static_equal(tasks: usize) -> Self {
        Self {
            kind: PolicyKind::Static,
            static_share: vec![1.0 / tasks as f64; tasks],
            schedule: None,
            review_period: 1,
        }
    }

    /// Reallocates every `review_period` steps, starting from equal shares.
    pub fn de_adaptive(tasks: usize, schedule: EfficiencySchedule, review_period: usize) -> Self {
        Self {
            kind: PolicyKind::DeAdaptive,
            static_share: vec![1.0 / tasks as f64; tasks],
            schedule: Some(schedule),
            review_period,
        }
    }

    pub fn validate(&self, tasks: usize) -> Result<()> {
        if self.static_share.len() != tasks {
            return Err(Error::config(format!(
                "policy has {} shares for {tasks} tasks",
                self.static_share.len()
            )));
        }
        if self.static_share.iter().any(|s| !(*s >= 0.0)) {
            return Err(Error::config("shares must be >= 0"));
        }
        let sum: f64 = self.static_share.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::config(format!("shares sum to {sum}, expected 1")));
        }
        if self.kind == PolicyKind::DeAdaptive && self.schedule.is_none() {
            return Err(Error::config("adaptive policy needs a schedule"));
        }
        if self.review_period == 0 {
            return Err(Error::config("review_period must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UtilizationTrace {
    /// `allocation[t][task]`; rows sum to the timestep capacity.
    pub allocation: Vec<Vec<f64>>,
    pub served: Vec<Vec<f64>>,
    /// Served over allocated, per timestep, in `[0, 1]`.
    pub utilization: Vec<f64>,
}

impl UtilizationTrace {
    /// Mean utilization as a percentage.
    pub fn mean_percent(&self) -> f64 {
        100.0 * self.utilization.iter().sum::<f64>() / self.utilization.len() as f64
    }
}

pub fn simulate(scenario: &Scenario, policy: &AllocationPolicy) -> Result<UtilizationTrace> {
    let n = scenario.tasks();
    policy.validate(n)?;
    let h = scenario.horizon();
    let mut shares = policy.static_share.clone();
    let mut running_sum = vec![0.0; n];
    let mut trace = UtilizationTrace {
        allocation: Vec::with_capacity(h),
        served: Vec::with_capacity(h),
        utilization: Vec::with_capacity(h),
    };

    for t in 0..h {
        if let (PolicyKind::DeAdaptive, Some(sched)) = (policy.kind, &policy.schedule) {
            if t > 0 && t % policy.review_period == 0 {
                let e = sched.at(t as f64);
                let from = t.saturating_sub(policy.review_period);
                let forecast: Vec<f64> = (0..n)
                    .map(|i| {
                        let recent = scenario.demand[from..t].iter().map(|row| row[i]).sum::<f64>() / (t - from) as f64;
                        let long_run = running_sum[i] / t as f64;
                        e * recent + (1.0 - e) * long_run
                    })
                    .collect();
                let total: f64 = forecast.iter().sum();
                if total > 0.0 {
                    shares = forecast.iter().map(|f| f / total).collect();
                }
            }
        }

        let cap = scenario.capacity[t];
        let alloc: Vec<f64> = shares.iter().map(|s| s * cap).collect();
        let served: Vec<f64> = scenario.demand[t].iter().zip(&alloc).map(|(d, a)| d.min(*a)).collect();
        let alloc_total: f64 = alloc.iter().sum();
        let util = (served.iter().sum::<f64>() / alloc_total).clamp(0.0, 1.0);
        for (acc, d) in running_sum.iter_mut().zip(&scenario.demand[t]) {
            *acc += d;
        }
        trace.allocation.push(alloc);
        trace.served.push(served);
        trace.utilization.push(util);
    }
    Ok(trace)
}

/// `100 * (after - before) / before`.
pub fn optimization_gain(before: f64, after: f64) -> Result<f64> {
    if before == 0.0 {
        return Err(Error::Domain("optimization gain needs a nonzero before value".into()));
    }
    relative_improvement(after, before)
}

/// Before/after comparison for one scenario. Absent sides are omitted from
/// the JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub scenario: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub utilization_before_pct: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub utilization_after_pct: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimization_gain_pct: Option<f64>,
}

impl SimulationSummary {
    pub fn new(scenario: &str, before: Option<f64>, after: Option<f64>) -> Result<Self> {
        let gain = match (before, after) {
            (Some(b), Some(a)) => Some(optimization_gain(b, a)?),
            _ => None,
        };
        Ok(Self {
            scenario: scenario.to_string(),
            utilization_before_pct: before,
            utilization_after_pct: after,
            optimization_gain_pct: gain,
        })
    }
}

/// CSV with columns `timestep, demand_i..., allocation_i..., utilization`.
pub fn write_trace_csv<W: Write>(scenario: &Scenario, trace: &UtilizationTrace, out: W) -> Result<()> {
    let n = scenario.tasks();
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["timestep".to_string()];
    header.extend((0..n).map(|i| format!("demand_{i}")));
    header.extend((0..n).map(|i| format!("allocation_{i}")));
    header.push("utilization".into());
    w.write_record(&header)?;
    for t in 0..scenario.horizon() {
        let mut row = vec![t.to_string()];
        row.extend(scenario.demand[t].iter().map(|v| format!("{v:?}")));
        row.extend(trace.allocation[t].iter().map(|v| format!("{v:?}")));
        row.push(format!("{:?}", trace.utilization[t]));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<trace csv>", e))?;
    Ok(())
}
