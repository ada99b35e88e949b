//! Solution quality, convergence iteration, throughput, and the percentage
//! arithmetic used in comparison tables.

use serde::{Deserialize, Serialize};

use crate::colony::RunRecord;
use crate::error::{Error, Result};

/// `100 * optimal / found` for a minimization problem.
pub fn solution_quality(found: f64, optimal: f64) -> Result<f64> {
    if !(optimal > 0.0) || !found.is_finite() {
        return Err(Error::Domain(format!("solution quality needs positive costs, got found={found}, optimal={optimal}")));
    }
    if found < optimal {
        return Err(Error::Domain(format!(
            "found cost {found} is below the reference optimum {optimal}; the best-known value is wrong"
        )));
    }
    Ok(100.0 * optimal / found)
}

/// First 1-based iteration `i` such that the relative improvement from
/// iteration `i` to `i + window` is below `eps`. `None` if no full window
/// satisfies this.
pub fn convergence_rate(trajectory: &[f64], window: usize, eps: f64) -> Option<usize> {
    let window = window.max(1);
    if trajectory.len() <= window {
        return None;
    }
    (0..trajectory.len() - window)
        .find(|&i| {
            let (a, b) = (trajectory[i], trajectory[i + window]);
            let drop = a - b;
            let rel = if drop == 0.0 { 0.0 } else { drop / a.abs() };
            rel < eps
        })
        .map(|i| i + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Throughput {
    pub wall_s: f64,
    pub evals_per_s: f64,
}

pub fn computational_efficiency(record: &RunRecord) -> Throughput {
    let wall = record.wall_time;
    let rate = if record.evaluations == 0 || wall <= 0.0 { 0.0 } else { record.evaluations as f64 / wall };
    Throughput {
        wall_s: wall,
        evals_per_s: rate,
    }
}

/// `100 * (candidate - baseline) / baseline`, unrounded.
pub fn relative_improvement(candidate: f64, baseline: f64) -> Result<f64> {
    if !(baseline > 0.0) {
        return Err(Error::Domain(format!("baseline must be positive, got {baseline}")));
    }
    Ok(100.0 * (candidate - baseline) / baseline)
}

/// Rounds half away from zero to one decimal.
pub fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation; zero for a single value.
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Aggregate {
    /// `None` for an empty slice.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len();
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mean = values.iter().sum::<f64>() / n as f64;
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
        };
        let std = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Some(Self {
            mean,
            median,
            std,
            min: sorted[0],
            max: sorted[n - 1],
            count: n,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colony::Solution;

    #[test]
    fn quality_examples() {
        assert_eq!(solution_quality(7542.0, 7542.0).unwrap(), 100.0);
        assert_eq!(round2(solution_quality(7942.0, 7542.0).unwrap()), 94.96);
        assert_eq!(solution_quality(20.0, 10.0).unwrap(), 50.0);
        assert!(solution_quality(9.0, 10.0).is_err());
        assert!(solution_quality(9.0, 0.0).is_err());
    }

    fn round2(x: f64) -> f64 {
        (x * 100.0).round() / 100.0
    }

    #[test]
    fn convergence_examples() {
        assert_eq!(convergence_rate(&[3.0; 10], 5, 1e-4), Some(1));
        let improving: Vec<f64> = (0..20).map(|i| 100.0 * 0.9f64.powi(i)).collect();
        assert_eq!(convergence_rate(&improving, 3, 1e-4), None);
        let mut t = vec![100.0, 90.0];
        t.extend([89.999; 6]);
        assert_eq!(convergence_rate(&t, 2, 1e-3), Some(2));
    }

    #[test]
    fn convergence_handles_zero_costs() {
        assert_eq!(convergence_rate(&[1.0, 0.0, 0.0, 0.0], 2, 1e-4), Some(2));
    }

    #[test]
    fn throughput_examples() {
        let mut rec = RunRecord {
            best_cost_per_iteration: vec![1.0],
            best: Solution::Point(vec![0.0]),
            evaluations: 1000,
            wall_time: 2.0,
            iterations_run: 1,
            params: Vec::new(),
            schedule_resets: 0,
        };
        assert_eq!(computational_efficiency(&rec), Throughput { wall_s: 2.0, evals_per_s: 500.0 });
        rec.evaluations = 0;
        assert_eq!(computational_efficiency(&rec).evals_per_s, 0.0);
    }

    #[test]
    fn improvement_table_cells() {
        for (cand, base, cell) in [(98.5, 95.0, 3.7), (96.8, 93.5, 3.5), (99.2, 96.0, 3.3), (97.5, 94.2, 3.5)] {
            assert_eq!(round1(relative_improvement(cand, base).unwrap()), cell);
        }
        assert_eq!(relative_improvement(5.0, 5.0).unwrap(), 0.0);
        assert!(relative_improvement(5.0, 0.0).is_err());
    }

    #[test]
    fn aggregate_ordering() {
        let a = Aggregate::of(&[3.0, 1.0, 2.0, 10.0]).unwrap();
        assert_eq!((a.min, a.median, a.max, a.mean), (1.0, 2.5, 10.0, 4.0));
        assert!(Aggregate::of(&[]).is_none());
        assert_eq!(Aggregate::of(&[4.0]).unwrap().std, 0.0);
    }
}
