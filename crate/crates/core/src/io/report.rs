use crate::error::{Error, Result};

/// One benchmark run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub instance_id: String,
    pub seed: u64,
    pub cost: f64,
    pub buy_none_cost: f64,
    /// Improvement over buying nothing up front, in percent.
    pub delta_c_percent: f64,
    /// Distance to a known optimum, in percent.
    pub gap_percent: Option<f64>,
    pub wall_seconds: f64,
    pub iterations: u32,
    pub heuristic_calls: u64,
}

/// Returns `(100 (1 - cost / buy_none), 100 (cost - opt) / opt)`.
pub fn compute_metrics(cost: f64, buy_none_cost: f64, opt: Option<f64>) -> Result<(f64, Option<f64>)> {
    if buy_none_cost.is_nan() || buy_none_cost <= 0.0 {
        return Err(Error::Validation(format!("buy_none cost {buy_none_cost} must be > 0")));
    }
    let gap = match opt {
        Some(o) if o.is_nan() || o <= 0.0 => return Err(Error::Validation(format!("optimum {o} must be > 0"))),
        Some(o) => Some(100.0 * (cost - o) / o),
        None => None,
    };
    Ok((100.0 * (buy_none_cost - cost) / buy_none_cost, gap))
}
