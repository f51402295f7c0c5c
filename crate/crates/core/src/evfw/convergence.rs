use std::time::Duration;

use crate::params::EvfwParams;

/// Counters of the two improvement criteria plus the costs they compare.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceState {
    /// Iterations since the best solution last improved by the minimum ratio.
    pub gic: u32,
    /// Iterations since an iteration last improved on its predecessor.
    pub lic: u32,
    pub best_cost: f64,
    pub last_cost: f64,
    pub elapsed: Duration,
}

impl Default for ConvergenceState {
    fn default() -> Self {
        Self {
            gic: 0,
            lic: 0,
            best_cost: f64::INFINITY,
            last_cost: f64::INFINITY,
            elapsed: Duration::ZERO,
        }
    }
}

/// Folds one iteration's cost into the counters and reports whether to stop.
/// A counter resets when its reference cost exceeds `(1 + i)` times the
/// current cost and increments otherwise. The best cost is updated after
/// the comparison.
pub fn update_convergence(state: ConvergenceState, current_cost: f64, params: &EvfwParams) -> (ConvergenceState, bool) {
    let threshold = (1.0 + params.min_improve) * current_cost;
    let gic = if state.best_cost > threshold { 0 } else { state.gic + 1 };
    let lic = if state.last_cost > threshold { 0 } else { state.lic + 1 };
    let next = ConvergenceState {
        gic,
        lic,
        best_cost: state.best_cost.min(current_cost),
        last_cost: current_cost,
        elapsed: state.elapsed,
    };
    let out_of_time = params.time_limit.is_some_and(|limit| next.elapsed >= limit);
    let stop = gic >= params.max_since_best || lic >= params.max_since_improve || out_of_time;
    (next, stop)
}
