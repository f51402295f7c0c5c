//! File formats, run metrics and the batch harness.

pub mod batch;
pub mod instance;
pub mod report;
pub mod solution;

pub use batch::{run_batch, write_batch_csv, BatchOptions, BatchRow};
pub use instance::{parse_instance, read_instance_file, write_instance};
pub use report::{compute_metrics, RunRecord};
pub use solution::{read_solution, write_solution};
