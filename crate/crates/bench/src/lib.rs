//! Shared fixtures for the criterion benchmarks.

use std::sync::Arc;

use hilfer_core::{Grid, ProblemSpec};

/// Graded grid on the worked example's interval.
pub fn worked_grid(n: usize) -> Arc<Grid> {
    Arc::new(Grid::new(0.0, 1.0, n, 2.0).expect("valid grid"))
}

pub fn worked_problem() -> ProblemSpec {
    ProblemSpec::worked_example()
}
