//! Problem files: JSON with the problem data, optional bounds and solver settings.

use std::fs;
use std::path::Path;

use hilfer_core::bvp::HypothesisBounds;
use hilfer_core::{parse, Expr, ProblemSpec};
use serde::Deserialize;

use crate::CliError;

pub const WORKED_EXAMPLE: &str = include_str!("../problems/worked_example.json");

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: String,
    #[serde(default)]
    pub bounds: Option<BoundsFile>,
    #[serde(default)]
    pub solver: Option<SolverFile>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsFile {
    #[serde(rename = "N")]
    pub n: Option<f64>,
    pub zeta: Option<f64>,
    #[serde(rename = "L")]
    pub l: Option<f64>,
    pub eta: Option<String>,
}

#[derive(Debug, Default, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverFile {
    pub nodes: Option<usize>,
    pub grading: Option<f64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
}

pub struct LoadedProblem {
    pub spec: ProblemSpec,
    pub solver: SolverFile,
}

fn expr_field(name: &str, text: &str) -> Result<Expr, CliError> {
    parse(text).map_err(|e| CliError::Input(format!("field `{name}`: {e}")))
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<ProblemFile, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("problem file: {e}")))
    }

    pub fn into_problem(self) -> Result<LoadedProblem, CliError> {
        let f = expr_field("f", &self.f)?;
        let spec = ProblemSpec::new(self.alpha, self.beta, self.a, self.b, self.c, self.d, self.e, f)?;
        let bounds = match self.bounds {
            Some(b) => HypothesisBounds {
                n_bound: b.n,
                zeta: b.zeta,
                lipschitz: b.l,
                eta: b.eta.as_deref().map(|s| expr_field("bounds.eta", s)).transpose()?,
            },
            None => HypothesisBounds::default(),
        };
        Ok(LoadedProblem { spec: spec.with_bounds(bounds)?, solver: self.solver.unwrap_or_default() })
    }
}

pub fn load(path: &Path) -> Result<LoadedProblem, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    ProblemFile::from_json(&text)?.into_problem()
}

pub fn worked_example() -> LoadedProblem {
    ProblemFile::from_json(WORKED_EXAMPLE)
        .and_then(ProblemFile::into_problem)
        .expect("embedded example is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_example_matches_core() {
        assert_eq!(worked_example().spec, ProblemSpec::worked_example());
    }

    #[test]
    fn field_level_errors() {
        let missing = r#"{"alpha": 0.5, "beta": 0.5, "a": 0, "b": 1, "c": 0, "d": 1, "f": "z"}"#;
        let err = ProblemFile::from_json(missing).unwrap_err().to_string();
        assert!(err.contains("missing field `e`"), "{err}");

        let bad_expr = r#"{"alpha": 0.5, "beta": 0.5, "a": 0, "b": 1, "c": 0, "d": 1, "e": 1, "f": "z +"}"#;
        let err = ProblemFile::from_json(bad_expr).unwrap().into_problem().err().unwrap().to_string();
        assert!(err.starts_with("field `f`"), "{err}");

        let unknown = r#"{"alpha": 0.5, "beta": 0.5, "a": 0, "b": 1, "c": 0, "d": 1, "e": 1, "f": "z", "g": 2}"#;
        assert!(ProblemFile::from_json(unknown).unwrap_err().to_string().contains("unknown field `g`"));
    }
}
