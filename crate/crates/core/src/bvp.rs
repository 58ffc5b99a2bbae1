//! Boundary value problem
//!
//! ```text
//! D^{α,β} z = f(t, z),   I^{1−γ}[c·z(a⁺) + d·z(b⁻)] = e,
//! ```
//!
//! recast as the fixed point `z = T z` with
//!
//! ```text
//! (T z)(t) = (t−a)^{γ−1}/Γ(γ) · e/(d(1+c/d))
//!          − 1/(1+c/d) · (t−a)^{γ−1}/Γ(γ) · I^{1−γ+α}F(b)
//!          + I^{α}F(t),                      F(s) = f(s, z(s)).
//! ```
//!
//! Everything is carried in the weighted space `C_{1−γ}`, where the first
//! two terms are constants.

use std::ops::RangeInclusive;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::fracops::{extrapolate_to_left, hilfer_derivative, output_sigma, row_weights, FracOrder, RlOperator};
use crate::grid::{Grid, WeightedGridFunction};
use crate::specfun::gamma;

/// Optional a-priori bounds on `f` used by the existence checks.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HypothesisBounds {
    /// `N` in `|f(t, z)| ≤ N(1 + ζ‖z‖)`.
    pub n_bound: Option<f64>,
    pub zeta: Option<f64>,
    /// Lipschitz constant of `f` in `z`.
    pub lipschitz: Option<f64>,
    /// Majorant `η(t) ≥ |f(t, z)|` for all `z`.
    pub eta: Option<Expr>,
}

/// Data of the boundary value problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    order: FracOrder,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    e: f64,
    f: Expr,
    bounds: HypothesisBounds,
}

impl ProblemSpec {
    #[allow(clippy::too_many_arguments)]
    pub fn new(alpha: f64, beta: f64, a: f64, b: f64, c: f64, d: f64, e: f64, f: Expr) -> Result<Self> {
        let order = FracOrder::new(alpha, beta)?;
        for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d), ("e", e)] {
            if !v.is_finite() {
                return Err(Error::Input(format!("{name} must be finite, got {v}")));
            }
        }
        if b <= a {
            return Err(Error::Input(format!("need a < b, got a = {a}, b = {b}")));
        }
        if d == 0.0 {
            return Err(Error::DegenerateBoundary("d = 0".into()));
        }
        if c + d == 0.0 {
            return Err(Error::DegenerateBoundary("c + d = 0, so 1 + c/d vanishes".into()));
        }
        Ok(ProblemSpec { order, a, b, c, d, e, f, bounds: HypothesisBounds::default() })
    }

    pub fn with_bounds(mut self, bounds: HypothesisBounds) -> Result<Self> {
        for (name, v) in [("N", bounds.n_bound), ("zeta", bounds.zeta), ("L", bounds.lipschitz)] {
            if let Some(v) = v {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(Error::Input(format!("bound {name} must be finite and >= 0, got {v}")));
                }
            }
        }
        self.bounds = bounds;
        Ok(self)
    }

    /// The worked example: `α = 1/2`, `β = 1/3` on `[0, 1]` with
    /// `c = 1/4`, `d = 3/4`, `e = 2/5` and
    /// `f = t^{−1/6} + t^{5/6} sin(z)/16`, with `N = 1`, `ζ = L = 1/16`
    /// and `η = t^{−1/6} + t^{5/6}/16`.
    pub fn worked_example() -> ProblemSpec {
        let f = parse("t^(-1/6) + (1/16)*t^(5/6)*sin(z)").expect("valid expression");
        let eta = parse("t^(-1/6) + (1/16)*t^(5/6)").expect("valid expression");
        ProblemSpec::new(0.5, 1.0 / 3.0, 0.0, 1.0, 0.25, 0.75, 0.4, f)
            .and_then(|p| {
                p.with_bounds(HypothesisBounds {
                    n_bound: Some(1.0),
                    zeta: Some(1.0 / 16.0),
                    lipschitz: Some(1.0 / 16.0),
                    eta: Some(eta),
                })
            })
            .expect("worked example is valid")
    }

    pub fn order(&self) -> FracOrder {
        self.order
    }

    pub fn alpha(&self) -> f64 {
        self.order.alpha()
    }

    pub fn beta(&self) -> f64 {
        self.order.beta()
    }

    pub fn gamma(&self) -> f64 {
        self.order.gamma()
    }

    /// Weight exponent `1 − γ` of the solution space (exactly zero for `β = 1`).
    pub fn sigma(&self) -> f64 {
        let s = 1.0 - self.gamma();
        if s < 1e-14 {
            0.0
        } else {
            s
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn e(&self) -> f64 {
        self.e
    }

    pub fn f(&self) -> &Expr {
        &self.f
    }

    pub fn bounds(&self) -> &HypothesisBounds {
        &self.bounds
    }

    pub fn with_rhs(mut self, f: Expr) -> Self {
        self.f = f;
        self
    }

    /// `1/(1 + c/d)`.
    pub fn boundary_factor(&self) -> f64 {
        1.0 / (1.0 + self.c / self.d)
    }

    /// Weighted value of the homogeneous part, `e / (Γ(γ)·d·(1 + c/d))`.
    pub fn boundary_constant(&self) -> Result<f64> {
        Ok(self.e / (gamma(self.gamma())? * self.d * (1.0 + self.c / self.d)))
    }

    pub fn grid(&self, n_panels: usize, grading: f64) -> Result<Arc<Grid>> {
        Ok(Arc::new(Grid::new(self.a, self.b, n_panels, grading)?))
    }

    fn check_grid(&self, grid: &Grid) -> Result<()> {
        if grid.a() != self.a || grid.b() != self.b {
            return Err(Error::Input(format!(
                "grid spans [{}, {}] but the problem lives on [{}, {}]",
                grid.a(),
                grid.b(),
                self.a,
                self.b
            )));
        }
        Ok(())
    }
}

/// `(t−a)^{γ−1}/Γ(γ) · e/(d(1+c/d))` in weighted form: a constant.
pub fn boundary_term(p: &ProblemSpec, grid: &Arc<Grid>) -> Result<WeightedGridFunction> {
    p.check_grid(grid)?;
    let k = p.boundary_constant()?;
    WeightedGridFunction::from_weighted_fn(grid.clone(), p.sigma(), |_| k)
}

/// `T` assembled on a fixed grid, with all quadrature weights cached.
#[derive(Debug, Clone)]
pub struct IntegralOperator {
    problem: ProblemSpec,
    grid: Arc<Grid>,
    sigma: f64,
    gamma_of_gamma: f64,
    boundary_constant: f64,
    /// `I^α` on inputs of weight `1 − γ`.
    i_alpha: RlOperator,
    /// Row of `I^{1−γ+α}` at `b`.
    tail_row: Vec<f64>,
    /// Row of `I^{1−γ}` at `b`; `None` when `γ = 1` and the operator is the identity.
    functional_row: Option<Vec<f64>>,
    /// `(t_i − a)^{1−γ}`.
    node_weights: Vec<f64>,
}

impl IntegralOperator {
    pub fn new(p: &ProblemSpec, grid: Arc<Grid>) -> Result<IntegralOperator> {
        p.check_grid(&grid)?;
        let sigma = p.sigma();
        let n = grid.n_panels();
        let functional_row = if sigma > 0.0 {
            Some(row_weights(grid.clone(), sigma, sigma, n)?)
        } else {
            None
        };
        Ok(IntegralOperator {
            i_alpha: RlOperator::new(grid.clone(), p.alpha(), sigma)?,
            tail_row: row_weights(grid.clone(), sigma + p.alpha(), sigma, n)?,
            functional_row,
            node_weights: grid.offsets().iter().map(|x| if sigma > 0.0 { x.powf(sigma) } else { 1.0 }).collect(),
            gamma_of_gamma: gamma(p.gamma())?,
            boundary_constant: p.boundary_constant()?,
            problem: p.clone(),
            grid,
            sigma,
        })
    }

    pub fn problem(&self) -> &ProblemSpec {
        &self.problem
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    fn check(&self, z: &WeightedGridFunction) -> Result<()> {
        if z.sigma() != self.sigma {
            return Err(Error::Input(format!(
                "expected weight exponent 1 - gamma = {}, got {}",
                self.sigma,
                z.sigma()
            )));
        }
        if **z.grid() != *self.grid {
            return Err(Error::Input("grid function is not on the operator's grid".into()));
        }
        Ok(())
    }

    /// `F(s) = f(s, z(s))` stored with weight `1 − γ`.
    ///
    /// `f` may blow up at `a`, so the limit at node 0 is extrapolated from
    /// nodes 1 and 2 (for `γ = 1`, `f(a, z(a))` is tried first).
    pub fn compose_rhs(&self, z: &WeightedGridFunction) -> Result<WeightedGridFunction> {
        self.check(z)?;
        let f = &self.problem.f;
        let mut w: Vec<f64> = (0..z.len())
            .into_par_iter()
            .map(|i| {
                if i == 0 {
                    return Ok(0.0);
                }
                let fi = f.eval(self.grid.node(i), z.unweighted_value(i)?)?;
                Ok(self.node_weights[i] * fi)
            })
            .collect::<Result<_>>()?;
        let x = self.grid.offsets();
        w[0] = match (self.sigma == 0.0).then(|| f.eval(self.grid.a(), z.weighted()[0])) {
            Some(Ok(v)) => v,
            _ => extrapolate_to_left(x[1], x[2], w[1], w[2]),
        };
        WeightedGridFunction::new(self.grid.clone(), self.sigma, w)
    }

    pub fn apply(&self, z: &WeightedGridFunction) -> Result<WeightedGridFunction> {
        let rhs = self.compose_rhs(z)?;
        self.apply_to_rhs(&rhs)
    }

    /// `T` with `F` already composed.
    pub fn apply_to_rhs(&self, rhs: &WeightedGridFunction) -> Result<WeightedGridFunction> {
        let tail: f64 = self.tail_row.iter().zip(rhs.weighted()).map(|(r, w)| r * w).sum();
        let shift = self.boundary_constant
            - self.problem.boundary_factor() / self.gamma_of_gamma * tail;
        let volterra = self.i_alpha.apply(rhs)?.reweighted(self.sigma)?;
        let w = volterra.weighted().iter().map(|v| shift + v).collect();
        WeightedGridFunction::new(self.grid.clone(), self.sigma, w)
    }

    /// `c·I^{1−γ}z(a⁺) + d·I^{1−γ}z(b)`, using `I^{1−γ}z(a⁺) = Γ(γ)·w(a)`.
    pub fn boundary_functional(&self, z: &WeightedGridFunction) -> Result<f64> {
        self.check(z)?;
        let w = z.weighted();
        let at_b = match &self.functional_row {
            Some(row) => row.iter().zip(w).map(|(r, w)| r * w).sum(),
            None => w[w.len() - 1],
        };
        Ok(self.problem.c * self.gamma_of_gamma * w[0] + self.problem.d * at_b)
    }
}

/// One application of `T`; builds the operator, so prefer
/// [`IntegralOperator`] for repeated use.
pub fn apply_t(p: &ProblemSpec, z: &WeightedGridFunction) -> Result<WeightedGridFunction> {
    IntegralOperator::new(p, z.grid().clone())?.apply(z)
}

pub fn boundary_functional(p: &ProblemSpec, z: &WeightedGridFunction) -> Result<f64> {
    let sigma = p.sigma();
    if z.sigma() != sigma {
        return Err(Error::Input(format!("expected weight exponent {sigma}, got {}", z.sigma())));
    }
    let w = z.weighted();
    let at_b = if sigma > 0.0 {
        let row = row_weights(z.grid().clone(), sigma, sigma, z.grid().n_panels())?;
        row.iter().zip(w).map(|(r, w)| r * w).sum()
    } else {
        w[w.len() - 1]
    };
    Ok(p.c * gamma(p.gamma())? * w[0] + p.d * at_b)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Growth factor that, sustained over three consecutive steps, stops the
    /// iteration as divergent.
    pub divergence_factor: f64,
}

impl Default for PicardOptions {
    fn default() -> Self {
        PicardOptions { tol: 1e-10, max_iter: 200, divergence_factor: 1.5 }
    }
}

/// Consecutive growth steps that flag divergence.
const DIVERGENCE_RUN: usize = 3;

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub solution: WeightedGridFunction,
    pub iterations: usize,
    /// `‖z_{k+1} − z_k‖_{C_{1−γ}}` per iteration.
    pub step_norms: Vec<f64>,
    pub converged: bool,
    pub diverging: bool,
    /// `‖z − T z‖`; `None` if `T z` could not be evaluated.
    pub volterra_residual: Option<f64>,
    /// `|c·I^{1−γ}z(a⁺) + d·I^{1−γ}z(b) − e|`.
    pub boundary_residual: Option<f64>,
}

/// Serializable summary of a [`SolveResult`].
#[derive(Debug, Clone, Serialize)]
pub struct SolveDiagnostics {
    pub iterations: usize,
    pub converged: bool,
    pub diverging: bool,
    pub step_norms: Vec<f64>,
    pub volterra_residual: Option<f64>,
    pub boundary_residual: Option<f64>,
    pub solution_norm: f64,
}

impl SolveResult {
    pub fn diagnostics(&self) -> SolveDiagnostics {
        SolveDiagnostics {
            iterations: self.iterations,
            converged: self.converged,
            diverging: self.diverging,
            step_norms: self.step_norms.clone(),
            volterra_residual: self.volterra_residual,
            boundary_residual: self.boundary_residual,
            solution_norm: self.solution.weighted_norm(),
        }
    }

    /// `‖z_{k+1} − z_k‖ / ‖z_k − z_{k−1}‖` for consecutive steps.
    pub fn step_ratios(&self) -> Vec<f64> {
        self.step_norms.windows(2).map(|w| w[1] / w[0]).collect()
    }
}

/// Successive approximation `z_{k+1} = T z_k` from `z_0 = boundary_term`.
pub fn solve_picard(p: &ProblemSpec, grid: &Arc<Grid>, opts: PicardOptions) -> Result<SolveResult> {
    if !(opts.tol > 0.0) || opts.max_iter == 0 || !(opts.divergence_factor > 1.0) {
        return Err(Error::Input(format!(
            "need tol > 0, max_iter >= 1, divergence_factor > 1; got {opts:?}"
        )));
    }
    let op = IntegralOperator::new(p, grid.clone())?;
    solve_with_operator(&op, opts)
}

/// As [`solve_picard`], reusing a prepared operator.
pub fn solve_with_operator(op: &IntegralOperator, opts: PicardOptions) -> Result<SolveResult> {
    let p = op.problem();
    let mut z = boundary_term(p, op.grid())?;
    let mut step_norms: Vec<f64> = Vec::new();
    let mut converged = false;
    let mut diverging = false;
    let mut growth_run = 0;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        let next = op.apply(&z)?;
        let step = next.distance(&z)?;
        iterations += 1;
        z = next;
        if let Some(&prev) = step_norms.last() {
            growth_run = if step >= opts.divergence_factor * prev { growth_run + 1 } else { 0 };
        }
        step_norms.push(step);
        if step < opts.tol {
            converged = true;
            break;
        }
        if growth_run >= DIVERGENCE_RUN || !step.is_finite() {
            diverging = true;
            break;
        }
    }
    let volterra_residual = op.apply(&z).and_then(|tz| tz.distance(&z)).ok();
    let boundary_residual = op.boundary_functional(&z).ok().map(|v| (v - p.e()).abs());
    Ok(SolveResult {
        solution: z,
        iterations,
        step_norms,
        converged,
        diverging,
        volterra_residual,
        boundary_residual,
    })
}

/// Max over `nodes` of `|D^{α,β}z(t_i) − f(t_i, z(t_i))|`, with the
/// derivative computed numerically.
pub fn hilfer_residual(
    p: &ProblemSpec,
    z: &WeightedGridFunction,
    nodes: RangeInclusive<usize>,
) -> Result<f64> {
    let dz = hilfer_derivative(p.order(), z)?;
    let mut worst: f64 = 0.0;
    for i in nodes {
        if i == 0 {
            continue;
        }
        let lhs = dz.unweighted_value(i)?;
        let rhs = p.f().eval(z.grid().node(i), z.unweighted_value(i)?)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// Weight exponent of `I^α F` before it is lifted back to `1 − γ`.
pub fn volterra_sigma(p: &ProblemSpec) -> f64 {
    output_sigma(p.alpha(), p.sigma())
}
