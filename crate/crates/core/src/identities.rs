//! Self-checks of the fractional operators against closed forms.
//!
//! Each identity reports its measured error next to its tolerance, so a
//! failing run says how far off it was. `tol_scale` multiplies every
//! tolerance.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fracops::{caputo_derivative, hilfer_derivative, power_rule, rl_derivative, rl_integral, FracOrder};
use crate::grid::{Grid, WeightedGridFunction};
use crate::specfun::gamma;

pub const POWER_RULE_MUS: [f64; 3] = [0.3, 0.5, 0.8];
pub const POWER_RULE_PS: [f64; 3] = [0.7, 1.0, 1.5];

const POWER_RULE_TOL: f64 = 1e-4;
const SEMIGROUP_TOL: f64 = 1e-3;
const INTERPOLATION_TOL: f64 = 1e-2;
const VANISHING_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityOutcome {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityOutcome {
    fn new(name: String, measured: f64, tolerance: f64) -> Self {
        IdentityOutcome { name, passed: measured <= tolerance, measured, tolerance }
    }
}

fn graded(n: usize) -> Result<Arc<Grid>> {
    Ok(Arc::new(Grid::new(0.0, 1.0, n, 2.0)?))
}

/// Max relative error of `I^μ (t−a)^{p−1}` against the closed form on
/// nodes `i ≥ N/16`.
pub fn power_rule_error(mu: f64, p: f64, n_panels: usize) -> Result<f64> {
    let grid = graded(n_panels)?;
    // (t−a)^{p−1} in weighted form: weight 1 − p for p < 1, unweighted otherwise
    let sigma = (1.0 - p).max(0.0);
    let g = WeightedGridFunction::from_weighted_fn(grid.clone(), sigma, |x| x.powf(p - 1.0 + sigma))?;
    let out = rl_integral(mu, &g)?;
    let mut worst: f64 = 0.0;
    for i in (n_panels / 16).max(1)..grid.len() {
        let exact = power_rule(mu, p, grid.offset(i))?;
        let got = out.unweighted_value(i)?;
        worst = worst.max(((got - exact) / exact).abs());
    }
    Ok(worst)
}

/// `‖I^{0.4} I^{0.6} cos − I^{1} cos‖_∞` on nodes `i ≥ N/16`.
pub fn semigroup_error(n_panels: usize) -> Result<f64> {
    let grid = graded(n_panels)?;
    let g = WeightedGridFunction::from_unweighted_fn(grid.clone(), 0.0, f64::cos, 1.0)?;
    let twice = rl_integral(0.4, &rl_integral(0.6, &g)?)?;
    let once = rl_integral(1.0, &g)?;
    let mut worst: f64 = 0.0;
    for i in n_panels / 16..grid.len() {
        worst = worst.max((twice.unweighted_value(i)? - once.unweighted_value(i)?).abs());
    }
    Ok(worst)
}

/// Errors of the Hilfer derivative endpoints on `g = t²` over interior nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationErrors {
    /// `β = 0` against the composition `D I^{1−α}`.
    pub rl_composition: f64,
    /// `β = 1` against the composition `I^{1−α} D`.
    pub caputo_composition: f64,
    /// `β = 0` against the closed form `2 t^{2−α}/Γ(3−α)`.
    pub rl_closed_form: f64,
    /// `β = 1` against the same closed form (`t²` vanishes at `a`).
    pub caputo_closed_form: f64,
}

impl InterpolationErrors {
    pub fn max(&self) -> f64 {
        self.rl_composition
            .max(self.caputo_composition)
            .max(self.rl_closed_form)
            .max(self.caputo_closed_form)
    }
}

pub fn interpolation_errors(alpha: f64, n_panels: usize) -> Result<InterpolationErrors> {
    let grid = graded(n_panels)?;
    let g = WeightedGridFunction::from_unweighted_fn(grid.clone(), 0.0, |t| t * t, 0.0)?;
    let max_diff = |x: &WeightedGridFunction, exact: &dyn Fn(usize) -> Result<f64>| -> Result<f64> {
        let mut worst: f64 = 0.0;
        for i in 1..n_panels {
            worst = worst.max((x.unweighted_value(i)? - exact(i)?).abs());
        }
        Ok(worst)
    };
    let scale = 2.0 / gamma(3.0 - alpha)?;
    let closed = |i: usize| Ok(scale * grid.offset(i).powf(2.0 - alpha));
    let h0 = hilfer_derivative(FracOrder::new(alpha, 0.0)?, &g)?;
    let h1 = hilfer_derivative(FracOrder::new(alpha, 1.0)?, &g)?;
    let rl = rl_derivative(alpha, &g)?;
    let caputo = caputo_derivative(alpha, &g)?;
    Ok(InterpolationErrors {
        rl_composition: max_diff(&h0, &|i| rl.unweighted_value(i))?,
        caputo_composition: max_diff(&h1, &|i| caputo.unweighted_value(i))?,
        rl_closed_form: max_diff(&h0, &closed)?,
        caputo_closed_form: max_diff(&h1, &closed)?,
    })
}

/// `I^μ` of a function in `C_σ` with `σ < μ` vanishes at `a` like
/// `(t−a)^{μ−σ}`. Measures the stored limit at `a` plus the deviation of
/// the first-node decay from that rate when the grid is refined.
pub fn vanishing_limit_error(mu: f64, sigma: f64, n_panels: usize) -> Result<f64> {
    if !(sigma < mu) {
        return Err(Error::Order(format!("need sigma < mu, got sigma = {sigma}, mu = {mu}")));
    }
    let first_node = |n: usize| -> Result<(f64, f64, f64)> {
        let grid = graded(n)?;
        let g = WeightedGridFunction::from_weighted_fn(grid.clone(), sigma, f64::cos)?;
        let out = rl_integral(mu, &g)?;
        Ok((out.weighted()[0], out.unweighted_value(1)?, grid.offset(1)))
    };
    let (limit, coarse, x_coarse) = first_node(n_panels)?;
    let (_, fine, x_fine) = first_node(2 * n_panels)?;
    let expected = (x_fine / x_coarse).powf(mu - sigma);
    Ok(limit.abs().max((fine / coarse - expected).abs()))
}

/// Runs every identity; tolerances are multiplied by `tol_scale`.
pub fn run_battery(tol_scale: f64) -> Result<Vec<IdentityOutcome>> {
    if !(tol_scale > 0.0 && tol_scale.is_finite()) {
        return Err(Error::Input(format!("tol_scale must be positive, got {tol_scale}")));
    }
    let pairs: Vec<(f64, f64)> = POWER_RULE_MUS
        .iter()
        .flat_map(|&mu| POWER_RULE_PS.iter().map(move |&p| (mu, p)))
        .collect();
    let mut outcomes: Vec<IdentityOutcome> = pairs
        .par_iter()
        .map(|&(mu, p)| {
            let err = power_rule_error(mu, p, 2048)?;
            Ok(IdentityOutcome::new(format!("power_rule mu={mu} p={p}"), err, POWER_RULE_TOL * tol_scale))
        })
        .collect::<Result<_>>()?;
    outcomes.push(IdentityOutcome::new(
        "semigroup I^0.4 I^0.6 = I^1".into(),
        semigroup_error(1024)?,
        SEMIGROUP_TOL * tol_scale,
    ));
    let interp = interpolation_errors(0.5, 4096)?;
    for (name, err) in [
        ("hilfer beta=0 = riemann-liouville", interp.rl_composition),
        ("hilfer beta=1 = caputo", interp.caputo_composition),
        ("hilfer beta=0 on t^2 closed form", interp.rl_closed_form),
        ("hilfer beta=1 on t^2 closed form", interp.caputo_closed_form),
    ] {
        outcomes.push(IdentityOutcome::new(name.into(), err, INTERPOLATION_TOL * tol_scale));
    }
    outcomes.push(IdentityOutcome::new(
        "vanishing limit at a, mu=0.5 sigma=0.3".into(),
        vanishing_limit_error(0.5, 0.3, 1024)?,
        VANISHING_TOL * tol_scale,
    ));
    Ok(outcomes)
}
