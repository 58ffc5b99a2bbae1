//! Riemann–Liouville integrals of weighted grid functions, plus numerical
//! Riemann–Liouville, Caputo and Hilfer derivatives used for verification.
//!
//! The integrand of `I^μ z(t_i)` is `(t_i − s)^{μ−1} (s − a)^{−σ} w(s)` with
//! `w` the piecewise-linear interpolant of the weighted samples. Each panel
//! is integrated against the two hat functions it carries:
//!
//! * a single panel touching both ends is done in closed form (Beta functions);
//! * the first panel uses Gauss–Jacobi nodes for the weight `(s − a)^{−σ}`;
//! * the panel ending at `t_i` uses Gauss–Jacobi nodes for `(t_i − s)^{μ−1}`;
//! * every other panel uses Gauss–Legendre, with the point count chosen from
//!   the distance to the nearer singularity.
//!
//! The resulting row weights depend only on the grid, `μ` and `σ`, so
//! [`RlOperator`] precomputes them once for repeated application.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Grid, WeightedGridFunction};
use crate::quadrature::{gauss_jacobi, gauss_legendre, points_for_distance, GaussRule, MAX_POINTS, MIN_POINTS};
use crate::specfun::{beta, gamma};

/// Tolerance for treating two exponents as equal.
const EXPONENT_EPS: f64 = 1e-14;

/// Hilfer order `α ∈ (0, 1)` and type `β ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    alpha: f64,
    beta: f64,
}

impl FracOrder {
    pub fn new(alpha: f64, beta: f64) -> Result<FracOrder> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Order(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::Order(format!("beta must lie in [0, 1], got {beta}")));
        }
        Ok(FracOrder { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `γ = α + β(1 − α)`.
    pub fn gamma(&self) -> f64 {
        self.alpha + self.beta * (1.0 - self.alpha)
    }
}

/// Exact `I^μ (t − a)^{p−1} = Γ(p)/Γ(p+μ) (t − a)^{p+μ−1}`.
pub fn power_rule(mu: f64, p: f64, t_minus_a: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::Order(format!("power-rule exponent p must be positive, got {p}")));
    }
    if !(mu >= 0.0) {
        return Err(Error::Order(format!("integration order must be non-negative, got {mu}")));
    }
    if t_minus_a < 0.0 {
        return Err(Error::Input(format!("t - a must be non-negative, got {t_minus_a}")));
    }
    Ok(gamma(p)? / gamma(p + mu)? * t_minus_a.powf(p + mu - 1.0))
}

/// Weight exponent of `I^μ g` for `g ∈ C_σ`.
pub fn output_sigma(mu: f64, sigma: f64) -> f64 {
    if sigma - mu > EXPONENT_EPS {
        sigma - mu
    } else {
        0.0
    }
}

fn check_order(mu: f64) -> Result<()> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::Order(format!("integration order must be positive, got {mu}")));
    }
    Ok(())
}

/// Computes the raw weights of one output node.
struct RowBuilder {
    grid: Arc<Grid>,
    mu: f64,
    sigma: f64,
    inv_gamma_mu: f64,
    kernel_singular: bool,
    /// Gauss–Jacobi rules for `(1+ξ)^{−σ}`, indexed by point count.
    left_rules: Vec<GaussRule>,
    /// Gauss–Jacobi rules for `(1−ξ)^{μ−1}`, indexed by point count.
    right_rules: Vec<GaussRule>,
    /// Closed-form single-panel coefficients: `B(1−σ, μ)` and `B(2−σ, μ)`.
    beta0: f64,
    beta1: f64,
}

impl RowBuilder {
    fn new(grid: Arc<Grid>, mu: f64, sigma: f64) -> Result<RowBuilder> {
        check_order(mu)?;
        if !(0.0..1.0).contains(&sigma) {
            return Err(Error::Input(format!("weight exponent must lie in [0, 1), got {sigma}")));
        }
        let rules = |a: f64, b: f64| -> Result<Vec<GaussRule>> {
            (1..=MAX_POINTS)
                .map(|n| {
                    if n < MIN_POINTS {
                        Ok(GaussRule { nodes: vec![], weights: vec![] })
                    } else {
                        gauss_jacobi(n, a, b)
                    }
                })
                .collect()
        };
        let kernel_singular = !(mu >= 1.0 && (mu - mu.round()).abs() < EXPONENT_EPS);
        Ok(RowBuilder {
            inv_gamma_mu: 1.0 / gamma(mu)?,
            kernel_singular,
            left_rules: if sigma > 0.0 { rules(0.0, -sigma)? } else { Vec::new() },
            right_rules: if kernel_singular { rules(mu - 1.0, 0.0)? } else { Vec::new() },
            beta0: beta(1.0 - sigma, mu)?,
            beta1: beta(2.0 - sigma, mu)?,
            grid,
            mu,
            sigma,
        })
    }

    /// Fills `out[k]`, `k = 0..=i`, so that `I^μ z(t_i) ≈ Σ_k out[k]·w_k`.
    fn row(&self, i: usize, out: &mut Vec<f64>) {
        out.clear();
        out.resize(i + 1, 0.0);
        if i == 0 {
            return;
        }
        let x = self.grid.offsets();
        let (mu, sigma) = (self.mu, self.sigma);
        let xi = x[i];
        if i == 1 {
            let scale = x[1].powf(mu - sigma) * self.inv_gamma_mu;
            out[0] = scale * (self.beta0 - self.beta1);
            out[1] = scale * self.beta1;
            return;
        }
        let left_singular = sigma > 0.0;
        for j in 0..i {
            let (xl, xr) = (x[j], x[j + 1]);
            let hw = 0.5 * (xr - xl);
            // distance from the panel's right end to t_i, kept exact
            let gap = xi - xr;
            let (mut lo, mut hi) = (0.0, 0.0);
            if j == 0 && left_singular {
                let dist = if self.kernel_singular { gap / hw } else { f64::INFINITY };
                let rule = &self.left_rules[points_for_distance(dist) - 1];
                for (xs, ws) in rule.iter() {
                    let kern = (gap + hw * (1.0 - xs)).powf(mu - 1.0);
                    let c = ws * kern;
                    lo += c * 0.5 * (1.0 - xs);
                    hi += c * 0.5 * (1.0 + xs);
                }
                let scale = hw.powf(1.0 - sigma);
                lo *= scale;
                hi *= scale;
            } else if j + 1 == i && self.kernel_singular {
                let dist = if left_singular { xl / hw } else { f64::INFINITY };
                let rule = &self.right_rules[points_for_distance(dist) - 1];
                for (xs, ws) in rule.iter() {
                    let s = xl + hw * (1.0 + xs);
                    let c = if left_singular { ws * s.powf(-sigma) } else { ws };
                    lo += c * 0.5 * (1.0 - xs);
                    hi += c * 0.5 * (1.0 + xs);
                }
                let scale = hw.powf(mu);
                lo *= scale;
                hi *= scale;
            } else {
                let da = if left_singular { xl / hw } else { f64::INFINITY };
                let dk = if self.kernel_singular { gap / hw } else { f64::INFINITY };
                let rule = gauss_legendre(points_for_distance(da.min(dk)));
                for (xs, ws) in rule.iter() {
                    let s = xl + hw * (1.0 + xs);
                    let mut c = ws * (gap + hw * (1.0 - xs)).powf(mu - 1.0);
                    if left_singular {
                        c *= s.powf(-sigma);
                    }
                    lo += c * 0.5 * (1.0 - xs);
                    hi += c * 0.5 * (1.0 + xs);
                }
                lo *= hw;
                hi *= hw;
            }
            out[j] += lo * self.inv_gamma_mu;
            out[j + 1] += hi * self.inv_gamma_mu;
        }
    }

    /// Coefficient mapping `w_0` to the weighted output at `a`.
    fn node0_coefficient(&self) -> Result<f64> {
        if self.mu <= self.sigma + EXPONENT_EPS {
            Ok(gamma(1.0 - self.sigma)? / gamma(1.0 - self.sigma + self.mu)?)
        } else {
            Ok(0.0)
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Precomputed `I^μ` on a fixed grid for inputs of weight exponent `σ`.
#[derive(Debug, Clone)]
pub struct RlOperator {
    grid: Arc<Grid>,
    mu: f64,
    sigma_in: f64,
    sigma_out: f64,
    node0: f64,
    /// Row `i` (for `i ≥ 1`) lives at `starts[i]..starts[i] + i + 1`.
    starts: Vec<usize>,
    weights: Vec<f64>,
}

impl RlOperator {
    pub fn new(grid: Arc<Grid>, mu: f64, sigma: f64) -> Result<RlOperator> {
        let builder = RowBuilder::new(grid.clone(), mu, sigma)?;
        let n = grid.n_panels();
        let rows: Vec<Vec<f64>> = (1..=n)
            .into_par_iter()
            .map(|i| {
                let mut row = Vec::with_capacity(i + 1);
                builder.row(i, &mut row);
                row
            })
            .collect();
        let mut starts = vec![0; n + 1];
        let mut weights = Vec::with_capacity(rows.iter().map(Vec::len).sum());
        for (k, row) in rows.into_iter().enumerate() {
            starts[k + 1] = weights.len();
            weights.extend(row);
        }
        Ok(RlOperator {
            node0: builder.node0_coefficient()?,
            sigma_out: output_sigma(mu, sigma),
            grid,
            mu,
            sigma_in: sigma,
            starts,
            weights,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma_in(&self) -> f64 {
        self.sigma_in
    }

    pub fn sigma_out(&self) -> f64 {
        self.sigma_out
    }

    fn check_input(&self, g: &WeightedGridFunction) -> Result<()> {
        if g.sigma() != self.sigma_in {
            return Err(Error::Input(format!(
                "operator built for weight exponent {}, got {}",
                self.sigma_in,
                g.sigma()
            )));
        }
        if **g.grid() != *self.grid {
            return Err(Error::Input("operator and grid function use different grids".into()));
        }
        Ok(())
    }

    /// Unweighted `I^μ z(t_i)` for `i ≥ 1`.
    pub fn raw_at(&self, i: usize, g: &WeightedGridFunction) -> Result<f64> {
        self.check_input(g)?;
        if i == 0 || i > self.grid.n_panels() {
            return Err(Error::Input(format!("node index {i} outside 1..={}", self.grid.n_panels())));
        }
        let s = self.starts[i];
        Ok(dot(&self.weights[s..s + i + 1], g.weighted()))
    }

    pub fn apply(&self, g: &WeightedGridFunction) -> Result<WeightedGridFunction> {
        self.check_input(g)?;
        let w = g.weighted();
        let x = self.grid.offsets();
        let out: Vec<f64> = (0..self.grid.len())
            .into_par_iter()
            .map(|i| {
                if i == 0 {
                    self.node0 * w[0]
                } else {
                    let s = self.starts[i];
                    let raw = dot(&self.weights[s..s + i + 1], w);
                    raw * x[i].powf(self.sigma_out)
                }
            })
            .collect();
        WeightedGridFunction::new(self.grid.clone(), self.sigma_out, out)
    }
}

/// `I^μ g` on `g`'s grid, stored with weight exponent `max(σ − μ, 0)`.
///
/// Row weights are generated on the fly; use [`RlOperator`] when the same
/// operator is applied repeatedly.
pub fn rl_integral(mu: f64, g: &WeightedGridFunction) -> Result<WeightedGridFunction> {
    let builder = RowBuilder::new(g.grid().clone(), mu, g.sigma())?;
    let sigma_out = output_sigma(mu, g.sigma());
    let node0 = builder.node0_coefficient()?;
    let w = g.weighted();
    let x = g.grid().offsets();
    let out: Vec<f64> = (0..g.len())
        .into_par_iter()
        .map_init(Vec::new, |buf, i| {
            if i == 0 {
                node0 * w[0]
            } else {
                builder.row(i, buf);
                dot(buf, w) * x[i].powf(sigma_out)
            }
        })
        .collect();
    WeightedGridFunction::new(g.grid().clone(), sigma_out, out)
}

/// Unweighted `I^μ z(t_i)` at a single node `i ≥ 1`.
pub fn rl_integral_at(mu: f64, g: &WeightedGridFunction, i: usize) -> Result<f64> {
    if i == 0 || i >= g.len() {
        return Err(Error::Input(format!("node index {i} outside 1..{}", g.len())));
    }
    let builder = RowBuilder::new(g.grid().clone(), mu, g.sigma())?;
    let mut buf = Vec::new();
    builder.row(i, &mut buf);
    Ok(dot(&buf, g.weighted()))
}

/// Raw weights of a single row, for callers that cache one node of `I^μ`.
pub(crate) fn row_weights(grid: Arc<Grid>, mu: f64, sigma: f64, i: usize) -> Result<Vec<f64>> {
    let builder = RowBuilder::new(grid, mu, sigma)?;
    let mut buf = Vec::new();
    builder.row(i, &mut buf);
    Ok(buf)
}

/// Linear extrapolation of weighted values at the first two interior nodes
/// back to `a`.
pub(crate) fn extrapolate_to_left(x1: f64, x2: f64, w1: f64, w2: f64) -> f64 {
    w1 - (w2 - w1) * x1 / (x2 - x1)
}

/// Numerical `d/dt` on the native grid.
///
/// Three-point non-uniform differences: central inside, one-sided at the
/// ends; all are exact for quadratics. When `h` has a positive weight
/// exponent its unweighted value at `a` is unbounded, so differencing
/// starts at node 1. The result is stored with weight exponent `sigma_out`;
/// its limit at `a` is extrapolated from nodes 1 and 2 unless `sigma_out = 0`
/// and node 0 was differenced directly.
pub fn differentiate(h: &WeightedGridFunction, sigma_out: f64) -> Result<WeightedGridFunction> {
    let grid = h.grid().clone();
    let x = grid.offsets();
    let n = grid.n_panels();
    let start = if h.sigma() == 0.0 { 0 } else { 1 };
    if n < start + 2 {
        return Err(Error::Grid("too few nodes for three-point differences".into()));
    }
    let u: Vec<f64> = (0..=n)
        .map(|k| if k < start { Ok(0.0) } else { h.unweighted_value(k) })
        .collect::<Result<_>>()?;
    let mut d = vec![0.0; n + 1];
    for k in start..=n {
        d[k] = if k == start {
            let (h1, h2) = (x[k + 1] - x[k], x[k + 2] - x[k + 1]);
            -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * u[k] + (h1 + h2) / (h1 * h2) * u[k + 1]
                - h1 / (h2 * (h1 + h2)) * u[k + 2]
        } else if k == n {
            let (h1, h2) = (x[k - 1] - x[k - 2], x[k] - x[k - 1]);
            h2 / (h1 * (h1 + h2)) * u[k - 2] - (h1 + h2) / (h1 * h2) * u[k - 1]
                + (h1 + 2.0 * h2) / (h2 * (h1 + h2)) * u[k]
        } else {
            let (h1, h2) = (x[k] - x[k - 1], x[k + 1] - x[k]);
            -h2 / (h1 * (h1 + h2)) * u[k - 1] + (h2 - h1) / (h1 * h2) * u[k]
                + h1 / (h2 * (h1 + h2)) * u[k + 1]
        };
    }
    let mut w: Vec<f64> = (0..=n).map(|k| d[k] * x[k].powf(sigma_out)).collect();
    w[0] = if sigma_out == 0.0 && start == 0 {
        d[0]
    } else {
        extrapolate_to_left(x[1], x[2], w[1], w[2])
    };
    WeightedGridFunction::new(grid, sigma_out, w)
}

/// Numerical Hilfer derivative `I^{β(1−α)} D I^{(1−β)(1−α)} g`.
///
/// A verification tool: the inner derivative is a finite difference, so
/// accuracy is limited to a few digits away from `a`. Values are meaningful
/// on nodes `i ≥ 1`.
pub fn hilfer_derivative(order: FracOrder, g: &WeightedGridFunction) -> Result<WeightedGridFunction> {
    let inner = (1.0 - order.beta) * (1.0 - order.alpha);
    let outer = order.beta * (1.0 - order.alpha);
    let h = if inner > 0.0 { rl_integral(inner, g)? } else { g.clone() };
    let d = differentiate(&h, g.sigma())?;
    if outer > 0.0 {
        rl_integral(outer, &d)
    } else {
        Ok(d)
    }
}

/// Riemann–Liouville derivative `D I^{1−α} g`, `0 < α < 1`.
pub fn rl_derivative(alpha: f64, g: &WeightedGridFunction) -> Result<WeightedGridFunction> {
    FracOrder::new(alpha, 0.0)?;
    let h = rl_integral(1.0 - alpha, g)?;
    differentiate(&h, g.sigma())
}

/// Caputo derivative `I^{1−α} D g`, `0 < α < 1`.
pub fn caputo_derivative(alpha: f64, g: &WeightedGridFunction) -> Result<WeightedGridFunction> {
    FracOrder::new(alpha, 1.0)?;
    let d = differentiate(g, g.sigma())?;
    rl_integral(1.0 - alpha, &d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, q: f64) -> Arc<Grid> {
        Arc::new(Grid::new(0.0, 1.0, n, q).unwrap())
    }

    /// `(t − a)^{p−1}` stored with the smallest admissible weight.
    fn power(grid: Arc<Grid>, p: f64) -> WeightedGridFunction {
        if p >= 1.0 {
            WeightedGridFunction::from_weighted_fn(grid, 0.0, |x| x.powf(p - 1.0)).unwrap()
        } else {
            WeightedGridFunction::from_weighted_fn(grid, 1.0 - p, |_| 1.0).unwrap()
        }
    }

    fn max_rel_error(out: &WeightedGridFunction, mu: f64, p: f64) -> f64 {
        let n = out.grid().n_panels();
        (n / 16..=n)
            .map(|i| {
                let exact = power_rule(mu, p, out.grid().offset(i)).unwrap();
                ((out.unweighted_value(i).unwrap() - exact) / exact).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn order_validation() {
        assert!(FracOrder::new(0.0, 0.5).is_err());
        assert!(FracOrder::new(1.0, 0.5).is_err());
        assert!(FracOrder::new(0.5, 1.1).is_err());
        let o = FracOrder::new(0.5, 1.0 / 3.0).unwrap();
        assert!((o.gamma() - 2.0 / 3.0).abs() < 1e-15);
        let g = WeightedGridFunction::zeros(grid(8, 1.0), 0.0).unwrap();
        assert!(matches!(rl_integral(0.0, &g), Err(Error::Order(_))));
        assert!(matches!(rl_integral(-1.0, &g), Err(Error::Order(_))));
    }

    #[test]
    fn power_rule_values() {
        assert!((power_rule(0.0, 0.4, 2.0).unwrap() - 2f64.powf(-0.6)).abs() < 1e-15);
        let g = 2.0 / 3.0;
        assert!((power_rule(1.0 - g, g, 0.37).unwrap() - 1.354_117_9).abs() < 1e-6);
        // Γ(0.7)/Γ(1.2)
        assert!((power_rule(0.5, 0.7, 1.0).unwrap() - 1.413_743_762_671_457_6).abs() < 1e-12);
        assert!(power_rule(0.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn zero_in_zero_out() {
        let g = WeightedGridFunction::zeros(grid(32, 2.0), 0.3).unwrap();
        let out = rl_integral(0.5, &g).unwrap();
        assert_eq!(out.weighted_norm(), 0.0);
    }

    #[test]
    fn singular_power_input() {
        let g = power(grid(2048, 2.0), 0.7);
        let out = rl_integral(0.5, &g).unwrap();
        assert_eq!(out.sigma(), 0.0);
        assert!(max_rel_error(&out, 0.5, 0.7) <= 1e-4);
    }

    #[test]
    fn first_order_integral_of_cosine() {
        let g = WeightedGridFunction::from_weighted_fn(grid(1024, 1.0), 0.0, f64::cos).unwrap();
        let out = rl_integral(1.0, &g).unwrap();
        for i in 0..out.len() {
            let t = out.grid().node(i);
            assert!((out.weighted()[i] - t.sin()).abs() <= 1e-6);
        }
    }

    #[test]
    fn operator_matches_on_the_fly_rows() {
        let gr = grid(64, 2.0);
        let g = WeightedGridFunction::from_weighted_fn(gr.clone(), 0.25, |x| 1.0 + x.sin()).unwrap();
        let op = RlOperator::new(gr, 0.6, 0.25).unwrap();
        let a = op.apply(&g).unwrap();
        let b = rl_integral(0.6, &g).unwrap();
        assert_eq!(a, b);
        let raw = op.raw_at(64, &g).unwrap();
        assert_eq!(raw, rl_integral_at(0.6, &g, 64).unwrap());
        assert!(op.raw_at(0, &g).is_err());
    }

    #[test]
    fn node_zero_limits() {
        let gr = grid(256, 2.0);
        // μ < σ: weighted limit w0·Γ(1−σ)/Γ(1−σ+μ)
        let g = power(gr.clone(), 0.6);
        let out = rl_integral(0.2, &g).unwrap();
        assert!((out.sigma() - 0.2).abs() < 1e-15);
        let expect = gamma(0.6).unwrap() / gamma(0.8).unwrap();
        assert!((out.weighted()[0] - expect).abs() < 1e-13);
        // μ = σ: constant Γ(γ)
        let gam = 2.0 / 3.0;
        let g = power(gr.clone(), gam);
        let out = rl_integral(1.0 - gam, &g).unwrap();
        assert_eq!(out.sigma(), 0.0);
        assert!((out.weighted()[0] - gamma(gam).unwrap()).abs() < 1e-13);
        // μ > σ: vanishing limit at a
        let g = power(gr, 0.7);
        let out = rl_integral(0.5, &g).unwrap();
        assert_eq!(out.weighted()[0], 0.0);
        // the single-panel row is exact
        let x1 = out.grid().offset(1);
        let exact = power_rule(0.5, 0.7, x1).unwrap();
        assert!((out.weighted()[1] - exact).abs() < 1e-13 * exact);
        assert!(out.weighted()[1] < out.weighted()[2]);
    }

    #[test]
    fn semigroup() {
        let gr = grid(1024, 2.0);
        let g = WeightedGridFunction::from_weighted_fn(gr, 0.0, f64::cos).unwrap();
        let two = rl_integral(0.4, &rl_integral(0.6, &g).unwrap()).unwrap();
        let one = rl_integral(1.0, &g).unwrap();
        let n = g.grid().n_panels();
        let err = (n / 16..=n)
            .map(|i| (two.weighted()[i] - one.weighted()[i]).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-3, "{err}");
    }

    #[test]
    fn power_rule_convergence() {
        for mu in [0.3, 0.5, 0.8] {
            for p in [0.7, 1.0, 1.5] {
                let errs: Vec<f64> = [256, 512, 1024, 2048]
                    .iter()
                    .map(|&n| max_rel_error(&rl_integral(mu, &power(grid(n, 2.0), p)).unwrap(), mu, p))
                    .collect();
                for w in errs.windows(2) {
                    // below 1e-12 the errors are rounding noise
                    assert!(w[1] <= w[0] || w[1] <= 1e-12, "mu {mu}, p {p}: {errs:?}");
                }
            }
        }
    }

    #[test]
    fn differentiation_exact_for_quadratics() {
        let g = WeightedGridFunction::from_weighted_fn(grid(16, 2.0), 0.0, |x| 3.0 * x * x - x + 2.0)
            .unwrap();
        let d = differentiate(&g, 0.0).unwrap();
        for i in 0..d.len() {
            let x = g.grid().offset(i);
            assert!((d.weighted()[i] - (6.0 * x - 1.0)).abs() < 1e-9, "node {i}");
        }
    }

    #[test]
    fn hilfer_interpolates_rl_and_caputo() {
        let gr = grid(4096, 2.0);
        let g = WeightedGridFunction::from_weighted_fn(gr, 0.0, |x| x * x).unwrap();
        let alpha = 0.5;
        let exact = |x: f64| 2.0 / gamma(3.0 - alpha).unwrap() * x.powf(2.0 - alpha);
        let h0 = hilfer_derivative(FracOrder::new(alpha, 0.0).unwrap(), &g).unwrap();
        let h1 = hilfer_derivative(FracOrder::new(alpha, 1.0).unwrap(), &g).unwrap();
        let rl = rl_derivative(alpha, &g).unwrap();
        let cap = caputo_derivative(alpha, &g).unwrap();
        let n = g.grid().n_panels();
        for i in 1..n {
            let x = g.grid().offset(i);
            let a = h0.unweighted_value(i).unwrap();
            let b = h1.unweighted_value(i).unwrap();
            assert!((a - rl.unweighted_value(i).unwrap()).abs() <= 1e-2);
            assert!((b - cap.unweighted_value(i).unwrap()).abs() <= 1e-2);
            assert!((a - exact(x)).abs() <= 1e-2, "beta 0, node {i}");
            assert!((b - exact(x)).abs() <= 1e-2, "beta 1, node {i}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn linear_and_positive(
                c1 in -3.0f64..3.0,
                c2 in -3.0f64..3.0,
                mu in 0.1f64..1.5,
                sigma in 0.0f64..0.9,
                k in 0.5f64..6.0,
            ) {
                let gr = grid(48, 2.0);
                let g1 = WeightedGridFunction::from_weighted_fn(gr.clone(), sigma, |x| (k * x).cos() + 1.5).unwrap();
                let g2 = WeightedGridFunction::from_weighted_fn(gr, sigma, |x| x * x + 0.1).unwrap();
                let lhs = rl_integral(mu, &g1.lin_comb(c1, &g2, c2).unwrap()).unwrap();
                let r1 = rl_integral(mu, &g1).unwrap();
                let r2 = rl_integral(mu, &g2).unwrap();
                let rhs = r1.lin_comb(c1, &r2, c2).unwrap();
                let scale = r1.weighted_norm() * c1.abs() + r2.weighted_norm() * c2.abs();
                prop_assert!(lhs.distance(&rhs).unwrap() <= 1e-12 * scale.max(1e-300));
                prop_assert!(r1.weighted().iter().all(|&v| v >= 0.0));
                prop_assert!(r2.weighted().iter().all(|&v| v >= 0.0));
            }
        }
    }
}
