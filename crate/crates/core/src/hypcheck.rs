//! Existence and uniqueness constants.
//!
//! Given bounds on `f`, each fixed-point theorem reduces to a scalar
//! inequality on the problem data:
//!
//! | constant | theorem         | condition              |
//! |----------|-----------------|------------------------|
//! | `G`      | Schauder        | `G < 1`                |
//! | `ℓ`      | Schaefer        | `‖η‖` finite           |
//! | `W`      | Krasnosel'skii  | `W < 1`, `K_con < 1`   |
//!
//! Missing bounds are estimated from `f` on the grid. Estimates are not
//! certificates, so they only switch a theorem on when the caller opts in.
//!
//! `W` and `Λ` contain `Γ(γ−1)` and `B(γ−1, ·)` with `γ − 1 ≤ 0`. They are
//! evaluated literally through the analytic continuation; at `γ = 1` the
//! pole makes them undefined.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::bvp::ProblemSpec;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::grid::Grid;
use crate::specfun::{beta, gamma};

/// `(b − a)`, `|1/(1+c/d)|` and `Γ(γ)` for the formulas below.
fn common(p: &ProblemSpec) -> Result<(f64, f64, f64)> {
    Ok((p.b() - p.a(), p.boundary_factor().abs(), gamma(p.gamma())?))
}

/// `G = Γ(γ)/Γ(α+1)·[(b−a)^α + (b−a)^{α+1−γ}]·N·ζ`.
pub fn compute_g(p: &ProblemSpec, n_bound: f64, zeta: f64) -> Result<f64> {
    let (h, _, gg) = common(p)?;
    let (alpha, g) = (p.alpha(), p.gamma());
    Ok(gg / gamma(alpha + 1.0)? * (h.powf(alpha) + h.powf(alpha + 1.0 - g)) * n_bound * zeta)
}

/// Radius numerator
/// `Ω = e/(Γ(γ)d(1+c/d)) + |1/(1+c/d)|/Γ(γ)·[(b−a)^{α+1−γ}/Γ(2−γ+α) + (b−a)^{2α+1−γ}/Γ(α+1)]·N`.
pub fn compute_omega(p: &ProblemSpec, n_bound: f64) -> Result<f64> {
    let (h, k, gg) = common(p)?;
    let (alpha, g) = (p.alpha(), p.gamma());
    let bracket = h.powf(alpha + 1.0 - g) / gamma(2.0 - g + alpha)?
        + h.powf(2.0 * alpha + 1.0 - g) / gamma(alpha + 1.0)?;
    Ok(p.boundary_constant()? + k / gg * bracket * n_bound)
}

/// Bracket shared by `W` and `Λ`, times the data-independent factor:
/// `[|1/(1+c/d)|/Γ(γ) + B(γ−1,α+1)/Γ(γ−1)]·Γ(γ−1)(b−a)^α/(B(γ−1,1)Γ(α+1))`.
fn krasnoselskii_factor(p: &ProblemSpec) -> Result<f64> {
    let (h, k, gg) = common(p)?;
    let (alpha, g) = (p.alpha(), p.gamma());
    let gm1 = gamma(g - 1.0)?;
    let bracket = k / gg + beta(g - 1.0, alpha + 1.0)? / gm1;
    Ok(bracket * gm1 * h.powf(alpha) / (beta(g - 1.0, 1.0)? * gamma(alpha + 1.0)?))
}

/// `W`, the Krasnosel'skii constant. Fails with [`Error::Pole`] at `γ = 1`.
pub fn compute_w(p: &ProblemSpec, lipschitz: f64) -> Result<f64> {
    Ok(krasnoselskii_factor(p)? * lipschitz)
}

/// Contraction constant of the boundary part,
/// `K_con = |1/(1+c/d)|·(b−a)^α·L/Γ(α+1)`.
pub fn compute_contraction(p: &ProblemSpec, lipschitz: f64) -> Result<f64> {
    let (h, k, _) = common(p)?;
    Ok(k * h.powf(p.alpha()) * lipschitz / gamma(p.alpha() + 1.0)?)
}

/// `Λ`: the `W` bracket applied to `‖f(·,0)‖` plus the boundary constant.
/// Independent of the Lipschitz constant.
pub fn compute_lambda(p: &ProblemSpec, f0_norm: f64) -> Result<f64> {
    Ok(p.boundary_constant()? + krasnoselskii_factor(p)? * f0_norm)
}

/// Schaefer radius
/// `ℓ = e/(Γ(γ)d(1+c/d)) + [|1/(1+c/d)|(b−a)^{−1}/Γ(γ)·Γ(α)/B(α,1) + B(γ,1)/(Γ(α)(b−a)^γ)]·(b−a)^{1+α}·‖η‖`.
pub fn compute_ell(p: &ProblemSpec, eta_norm: f64) -> Result<f64> {
    let (h, k, gg) = common(p)?;
    let (alpha, g) = (p.alpha(), p.gamma());
    let ga = gamma(alpha)?;
    let bracket = k / (h * gg) * ga / beta(alpha, 1.0)? + beta(g, 1.0)? / (ga * h.powf(g));
    Ok(p.boundary_constant()? + bracket * h.powf(1.0 + alpha) * eta_norm)
}

/// Largest difference quotient `|f(t, z_{k+1}) − f(t, z_k)|/(z_{k+1} − z_k)`
/// over interior nodes and `samples` equispaced `z ∈ [−z_range, z_range]`.
///
/// A lower bound on the true Lipschitz constant.
pub fn estimate_lipschitz(f: &Expr, grid: &Grid, z_range: f64, samples: usize) -> Result<f64> {
    if !(z_range > 0.0 && z_range.is_finite()) || samples < 2 {
        return Err(Error::Input(format!(
            "need z_range > 0 and samples >= 2, got {z_range} and {samples}"
        )));
    }
    if !f.depends_on_z() {
        return Ok(0.0);
    }
    let dz = 2.0 * z_range / (samples - 1) as f64;
    let zs: Vec<f64> = (0..samples).map(|k| -z_range + dz * k as f64).collect();
    let per_node: Vec<f64> = (1..grid.n_panels())
        .into_par_iter()
        .map(|i| {
            let t = grid.node(i);
            let mut prev = f.eval(t, zs[0])?;
            let mut worst: f64 = 0.0;
            for pair in zs.windows(2) {
                let next = f.eval(t, pair[1])?;
                worst = worst.max((next - prev).abs() / (pair[1] - pair[0]));
                prev = next;
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    Ok(per_node.into_iter().fold(0.0, f64::max))
}

/// `max_{i ≥ 1} (t_i − a)^σ |g(t_i, z)|` over the supplied `z` values.
fn weighted_sup(expr: &Expr, grid: &Grid, sigma: f64, zs: &[f64]) -> Result<f64> {
    let vals: Vec<f64> = (1..grid.len())
        .into_par_iter()
        .map(|i| {
            let weight = grid.offset(i).powf(sigma);
            zs.iter().try_fold(0.0_f64, |m, &z| Ok(m.max(weight * expr.eval(grid.node(i), z)?.abs())))
        })
        .collect::<Result<_>>()?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}

fn z_samples(z_range: f64, samples: usize) -> Vec<f64> {
    let n = samples.max(2);
    (0..n).map(|k| -z_range + 2.0 * z_range * k as f64 / (n - 1) as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportOptions {
    /// Let estimated bounds switch theorems on.
    pub trust_estimates: bool,
    /// Half-width of the `z` window sampled for estimates.
    pub z_range: f64,
    /// Number of `z` samples; an even count straddles `z = 0` instead of hitting it.
    pub samples: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { trust_estimates: false, z_range: 10.0, samples: 512 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Supplied with the problem.
    User,
    /// Derived exactly because `f` does not depend on `z`.
    Exact,
    /// Sampled from `f`; not a certificate.
    Estimated,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::User => "user",
            Provenance::Exact => "exact",
            Provenance::Estimated => "estimated",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundInput {
    pub value: f64,
    pub source: Provenance,
}

impl BoundInput {
    fn certified(&self, opts: &ReportOptions) -> bool {
        self.source != Provenance::Estimated || opts.trust_estimates
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputsUsed {
    #[serde(rename = "N")]
    pub n_bound: BoundInput,
    pub zeta: BoundInput,
    #[serde(rename = "L")]
    pub lipschitz: BoundInput,
    /// Weighted sup norm of the majorant `η`.
    pub eta_norm: Option<BoundInput>,
    /// Weighted sup norm of `f(·, 0)`.
    pub f0_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "Omega")]
    pub omega: f64,
    /// Schauder ball radius `Ω/(1−G)`; absent when `G ≥ 1`.
    pub r: Option<f64>,
    pub ell: Option<f64>,
    #[serde(rename = "W")]
    pub w: Option<f64>,
    #[serde(rename = "Lambda")]
    pub lambda: Option<f64>,
    /// Krasnosel'skii radius `Λ/(1−W)`; absent when `W` is undefined or `≥ 1`.
    pub epsilon: Option<f64>,
    #[serde(rename = "K_con")]
    pub k_con: f64,
    pub schauder_applies: bool,
    pub schaefer_applies: bool,
    pub krasnoselskii_applies: bool,
    pub unique: bool,
    pub inputs_used: InputsUsed,
    pub notes: Vec<String>,
}

impl HypothesisReport {
    pub fn any_applies(&self) -> bool {
        self.schauder_applies || self.schaefer_applies || self.krasnoselskii_applies
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), |v| format!("{v:.6}"))
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let iu = &self.inputs_used;
        writeln!(f, "inputs")?;
        writeln!(f, "  N        = {:.6} ({})", iu.n_bound.value, iu.n_bound.source)?;
        writeln!(f, "  zeta     = {:.6} ({})", iu.zeta.value, iu.zeta.source)?;
        writeln!(f, "  L        = {:.6} ({})", iu.lipschitz.value, iu.lipschitz.source)?;
        match iu.eta_norm {
            Some(e) => writeln!(f, "  |eta|    = {:.6} ({})", e.value, e.source)?,
            None => writeln!(f, "  |eta|    = undefined")?,
        }
        writeln!(f, "  |f(.,0)| = {:.6}", iu.f0_norm)?;
        writeln!(f, "constants")?;
        writeln!(f, "  G        = {:.6}", self.g)?;
        writeln!(f, "  Omega    = {:.6}", self.omega)?;
        writeln!(f, "  r        = {}", fmt_opt(self.r))?;
        writeln!(f, "  ell      = {}", fmt_opt(self.ell))?;
        writeln!(f, "  W        = {}", fmt_opt(self.w))?;
        writeln!(f, "  Lambda   = {}", fmt_opt(self.lambda))?;
        writeln!(f, "  epsilon  = {}", fmt_opt(self.epsilon))?;
        writeln!(f, "  K_con    = {:.6}", self.k_con)?;
        writeln!(f, "theorems")?;
        writeln!(f, "  schauder       {}", self.schauder_applies)?;
        writeln!(f, "  schaefer       {}", self.schaefer_applies)?;
        writeln!(f, "  krasnoselskii  {}", self.krasnoselskii_applies)?;
        write!(f, "  unique         {}", self.unique)?;
        for note in &self.notes {
            write!(f, "\nnote: {note}")?;
        }
        Ok(())
    }
}

/// Evaluates every constant and decides which theorems apply.
pub fn applicability_report(
    p: &ProblemSpec,
    grid: &Arc<Grid>,
    opts: ReportOptions,
) -> Result<HypothesisReport> {
    let sigma = p.sigma();
    let f = p.f();
    let bounds = p.bounds();
    let z_free = !f.depends_on_z();
    let mut notes = Vec::new();

    let f0_norm = weighted_sup(f, grid, sigma, &[0.0])?;

    let lipschitz = match bounds.lipschitz {
        Some(v) => BoundInput { value: v, source: Provenance::User },
        None if z_free => BoundInput { value: 0.0, source: Provenance::Exact },
        None => {
            let v = estimate_lipschitz(f, grid, opts.z_range, opts.samples)?;
            notes.push(format!(
                "L estimated from difference quotients on |z| <= {}; a lower bound only",
                opts.z_range
            ));
            BoundInput { value: v, source: Provenance::Estimated }
        }
    };

    let n_bound = match bounds.n_bound {
        Some(v) => BoundInput { value: v, source: Provenance::User },
        None if z_free => BoundInput { value: f0_norm, source: Provenance::Exact },
        None => {
            let v = if f0_norm > 0.0 { f0_norm } else { 1.0 };
            BoundInput { value: v, source: Provenance::Estimated }
        }
    };
    let zeta = match bounds.zeta {
        Some(v) => BoundInput { value: v, source: Provenance::User },
        None if z_free => BoundInput { value: 0.0, source: Provenance::Exact },
        None => {
            let v = if n_bound.value > 0.0 { lipschitz.value / n_bound.value } else { 0.0 };
            BoundInput { value: v, source: Provenance::Estimated }
        }
    };

    let eta_norm = match &bounds.eta {
        Some(eta) => match weighted_sup(eta, grid, sigma, &[0.0]) {
            Ok(v) => Some(BoundInput { value: v, source: Provenance::User }),
            Err(e) => {
                notes.push(format!("eta could not be evaluated on the grid: {e}"));
                None
            }
        },
        None if z_free => Some(BoundInput { value: f0_norm, source: Provenance::Exact }),
        None => {
            let zs = z_samples(opts.z_range, opts.samples);
            let v = weighted_sup(f, grid, sigma, &zs)?;
            notes.push(format!("|eta| estimated as sup |f| over |z| <= {}", opts.z_range));
            Some(BoundInput { value: v, source: Provenance::Estimated })
        }
    };

    let g = compute_g(p, n_bound.value, zeta.value)?;
    let omega = compute_omega(p, n_bound.value)?;
    let r = (g < 1.0).then(|| {
        if omega < 0.0 {
            notes.push(format!("Omega = {omega} is negative; radius clamped to 0"));
        }
        omega.max(0.0) / (1.0 - g)
    });
    let ell = match eta_norm {
        Some(e) => {
            notes.push("ell evaluated literally, including the Gamma(alpha)/B(alpha, 1) factor".into());
            Some(compute_ell(p, e.value)?)
        }
        None => None,
    };
    let k_con = compute_contraction(p, lipschitz.value)?;
    let (w, lambda) = match (compute_w(p, lipschitz.value), compute_lambda(p, f0_norm)) {
        (Ok(w), Ok(l)) => (Some(w), Some(l)),
        (Err(Error::Pole(_)), _) | (_, Err(Error::Pole(_))) => {
            notes.push(
                "W and Lambda undefined: Gamma(gamma - 1) has a pole at gamma = 1 (beta = 1)".into(),
            );
            (None, None)
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    if w.is_some() {
        notes.push(
            "W and Lambda evaluated literally; Gamma and B at gamma - 1 < 0 use analytic continuation"
                .into(),
        );
    }
    let epsilon = match (w, lambda) {
        (Some(w), Some(l)) if w < 1.0 => Some(l / (1.0 - w)),
        _ => None,
    };

    let schauder_applies =
        g < 1.0 && n_bound.certified(&opts) && zeta.certified(&opts);
    let schaefer_applies = eta_norm.is_some_and(|e| e.value.is_finite() && e.certified(&opts));
    let krasnoselskii_applies =
        w.is_some_and(|w| w < 1.0) && k_con < 1.0 && lipschitz.certified(&opts);

    Ok(HypothesisReport {
        g,
        omega,
        r,
        ell,
        w,
        lambda,
        epsilon,
        k_con,
        schauder_applies,
        schaefer_applies,
        krasnoselskii_applies,
        unique: krasnoselskii_applies,
        inputs_used: InputsUsed { n_bound, zeta, lipschitz, eta_norm, f0_norm },
        notes,
    })
}
