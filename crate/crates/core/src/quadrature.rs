//! Gauss–Jacobi rules on `[−1, 1]` via the Golub–Welsch eigenvalue method.

use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::specfun::gamma;

/// Largest rule size handed out by the adaptive panel quadrature.
pub const MAX_POINTS: usize = 20;
/// Smallest rule size used on a panel.
pub const MIN_POINTS: usize = 4;

/// Nodes and weights integrating `∫ (1−x)^α (1+x)^β p(x) dx` exactly for
/// polynomials `p` of degree `< 2n`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<GaussRule> {
    if n == 0 {
        return Err(Error::Input("a Gauss rule needs at least one node".into()));
    }
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::Input(format!("Jacobi exponents must exceed -1, got ({alpha}, {beta})")));
    }
    let ab = alpha + beta;
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let diag = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        jac[(k, k)] = diag;
        if k + 1 < n {
            let m = kf + 1.0;
            let s = 2.0 * m + ab;
            let off2 = if k == 0 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * m * (m + alpha) * (m + beta) * (m + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            let off = off2.sqrt();
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
        }
    }
    let mu0 = 2f64.powf(ab + 1.0) * gamma(alpha + 1.0)? * gamma(beta + 1.0)? / gamma(ab + 2.0)?;
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let v0 = eig.eigenvectors[(0, k)];
            (eig.eigenvalues[k], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(GaussRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    })
}

/// Cached Gauss–Legendre rule with `n` points, `MIN_POINTS ≤ n ≤ MAX_POINTS`.
pub fn gauss_legendre(n: usize) -> &'static GaussRule {
    static RULES: OnceLock<Vec<GaussRule>> = OnceLock::new();
    let rules = RULES.get_or_init(|| {
        (1..=MAX_POINTS)
            .map(|k| gauss_jacobi(k, 0.0, 0.0).expect("Legendre weights are valid"))
            .collect()
    });
    &rules[n.clamp(1, MAX_POINTS) - 1]
}

/// Rule size giving roughly double-precision accuracy on a panel whose
/// integrand has its nearest singularity at normalised distance `dist`
/// (distance to the panel end divided by half the panel width).
///
/// The error of an `n`-point rule decays like `ρ^{−2n}` where `ρ` is the
/// Bernstein ellipse parameter through the singularity.
pub fn points_for_distance(dist: f64) -> usize {
    if !dist.is_finite() {
        return MIN_POINTS;
    }
    let x = 1.0 + dist.max(1e-3);
    let rho = x + (x * x - 1.0).sqrt();
    let n = (16.2 / rho.ln()).ceil();
    (n as usize).clamp(MIN_POINTS, MAX_POINTS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        for n in 1..=MAX_POINTS {
            let r = gauss_legendre(n);
            assert_eq!(r.len(), n);
            for deg in 0..(2 * n) {
                let q: f64 = r.iter().map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "n = {n}, deg = {deg}: {q} vs {exact}");
            }
        }
    }

    #[test]
    fn jacobi_moments() {
        // ∫_{-1}^{1} (1+x)^β (1+x)^k dx = 2^{β+k+1}/(β+k+1)
        for beta in [-0.7, -0.3, 0.5] {
            let r = gauss_jacobi(8, 0.0, beta).unwrap();
            for k in 0..16 {
                let q: f64 = r.iter().map(|(x, w)| w * (1.0 + x).powi(k)).sum();
                let exact = 2f64.powf(beta + k as f64 + 1.0) / (beta + k as f64 + 1.0);
                assert!((q - exact).abs() < 1e-12 * exact, "beta {beta}, k {k}");
            }
        }
        // α + β = −1 exercises the cancelled first off-diagonal
        let r = gauss_jacobi(6, -0.5, -0.5).unwrap();
        let q: f64 = r.iter().map(|(x, w)| w * x * x).sum();
        assert!((q - std::f64::consts::PI / 2.0).abs() < 1e-13);
    }

    #[test]
    fn invalid_exponents() {
        assert!(gauss_jacobi(4, -1.0, 0.0).is_err());
        assert!(gauss_jacobi(0, 0.0, 0.0).is_err());
    }

    #[test]
    fn point_counts() {
        assert_eq!(points_for_distance(f64::INFINITY), MIN_POINTS);
        assert_eq!(points_for_distance(1000.0), MIN_POINTS);
        assert!(points_for_distance(0.5) > points_for_distance(2.0));
        assert_eq!(points_for_distance(0.0), MAX_POINTS);
    }
}
