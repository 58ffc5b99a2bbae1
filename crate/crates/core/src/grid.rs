//! Graded meshes on `[a, b]` and functions of the weighted space
//! `C_σ[a, b]`, represented by samples of `w(t) = (t − a)^σ z(t)`.

use std::io::{Read, Write};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Mesh `t_i = a + (b − a)(i/N)^q`, `i = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    a: f64,
    b: f64,
    grading: f64,
    /// `t_i − a`, computed directly so that tiny offsets near `a` keep full precision.
    offsets: Vec<f64>,
}

impl Grid {
    pub fn new(a: f64, b: f64, n_panels: usize, grading: f64) -> Result<Grid> {
        if !(a.is_finite() && b.is_finite()) || b <= a {
            return Err(Error::Grid(format!("need finite a < b, got a = {a}, b = {b}")));
        }
        if n_panels == 0 {
            return Err(Error::Grid("need at least one panel".into()));
        }
        if !(grading >= 1.0 && grading.is_finite()) {
            return Err(Error::Grid(format!("grading must be >= 1, got {grading}")));
        }
        let len = b - a;
        let n = n_panels as f64;
        let offsets = (0..=n_panels)
            .map(|i| {
                if i == n_panels {
                    len
                } else {
                    len * (i as f64 / n).powf(grading)
                }
            })
            .collect::<Vec<_>>();
        if offsets.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Grid(format!(
                "nodes not strictly increasing for N = {n_panels}, q = {grading}"
            )));
        }
        Ok(Grid { a, b, grading, offsets })
    }

    pub fn uniform(a: f64, b: f64, n_panels: usize) -> Result<Grid> {
        Grid::new(a, b, n_panels, 1.0)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    pub fn n_panels(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of nodes, `N + 1`.
    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.offsets.len() {
            self.b
        } else {
            self.a + self.offsets[i]
        }
    }

    pub fn offset(&self, i: usize) -> f64 {
        self.offsets[i]
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.node(i))
    }
}

/// Grid samples of `w = (t − a)^σ z`, an element of `C_σ[a, b]`.
///
/// `w[0]` stores the limit of `(t − a)^σ z(t)` as `t → a⁺`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGridFunction {
    grid: Arc<Grid>,
    sigma: f64,
    w: Vec<f64>,
}

impl WeightedGridFunction {
    pub fn new(grid: Arc<Grid>, sigma: f64, w: Vec<f64>) -> Result<Self> {
        if !(0.0..1.0).contains(&sigma) {
            return Err(Error::Input(format!("weight exponent must lie in [0, 1), got {sigma}")));
        }
        if w.len() != grid.len() {
            return Err(Error::Input(format!(
                "expected {} weighted values, got {}",
                grid.len(),
                w.len()
            )));
        }
        if let Some(i) = w.iter().position(|x| !x.is_finite()) {
            return Err(Error::Input(format!("weighted value at node {i} is not finite")));
        }
        Ok(WeightedGridFunction { grid, sigma, w })
    }

    pub fn zeros(grid: Arc<Grid>, sigma: f64) -> Result<Self> {
        let n = grid.len();
        Self::new(grid, sigma, vec![0.0; n])
    }

    /// Samples the weighted function directly: `weighted(t − a)` gives `w`.
    pub fn from_weighted_fn(
        grid: Arc<Grid>,
        sigma: f64,
        weighted: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let w = grid.offsets().iter().map(|&x| weighted(x)).collect();
        Self::new(grid, sigma, w)
    }

    /// Samples an unweighted `z(t)` on nodes `i ≥ 1`; `w0` supplies the
    /// limit at `a` (for `σ = 0` this is simply `z(a)`).
    pub fn from_unweighted_fn(
        grid: Arc<Grid>,
        sigma: f64,
        z: impl Fn(f64) -> f64,
        w0: f64,
    ) -> Result<Self> {
        let w = (0..grid.len())
            .map(|i| if i == 0 { w0 } else { grid.offset(i).powf(sigma) * z(grid.node(i)) })
            .collect();
        Self::new(grid, sigma, w)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn weighted(&self) -> &[f64] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    /// Grid version of `‖z‖_{C_σ}`: the largest `|w_i|`.
    pub fn weighted_norm(&self) -> f64 {
        self.w.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `z(t_i) = w_i (t_i − a)^{−σ}`.
    pub fn unweighted_value(&self, i: usize) -> Result<f64> {
        if self.sigma == 0.0 {
            return Ok(self.w[i]);
        }
        if i == 0 {
            return Err(Error::SingularNode(0));
        }
        Ok(self.w[i] * self.grid.offset(i).powf(-self.sigma))
    }

    pub fn scaled(&self, c: f64) -> Self {
        WeightedGridFunction {
            grid: self.grid.clone(),
            sigma: self.sigma,
            w: self.w.iter().map(|x| c * x).collect(),
        }
    }

    /// `c1·self + c2·other`; both must share grid and weight exponent.
    pub fn lin_comb(&self, c1: f64, other: &Self, c2: f64) -> Result<Self> {
        self.check_compatible(other)?;
        let w = self.w.iter().zip(&other.w).map(|(x, y)| c1 * x + c2 * y).collect();
        Self::new(self.grid.clone(), self.sigma, w)
    }

    /// `‖self − other‖_{C_σ}`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self.w.iter().zip(&other.w).fold(0.0, |m, (x, y)| m.max((x - y).abs())))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.grid, &other.grid) && *self.grid != *other.grid {
            return Err(Error::Input("grid functions live on different grids".into()));
        }
        if self.sigma != other.sigma {
            return Err(Error::Input(format!(
                "weight exponents differ: {} vs {}",
                self.sigma, other.sigma
            )));
        }
        Ok(())
    }

    /// Re-expresses the same function with a larger weight exponent.
    ///
    /// Multiplying by `(t − a)^{σ' − σ}` sends the stored limit at `a` to
    /// zero whenever `σ' > σ`.
    pub fn reweighted(&self, sigma: f64) -> Result<Self> {
        if sigma < self.sigma {
            return Err(Error::Input(format!(
                "cannot lower weight exponent from {} to {sigma}",
                self.sigma
            )));
        }
        if sigma == self.sigma {
            return Ok(self.clone());
        }
        let d = sigma - self.sigma;
        let w = self
            .grid
            .offsets()
            .iter()
            .zip(&self.w)
            .enumerate()
            .map(|(i, (x, w))| if i == 0 { 0.0 } else { w * x.powf(d) })
            .collect();
        Self::new(self.grid.clone(), sigma, w)
    }

    /// Writes `t,w,z` rows; `z` at `t_0` is left empty when `σ > 0`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["t", "w", "z"])?;
        for i in 0..self.len() {
            let t = self.grid.node(i).to_string();
            let w = self.w[i].to_string();
            let z = match self.unweighted_value(i) {
                Ok(z) => z.to_string(),
                Err(_) => String::new(),
            };
            wtr.write_record([t, w, z])?;
        }
        wtr.flush().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(())
    }

    /// Reads the weighted column of a `t,w,z` file back onto `grid`.
    pub fn read_csv<R: Read>(grid: Arc<Grid>, sigma: f64, input: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["t", "w", "z"] {
            return Err(Error::Csv(format!("unexpected header {headers:?}")));
        }
        let mut w = Vec::with_capacity(grid.len());
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let t: f64 = parse_field(&rec, 0, i)?;
            if i < grid.len() && (t - grid.node(i)).abs() > 1e-12 * (1.0 + t.abs()) {
                return Err(Error::Csv(format!("row {i}: t = {t} does not match the grid")));
            }
            w.push(parse_field(&rec, 1, i)?);
        }
        Self::new(grid, sigma, w)
    }
}

fn parse_field(rec: &csv::StringRecord, col: usize, row: usize) -> Result<f64> {
    rec.get(col)
        .ok_or_else(|| Error::Csv(format!("row {row}: missing column {col}")))?
        .parse()
        .map_err(|e| Error::Csv(format!("row {row}, column {col}: {e}")))
}
