//! The design matrix (dictionary evaluations) and observation vectors.

use crate::error::{Error, Result};
use crate::norms::empirical_norm_sq;
use crate::weights::WeightVector;

/// Evaluations of a dictionary of `m_dict` functions at `n` design points,
/// stored column-major: entry `(i, j)` is the j-th function at the i-th point.
///
/// Every entry is bounded by `bound_l` in absolute value. The bound is either
/// declared by the caller or inferred as the maximum absolute entry (flagged
/// via [`DesignMatrix::bound_inferred`]).
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    n: usize,
    m_dict: usize,
    cols: Vec<f64>,
    bound_l: f64,
    bound_inferred: bool,
}

impl DesignMatrix {
    /// Builds a design from columns with a declared uniform bound.
    pub fn from_columns(columns: Vec<Vec<f64>>, bound_l: f64) -> Result<Self> {
        Self::build(columns, Some(bound_l))
    }

    /// Builds a design from columns, inferring the bound as `max |entry|`.
    pub fn from_columns_inferred(columns: Vec<Vec<f64>>) -> Result<Self> {
        Self::build(columns, None)
    }

    /// Builds a design from observation rows with a declared bound.
    pub fn from_rows(rows: &[Vec<f64>], bound_l: f64) -> Result<Self> {
        Self::build(Self::transpose(rows)?, Some(bound_l))
    }

    /// Builds a design from observation rows, inferring the bound.
    pub fn from_rows_inferred(rows: &[Vec<f64>]) -> Result<Self> {
        Self::build(Self::transpose(rows)?, None)
    }

    fn transpose(rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidInput("design has no rows".into()));
        }
        let m = rows[0].len();
        let mut cols = vec![Vec::with_capacity(n); m];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {m}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                cols[j].push(v);
            }
        }
        Ok(cols)
    }

    fn build(columns: Vec<Vec<f64>>, declared_bound: Option<f64>) -> Result<Self> {
        let m_dict = columns.len();
        if m_dict < 2 {
            return Err(Error::InvalidInput(format!(
                "dictionary must have at least 2 functions, got {m_dict}"
            )));
        }
        let n = columns[0].len();
        if n == 0 {
            return Err(Error::InvalidInput("design has no rows".into()));
        }
        let mut max_abs: f64 = 0.0;
        for (j, col) in columns.iter().enumerate() {
            if col.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has {} entries, expected {n}",
                    col.len()
                )));
            }
            for (i, &v) in col.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::InvalidInput(format!(
                        "entry ({i}, {j}) is not finite: {v}"
                    )));
                }
                max_abs = max_abs.max(v.abs());
            }
        }
        let (bound_l, bound_inferred) = match declared_bound {
            Some(b) => {
                if !(b.is_finite() && b > 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "bound must be a positive finite real, got {b}"
                    )));
                }
                if max_abs > b {
                    return Err(Error::InvalidInput(format!(
                        "entry magnitude {max_abs} exceeds declared bound {b}"
                    )));
                }
                (b, false)
            }
            // All-zero dictionaries still need a positive bound.
            None => (if max_abs > 0.0 { max_abs } else { 1.0 }, true),
        };
        let mut cols = Vec::with_capacity(n * m_dict);
        for col in &columns {
            cols.extend_from_slice(col);
        }
        Ok(DesignMatrix {
            n,
            m_dict,
            cols,
            bound_l,
            bound_inferred,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m_dict(&self) -> usize {
        self.m_dict
    }

    pub fn bound_l(&self) -> f64 {
        self.bound_l
    }

    /// True when the bound was inferred from the data rather than declared.
    pub fn bound_inferred(&self) -> bool {
        self.bound_inferred
    }

    /// The j-th dictionary function evaluated at all design points.
    pub fn col(&self, j: usize) -> &[f64] {
        &self.cols[j * self.n..(j + 1) * self.n]
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.cols[j * self.n + i]
    }

    fn check_weight_len(&self, len: usize) -> Result<()> {
        if len != self.m_dict {
            return Err(Error::DimensionMismatch(format!(
                "weight vector of length {len} against dictionary of size {}",
                self.m_dict
            )));
        }
        Ok(())
    }

    fn check_obs_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch(format!(
                "observation vector of length {len} against design with n = {}",
                self.n
            )));
        }
        Ok(())
    }

    /// The combined function `sum_j lambda_j f_j` evaluated at all points.
    pub fn combine(&self, w: &WeightVector) -> Result<Vec<f64>> {
        self.check_weight_len(w.len())?;
        let mut out = vec![0.0; self.n];
        for &j in w.support() {
            let lam = w.coeffs()[j];
            for (o, &v) in out.iter_mut().zip(self.col(j)) {
                *o += lam * v;
            }
        }
        Ok(out)
    }

    /// Like [`DesignMatrix::combine`] for a raw coefficient slice.
    pub fn combine_coeffs(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        self.check_weight_len(coeffs.len())?;
        let mut out = vec![0.0; self.n];
        for (j, &lam) in coeffs.iter().enumerate() {
            if lam == 0.0 {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(self.col(j)) {
                *o += lam * v;
            }
        }
        Ok(out)
    }

    /// Residual sum of squares `(1/n) sum_i (y_i - f_lambda(x_i))^2`.
    pub fn rss(&self, y: &[f64], w: &WeightVector) -> Result<f64> {
        self.check_obs_len(y.len())?;
        let fitted = self.combine(w)?;
        let resid: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
        empirical_norm_sq(&resid)
    }

    /// Validates a target against this design: lengths agree and the true
    /// regression function respects the uniform bound.
    pub fn check_target(&self, t: &TargetVector) -> Result<()> {
        self.check_obs_len(t.len())?;
        for (i, &v) in t.f_vals().iter().enumerate() {
            if v.abs() > self.bound_l {
                return Err(Error::InvalidInput(format!(
                    "truth value {v} at point {i} exceeds bound {}",
                    self.bound_l
                )));
            }
        }
        Ok(())
    }
}

/// The true regression function and noisy observations at the design points:
/// `y_i = f(x_i) + w_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetVector {
    f_vals: Vec<f64>,
    y_vals: Vec<f64>,
}

impl TargetVector {
    pub fn new(f_vals: Vec<f64>, y_vals: Vec<f64>) -> Result<Self> {
        if f_vals.is_empty() {
            return Err(Error::InvalidInput("empty target vectors".into()));
        }
        if f_vals.len() != y_vals.len() {
            return Err(Error::DimensionMismatch(format!(
                "f has length {}, y has length {}",
                f_vals.len(),
                y_vals.len()
            )));
        }
        for (i, v) in f_vals.iter().chain(y_vals.iter()).enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "target entry {i} is not finite: {v}"
                )));
            }
        }
        Ok(TargetVector { f_vals, y_vals })
    }

    pub fn len(&self) -> usize {
        self.f_vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f_vals.is_empty()
    }

    /// True regression values `f(x_i)` (known in synthetic studies).
    pub fn f_vals(&self) -> &[f64] {
        &self.f_vals
    }

    /// Observations `y_i`.
    pub fn y_vals(&self) -> &[f64] {
        &self.y_vals
    }

    /// Realized noise `w_i = y_i - f(x_i)`.
    pub fn noise(&self) -> Vec<f64> {
        self.y_vals
            .iter()
            .zip(&self.f_vals)
            .map(|(y, f)| y - f)
            .collect()
    }
}
