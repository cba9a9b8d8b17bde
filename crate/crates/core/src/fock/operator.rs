//! Dense matrices of level-homogeneous operators, for spectral checks.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::basis::level_dim;
use super::ladder::{
    conservation_level, grad_minus_level, grad_plus_level, lower_level, raise_level,
    second_quantize_level,
};
use super::tensor::{check_dim, HVector, MarkedTensor, SymTensor};
use crate::error::{Error, Result};
use crate::scalar::{cr, cz, Real, C};

/// Row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator<T> {
    rows: usize,
    cols: usize,
    entries: Vec<C<T>>,
}

impl<T: Real> DenseOperator<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseOperator {
            rows,
            cols,
            entries: vec![cz(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { cr(T::one()) } else { cz() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C<T>) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        DenseOperator {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C<T>>) -> Result<Self> {
        check_dim(rows * cols, entries.len())?;
        Ok(DenseOperator {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from its columns (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<C<T>>]) -> Result<Self> {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            check_dim(rows, col.len())?;
            for (i, v) in col.iter().enumerate() {
                m.entries[i * cols + j] = *v;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> C<T> {
        self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[C<T>] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<C<T>> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, c: C<T>) -> Self {
        DenseOperator {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_dim(self.cols, other.rows)?;
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == cz() {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] =
                        out.entries[i * other.cols + j] + a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, x: &[C<T>]) -> Result<Vec<C<T>>> {
        check_dim(self.cols, x.len())?;
        Ok((0..self.rows)
            .map(|i| {
                self.entries[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(x)
                    .fold(cz(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Frobenius distance.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr().to_f64_lossy())
            .sum::<f64>()
            .sqrt())
    }

    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm().to_f64_lossy())
            .fold(0.0, f64::max)
    }

    fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| {
            let z = self.get(i, j);
            Complex64::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
        })
    }

    /// Singular values in descending order (computed in double precision).
    pub fn singular_values(&self) -> Vec<f64> {
        if self.rows == 0 || self.cols == 0 {
            return Vec::new();
        }
        let mut sv: Vec<f64> = self
            .to_nalgebra()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    /// Spectral norm of `A*A - I`.
    pub fn unitarity_residual(&self) -> f64 {
        let gram = self.adjoint().matmul(self).expect("square product");
        let diff = DenseOperator {
            rows: gram.rows,
            cols: gram.cols,
            entries: gram
                .entries
                .iter()
                .enumerate()
                .map(|(k, z)| {
                    if k / gram.cols == k % gram.cols {
                        z - cr(T::one())
                    } else {
                        *z
                    }
                })
                .collect(),
        };
        diff.op_norm()
    }

    /// Row-major CSV, one `"re,im"` cell per entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let z = self.get(i, j);
                    format!("\"{},{}\"", z.re, z.im)
                })
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Level-homogeneous operators that [`operator_matrix`] can densify.
#[derive(Clone, Debug, PartialEq)]
pub enum LevelOp<T> {
    /// `∇⁻_n`: level `n` to marked level `n-1`.
    GradMinus,
    /// `∇⁺_n`: marked level `n` to level `n+1`.
    GradPlus,
    /// `W_n = ∇⁻_n / √n`.
    W,
    Number,
    Annihilate(HVector<T>),
    Create(HVector<T>),
    /// `Λ(A)` block on level `n`.
    Conservation(DenseOperator<T>),
    /// `Γ(T)` block on level `n`.
    SecondQuantize(DenseOperator<T>),
}

impl<T: Real> LevelOp<T> {
    /// Parses the parameter-free operators by name.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "grad_minus" | "nabla_minus" => Ok(LevelOp::GradMinus),
            "grad_plus" | "nabla_plus" => Ok(LevelOp::GradPlus),
            "w" | "W" => Ok(LevelOp::W),
            "number" | "N" => Ok(LevelOp::Number),
            other => Err(Error::UnknownOperator(other.to_string())),
        }
    }
}

/// Dense matrix of `op` restricted to level `n` over `C^d`, in the enumerated occupation bases.
pub fn operator_matrix<T: Real>(op: &LevelOp<T>, n: usize, d: usize) -> Result<DenseOperator<T>> {
    let dim_n = level_dim(d, n)?;
    let unit = |k: usize, len: usize| {
        let mut v = vec![cz::<T>(); len];
        v[k] = cr(T::one());
        v
    };
    let sym_unit = |k: usize| SymTensor::from_coeffs(d, n, unit(k, dim_n));
    match op {
        LevelOp::GradMinus | LevelOp::W => {
            if n == 0 {
                return match op {
                    LevelOp::W => Err(Error::Unsupported("W_n needs n >= 1".into())),
                    _ => Ok(DenseOperator::zeros(0, dim_n)),
                };
            }
            let rows = level_dim(d, n - 1)? * d;
            let scale = match op {
                LevelOp::W => T::one() / T::of_usize(n).sqrt(),
                _ => T::one(),
            };
            let cols = (0..dim_n)
                .map(|k| {
                    let img = grad_minus_level(&sym_unit(k)?)?.expect("n >= 1");
                    Ok(img.coeffs().iter().map(|z| z * scale).collect())
                })
                .collect::<Result<Vec<_>>>()?;
            DenseOperator::from_columns(rows, &cols)
        }
        LevelOp::GradPlus => {
            let rows = level_dim(d, n + 1)?;
            let cols = (0..dim_n * d)
                .map(|k| {
                    Ok(
                        grad_plus_level(&MarkedTensor::from_coeffs(d, n, unit(k, dim_n * d))?)?
                            .coeffs()
                            .to_vec(),
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            DenseOperator::from_columns(rows, &cols)
        }
        LevelOp::Number => Ok(DenseOperator::identity(dim_n).scale(cr(T::of_usize(n)))),
        LevelOp::Annihilate(f) => {
            check_dim(d, f.dim())?;
            if n == 0 {
                return Ok(DenseOperator::zeros(0, dim_n));
            }
            let rows = level_dim(d, n - 1)?;
            let cols = (0..dim_n)
                .map(|k| {
                    Ok(lower_level(f, &sym_unit(k)?)?
                        .expect("n >= 1")
                        .coeffs()
                        .to_vec())
                })
                .collect::<Result<Vec<_>>>()?;
            DenseOperator::from_columns(rows, &cols)
        }
        LevelOp::Create(f) => {
            check_dim(d, f.dim())?;
            let rows = level_dim(d, n + 1)?;
            let cols = (0..dim_n)
                .map(|k| Ok(raise_level(f, &sym_unit(k)?)?.coeffs().to_vec()))
                .collect::<Result<Vec<_>>>()?;
            DenseOperator::from_columns(rows, &cols)
        }
        LevelOp::Conservation(a) => {
            let cols = (0..dim_n)
                .map(|k| Ok(conservation_level(a, &sym_unit(k)?)?.coeffs().to_vec()))
                .collect::<Result<Vec<_>>>()?;
            DenseOperator::from_columns(dim_n, &cols)
        }
        LevelOp::SecondQuantize(t) => {
            let cols = (0..dim_n)
                .map(|k| Ok(second_quantize_level(t, &sym_unit(k)?)?.coeffs().to_vec()))
                .collect::<Result<Vec<_>>>()?;
            DenseOperator::from_columns(dim_n, &cols)
        }
    }
}
