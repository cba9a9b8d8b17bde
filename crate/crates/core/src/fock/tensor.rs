//! One-particle vectors, symmetric tensors and truncated Fock vectors.
//!
//! All tensors are stored in the orthonormal occupation basis of the
//! symmetric tensor power (the `⊗`-normalized picture). See
//! [`crate::fock::normalization`] for the conversion to `⊙` coordinates.

use std::ops::{Add, Sub};

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use super::basis::{level_dim, LevelBasis};
use crate::error::{Error, Result};
use crate::scalar::{cz, dist, dot, norm_sqr, Real, C};

/// Vector of the one-particle space `H = C^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct HVector<T> {
    coeffs: Vec<C<T>>,
}

impl<T: Real> HVector<T> {
    pub fn new(coeffs: Vec<C<T>>) -> Self {
        HVector { coeffs }
    }

    pub fn from_real(values: &[T]) -> Self {
        HVector {
            coeffs: values.iter().map(|&x| Complex::new(x, T::zero())).collect(),
        }
    }

    pub fn zeros(d: usize) -> Self {
        HVector {
            coeffs: vec![cz(); d],
        }
    }

    /// Unit vector `e_i`.
    pub fn basis(d: usize, i: usize) -> Self {
        let mut v = Self::zeros(d);
        v.coeffs[i] = Complex::new(T::one(), T::zero());
        v
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[C<T>] {
        &self.coeffs
    }

    pub fn get(&self, i: usize) -> C<T> {
        self.coeffs[i]
    }

    /// `<self, other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<C<T>> {
        check_dim(self.dim(), other.dim())?;
        Ok(dot(&self.coeffs, &other.coeffs))
    }

    pub fn norm(&self) -> T {
        norm_sqr(&self.coeffs).sqrt()
    }

    pub fn scale(&self, c: C<T>) -> Self {
        HVector {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(HVector {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Standard complex Gaussian entries scaled to norm `radius`.
    pub fn random<R: Rng + ?Sized>(d: usize, radius: f64, rng: &mut R) -> Self {
        let raw: Vec<Complex<f64>> = (0..d)
            .map(|_| Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let n = raw
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
            .max(f64::MIN_POSITIVE);
        HVector {
            coeffs: raw
                .iter()
                .map(|z| Complex::new(T::of(z.re * radius / n), T::of(z.im * radius / n)))
                .collect(),
        }
    }
}

pub(crate) fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

macro_rules! coefficient_ops {
    ($ty:ident) => {
        impl<T: Real> $ty<T> {
            pub fn coeffs(&self) -> &[C<T>] {
                &self.coeffs
            }

            pub fn coeffs_mut(&mut self) -> &mut [C<T>] {
                &mut self.coeffs
            }

            pub fn d(&self) -> usize {
                self.d
            }

            pub fn degree(&self) -> usize {
                self.degree
            }

            pub fn inner(&self, other: &Self) -> C<T> {
                dot(&self.coeffs, &other.coeffs)
            }

            pub fn norm_sqr(&self) -> T {
                norm_sqr(&self.coeffs)
            }

            pub fn norm(&self) -> T {
                self.norm_sqr().sqrt()
            }

            pub fn is_zero(&self) -> bool {
                self.coeffs
                    .iter()
                    .all(|z| z.re == T::zero() && z.im == T::zero())
            }

            pub fn scale(&self, c: C<T>) -> Self {
                let mut out = self.clone();
                out.coeffs.iter_mut().for_each(|z| *z = *z * c);
                out
            }

            pub fn axpy(&mut self, a: C<T>, x: &Self) {
                debug_assert_eq!(self.coeffs.len(), x.coeffs.len());
                for (y, xv) in self.coeffs.iter_mut().zip(&x.coeffs) {
                    *y = *y + a * xv;
                }
            }

            pub fn distance(&self, other: &Self) -> T {
                dist(&self.coeffs, &other.coeffs)
            }
        }
    };
}

/// Degree-`n` symmetric tensor over `C^d` in occupation coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor<T> {
    d: usize,
    degree: usize,
    coeffs: Vec<C<T>>,
}

coefficient_ops!(SymTensor);

impl<T: Real> SymTensor<T> {
    pub fn zeros(d: usize, degree: usize) -> Result<Self> {
        Ok(SymTensor {
            d,
            degree,
            coeffs: vec![cz(); level_dim(d, degree)?],
        })
    }

    pub fn from_coeffs(d: usize, degree: usize, coeffs: Vec<C<T>>) -> Result<Self> {
        check_dim(level_dim(d, degree)?, coeffs.len())?;
        Ok(SymTensor { d, degree, coeffs })
    }

    /// Degree-0 tensor holding the scalar `c`.
    pub fn scalar(d: usize, c: C<T>) -> Self {
        SymTensor {
            d,
            degree: 0,
            coeffs: vec![c],
        }
    }

    pub fn basis(&self) -> Result<LevelBasis> {
        LevelBasis::new(self.d, self.degree)
    }

    pub fn coeff(&self, alpha: &[u32]) -> C<T> {
        let basis = LevelBasis::new(self.d, self.degree).expect("existing level");
        self.coeffs[basis.rank(alpha)]
    }

    pub fn random<R: Rng + ?Sized>(d: usize, degree: usize, rng: &mut R) -> Result<Self> {
        let mut t = Self::zeros(d, degree)?;
        fill_gaussian(&mut t.coeffs, rng);
        Ok(t)
    }
}

/// Element `(psi_0, ..., psi_M)` of the Fock space truncated at level `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector<T> {
    d: usize,
    levels: Vec<SymTensor<T>>,
}

impl<T: Real> FockVector<T> {
    pub fn zeros(d: usize, truncation: usize) -> Result<Self> {
        let levels = (0..=truncation)
            .map(|n| SymTensor::zeros(d, n))
            .collect::<Result<_>>()?;
        Ok(FockVector { d, levels })
    }

    pub fn vacuum(d: usize, truncation: usize) -> Result<Self> {
        let mut v = Self::zeros(d, truncation)?;
        v.levels[0].coeffs[0] = Complex::new(T::one(), T::zero());
        Ok(v)
    }

    pub fn from_levels(levels: Vec<SymTensor<T>>) -> Result<Self> {
        let d = levels
            .first()
            .map(|l| l.d)
            .ok_or_else(|| Error::Unsupported("empty level list".into()))?;
        for (n, l) in levels.iter().enumerate() {
            check_dim(n, l.degree)?;
            check_dim(d, l.d)?;
        }
        Ok(FockVector { d, levels })
    }

    /// Embeds a single tensor as a vector supported on its own level.
    pub fn from_level(tensor: SymTensor<T>, truncation: usize) -> Result<Self> {
        let mut v = Self::zeros(tensor.d, truncation.max(tensor.degree))?;
        let n = tensor.degree;
        v.levels[n] = tensor;
        Ok(v)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn truncation(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[SymTensor<T>] {
        &self.levels
    }

    pub fn levels_mut(&mut self) -> &mut [SymTensor<T>] {
        &mut self.levels
    }

    pub fn level(&self, n: usize) -> &SymTensor<T> {
        &self.levels[n]
    }

    pub fn inner(&self, other: &Self) -> Result<C<T>> {
        self.check_shape(other)?;
        Ok(self
            .levels
            .iter()
            .zip(&other.levels)
            .fold(cz(), |acc, (a, b)| acc + a.inner(b)))
    }

    pub fn norm_sqr(&self) -> T {
        self.levels.iter().map(|l| l.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, c: C<T>) -> Self {
        FockVector {
            d: self.d,
            levels: self.levels.iter().map(|l| l.scale(c)).collect(),
        }
    }

    pub fn distance(&self, other: &Self) -> Result<T> {
        self.check_shape(other)?;
        Ok(self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| a.distance(b).powi(2))
            .sum::<T>()
            .sqrt())
    }

    /// Orthogonal projection `P_n` onto level `n`.
    pub fn project(&self, n: usize) -> Self {
        let mut out = self.clone();
        for (k, l) in out.levels.iter_mut().enumerate() {
            if k != n {
                l.coeffs.iter_mut().for_each(|z| *z = cz());
            }
        }
        out
    }

    /// True when the top `k` levels vanish exactly.
    pub fn is_truncation_safe(&self, k: usize) -> bool {
        self.levels.iter().rev().take(k).all(|l| l.is_zero())
    }

    /// Random vector with Gaussian coefficients on levels `0..=max_level`, normalized to one.
    pub fn random<R: Rng + ?Sized>(
        d: usize,
        truncation: usize,
        max_level: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let mut v = Self::zeros(d, truncation)?;
        for l in v.levels.iter_mut().take(max_level.min(truncation) + 1) {
            fill_gaussian(&mut l.coeffs, rng);
        }
        let n = v.norm();
        Ok(v.scale(Complex::new(T::one() / n, T::zero())))
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        check_dim(self.d, other.d)?;
        check_dim(self.levels.len(), other.levels.len())
    }
}

impl<T: Real> Add for &FockVector<T> {
    type Output = FockVector<T>;

    fn add(self, rhs: Self) -> FockVector<T> {
        let mut out = self.clone();
        for (a, b) in out.levels.iter_mut().zip(&rhs.levels) {
            a.axpy(Complex::new(T::one(), T::zero()), b);
        }
        out
    }
}

impl<T: Real> Sub for &FockVector<T> {
    type Output = FockVector<T>;

    fn sub(self, rhs: Self) -> FockVector<T> {
        let mut out = self.clone();
        for (a, b) in out.levels.iter_mut().zip(&rhs.levels) {
            a.axpy(Complex::new(-T::one(), T::zero()), b);
        }
        out
    }
}

/// Element of `H_s^{⊗n} ⊗ H`: symmetric in the occupation part, one free slot.
///
/// Coefficient of `|alpha> ⊗ e_j` sits at `rank(alpha) * d + j`.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedTensor<T> {
    d: usize,
    degree: usize,
    coeffs: Vec<C<T>>,
}

coefficient_ops!(MarkedTensor);

impl<T: Real> MarkedTensor<T> {
    pub fn zeros(d: usize, degree: usize) -> Result<Self> {
        Ok(MarkedTensor {
            d,
            degree,
            coeffs: vec![cz(); level_dim(d, degree)? * d],
        })
    }

    pub fn from_coeffs(d: usize, degree: usize, coeffs: Vec<C<T>>) -> Result<Self> {
        check_dim(level_dim(d, degree)? * d, coeffs.len())?;
        Ok(MarkedTensor { d, degree, coeffs })
    }

    /// `psi ⊗ g`.
    pub fn product(psi: &SymTensor<T>, g: &HVector<T>) -> Result<Self> {
        check_dim(psi.d, g.dim())?;
        let d = psi.d;
        let mut coeffs = Vec::with_capacity(psi.coeffs.len() * d);
        for c in &psi.coeffs {
            coeffs.extend(g.coeffs().iter().map(|gj| c * gj));
        }
        Ok(MarkedTensor {
            d,
            degree: psi.degree,
            coeffs,
        })
    }

    pub fn get(&self, rank: usize, slot: usize) -> C<T> {
        self.coeffs[rank * self.d + slot]
    }

    /// The symmetric tensor sitting in slot `j`.
    pub fn slot(&self, j: usize) -> SymTensor<T> {
        let coeffs = self
            .coeffs
            .iter()
            .skip(j)
            .step_by(self.d)
            .copied()
            .collect();
        SymTensor {
            d: self.d,
            degree: self.degree,
            coeffs,
        }
    }
}

/// Element of `Γ(H) ⊗ H` truncated at level `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedFock<T> {
    d: usize,
    levels: Vec<MarkedTensor<T>>,
}

impl<T: Real> MarkedFock<T> {
    pub fn zeros(d: usize, truncation: usize) -> Result<Self> {
        let levels = (0..=truncation)
            .map(|n| MarkedTensor::zeros(d, n))
            .collect::<Result<_>>()?;
        Ok(MarkedFock { d, levels })
    }

    pub fn from_levels(levels: Vec<MarkedTensor<T>>) -> Result<Self> {
        let d = levels
            .first()
            .map(|l| l.d)
            .ok_or_else(|| Error::Unsupported("empty level list".into()))?;
        for (n, l) in levels.iter().enumerate() {
            check_dim(n, l.degree)?;
            check_dim(d, l.d)?;
        }
        Ok(MarkedFock { d, levels })
    }

    /// `psi ⊗ g` level by level.
    pub fn product(psi: &FockVector<T>, g: &HVector<T>) -> Result<Self> {
        let levels = psi
            .levels()
            .iter()
            .map(|l| MarkedTensor::product(l, g))
            .collect::<Result<_>>()?;
        Ok(MarkedFock { d: psi.d(), levels })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn truncation(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[MarkedTensor<T>] {
        &self.levels
    }

    pub fn levels_mut(&mut self) -> &mut [MarkedTensor<T>] {
        &mut self.levels
    }

    pub fn inner(&self, other: &Self) -> Result<C<T>> {
        check_dim(self.d, other.d)?;
        check_dim(self.levels.len(), other.levels.len())?;
        Ok(self
            .levels
            .iter()
            .zip(&other.levels)
            .fold(cz(), |acc, (a, b)| acc + a.inner(b)))
    }

    pub fn norm_sqr(&self) -> T {
        self.levels.iter().map(|l| l.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn distance(&self, other: &Self) -> Result<T> {
        check_dim(self.levels.len(), other.levels.len())?;
        Ok(self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| a.distance(b).powi(2))
            .sum::<T>()
            .sqrt())
    }

    pub fn is_truncation_safe(&self, k: usize) -> bool {
        self.levels.iter().rev().take(k).all(|l| l.is_zero())
    }

    pub fn random<R: Rng + ?Sized>(
        d: usize,
        truncation: usize,
        max_level: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let mut v = Self::zeros(d, truncation)?;
        for l in v.levels.iter_mut().take(max_level.min(truncation) + 1) {
            fill_gaussian(&mut l.coeffs, rng);
        }
        let n = v.norm();
        for l in v.levels.iter_mut() {
            l.coeffs.iter_mut().for_each(|z| *z = *z / n);
        }
        Ok(v)
    }
}

/// Element of `H_s^{⊗n} ⊗ H ⊗ H`; coefficient of `|alpha> ⊗ e_i ⊗ e_j`
/// at `(rank(alpha) * d + i) * d + j`.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleMarkedTensor<T> {
    d: usize,
    degree: usize,
    coeffs: Vec<C<T>>,
}

coefficient_ops!(DoubleMarkedTensor);

impl<T: Real> DoubleMarkedTensor<T> {
    pub fn zeros(d: usize, degree: usize) -> Result<Self> {
        Ok(DoubleMarkedTensor {
            d,
            degree,
            coeffs: vec![cz(); level_dim(d, degree)? * d * d],
        })
    }

    /// Swaps the two free slots (`I ⊗ τ`).
    pub fn swap_slots(&self) -> Self {
        let d = self.d;
        let mut out = self.clone();
        let blocks = self.coeffs.len() / (d * d).max(1);
        for r in 0..blocks {
            for i in 0..d {
                for j in 0..d {
                    out.coeffs[(r * d + i) * d + j] = self.coeffs[(r * d + j) * d + i];
                }
            }
        }
        out
    }
}

fn fill_gaussian<T: Real, R: Rng + ?Sized>(coeffs: &mut [C<T>], rng: &mut R) {
    for z in coeffs.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *z = Complex::new(T::of(re), T::of(im));
    }
}
