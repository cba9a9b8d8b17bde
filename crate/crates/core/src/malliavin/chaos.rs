//! Chaos coefficients: symmetric step kernels `f_n` on cell multisets and
//! their isometric embedding into Fock coordinates.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fock::{
    factorial, level_dim, FockVector, HVector, LevelBasis, MarkedFock, MarkedTensor, SymTensor,
};
use crate::levy::{CellGrid, StepField};
use crate::scalar::{cr, cz, Real, C};

pub const CHAOS_FORMAT: &str = "chaoskit.chaos";
pub const CHAOS_FORMAT_VERSION: u32 = 1;

/// `μ^α / α!` and `n!` for every multiset of one level.
pub(crate) fn level_weights<T: Real>(masses: &[T], n: usize) -> Result<(LevelBasis, Vec<f64>)> {
    let basis = LevelBasis::new(masses.len(), n)?;
    let w = basis
        .iter()
        .map(|alpha| {
            alpha.iter().enumerate().fold(1.0, |acc, (c, &a)| {
                acc * masses[c].to_f64_lossy().powi(a as i32) / factorial(a as usize)
            })
        })
        .collect();
    Ok((basis, w))
}

fn check_masses<T: Real>(masses: &[T]) -> Result<()> {
    if masses.is_empty()
        || masses.iter().any(|m| {
            m.to_f64_lossy().partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
                || !m.is_finite()
        })
    {
        return Err(Error::InvalidKernel(
            "cell masses must be finite and positive".into(),
        ));
    }
    Ok(())
}

/// Kernels `f_0, ..., f_M`; `levels[n]` holds `f_n` on the multisets of degree `n`,
/// in the occupation-basis order over `d` cells.
#[derive(Clone, Debug, PartialEq)]
pub struct ChaosCoefficients<T> {
    masses: Vec<T>,
    levels: Vec<Vec<C<T>>>,
}

impl<T: Real> ChaosCoefficients<T> {
    pub fn zeros(masses: Vec<T>, truncation: usize) -> Result<Self> {
        check_masses(&masses)?;
        let d = masses.len();
        let levels = (0..=truncation)
            .map(|n| Ok(vec![cz(); level_dim(d, n)?]))
            .collect::<Result<_>>()?;
        Ok(ChaosCoefficients { masses, levels })
    }

    pub fn from_levels(masses: Vec<T>, levels: Vec<Vec<C<T>>>) -> Result<Self> {
        check_masses(&masses)?;
        if levels.is_empty() {
            return Err(Error::InvalidKernel("at least level 0 is required".into()));
        }
        for (n, l) in levels.iter().enumerate() {
            let want = level_dim(masses.len(), n)?;
            if l.len() != want {
                return Err(Error::DimensionMismatch {
                    expected: want,
                    actual: l.len(),
                });
            }
        }
        Ok(ChaosCoefficients { masses, levels })
    }

    /// `F = c`.
    pub fn constant(masses: Vec<T>, truncation: usize, c: C<T>) -> Result<Self> {
        let mut out = Self::zeros(masses, truncation)?;
        out.levels[0][0] = c;
        Ok(out)
    }

    /// `f_n = f^{⊗n} / n!`, the coefficients of `𝓔_{Y_f}(T)`.
    pub fn exponential(masses: Vec<T>, f: &[C<T>], truncation: usize) -> Result<Self> {
        if f.len() != masses.len() {
            return Err(Error::DimensionMismatch {
                expected: masses.len(),
                actual: f.len(),
            });
        }
        let mut out = Self::zeros(masses, truncation)?;
        for n in 0..=truncation {
            let basis = LevelBasis::new(f.len(), n)?;
            let inv = T::of(1.0 / factorial(n));
            for (r, alpha) in basis.iter().enumerate() {
                let p = alpha
                    .iter()
                    .enumerate()
                    .fold(cr(T::one()), |acc, (c, &a)| acc * f[c].powu(a));
                out.levels[n][r] = p * inv;
            }
        }
        Ok(out)
    }

    /// Gaussian coefficients on levels `0..=max_level`.
    pub fn random<R: Rng + ?Sized>(
        masses: Vec<T>,
        truncation: usize,
        max_level: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let mut out = Self::zeros(masses, truncation)?;
        for l in out.levels.iter_mut().take(max_level.min(truncation) + 1) {
            for z in l.iter_mut() {
                let (a, b): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
                *z = C::new(T::of(a), T::of(b));
            }
        }
        Ok(out)
    }

    pub fn d(&self) -> usize {
        self.masses.len()
    }

    pub fn truncation(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn masses(&self) -> &[T] {
        &self.masses
    }

    pub fn levels(&self) -> &[Vec<C<T>>] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> &[C<T>] {
        &self.levels[n]
    }

    pub fn level_mut(&mut self, n: usize) -> &mut [C<T>] {
        &mut self.levels[n]
    }

    /// `f_n(α)` for a multiset given as occupation numbers.
    pub fn kernel(&self, alpha: &[u32]) -> C<T> {
        let n = alpha.iter().sum::<u32>() as usize;
        match self.levels.get(n) {
            Some(l) => {
                l[LevelBasis::new(self.d(), n)
                    .expect("level exists")
                    .rank(alpha)]
            }
            None => cz(),
        }
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.masses != other.masses {
            return Err(Error::InvalidKernel(
                "chaos objects live on different cell grids".into(),
            ));
        }
        if self.levels.len() != other.levels.len() {
            return Err(Error::DimensionMismatch {
                expected: self.levels.len(),
                actual: other.levels.len(),
            });
        }
        Ok(())
    }

    /// `<f_n, g_n>_{L²(μ^n)}` per level.
    pub fn level_inner(&self, other: &Self, n: usize) -> Result<C<T>> {
        self.check_compatible(other)?;
        let (_, w) = level_weights(&self.masses, n)?;
        let nf = factorial(n);
        Ok(self.levels[n]
            .iter()
            .zip(&other.levels[n])
            .zip(&w)
            .fold(cz(), |acc, ((a, b), &wa)| {
                acc + a.conj() * b * T::of(nf * wa)
            }))
    }

    /// `E[conj(F) G] = Σ n! <f_n, g_n>`.
    pub fn inner(&self, other: &Self) -> Result<C<T>> {
        (0..self.levels.len()).try_fold(cz(), |acc, n| {
            Ok(acc + self.level_inner(other, n)? * T::of(factorial(n)))
        })
    }

    pub fn norm_sqr(&self) -> Result<T> {
        Ok(self.inner(self)?.re)
    }

    /// `Σ n n! ‖f_n‖²`, the functional whose finiteness defines `Dom(D)`.
    pub fn domain_functional(&self) -> Result<T> {
        (0..self.levels.len()).try_fold(T::zero(), |acc, n| {
            Ok(acc + self.level_inner(self, n)?.re * T::of(n as f64 * factorial(n)))
        })
    }

    /// `‖F‖² + Σ n n! ‖f_n‖²`.
    pub fn sobolev_norm_sqr(&self) -> Result<T> {
        Ok(self.norm_sqr()? + self.domain_functional()?)
    }

    /// Level `n` scaled by `s(n)`.
    pub fn scale_levels(&self, s: impl Fn(usize) -> T) -> Self {
        let mut out = self.clone();
        for (n, l) in out.levels.iter_mut().enumerate() {
            let f = s(n);
            l.iter_mut().for_each(|z| *z = *z * f);
        }
        out
    }

    pub fn distance(&self, other: &Self) -> Result<T> {
        self.check_compatible(other)?;
        let mut diff = self.clone();
        for (a, b) in diff.levels.iter_mut().zip(&other.levels) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x = *x - y);
        }
        Ok(diff.norm_sqr()?.max(T::zero()).sqrt())
    }

    /// Fock coordinates `√(n!) √(n!/α!) f_n(α) √(μ^α)`.
    pub fn embed(&self) -> Result<FockVector<T>> {
        let levels = (0..self.levels.len())
            .map(|n| {
                let (_, w) = level_weights(&self.masses, n)?;
                let nf = factorial(n);
                let coeffs = self.levels[n]
                    .iter()
                    .zip(&w)
                    .map(|(z, &wa)| *z * T::of(nf.sqrt() * (nf * wa).sqrt()))
                    .collect();
                SymTensor::from_coeffs(self.d(), n, coeffs)
            })
            .collect::<Result<_>>()?;
        FockVector::from_levels(levels)
    }

    /// Inverse of [`Self::embed`].
    pub fn from_fock(masses: Vec<T>, psi: &FockVector<T>) -> Result<Self> {
        check_masses(&masses)?;
        if psi.d() != masses.len() {
            return Err(Error::DimensionMismatch {
                expected: masses.len(),
                actual: psi.d(),
            });
        }
        let levels = psi
            .levels()
            .iter()
            .enumerate()
            .map(|(n, l)| {
                let (_, w) = level_weights(&masses, n)?;
                let nf = factorial(n);
                Ok(l.coeffs()
                    .iter()
                    .zip(&w)
                    .map(|(z, &wa)| *z * T::of(1.0 / (nf.sqrt() * (nf * wa).sqrt())))
                    .collect())
            })
            .collect::<Result<_>>()?;
        Ok(ChaosCoefficients { masses, levels })
    }

    /// Sparse, versioned text form; `grid` is recorded when given.
    pub fn to_json(&self, grid: Option<&CellGrid>) -> Result<String> {
        let mut levels = Vec::new();
        for (n, l) in self.levels.iter().enumerate() {
            let basis = LevelBasis::new(self.d(), n)?;
            let entries = basis
                .iter()
                .zip(l)
                .filter(|(_, z)| z.norm_sqr() > T::zero())
                .map(|(alpha, z)| {
                    let cells = alpha
                        .iter()
                        .enumerate()
                        .flat_map(|(c, &a)| std::iter::repeat_n(c, a as usize))
                        .collect();
                    KernelEntry {
                        cells,
                        re: z.re.to_f64_lossy(),
                        im: z.im.to_f64_lossy(),
                    }
                })
                .collect();
            levels.push(LevelRecord { degree: n, entries });
        }
        let doc = ChaosDocument {
            format: CHAOS_FORMAT.into(),
            version: CHAOS_FORMAT_VERSION,
            grid_hash: grid.map(|g| g.spec_hash()),
            grid: grid.cloned(),
            masses: self.masses.iter().map(|m| m.to_f64_lossy()).collect(),
            levels,
        };
        serde_json::to_string(&doc).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ChaosDocument =
            serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        if doc.format != CHAOS_FORMAT || doc.version != CHAOS_FORMAT_VERSION {
            return Err(Error::Serialization(format!(
                "unsupported format {} v{}",
                doc.format, doc.version
            )));
        }
        if let (Some(g), Some(h)) = (&doc.grid, &doc.grid_hash) {
            if g.spec_hash() != *h {
                return Err(Error::Serialization(
                    "grid hash does not match the recorded grid".into(),
                ));
            }
        }
        let masses: Vec<T> = doc.masses.iter().map(|&m| T::of(m)).collect();
        let truncation = doc.levels.iter().map(|l| l.degree).max().unwrap_or(0);
        let mut out = Self::zeros(masses, truncation)?;
        let d = out.d();
        for l in &doc.levels {
            let basis = LevelBasis::new(d, l.degree)?;
            for e in &l.entries {
                if e.cells.len() != l.degree || e.cells.iter().any(|&c| c >= d) {
                    return Err(Error::Serialization(format!(
                        "bad cell tuple {:?}",
                        e.cells
                    )));
                }
                let mut alpha = vec![0u32; d];
                e.cells.iter().for_each(|&c| alpha[c] += 1);
                out.levels[l.degree][basis.rank(&alpha)] = C::new(T::of(e.re), T::of(e.im));
            }
        }
        Ok(out)
    }

    /// SHA-256 of the text form.
    pub fn content_hash(&self, grid: Option<&CellGrid>) -> Result<String> {
        Ok(hex::encode(Sha256::digest(self.to_json(grid)?.as_bytes())))
    }
}

#[derive(Serialize, Deserialize)]
struct KernelEntry {
    cells: Vec<usize>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct LevelRecord {
    degree: usize,
    entries: Vec<KernelEntry>,
}

#[derive(Serialize, Deserialize)]
struct ChaosDocument {
    format: String,
    version: u32,
    grid_hash: Option<String>,
    grid: Option<CellGrid>,
    masses: Vec<f64>,
    levels: Vec<LevelRecord>,
}

impl ChaosCoefficients<f64> {
    /// Exponential coefficients of a step field on `grid`.
    pub fn exponential_of(grid: &CellGrid, f: &StepField, truncation: usize) -> Result<Self> {
        Self::exponential(grid.masses(), f.values(), truncation)
    }
}

/// `f ↦ (f(c) √μ_c)_c`, isometric from step fields in `L²(μ)` to `C^d`.
pub fn embed(f: &StepField, grid: &CellGrid) -> Result<HVector<f64>> {
    if f.values().len() != grid.n_cells() {
        return Err(Error::DimensionMismatch {
            expected: grid.n_cells(),
            actual: f.values().len(),
        });
    }
    Ok(HVector::new(
        f.values()
            .iter()
            .enumerate()
            .map(|(c, z)| z * grid.mass(c).sqrt())
            .collect(),
    ))
}

/// Kernels `g_{n+1}(β; c)`, symmetric in the multiset `β` of degree `n`, free in the cell `c`.
///
/// `levels[n]` stores `g` at `rank(β) * d + c`.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedChaos<T> {
    masses: Vec<T>,
    levels: Vec<Vec<C<T>>>,
}

impl<T: Real> MarkedChaos<T> {
    /// Levels `0..len`.
    pub fn zeros(masses: Vec<T>, len: usize) -> Result<Self> {
        check_masses(&masses)?;
        let d = masses.len();
        let levels = (0..len)
            .map(|n| Ok(vec![cz(); level_dim(d, n)? * d]))
            .collect::<Result<_>>()?;
        Ok(MarkedChaos { masses, levels })
    }

    pub fn from_levels(masses: Vec<T>, levels: Vec<Vec<C<T>>>) -> Result<Self> {
        check_masses(&masses)?;
        let d = masses.len();
        for (n, l) in levels.iter().enumerate() {
            let want = level_dim(d, n)? * d;
            if l.len() != want {
                return Err(Error::DimensionMismatch {
                    expected: want,
                    actual: l.len(),
                });
            }
        }
        Ok(MarkedChaos { masses, levels })
    }

    /// Deterministic integrand `X = h` (level 0 only).
    pub fn deterministic(masses: Vec<T>, len: usize, h: &[C<T>]) -> Result<Self> {
        let mut out = Self::zeros(masses, len.max(1))?;
        if h.len() != out.d() {
            return Err(Error::DimensionMismatch {
                expected: out.d(),
                actual: h.len(),
            });
        }
        out.levels[0].copy_from_slice(h);
        Ok(out)
    }

    pub fn random<R: Rng + ?Sized>(masses: Vec<T>, len: usize, rng: &mut R) -> Result<Self> {
        let mut out = Self::zeros(masses, len)?;
        for l in out.levels.iter_mut() {
            for z in l.iter_mut() {
                let (a, b): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
                *z = C::new(T::of(a), T::of(b));
            }
        }
        Ok(out)
    }

    pub fn d(&self) -> usize {
        self.masses.len()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn masses(&self) -> &[T] {
        &self.masses
    }

    pub fn levels(&self) -> &[Vec<C<T>>] {
        &self.levels
    }

    pub fn level_mut(&mut self, n: usize) -> &mut [C<T>] {
        &mut self.levels[n]
    }

    /// `g(β; c)`.
    pub fn kernel(&self, beta: &[u32], c: usize) -> C<T> {
        let n = beta.iter().sum::<u32>() as usize;
        match self.levels.get(n) {
            Some(l) => {
                l[LevelBasis::new(self.d(), n)
                    .expect("level exists")
                    .rank(beta)
                    * self.d()
                    + c]
            }
            None => cz(),
        }
    }

    /// `∫ E[conj(X(s)) Y(s)] μ(ds) = Σ n! Σ_{β,c} (n!/β!) μ^β μ_c conj(g) h`.
    pub fn inner(&self, other: &Self) -> Result<C<T>> {
        if self.masses != other.masses || self.levels.len() != other.levels.len() {
            return Err(Error::InvalidKernel(
                "marked chaos objects are not compatible".into(),
            ));
        }
        let d = self.d();
        let mut acc = cz();
        for n in 0..self.levels.len() {
            let (_, w) = level_weights(&self.masses, n)?;
            let nf = factorial(n);
            for (r, &wb) in w.iter().enumerate() {
                for c in 0..d {
                    let k = r * d + c;
                    let weight = T::of(nf * nf * wb * self.masses[c].to_f64_lossy());
                    acc = acc + self.levels[n][k].conj() * other.levels[n][k] * weight;
                }
            }
        }
        Ok(acc)
    }

    pub fn norm_sqr(&self) -> Result<T> {
        Ok(self.inner(self)?.re)
    }

    /// Fock coordinates `√(n!) √(n!/β!) g(β;c) √(μ^β) √μ_c` in `Γ(H) ⊗ H`, truncated at `truncation`.
    pub fn embed(&self, truncation: usize) -> Result<MarkedFock<T>> {
        let d = self.d();
        let mut levels = Vec::with_capacity(truncation + 1);
        for n in 0..=truncation {
            let (_, w) = level_weights(&self.masses, n)?;
            let nf = factorial(n);
            let mut coeffs = vec![cz(); w.len() * d];
            if let Some(l) = self.levels.get(n) {
                for (r, &wb) in w.iter().enumerate() {
                    for c in 0..d {
                        let s = nf.sqrt() * (nf * wb).sqrt() * self.masses[c].to_f64_lossy().sqrt();
                        coeffs[r * d + c] = l[r * d + c] * T::of(s);
                    }
                }
            }
            levels.push(MarkedTensor::from_coeffs(d, n, coeffs)?);
        }
        MarkedFock::from_levels(levels)
    }
}
