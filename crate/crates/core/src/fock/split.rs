//! The identification `Γ(H₁ ⊕ H₂) ≅ Γ(H₁) ⊗ Γ(H₂)` and the split form of `∇^±`.

use super::basis::{level_dim, LevelBasis, Ranker};
use super::ladder::{grad_minus, grad_minus_level, grad_plus, grad_plus_level};
use super::tensor::{check_dim, FockVector, MarkedFock, MarkedTensor, SymTensor};
use crate::error::{Error, Result};
use crate::scalar::{cz, Real, C};

/// A partition `S₁ ⊔ S₂` of the coordinates `0..d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    d: usize,
    first: Vec<usize>,
    second: Vec<usize>,
}

impl Partition {
    /// `first` lists `S₁`; `S₂` is its complement. Both parts must be nonempty.
    pub fn new(d: usize, first: &[usize]) -> Result<Self> {
        let mut seen = vec![false; d];
        for &i in first {
            if i >= d {
                return Err(Error::InvalidPartition(format!(
                    "index {i} out of range for d = {d}"
                )));
            }
            if seen[i] {
                return Err(Error::InvalidPartition(format!("index {i} repeated")));
            }
            seen[i] = true;
        }
        let mut first = first.to_vec();
        first.sort_unstable();
        let second: Vec<usize> = (0..d).filter(|&i| !seen[i]).collect();
        if first.is_empty() || second.is_empty() {
            return Err(Error::InvalidPartition(
                "both parts must be nonempty".into(),
            ));
        }
        Ok(Partition { d, first, second })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn first(&self) -> &[usize] {
        &self.first
    }

    pub fn second(&self) -> &[usize] {
        &self.second
    }
}

/// Element of `Γ(H₁) ⊗ Γ(H₂)` truncated at total degree `M`.
///
/// `blocks[n][n1]` is the `dim₁(n1) × dim₂(n - n1)` coefficient matrix (row-major).
#[derive(Clone, Debug, PartialEq)]
pub struct SplitFock<T> {
    d1: usize,
    d2: usize,
    blocks: Vec<Vec<Vec<C<T>>>>,
}

impl<T: Real> SplitFock<T> {
    pub fn zeros(d1: usize, d2: usize, truncation: usize) -> Result<Self> {
        let blocks = (0..=truncation)
            .map(|n| {
                (0..=n)
                    .map(|n1| Ok(vec![cz(); level_dim(d1, n1)? * level_dim(d2, n - n1)?]))
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(SplitFock { d1, d2, blocks })
    }

    /// `ψ₁ ⊗ ψ₂`, keeping total degrees up to `truncation`.
    pub fn product(psi1: &FockVector<T>, psi2: &FockVector<T>, truncation: usize) -> Result<Self> {
        let mut out = Self::zeros(psi1.d(), psi2.d(), truncation)?;
        for (n, level) in out.blocks.iter_mut().enumerate() {
            for (n1, block) in level.iter_mut().enumerate() {
                let n2 = n - n1;
                if n1 > psi1.truncation() || n2 > psi2.truncation() {
                    continue;
                }
                let (a, b) = (psi1.level(n1).coeffs(), psi2.level(n2).coeffs());
                for (r1, x) in a.iter().enumerate() {
                    for (r2, y) in b.iter().enumerate() {
                        block[r1 * b.len() + r2] = x * y;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.d1, self.d2)
    }

    pub fn truncation(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn block(&self, n1: usize, n2: usize) -> &[C<T>] {
        &self.blocks[n1 + n2][n1]
    }

    pub fn inner(&self, other: &Self) -> Result<C<T>> {
        check_dim(self.blocks.len(), other.blocks.len())?;
        let mut acc = cz();
        for (a, b) in self
            .blocks
            .iter()
            .flatten()
            .zip(other.blocks.iter().flatten())
        {
            acc = acc + a.iter().zip(b).fold(cz(), |s, (x, y)| s + x.conj() * y);
        }
        Ok(acc)
    }

    pub fn norm(&self) -> T {
        self.blocks
            .iter()
            .flatten()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<T>()
            .sqrt()
    }
}

struct Splitter {
    first: Vec<usize>,
    second: Vec<usize>,
    r1: Ranker,
    r2: Ranker,
}

impl Splitter {
    fn new(p: &Partition, truncation: usize) -> Self {
        Splitter {
            first: p.first.clone(),
            second: p.second.clone(),
            r1: Ranker::new(p.first.len(), truncation),
            r2: Ranker::new(p.second.len(), truncation),
        }
    }

    /// `(n1, rank₁, rank₂)` of the restrictions `α|S₁`, `α|S₂`.
    fn locate(&self, alpha: &[u32], a1: &mut Vec<u32>, a2: &mut Vec<u32>) -> (usize, usize, usize) {
        a1.clear();
        a1.extend(self.first.iter().map(|&i| alpha[i]));
        a2.clear();
        a2.extend(self.second.iter().map(|&i| alpha[i]));
        let n1 = a1.iter().sum::<u32>() as usize;
        (n1, self.r1.rank(a1), self.r2.rank(a2))
    }

    fn join(&self, a1: &[u32], a2: &[u32], d: usize) -> Vec<u32> {
        let mut alpha = vec![0; d];
        for (k, &i) in self.first.iter().enumerate() {
            alpha[i] = a1[k];
        }
        for (k, &i) in self.second.iter().enumerate() {
            alpha[i] = a2[k];
        }
        alpha
    }
}

fn split_level<T: Real>(s: &Splitter, psi: &SymTensor<T>, out: &mut [Vec<C<T>>]) -> Result<()> {
    let n = psi.degree();
    let basis = LevelBasis::new(psi.d(), n)?;
    let (mut a1, mut a2) = (Vec::new(), Vec::new());
    for (r, alpha) in basis.iter().enumerate() {
        let (n1, r1, r2) = s.locate(alpha, &mut a1, &mut a2);
        let cols = level_dim(s.second.len(), n - n1)?;
        out[n1][r1 * cols + r2] = psi.coeffs()[r];
    }
    Ok(())
}

/// Image of `ψ` under `|α> ↦ |α|S₁> ⊗ |α|S₂>`.
pub fn split_iso<T: Real>(psi: &FockVector<T>, p: &Partition) -> Result<SplitFock<T>> {
    check_dim(p.d, psi.d())?;
    let m = psi.truncation();
    let s = Splitter::new(p, m);
    let mut out = SplitFock::zeros(p.first.len(), p.second.len(), m)?;
    for n in 0..=m {
        split_level(&s, psi.level(n), &mut out.blocks[n])?;
    }
    Ok(out)
}

/// Inverse of [`split_iso`].
pub fn merge<T: Real>(x: &SplitFock<T>, p: &Partition) -> Result<FockVector<T>> {
    check_dim(p.first.len(), x.d1)?;
    check_dim(p.second.len(), x.d2)?;
    let m = x.truncation();
    let s = Splitter::new(p, m);
    let mut out = FockVector::zeros(p.d, m)?;
    let (mut a1, mut a2) = (Vec::new(), Vec::new());
    for n in 0..=m {
        let basis = LevelBasis::new(p.d, n)?;
        for (r, alpha) in basis.iter().enumerate() {
            let (n1, r1, r2) = s.locate(alpha, &mut a1, &mut a2);
            let cols = level_dim(x.d2, n - n1)?;
            out.levels_mut()[n].coeffs_mut()[r] = x.blocks[n][n1][r1 * cols + r2];
        }
    }
    Ok(out)
}

fn column<T: Real>(block: &[C<T>], cols: usize, c: usize) -> Vec<C<T>> {
    block.iter().skip(c).step_by(cols).copied().collect()
}

/// `‖∇⁻ψ − [π₁(∇₁⁻⊗I) + π₂(I⊗∇₂⁻)]ψ‖` with the right side evaluated factor by factor.
pub fn split_grad_minus_residual<T: Real>(psi: &FockVector<T>, p: &Partition) -> Result<T> {
    let direct = grad_minus(psi)?.value;
    let x = split_iso(psi, p)?;
    let (d, m) = (p.d, psi.truncation());
    let (d1, d2) = (x.d1, x.d2);
    let s = Splitter::new(p, m);
    let mut out = MarkedFock::zeros(d, m)?;
    let full = Ranker::new(d, m);
    for n in 1..=m {
        for n1 in 0..=n {
            let n2 = n - n1;
            let block = &x.blocks[n][n1];
            let (b1, b2) = (LevelBasis::new(d1, n1)?, LevelBasis::new(d2, n2)?);
            // first factor: columns indexed by the second factor's basis
            if n1 > 0 {
                let lower = LevelBasis::new(d1, n1 - 1)?;
                for (c, a2) in b2.iter().enumerate() {
                    let f = SymTensor::from_coeffs(d1, n1, column(block, b2.len(), c))?;
                    let g = grad_minus_level(&f)?.expect("degree >= 1");
                    for (r, a1) in lower.iter().enumerate() {
                        let t = full.rank(&s.join(a1, a2, d));
                        for k in 0..d1 {
                            let v = out.levels()[n - 1].coeffs()[t * d + s.first[k]] + g.get(r, k);
                            out.levels_mut()[n - 1].coeffs_mut()[t * d + s.first[k]] = v;
                        }
                    }
                }
            }
            if n2 > 0 {
                let lower = LevelBasis::new(d2, n2 - 1)?;
                for (r1, a1) in b1.iter().enumerate() {
                    let row = block[r1 * b2.len()..(r1 + 1) * b2.len()].to_vec();
                    let f = SymTensor::from_coeffs(d2, n2, row)?;
                    let g = grad_minus_level(&f)?.expect("degree >= 1");
                    for (r, a2) in lower.iter().enumerate() {
                        let t = full.rank(&s.join(a1, a2, d));
                        for k in 0..d2 {
                            let v = out.levels()[n - 1].coeffs()[t * d + s.second[k]] + g.get(r, k);
                            out.levels_mut()[n - 1].coeffs_mut()[t * d + s.second[k]] = v;
                        }
                    }
                }
            }
        }
    }
    direct.distance(&out)
}

/// `‖∇⁺φ − [(∇₁⁺⊗I)π₁* + (I⊗∇₂⁺)π₂*]φ‖` with the right side evaluated factor by factor.
pub fn split_grad_plus_residual<T: Real>(phi: &MarkedFock<T>, p: &Partition) -> Result<T> {
    check_dim(p.d, phi.d())?;
    let direct = grad_plus(phi)?.value;
    let (d, m) = (p.d, phi.truncation());
    let (d1, d2) = (p.first.len(), p.second.len());
    let s = Splitter::new(p, m);
    let mut acc = SplitFock::zeros(d1, d2, m)?;
    for n in 0..m {
        // split every slot of level n
        let slots: Vec<Vec<Vec<C<T>>>> = (0..d)
            .map(|j| {
                let mut blocks: Vec<Vec<C<T>>> = (0..=n)
                    .map(|n1| Ok(vec![cz(); level_dim(d1, n1)? * level_dim(d2, n - n1)?]))
                    .collect::<Result<_>>()?;
                split_level(&s, &phi.levels()[n].slot(j), &mut blocks)?;
                Ok(blocks)
            })
            .collect::<Result<_>>()?;
        for n1 in 0..=n {
            let n2 = n - n1;
            let (c1, c2) = (level_dim(d1, n1)?, level_dim(d2, n2)?);
            // (∇₁⁺ ⊗ I): one marked tensor over H₁ per column of the second factor
            let up1 = level_dim(d1, n1 + 1)?;
            for c in 0..c2 {
                let mut coeffs = vec![cz(); c1 * d1];
                for r in 0..c1 {
                    for k in 0..d1 {
                        coeffs[r * d1 + k] = slots[s.first[k]][n1][r * c2 + c];
                    }
                }
                let g = grad_plus_level(&MarkedTensor::from_coeffs(d1, n1, coeffs)?)?;
                let block = &mut acc.blocks[n + 1][n1 + 1];
                for r in 0..up1 {
                    block[r * c2 + c] = block[r * c2 + c] + g.coeffs()[r];
                }
            }
            // (I ⊗ ∇₂⁺): one marked tensor over H₂ per row of the first factor
            let up2 = level_dim(d2, n2 + 1)?;
            for r in 0..c1 {
                let mut coeffs = vec![cz(); c2 * d2];
                for c in 0..c2 {
                    for k in 0..d2 {
                        coeffs[c * d2 + k] = slots[s.second[k]][n1][r * c2 + c];
                    }
                }
                let g = grad_plus_level(&MarkedTensor::from_coeffs(d2, n2, coeffs)?)?;
                let block = &mut acc.blocks[n + 1][n1];
                for c in 0..up2 {
                    block[r * up2 + c] = block[r * up2 + c] + g.coeffs()[c];
                }
            }
        }
    }
    direct.distance(&merge(&acc, p)?)
}
