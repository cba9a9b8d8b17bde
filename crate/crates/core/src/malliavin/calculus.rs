//! Gradient `D`, divergence `δ`, the number operator and the OU semigroup on
//! chaos kernels.

use super::chaos::{level_weights, ChaosCoefficients, MarkedChaos};
use crate::error::{Error, Result};
use crate::fock::{factorial, LevelBasis};
use crate::scalar::{cz, Real, C};

/// `DF` with the Sobolev functional `‖F‖² + Σ n n! ‖f_n‖²`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gradient<T> {
    pub value: MarkedChaos<T>,
    pub sobolev_norm_sqr: T,
}

/// `(DF)(β; c) = n f_n(β + e_c)`: level `n` of `F` moves to level `n - 1`.
pub fn gradient<T: Real>(f: &ChaosCoefficients<T>) -> Result<Gradient<T>> {
    let d = f.d();
    let m = f.truncation();
    let mut out = MarkedChaos::zeros(f.masses().to_vec(), m)?;
    let mut buf = vec![0u32; d];
    for n in 1..=m {
        let lower = LevelBasis::new(d, n - 1)?;
        let upper = LevelBasis::new(d, n)?;
        let scale = T::of_usize(n);
        for (r, beta) in lower.iter().enumerate() {
            buf.copy_from_slice(beta);
            for c in 0..d {
                buf[c] += 1;
                out.level_mut(n - 1)[r * d + c] = f.level(n)[upper.rank(&buf)] * scale;
                buf[c] -= 1;
            }
        }
    }
    Ok(Gradient {
        value: out,
        sobolev_norm_sqr: f.sobolev_norm_sqr()?,
    })
}

/// `D_c F`: the gradient with its free argument fixed on the cell `c` (truncation `M - 1`).
pub fn derivative_at<T: Real>(
    f: &ChaosCoefficients<T>,
    cell: usize,
) -> Result<ChaosCoefficients<T>> {
    if cell >= f.d() {
        return Err(Error::DimensionMismatch {
            expected: f.d(),
            actual: cell,
        });
    }
    let g = gradient(f)?.value;
    let d = f.d();
    let levels = g
        .levels()
        .iter()
        .map(|l| l.iter().skip(cell).step_by(d).copied().collect())
        .collect();
    if f.truncation() == 0 {
        return ChaosCoefficients::zeros(f.masses().to_vec(), 0);
    }
    ChaosCoefficients::from_levels(f.masses().to_vec(), levels)
}

/// `D_h F = Σ_c μ_c conj(h_c) D_c F`.
pub fn directional<T: Real>(f: &ChaosCoefficients<T>, h: &[C<T>]) -> Result<ChaosCoefficients<T>> {
    if h.len() != f.d() {
        return Err(Error::DimensionMismatch {
            expected: f.d(),
            actual: h.len(),
        });
    }
    let g = gradient(f)?.value;
    let d = f.d();
    let levels = g
        .levels()
        .iter()
        .map(|l| {
            l.chunks(d)
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .fold(cz(), |acc, (c, z)| acc + h[c].conj() * *z * f.masses()[c])
                })
                .collect()
        })
        .collect::<Vec<Vec<C<T>>>>();
    if levels.is_empty() {
        return ChaosCoefficients::zeros(f.masses().to_vec(), 0);
    }
    ChaosCoefficients::from_levels(f.masses().to_vec(), levels)
}

/// `δX = Σ I_{n+1}(g̃_{n+1})`, `g̃(α) = (1/(n+1)) Σ_c α_c g(α - e_c; c)`.
pub fn divergence<T: Real>(x: &MarkedChaos<T>) -> Result<ChaosCoefficients<T>> {
    let d = x.d();
    let len = x.len();
    let mut out = ChaosCoefficients::zeros(x.masses().to_vec(), len)?;
    let mut buf = vec![0u32; d];
    for n in 0..len {
        let lower = LevelBasis::new(d, n)?;
        let upper = LevelBasis::new(d, n + 1)?;
        let inv = T::one() / T::of_usize(n + 1);
        for (r, alpha) in upper.iter().enumerate() {
            buf.copy_from_slice(alpha);
            let mut acc = cz();
            for c in 0..d {
                if alpha[c] == 0 {
                    continue;
                }
                buf[c] -= 1;
                acc = acc + x.levels()[n][lower.rank(&buf) * d + c] * T::of(alpha[c] as f64);
                buf[c] += 1;
            }
            out.level_mut(n + 1)[r] = acc * inv;
        }
    }
    Ok(out)
}

/// `Σ (n+1)! ‖g̃_{n+1}‖²`, the functional whose finiteness defines `Dom(δ)`.
pub fn divergence_functional<T: Real>(x: &MarkedChaos<T>) -> Result<T> {
    divergence(x)?.norm_sqr()
}

/// Both sides of `E[conj(δX) δY] = ∫E[conj(X(s))Y(s)]μ(ds) + ∫∫E[conj(D_tX(s)) D_sY(t)]μ(ds)μ(dt)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IsometryReport<T> {
    pub lhs: C<T>,
    pub rhs: C<T>,
    pub first_term: C<T>,
    pub second_term: C<T>,
}

impl<T: Real> IsometryReport<T> {
    pub fn residual(&self) -> T {
        (self.lhs - self.rhs).norm()
    }

    /// `max(|lhs|, |first|, |second|, 1)`.
    pub fn scale(&self) -> T {
        self.lhs
            .norm()
            .max(self.first_term.norm())
            .max(self.second_term.norm())
            .max(T::one())
    }
}

/// Kernel-level evaluation; the left side goes through `δ`, the right side through `D` on each integrand.
pub fn ito_skorohod<T: Real>(x: &MarkedChaos<T>, y: &MarkedChaos<T>) -> Result<IsometryReport<T>> {
    let lhs = divergence(x)?.inner(&divergence(y)?)?;
    let first_term = x.inner(y)?;
    let d = x.d();
    let masses: Vec<f64> = x.masses().iter().map(|m| m.to_f64_lossy()).collect();
    let mut second = cz();
    let mut buf = vec![0u32; d];
    for n in 1..x.len() {
        let (lower, w) = level_weights(x.masses(), n - 1)?;
        let upper = LevelBasis::new(d, n)?;
        let base = (n * n) as f64 * factorial(n - 1) * factorial(n - 1);
        let (gx, gy) = (&x.levels()[n], &y.levels()[n]);
        for (r, beta) in lower.iter().enumerate() {
            buf.copy_from_slice(beta);
            let wb = base * w[r];
            for s in 0..d {
                for t in 0..d {
                    buf[t] += 1;
                    let a = gx[upper.rank(&buf) * d + s];
                    buf[t] -= 1;
                    buf[s] += 1;
                    let b = gy[upper.rank(&buf) * d + t];
                    buf[s] -= 1;
                    second = second + a.conj() * b * T::of(wb * masses[s] * masses[t]);
                }
            }
        }
    }
    Ok(IsometryReport {
        lhs,
        rhs: first_term + second,
        first_term,
        second_term: second,
    })
}

/// `𝓝F`: level `n` times `n`.
pub fn number_apply<T: Real>(f: &ChaosCoefficients<T>) -> ChaosCoefficients<T> {
    f.scale_levels(|n| T::of_usize(n))
}

/// `𝓣_t F`: level `n` times `e^{-tn}`.
pub fn number_ou<T: Real>(f: &ChaosCoefficients<T>, t: T) -> Result<ChaosCoefficients<T>> {
    if t < T::zero() {
        return Err(Error::NegativeTime(t.to_f64_lossy()));
    }
    Ok(f.scale_levels(|n| (-t * T::of_usize(n)).exp()))
}

/// `(I + 𝓝)^{-1/2} F`.
pub fn resolvent_sqrt<T: Real>(f: &ChaosCoefficients<T>) -> ChaosCoefficients<T> {
    f.scale_levels(|n| T::one() / T::of_usize(n + 1).sqrt())
}

/// `‖δDF - 𝓝F‖`.
pub fn n_factorization_residual<T: Real>(f: &ChaosCoefficients<T>) -> Result<T> {
    let ddf = divergence(&gradient(f)?.value)?;
    let nf = number_apply(f);
    // δD lands in truncation M with the same levels as F
    nf.distance(&ddf)
}
