//! Ladder operators, the universal gradient/divergence pair and the
//! level-diagonal operators (number, semigroup, `Q`).
//!
//! Occupation-basis actions (`⊗`-normalization):
//!
//! ```text
//! a(f)|α>         = Σ_i conj(f_i) √α_i |α - e_i>
//! a†(f)|α>        = Σ_i f_i √(α_i + 1) |α + e_i>
//! ∇⁻_n |α>        = Σ_i √α_i |α - e_i> ⊗ e_i
//! ∇⁺_n |α> ⊗ e_j  = √(α_j + 1) |α + e_j>
//! ```

use num_complex::Complex;

use super::basis::LevelBasis;
use super::operator::DenseOperator;
use super::tensor::{
    check_dim, DoubleMarkedTensor, FockVector, HVector, MarkedFock, MarkedTensor, SymTensor,
};
use crate::error::{Error, Result};
use crate::scalar::{cr, cz, Real, C};

/// Result of a level-raising map on a truncated space.
#[derive(Clone, Debug, PartialEq)]
pub struct Truncated<V, T> {
    pub value: V,
    /// Norm of the component that landed above the truncation and was dropped.
    pub dropped_norm: T,
}

/// `∇⁻ψ` together with its graph-norm functional `Σ_n n ‖ψ_n‖²`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradMinus<T> {
    pub value: MarkedFock<T>,
    pub graph_functional: T,
}

fn sqrt_of<T: Real>(k: u32) -> T {
    T::of(k as f64).sqrt()
}

/// `a(f)` on one level; degree 0 maps to zero (returned as `None`).
pub fn lower_level<T: Real>(f: &HVector<T>, psi: &SymTensor<T>) -> Result<Option<SymTensor<T>>> {
    check_dim(psi.d(), f.dim())?;
    if psi.degree() == 0 {
        return Ok(None);
    }
    let n = psi.degree();
    let src = LevelBasis::new(psi.d(), n)?;
    let dst = LevelBasis::new(psi.d(), n - 1)?;
    let mut out = SymTensor::zeros(psi.d(), n - 1)?;
    let mut buf = vec![0u32; psi.d()];
    for (r, alpha) in src.iter().enumerate() {
        let c = psi.coeffs()[r];
        if c == cz() {
            continue;
        }
        buf.copy_from_slice(alpha);
        for i in 0..psi.d() {
            if alpha[i] == 0 {
                continue;
            }
            buf[i] -= 1;
            let t = dst.rank(&buf);
            buf[i] += 1;
            out.coeffs_mut()[t] = out.coeffs()[t] + f.get(i).conj() * c * sqrt_of::<T>(alpha[i]);
        }
    }
    Ok(Some(out))
}

/// `a†(f)` on one level, degree `n -> n + 1`.
pub fn raise_level<T: Real>(f: &HVector<T>, psi: &SymTensor<T>) -> Result<SymTensor<T>> {
    check_dim(psi.d(), f.dim())?;
    let n = psi.degree();
    let src = LevelBasis::new(psi.d(), n)?;
    let dst = LevelBasis::new(psi.d(), n + 1)?;
    let mut out = SymTensor::zeros(psi.d(), n + 1)?;
    let mut buf = vec![0u32; psi.d()];
    for (r, alpha) in src.iter().enumerate() {
        let c = psi.coeffs()[r];
        if c == cz() {
            continue;
        }
        buf.copy_from_slice(alpha);
        for i in 0..psi.d() {
            buf[i] += 1;
            let t = dst.rank(&buf);
            buf[i] -= 1;
            out.coeffs_mut()[t] = out.coeffs()[t] + f.get(i) * c * sqrt_of::<T>(alpha[i] + 1);
        }
    }
    Ok(out)
}

/// `∇⁻_n`: degree `n` symmetric tensor to degree `n - 1` marked tensor.
pub fn grad_minus_level<T: Real>(psi: &SymTensor<T>) -> Result<Option<MarkedTensor<T>>> {
    let (d, n) = (psi.d(), psi.degree());
    if n == 0 {
        return Ok(None);
    }
    let src = LevelBasis::new(d, n)?;
    let dst = LevelBasis::new(d, n - 1)?;
    let mut out = MarkedTensor::zeros(d, n - 1)?;
    let mut buf = vec![0u32; d];
    for (r, alpha) in src.iter().enumerate() {
        let c = psi.coeffs()[r];
        if c == cz() {
            continue;
        }
        buf.copy_from_slice(alpha);
        for i in 0..d {
            if alpha[i] == 0 {
                continue;
            }
            buf[i] -= 1;
            let t = dst.rank(&buf);
            buf[i] += 1;
            out.coeffs_mut()[t * d + i] = c * sqrt_of::<T>(alpha[i]);
        }
    }
    Ok(Some(out))
}

/// `∇⁺_n`: degree `n` marked tensor to degree `n + 1` symmetric tensor.
pub fn grad_plus_level<T: Real>(phi: &MarkedTensor<T>) -> Result<SymTensor<T>> {
    let (d, n) = (phi.d(), phi.degree());
    let src = LevelBasis::new(d, n)?;
    let dst = LevelBasis::new(d, n + 1)?;
    let mut out = SymTensor::zeros(d, n + 1)?;
    let mut buf = vec![0u32; d];
    for (r, alpha) in src.iter().enumerate() {
        buf.copy_from_slice(alpha);
        for j in 0..d {
            let c = phi.coeffs()[r * d + j];
            if c == cz() {
                continue;
            }
            buf[j] += 1;
            let t = dst.rank(&buf);
            buf[j] -= 1;
            out.coeffs_mut()[t] = out.coeffs()[t] + c * sqrt_of::<T>(alpha[j] + 1);
        }
    }
    Ok(out)
}

/// `(∇⁻ ⊗ I)` on one marked level: the new slot is `i`, the original slot stays `j`.
pub fn grad_minus_marked_level<T: Real>(
    phi: &MarkedTensor<T>,
) -> Result<Option<DoubleMarkedTensor<T>>> {
    let (d, n) = (phi.d(), phi.degree());
    if n == 0 {
        return Ok(None);
    }
    let src = LevelBasis::new(d, n)?;
    let dst = LevelBasis::new(d, n - 1)?;
    let mut out = DoubleMarkedTensor::zeros(d, n - 1)?;
    let mut buf = vec![0u32; d];
    for (r, alpha) in src.iter().enumerate() {
        buf.copy_from_slice(alpha);
        for i in 0..d {
            if alpha[i] == 0 {
                continue;
            }
            buf[i] -= 1;
            let t = dst.rank(&buf);
            buf[i] += 1;
            let s = sqrt_of::<T>(alpha[i]);
            for j in 0..d {
                out.coeffs_mut()[(t * d + i) * d + j] = phi.coeffs()[r * d + j] * s;
            }
        }
    }
    Ok(Some(out))
}

/// Annihilation operator `a(f)`; the top level of the result is zero.
pub fn annihilate<T: Real>(f: &HVector<T>, psi: &FockVector<T>) -> Result<FockVector<T>> {
    check_dim(psi.d(), f.dim())?;
    let mut out = FockVector::zeros(psi.d(), psi.truncation())?;
    for n in 1..=psi.truncation() {
        if let Some(l) = lower_level(f, psi.level(n))? {
            out.levels_mut()[n - 1] = l;
        }
    }
    Ok(out)
}

/// Creation operator `a†(f)`; the image of the top level is dropped and its norm reported.
pub fn create<T: Real>(f: &HVector<T>, psi: &FockVector<T>) -> Result<Truncated<FockVector<T>, T>> {
    check_dim(psi.d(), f.dim())?;
    let m = psi.truncation();
    if m == 0 {
        return Err(Error::Unsupported(
            "creation needs truncation M >= 1".into(),
        ));
    }
    let mut out = FockVector::zeros(psi.d(), m)?;
    for n in 0..m {
        out.levels_mut()[n + 1] = raise_level(f, psi.level(n))?;
    }
    let dropped = if psi.level(m).is_zero() {
        T::zero()
    } else {
        raise_level(f, psi.level(m))?.norm()
    };
    Ok(Truncated {
        value: out,
        dropped_norm: dropped,
    })
}

/// Universal annihilation `∇⁻`; the result keeps truncation `M` with an empty top level.
pub fn grad_minus<T: Real>(psi: &FockVector<T>) -> Result<GradMinus<T>> {
    let mut out = MarkedFock::zeros(psi.d(), psi.truncation())?;
    let mut functional = T::zero();
    for n in 1..=psi.truncation() {
        functional = functional + T::of_usize(n) * psi.level(n).norm_sqr();
        if let Some(l) = grad_minus_level(psi.level(n))? {
            out.levels_mut()[n - 1] = l;
        }
    }
    Ok(GradMinus {
        value: out,
        graph_functional: functional,
    })
}

/// Universal creation `∇⁺`; the image of the top level is dropped and its norm reported.
pub fn grad_plus<T: Real>(phi: &MarkedFock<T>) -> Result<Truncated<FockVector<T>, T>> {
    let m = phi.truncation();
    if m == 0 {
        return Err(Error::Unsupported(
            "universal creation needs truncation M >= 1".into(),
        ));
    }
    let mut out = FockVector::zeros(phi.d(), m)?;
    for n in 0..m {
        out.levels_mut()[n + 1] = grad_plus_level(&phi.levels()[n])?;
    }
    let top = &phi.levels()[m];
    let dropped = if top.is_zero() {
        T::zero()
    } else {
        grad_plus_level(top)?.norm()
    };
    Ok(Truncated {
        value: out,
        dropped_norm: dropped,
    })
}

/// `(∇⁻ ⊗ I)φ` as a list of double-marked levels `0..M-1`.
pub fn grad_minus_marked<T: Real>(phi: &MarkedFock<T>) -> Result<Vec<DoubleMarkedTensor<T>>> {
    let mut out = Vec::with_capacity(phi.truncation());
    for l in phi.levels().iter().skip(1) {
        out.push(grad_minus_marked_level(l)?.expect("degree >= 1"));
    }
    Ok(out)
}

fn scale_levels<T: Real>(psi: &FockVector<T>, factor: impl Fn(usize) -> T) -> FockVector<T> {
    let mut out = psi.clone();
    for (n, l) in out.levels_mut().iter_mut().enumerate() {
        *l = l.scale(cr(factor(n)));
    }
    out
}

/// Number operator `N`: level `n` times `n`.
pub fn number_apply<T: Real>(psi: &FockVector<T>) -> FockVector<T> {
    scale_levels(psi, |n| T::of_usize(n))
}

/// `T_t = e^{-tN}`.
pub fn number_semigroup<T: Real>(psi: &FockVector<T>, t: T) -> Result<FockVector<T>> {
    if t < T::zero() {
        return Err(Error::NegativeTime(t.to_f64_lossy()));
    }
    Ok(scale_levels(psi, |n| (-t * T::of_usize(n)).exp()))
}

/// `Q = (1 + N)^{-1/2}`.
pub fn q_map<T: Real>(psi: &FockVector<T>) -> FockVector<T> {
    scale_levels(psi, |n| T::one() / T::of_usize(n + 1).sqrt())
}

/// Graph inner product `<ψ, φ>_1 = <ψ, φ> + <∇⁻ψ, ∇⁻φ>`, evaluated through `∇⁻`.
pub fn graph_inner<T: Real>(psi: &FockVector<T>, phi: &FockVector<T>) -> Result<C<T>> {
    let a = grad_minus(psi)?.value;
    let b = grad_minus(phi)?.value;
    Ok(psi.inner(phi)? + a.inner(&b)?)
}

/// Conservation operator `Λ(A) = Σ_ij A_ij a†(e_i) a(e_j)` (level preserving).
pub fn conservation<T: Real>(a: &DenseOperator<T>, psi: &FockVector<T>) -> Result<FockVector<T>> {
    let d = psi.d();
    check_dim(d, a.rows())?;
    check_dim(d, a.cols())?;
    let residual = a.distance(&a.adjoint())?;
    if residual > 1e-12 * a.max_abs().max(1.0) {
        return Err(Error::NotSelfAdjoint(residual));
    }
    let mut out = FockVector::zeros(d, psi.truncation())?;
    for n in 0..=psi.truncation() {
        out.levels_mut()[n] = conservation_level(a, psi.level(n))?;
    }
    Ok(out)
}

pub(crate) fn conservation_level<T: Real>(
    a: &DenseOperator<T>,
    psi: &SymTensor<T>,
) -> Result<SymTensor<T>> {
    let (d, n) = (psi.d(), psi.degree());
    let basis = LevelBasis::new(d, n)?;
    let mut out = SymTensor::zeros(d, n)?;
    let mut buf = vec![0u32; d];
    for (r, alpha) in basis.iter().enumerate() {
        let c = psi.coeffs()[r];
        if c == cz() {
            continue;
        }
        buf.copy_from_slice(alpha);
        for j in 0..d {
            if alpha[j] == 0 {
                continue;
            }
            let sj = sqrt_of::<T>(alpha[j]);
            buf[j] -= 1;
            for i in 0..d {
                let aij = a.get(i, j);
                if aij == cz() {
                    continue;
                }
                let si = sqrt_of::<T>(buf[i] + 1);
                buf[i] += 1;
                let t = basis.rank(&buf);
                buf[i] -= 1;
                out.coeffs_mut()[t] = out.coeffs()[t] + aij * c * sj * si;
            }
            buf[j] += 1;
        }
    }
    Ok(out)
}

/// Second quantization `Γ(T)` of a contraction, acting as `T^{⊗n}` on level `n`.
pub fn second_quantize<T: Real>(
    op: &DenseOperator<T>,
    psi: &FockVector<T>,
) -> Result<FockVector<T>> {
    let d = psi.d();
    check_dim(d, op.rows())?;
    check_dim(d, op.cols())?;
    let norm = op.op_norm();
    if norm > 1.0 + 1e-12 {
        return Err(Error::NotContraction(norm));
    }
    let mut out = FockVector::zeros(d, psi.truncation())?;
    for n in 0..=psi.truncation() {
        out.levels_mut()[n] = second_quantize_level(op, psi.level(n))?;
    }
    Ok(out)
}

/// `Γ(T)|α> = (α!)^{-1/2} Π_i a†(T e_i)^{α_i} |0>`, summed against the coefficients.
pub(crate) fn second_quantize_level<T: Real>(
    op: &DenseOperator<T>,
    psi: &SymTensor<T>,
) -> Result<SymTensor<T>> {
    let (d, n) = (psi.d(), psi.degree());
    let columns: Vec<HVector<T>> = (0..d).map(|i| HVector::new(op.column(i))).collect();
    let basis = LevelBasis::new(d, n)?;
    let mut out = SymTensor::zeros(d, n)?;
    for (r, alpha) in basis.iter().enumerate() {
        let c = psi.coeffs()[r];
        if c == cz() {
            continue;
        }
        let mut state = SymTensor::scalar(d, Complex::new(T::one(), T::zero()));
        let mut fact = 1.0;
        for (i, &a) in alpha.iter().enumerate() {
            for k in 0..a {
                state = raise_level(&columns[i], &state)?;
                fact *= (k + 1) as f64;
            }
        }
        out.axpy(c / T::of(fact.sqrt()), &state);
    }
    Ok(out)
}
