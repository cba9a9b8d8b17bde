//! The single ledger between the two Fock pictures.
//!
//! Tensors are stored in `Γ(H) = ⊕ H_s^{⊗n}` with the orthonormal occupation
//! basis. The `⊙` picture uses the same tensors with inner product scaled by
//! `n!`, and `f^{⊙n} = √(n!) f^{⊗n}`. The unitary `Γ(H) -> Γ̂(H)` is
//! `(N!)^{-1/2}`: level `n` is divided by `√(n!)`.

use super::basis::factorial;
use super::tensor::{FockVector, SymTensor};
use crate::error::Result;
use crate::scalar::{cr, Real};

/// `√(n!)`, the factor in `f^{⊙n} = √(n!) f^{⊗n}`.
pub fn odot_factor(n: usize) -> f64 {
    factorial(n).sqrt()
}

/// `√(n!) ψ`: reads a `⊗`-normalized power as its `⊙` counterpart.
pub fn to_odot<T: Real>(psi: &SymTensor<T>) -> SymTensor<T> {
    psi.scale(cr(T::of(odot_factor(psi.degree()))))
}

pub fn from_odot<T: Real>(psi: &SymTensor<T>) -> SymTensor<T> {
    psi.scale(cr(T::of(1.0 / odot_factor(psi.degree()))))
}

/// Image of `ψ` under `(N!)^{-1/2}`.
pub fn to_hat<T: Real>(psi: &FockVector<T>) -> Vec<SymTensor<T>> {
    psi.levels().iter().map(from_odot).collect()
}

pub fn from_hat<T: Real>(levels: &[SymTensor<T>]) -> Result<FockVector<T>> {
    FockVector::from_levels(levels.iter().map(to_odot).collect())
}

/// `Σ n! ‖ψ̂_n‖²`: the norm of `Γ̂(H)`.
pub fn hat_norm_sqr<T: Real>(levels: &[SymTensor<T>]) -> f64 {
    levels
        .iter()
        .map(|l| factorial(l.degree()) * l.norm_sqr().to_f64_lossy())
        .sum()
}

/// `Σ n·n! ‖ψ̂_n‖²`: the maximal-domain functional of `∇⁻` read in `Γ̂(H)`.
pub fn hat_domain_functional<T: Real>(levels: &[SymTensor<T>]) -> f64 {
    levels
        .iter()
        .map(|l| l.degree() as f64 * factorial(l.degree()) * l.norm_sqr().to_f64_lossy())
        .sum()
}
