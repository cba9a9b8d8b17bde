//! The abstract Itô–Skorohod identity on `Γ(H) ⊗ H`.

use super::ladder::{grad_minus_marked, grad_plus};
use super::tensor::MarkedFock;
use crate::error::{Error, Result};
use crate::scalar::{cz, Real, C};

/// Both sides of `<∇⁺φ₁, ∇⁺φ₂> = <φ₁, φ₂> + <(I⊗τ)(∇⁻⊗I)φ₁, (∇⁻⊗I)φ₂>`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkorohodReport<T> {
    pub lhs: C<T>,
    pub rhs: C<T>,
    /// `<φ₁, φ₂>`.
    pub first_term: C<T>,
    /// `<(I⊗τ)(∇⁻⊗I)φ₁, (∇⁻⊗I)φ₂>`.
    pub second_term: C<T>,
    /// `‖∇⁺φ_i‖` for both inputs.
    pub divergence_norms: [T; 2],
    /// `‖φ_i‖₁ = (‖φ_i‖² + ‖(∇⁻⊗I)φ_i‖²)^{1/2}`.
    pub graph_norms: [T; 2],
}

impl<T: Real> SkorohodReport<T> {
    pub fn residual(&self) -> T {
        (self.lhs - self.rhs).norm()
    }

    /// `‖∇⁺φ‖ ≤ ‖φ‖₁` for both inputs, up to `slack`.
    pub fn is_contraction(&self, slack: T) -> bool {
        (0..2).all(|i| self.divergence_norms[i] <= self.graph_norms[i] * (T::one() + slack))
    }
}

fn require_safe<T: Real>(phi: &MarkedFock<T>) -> Result<()> {
    if phi.is_truncation_safe(1) {
        Ok(())
    } else {
        Err(Error::NotTruncationSafe {
            level: phi.truncation(),
        })
    }
}

/// Evaluates the left side through `∇⁺` and the right side through `(∇⁻⊗I)` and the slot swap.
pub fn ito_skorohod_abstract<T: Real>(
    phi1: &MarkedFock<T>,
    phi2: &MarkedFock<T>,
) -> Result<SkorohodReport<T>> {
    require_safe(phi1)?;
    require_safe(phi2)?;
    let d1 = grad_plus(phi1)?.value;
    let d2 = grad_plus(phi2)?.value;
    let lhs = d1.inner(&d2)?;

    let first_term = phi1.inner(phi2)?;
    let g1 = grad_minus_marked(phi1)?;
    let g2 = grad_minus_marked(phi2)?;
    let second_term = g1
        .iter()
        .zip(&g2)
        .fold(cz(), |acc, (a, b)| acc + a.swap_slots().inner(b));

    let graph = |phi: &MarkedFock<T>, g: &[_]| -> T {
        let extra: T = g
            .iter()
            .map(|l: &super::tensor::DoubleMarkedTensor<T>| l.norm_sqr())
            .sum();
        (phi.norm_sqr() + extra).sqrt()
    };
    Ok(SkorohodReport {
        lhs,
        rhs: first_term + second_term,
        first_term,
        second_term,
        divergence_norms: [d1.norm(), d2.norm()],
        graph_norms: [graph(phi1, &g1), graph(phi2, &g2)],
    })
}
