//! Splitting `D` and `δ` along the Brownian and jump cells.

use super::calculus::gradient;
use super::chaos::{ChaosCoefficients, MarkedChaos};
use crate::error::Result;
use crate::fock::{
    split_grad_minus_residual, split_grad_plus_residual, split_iso, Partition, SplitFock,
};
use crate::levy::CellGrid;
use crate::scalar::{cz, Real};

/// Cells on the Brownian bin versus the jump bins, and the matching split of the gradient.
#[derive(Clone, Debug, PartialEq)]
pub struct BnSplit<T> {
    pub brownian_cells: Vec<usize>,
    pub jump_cells: Vec<usize>,
    /// `None` when one side is empty; the split is then the identity.
    pub partition: Option<Partition>,
    /// `F` in `Γ(H_B) ⊗ Γ(H_N)` coordinates.
    pub factored: Option<SplitFock<T>>,
    /// Gradient with its free argument restricted to Brownian cells.
    pub gradient_brownian: MarkedChaos<T>,
    /// Gradient with its free argument restricted to jump cells.
    pub gradient_jump: MarkedChaos<T>,
    /// `‖∇⁻ψ - [π₁(∇₁⁻⊗I) + π₂(I⊗∇₂⁻)]ψ‖` on the embedded `F`.
    pub gradient_residual: T,
    /// `‖∇⁺φ - [(∇₁⁺⊗I)π₁* + (I⊗∇₂⁺)π₂*]φ‖` on the embedded `DF`.
    pub divergence_residual: T,
}

fn restrict<T: Real>(x: &MarkedChaos<T>, keep: &[bool]) -> Result<MarkedChaos<T>> {
    let d = x.d();
    let levels = x
        .levels()
        .iter()
        .map(|l| {
            l.iter()
                .enumerate()
                .map(|(k, z)| if keep[k % d] { *z } else { cz() })
                .collect()
        })
        .collect();
    MarkedChaos::from_levels(x.masses().to_vec(), levels)
}

pub fn bn_split<T: Real>(f: &ChaosCoefficients<T>, grid: &CellGrid) -> Result<BnSplit<T>> {
    let d = grid.n_cells();
    if f.d() != d {
        return Err(crate::Error::DimensionMismatch {
            expected: d,
            actual: f.d(),
        });
    }
    let is_b: Vec<bool> = (0..d).map(|c| grid.is_brownian(grid.locate(c).1)).collect();
    let brownian_cells: Vec<usize> = (0..d).filter(|&c| is_b[c]).collect();
    let jump_cells: Vec<usize> = (0..d).filter(|&c| !is_b[c]).collect();
    let g = gradient(f)?.value;
    let gradient_brownian = restrict(&g, &is_b)?;
    let gradient_jump = restrict(&g, &is_b.iter().map(|b| !b).collect::<Vec<_>>())?;
    let (partition, factored, gradient_residual, divergence_residual) =
        if brownian_cells.is_empty() || jump_cells.is_empty() {
            log::warn!(
                "degenerate Brownian/jump split: one side has no cells, using the identity split"
            );
            (None, None, T::zero(), T::zero())
        } else {
            let p = Partition::new(d, &brownian_cells)?;
            let psi = f.embed()?;
            let dpsi = g.embed(f.truncation())?;
            let gr = split_grad_minus_residual(&psi, &p)?;
            let dr = split_grad_plus_residual(&dpsi, &p)?;
            (Some(p.clone()), Some(split_iso(&psi, &p)?), gr, dr)
        };
    Ok(BnSplit {
        brownian_cells,
        jump_cells,
        partition,
        factored,
        gradient_brownian,
        gradient_jump,
        gradient_residual,
        divergence_residual,
    })
}
