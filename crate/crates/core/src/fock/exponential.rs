//! Tensor powers, truncated exponential vectors and exact exponential-vector combinations.

use super::basis::{factorial, LevelBasis};
use super::tensor::{check_dim, FockVector, HVector, SymTensor};
use crate::error::{Error, Result};
use crate::scalar::{cr, cz, Real, C};

/// Table `f_i^a / √(a!)` for `a = 0..=n`.
fn power_table<T: Real>(f: &HVector<T>, n: usize) -> Vec<Vec<C<T>>> {
    f.coeffs()
        .iter()
        .map(|&fi| {
            let mut row = Vec::with_capacity(n + 1);
            let mut p = cr(T::one());
            row.push(p);
            for a in 1..=n {
                p = p * fi / T::of_usize(a).sqrt();
                row.push(p);
            }
            row
        })
        .collect()
}

fn exp_level<T: Real>(f: &HVector<T>, n: usize, table: &[Vec<C<T>>]) -> Result<SymTensor<T>> {
    let d = f.dim();
    let basis = LevelBasis::new(d, n)?;
    let coeffs = basis
        .iter()
        .map(|alpha| {
            alpha
                .iter()
                .enumerate()
                .fold(cr(T::one()), |acc, (i, &a)| acc * table[i][a as usize])
        })
        .collect();
    SymTensor::from_coeffs(d, n, coeffs)
}

/// `f^{⊗n}`: coefficient of `|α>` is `√(n!/α!) Π f_i^{α_i}`.
pub fn tensor_power<T: Real>(f: &HVector<T>, n: usize) -> Result<SymTensor<T>> {
    let table = power_table(f, n);
    Ok(exp_level(f, n, &table)?.scale(cr(T::of(factorial(n).sqrt()))))
}

/// Truncated exponential vector with the bound on the discarded mass.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpVector<T> {
    pub value: FockVector<T>,
    /// `Σ_{n>M} ‖f‖^{2n} / n!`, the squared norm of the discarded tail.
    pub tail_bound: f64,
}

/// `e_M(f) = (1, f, f⊗f/√2!, ..., f^{⊗M}/√M!)`.
pub fn exp_vector<T: Real>(f: &HVector<T>, truncation: usize) -> Result<ExpVector<T>> {
    let table = power_table(f, truncation);
    let levels = (0..=truncation)
        .map(|n| exp_level(f, n, &table))
        .collect::<Result<Vec<_>>>()?;
    let x = f.norm().to_f64_lossy().powi(2);
    Ok(ExpVector {
        value: FockVector::from_levels(levels)?,
        tail_bound: exp_tail(x, truncation),
    })
}

/// `Σ_{n>M} x^n / n!` summed directly, without cancellation.
pub fn exp_tail(x: f64, truncation: usize) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut n = truncation + 1;
    let mut term = (1..=n).fold(1.0, |acc, k| acc * x / k as f64);
    let mut sum = 0.0;
    while term > 0.0 && term > sum * f64::EPSILON * 1e-3 {
        sum += term;
        n += 1;
        term *= x / n as f64;
        if n > truncation + 10_000 {
            break;
        }
    }
    sum
}

/// Finite combination `Σ c_k e(f_k)` with exact Gram calculus.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ExpCombo<T> {
    pub terms: Vec<(C<T>, HVector<T>)>,
}

impl<T: Real> ExpCombo<T> {
    pub fn new() -> Self {
        ExpCombo { terms: Vec::new() }
    }

    pub fn single(f: HVector<T>) -> Self {
        ExpCombo {
            terms: vec![(cr(T::one()), f)],
        }
    }

    pub fn push(&mut self, c: C<T>, f: HVector<T>) {
        self.terms.push((c, f));
    }

    /// Truncated embedding `Σ c_k e_M(f_k)`.
    pub fn to_fock(&self, d: usize, truncation: usize) -> Result<FockVector<T>> {
        let mut out = FockVector::zeros(d, truncation)?;
        for (c, f) in &self.terms {
            check_dim(d, f.dim())?;
            let e = exp_vector(f, truncation)?.value;
            for (a, b) in out.levels_mut().iter_mut().zip(e.levels()) {
                a.axpy(*c, b);
            }
        }
        Ok(out)
    }
}

/// `Σ conj(a_i) b_j exp<f_i, g_j>`.
pub fn exp_gram<T: Real>(a: &ExpCombo<T>, b: &ExpCombo<T>) -> Result<C<T>> {
    let mut acc = cz();
    for (ca, fa) in &a.terms {
        for (cb, fb) in &b.terms {
            acc = acc + ca.conj() * cb * fa.inner(fb)?.exp();
        }
    }
    Ok(acc)
}

/// Combination `Σ c_k e(f_k) ⊗ e(g_k)` in `Γ(H) ⊗ Γ(H)`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ProductCombo<T> {
    pub terms: Vec<(C<T>, HVector<T>, HVector<T>)>,
}

impl<T: Real> ProductCombo<T> {
    pub fn single(f: HVector<T>, g: HVector<T>) -> Self {
        ProductCombo {
            terms: vec![(cr(T::one()), f, g)],
        }
    }
}

/// Product kernel `exp<f_1, g_1> exp<f_2, g_2>`.
pub fn product_gram<T: Real>(a: &ProductCombo<T>, b: &ProductCombo<T>) -> Result<C<T>> {
    let mut acc = cz();
    for (ca, fa, ga) in &a.terms {
        for (cb, fb, gb) in &b.terms {
            acc = acc + ca.conj() * cb * (fa.inner(fb)? + ga.inner(gb)?).exp();
        }
    }
    Ok(acc)
}

/// Exponential annihilation `U(f)` or creation `U†(f)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftMode {
    U,
    UDagger,
}

/// Exact action on a combination: `U(f)e(g) = e^{<f,g>} e(g)`, `U†(f)e(g) = e(g + f)`.
pub fn exp_shift_combo<T: Real>(
    f: &HVector<T>,
    a: &ExpCombo<T>,
    mode: ShiftMode,
) -> Result<ExpCombo<T>> {
    let terms = a
        .terms
        .iter()
        .map(|(c, g)| match mode {
            ShiftMode::U => Ok((c * f.inner(g)?.exp(), g.clone())),
            ShiftMode::UDagger => Ok((*c, g.add(f)?)),
        })
        .collect::<Result<_>>()?;
    Ok(ExpCombo { terms })
}

/// A truncated Fock vector that remembers the combination it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedCombo<T> {
    pub combo: ExpCombo<T>,
    pub vector: FockVector<T>,
}

impl<T: Real> EmbeddedCombo<T> {
    pub fn new(combo: ExpCombo<T>, d: usize, truncation: usize) -> Result<Self> {
        let vector = combo.to_fock(d, truncation)?;
        Ok(EmbeddedCombo { combo, vector })
    }
}

/// Operand of [`exp_shift`].
#[derive(Clone, Debug, PartialEq)]
pub enum ShiftOperand<T> {
    Combo(ExpCombo<T>),
    Embedded(EmbeddedCombo<T>),
    /// A bare Fock vector; `U`/`U†` are only defined here through a recorded combination.
    Vector(FockVector<T>),
}

pub fn exp_shift<T: Real>(
    f: &HVector<T>,
    operand: &ShiftOperand<T>,
    mode: ShiftMode,
) -> Result<ShiftOperand<T>> {
    match operand {
        ShiftOperand::Combo(a) => Ok(ShiftOperand::Combo(exp_shift_combo(f, a, mode)?)),
        ShiftOperand::Embedded(e) => {
            let combo = exp_shift_combo(f, &e.combo, mode)?;
            let v = &e.vector;
            Ok(ShiftOperand::Embedded(EmbeddedCombo::new(
                combo,
                v.d(),
                v.truncation(),
            )?))
        }
        ShiftOperand::Vector(_) => Err(Error::Unsupported(
            "exponential shifts act on vectors built from exponential combinations only".into(),
        )),
    }
}

/// `V_t e(f) = e(f) ⊗ e(tf)`.
pub fn v_map<T: Real>(t: T, a: &ExpCombo<T>) -> ProductCombo<T> {
    ProductCombo {
        terms: a
            .terms
            .iter()
            .map(|(c, f)| (*c, f.clone(), f.scale(cr(t))))
            .collect(),
    }
}

/// `V_t† (e(f) ⊗ e(g)) = e(f + tg)`.
pub fn v_map_adjoint<T: Real>(t: T, p: &ProductCombo<T>) -> Result<ExpCombo<T>> {
    let terms = p
        .terms
        .iter()
        .map(|(c, f, g)| Ok((*c, f.add(&g.scale(cr(t)))?)))
        .collect::<Result<_>>()?;
    Ok(ExpCombo { terms })
}
