//! Occupation-number multi-indices and the enumeration of symmetric levels.
//!
//! Level `n` over `d` modes is indexed by occupation arrays `alpha` with
//! `sum(alpha) = n`, enumerated in descending lexicographic order:
//! `(n,0,..,0)` first, `(0,..,0,n)` last. The dimension is `C(n+d-1, n)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest number of coefficients a single level may hold.
pub const MAX_LEVEL_DIM: usize = 2_000_000;

/// Occupation array of a basis vector `|alpha>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(occupations: Vec<u32>) -> Self {
        MultiIndex(occupations)
    }

    /// Builds the occupation array of a word of mode indices.
    pub fn from_word(d: usize, word: &[usize]) -> Self {
        let mut occ = vec![0u32; d];
        for &w in word {
            occ[w] += 1;
        }
        MultiIndex(occ)
    }

    pub fn occupations(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `alpha! = prod_i alpha_i!`
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| factorial(a as usize)).product()
    }
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `C(n, k)` saturating at `usize::MAX`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// Number of occupation arrays of degree `n` over `d` modes, without the guard.
pub fn level_dim_unchecked(d: usize, n: usize) -> usize {
    if d == 0 {
        return usize::from(n == 0);
    }
    binomial(n + d - 1, n)
}

/// Number of occupation arrays of degree `n` over `d` modes, rejecting oversized levels.
pub fn level_dim(d: usize, n: usize) -> Result<usize> {
    let size = level_dim_unchecked(d, n);
    if size > MAX_LEVEL_DIM {
        return Err(Error::GuardRail {
            d,
            degree: n,
            size,
            limit: MAX_LEVEL_DIM,
        });
    }
    Ok(size)
}

/// Pascal table used to rank occupation arrays in O(d).
#[derive(Clone, Debug)]
pub struct Ranker {
    d: usize,
    // table[a][b] = C(a, b) for b < d
    table: Vec<Vec<usize>>,
}

impl Ranker {
    /// Ranker valid for every level up to `max_degree`.
    pub fn new(d: usize, max_degree: usize) -> Self {
        let rows = max_degree + d + 1;
        let cols = d.max(1);
        let mut table = vec![vec![0usize; cols]; rows];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                *entry = binomial(a, b);
            }
        }
        Ranker { d, table }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Position of `alpha` in the descending lexicographic order of its level.
    pub fn rank(&self, alpha: &[u32]) -> usize {
        debug_assert_eq!(alpha.len(), self.d);
        let d = self.d;
        let mut remaining: usize = alpha.iter().map(|&a| a as usize).sum();
        let mut rank = 0;
        for (i, &a) in alpha.iter().enumerate().take(d.saturating_sub(1)) {
            let a = a as usize;
            // arrays agreeing before i with a larger entry at i
            rank += self.table[remaining - a + d - i - 2][d - i - 1];
            remaining -= a;
        }
        rank
    }
}

/// Enumerated basis of one symmetric level.
#[derive(Clone, Debug)]
pub struct LevelBasis {
    d: usize,
    degree: usize,
    flat: Vec<u32>,
    ranker: Ranker,
}

impl LevelBasis {
    pub fn new(d: usize, degree: usize) -> Result<Self> {
        let dim = level_dim(d, degree)?;
        let mut flat = Vec::with_capacity(dim * d);
        if dim > 0 && d > 0 {
            let mut alpha = vec![0u32; d];
            alpha[0] = degree as u32;
            loop {
                flat.extend_from_slice(&alpha);
                if !next_descending(&mut alpha) {
                    break;
                }
            }
        }
        debug_assert_eq!(flat.len(), dim * d);
        Ok(LevelBasis {
            d,
            degree,
            flat,
            ranker: Ranker::new(d, degree + 1),
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.flat
            .len()
            .checked_div(self.d)
            .unwrap_or(usize::from(self.degree == 0))
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, r: usize) -> &[u32] {
        &self.flat[r * self.d..(r + 1) * self.d]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        let d = self.d.max(1);
        let n = self.len();
        (0..n).map(move |r| {
            if self.d == 0 {
                &self.flat[0..0]
            } else {
                &self.flat[r * d..(r + 1) * d]
            }
        })
    }

    /// Rank of an occupation array of degree at most `degree + 1`.
    pub fn rank(&self, alpha: &[u32]) -> usize {
        if self.d == 0 {
            return 0;
        }
        self.ranker.rank(alpha)
    }

    pub fn ranker(&self) -> &Ranker {
        &self.ranker
    }
}

fn next_descending(alpha: &mut [u32]) -> bool {
    let d = alpha.len();
    if d < 2 {
        return false;
    }
    let Some(i) = (0..d - 1).rev().find(|&i| alpha[i] > 0) else {
        return false;
    };
    let tail: u32 = alpha[i + 1..].iter().sum();
    alpha[i] -= 1;
    for a in alpha[i + 1..].iter_mut() {
        *a = 0;
    }
    alpha[i + 1] = tail + 1;
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_match_stars_and_bars() {
        for d in 1..5 {
            for n in 0..7 {
                let basis = LevelBasis::new(d, n).unwrap();
                assert_eq!(basis.len(), binomial(n + d - 1, n));
            }
        }
    }

    #[test]
    fn rank_inverts_enumeration() {
        for d in 1..5 {
            for n in 0..6 {
                let basis = LevelBasis::new(d, n).unwrap();
                for (r, alpha) in basis.iter().enumerate() {
                    assert_eq!(basis.rank(alpha), r);
                    assert_eq!(alpha.iter().sum::<u32>() as usize, n);
                }
            }
        }
    }

    #[test]
    fn order_is_descending_lexicographic() {
        let basis = LevelBasis::new(3, 2).unwrap();
        let seen: Vec<Vec<u32>> = basis.iter().map(|a| a.to_vec()).collect();
        let mut sorted = seen.clone();
        sorted.sort_by(|a, b| b.cmp(a));
        assert_eq!(seen, sorted);
        assert_eq!(seen[0], vec![2, 0, 0]);
    }

    #[test]
    fn guard_rejects_huge_levels() {
        assert!(matches!(level_dim(40, 10), Err(Error::GuardRail { .. })));
        assert!(level_dim(4, 30).is_ok());
    }

    #[test]
    fn zero_modes_has_only_vacuum() {
        assert_eq!(LevelBasis::new(0, 0).unwrap().len(), 1);
        assert_eq!(LevelBasis::new(0, 3).unwrap().len(), 0);
    }
}
