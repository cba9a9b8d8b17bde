#![allow(dead_code)]

use chaoskit::fock::{factorial, FockVector, HVector, LevelBasis, MarkedFock, SymTensor};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn gauss(r: &mut ChaCha8Rng) -> Complex64 {
    c(r.sample(StandardNormal), r.sample(StandardNormal))
}

/// Random vector with norm at most `radius`.
pub fn vec_in_ball(d: usize, radius: f64, r: &mut ChaCha8Rng) -> HVector<f64> {
    let v: Vec<Complex64> = (0..d).map(|_| gauss(r)).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let target = radius * r.random::<f64>();
    HVector::new(v.into_iter().map(|z| z * target / n).collect())
}

/// Normalized random vector supported on levels `0..=max_level`, truncation `m`.
pub fn fock(d: usize, m: usize, max_level: usize, r: &mut ChaCha8Rng) -> FockVector<f64> {
    FockVector::random(d, m, max_level, r).unwrap()
}

pub fn marked(d: usize, m: usize, max_level: usize, r: &mut ChaCha8Rng) -> MarkedFock<f64> {
    MarkedFock::random(d, m, max_level, r).unwrap()
}

/// Words `w ∈ [0,d)^n` in lexicographic order.
pub fn words(d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..d).map(move |i| {
                    let mut v = w.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn occupation(d: usize, w: &[usize]) -> Vec<u32> {
    let mut a = vec![0u32; d];
    w.iter().for_each(|&i| a[i] += 1);
    a
}

fn alpha_factorial(a: &[u32]) -> f64 {
    a.iter().map(|&k| factorial(k as usize)).product()
}

/// Full (non-symmetric) tensor with `d^n` entries.
#[derive(Clone, Debug)]
pub struct Dense {
    pub d: usize,
    pub n: usize,
    pub entries: Vec<Complex64>,
}

impl Dense {
    pub fn index(&self, w: &[usize]) -> usize {
        w.iter().fold(0, |acc, &i| acc * self.d + i)
    }

    pub fn power(f: &[Complex64], n: usize) -> Dense {
        let d = f.len();
        let entries = words(d, n)
            .iter()
            .map(|w| w.iter().fold(c(1.0, 0.0), |acc, &i| acc * f[i]))
            .collect();
        Dense { d, n, entries }
    }

    /// `|α> = √(α!/n!) Σ_{w ∈ α} e_w`.
    pub fn from_sym(t: &SymTensor<f64>) -> Dense {
        let (d, n) = (t.d(), t.degree());
        let basis = LevelBasis::new(d, n).unwrap();
        let entries = words(d, n)
            .iter()
            .map(|w| {
                let a = occupation(d, w);
                t.coeffs()[basis.rank(&a)] * (alpha_factorial(&a) / factorial(n)).sqrt()
            })
            .collect();
        Dense { d, n, entries }
    }

    /// Coefficients `<α|T>` on the symmetric subspace.
    pub fn project(&self) -> Vec<Complex64> {
        let basis = LevelBasis::new(self.d, self.n).unwrap();
        let mut out = vec![c(0.0, 0.0); basis.len()];
        for (k, w) in words(self.d, self.n).iter().enumerate() {
            let a = occupation(self.d, w);
            out[basis.rank(&a)] +=
                self.entries[k] * (alpha_factorial(&a) / factorial(self.n)).sqrt();
        }
        out
    }

    /// Symmetrization `(1/n!) Σ_π`.
    pub fn symmetrize(&self) -> Dense {
        let ws = words(self.d, self.n);
        let perms = permutations(self.n);
        let mut entries = vec![c(0.0, 0.0); self.entries.len()];
        for (k, w) in ws.iter().enumerate() {
            for p in &perms {
                let pw: Vec<usize> = p.iter().map(|&i| w[i]).collect();
                entries[k] += self.entries[self.index(&pw)];
            }
            entries[k] /= perms.len() as f64;
        }
        Dense {
            d: self.d,
            n: self.n,
            entries,
        }
    }

    /// `f ⊗ self` with `f` in the first slot.
    pub fn prepend(&self, f: &[Complex64]) -> Dense {
        let mut entries = Vec::with_capacity(self.entries.len() * self.d);
        for fi in f {
            entries.extend(self.entries.iter().map(|z| fi * z));
        }
        Dense {
            d: self.d,
            n: self.n + 1,
            entries,
        }
    }

    /// `(<f| ⊗ I) self`: contract the first slot with `conj(f)`.
    pub fn contract_first(&self, f: &[Complex64]) -> Dense {
        let block = self.entries.len() / self.d;
        let mut entries = vec![c(0.0, 0.0); block];
        for (i, fi) in f.iter().enumerate() {
            for k in 0..block {
                entries[k] += fi.conj() * self.entries[i * block + k];
            }
        }
        Dense {
            d: self.d,
            n: self.n - 1,
            entries,
        }
    }

    pub fn scale(&self, s: f64) -> Dense {
        Dense {
            d: self.d,
            n: self.n,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
