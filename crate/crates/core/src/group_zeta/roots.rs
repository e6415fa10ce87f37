//! Root data of type `A_{n-1}` and the Weyl group `S_n`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::GroupZetaError;

/// Largest `n` handled; `|W| = n!`.
pub const MAX_N: usize = 5;

/// A positive root `e_i - e_j` with `i < j` (0-based).
pub type Root = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystemA {
    pub n: usize,
    pub positive_roots: Vec<Root>,
    pub simple_roots: Vec<Root>,
    pub weyl_vector: Vec<BigRational>,
    /// `λ_j` for `j = 1..n-1`, in coordinates of `ℚ^n`.
    pub fundamental_weights: Vec<Vec<BigRational>>,
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl RootSystemA {
    pub fn new(n: usize) -> Result<RootSystemA, GroupZetaError> {
        if !(2..=MAX_N).contains(&n) {
            return Err(GroupZetaError::RankOutOfRange(n));
        }
        let positive_roots = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let simple_roots = (0..n - 1).map(|i| (i, i + 1)).collect();
        let ni = n as i64;
        let weyl_vector = (0..ni).map(|i| frac(ni - 1 - 2 * i, 2)).collect();
        let fundamental_weights = (1..ni)
            .map(|j| {
                (0..ni)
                    .map(|i| if i < j { frac(ni - j, ni) } else { frac(-j, ni) })
                    .collect()
            })
            .collect();
        Ok(RootSystemA {
            n,
            positive_roots,
            simple_roots,
            weyl_vector,
            fundamental_weights,
        })
    }

    /// `⟨v, α∨⟩` for `α = e_i - e_j`.
    pub fn pairing(v: &[BigRational], root: Root) -> BigRational {
        &v[root.0] - &v[root.1]
    }
}

/// A permutation `w` of `{0..n-1}`, acting on coordinates by
/// `(wv)_i = v_{w⁻¹(i)}`, so that `w e_i = e_{w(i)}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct WeylElement {
    perm: Vec<usize>,
}

impl WeylElement {
    pub fn new(perm: Vec<usize>) -> Option<WeylElement> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return None;
            }
        }
        Some(WeylElement { perm })
    }

    pub fn identity(n: usize) -> WeylElement {
        WeylElement { perm: (0..n).collect() }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn inverse(&self) -> WeylElement {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        WeylElement { perm: inv }
    }

    pub fn act<T: Clone>(&self, v: &[T]) -> Vec<T> {
        let inv = self.inverse();
        (0..v.len()).map(|i| v[inv.perm[i]].clone()).collect()
    }

    /// `Φ_w = Φ⁺ ∩ w⁻¹Φ⁻`: positive roots `e_i - e_j` with `w(i) > w(j)`.
    pub fn inversion_set(&self, roots: &RootSystemA) -> Vec<Root> {
        roots
            .positive_roots
            .iter()
            .copied()
            .filter(|&(i, j)| self.perm[i] > self.perm[j])
            .collect()
    }

    pub fn inversion_count(&self) -> usize {
        let n = self.perm.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.perm[i] > self.perm[j])
            .count()
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.perm.iter().map(|p| (p + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// All of `S_n` in lexicographic order of one-line notation.
pub fn weyl_group(n: usize) -> Result<Vec<WeylElement>, GroupZetaError> {
    if !(2..=MAX_N).contains(&n) {
        return Err(GroupZetaError::RankOutOfRange(n));
    }
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(WeylElement { perm: p.clone() });
        let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("successor exists");
        p.swap(i, j);
        p[i + 1..].reverse();
    }
    Ok(out)
}
