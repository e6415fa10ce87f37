//! Semistable bundle masses: Zagier's closed form for `β`, automorphism
//! groups of unipotent bundles `⊕ I_r^{⊕m}`, the unipotent masses and the
//! `α` invariants obtained by splitting off the trivial Jordan–Hölder part.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{LaurentPoly, Monomial, RationalFunction, Var};
use crate::artin::{v_values, zeta_value, CurveDatum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("q-exponent {exponent} of composition {composition:?} is not an integer")]
    NonIntegralExponent {
        composition: Vec<u32>,
        exponent: String,
    },
    #[error("alpha invariants are defined for elliptic curves only")]
    NotElliptic,
}

/// An ordered tuple of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Composition(pub Vec<u32>);

impl Composition {
    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn rank(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// All compositions of `r`, in descending lexicographic order.
pub fn enum_compositions(r: u32) -> Vec<Composition> {
    fn rec(left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if left == 0 {
            out.push(Composition(prefix.clone()));
            return;
        }
        for first in (1..=left).rev() {
            prefix.push(first);
            rec(left - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if r > 0 {
        rec(r, &mut Vec::new(), &mut out);
    }
    out
}

/// `⊕_j I_{r_j}^{⊕ m_j}` with `r_1 < r_2 < …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AtiyahType {
    blocks: Vec<(u32, u32)>,
}

impl AtiyahType {
    /// Validates and sorts nothing: blocks must already be strictly
    /// increasing in `r_j` with every `m_j ≥ 1`.
    pub fn new(blocks: Vec<(u32, u32)>) -> Option<AtiyahType> {
        let ok = blocks.iter().all(|&(r, m)| r >= 1 && m >= 1)
            && blocks.windows(2).all(|w| w[0].0 < w[1].0);
        ok.then_some(AtiyahType { blocks })
    }

    /// The Atiyah bundle `I_r`.
    pub fn atiyah(r: u32) -> AtiyahType {
        AtiyahType { blocks: vec![(r, 1)] }
    }

    pub fn blocks(&self) -> &[(u32, u32)] {
        &self.blocks
    }

    pub fn rank(&self) -> u32 {
        self.blocks.iter().map(|&(r, m)| r * m).sum()
    }
}

impl fmt::Display for AtiyahType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .blocks
            .iter()
            .rev()
            .map(|&(r, m)| if m == 1 { format!("I{r}") } else { format!("I{r}^{m}") })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

/// All unipotent types of rank `n`: partitions of `n` listed with the
/// largest part first, in descending lexicographic order. `n = 0` gives the
/// single empty type.
pub fn enum_partitions(n: u32) -> Vec<AtiyahType> {
    fn rec(left: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=left.min(max)).rev() {
            prefix.push(part);
            rec(left - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut raw = Vec::new();
    rec(n, n, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|parts| {
            let mut blocks: Vec<(u32, u32)> = Vec::new();
            for &p in parts.iter().rev() {
                match blocks.last_mut() {
                    Some((r, m)) if *r == p => *m += 1,
                    _ => blocks.push((p, 1)),
                }
            }
            AtiyahType { blocks }
        })
        .collect()
}

fn q_pow(e: i64) -> LaurentPoly {
    LaurentPoly::monomial(Monomial::var(Var::Q, e as i32))
}

/// `#GL_m(𝔽_q) = ∏_{i<m} (q^m - q^i)`.
fn gl_order(m: u32) -> LaurentPoly {
    (0..m).fold(LaurentPoly::one(), |acc, i| {
        acc.mul(&q_pow(m as i64).sub(&q_pow(i as i64)))
    })
}

/// `#Aut(⊕ I_{r_j}^{⊕m_j}) = q^{2Σ_{i<j} r_i m_i m_j} ∏_j #GL_{m_j} q^{m_j²(r_j-1)}`.
pub fn aut_order(t: &AtiyahType) -> LaurentPoly {
    let b = &t.blocks;
    let mut e: i64 = 0;
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            e += 2 * (b[i].0 * b[i].1 * b[j].1) as i64;
        }
    }
    let mut out = q_pow(e);
    for &(r, m) in b {
        out = out.mul(&gl_order(m)).mul(&q_pow((m * m) as i64 * (r as i64 - 1)));
    }
    out
}

/// `h⁰(⊕ I_{r_j}^{⊕m_j}) = Σ m_j`.
pub fn h0_atiyah(t: &AtiyahType) -> u32 {
    t.blocks.iter().map(|&(_, m)| m).sum()
}

/// `u_m = Σ_{rank m} 1/#Aut`, a rational function of `q`.
pub fn unipotent_mass(m: u32) -> RationalFunction {
    enum_partitions(m)
        .iter()
        .map(|t| RationalFunction::one() / RationalFunction::from(aut_order(t)))
        .sum()
}

/// `a_m = Σ_{rank m} (q^{h⁰} - 1)/#Aut`.
pub fn unipotent_alpha(m: u32) -> RationalFunction {
    enum_partitions(m)
        .iter()
        .map(|t| {
            let num = q_pow(h0_atiyah(t) as i64).sub(&LaurentPoly::one());
            RationalFunction::new(num, aut_order(t)).expect("automorphism count is nonzero")
        })
        .sum()
}

/// `q^{m(m-1)/2} / ∏_{k=1}^m (q^k - 1)`.
pub fn unipotent_mass_closed_form(m: u32) -> RationalFunction {
    let den = (1..=m).fold(LaurentPoly::one(), |acc, k| {
        acc.mul(&q_pow(k as i64).sub(&LaurentPoly::one()))
    });
    RationalFunction::new(q_pow((m as i64) * (m as i64 - 1) / 2), den).unwrap()
}

/// Rewrites a rational function in the variable `q` for the given curve.
fn in_curve_q(f: &RationalFunction, curve: &CurveDatum) -> RationalFunction {
    if curve.q() == &RationalFunction::var(Var::Q) {
        return f.clone();
    }
    f.substitute(Var::Q, curve.q()).expect("q is not a root of unity")
}

/// `u_m` (or `a_m` when `alpha`) at a numeric `q`, summed exactly.
fn unipotent_at(m: u32, q: &BigRational, alpha: bool) -> RationalFunction {
    let at = crate::algebra::assign([(Var::Q, q.clone())]);
    let total: BigRational = enum_partitions(m)
        .iter()
        .map(|t| {
            let aut = aut_order(t).evaluate(&at).expect("q is assigned");
            let num = if alpha {
                q.pow(h0_atiyah(t) as i32) - BigRational::from_integer(1.into())
            } else {
                BigRational::from_integer(1.into())
            };
            num / aut
        })
        .sum();
    RationalFunction::from_rational(total)
}

fn unipotent_in_curve(m: u32, curve: &CurveDatum, alpha: bool) -> RationalFunction {
    match curve.q().as_constant() {
        Some(q) => unipotent_at(m, &q, alpha),
        None if alpha => in_curve_q(&unipotent_alpha(m), curve),
        None => in_curve_q(&unipotent_mass(m), curve),
    }
}

fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// One summand of Zagier's formula, `q^{(g-1)Σn_in_j} c_{r,d} ∏ v_{n_i}`,
/// with the `v`s supplied.
fn zagier_term(
    comp: &Composition,
    r: u32,
    d: i64,
    genus: u32,
    q: &RationalFunction,
    v: &[RationalFunction],
) -> Result<RationalFunction, BundleError> {
    let n = comp.parts();
    let mut exponent = BigRational::zero();
    let mut pairs = 0i64;
    for i in 0..n.len() {
        for j in i + 1..n.len() {
            pairs += (n[i] * n[j]) as i64;
        }
    }
    exponent += BigRational::from_integer((pairs * (genus as i64 - 1)).into());
    let mut den = RationalFunction::one();
    let mut partial = 0i64;
    for i in 0..n.len().saturating_sub(1) {
        partial += n[i] as i64;
        let s = (n[i] + n[i + 1]) as i64;
        let f = frac(&BigRational::new((partial * d).into(), (r as i64).into()));
        exponent += f * BigRational::from_integer(s.into());
        den = &den * &(&RationalFunction::one() - &q.pow(s as i32).expect("q is nonzero"));
    }
    if !exponent.is_integer() {
        return Err(BundleError::NonIntegralExponent {
            composition: n.to_vec(),
            exponent: exponent.to_string(),
        });
    }
    let e: i32 = exponent.to_integer().try_into().expect("exponent fits in i32");
    let mut term = &q.pow(e).expect("q is nonzero") / &den;
    for &k in n {
        term = &term * &v[k as usize - 1];
    }
    Ok(term)
}

/// `β_{X,r}(d)` by Zagier's sum over compositions of `r`.
pub fn beta(curve: &CurveDatum, r: u32, d: i64) -> Result<RationalFunction, BundleError> {
    if r == 0 {
        return Err(BundleError::ZeroRank);
    }
    let v = v_values(curve, r);
    let comps = enum_compositions(r);
    let terms: Vec<RationalFunction> = comps
        .par_iter()
        .map(|c| zagier_term(c, r, d, curve.genus(), curve.q(), &v))
        .collect::<Result<_, _>>()?;
    // Summed sequentially so the stored form does not depend on scheduling.
    Ok(terms.into_iter().sum())
}

/// The restated form `u_n = Σ (-1)^{k-1} e_{n_1…n_k} ∏ v̂_{n_i}` with
/// `e = ∏ 1/(q^{n_j+n_{j+1}} - 1)` and `v̂_n = ζ̂(1)⋯ζ̂(n)`, where
/// `ζ̂(k) = q^{(g-1)(k-1)} ζ(k)` and `ζ̂(1)` is the regularized value;
/// returns `q^{(g-1)n(n+1)/2} u_n`, which equals `β_{X,n}(0)`.
pub fn beta_restated(curve: &CurveDatum, n: u32) -> Result<RationalFunction, BundleError> {
    if n == 0 {
        return Err(BundleError::ZeroRank);
    }
    let q = curve.q();
    let g = curve.genus() as i32 - 1;
    let mut vhat = Vec::with_capacity(n as usize);
    let mut acc = RationalFunction::one();
    for k in 1..=n {
        let mut z = zeta_value(curve, k);
        if k >= 2 {
            z = &z * &q.pow(g * (k as i32 - 1)).expect("q is nonzero");
        }
        acc = &acc * &z;
        vhat.push(acc.clone());
    }
    let mut u = RationalFunction::zero();
    for comp in enum_compositions(n) {
        let parts = comp.parts();
        let mut term = RationalFunction::one();
        for w in parts.windows(2) {
            let qs = q.pow((w[0] + w[1]) as i32).expect("q is nonzero");
            term = &term / &(&qs - &RationalFunction::one());
        }
        if parts.len() % 2 == 0 {
            term = -term;
        }
        for &k in parts {
            term = &term * &vhat[k as usize - 1];
        }
        u = u + term;
    }
    let shift = g * (n * (n + 1) / 2) as i32;
    Ok(&u * &q.pow(shift).expect("q is nonzero"))
}

/// `b_m` from `β_m = Σ_{i=0}^m u_i b_{m-i}`, `b_0 = 1`.
pub fn nontrivial_mass(beta: &[RationalFunction], u: &[RationalFunction]) -> Vec<RationalFunction> {
    let mut b: Vec<RationalFunction> = Vec::with_capacity(beta.len());
    for m in 0..beta.len() {
        if m == 0 {
            b.push(RationalFunction::one());
            continue;
        }
        let mut x = beta[m].clone();
        for i in 1..=m {
            x = &x - &(&u[i] * &b[m - i]);
        }
        b.push(x);
    }
    b
}

/// `α_r = Σ_{i=1}^r a_i b_{r-i}`.
pub fn alpha(r: u32, table: &MassTable) -> RationalFunction {
    let r = r as usize;
    assert!(r <= table.max_rank as usize, "rank beyond the mass table");
    (1..=r).map(|i| &table.a[i] * &table.b[r - i]).sum()
}

/// Rank-indexed masses of an elliptic curve, index `0..=max_rank`.
#[derive(Debug, Clone)]
pub struct MassTable {
    pub max_rank: u32,
    pub u: Vec<RationalFunction>,
    pub a: Vec<RationalFunction>,
    pub b: Vec<RationalFunction>,
    pub beta: Vec<RationalFunction>,
    pub alpha: Vec<RationalFunction>,
}

impl MassTable {
    pub fn new(curve: &CurveDatum, max_rank: u32) -> Result<MassTable, BundleError> {
        if !curve.is_elliptic() {
            return Err(BundleError::NotElliptic);
        }
        let ranks: Vec<u32> = (0..=max_rank).collect();
        let u: Vec<RationalFunction> = ranks
            .par_iter()
            .map(|&m| unipotent_in_curve(m, curve, false))
            .collect();
        let a: Vec<RationalFunction> = ranks
            .par_iter()
            .map(|&m| {
                if m == 0 {
                    RationalFunction::zero()
                } else {
                    unipotent_in_curve(m, curve, true)
                }
            })
            .collect();
        let beta: Vec<RationalFunction> = ranks
            .par_iter()
            .map(|&m| {
                if m == 0 {
                    Ok(RationalFunction::one())
                } else {
                    beta(curve, m, 0)
                }
            })
            .collect::<Result<_, _>>()?;
        let b = nontrivial_mass(&beta, &u);
        let mut table = MassTable {
            max_rank,
            u,
            a,
            b,
            beta,
            alpha: Vec::new(),
        };
        table.alpha = (0..=max_rank)
            .map(|r| if r == 0 { RationalFunction::zero() } else { alpha(r, &table) })
            .collect();
        Ok(table)
    }

    /// Re-checks `β_m = Σ u_i b_{m-i}` for every rank in the table.
    pub fn convolution_holds(&self) -> bool {
        (0..=self.max_rank as usize).all(|m| {
            let s: RationalFunction = (0..=m).map(|i| &self.u[i] * &self.b[m - i]).sum();
            s == self.beta[m]
        })
    }
}

/// Outcome of one exact identity check; `difference` is `lhs - rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityVerdict {
    pub index: u32,
    pub pass: bool,
    pub difference: RationalFunction,
}

impl IdentityVerdict {
    fn compare(index: u32, lhs: &RationalFunction, rhs: &RationalFunction) -> IdentityVerdict {
        let difference = (lhs - rhs).reduced();
        IdentityVerdict {
            index,
            pass: difference.is_zero(),
            difference,
        }
    }
}

/// `α_r = β_{r-1}` for `r = 2..=max_rank` (index = `r`).
pub fn verify_counting_miracle(
    curve: &CurveDatum,
    max_rank: u32,
) -> Result<Vec<IdentityVerdict>, BundleError> {
    let table = MassTable::new(curve, max_rank)?;
    Ok((2..=max_rank)
        .into_par_iter()
        .map(|r| IdentityVerdict::compare(r, &table.alpha[r as usize], &table.beta[r as usize - 1]))
        .collect())
}

/// Checks of the unipotent identities.
#[derive(Debug, Clone, Serialize)]
pub struct IrMiracleReport {
    /// `a_{n+1} = u_n`, index `n = 1..=max_n`.
    pub shift: Vec<IdentityVerdict>,
    /// `u_m` equals the closed form, index `m = 1..=max_n+1`.
    pub closed_form: Vec<IdentityVerdict>,
}

impl IrMiracleReport {
    pub fn all_pass(&self) -> bool {
        self.shift.iter().chain(&self.closed_form).all(|v| v.pass)
    }
}

pub fn verify_ir_miracle(max_n: u32) -> IrMiracleReport {
    let masses: Vec<RationalFunction> =
        (0..=max_n + 1).into_par_iter().map(unipotent_mass).collect();
    let shift = (1..=max_n)
        .into_par_iter()
        .map(|n| IdentityVerdict::compare(n, &unipotent_alpha(n + 1), &masses[n as usize]))
        .collect();
    let closed_form = (1..=max_n + 1)
        .into_par_iter()
        .map(|m| {
            IdentityVerdict::compare(m, &masses[m as usize], &unipotent_mass_closed_form(m))
        })
        .collect();
    IrMiracleReport { shift, closed_form }
}
