//! Normalisation of denominator factors.
//!
//! A rational function keeps its denominator as a product of normalised
//! factors. Monomials and constants are units of the Laurent ring and are
//! moved to the numerator; binomials `m1 ± m2` are split into cyclotomic
//! pieces `Φ_k(m)`, so that `q^6 - 1` and `q^4 - 1` share `q - 1`, `q + 1`
//! and the common denominators of long sums stay small.

use num_rational::BigRational;
use num_traits::Signed;

use super::poly::{LaurentPoly, Monomial};

/// `p = unit_coeff · unit_monomial · ∏ factors`.
#[derive(Debug, Clone)]
pub(crate) struct Factored {
    pub unit_coeff: BigRational,
    pub unit_monomial: Monomial,
    pub factors: Vec<LaurentPoly>,
}

/// Coefficients of the cyclotomic polynomial `Φ_k`, lowest degree first.
pub(crate) fn cyclotomic(k: u32) -> Vec<i64> {
    assert!(k >= 1);
    // x^k - 1 divided by Φ_d for every proper divisor d.
    let mut poly = vec![0i64; k as usize + 1];
    poly[0] = -1;
    poly[k as usize] = 1;
    for d in 1..k {
        if k % d == 0 {
            poly = div_monic(&poly, &cyclotomic(d));
        }
    }
    poly
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, &dc) in den.iter().enumerate() {
            rem[i + j] -= c * dc;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Strips monomial content and integer content; returns `(coeff, mono, prim)`
/// with `p = coeff · mono · prim`.
fn strip(p: &LaurentPoly) -> (BigRational, Monomial, LaurentPoly) {
    let m = p.min_monomial();
    let shifted = p.mul_monomial(&m.inv());
    let (c, prim) = shifted.primitive();
    (c, m, prim)
}

/// Factors a nonzero Laurent polynomial into a unit and normalised factors.
pub(crate) fn factor(p: &LaurentPoly) -> Factored {
    assert!(!p.is_zero(), "cannot factor the zero polynomial");
    let (c, m, prim) = strip(p);
    let mut out = Factored {
        unit_coeff: c,
        unit_monomial: m,
        factors: Vec::new(),
    };
    if prim.as_constant().is_some() {
        return out;
    }
    if prim.len() == 2 {
        let mut it = prim.terms();
        let (m1, c1) = it.next().unwrap();
        let (m2, c2) = it.next().unwrap();
        if c1.abs() == c2.abs() {
            split_binomial(m1, m2, c1 == c2, &mut out);
            return out;
        }
    }
    out.factors.push(prim);
    out
}

/// `m1 - m2` (or `m1 + m2` when `plus`) as `m2 · ∏ Φ_k(d)`, `d^g = m1/m2`.
fn split_binomial(m1: &Monomial, m2: &Monomial, plus: bool, out: &mut Factored) {
    let ratio = m1.div(m2);
    let g = ratio.iter().fold(0u32, |acc, (_, e)| gcd(acc, e.unsigned_abs()));
    let base = Monomial::from_pairs(ratio.iter().map(|(v, e)| (v, e / g as i32)));
    out.unit_monomial = out.unit_monomial.mul(m2);
    let ks: Vec<u32> = if plus {
        (1..=2 * g).filter(|k| (2 * g) % k == 0 && g % k != 0).collect()
    } else {
        (1..=g).filter(|k| g % k == 0).collect()
    };
    for k in ks {
        let coeffs = cyclotomic(k);
        let phi = LaurentPoly::from_terms(coeffs.iter().enumerate().map(|(i, &c)| {
            (BigRational::from_integer(c.into()), base.pow(i as i32))
        }));
        let (c, m, prim) = strip(&phi);
        out.unit_coeff *= c;
        out.unit_monomial = out.unit_monomial.mul(&m);
        out.factors.push(prim);
    }
}

/// Expands `∏ f^e`.
pub(crate) fn expand<'a, I>(factors: I) -> LaurentPoly
where
    I: IntoIterator<Item = (&'a LaurentPoly, u32)>,
{
    factors
        .into_iter()
        .fold(LaurentPoly::one(), |acc, (f, e)| acc.mul(&f.pow(e)))
}
