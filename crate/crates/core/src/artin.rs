//! Artin zeta functions of curves over finite fields, their special values
//! and the Hasse interval of admissible elliptic point counts.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, RationalFunction, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("q = {0} is not a prime power >= 2")]
    NotPrimePower(u64),
    #[error("N = {n} is outside the Hasse interval for q = {q}")]
    OutsideHasse { q: u64, n: u64 },
    #[error("invalid zeta numerator: {0}")]
    InvalidNumerator(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveMode {
    SymbolicElliptic,
    NumericElliptic,
    General,
}

/// A curve over 𝔽_q, described through the numerator `P(t)` of its zeta
/// function `Z(t) = P(t)/((1-t)(1-qt))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveDatum {
    mode: CurveMode,
    q: RationalFunction,
    n: Option<RationalFunction>,
    genus: u32,
    numerator: RationalFunction,
}

fn t() -> RationalFunction {
    RationalFunction::var(Var::T_SMALL)
}

fn elliptic_numerator(q: &RationalFunction, n: &RationalFunction) -> RationalFunction {
    let a1 = q + &RationalFunction::one() - n;
    let t = t();
    RationalFunction::one() - &a1 * &t + q * &(&t * &t)
}

impl CurveDatum {
    /// Elliptic curve with `q` and `N` kept as the variables `q`, `N`.
    pub fn symbolic_elliptic() -> CurveDatum {
        let q = RationalFunction::var(Var::Q);
        let n = RationalFunction::var(Var::N);
        CurveDatum {
            mode: CurveMode::SymbolicElliptic,
            numerator: elliptic_numerator(&q, &n),
            q,
            n: Some(n),
            genus: 1,
        }
    }

    /// Elliptic curve over 𝔽_q with `N` rational points; `q` must be a prime
    /// power and `N` must lie in the Hasse interval.
    pub fn numeric_elliptic(q: u64, n: u64) -> Result<CurveDatum, CurveError> {
        if !is_prime_power(q) {
            return Err(CurveError::NotPrimePower(q));
        }
        if !in_hasse_interval(q, n) {
            return Err(CurveError::OutsideHasse { q, n });
        }
        let qf = RationalFunction::from_int(q as i64);
        let nf = RationalFunction::from_int(n as i64);
        Ok(CurveDatum {
            mode: CurveMode::NumericElliptic,
            numerator: elliptic_numerator(&qf, &nf),
            q: qf,
            n: Some(nf),
            genus: 1,
        })
    }

    /// Curve of genus `g` with zeta numerator `P(t)`, a polynomial in `t` of
    /// degree `2g` with `P(0) = 1` and `q^g t^{2g} P(1/(qt)) = P(t)`.
    /// `q` may be the variable `q` or a prime power constant.
    pub fn general(
        q: RationalFunction,
        genus: u32,
        numerator: RationalFunction,
    ) -> Result<CurveDatum, CurveError> {
        if let Some(c) = q.as_constant() {
            let ok = c.is_integer()
                && u64::try_from(c.to_integer()).is_ok_and(is_prime_power);
            if !ok {
                return Err(CurveError::InvalidNumerator(format!("q = {c} is not a prime power")));
            }
        }
        let p = numerator
            .to_unipoly(Var::T_SMALL)
            .map_err(|_| CurveError::InvalidNumerator("not a polynomial in t".into()))?;
        if p.degree() != Some(2 * genus as usize) {
            return Err(CurveError::InvalidNumerator(format!(
                "degree must be 2g = {}",
                2 * genus
            )));
        }
        if !p.coeff(0).is_one() {
            return Err(CurveError::InvalidNumerator("P(0) must be 1".into()));
        }
        let t = t();
        let flipped = numerator.substitute(Var::T_SMALL, &(&q * &t).inv()?)?;
        let g = genus as i32;
        let lhs = &(&q.pow(g)? * &t.pow(2 * g)?) * &flipped;
        if lhs != numerator {
            return Err(CurveError::InvalidNumerator(
                "functional equation q^g t^(2g) P(1/(qt)) = P(t) fails".into(),
            ));
        }
        Ok(CurveDatum {
            mode: CurveMode::General,
            q,
            n: None,
            genus,
            numerator,
        })
    }

    /// Genus-`g` curve over 𝔽_q from the coefficients `a_1, …, a_g` of
    /// `P(t) = 1 + a_1 t + … + a_g t^g + q a_{g-1} t^{g+1} + … + q^g t^{2g}`.
    pub fn general_from_coefficients(q: u64, coeffs: &[i64]) -> Result<CurveDatum, CurveError> {
        let g = coeffs.len() as i32;
        let qf = RationalFunction::from_int(q as i64);
        let a = |i: i32| {
            if i == 0 {
                RationalFunction::one()
            } else {
                RationalFunction::from_int(coeffs[i as usize - 1])
            }
        };
        let t = t();
        let mut p = RationalFunction::zero();
        for i in 0..=g {
            p = p + &a(i) * &t.pow(i)?;
        }
        for i in (0..g).rev() {
            p = p + &(&qf.pow(g - i)? * &a(i)) * &t.pow(2 * g - i)?;
        }
        CurveDatum::general(qf, g as u32, p)
    }

    pub fn mode(&self) -> CurveMode {
        self.mode
    }

    pub fn q(&self) -> &RationalFunction {
        &self.q
    }

    /// The point count `N` (elliptic modes only).
    pub fn n(&self) -> Option<&RationalFunction> {
        self.n.as_ref()
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// `P(t)`.
    pub fn numerator(&self) -> &RationalFunction {
        &self.numerator
    }

    /// `P(1) = ∏(1 - ω_i)`.
    pub fn p_at_one(&self) -> RationalFunction {
        self.numerator
            .substitute(Var::T_SMALL, &RationalFunction::one())
            .expect("P is a polynomial")
    }

    pub fn is_elliptic(&self) -> bool {
        self.mode != CurveMode::General
    }
}

/// `Z(t) = P(t)/((1-t)(1-qt))`.
pub fn artin_zeta_ratfunc(curve: &CurveDatum) -> RationalFunction {
    let t = t();
    let one = RationalFunction::one();
    let den = &(&one - &t) * &(&one - &(curve.q() * &t));
    &curve.numerator / &den
}

/// `ζ(k) = Z(q^{-k})` for `k ≥ 2`; for `k = 1` the regularized value
/// `P(1/q)/(1 - 1/q)`.
pub fn zeta_value(curve: &CurveDatum, k: u32) -> RationalFunction {
    assert!(k >= 1, "zeta_value needs k >= 1");
    let qinv = curve.q().inv().expect("q is nonzero");
    if k == 1 {
        let p = curve
            .numerator
            .substitute(Var::T_SMALL, &qinv)
            .expect("P is a polynomial");
        return &p / &(&RationalFunction::one() - &qinv);
    }
    let tk = qinv.pow(k as i32).expect("q is nonzero");
    artin_zeta_ratfunc(curve)
        .substitute(Var::T_SMALL, &tk)
        .expect("Z has no pole at q^-k for k >= 2")
}

/// `v_n = P(1)/(q-1) · q^{(n²-1)(g-1)} · ζ(2)⋯ζ(n)`.
pub fn v_value(curve: &CurveDatum, n: u32) -> RationalFunction {
    assert!(n >= 1, "v_value needs n >= 1");
    let q = curve.q();
    let mut v = &curve.p_at_one() / &(q - &RationalFunction::one());
    let shift = (n as i64 * n as i64 - 1) * (curve.genus as i64 - 1);
    v = &v * &q.pow(shift as i32).expect("q is nonzero");
    for k in 2..=n {
        v = &v * &zeta_value(curve, k);
    }
    v
}

/// `[v_1, …, v_max]` computed incrementally.
pub fn v_values(curve: &CurveDatum, max: u32) -> Vec<RationalFunction> {
    let q = curve.q();
    let g = curve.genus as i64 - 1;
    let base = &curve.p_at_one() / &(q - &RationalFunction::one());
    let mut prod = RationalFunction::one();
    let mut out = Vec::with_capacity(max as usize);
    for n in 1..=max {
        if n >= 2 {
            prod = &prod * &zeta_value(curve, n);
        }
        let shift = (n as i64 * n as i64 - 1) * g;
        out.push(&(&base * &q.pow(shift as i32).expect("q is nonzero")) * &prod);
    }
    out
}

/// Special values `ζ(1), …, ζ(max_k)` of one curve.
#[derive(Debug, Clone)]
pub struct ZetaValueTable {
    pub curve: CurveDatum,
    pub values: BTreeMap<u32, RationalFunction>,
}

impl ZetaValueTable {
    pub fn new(curve: CurveDatum, max_k: u32) -> ZetaValueTable {
        let values = (1..=max_k).map(|k| (k, zeta_value(&curve, k))).collect();
        ZetaValueTable { curve, values }
    }

    pub fn get(&self, k: u32) -> Option<&RationalFunction> {
        self.values.get(&k)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        return true;
    }
    let mut m = q;
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

/// Prime powers `2 ≤ q ≤ max`.
pub fn prime_powers_up_to(max: u64) -> Vec<u64> {
    (2..=max).filter(|&q| is_prime_power(q)).collect()
}

/// `N ≥ 1` and `(N - q - 1)² ≤ 4q`.
pub fn in_hasse_interval(q: u64, n: u64) -> bool {
    let d = n as i128 - q as i128 - 1;
    n >= 1 && d * d <= 4 * q as i128
}

/// Every integer `N ≥ 1` with `(N - q - 1)² ≤ 4q`.
pub fn hasse_range(q: u64) -> Result<Vec<u64>, CurveError> {
    if !is_prime_power(q) {
        return Err(CurveError::NotPrimePower(q));
    }
    let s = (4 * q).isqrt();
    let lo = (q + 1).saturating_sub(s).max(1);
    Ok((lo..=q + 1 + s).filter(|&n| in_hasse_interval(q, n)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{assign, rat};

    fn p(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    #[test]
    fn symbolic_zeta_shape() {
        let e = CurveDatum::symbolic_elliptic();
        let z = artin_zeta_ratfunc(&e);
        assert_eq!(z, p("(1-(q+1-N)*t+q*t^2)/((1-t)*(1-q*t))"));
        let u = e.numerator().to_unipoly(Var::T_SMALL).unwrap();
        assert_eq!(u.coeff(1), p("-(q+1-N)"));
        assert_eq!(e.p_at_one(), p("N"));
    }

    #[test]
    fn functional_equation() {
        let e = CurveDatum::symbolic_elliptic();
        let z = artin_zeta_ratfunc(&e);
        let flip = p("1/(q*t)");
        assert_eq!(z.substitute(Var::T_SMALL, &flip).unwrap(), z);
    }

    #[test]
    fn numeric_zeta() {
        let e = CurveDatum::numeric_elliptic(2, 3).unwrap();
        assert_eq!(artin_zeta_ratfunc(&e), p("(1+2*t^2)/((1-t)*(1-2*t))"));
    }

    #[test]
    fn special_values() {
        let e = CurveDatum::symbolic_elliptic();
        assert_eq!(zeta_value(&e, 1), p("N/(q-1)"));
        assert_eq!(zeta_value(&e, 2), p("1 + q*N/((q-1)*(q^2-1))"));
        assert_eq!(zeta_value(&e, 3), p("1 + q^2*N/((q^3-1)*(q^2-1))"));
        let z = artin_zeta_ratfunc(&e);
        for k in 2..6 {
            let direct = z.substitute(Var::T_SMALL, &p(&format!("q^-{k}"))).unwrap();
            assert_eq!(zeta_value(&e, k), direct);
        }
    }

    #[test]
    fn v_value_examples() {
        let e = CurveDatum::symbolic_elliptic();
        assert_eq!(v_value(&e, 1), p("N/(q-1)"));
        assert_eq!(v_value(&e, 2), p("(N/(q-1))*(1+q*N/((q-1)*(q^2-1)))"));
        let prod: RationalFunction = (1..=4).map(|k| zeta_value(&e, k)).product();
        assert_eq!(v_value(&e, 4), prod);
        let vs = v_values(&e, 4);
        for (i, v) in vs.iter().enumerate() {
            assert_eq!(v, &v_value(&e, i as u32 + 1));
        }
        let table = ZetaValueTable::new(e, 3);
        assert_eq!(table.get(1), Some(&p("N/(q-1)")));
    }

    #[test]
    fn regularized_value_at_numeric_point() {
        let e = CurveDatum::numeric_elliptic(2, 3).unwrap();
        assert_eq!(zeta_value(&e, 1).as_constant(), Some(rat(3)));
        let s = CurveDatum::symbolic_elliptic();
        let pt = assign([(Var::Q, rat(2)), (Var::N, rat(3))]);
        for k in 1..5 {
            assert_eq!(
                zeta_value(&s, k).evaluate(&pt).unwrap(),
                zeta_value(&e, k).as_constant().unwrap()
            );
        }
    }

    #[test]
    fn hasse_examples() {
        assert_eq!(hasse_range(2).unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(hasse_range(4).unwrap(), (1..=9).collect::<Vec<_>>());
        assert!(hasse_range(3).unwrap().contains(&7));
        assert_eq!(hasse_range(6), Err(CurveError::NotPrimePower(6)));
        assert_eq!(hasse_range(1), Err(CurveError::NotPrimePower(1)));
    }

    #[test]
    fn constructor_accepts_exactly_the_hasse_interval() {
        for q in prime_powers_up_to(64) {
            let range = hasse_range(q).unwrap();
            for n in 0..=q + 1 + 2 * (q as f64).sqrt() as u64 + 3 {
                let ok = CurveDatum::numeric_elliptic(q, n).is_ok();
                // Floating oracle; the tolerance covers square q, where the boundary is attained.
                let d = (n as f64 - q as f64 - 1.0).abs();
                let oracle = n >= 1 && d <= 2.0 * (q as f64).sqrt() + 1e-9;
                assert_eq!(ok, oracle, "q={q} N={n}");
                assert_eq!(ok, range.contains(&n));
            }
        }
        assert!(matches!(
            CurveDatum::numeric_elliptic(10, 11),
            Err(CurveError::NotPrimePower(10))
        ));
    }

    #[test]
    fn prime_powers() {
        assert_eq!(
            prime_powers_up_to(32),
            vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32]
        );
    }

    #[test]
    fn general_genus_two() {
        let c = CurveDatum::general_from_coefficients(3, &[1, 2]).unwrap();
        assert_eq!(c.numerator(), &p("1 + t + 2*t^2 + 3*t^3 + 9*t^4"));
        assert_eq!(c.p_at_one(), p("16"));
        let bad = CurveDatum::general(p("3"), 2, p("1 + t + 2*t^2 + 4*t^3 + 9*t^4"));
        assert!(matches!(bad, Err(CurveError::InvalidNumerator(_))));
        let bad = CurveDatum::general(p("3"), 1, p("2 + t + 3*t^2"));
        assert!(matches!(bad, Err(CurveError::InvalidNumerator(_))));
        // Elliptic data through the general constructor agree with the elliptic mode.
        let g = CurveDatum::general(p("q"), 1, p("1-(q+1-N)*t+q*t^2")).unwrap();
        let e = CurveDatum::symbolic_elliptic();
        for n in 1..5 {
            assert_eq!(v_value(&g, n), v_value(&e, n));
        }
        let c = CurveDatum::general_from_coefficients(3, &[1, 2]).unwrap();
        let vs = v_values(&c, 3);
        for (i, v) in vs.iter().enumerate() {
            assert_eq!(v, &v_value(&c, i as u32 + 1));
        }
    }

    #[test]
    fn general_v_value_matches_definition() {
        // g = 2: v_2 = P(1)/(q-1) · q^3 · Z(q^-2).
        let c = CurveDatum::general_from_coefficients(5, &[-2, 3]).unwrap();
        let z2 = artin_zeta_ratfunc(&c)
            .substitute(Var::T_SMALL, &p("1/25"))
            .unwrap();
        let expected = &(&c.p_at_one() / &p("4")) * &(&p("125") * &z2);
        assert_eq!(v_value(&c, 2), expected);
    }
}
