//! Reference closed forms of the `SL_2` and `SL_3` zetas, the factorization of
//! the `SL_3` numerator and uniformity against the pure zetas.

use serde::Serialize;

use super::GroupZetaError;
use crate::algebra::{RationalFunction, UniPoly, Var};
use crate::artin::{artin_zeta_ratfunc, zeta_value, CurveDatum};
use crate::pure_zeta::PureZeta;

/// A group zeta in `T = t^n` together with its numerator over
/// `∏_{k ∈ den_exponents} (1 - q^k T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupZeta {
    pub n: usize,
    pub in_t_big: RationalFunction,
    /// The same function of `t = q^{-s}`.
    pub final_expr: RationalFunction,
    pub den_exponents: Vec<i32>,
    pub numerator_poly: UniPoly,
}

fn t_big() -> RationalFunction {
    RationalFunction::var(Var::T_BIG)
}

fn one() -> RationalFunction {
    RationalFunction::one()
}

fn q_pow(curve: &CurveDatum, k: i32) -> RationalFunction {
    curve.q().pow(k).expect("q is nonzero")
}

/// `ζ̂(n s - k) = Z(q^k T)`.
fn zhat_shift(curve: &CurveDatum, k: i32) -> RationalFunction {
    let arg = &q_pow(curve, k) * &t_big();
    artin_zeta_ratfunc(curve)
        .substitute(Var::T_SMALL, &arg)
        .expect("monomial substitution")
}

/// `1 - q^k T^e`.
fn one_minus(curve: &CurveDatum, k: i32, e: i32) -> RationalFunction {
    &one() - &(&q_pow(curve, k) * &RationalFunction::var_pow(Var::T_BIG, e))
}

fn n_of(curve: &CurveDatum) -> Result<RationalFunction, GroupZetaError> {
    curve.n().cloned().ok_or(GroupZetaError::NotElliptic)
}

impl GroupZeta {
    fn from_t_big(n: usize, curve: &CurveDatum, in_t_big: RationalFunction, den_exponents: Vec<i32>) -> GroupZeta {
        let den: RationalFunction = den_exponents.iter().map(|&k| one_minus(curve, k, 1)).product();
        let numerator_poly = (&in_t_big * &den)
            .to_unipoly(Var::T_BIG)
            .expect("the denominator clears the poles");
        let tn = RationalFunction::var_pow(Var::T_SMALL, n as i32);
        let final_expr = in_t_big.substitute(Var::T_BIG, &tn).expect("monomial substitution");
        GroupZeta {
            n,
            in_t_big,
            final_expr,
            den_exponents,
            numerator_poly,
        }
    }

    /// `c_{d-i} = Q^{d/2-i} c_i` for a numerator of even degree `d`.
    pub fn numerator_palindromic(&self, q_eff: &RationalFunction) -> bool {
        palindromic(&self.numerator_poly, q_eff)
    }
}

/// `c_{d-i} = Q^{d/2-i} c_i` for all `i`.
pub fn palindromic(p: &UniPoly, q_eff: &RationalFunction) -> bool {
    let Some(d) = p.degree() else {
        return true;
    };
    if d % 2 == 1 {
        return false;
    }
    (0..=d).all(|i| {
        let e = (d / 2) as i32 - i as i32;
        p.coeff(d - i) == &q_eff.pow(e).expect("Q is nonzero") * &p.coeff(i)
    })
}

/// `ζ̂(2s)/(1 - q^{-2s+2}) + ζ̂(2s-1)/(1 - q^{2s})` with `T = t²`.
pub fn sl2_closed(curve: &CurveDatum) -> Result<GroupZeta, GroupZetaError> {
    if !curve.is_elliptic() {
        return Err(GroupZetaError::NotElliptic);
    }
    let expr = &(&zhat_shift(curve, 0) / &one_minus(curve, 2, 1)) + &(&zhat_shift(curve, 1) / &one_minus(curve, 0, -1));
    Ok(GroupZeta::from_t_big(2, curve, expr, vec![0, 2]))
}

/// The three-line `SL_3` display with `T = t³`.
pub fn sl3_closed(curve: &CurveDatum) -> Result<GroupZeta, GroupZetaError> {
    if !curve.is_elliptic() {
        return Err(GroupZetaError::NotElliptic);
    }
    let z1 = zeta_value(curve, 1);
    let z2 = zeta_value(curve, 2);
    let line1 = &z2
        * &(&(&zhat_shift(curve, 0) / &one_minus(curve, 3, 1)) + &(&zhat_shift(curve, 2) / &one_minus(curve, 0, -1)));
    let line2 = &(&z1 / &one_minus(curve, 2, 0))
        * &(&(&zhat_shift(curve, 0) / &one_minus(curve, 2, 1)) + &(&zhat_shift(curve, 2) / &one_minus(curve, -1, -1)));
    let line3 = &(&z1 * &zhat_shift(curve, 1)) / &(&one_minus(curve, 0, -1) * &one_minus(curve, 3, 1));
    Ok(GroupZeta::from_t_big(3, curve, &(&line1 + &line2) + &line3, vec![0, 1, 2, 3]))
}

fn poly(coeffs: Vec<RationalFunction>) -> UniPoly {
    UniPoly::new(coeffs)
}

/// The displayed expansion of `P^{SL_3}(T)`.
pub fn sl3_numerator_display(curve: &CurveDatum) -> Result<UniPoly, GroupZetaError> {
    let q = curve.q().clone();
    let n = n_of(curve)?;
    let o = one();
    let q2m1 = &q_pow(curve, 2) - &o;
    let qm1 = &q - &o;
    let a1 = &(&q + &o) - &n;
    // 1 + q⁶T⁴ - b(T + q³T³) + 2qT²·c
    let shape = |b: RationalFunction, c: RationalFunction| {
        poly(vec![
            o.clone(),
            -b.clone(),
            &(&RationalFunction::from_int(2) * &q) * &c,
            -(&b * &q_pow(curve, 3)),
            q_pow(curve, 6),
        ])
    };
    let first = shape(
        &(&(&q_pow(curve, 2) + &q) + &RationalFunction::from_int(2)) - &n,
        &o + &(&a1 * &q),
    );
    let second = shape(
        &(&(&q_pow(curve, 3) + &(&RationalFunction::from_int(2) * &q)) + &o) - &n,
        &o + &(&q_pow(curve, 2) * &a1),
    );
    // (T + q³T³) - a₁qT²
    let third = poly(vec![RationalFunction::zero(), o.clone(), -(&a1 * &q), q_pow(curve, 3)]);
    let k = &n / &(&qm1 * &q2m1);
    let c1 = &o + &(&q * &k);
    let scale = |p: &UniPoly, c: &RationalFunction| poly(p.coeffs().iter().map(|x| x * c).collect());
    Ok(scale(&first, &c1)
        .sub(&scale(&second, &k))
        .sub(&scale(&third, &(&n / &qm1))))
}

/// `P_o(T) = A + c·T + A q³ T²` with `A = 1 + N/(q²-1)` and
/// `c = -2 + (2q-3)N/(q-1) + N²/(q²-1)`.
pub fn sl3_quotient_display(curve: &CurveDatum) -> Result<UniPoly, GroupZetaError> {
    let q = curve.q().clone();
    let n = n_of(curve)?;
    let o = one();
    let q2m1 = &q_pow(curve, 2) - &o;
    let a = &o + &(&n / &q2m1);
    let c = &(&RationalFunction::from_int(-2)
        + &(&(&(&RationalFunction::from_int(2) * &q) - &RationalFunction::from_int(3)) * &(&n / &(&q - &o))))
        + &(&(&n * &n) / &q2m1);
    Ok(poly(vec![a.clone(), c, &a * &q_pow(curve, 3)]))
}

/// The alternative expansion used for the division, with the missing `+`
/// signs between its three lines restored.
pub fn sl3_alternative_display(curve: &CurveDatum) -> Result<UniPoly, GroupZetaError> {
    let q = curve.q().clone();
    let n = n_of(curve)?;
    let o = one();
    let i = RationalFunction::from_int;
    let q2 = q_pow(curve, 2);
    let q2m1 = &q2 - &o;
    let qm1 = &q - &o;
    let a = &o + &(&n / &q2m1);
    let b = &(&-(&(&q2 + &q) + &i(2)) + &(&n * &(&(&q - &i(3)) / &qm1))) + &(&(&n * &n) / &q2m1);
    let poly_c = &(&(&(&i(2) * &q_pow(curve, 3)) - &q2) - &(&i(4) * &q)) - &i(3);
    let c = &(&(&i(2) * &(&(&q2 + &q) + &o)) - &(&n * &(&poly_c / &q2m1))) - &(&(&n * &n) / &qm1);
    Ok(poly(vec![
        a.clone(),
        b.clone(),
        &c * &q,
        &b * &q_pow(curve, 3),
        &a * &q_pow(curve, 6),
    ]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sl3FactorReport {
    pub quotient: String,
    pub remainder_zero: bool,
    pub quotient_matches: bool,
    pub vanishes_at_inverse_q: bool,
    pub display_matches_closed_form: bool,
    pub alternative_matches: bool,
}

impl Sl3FactorReport {
    pub fn pass(&self) -> bool {
        self.remainder_zero
            && self.quotient_matches
            && self.vanishes_at_inverse_q
            && self.display_matches_closed_form
            && self.alternative_matches
    }
}

/// Divides `P^{SL_3}` by `(1-qT)(1-q²T)` and compares with `P_o`.
pub fn sl3_factor_check(curve: &CurveDatum) -> Result<(UniPoly, Sl3FactorReport), GroupZetaError> {
    let closed = sl3_closed(curve)?;
    let display = sl3_numerator_display(curve)?;
    let p = &closed.numerator_poly;
    let divisor = poly(vec![one(), -(&q_pow(curve, 1) + &q_pow(curve, 2)), q_pow(curve, 3)]);
    let (quot, rem) = p.div_rem(&divisor)?;
    let inv_q = q_pow(curve, -1);
    let report = Sl3FactorReport {
        quotient: quot.to_string(),
        remainder_zero: rem.is_zero(),
        quotient_matches: quot == sl3_quotient_display(curve)?,
        vanishes_at_inverse_q: p.eval(&inv_q).is_zero(),
        display_matches_closed_form: &display == p,
        alternative_matches: sl3_alternative_display(curve)? == display,
    };
    Ok((quot, report))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniformityVerdict {
    pub rank: u32,
    pub pass: bool,
}

/// `Ẑ_r(T) = ζ̂(1) · ζ̂^{SL_r}(T)` for `r ∈ {2, 3}` with the same `T = t^r`.
pub fn uniformity_check(pure: &PureZeta, curve: &CurveDatum) -> Result<UniformityVerdict, GroupZetaError> {
    let group = match pure.rank {
        2 => sl2_closed(curve)?,
        3 => sl3_closed(curve)?,
        r => return Err(GroupZetaError::RankOutOfRange(r as usize)),
    };
    let rhs = &zeta_value(curve, 1) * &group.in_t_big;
    Ok(UniformityVerdict {
        rank: pure.rank,
        pass: pure.in_t_big() == rhs,
    })
}
