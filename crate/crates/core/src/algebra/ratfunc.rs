use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::factor::{self, expand};
use super::poly::{LaurentPoly, Monomial};
use super::unipoly::UniPoly;
use super::{AlgebraError, Var};

/// Exact quotient of multivariate Laurent polynomials over ℚ.
///
/// The denominator is stored as a product of normalised factors (see
/// [`factor`](super::factor)); only content is ever cancelled, and equality
/// is extensional: `a == b` iff `a - b` has a zero numerator.
#[derive(Clone, Default)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: BTreeMap<LaurentPoly, u32>,
}

pub type Assignment = BTreeMap<Var, BigRational>;

fn insert_factors(den: &mut BTreeMap<LaurentPoly, u32>, factors: Vec<LaurentPoly>, e: u32) {
    for f in factors {
        *den.entry(f).or_insert(0) += e;
    }
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction::default()
    }

    pub fn one() -> Self {
        RationalFunction::from_poly(LaurentPoly::one())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFunction {
            num: p,
            den: BTreeMap::new(),
        }
    }

    pub fn from_int(c: i64) -> Self {
        RationalFunction::from_poly(LaurentPoly::from_int(c))
    }

    pub fn from_rational(c: BigRational) -> Self {
        RationalFunction::from_poly(LaurentPoly::constant(c))
    }

    pub fn var(v: Var) -> Self {
        RationalFunction::from_poly(LaurentPoly::var(v))
    }

    /// `c · v^e` for an integer (possibly negative) exponent.
    pub fn var_pow(v: Var, e: i32) -> Self {
        RationalFunction::from_poly(LaurentPoly::monomial(Monomial::var(v, e)))
    }

    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(RationalFunction::from_poly(num).div_poly(&den))
    }

    fn div_poly(self, d: &LaurentPoly) -> Self {
        let f = factor::factor(d);
        let unit = LaurentPoly::term(f.unit_monomial.inv(), f.unit_coeff.recip());
        let mut den = self.den;
        insert_factors(&mut den, f.factors, 1);
        RationalFunction {
            num: self.num.mul(&unit),
            den,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        (self - &RationalFunction::one()).is_zero()
    }

    /// Numerator as stored (after content moves, before any cancellation).
    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    /// The expanded denominator.
    pub fn denominator(&self) -> LaurentPoly {
        expand(self.den.iter().map(|(f, &e)| (f, e)))
    }

    /// Denominator factors with multiplicities.
    pub fn denominator_factors(&self) -> impl Iterator<Item = (&LaurentPoly, u32)> {
        self.den.iter().map(|(f, &e)| (f, e))
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            let r = self.reduced();
            if r.den.is_empty() {
                r.num.as_constant()
            } else {
                None
            }
        }
    }

    /// Returns the value as a Laurent polynomial if the denominator cancels.
    pub fn as_poly(&self) -> Option<LaurentPoly> {
        let r = self.reduced();
        r.den.is_empty().then_some(r.num)
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        let mut vs = self.num.variables();
        for f in self.den.keys() {
            vs.extend(f.variables());
        }
        vs
    }

    pub fn involves(&self, v: Var) -> bool {
        self.num.involves(v) || self.den.keys().any(|f| f.involves(v))
    }

    /// Cancels denominator factors that divide the numerator exactly.
    pub fn reduced(&self) -> Self {
        self.reduced_where(|_| true)
    }

    /// Like [`reduced`](Self::reduced), trying only the factors selected by `pick`.
    fn reduced_where(&self, pick: impl Fn(&LaurentPoly) -> bool) -> Self {
        let mut num = self.num.clone();
        let mut den = BTreeMap::new();
        for (f, &e) in &self.den {
            let mut left = if pick(f) { e } else { 0 };
            if left == 0 {
                den.insert(f.clone(), e);
                continue;
            }
            while left > 0 {
                match num.div_exact(f) {
                    Some(q) => {
                        num = q;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                den.insert(f.clone(), left);
            }
        }
        if num.is_zero() {
            den.clear();
        }
        RationalFunction { num, den }
    }

    fn cofactor(l: &BTreeMap<LaurentPoly, u32>, d: &BTreeMap<LaurentPoly, u32>) -> LaurentPoly {
        expand(
            l.iter()
                .map(|(f, &e)| (f, e - d.get(f).copied().unwrap_or(0)))
                .filter(|&(_, e)| e > 0),
        )
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let mut r = RationalFunction {
                num: self.num.add(&other.num),
                den: self.den.clone(),
            };
            if r.num.is_zero() {
                r.den.clear();
            }
            return r;
        }
        let mut l = self.den.clone();
        for (f, &e) in &other.den {
            let slot = l.entry(f.clone()).or_insert(0);
            *slot = (*slot).max(e);
        }
        let a = self.num.mul(&Self::cofactor(&l, &self.den));
        let b = other.num.mul(&Self::cofactor(&l, &other.den));
        let num = a.add(&b);
        if num.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction { num, den: l }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return RationalFunction::zero();
        }
        let mut den = self.den.clone();
        for (f, &e) in &other.den {
            *den.entry(f.clone()).or_insert(0) += e;
        }
        RationalFunction {
            num: self.num.mul(&other.num),
            den,
        }
    }

    pub fn neg_ref(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let f = factor::factor(&self.num);
        let num = self
            .denominator()
            .mul(&LaurentPoly::term(f.unit_monomial.inv(), f.unit_coeff.recip()));
        let mut den = BTreeMap::new();
        insert_factors(&mut den, f.factors, 1);
        Ok(RationalFunction { num, den })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul_ref(&other.inv()?))
    }

    pub fn pow(&self, k: i32) -> Result<Self, AlgebraError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let k = k.unsigned_abs();
        let num = base.num.pow(k);
        let den = base.den.iter().map(|(f, &e)| (f.clone(), e * k)).collect();
        Ok(RationalFunction { num, den })
    }

    /// Exact evaluation; a vanishing denominator is a pole unless it cancels.
    pub fn evaluate(&self, point: &Assignment) -> Result<BigRational, AlgebraError> {
        match self.try_evaluate(point) {
            Err(AlgebraError::Pole(_)) => self.reduced().try_evaluate(point),
            r => r,
        }
    }

    fn try_evaluate(&self, point: &Assignment) -> Result<BigRational, AlgebraError> {
        let mut den = BigRational::one();
        for (f, &e) in &self.den {
            let v = f.evaluate(point)?;
            if v.is_zero() {
                return Err(AlgebraError::Pole(format!("{} = 0", f)));
            }
            den *= super::poly::rational_pow(&v, e as i32);
        }
        Ok(self.num.evaluate(point)? / den)
    }

    /// Substitutes constants for the given variables, keeping the rest.
    pub fn partial_evaluate(&self, point: &Assignment) -> Result<Self, AlgebraError> {
        match self.try_partial_evaluate(point) {
            Err(AlgebraError::Pole(_)) => self.reduced().try_partial_evaluate(point),
            r => r,
        }
    }

    fn try_partial_evaluate(&self, point: &Assignment) -> Result<Self, AlgebraError> {
        let num = RationalFunction::from_poly(self.num.partial_evaluate(point)?);
        let mut out = num;
        for (f, &e) in &self.den {
            let g = f.partial_evaluate(point)?;
            if g.is_zero() {
                return Err(AlgebraError::Pole(format!("{} = 0", f)));
            }
            out = out.checked_div(&RationalFunction::from_poly(g).pow(e as i32)?)?;
        }
        Ok(out)
    }

    fn substitute_poly(p: &LaurentPoly, v: Var, value: &Self) -> Result<Self, AlgebraError> {
        if !p.involves(v) {
            return Ok(RationalFunction::from_poly(p.clone()));
        }
        if value.den.is_empty() {
            if let Some((c, m)) = value.num.as_monomial() {
                return Ok(RationalFunction::from_poly(p.substitute_monomial(v, &c, &m)));
            }
        }
        let parts = p.collect_in(v);
        let lo = *parts.keys().next().unwrap();
        let hi = *parts.keys().next_back().unwrap();
        let mut acc = RationalFunction::zero();
        for e in (lo..=hi).rev() {
            acc = acc.mul_ref(value);
            if let Some(c) = parts.get(&e) {
                acc = acc.add_ref(&RationalFunction::from_poly(c.clone()));
            }
        }
        if lo != 0 {
            if value.is_zero() && lo < 0 {
                return Err(AlgebraError::ZeroDenominator);
            }
            acc = acc.mul_ref(&value.pow(lo)?);
        }
        Ok(acc)
    }

    /// Exact composition `self(v ↦ value)`.
    pub fn substitute(&self, v: Var, value: &Self) -> Result<Self, AlgebraError> {
        let mut out = Self::substitute_poly(&self.num, v, value)?;
        for (f, &e) in &self.den {
            let g = Self::substitute_poly(f, v, value)?;
            if g.is_zero() {
                return Err(AlgebraError::ZeroDenominator);
            }
            out = out.mul_ref(&g.pow(-(e as i32))?);
        }
        Ok(out)
    }

    /// Formal partial derivative (quotient rule on the factored denominator).
    pub fn derivative(&self, v: Var) -> Self {
        if self.is_zero() {
            return RationalFunction::zero();
        }
        let moving: Vec<(&LaurentPoly, u32)> = self
            .den
            .iter()
            .filter(|(f, _)| f.involves(v))
            .map(|(f, &e)| (f, e))
            .collect();
        if moving.is_empty() {
            return RationalFunction {
                num: self.num.derivative(v),
                den: self.den.clone(),
            };
        }
        // d(n / ∏ f_i^e_i) = (n'·F - n·Σ e_i f_i' F/f_i) / (D·F), F = ∏ f_i.
        let radical = expand(moving.iter().map(|&(f, _)| (f, 1)));
        let mut sum = LaurentPoly::zero();
        for (i, &(f, e)) in moving.iter().enumerate() {
            let others = expand(
                moving
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &(g, _))| (g, 1)),
            );
            let term = f
                .derivative(v)
                .mul(&others)
                .scale(&BigRational::from_integer(e.into()));
            sum = sum.add(&term);
        }
        let num = self.num.derivative(v).mul(&radical).sub(&self.num.mul(&sum));
        let mut den = self.den.clone();
        for (f, _) in &moving {
            *den.get_mut(*f).unwrap() += 1;
        }
        if num.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction { num, den }
    }

    /// The normalised linear factor vanishing at `v = point`, and the unit
    /// `u` (free of `v`) with `v - point = u · factor`.
    fn linear_factor(v: Var, point: &Self) -> Result<(LaurentPoly, Self), AlgebraError> {
        if point.involves(v) {
            return Err(AlgebraError::InvalidPoint(v.name()));
        }
        let pd = point.denominator();
        let lin = pd.mul(&LaurentPoly::var(v)).sub(&point.num);
        let f = factor::factor(&lin);
        debug_assert_eq!(f.factors.len(), 1);
        let lf = f.factors.into_iter().next().unwrap();
        let unit = RationalFunction::from_poly(LaurentPoly::term(f.unit_monomial, f.unit_coeff))
            .checked_div(&RationalFunction::from_poly(pd))?;
        Ok((lf, unit))
    }

    /// Order of the pole of `self` at `v = point` counted from the
    /// denominator by repeated exact division (0 if there is none).
    pub fn pole_order(&self, v: Var, point: &Self) -> Result<u32, AlgebraError> {
        if point.is_zero() {
            return Ok(self.num.exponent_range(v).map_or(0, |r| r.0.min(0).unsigned_abs()));
        }
        let (lf, _) = Self::linear_factor(v, point)?;
        Ok(self.den_multiplicity(&lf).0)
    }

    /// Total multiplicity of `lf` in the denominator, and the cofactors
    /// `g` with `f = lf^j · g` for every stored factor `f^e`.
    fn den_multiplicity(&self, lf: &LaurentPoly) -> (u32, Vec<(LaurentPoly, u32)>) {
        let mut order = 0;
        let mut rest = Vec::new();
        for (f, &e) in &self.den {
            let mut g = f.clone();
            let mut j = 0;
            while let Some(h) = g.div_exact(lf) {
                g = h;
                j += 1;
            }
            order += j * e;
            rest.push((g, e));
        }
        (order, rest)
    }

    /// Residue at `v = point` of `self` viewed as a function of `v` over the
    /// field of the remaining variables.
    pub fn residue(&self, v: Var, point: &Self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Ok(RationalFunction::zero());
        }
        let (k, mut g) = if point.is_zero() {
            // Poles at 0 live in the negative powers of the numerator.
            let lo = self.num.exponent_range(v).map_or(0, |r| r.0);
            let k = lo.min(0).unsigned_abs();
            let num = self.num.mul_monomial(&Monomial::var(v, k as i32));
            (k, RationalFunction { num, den: self.den.clone() })
        } else {
            let (lf, unit) = Self::linear_factor(v, point)?;
            let (k, rest) = self.den_multiplicity(&lf);
            // (v - point)^k · self = unit^k · num / ∏ g^e
            let mut g = RationalFunction::from_poly(self.num.clone());
            for (c, e) in &rest {
                for _ in 0..*e {
                    g = g.div_poly(c);
                }
            }
            (k, g.mul_ref(&unit.pow(k as i32)?))
        };
        if k == 0 {
            return Ok(RationalFunction::zero());
        }
        for _ in 1..k {
            g = g.derivative(v);
        }
        let fact: BigInt = (1..k as u64).map(BigInt::from).product();
        let value = g.substitute(v, point)?;
        Ok(value.scale(&BigRational::from_integer(fact).recip()))
    }

    /// Views `self` as a polynomial in `v` with coefficients free of `v`.
    pub fn to_unipoly(&self, v: Var) -> Result<UniPoly, AlgebraError> {
        let r = if self.den.keys().any(|f| f.involves(v)) {
            self.reduced_where(|f| f.involves(v))
        } else {
            self.clone()
        };
        if r.den.keys().any(|f| f.involves(v)) {
            return Err(AlgebraError::NotPolynomial(v.name()));
        }
        let parts = r.num.collect_in(v);
        if parts.keys().next().is_some_and(|&e| e < 0) {
            return Err(AlgebraError::NotPolynomial(v.name()));
        }
        let deg = parts.keys().next_back().copied().unwrap_or(0) as usize;
        let mut coeffs = vec![RationalFunction::zero(); deg + 1];
        for (e, c) in parts {
            coeffs[e as usize] = RationalFunction {
                num: c,
                den: r.den.clone(),
            };
        }
        Ok(UniPoly::new(coeffs))
    }

    /// Canonical `(num, den)`: integer coefficients with no common content,
    /// denominator free of monomial content with positive leading coefficient.
    pub fn canonical_parts(&self) -> (LaurentPoly, LaurentPoly) {
        let r = self.reduced();
        if r.num.is_zero() {
            return (LaurentPoly::zero(), LaurentPoly::one());
        }
        let den = r.denominator();
        let mut l = BigInt::one();
        for (_, c) in r.num.terms().chain(den.terms()) {
            l = l.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for (_, c) in r.num.terms().chain(den.terms()) {
            g = g.gcd(&(c * BigRational::from_integer(l.clone())).to_integer());
        }
        let s = BigRational::new(l, g);
        let neg = Monomial::from_pairs(r.num.min_monomial().iter().filter(|&(_, e)| e < 0));
        let shift = neg.inv();
        (
            r.num.scale(&s).mul_monomial(&shift),
            den.scale(&s).mul_monomial(&shift),
        )
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for RationalFunction {}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.canonical_parts();
        write!(f, "({})/({})", n, d)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for RationalFunction {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse::parse(s)
    }
}

impl serde::Serialize for RationalFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for RationalFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<LaurentPoly> for RationalFunction {
    fn from(p: LaurentPoly) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl From<i64> for RationalFunction {
    fn from(c: i64) -> Self {
        RationalFunction::from_int(c)
    }
}

impl From<BigRational> for RationalFunction {
    fn from(c: BigRational) -> Self {
        RationalFunction::from_rational(c)
    }
}

impl From<Var> for RationalFunction {
    fn from(v: Var) -> Self {
        RationalFunction::var(v)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $imp:expr) => {
        impl $trait<&RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &RationalFunction) -> RationalFunction {
                $imp(self, rhs)
            }
        }
        impl $trait<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                $imp(&self, &rhs)
            }
        }
        impl $trait<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &RationalFunction) -> RationalFunction {
                $imp(&self, rhs)
            }
        }
        impl $trait<RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                $imp(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &RationalFunction, b| a.add_ref(b));
forward_binop!(Sub, sub, |a: &RationalFunction, b: &RationalFunction| a
    .add_ref(&b.neg_ref()));
forward_binop!(Mul, mul, |a: &RationalFunction, b| a.mul_ref(b));
// Panics on division by zero; use `checked_div` for a fallible version.
forward_binop!(Div, div, |a: &RationalFunction, b| a
    .checked_div(b)
    .expect("division by the zero rational function"));

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        self.neg_ref()
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        self.neg_ref()
    }
}

impl std::iter::Sum for RationalFunction {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(RationalFunction::zero(), |a, b| a.add_ref(&b))
    }
}

impl std::iter::Product for RationalFunction {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(RationalFunction::one(), |a, b| a.mul_ref(&b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{assign, rat, ratio};
    use proptest::prelude::*;

    fn p(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    const X: Var = Var::letter(b'x');
    const Y: Var = Var::letter(b'y');

    #[test]
    fn arithmetic_examples() {
        assert_eq!(p("(x^2-1)/(x-1)"), p("x+1"));
        assert!((p("1/(1-q^2)") + p("1/(q^2-1)")).is_zero());
        let prod = p("q/(1-q^2)") * p("(1-q)/q");
        assert_eq!(prod, p("1/(1+q)"));
        assert_ne!(prod, p("-1/(1+q)"));
        assert_eq!(
            RationalFunction::one().checked_div(&RationalFunction::zero()),
            Err(AlgebraError::DivisionByZero)
        );
    }

    #[test]
    fn substitution_examples() {
        let z = p("(1-(q+1-N)*t+q*t^2)/((1-t)*(1-q*t))");
        let inv = p("1/(q*t)");
        assert_eq!(z.substitute(Var::T_SMALL, &inv).unwrap(), z);
        assert_eq!(
            p("T").substitute(Var::T_BIG, &p("t^3")).unwrap(),
            p("t^3")
        );
        assert_eq!(
            p("1/(1-q*x)").substitute(X, &p("1/q")),
            Err(AlgebraError::ZeroDenominator)
        );
        assert_eq!(
            p("x^2+y").substitute(X, &p("y/(1+y)")).unwrap(),
            p("y^2/(1+y)^2 + y")
        );
    }

    #[test]
    fn evaluation_examples() {
        let u2 = p("q/((q-1)*(q^2-1))");
        assert_eq!(u2.evaluate(&assign([(Var::Q, rat(2))])).unwrap(), ratio(2, 3));
        let z1 = p("N/(q-1)");
        let pt = assign([(Var::Q, rat(2)), (Var::N, rat(3))]);
        assert_eq!(z1.evaluate(&pt).unwrap(), rat(3));
        assert!(matches!(
            p("1/(1-t)").evaluate(&assign([(Var::T_SMALL, rat(1))])),
            Err(AlgebraError::Pole(_))
        ));
        assert_eq!(
            p("(t^2-1)/(t-1)").evaluate(&assign([(Var::T_SMALL, rat(1))])).unwrap(),
            rat(2)
        );
        assert!(matches!(
            p("q").evaluate(&assign([])),
            Err(AlgebraError::Unassigned(_))
        ));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p("x^2").derivative(X), p("2*x"));
        assert_eq!(p("1/(x-1)").derivative(X), p("-1/(x-1)^2"));
        assert_eq!(p("x^-1").derivative(X), p("-x^-2"));
        assert_eq!(p("q/(x-q)").derivative(Var::Q), p("x/(x-q)^2"));
    }

    #[test]
    fn residue_examples() {
        let one = RationalFunction::one();
        assert_eq!(p("1/(x-1)").residue(X, &one).unwrap(), one);
        assert!(p("1/(x-1)^2").residue(X, &one).unwrap().is_zero());
        assert_eq!(p("x/((x-1)*(x-q))").residue(X, &one).unwrap(), p("1/(1-q)"));
        assert_eq!(p("x^3/(x-1)^3").residue(X, &one).unwrap(), p("3"));
        assert_eq!(p("x/((x-1)*(x-q))").residue(X, &p("q")).unwrap(), p("q/(q-1)"));
        assert_eq!(p("1/(x*(x-1))").residue(X, &RationalFunction::zero()).unwrap(), p("-1"));
        assert!(p("x+1/(x-2)").residue(X, &one).unwrap().is_zero());
        assert_eq!(p("1/(x-1)").pole_order(X, &one).unwrap(), 1);
        assert_eq!(p("(x-1)/(x-1)^3").pole_order(X, &one).unwrap(), 3);
        assert!(matches!(
            p("1/x").residue(X, &p("x")),
            Err(AlgebraError::InvalidPoint(_))
        ));
    }

    #[test]
    fn canonical_display() {
        let beta2 = p("(N/(q-1))*(1+N/(q^2-1))");
        assert_eq!(beta2.to_string(), "(N*q^2+N^2-N)/(q^3-q^2-q+1)");
        assert_eq!(p("1/q - 1").to_string(), "(-q+1)/(q)");
        assert_eq!(RationalFunction::zero().to_string(), "(0)/(1)");
        assert_eq!(p("(2*q+2)/(4*q^2-4)").to_string(), "(1)/(2*q-2)");
    }

    #[test]
    fn serde_round_trip() {
        let f = p("(N*q^2+N^2-N)/(q^3-q^2-q+1)");
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, "\"(N*q^2+N^2-N)/(q^3-q^2-q+1)\"");
        let g: RationalFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(g, f);
    }

    fn small_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-3i64..=3, -1i32..=2, 0i32..=2), 1..4).prop_map(|terms| {
            LaurentPoly::from_terms(terms.into_iter().map(|(c, ex, eq)| {
                (
                    rat(c),
                    Monomial::from_pairs([(X, ex), (Var::Q, eq)]),
                )
            }))
        })
    }

    fn nonzero_poly() -> impl Strategy<Value = LaurentPoly> {
        small_poly().prop_filter("nonzero", |p| !p.is_zero())
    }

    pub(crate) fn ratfunc() -> impl Strategy<Value = RationalFunction> {
        (small_poly(), nonzero_poly(), nonzero_poly()).prop_map(|(n, d1, d2)| {
            RationalFunction::new(n, d1.mul(&d2)).unwrap()
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn equality_is_invariant_under_common_factor(a in ratfunc(), m in nonzero_poly()) {
            let expanded = RationalFunction::new(
                a.numerator().mul(&m).mul(&a.denominator()),
                a.denominator().mul(&m).mul(&a.denominator()),
            ).unwrap();
            prop_assert_eq!(&expanded, &a);
        }

        #[test]
        fn product_rule(a in ratfunc(), b in ratfunc()) {
            let lhs = (&a * &b).derivative(X);
            let rhs = &a * &b.derivative(X) + &b * &a.derivative(X);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn residue_is_linear(a in ratfunc(), b in ratfunc(), k in 1u32..3, l in 1u32..3) {
            let pole = p("x-1");
            let f = &a / &RationalFunction::from_poly(pole.numerator().pow(k));
            let g = &b / &RationalFunction::from_poly(pole.numerator().pow(l));
            let one = RationalFunction::one();
            // Skip draws where the random denominators themselves vanish at x = 1.
            prop_assume!(a.denominator().substitute_monomial(X, &rat(1), &Monomial::one())
                .as_constant().map_or(true, |c| !c.is_zero()));
            let lhs = (&f + &g).residue(X, &one).unwrap();
            let rhs = f.residue(X, &one).unwrap() + g.residue(X, &one).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn substitutions_commute(f in ratfunc(), a in ratfunc(), b in nonzero_poly()) {
            // a avoids q and b avoids x.
            let y = RationalFunction::var(Y);
            let a = a.substitute(Var::Q, &y).unwrap();
            let b = RationalFunction::from_poly(b).substitute(X, &y).unwrap();
            let one = f.substitute(X, &a).and_then(|g| g.substitute(Var::Q, &b));
            let two = f.substitute(Var::Q, &b).and_then(|g| g.substitute(X, &a));
            if let (Ok(one), Ok(two)) = (one, two) {
                prop_assert_eq!(one, two);
            }
        }

        #[test]
        fn display_parses_back(a in ratfunc()) {
            prop_assert_eq!(p(&a.to_string()), a);
        }
    }
}
