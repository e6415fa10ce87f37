use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::{AlgebraError, Var};

/// A Laurent monomial: variables with nonzero (possibly negative) exponents,
/// sorted by variable.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Var, i32); 4]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var, e: i32) -> Monomial {
        let mut m = Monomial::one();
        if e != 0 {
            m.0.push((v, e));
        }
        m
    }

    pub fn from_pairs<I: IntoIterator<Item = (Var, i32)>>(pairs: I) -> Monomial {
        pairs
            .into_iter()
            .fold(Monomial::one(), |m, (v, e)| m.mul(&Monomial::var(v, e)))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: Var) -> i32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map_or(0, |&(_, e)| e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, i32)> + '_ {
        self.0.iter().copied()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&(_, e)| e as i64).sum()
    }

    fn merge(&self, other: &Monomial, sign: i32) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match take {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0, sign * b[j].1));
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + sign * b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial(out)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.merge(other, 1)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.merge(other, -1)
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * k)).collect())
    }

    pub fn inv(&self) -> Monomial {
        self.pow(-1)
    }

    /// Componentwise minimum of exponents (absent variables count as 0).
    pub fn meet(&self, other: &Monomial) -> Monomial {
        let vars: BTreeSet<Var> = self.0.iter().chain(other.0.iter()).map(|p| p.0).collect();
        Monomial::from_pairs(
            vars.into_iter()
                .map(|v| (v, self.exponent(v).min(other.exponent(v)))),
        )
    }

    /// True if every exponent is nonnegative.
    pub fn is_ordinary(&self) -> bool {
        self.0.iter().all(|&(_, e)| e >= 0)
    }

    pub fn without(&self, v: Var) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(w, _)| w != v).collect())
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order; earlier variables are more significant.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, e)), None) => return e.cmp(&0),
                (None, Some(&(_, e))) => return 0.cmp(&e),
                (Some(&(v, e)), Some(&(w, f))) => match v.cmp(&w) {
                    Ordering::Less => return e.cmp(&0),
                    Ordering::Greater => return 0.cmp(&f),
                    Ordering::Equal => {
                        if e != f {
                            return e.cmp(&f);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (k, &(v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{}^{}", v, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sparse multivariate Laurent polynomial with rational coefficients.
///
/// Terms are kept in a map ordered by graded lexicographic order, so the
/// last entry is the leading term. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly::default()
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> LaurentPoly {
        LaurentPoly::term(Monomial::one(), c)
    }

    pub fn from_int(c: i64) -> LaurentPoly {
        LaurentPoly::constant(BigRational::from_integer(c.into()))
    }

    pub fn term(m: Monomial, c: BigRational) -> LaurentPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    pub fn var(v: Var) -> LaurentPoly {
        LaurentPoly::term(Monomial::var(v, 1), BigRational::one())
    }

    pub fn monomial(m: Monomial) -> LaurentPoly {
        LaurentPoly::term(m, BigRational::one())
    }

    /// Builds from `(coefficient, monomial)` pairs, combining like terms.
    pub fn from_terms<I: IntoIterator<Item = (BigRational, Monomial)>>(it: I) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (c, m) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(BigRational, Monomial)> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            Some((c.clone(), m.clone()))
        } else {
            None
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.iter().map(|(v, _)| v))
            .collect()
    }

    pub fn involves(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) != 0)
    }

    /// (min, max) exponent of `v` over all terms; `None` for the zero polynomial.
    pub fn exponent_range(&self, v: Var) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|m| m.exponent(v));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    /// Componentwise minimum monomial dividing every term.
    pub fn min_monomial(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(),
            Some(first) => it.fold(first.clone(), |acc, m| acc.meet(m)),
        }
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut acc: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match acc.entry(m) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += c;
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        LaurentPoly { terms: acc }
    }

    pub fn scale(&self, c: &BigRational) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> LaurentPoly {
        if m.is_one() {
            return self.clone();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut result = LaurentPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn derivative(&self, v: Var) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(v);
            (e != 0).then(|| (c * BigRational::from_integer(e.into()), m.mul(&Monomial::var(v, -1))))
        }))
    }

    /// Splits by the exponent of `v`: `self = Σ_e coeff_e · v^e`.
    pub fn collect_in(&self, v: Var) -> BTreeMap<i32, LaurentPoly> {
        let mut out: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exponent(v))
                .or_default()
                .add_term(m.without(v), c.clone());
        }
        out
    }

    /// Evaluates every variable; fails on an unassigned variable or on a
    /// zero base raised to a negative power.
    pub fn evaluate(&self, point: &BTreeMap<Var, BigRational>) -> Result<BigRational, AlgebraError> {
        if let Some(v) = self.evaluate_integral(point) {
            return Ok(v);
        }
        let mut sum = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in m.iter() {
                let x = point
                    .get(&v)
                    .ok_or_else(|| AlgebraError::Unassigned(v.name()))?;
                if x.is_zero() && e < 0 {
                    return Err(AlgebraError::Pole(format!("{} = 0", v)));
                }
                term *= rational_pow(x, e);
            }
            sum += term;
        }
        Ok(sum)
    }

    /// Integer points and non-negative exponents: one common denominator and
    /// cached powers, no per-term normalization.
    fn evaluate_integral(&self, point: &BTreeMap<Var, BigRational>) -> Option<BigRational> {
        let mut lcm = BigInt::one();
        for (m, c) in &self.terms {
            if m.iter().any(|(v, e)| e < 0 || !point.get(&v).is_some_and(|x| x.is_integer())) {
                return None;
            }
            if !c.denom().is_one() {
                lcm = lcm.lcm(c.denom());
            }
        }
        let mut powers: BTreeMap<(Var, i32), BigInt> = BTreeMap::new();
        let mut sum = BigInt::zero();
        for (m, c) in &self.terms {
            let mut term = if lcm.is_one() { c.numer().clone() } else { c.numer() * (&lcm / c.denom()) };
            for (v, e) in m.iter() {
                let p = powers
                    .entry((v, e))
                    .or_insert_with(|| num_traits::pow(point[&v].numer().clone(), e as usize));
                term *= &*p;
            }
            sum += term;
        }
        Some(BigRational::new(sum, lcm))
    }

    /// Substitutes constants for some variables, leaving the others symbolic.
    pub fn partial_evaluate(&self, point: &BTreeMap<Var, BigRational>) -> Result<LaurentPoly, AlgebraError> {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Monomial::one();
            for (v, e) in m.iter() {
                match point.get(&v) {
                    Some(x) => {
                        if x.is_zero() && e < 0 {
                            return Err(AlgebraError::Pole(format!("{} = 0", v)));
                        }
                        coeff *= rational_pow(x, e);
                    }
                    None => rest = rest.mul(&Monomial::var(v, e)),
                }
            }
            out.add_term(rest, coeff);
        }
        Ok(out)
    }

    /// Renames variables via a monomial substitution `v ↦ m` (exact; used for
    /// `t ↦ t^3`, `q ↦ r^6` and similar).
    pub fn substitute_monomial(&self, v: Var, c: &BigRational, m: &Monomial) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().map(|(k, x)| {
            let e = k.exponent(v);
            (x * rational_pow(c, e), k.without(v).mul(&m.pow(e)))
        }))
    }

    /// Integer content: returns `(content, primitive)` with
    /// `self = content · primitive`, primitive having coprime integer
    /// coefficients and a positive leading coefficient.
    pub fn primitive(&self) -> (BigRational, LaurentPoly) {
        if self.is_zero() {
            return (BigRational::one(), LaurentPoly::zero());
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if self.leading().unwrap().1.is_negative() {
            content = -content;
        }
        let inv = content.recip();
        (content, self.scale(&inv))
    }

    /// Exact division: `Some(h)` with `self = d · h` if such a Laurent
    /// polynomial exists.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        if let Some((c, m)) = d.as_monomial() {
            return Some(self.mul_monomial(&m.inv()).scale(&c.recip()));
        }
        let fm = self.min_monomial();
        let dm = d.min_monomial();
        let mut rem = self.mul_monomial(&fm.inv());
        let div = d.mul_monomial(&dm.inv());
        let (lm, lc) = div.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut quot = LaurentPoly::zero();
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&lm);
            if !qm.is_ordinary() {
                return None;
            }
            let qc = c / &lc;
            let step = LaurentPoly::term(qm, qc);
            rem = rem.sub(&div.mul(&step));
            quot = quot.add(&step);
        }
        Some(quot.mul_monomial(&fm.div(&dm)))
    }
}

pub(crate) fn rational_pow(x: &BigRational, e: i32) -> BigRational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        LaurentPoly::from_int(c)
    }
}

impl From<Var> for LaurentPoly {
    fn from(v: Var) -> Self {
        LaurentPoly::var(v)
    }
}

impl fmt::Display for LaurentPoly {
    /// Descending graded-lex order, `*` between factors, `^` for exponents.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            if neg {
                f.write_str("-")?;
            } else if k > 0 {
                f.write_str("+")?;
            }
            let a = c.abs();
            if m.is_one() {
                write_rational(f, &a)?;
            } else if a.is_one() {
                write!(f, "{}", m)?;
            } else {
                write_rational(f, &a)?;
                write!(f, "*{}", m)?;
            }
        }
        Ok(())
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &BigRational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
