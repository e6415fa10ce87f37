use std::fmt;

use super::{AlgebraError, RationalFunction, Var};

/// Dense polynomial in one variable with rational-function coefficients,
/// lowest degree first. Trailing zero coefficients are trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<RationalFunction>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<RationalFunction>) -> UniPoly {
        while coeffs.last().is_some_and(RationalFunction::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> UniPoly {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> RationalFunction {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![RationalFunction::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::new(out)
    }

    /// Division with remainder: `self = divisor · quotient + remainder`,
    /// `deg remainder < deg divisor`.
    pub fn div_rem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly), AlgebraError> {
        let dd = divisor.degree().ok_or(AlgebraError::DivisionByZero)?;
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((UniPoly::zero(), self.clone()));
        }
        let mut quot = vec![RationalFunction::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].checked_div(&lead)?.reduced();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = (&rem[i + j] - &(&c * d)).reduced();
            }
            rem[i + dd] = RationalFunction::zero();
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((UniPoly::new(quot), UniPoly::new(rem)))
    }

    /// Horner evaluation at an arbitrary rational function.
    pub fn eval(&self, x: &RationalFunction) -> RationalFunction {
        self.coeffs
            .iter()
            .rev()
            .fold(RationalFunction::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn to_rational_function(&self, v: Var) -> RationalFunction {
        self.eval(&RationalFunction::var(v))
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("[{}]*T^{}", c, i))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use proptest::prelude::*;

    fn p(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    fn up(s: &str) -> UniPoly {
        p(s).to_unipoly(Var::T_BIG).unwrap()
    }

    #[test]
    fn division_examples() {
        let (q, r) = up("1-(q+1)*T+q*T^2").div_rem(&up("1-q*T")).unwrap();
        assert_eq!(q, up("1-T"));
        assert!(r.is_zero());
        let (q, r) = up("T^2").div_rem(&up("T")).unwrap();
        assert_eq!(q, up("T"));
        assert!(r.is_zero());
        let (q, r) = up("T^2+1").div_rem(&up("q*T")).unwrap();
        assert_eq!(q, up("T/q"));
        assert_eq!(r, up("1"));
        let (q, r) = up("T").div_rem(&up("T^3")).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, up("T"));
        assert_eq!(up("1").div_rem(&UniPoly::zero()), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn conversion_round_trip() {
        let f = p("(1+N*T)/(q-1) + T^3");
        let u = f.to_unipoly(Var::T_BIG).unwrap();
        assert_eq!(u.degree(), Some(3));
        assert_eq!(u.coeff(1), p("N/(q-1)"));
        assert_eq!(u.to_rational_function(Var::T_BIG), f);
        assert!(matches!(
            p("1/T").to_unipoly(Var::T_BIG),
            Err(AlgebraError::NotPolynomial(_))
        ));
        assert!(matches!(
            p("1/(1-T)").to_unipoly(Var::T_BIG),
            Err(AlgebraError::NotPolynomial(_))
        ));
    }

    fn coeff() -> impl Strategy<Value = RationalFunction> {
        (-4i64..=4, 0i32..=2, 1i64..=3).prop_map(|(c, e, d)| {
            RationalFunction::var_pow(Var::Q, e).scale(&rat(c)) / RationalFunction::from_int(d)
                + RationalFunction::from_int(c % 2)
        })
    }

    fn unipoly(min_len: usize) -> impl Strategy<Value = UniPoly> {
        prop::collection::vec(coeff(), min_len..=7).prop_map(UniPoly::new)
    }

    proptest! {
        #[test]
        fn divrem_round_trip(f in unipoly(0), g in unipoly(1)) {
            prop_assume!(!g.is_zero());
            let (q, r) = f.div_rem(&g).unwrap();
            prop_assert_eq!(g.mul(&q).add(&r), f);
            prop_assert!(r.degree() < g.degree());
        }
    }
}
