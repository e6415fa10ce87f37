//! The Weyl-sum period `ω(λ)`, its iterated residues toward `P_{n-1,1}`,
//! clearing of zeta denominators and substitution of concrete zetas.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::roots::{weyl_group, RootSystemA, WeylElement};
use super::GroupZetaError;
use crate::algebra::{Monomial, RationalFunction, Var};
use crate::artin::{artin_zeta_ratfunc, zeta_value, CurveDatum};

/// `constant + Σ coeffs[j]·s_{j+1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineForm {
    pub constant: BigRational,
    pub coeffs: Vec<BigRational>,
}

impl AffineForm {
    pub fn constant(c: BigRational, vars: usize) -> AffineForm {
        AffineForm {
            constant: c,
            coeffs: vec![BigRational::zero(); vars],
        }
    }

    pub fn involves(&self, j: usize) -> bool {
        !self.coeffs[j].is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The form on the hyperplane `s_{j+1} = 0`.
    pub fn restrict(&self, j: usize) -> AffineForm {
        let mut f = self.clone();
        f.coeffs[j] = BigRational::zero();
        f
    }

    pub fn shift(&self, c: i64) -> AffineForm {
        let mut f = self.clone();
        f.constant += BigRational::from_integer(c.into());
        f
    }

    /// `(b, k)` when the form is `b + k·s_{j+1}` with `k ≠ 0`.
    pub fn single_variable(&self, j: usize) -> Option<(&BigRational, &BigRational)> {
        let only_j = self.coeffs.iter().enumerate().all(|(i, c)| i == j || c.is_zero());
        (only_j && self.involves(j)).then_some((&self.constant, &self.coeffs[j]))
    }

    fn integral_parts(&self) -> Result<(i32, Vec<i32>), GroupZetaError> {
        let as_int = |c: &BigRational| {
            c.is_integer()
                .then(|| c.to_integer().to_i32())
                .flatten()
                .ok_or_else(|| GroupZetaError::NonIntegralForm(self.to_string()))
        };
        let b = as_int(&self.constant)?;
        let a = self.coeffs.iter().map(as_int).collect::<Result<_, _>>()?;
        Ok((b, a))
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        if !self.constant.is_zero() || self.is_constant() {
            out.push_str(&self.constant.to_string());
        }
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if !out.is_empty() || c.is_negative() {
                out.push_str(sign);
            }
            let a = c.abs();
            if !a.is_one() {
                out.push_str(&a.to_string());
            }
            out.push_str(&format!("s{}", j + 1));
        }
        f.write_str(&out)
    }
}

/// `ratPart · ∏ ζ̂(form)^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodTerm {
    /// The Weyl element a raw period term comes from.
    pub weyl: Option<WeylElement>,
    pub rat_part: RationalFunction,
    pub zeta_factors: Vec<(AffineForm, i32)>,
}

impl PeriodTerm {
    /// Zeta factors with equal forms merged and cancelled.
    pub fn zeta_map(&self) -> BTreeMap<AffineForm, i32> {
        merge(self.zeta_factors.iter().cloned())
    }

    fn zetas_string(&self) -> String {
        self.zeta_factors
            .iter()
            .map(|(f, e)| if *e == 1 { format!("ζ̂({f})") } else { format!("ζ̂({f})^{e}") })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for PeriodTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rat_part)?;
        if !self.zeta_factors.is_empty() {
            write!(f, " * {}", self.zetas_string())?;
        }
        Ok(())
    }
}

fn merge<I: IntoIterator<Item = (AffineForm, i32)>>(it: I) -> BTreeMap<AffineForm, i32> {
    let mut m = BTreeMap::new();
    for (f, e) in it {
        *m.entry(f).or_insert(0) += e;
    }
    m.retain(|_, e| *e != 0);
    m
}

/// `λ = ρ + Σ s_j λ_j` as affine forms per coordinate.
fn lambda(roots: &RootSystemA) -> Vec<AffineForm> {
    (0..roots.n)
        .map(|i| AffineForm {
            constant: roots.weyl_vector[i].clone(),
            coeffs: roots.fundamental_weights.iter().map(|l| l[i].clone()).collect(),
        })
        .collect()
}

fn pair(v: &[AffineForm], (i, j): (usize, usize)) -> AffineForm {
    AffineForm {
        constant: &v[i].constant - &v[j].constant,
        coeffs: v[i].coeffs.iter().zip(&v[j].coeffs).map(|(a, b)| a - b).collect(),
    }
}

/// `q^{-form}` with `x_j = q^{-s_j}`.
fn q_power(form: &AffineForm) -> Result<RationalFunction, GroupZetaError> {
    let (b, a) = form.integral_parts()?;
    let mono = Monomial::from_pairs(
        std::iter::once((Var::Q, -b)).chain(a.iter().enumerate().map(|(j, &e)| (Var::x(j as u16 + 1), e))),
    );
    Ok(RationalFunction::from_poly(crate::algebra::LaurentPoly::monomial(mono)))
}

/// One term per Weyl element, ordered as [`weyl_group`].
pub fn build_period(n: usize) -> Result<Vec<PeriodTerm>, GroupZetaError> {
    let roots = RootSystemA::new(n)?;
    let lam = lambda(&roots);
    let one = RationalFunction::one();
    weyl_group(n)?
        .into_par_iter()
        .map(|w| {
            let wl = w.act(&lam);
            let mut rat = RationalFunction::one();
            for &a in &roots.simple_roots {
                // ⟨wλ - ρ, α∨⟩ = ⟨wλ, α∨⟩ - 1 on simple roots.
                let form = pair(&wl, a).shift(-1);
                rat = &rat / &(&one - &q_power(&form)?);
            }
            let mut zeta_factors = Vec::new();
            for a in w.inversion_set(&roots) {
                let form = pair(&lam, a);
                zeta_factors.push((form.shift(1), -1));
                zeta_factors.push((form, 1));
            }
            zeta_factors.sort();
            Ok(PeriodTerm {
                weyl: Some(w),
                rat_part: rat,
                zeta_factors,
            })
        })
        .collect()
}

/// `ζ̂(b + Σ a_j s_j) = Z(q^{-b} ∏ x_j^{a_j})`; constants use the special values.
pub fn concrete_zeta(curve: &CurveDatum, form: &AffineForm) -> Result<RationalFunction, GroupZetaError> {
    if !curve.is_elliptic() {
        return Err(GroupZetaError::NotElliptic);
    }
    let (b, _) = form.integral_parts()?;
    if form.is_constant() {
        // ζ̂(s) = ζ̂(1-s).
        let k = if b >= 1 { b } else { 1 - b };
        if b == 0 {
            return Err(GroupZetaError::ZetaPole(form.to_string()));
        }
        return Ok(zeta_value(curve, k as u32));
    }
    let arg = q_power(form)?;
    Ok(artin_zeta_ratfunc(curve).substitute(Var::T_SMALL, &arg)?)
}

fn zeta_one(vars: usize) -> AffineForm {
    AffineForm::constant(BigRational::one(), vars)
}

/// `Res_{s_{j+1}=0}` of a list of terms, read in `x = q^{-s_{j+1}}` at `x = 1`
/// with sign `-1`. Zeta factors stay formal when the pole is simple; terms
/// with other pole structure are made concrete in `s_{j+1}` and summed
/// before the residue is taken.
fn residue_step(terms: &[PeriodTerm], j: usize, vars: usize, curve: &CurveDatum) -> Result<Vec<PeriodTerm>, GroupZetaError> {
    let x = Var::x(j as u16 + 1);
    let at_one = RationalFunction::one();
    let mut out: BTreeMap<BTreeMap<AffineForm, i32>, RationalFunction> = BTreeMap::new();
    let mut fallback: BTreeMap<BTreeMap<AffineForm, i32>, RationalFunction> = BTreeMap::new();
    for term in terms {
        let zetas = term.zeta_map();
        let rat = term.rat_part.reduced();
        let rat_order = rat.pole_order(x, &at_one)? as i32;
        let singular: Vec<(&AffineForm, i32)> = zetas
            .iter()
            .filter(|(f, _)| {
                f.single_variable(j)
                    .is_some_and(|(b, _)| b.is_zero() || b.is_one())
            })
            .map(|(f, &e)| (f, e))
            .collect();
        let order = rat_order + singular.iter().map(|s| s.1).sum::<i32>();
        if order <= 0 {
            continue;
        }
        let restricted = |skip: Option<&AffineForm>| {
            merge(
                zetas
                    .iter()
                    .filter(|(f, _)| Some(*f) != skip)
                    .map(|(f, &e)| (f.restrict(j), e)),
            )
        };
        if singular.is_empty() && rat_order == 1 {
            let value = -rat.residue(x, &at_one)?;
            let key = restricted(None);
            push(&mut out, key, value);
        } else if rat_order == 0 && singular.len() == 1 && singular[0].1 == 1 {
            let form = singular[0].0;
            let (b, k) = form.single_variable(j).expect("singular form");
            // ζ̂(1 + k s) ~ ζ̂(1)/k and ζ̂(k s) ~ -ζ̂(1)/k after the sign.
            let lead = if b.is_one() { k.recip() } else { -k.recip() };
            let value = rat.substitute(x, &at_one)?.scale(&lead);
            let mut key = restricted(Some(form));
            *key.entry(zeta_one(vars)).or_insert(0) += 1;
            key.retain(|_, e| *e != 0);
            push(&mut out, key, value);
        } else {
            let mut value = rat.clone();
            let mut key = BTreeMap::new();
            for (f, &e) in &zetas {
                if f.involves(j) {
                    value = &value * &concrete_zeta(curve, f)?.pow(e)?;
                } else {
                    key.insert(f.clone(), e);
                }
            }
            push(&mut fallback, key, value);
        }
    }
    for (key, sum) in fallback {
        let value = -sum.residue(x, &at_one)?;
        push(&mut out, key, value);
    }
    Ok(out
        .into_iter()
        .filter(|(_, r)| !r.is_zero())
        .map(|(key, rat_part)| PeriodTerm {
            weyl: None,
            rat_part,
            zeta_factors: key.into_iter().collect(),
        })
        .collect())
}

fn push(
    map: &mut BTreeMap<BTreeMap<AffineForm, i32>, RationalFunction>,
    key: BTreeMap<AffineForm, i32>,
    value: RationalFunction,
) {
    match map.get_mut(&key) {
        Some(v) => *v = &*v + &value,
        None => {
            map.insert(key, value);
        }
    }
}

/// `Res_{s_1=0} ⋯ Res_{s_{n-2}=0}`, innermost first. The result involves
/// only `s_{n-1}`; terms with equal zeta parts are combined.
pub fn take_residues(terms: &[PeriodTerm], n: usize, curve: &CurveDatum) -> Result<Vec<PeriodTerm>, GroupZetaError> {
    let mut cur = terms.to_vec();
    for j in (0..n.saturating_sub(2)).rev() {
        cur = residue_step(&cur, j, n - 1, curve)?;
    }
    Ok(cur)
}

/// The least common multiple, as a formal product, of the zeta factors
/// occurring with negative exponent.
pub fn zeta_denominator_lcm(terms: &[PeriodTerm]) -> BTreeMap<AffineForm, u32> {
    let mut lcm: BTreeMap<AffineForm, u32> = BTreeMap::new();
    for t in terms {
        for (f, e) in t.zeta_map() {
            if e < 0 {
                let slot = lcm.entry(f).or_insert(0);
                *slot = (*slot).max(e.unsigned_abs());
            }
        }
    }
    lcm
}

/// Multiplies every term by [`zeta_denominator_lcm`].
pub fn clear_zeta_denominators(terms: &[PeriodTerm]) -> Vec<PeriodTerm> {
    let lcm = zeta_denominator_lcm(terms);
    terms
        .iter()
        .map(|t| {
            let merged = merge(
                t.zeta_map()
                    .into_iter()
                    .chain(lcm.iter().map(|(f, &e)| (f.clone(), e as i32))),
            );
            PeriodTerm {
                weyl: t.weyl.clone(),
                rat_part: t.rat_part.clone(),
                zeta_factors: merged.into_iter().collect(),
            }
        })
        .collect()
}

/// Sum of the terms with `ζ̂(a s + b) ↦ Z(q^{-b} t^a)`, `t = q^{-s}`,
/// `s = s_{n-1}`.
pub fn substitute_concrete_zeta(
    terms: &[PeriodTerm],
    n: usize,
    curve: &CurveDatum,
) -> Result<RationalFunction, GroupZetaError> {
    let last = n - 2;
    let xs = Var::x(last as u16 + 1);
    let t = RationalFunction::var(Var::T_SMALL);
    let mut total = RationalFunction::zero();
    for term in terms {
        if term.rat_part.variables().iter().any(|v| v.name().starts_with('x') && *v != xs) {
            return Err(GroupZetaError::ResidualVariable(term.to_string()));
        }
        let mut value = term.rat_part.substitute(xs, &t)?;
        for (f, e) in term.zeta_map() {
            if (0..f.coeffs.len()).any(|j| j != last && f.involves(j)) {
                return Err(GroupZetaError::ResidualVariable(f.to_string()));
            }
            let z = concrete_zeta(curve, &f)?.substitute(xs, &t)?;
            value = &value * &z.pow(e)?;
        }
        total = &total + &value;
    }
    if curve.q().as_constant().is_some() {
        total = total.substitute(Var::Q, curve.q())?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn int(c: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(c))
    }

    fn p(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    fn form(c: i64, co: &[i64]) -> AffineForm {
        AffineForm {
            constant: int(c),
            coeffs: co.iter().map(|&a| int(a)).collect(),
        }
    }

    #[test]
    fn sl2_period_terms() {
        let terms = build_period(2).unwrap();
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0].rat_part, p("1/(1-x1)"));
        assert!(terms[0].zeta_factors.is_empty());
        assert_eq!(terms[1].rat_part, p("1/(1-q^2*x1^(-1))"));
        assert_eq!(terms[1].zeta_map(), [(form(1, &[1]), 1), (form(2, &[1]), -1)].into_iter().collect());
    }

    #[test]
    fn term_counts() {
        for n in 2..=4 {
            let roots = RootSystemA::new(n).unwrap();
            let terms = build_period(n).unwrap();
            assert_eq!(terms.len(), (1..=n).product::<usize>());
            for t in &terms {
                let w = t.weyl.as_ref().unwrap();
                assert_eq!(t.zeta_factors.len(), 2 * w.inversion_set(&roots).len());
            }
        }
    }

    #[test]
    fn zeta_forms_come_from_pairings() {
        let terms = build_period(3).unwrap();
        let longest = terms.last().unwrap();
        let forms: Vec<String> = longest.zeta_factors.iter().map(|(f, e)| format!("{f}:{e}")).collect();
        assert_eq!(forms, ["1+s2:1", "1+s1:1", "2+s2:-1", "2+s1:-1", "2+s1+s2:1", "3+s1+s2:-1"]);
    }

    #[test]
    fn rational_residue_example() {
        let f = p("1/((x1-1)*(x1-q))");
        let r = f.residue(Var::x(1), &RationalFunction::one()).unwrap();
        assert_eq!(r, p("1/(1-q)"));
    }

    #[test]
    fn clearing() {
        let terms = build_period(2).unwrap();
        let once = clear_zeta_denominators(&terms);
        assert_eq!(once[0].zeta_map(), [(form(2, &[1]), 1)].into_iter().collect());
        assert_eq!(once[1].zeta_map(), [(form(1, &[1]), 1)].into_iter().collect());
        assert_eq!(once[0].rat_part, terms[0].rat_part);
        let twice = clear_zeta_denominators(&once);
        assert_eq!(
            twice.iter().map(PeriodTerm::zeta_map).collect::<Vec<_>>(),
            once.iter().map(PeriodTerm::zeta_map).collect::<Vec<_>>()
        );
        assert!(zeta_denominator_lcm(&once).is_empty());
        for n in 3..=4 {
            let terms = build_period(n).unwrap();
            let once = clear_zeta_denominators(&terms);
            assert!(zeta_denominator_lcm(&once).is_empty());
            let twice = clear_zeta_denominators(&once);
            assert_eq!(
                twice.iter().map(PeriodTerm::zeta_map).collect::<Vec<_>>(),
                once.iter().map(PeriodTerm::zeta_map).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn concrete_substitution() {
        let e = CurveDatum::symbolic_elliptic();
        let z = artin_zeta_ratfunc(&e);
        let tt = |s: &str| z.substitute(Var::T_SMALL, &p(s)).unwrap();
        assert_eq!(concrete_zeta(&e, &form(0, &[2])).unwrap(), tt("x1^2"));
        assert_eq!(concrete_zeta(&e, &form(-1, &[2])).unwrap(), tt("q*x1^2"));
        assert_eq!(concrete_zeta(&e, &form(2, &[0])).unwrap(), zeta_value(&e, 2));
        assert_eq!(concrete_zeta(&e, &form(1, &[0])).unwrap(), p("N/(q-1)"));
        assert_eq!(concrete_zeta(&e, &form(-1, &[0])).unwrap(), zeta_value(&e, 2));
        assert!(concrete_zeta(&e, &form(0, &[0])).is_err());
        let half = AffineForm {
            constant: int(0),
            coeffs: vec![BigRational::new(1.into(), 2.into())],
        };
        assert!(matches!(concrete_zeta(&e, &half), Err(GroupZetaError::NonIntegralForm(_))));
    }

    #[test]
    fn sl3_residues_are_simple() {
        let e = CurveDatum::symbolic_elliptic();
        let res = take_residues(&build_period(3).unwrap(), 3, &e).unwrap();
        assert_eq!(res.len(), 5);
        let lcm = zeta_denominator_lcm(&res);
        let names: Vec<String> = lcm.keys().map(|f| f.to_string()).collect();
        assert_eq!(names, ["2", "3+s2"]);
        assert!(res.iter().all(|t| !t.rat_part.involves(Var::x(1))));
    }

    #[test]
    fn form_display() {
        assert_eq!(form(2, &[1, 0]).to_string(), "2+s1");
        assert_eq!(form(0, &[0, -2]).to_string(), "-2s2");
        assert_eq!(form(3, &[0, 0]).to_string(), "3");
        assert_eq!(form(-1, &[1, 1]).to_string(), "-1+s1+s2");
    }
}
