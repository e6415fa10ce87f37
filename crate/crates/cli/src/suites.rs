//! Verification suites. Each suite turns library verdicts into records;
//! library errors become fail records carrying the error text.

use std::str::FromStr;

use zetaforge::algebra::RationalFunction;
use zetaforge::artin::{zeta_value, CurveDatum};
use zetaforge::bundle::{beta, verify_counting_miracle, verify_ir_miracle, IdentityVerdict, MassTable};
use zetaforge::group_zeta::{period_match, sl2_closed, sl3_closed, sl3_factor_check, uniformity_check};
use zetaforge::pure_zeta::{
    asymptotic_table, build_pure_zeta, funceq_check, rationality_check, rh_sweep, SymbolicMasses,
};
use zetaforge::zero_dist::{self, dirac_limit, sig17, AngleSample};

use crate::config::RunConfig;
use crate::record::{Status, SuiteResult, VerificationRecord as Rec};

/// Suites reachable through `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Rh,
    CountingMiracle,
    IrMiracle,
    Funceq,
    Uniformity,
    Sl3Factor,
    PeriodMatch,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Rh => "rh",
            Suite::CountingMiracle => "counting-miracle",
            Suite::IrMiracle => "ir-miracle",
            Suite::Funceq => "funceq",
            Suite::Uniformity => "uniformity",
            Suite::Sl3Factor => "sl3-factor",
            Suite::PeriodMatch => "period-match",
        }
    }

    /// Runs the suite; `detail` emits one record per sweep row where the
    /// suite has rows.
    pub fn run(self, cfg: &RunConfig, detail: bool) -> SuiteResult {
        let records = match self {
            Suite::Rh => rh(cfg, detail),
            Suite::CountingMiracle => counting_miracle(cfg),
            Suite::IrMiracle => ir_miracle(cfg),
            Suite::Funceq => funceq(cfg),
            Suite::Uniformity => uniformity(),
            Suite::Sl3Factor => sl3_factor(),
            Suite::PeriodMatch => period(cfg),
        };
        SuiteResult::new(self.name(), records)
    }
}

fn p(s: &str) -> RationalFunction {
    RationalFunction::from_str(s).expect("well-formed literal")
}

fn error_record(check: &str, e: impl std::fmt::Display) -> Rec {
    Rec::new(check, Status::Fail, format!("error: {e}"))
}

/// Equality record; the witness is the value on success and `lhs - rhs`
/// on failure.
fn equality(check: &str, lhs: &RationalFunction, rhs: &RationalFunction) -> Rec {
    let diff = (lhs - rhs).reduced();
    if diff.is_zero() {
        Rec::new(check, Status::Pass, lhs.to_string())
    } else {
        Rec::new(check, Status::Fail, diff.to_string())
    }
}

fn identity(check: &str, v: &IdentityVerdict, value: &RationalFunction) -> Rec {
    if v.pass {
        Rec::new(check, Status::Pass, value.to_string())
    } else {
        Rec::new(check, Status::Fail, v.difference.to_string())
    }
}

fn flag(check: &str, ok: bool, witness: impl Into<String>) -> Rec {
    let w = witness.into();
    let w = if !ok && w.is_empty() { "false".to_string() } else { w };
    Rec::new(check, Status::from_bool(ok), w)
}

pub fn counting_miracle(cfg: &RunConfig) -> Vec<Rec> {
    let e = CurveDatum::symbolic_elliptic();
    let table = match MassTable::new(&e, cfg.max_rank) {
        Ok(t) => t,
        Err(err) => return vec![error_record("counting-miracle", err)],
    };
    match verify_counting_miracle(&e, cfg.max_rank) {
        Ok(vs) => vs
            .iter()
            .map(|v| identity("counting-miracle", v, &table.alpha[v.index as usize]).param("r", v.index))
            .collect(),
        Err(err) => vec![error_record("counting-miracle", err)],
    }
}

pub fn ir_miracle(cfg: &RunConfig) -> Vec<Rec> {
    let rep = verify_ir_miracle(cfg.max_n);
    let masses: Vec<RationalFunction> = (0..=cfg.max_n + 1).map(zetaforge::bundle::unipotent_mass).collect();
    let mut out: Vec<Rec> = rep
        .shift
        .iter()
        .map(|v| identity("ir-miracle", v, &masses[v.index as usize]).param("n", v.index))
        .collect();
    out.extend(
        rep.closed_form
            .iter()
            .map(|v| identity("ir-closed-form", v, &masses[v.index as usize]).param("m", v.index)),
    );
    out
}

pub fn funceq(cfg: &RunConfig) -> Vec<Rec> {
    let e = CurveDatum::symbolic_elliptic();
    let table = match MassTable::new(&e, cfg.max_rank) {
        Ok(t) => t,
        Err(err) => return vec![error_record("funceq", err)],
    };
    let mut out = Vec::new();
    for r in 1..=cfg.max_rank {
        let z = match build_pure_zeta(r, &e, &table) {
            Ok(z) => z,
            Err(err) => {
                out.push(error_record("funceq", err).param("r", r));
                continue;
            }
        };
        let v = funceq_check(&z, e.q());
        out.push(flag("rationality", rationality_check(&z), z.polynomial().to_string()).param("r", r));
        out.push(flag("palindromy", v.palindromic, "").param("r", r));
        out.push(flag("funceq", v.substitution, "").param("r", r));
    }
    out
}

pub fn uniformity() -> Vec<Rec> {
    let e = CurveDatum::symbolic_elliptic();
    let table = match MassTable::new(&e, 3) {
        Ok(t) => t,
        Err(err) => return vec![error_record("uniformity", err)],
    };
    (2..=3u32)
        .map(|r| {
            let run = || -> Result<Rec, String> {
                let z = build_pure_zeta(r, &e, &table).map_err(|e| e.to_string())?;
                let v = uniformity_check(&z, &e).map_err(|e| e.to_string())?;
                if v.pass {
                    return Ok(Rec::new("uniformity", Status::Pass, ""));
                }
                let group = if r == 2 { sl2_closed(&e) } else { sl3_closed(&e) }.map_err(|e| e.to_string())?;
                let diff = (&z.in_t_big() - &(&zeta_value(&e, 1) * &group.in_t_big)).reduced();
                Ok(Rec::new("uniformity", Status::Fail, diff.to_string()))
            };
            run().unwrap_or_else(|err| error_record("uniformity", err)).param("r", r)
        })
        .collect()
}

pub fn sl3_factor() -> Vec<Rec> {
    let e = CurveDatum::symbolic_elliptic();
    match sl3_factor_check(&e) {
        Ok((_, rep)) => vec![
            flag("sl3-vanishes-at-inverse-q", rep.vanishes_at_inverse_q, ""),
            flag("sl3-division-remainder-zero", rep.remainder_zero, ""),
            flag("sl3-quotient", rep.quotient_matches, rep.quotient.clone()),
            flag("sl3-display-expansion", rep.display_matches_closed_form, ""),
            flag("sl3-alternative-expansion", rep.alternative_matches, ""),
        ],
        Err(err) => vec![error_record("sl3-factor", err)],
    }
}

pub fn period(cfg: &RunConfig) -> Vec<Rec> {
    let e = CurveDatum::symbolic_elliptic();
    let mut out = Vec::new();
    for &n in &cfg.group_n {
        match period_match(n, &e) {
            Ok(row) => {
                let json = serde_json::to_string(&row).expect("row serializes");
                let status = match (n, row.pass()) {
                    (2 | 3, ok) => Status::from_bool(ok),
                    _ => Status::ReportOnly,
                };
                out.push(Rec::new("period-match", status, json).param("n", n));
                let uni = if n <= 3 { Status::from_bool(row.uniformity_with_zeta_one) } else { Status::ReportOnly };
                out.push(Rec::new("period-uniformity", uni, row.uniformity_with_zeta_one.to_string()).param("n", n));
            }
            Err(err) => out.push(error_record("period-match", err).param("n", n)),
        }
    }
    out
}

pub fn rh(cfg: &RunConfig, detail: bool) -> Vec<Rec> {
    let masses = match SymbolicMasses::new(cfg.max_rank) {
        Ok(m) => m,
        Err(err) => return vec![error_record("rh", err)],
    };
    let report = match rh_sweep(&masses, cfg.max_rank, cfg.max_q) {
        Ok(r) => r,
        Err(err) => return vec![error_record("rh", err)],
    };
    let mut out = Vec::new();
    for row in &report.rows {
        let keep_rh = detail || !row.rh;
        let keep_bounds = detail || !row.pass();
        let point = |r: Rec| r.param("q", row.q).param("N", row.n).param("r", row.r);
        if keep_rh {
            out.push(point(flag("rh", row.rh, row.discriminant.clone())));
        }
        if keep_bounds {
            let ok = row.bounds.lower && row.bounds.upper && row.bounds.equivalent_to_rh;
            out.push(point(flag("ratio-bounds", ok, row.bounds.a.clone())));
        }
    }
    for r in 2..=cfg.max_rank {
        let rows: Vec<_> = report.rows.iter().filter(|x| x.r == r).collect();
        let bad_rh = rows.iter().filter(|x| !x.rh).count();
        let bad_bounds = rows.iter().filter(|x| !x.pass()).count();
        let sweep = |check: &str, bad: usize| {
            let status = Status::from_bool(bad == 0);
            Rec::new(check, status, format!("{} of {} curves", rows.len() - bad, rows.len()))
                .param("r", r)
                .param("max_q", cfg.max_q)
                .param("scope", "sweep")
        };
        out.push(sweep("rh", bad_rh));
        out.push(sweep("ratio-bounds", bad_bounds));
    }
    let bad2: Vec<_> = report.low_rank.iter().filter(|x| !x.delta2_factored).collect();
    let bad3: Vec<_> = report.low_rank.iter().filter(|x| !(x.delta3.first_positive && x.delta3.second_negative)).collect();
    let total = report.low_rank.len();
    for (check, bad) in [("delta2-factorization", &bad2), ("delta3-sign-pattern", &bad3)] {
        let witness = match bad.first() {
            None => format!("{total} of {total} curves"),
            Some(x) => format!("first failure at q={} N={}", x.q, x.n),
        };
        out.push(Rec::new(check, Status::from_bool(bad.is_empty()), witness).param("max_q", cfg.max_q));
    }
    match asymptotic_table(&[(2, 3), (3, 4), (4, 5)], 12) {
        Ok(rows) => out.extend(rows.into_iter().map(|a| {
            Rec::new("asymptotic", Status::ReportOnly, a.difference)
                .param("q", a.q)
                .param("N", a.n)
                .param("r", a.r)
        })),
        Err(err) => out.push(error_record("asymptotic", err)),
    }
    out
}

/// The closed forms of the low-rank masses and the `SL_2` display.
pub fn closed_forms() -> SuiteResult {
    let e = CurveDatum::symbolic_elliptic();
    let mut out = Vec::new();
    let table = MassTable::new(&e, 3);
    match (&table, beta(&e, 2, 0), beta(&e, 3, 0), beta(&e, 2, 1)) {
        (Ok(t), Ok(b2), Ok(b3), Ok(b21)) => {
            out.push(equality("beta-closed-form", &b2, &p("(N/(q-1))*(1+N/(q^2-1))")).param("r", 2u32).param("d", 0i64));
            out.push(
                equality("beta-closed-form", &b3, &p("(N/(q-1))*(1+(q+2)*N/(q^3-1)+N^2/((q^3-1)*(q^2-1)))"))
                    .param("r", 3u32)
                    .param("d", 0i64),
            );
            out.push(equality("beta-closed-form", &b21, &p("N/(q-1)")).param("r", 2u32).param("d", 1i64));
            out.push(equality("alpha-closed-form", &t.alpha[2], &p("N/(q-1)")).param("r", 2u32));
            out.push(equality("alpha-closed-form", &t.alpha[3], &b2).param("r", 3u32));
        }
        _ => out.push(error_record("closed-forms", "mass computation failed")),
    }
    match sl2_closed(&e) {
        Ok(g) => out.push(equality("sl2-display", &g.in_t_big, &p("(1+(N-2)*T+q^2*T^2)/((1-T)*(1-q^2*T))"))),
        Err(err) => out.push(error_record("sl2-display", err)),
    }
    SuiteResult::new("closed-forms", out)
}

/// Point-count examples and the concentration of the zero angles for the
/// configured curve, on primes `p ≥ primes-up-to / 10`.
pub fn zero_angles(cfg: &RunConfig) -> SuiteResult {
    let mut out = Vec::new();
    for (pr, a, b, n) in [(5u64, 1i64, 1i64, 9u64), (7, 1, 1, 5), (5, 0, 1, 6)] {
        let rec = match zero_dist::count_points(pr, a, b) {
            Ok(got) => flag("point-count", got == n, got.to_string()),
            Err(err) => error_record("point-count", err),
        };
        out.push(rec.param("p", pr).param("a", a).param("b", b));
    }
    let curve = format!("{},{}", cfg.curve.a, cfg.curve.b);
    let masses = match SymbolicMasses::new(cfg.ranks.iter().copied().max().unwrap_or(3)) {
        Ok(m) => m,
        Err(err) => {
            out.push(error_record("dirac-concentration", err));
            return SuiteResult::new("zero-angles", out);
        }
    };
    let sweep = match zero_dist::sweep(&masses, cfg.curve.a, cfg.curve.b, cfg.prime_bound, &cfg.ranks) {
        Ok(s) => s,
        Err(err) => {
            out.push(error_record("dirac-concentration", err).param("curve", curve));
            return SuiteResult::new("zero-angles", out);
        }
    };
    let hasse = sweep.samples.iter().all(|s| zero_dist::satisfies_hasse(s.p, s.n));
    out.push(
        flag("hasse", hasse, format!("{} primes", sweep.samples.len()))
            .param("curve", curve.clone())
            .param("primes_up_to", cfg.prime_bound),
    );
    let witness = sweep.violations.first().map_or(String::new(), |v| format!("p={} r={} Δ={}", v.p, v.r, v.discriminant));
    out.push(
        flag("angle-rh", sweep.violations.is_empty(), witness)
            .param("curve", curve.clone())
            .param("primes_up_to", cfg.prime_bound),
    );
    let p0 = (cfg.prime_bound / 10).max(5);
    let tail: Vec<AngleSample> = sweep.samples.into_iter().filter(|s| s.p >= p0).collect();
    for &r in &cfg.ranks {
        let Some(limit) = dirac_limit(r) else { continue };
        let h = zero_dist::histogram(&tail, r, cfg.bins, p0);
        let sup = h.scaled_sup.unwrap_or(f64::NAN);
        let params = |rec: Rec| {
            rec.param("curve", curve.clone())
                .param("r", r)
                .param("p_from", p0)
                .param("primes_up_to", cfg.prime_bound)
        };
        out.push(params(flag("dirac-concentration", sup <= 3.0, format!("max sqrt(p)|θ-limit| = {}", sig17(sup)))));
        let dev = (h.mean - limit).abs();
        out.push(params(flag("dirac-mean", dev <= 0.05, format!("mean = {}", sig17(h.mean)))));
    }
    SuiteResult::new("zero-angles", out)
}

/// Every suite at the configured bounds, in a fixed order.
pub fn all(cfg: &RunConfig) -> Vec<SuiteResult> {
    let mut suites = vec![closed_forms()];
    for s in [
        Suite::CountingMiracle,
        Suite::IrMiracle,
        Suite::Funceq,
        Suite::Uniformity,
        Suite::Sl3Factor,
        Suite::PeriodMatch,
        Suite::Rh,
    ] {
        suites.push(s.run(cfg, false));
    }
    suites.push(zero_angles(cfg));
    suites
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> RunConfig {
        RunConfig {
            max_rank: 3,
            max_q: 8,
            max_n: 3,
            prime_bound: 2000,
            ..RunConfig::default()
        }
    }

    #[test]
    fn closed_forms_pass() {
        let s = closed_forms();
        assert_eq!(s.count(Status::Pass), 6, "{s:?}");
    }

    #[test]
    fn small_suites_pass() {
        let cfg = small();
        for s in [Suite::CountingMiracle, Suite::IrMiracle, Suite::Funceq, Suite::Uniformity, Suite::Sl3Factor] {
            let r = s.run(&cfg, true);
            assert!(!r.failed(), "{r:?}");
            assert!(r.count(Status::Pass) > 0);
        }
        let cm = Suite::CountingMiracle.run(&cfg, false);
        assert_eq!(cm.records.len(), 2);
        let ir = Suite::IrMiracle.run(&cfg, false);
        assert_eq!(ir.records.len(), 3 + 4);
    }

    #[test]
    fn rh_detail_has_rows() {
        let cfg = small();
        let brief = Suite::Rh.run(&cfg, false);
        let full = Suite::Rh.run(&cfg, true);
        assert!(!brief.failed() && !full.failed());
        // q ∈ {2,3,4,5,7,8}: 5+7+9+9+11+11 curves, two ranks, two checks each.
        let rows = full.records.iter().filter(|r| r.params.contains_key("N") && r.check != "asymptotic").count();
        assert_eq!(rows, 52 * 2 * 2);
        assert_eq!(brief.records.iter().filter(|r| r.check == "asymptotic").count(), 33);
    }

    #[test]
    fn zero_angle_suite() {
        let s = zero_angles(&small());
        assert!(s.records.iter().filter(|r| r.check == "point-count").all(|r| r.status == Status::Pass));
        assert!(s.records.iter().any(|r| r.check == "dirac-concentration"));
    }
}
