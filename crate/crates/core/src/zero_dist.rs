//! Zero-angle statistics for a fixed curve `y² = x³ + ax + b` reduced modulo
//! varying primes: point counts, Sato-Tate angles, the rank-`r` angles of the
//! pure zetas and their histograms.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::io::{Read, Write};

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::artin::is_prime;
use crate::pure_zeta::{PureZetaError, SymbolicMasses};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZeroDistError {
    #[error("p = {0} is below 5")]
    PrimeTooSmall(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("y^2 = x^3 + {a}x + {b} is singular modulo {p}")]
    Singular { p: u64, a: i64, b: i64 },
    #[error("line {line}: malformed row: {msg}")]
    Malformed { line: u64, msg: String },
    #[error("line {line}: a_p = {ap} violates the Hasse bound at p = {p}")]
    HasseViolation { line: u64, p: u64, ap: i64 },
    #[error("line {line}: duplicate prime {p}")]
    DuplicatePrime { line: u64, p: u64 },
    #[error("i/o: {0}")]
    Io(String),
    #[error("rank {0} has no zero angle")]
    BadRank(u32),
    #[error(transparent)]
    PureZeta(#[from] PureZetaError),
}

/// Squares table: `chi[x] = χ(x)` for the quadratic character mod `p`.
fn character_table(p: u64) -> Vec<i8> {
    let mut chi = vec![-1i8; p as usize];
    chi[0] = 0;
    for y in 1..=p / 2 {
        chi[((y * y) % p) as usize] = 1;
    }
    chi
}

fn check_curve(p: u64, a: i64, b: i64) -> Result<(u64, u64), ZeroDistError> {
    if p < 5 {
        return Err(ZeroDistError::PrimeTooSmall(p));
    }
    if !is_prime(p) {
        return Err(ZeroDistError::NotPrime(p));
    }
    let ar = a.rem_euclid(p as i64) as u64;
    let br = b.rem_euclid(p as i64) as u64;
    if discriminant_mod(p, ar, br) == 0 {
        return Err(ZeroDistError::Singular { p, a, b });
    }
    Ok((ar, br))
}

/// `4a³ + 27b² mod p`.
fn discriminant_mod(p: u64, a: u64, b: u64) -> u64 {
    let m = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    (m(4, m(a, m(a, a))) + m(27, m(b, b))) % p
}

/// `4a³ + 27b² = 0`: singular over ℚ, hence modulo every prime.
pub fn globally_singular(a: i64, b: i64) -> bool {
    let (a, b) = (a as i128, b as i128);
    4 * a * a * a + 27 * b * b == 0
}

/// `N = p + 1 + Σ_x χ(x³ + ax + b)`.
pub fn count_points(p: u64, a: i64, b: i64) -> Result<u64, ZeroDistError> {
    let (a, b) = check_curve(p, a, b)?;
    let chi = character_table(p);
    let m = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut sum: i64 = 0;
    for x in 0..p {
        let f = (m(x, m(x, x)) + m(a, x) + b) % p;
        sum += chi[f as usize] as i64;
    }
    Ok((p as i64 + 1 + sum) as u64)
}

/// `(p + 1 - N)² ≤ 4p`.
pub fn satisfies_hasse(p: u64, n: u64) -> bool {
    let ap = p as i128 + 1 - n as i128;
    ap * ap <= 4 * p as i128
}

/// One prime of the family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleSample {
    pub p: u64,
    pub n: u64,
    /// Sato-Tate angle `θ_p`.
    pub theta: f64,
    /// `θ_{r,p}` per rank.
    pub theta_r: BTreeMap<u32, f64>,
}

/// A sample whose rank-`r` zeros are real, with the exact discriminant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhViolation {
    pub p: u64,
    pub n: u64,
    pub r: u32,
    pub discriminant: String,
}

/// `θ_p` and `θ_{r,p}` for each rank, `Q = p^r`.
pub fn angles(
    masses: &SymbolicMasses,
    p: u64,
    n: u64,
    ranks: &[u32],
) -> Result<Result<AngleSample, RhViolation>, ZeroDistError> {
    if !satisfies_hasse(p, n) {
        return Err(ZeroDistError::HasseViolation {
            line: 0,
            p,
            ap: p as i64 + 1 - n as i64,
        });
    }
    let theta = ((p as f64 + 1.0 - n as f64) / (2.0 * (p as f64).sqrt())).clamp(-1.0, 1.0).acos();
    let mut theta_r = BTreeMap::new();
    for &r in ranks {
        if r < 2 {
            return Err(ZeroDistError::BadRank(r));
        }
        let pt = masses.point(r, p, n)?;
        if pt.cos_squared() >= num_rational::BigRational::one() {
            return Ok(Err(RhViolation {
                p,
                n,
                r,
                discriminant: pt.discriminant().to_string(),
            }));
        }
        theta_r.insert(r, pt.zero_angle()?);
    }
    Ok(Ok(AngleSample { p, n, theta, theta_r }))
}

/// Primes up to `max` by the sieve of Eratosthenes.
pub fn primes_up_to(max: u64) -> Vec<u64> {
    if max < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; max as usize + 1];
    let mut out = Vec::new();
    for i in 2..=max as usize {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= max as usize {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Primes `5 ≤ p ≤ x_max` of good reduction for `(a, b)`.
pub fn good_primes(a: i64, b: i64, x_max: u64) -> Vec<u64> {
    primes_up_to(x_max)
        .into_iter()
        .filter(|&p| p >= 5 && check_curve(p, a, b).is_ok())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutput {
    pub samples: Vec<AngleSample>,
    pub violations: Vec<RhViolation>,
}

/// Angles for every pair `(p, N)`, in the given order.
pub fn samples_from_counts(
    masses: &SymbolicMasses,
    counts: &[(u64, u64)],
    ranks: &[u32],
) -> Result<SweepOutput, ZeroDistError> {
    let results: Vec<Result<AngleSample, RhViolation>> = counts
        .par_iter()
        .map(|&(p, n)| angles(masses, p, n, ranks))
        .collect::<Result<_, _>>()?;
    let mut out = SweepOutput {
        samples: Vec::new(),
        violations: Vec::new(),
    };
    for r in results {
        match r {
            Ok(s) => out.samples.push(s),
            Err(v) => out.violations.push(v),
        }
    }
    Ok(out)
}

/// Point counts and angles for every good prime `p ≤ x_max`, in prime order.
pub fn sweep(masses: &SymbolicMasses, a: i64, b: i64, x_max: u64, ranks: &[u32]) -> Result<SweepOutput, ZeroDistError> {
    let counts: Vec<(u64, u64)> = good_primes(a, b, x_max)
        .into_par_iter()
        .map(|p| count_points(p, a, b).map(|n| (p, n)))
        .collect::<Result<_, _>>()?;
    samples_from_counts(masses, &counts, ranks)
}

/// The limit of `θ_{r,p}`: `π/3` for `r = 2`, `π/2` for `r ≥ 3`.
pub fn dirac_limit(r: u32) -> Option<f64> {
    match r {
        2 => Some(PI / 3.0),
        r if r >= 3 => Some(PI / 2.0),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
    pub empirical_density: f64,
    /// Bin average of `(2/π) sin²θ`.
    pub sato_tate_density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleHistogram {
    /// `1` for the Sato-Tate angle, `r ≥ 2` for `θ_{r,p}`.
    pub rank: u32,
    pub bins: Vec<HistogramBin>,
    pub samples: u64,
    pub mean: f64,
    pub limit: Option<f64>,
    pub dirac_markers: Vec<f64>,
    pub p0: u64,
    /// `max_{p ≥ p0} √p·|θ - limit|`.
    pub scaled_sup: Option<f64>,
}

fn sato_tate_mass(x: f64) -> f64 {
    (x - x.sin() * x.cos()) / PI
}

fn angle_of(s: &AngleSample, rank: u32) -> Option<f64> {
    if rank == 1 {
        Some(s.theta)
    } else {
        s.theta_r.get(&rank).copied()
    }
}

/// Equal bins on `[0, π]`; the last bin is closed.
pub fn histogram(samples: &[AngleSample], rank: u32, bins: usize, p0: u64) -> AngleHistogram {
    assert!(bins >= 1, "at least one bin");
    let width = PI / bins as f64;
    let mut counts = vec![0u64; bins];
    let mut sum = 0.0;
    let mut total = 0u64;
    let limit = dirac_limit(rank);
    let mut sup: Option<f64> = None;
    for s in samples {
        let Some(th) = angle_of(s, rank) else { continue };
        let i = ((th / width) as usize).min(bins - 1);
        counts[i] += 1;
        sum += th;
        total += 1;
        if let Some(l) = limit {
            if s.p >= p0 {
                let v = (s.p as f64).sqrt() * (th - l).abs();
                sup = Some(sup.map_or(v, |m: f64| m.max(v)));
            }
        }
    }
    let bins = counts
        .iter()
        .enumerate()
        .map(|(i, &count)| {
            let lo = i as f64 * width;
            let hi = if i + 1 == bins { PI } else { (i + 1) as f64 * width };
            HistogramBin {
                lo,
                hi,
                count,
                empirical_density: if total == 0 { 0.0 } else { count as f64 / (total as f64 * width) },
                sato_tate_density: (sato_tate_mass(hi) - sato_tate_mass(lo)) / width,
            }
        })
        .collect();
    AngleHistogram {
        rank,
        bins,
        samples: total,
        mean: if total == 0 { f64::NAN } else { sum / total as f64 },
        limit,
        dirac_markers: vec![PI / 3.0, PI / 2.0],
        p0,
        scaled_sup: sup,
    }
}

/// Reads a CSV with header `p,ap` into pairs `(p, N = p + 1 - a_p)`.
pub fn ingest_ap_table<R: Read>(reader: R) -> Result<Vec<(u64, u64)>, ZeroDistError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers().map_err(|e| ZeroDistError::Malformed { line: 1, msg: e.to_string() })?;
    if headers.is_empty() {
        return Ok(Vec::new());
    }
    if headers != vec!["p", "ap"] {
        return Err(ZeroDistError::Malformed {
            line: 1,
            msg: format!("expected header p,ap, found {}", headers.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| ZeroDistError::Malformed {
            line: e.position().map_or(0, |p| p.line()),
            msg: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let bad = |msg: String| ZeroDistError::Malformed { line, msg };
        if rec.len() != 2 {
            return Err(bad(format!("expected 2 fields, found {}", rec.len())));
        }
        let p: u64 = rec[0].parse().map_err(|_| bad(format!("p = {:?} is not an integer", &rec[0])))?;
        let ap: i64 = rec[1].parse().map_err(|_| bad(format!("ap = {:?} is not an integer", &rec[1])))?;
        if !is_prime(p) {
            return Err(bad(format!("{p} is not prime")));
        }
        if (ap as i128) * (ap as i128) > 4 * p as i128 {
            return Err(ZeroDistError::HasseViolation { line, p, ap });
        }
        if !seen.insert(p) {
            return Err(ZeroDistError::DuplicatePrime { line, p });
        }
        out.push((p, (p as i64 + 1 - ap) as u64));
    }
    Ok(out)
}

/// `x` with 17 significant digits in positional notation.
pub fn sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    let decimals = (16 - e).clamp(0, 340) as usize;
    format!("{x:.decimals$}")
}

fn io<E: std::fmt::Display>(e: E) -> ZeroDistError {
    ZeroDistError::Io(e.to_string())
}

/// `bin_lo,bin_hi,count,empirical_density,sato_tate_density`.
pub fn write_histogram_csv<W: Write>(mut w: W, h: &AngleHistogram) -> Result<(), ZeroDistError> {
    writeln!(w, "bin_lo,bin_hi,count,empirical_density,sato_tate_density").map_err(io)?;
    for b in &h.bins {
        writeln!(
            w,
            "{},{},{},{},{}",
            sig17(b.lo),
            sig17(b.hi),
            b.count,
            sig17(b.empirical_density),
            sig17(b.sato_tate_density)
        )
        .map_err(io)?;
    }
    Ok(())
}

/// `p,N,theta,theta2,theta3,…` with one column per rank.
pub fn write_samples_csv<W: Write>(mut w: W, samples: &[AngleSample], ranks: &[u32]) -> Result<(), ZeroDistError> {
    let mut header = String::from("p,N,theta");
    for r in ranks {
        header.push_str(&format!(",theta{r}"));
    }
    writeln!(w, "{header}").map_err(io)?;
    for s in samples {
        let mut row = format!("{},{},{}", s.p, s.n, sig17(s.theta));
        for r in ranks {
            row.push(',');
            row.push_str(&s.theta_r.get(r).map_or(String::new(), |&t| sig17(t)));
        }
        writeln!(w, "{row}").map_err(io)?;
    }
    Ok(())
}

/// `a_p = p + 1 - N`.
pub fn trace_of_frobenius(p: u64, n: u64) -> i64 {
    p as i64 + 1 - n as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_force(p: u64, a: i64, b: i64) -> u64 {
        let a = a.rem_euclid(p as i64) as u64;
        let b = b.rem_euclid(p as i64) as u64;
        let mut n = 1;
        for x in 0..p {
            let f = (x * x % p * x + a * x + b) % p;
            for y in 0..p {
                if y * y % p == f {
                    n += 1;
                }
            }
        }
        n
    }

    fn euler_chi(x: u64, p: u64) -> i64 {
        if x % p == 0 {
            return 0;
        }
        let mut r = 1u128;
        let mut base = (x % p) as u128;
        let mut e = (p - 1) / 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % p as u128;
            }
            base = base * base % p as u128;
            e >>= 1;
        }
        if r == 1 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn point_count_examples() {
        assert_eq!(count_points(5, 1, 1).unwrap(), 9);
        assert_eq!(count_points(7, 1, 1).unwrap(), 5);
        assert_eq!(count_points(5, 0, 1).unwrap(), 6);
    }

    #[test]
    fn point_count_errors() {
        assert_eq!(count_points(3, 1, 1), Err(ZeroDistError::PrimeTooSmall(3)));
        assert_eq!(count_points(9, 1, 1), Err(ZeroDistError::NotPrime(9)));
        assert_eq!(count_points(31, 1, 1), Err(ZeroDistError::Singular { p: 31, a: 1, b: 1 }));
        assert!(matches!(count_points(7, 0, 0), Err(ZeroDistError::Singular { .. })));
    }

    #[test]
    fn squares_table_matches_euler() {
        for p in [5u64, 7, 11, 101, 1009] {
            let chi = character_table(p);
            for x in 0..p {
                assert_eq!(chi[x as usize] as i64, euler_chi(x, p));
            }
        }
    }

    #[test]
    fn brute_force_agreement() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let primes: Vec<u64> = primes_up_to(300).into_iter().filter(|&p| p >= 5).collect();
        for _ in 0..40 {
            let p = primes[rng.gen_range(0..primes.len())];
            let (a, b) = (rng.gen_range(-50..50), rng.gen_range(-50..50));
            if let Ok(n) = count_points(p, a, b) {
                assert_eq!(n, brute_force(p, a, b), "p={p} a={a} b={b}");
                assert!(satisfies_hasse(p, n));
            }
        }
    }

    #[test]
    fn rank_two_angle_example() {
        let m = SymbolicMasses::new(3).unwrap();
        let s = angles(&m, 5, 9, &[2, 3]).unwrap().unwrap();
        assert!((s.theta_r[&2] - 0.7f64.acos()).abs() < 1e-14);
        let st = angles(&m, 7, 8, &[]).unwrap().unwrap();
        assert!((st.theta - PI / 2.0).abs() < 1e-15);
        assert!(angles(&m, 7, 20, &[2]).is_err());
        assert!(matches!(angles(&m, 7, 8, &[1]), Err(ZeroDistError::BadRank(1))));
    }

    #[test]
    fn small_sweep() {
        let m = SymbolicMasses::new(3).unwrap();
        let out = sweep(&m, 1, 1, 10, &[2, 3]).unwrap();
        let ps: Vec<u64> = out.samples.iter().map(|s| s.p).collect();
        assert_eq!(ps, [5, 7]);
        assert!(out.violations.is_empty());
        let good = good_primes(1, 1, 100);
        assert_eq!(good.len(), primes_up_to(100).len() - 2 - 1);
    }

    #[test]
    fn histogram_counts() {
        let m = SymbolicMasses::new(3).unwrap();
        let out = sweep(&m, 1, 1, 2000, &[2, 3]).unwrap();
        let h = histogram(&out.samples, 2, 12, 0);
        assert_eq!(h.bins.iter().map(|b| b.count).sum::<u64>(), out.samples.len() as u64);
        let mut rev = out.samples.clone();
        rev.reverse();
        let h2 = histogram(&rev, 2, 12, 0);
        assert_eq!(
            h.bins.iter().map(|b| b.count).collect::<Vec<_>>(),
            h2.bins.iter().map(|b| b.count).collect::<Vec<_>>()
        );
        let st_total: f64 = h.bins.iter().map(|b| b.sato_tate_density * (b.hi - b.lo)).sum();
        assert!((st_total - 1.0).abs() < 1e-12);
        let emp_total: f64 = h.bins.iter().map(|b| b.empirical_density * (b.hi - b.lo)).sum();
        assert!((emp_total - 1.0).abs() < 1e-12);
        assert!((h.mean - PI / 3.0).abs() < 0.05);
        assert!(h.scaled_sup.unwrap() < 3.0);
        assert!(histogram(&out.samples, 1, 4, 0).scaled_sup.is_none());
    }

    #[test]
    fn ingestion() {
        let rows = ingest_ap_table("p,ap\n5,-3\n7,3\n".as_bytes()).unwrap();
        assert_eq!(rows, [(5, 9), (7, 5)]);
        assert_eq!(rows[0].1, count_points(5, 1, 1).unwrap());
        assert!(matches!(
            ingest_ap_table("p,ap\n7,10\n".as_bytes()),
            Err(ZeroDistError::HasseViolation { line: 2, p: 7, ap: 10 })
        ));
        assert!(ingest_ap_table("".as_bytes()).unwrap().is_empty());
        assert!(matches!(
            ingest_ap_table("p,ap\n5,1\n5,2\n".as_bytes()),
            Err(ZeroDistError::DuplicatePrime { line: 3, p: 5 })
        ));
        assert!(matches!(
            ingest_ap_table("p,ap\n5,x\n".as_bytes()),
            Err(ZeroDistError::Malformed { line: 2, .. })
        ));
        assert!(matches!(
            ingest_ap_table("q,ap\n5,1\n".as_bytes()),
            Err(ZeroDistError::Malformed { line: 1, .. })
        ));
    }

    #[test]
    fn csv_output() {
        let m = SymbolicMasses::new(3).unwrap();
        let out = sweep(&m, 1, 1, 10, &[2, 3]).unwrap();
        let mut buf = Vec::new();
        write_samples_csv(&mut buf, &out.samples, &[2, 3]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("p,N,theta,theta2,theta3\n5,9,"));
        let h = histogram(&out.samples, 2, 3, 0);
        let mut buf = Vec::new();
        write_histogram_csv(&mut buf, &h).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert_eq!(sig17(PI), "3.1415926535897931");
        assert_eq!(sig17(0.7).parse::<f64>().unwrap(), 0.7);
    }

    #[test]
    fn global_singularity() {
        assert!(globally_singular(0, 0));
        assert!(globally_singular(-3, 2));
        assert!(!globally_singular(1, 1));
    }

    #[test]
    fn traces() {
        assert_eq!(trace_of_frobenius(5, 9), -3);
        assert_eq!(trace_of_frobenius(7, 5), 3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn counts_respect_hasse(i in 2usize..200, a in -100i64..100, b in -100i64..100) {
            let primes = primes_up_to(1300);
            let p = primes[i];
            if let Ok(n) = count_points(p, a, b) {
                let ap = trace_of_frobenius(p, n);
                prop_assert!(ap * ap <= 4 * p as i64);
            }
        }

        #[test]
        fn histogram_ignores_sample_order(seed in any::<u64>(), bins in 1usize..40) {
            let m = SymbolicMasses::new(3).unwrap();
            let out = sweep(&m, 1, 1, 400, &[2, 3]).unwrap();
            let mut shuffled = out.samples.clone();
            shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            for rank in [1, 2, 3] {
                let h = histogram(&out.samples, rank, bins, 0);
                let g = histogram(&shuffled, rank, bins, 0);
                let counts = |h: &AngleHistogram| h.bins.iter().map(|b| b.count).collect::<Vec<_>>();
                prop_assert_eq!(counts(&h), counts(&g));
                prop_assert_eq!(counts(&h).iter().sum::<u64>(), out.samples.len() as u64);
                prop_assert!((h.mean - g.mean).abs() < 1e-12);
            }
        }
    }
}
