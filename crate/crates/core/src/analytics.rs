//! GK dimension of periodic tuples, density of the attainable values, the
//! explicit finite-`m` growth inequalities, and exponent fits on growth tables.
//!
//! Integer inequalities are compared exactly; anything involving logarithms
//! goes through [`Interval`] and passes only on the certified side.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::interval::Interval;
use crate::monomials::{GrowthCounter, GrowthTable};
use crate::params::{ParameterTuple, TupleRule};
use crate::report::{Status, VerificationReport};
use crate::{Error, Result};

/// `μ = ∏ (p^{S_i}+p^{R_i}-1)`, `σ = Σ (S_i+2R_i)` over one period and `λ = σ ln p / ln μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GkReport {
    pub p: u32,
    pub period: Vec<(u32, u32)>,
    pub mu: BigUint,
    pub sigma: u64,
    pub lambda: Interval,
}

impl GkReport {
    /// `1 ≤ λ ≤ 3`, decided by comparing `p^σ` with `μ` and `μ³`.
    pub fn lambda_in_unit_to_three(&self) -> bool {
        let ps = BigUint::from(self.p).pow(self.sigma as u32);
        ps >= self.mu && ps <= self.mu.pow(3)
    }
}

impl fmt::Display for GkReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mu={} sigma={} lambda={:.10}", self.mu, self.sigma, self.lambda.mid())
    }
}

fn lambda_of(p: u32, period: &[(u32, u32)]) -> (BigUint, u64, Interval) {
    let pb = BigUint::from(p);
    let mut mu = BigUint::one();
    let mut sigma = 0u64;
    for &(s, r) in period {
        mu *= pb.pow(s) + pb.pow(r) - 1u32;
        sigma += s as u64 + 2 * r as u64;
    }
    let lambda = Interval::from_u64(sigma) * Interval::from_u64(p as u64).ln() / Interval::ln_big(&mu);
    (mu, sigma, lambda)
}

pub fn gk_periodic(tuple: &ParameterTuple) -> Result<GkReport> {
    let period = match tuple.rule() {
        TupleRule::Constant { s, r } => alloc::vec![(*s, *r)],
        TupleRule::Periodic(v) => v.clone(),
        _ => return Err(Error::NotPeriodic),
    };
    let (mu, sigma, lambda) = lambda_of(tuple.p(), &period);
    Ok(GkReport { p: tuple.p(), period, mu, sigma, lambda })
}

/// `λ(S,R)` for constant tuples over a grid, with gap statistics on a sub-interval.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityScan {
    pub p: u32,
    /// `(S, R, λ)`, sorted by the midpoint of `λ`.
    pub values: Vec<(u32, u32, Interval)>,
    /// Every value satisfies `1 ≤ λ ≤ 3` exactly.
    pub all_in_range: bool,
    pub window: (f64, f64),
    /// Certified upper bound on the largest gap between neighbours in `window`,
    /// the window ends included.
    pub max_gap: f64,
}

impl DensityScan {
    pub fn min(&self) -> &(u32, u32, Interval) {
        self.values.first().expect("scan is never empty")
    }

    pub fn max(&self) -> &(u32, u32, Interval) {
        self.values.last().expect("scan is never empty")
    }
}

pub fn gk_density_scan(p: u32, s_max: u32, r_max: u32, window: (f64, f64)) -> Result<DensityScan> {
    crate::fp::Prime::new(p)?;
    if s_max == 0 || r_max == 0 || window.0 > window.1 {
        return Err(Error::InvalidTuple("scan bounds must be positive and the window ordered".into()));
    }
    let mut values = Vec::new();
    let mut all_in_range = true;
    for s in 1..=s_max {
        for r in 1..=r_max {
            let (mu, sigma, lambda) = lambda_of(p, &[(s, r)]);
            let ps = BigUint::from(p).pow(sigma as u32);
            all_in_range &= ps >= mu && ps <= mu.pow(3);
            values.push((s, r, lambda));
        }
    }
    values.sort_by(|a, b| a.2.mid().total_cmp(&b.2.mid()));
    let inside: Vec<Interval> =
        values.iter().map(|v| v.2).filter(|l| l.hi >= window.0 && l.lo <= window.1).collect();
    let mut max_gap = 0f64;
    let mut prev_lo = window.0;
    for l in &inside {
        max_gap = max_gap.max(l.hi - prev_lo);
        prev_lo = prev_lo.max(l.lo);
    }
    max_gap = max_gap.max(window.1 - prev_lo);
    Ok(DensityScan { p, values, all_in_range, window, max_gap: max_gap.next_up() })
}

fn first_failure(rep: &mut VerificationReport, id: &str, bad: &[String], checked: usize) {
    let ok = bad.is_empty();
    let detail = if ok {
        format!("{checked} rows")
    } else {
        format!("{} of {checked} rows, first {}", bad.len(), bad[0])
    };
    rep.check(id, ok, detail);
}

/// The sandwich `p^{σ(n-3)} ≤ γ̃(m) ≤ p^{σ(n+1)} + p^{σn} + nσ` for `μ^{n-1} < m ≤ μ^n`,
/// and its `m^λ` forms `p^{-3σ} m^λ ≤ γ̃(m) ≤ (p^{2σ}+p^σ) m^λ + σ(log_μ m + 1)`.
pub fn check_growth_sandwich(tuple: &ParameterTuple, table: &GrowthTable) -> Result<VerificationReport> {
    if &table.tuple != tuple {
        return Err(Error::ContextMismatch);
    }
    let gk = gk_periodic(tuple)?;
    let pb = BigUint::from(tuple.p());
    let ln_p = Interval::from_u64(tuple.p() as u64).ln();
    let ln_mu = Interval::ln_big(&gk.mu);
    let sig = gk.sigma as u32;
    let sig_i = Interval::from_u64(gk.sigma);
    let coef = Interval::from_big(&(pb.pow(2 * sig) + pb.pow(sig)));
    let (mut up_exact, mut lo_exact, mut up_real, mut lo_real) =
        (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut mu_n = BigUint::one();
    let mut n = 0u32;
    for row in &table.rows {
        let (m, g) = (&row.m, row.total());
        while &mu_n < m {
            mu_n *= &gk.mu;
            n += 1;
        }
        let tag = || format!("m={m} gamma={g}");
        let upper = pb.pow(sig * (n + 1)) + pb.pow(sig * n) + BigUint::from(n as u64 * gk.sigma);
        if g > upper {
            up_exact.push(tag());
        }
        if n >= 3 && g < pb.pow(sig * (n - 3)) {
            lo_exact.push(tag());
        }
        let ln_m = Interval::ln_big(m);
        let ln_g = Interval::ln_big(&g);
        let lam_ln_m = gk.lambda * ln_m;
        if !(lam_ln_m - sig_i * Interval::from_u64(3) * ln_p).certainly_le(&ln_g) {
            lo_real.push(tag());
        }
        let ok = if lam_ln_m.hi < 600.0 {
            let rhs = coef * lam_ln_m.exp() + sig_i * (ln_m / ln_mu + Interval::point(1.0));
            Interval::from_big(&g).certainly_le(&rhs)
        } else {
            ln_g.certainly_le(&(coef.ln() + lam_ln_m))
        };
        if !ok {
            up_real.push(tag());
        }
    }
    let rows = table.rows.len();
    let mut rep = VerificationReport::new();
    first_failure(&mut rep, "sandwich/upper", &up_exact, rows);
    first_failure(&mut rep, "sandwich/lower", &lo_exact, rows);
    first_failure(&mut rep, "sandwich/upper-m^lambda", &up_real, rows);
    first_failure(&mut rep, "sandwich/lower-m^lambda", &lo_real, rows);
    Ok(rep)
}

/// Exact lower bound `∏_{i<terms} (1 + p^{1-S_i})` on `θ` as `(numerator, denominator)`.
pub fn theta_lower(tuple: &ParameterTuple, terms: usize) -> Result<(BigUint, BigUint)> {
    let m = tuple.materialized(terms)?;
    let p = BigUint::from(tuple.p());
    let (mut num, mut den) = (BigUint::one(), BigUint::one());
    for i in 0..terms {
        num *= m.ps(i) + &p;
        den *= m.ps(i);
    }
    Ok((num, den))
}

/// `n ≥ 1` with `wt(v_{n-1}) < m ≤ wt(v_n)`, for `m ≥ 2`.
fn generation_of(counter: &mut GrowthCounter, m: &BigUint) -> Result<usize> {
    let mut n = 1;
    while counter.materialized(n)?.weight(n) < m {
        n += 1;
    }
    Ok(n)
}

/// Second-type counts at weight `≤ m`: `(length n+1, length n, lengths ≤ n-1)`.
fn second_type_split(
    counter: &mut GrowthCounter,
    n: usize,
    m: &BigUint,
) -> Result<(BigUint, BigUint, BigUint)> {
    let f1 = counter.length_counts(n + 1, m)?.second;
    let f2 = counter.length_counts(n, m)?.second;
    let mut f3 = BigUint::zero();
    for l in 0..n {
        f3 += counter.length_counts(l, m)?.second;
    }
    Ok((f1, f2, f3))
}

/// For every row with `m ≥ 2`: `f_1 < m³`, `f_2 ≤ 3m³`, `f̃_3 ≤ 2m³`, where `f_1`, `f_2`
/// count second-type monomials of weight `≤ m` at lengths `n+1` and `n` and `f̃_3` those of length `≤ n-1`.
pub fn check_cubic_bounds(tuple: &ParameterTuple, table: &GrowthTable) -> Result<VerificationReport> {
    if &table.tuple != tuple {
        return Err(Error::ContextMismatch);
    }
    let mut counter = GrowthCounter::new(tuple)?;
    let (mut b1, mut b2, mut b3, mut part) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut rows = 0;
    for row in table.rows.iter().filter(|r| r.m > BigUint::one()) {
        rows += 1;
        let m = &row.m;
        let n = generation_of(&mut counter, m)?;
        let (f1, f2, f3) = second_type_split(&mut counter, n, m)?;
        let m3 = m.pow(3);
        let tag = format!("m={m} n={n} f=({f1},{f2},{f3})");
        if f1 >= m3 {
            b1.push(tag.clone());
        }
        if f2 > &m3 * 3u32 {
            b2.push(tag.clone());
        }
        if f3 > &m3 * 2u32 {
            b3.push(tag.clone());
        }
        if f1 + f2 + f3 != row.counts.second {
            part.push(tag);
        }
    }
    let mut rep = VerificationReport::new();
    first_failure(&mut rep, "cubic/f1", &b1, rows);
    first_failure(&mut rep, "cubic/f2", &b2, rows);
    first_failure(&mut rep, "cubic/f3", &b3, rows);
    first_failure(&mut rep, "cubic/partition", &part, rows);
    Ok(rep)
}

/// The finite-`m` chain for tuples with `R ≡ 1`, for every row with `m ≥ 2`
/// (`m_0 = wt(v_{n-1})`, `m_1 = ⌊m/m_0⌋`):
/// `f_1 ≤ p² m_1 m_0 p^{2n}`, `f_2 ≤ p(m_1+1) m_0 p^{2n}`, `f̃_3 ≤ 2m p^{2n}`, `f_4 ≤ n`,
/// the total second-type count `≤ (p²+2p+2) m p^{2n} + n`, and
/// `f_2 ≥ (m_1-p+1) m_0 p^{2(n-1)} / θ` with `θ` replaced by an exact partial product below it.
pub fn check_quasilinear_bounds(tuple: &ParameterTuple, table: &GrowthTable) -> Result<VerificationReport> {
    if &table.tuple != tuple {
        return Err(Error::ContextMismatch);
    }
    let mut counter = GrowthCounter::new(tuple)?;
    let top = match table.rows.last() {
        Some(r) if r.m > BigUint::one() => generation_of(&mut counter, &r.m)?,
        _ => 0,
    };
    if !tuple.has_unit_r(top + 2)? {
        return Err(Error::BoundsRequireUnitR);
    }
    let p = BigUint::from(tuple.p());
    let p2 = &p * &p;
    let mut bad: [Vec<String>; 7] = Default::default();
    let mut rows = 0;
    for row in table.rows.iter().filter(|r| r.m > BigUint::one()) {
        rows += 1;
        let m = &row.m;
        let n = generation_of(&mut counter, m)?;
        let m0 = counter.materialized(n)?.weight(n - 1).clone();
        let m1 = m / &m0;
        let (f1, f2, f3) = second_type_split(&mut counter, n, m)?;
        let f4 = row.counts.power_u.clone();
        let p2n = p.pow(2 * n as u32);
        let nb = BigUint::from(n);
        let tag = format!("m={m} n={n} f=({f1},{f2},{f3},{f4})");
        let checks = [
            f1 <= &p2 * &m1 * &m0 * &p2n,
            f2 <= &p * (&m1 + 1u32) * &m0 * &p2n,
            f3 <= m * &p2n * 2u32,
            f4 <= nb,
            &row.counts.second + &f4 <= (&p2 + &p * 2u32 + 2u32) * m * &p2n + &nb,
            {
                // θ ≥ ∏_{i ≤ n-2} (1 + p^{1-S_i}) is all the lower bound needs.
                let (tn, td) = theta_lower(tuple, n - 1)?;
                let heads = &m1 + 1u32;
                heads <= p || &f2 * tn >= (heads - &p) * &m0 * p.pow(2 * (n as u32 - 1)) * td
            },
            &f1 + &f2 + &f3 == row.counts.second,
        ];
        for (k, ok) in checks.into_iter().enumerate() {
            if !ok {
                bad[k].push(tag.clone());
            }
        }
    }
    let ids = ["f1", "f2", "f3", "f4", "upper", "lower", "partition"];
    let mut rep = VerificationReport::new();
    for (id, b) in ids.iter().zip(&bad) {
        first_failure(&mut rep, &format!("quasilinear/{id}"), b, rows);
    }
    if rows == 0 {
        rep.push("quasilinear/rows", Status::OutsideTrustedZone, "no row with m >= 2");
    }
    Ok(rep)
}

/// `2 (ln p)^{1-κ} / κ^κ`, the constant in the level-0 asymptotics of kappa tuples.
pub fn kappa_constant(p: u32, kappa: f64) -> f64 {
    2.0 * libm::pow(libm::log(p as f64), 1.0 - kappa) / libm::pow(kappa, kappa)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitLevel {
    /// `ln γ̃ ≈ c + β ln m`.
    Gk,
    /// `q = 0`: `ln(γ̃/m) ≈ A + C (ln m)^β`; `q ≥ 1`: `ln(γ̃/m) ≈ A + β ln(ln^{(q)} m)`.
    Level(u32),
}

impl fmt::Display for FitLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitLevel::Gk => f.write_str("gk"),
            FitLevel::Level(q) => write!(f, "{q}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticFit {
    pub level: FitLevel,
    pub beta: f64,
    /// Offset `A` (or `c`).
    pub intercept: f64,
    /// `C` of the level-0 model; `1` otherwise.
    pub scale: f64,
    pub window: (BigUint, BigUint),
    pub rows: usize,
    pub rms_residual: f64,
    pub max_residual: f64,
}

impl fmt::Display for AsymptoticFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "level {} beta={:.6} intercept={:.6} C={:.6} window=[{}, {}] rows={} rms={:.3e} max={:.3e}",
            self.level,
            self.beta,
            self.intercept,
            self.scale,
            self.window.0,
            self.window.1,
            self.rows,
            self.rms_residual,
            self.max_residual
        )
    }
}

fn ln(x: &BigUint) -> f64 {
    Interval::ln_big(x).mid()
}

fn iterated_ln(mut x: f64, q: u32) -> Option<f64> {
    for _ in 0..q {
        if x <= 0.0 {
            return None;
        }
        x = libm::log(x);
    }
    Some(x)
}

// Least squares y ≈ a + b x; returns (a, b, rms, max |residual|).
fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let (mut ss, mut mr) = (0.0f64, 0.0f64);
    for (x, y) in xs.iter().zip(ys) {
        let r = y - a - b * x;
        ss += r * r;
        mr = mr.max(r.abs());
    }
    (a, b, libm::sqrt(ss / n), mr)
}

/// Fits the chosen model over the top of the table: rows with `m ≥ m_max / 10`
/// for [`FitLevel::Gk`], and `m ≥ sqrt(m_max)` for the level models, whose
/// parameters are not identifiable over a single decade. Needs at least 8 rows
/// spanning two decades overall and at least 8 usable rows in the window.
pub fn estimate_exponent(table: &GrowthTable, level: FitLevel) -> Result<AsymptoticFit> {
    let rows: Vec<_> = table.rows.iter().filter(|r| !r.m.is_zero() && !r.total().is_zero()).collect();
    let (Some(first), Some(last)) = (rows.first(), rows.last()) else {
        return Err(Error::WindowTooSmall);
    };
    if rows.len() < 8 || ln(&last.m) - ln(&first.m) < 2.0 * core::f64::consts::LN_10 {
        return Err(Error::WindowTooSmall);
    }
    let lo = match level {
        FitLevel::Gk => &last.m / 10u32,
        FitLevel::Level(_) => last.m.sqrt(),
    };
    let mut pts = Vec::new();
    for r in rows.iter().filter(|r| r.m >= lo) {
        let (lm, lg) = (ln(&r.m), ln(&r.total()));
        let pt = match level {
            FitLevel::Gk => Some((lm, lg)),
            FitLevel::Level(0) => (lg > lm && lm > 0.0).then_some((lm, lg - lm)),
            FitLevel::Level(q) => {
                iterated_ln(lm, q - 1).filter(|x| *x > 0.0).map(|x| (libm::log(x), lg - lm))
            }
        };
        pts.extend(pt.map(|p| (p, r.m.clone())));
    }
    if pts.len() < 8 {
        return Err(Error::WindowTooSmall);
    }
    let window = (pts[0].1.clone(), pts[pts.len() - 1].1.clone());
    let xs: Vec<f64> = pts.iter().map(|p| p.0 .0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.0 .1).collect();
    let (intercept, beta, scale, rms, max) = if level == FitLevel::Level(0) {
        // For fixed β the model is linear in (A, C); minimise over β by golden section.
        let fit_at = |beta: f64| {
            let us: Vec<f64> = xs.iter().map(|x| libm::pow(*x, beta)).collect();
            linear_fit(&us, &ys)
        };
        let (mut a, mut b) = (0.01f64, 4.0f64);
        let g = 0.5 * (libm::sqrt(5.0) - 1.0);
        for _ in 0..100 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if fit_at(c).2 < fit_at(d).2 {
                b = d;
            } else {
                a = c;
            }
        }
        let beta = 0.5 * (a + b);
        let (a0, c0, rms, max) = fit_at(beta);
        (a0, beta, c0, rms, max)
    } else {
        let (a0, b0, rms, max) = linear_fit(&xs, &ys);
        (a0, b0, 1.0, rms, max)
    };
    Ok(AsymptoticFit {
        level,
        beta,
        intercept,
        scale,
        window,
        rows: pts.len(),
        rms_residual: rms,
        max_residual: max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomials::{growth_table, sample_weights, sampled_table, GrowthRow};

    fn t(p: u32, s: u32, r: u32) -> ParameterTuple {
        ParameterTuple::constant(p, s, r).unwrap()
    }

    #[test]
    fn gk_examples() {
        let g = gk_periodic(&t(2, 1, 1)).unwrap();
        assert_eq!((g.mu.clone(), g.sigma), (BigUint::from(3u32), 3));
        assert!(g.lambda.contains(3.0 * core::f64::consts::LN_2 / libm::log(3.0)));
        assert!((g.lambda.mid() - 1.8928).abs() < 1e-4);
        assert!(g.lambda.width() < 1e-12);
        assert!((gk_periodic(&t(2, 5, 1)).unwrap().lambda.mid() - 1.3877).abs() < 1e-4);
        let per = gk_periodic(&ParameterTuple::parse(2, "periodic:1,1;5,1").unwrap()).unwrap();
        assert_eq!((per.mu.clone(), per.sigma), (BigUint::from(99u32), 10));
        assert!(per.lambda_in_unit_to_three());
        let k = ParameterTuple::parse(2, "kappa:0.5").unwrap();
        assert_eq!(gk_periodic(&k), Err(Error::NotPeriodic));
    }

    #[test]
    fn scan_examples() {
        let one = gk_density_scan(2, 1, 1, (1.0, 3.0)).unwrap();
        assert_eq!(one.values.len(), 1);
        let s = gk_density_scan(2, 64, 64, (1.1, 2.9)).unwrap();
        assert!(s.all_in_range);
        let (lo, hi) = (s.min(), s.max());
        assert_eq!((lo.0, lo.1), (64, 1));
        // 191/log2(2^63+2^64-1) beats 192/65.
        assert_eq!((hi.0, hi.1), (63, 64));
        assert!((hi.2.mid() - 2.95).abs() < 0.01 && (lo.2.mid() - 1.03).abs() < 0.01);
        let corner = s.values.iter().find(|v| v.0 == 64 && v.1 == 64).unwrap().2;
        assert!(corner.contains(192.0 / 65.0));
        assert!(corner.certainly_lt(&hi.2));
        // λ(S, 1) decreases in S.
        let col: Vec<f64> =
            (1..=64).map(|si| s.values.iter().find(|v| v.0 == si && v.1 == 1).unwrap().2.mid()).collect();
        assert!(col.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn sandwich_holds() {
        let tup = t(2, 1, 1);
        let table = growth_table(&tup, 729).unwrap();
        let rep = check_growth_sandwich(&tup, &table).unwrap();
        assert!(rep.all_passed(), "{rep}");
        let t3 = t(3, 1, 1);
        let table = growth_table(&t3, 700).unwrap();
        assert!(check_growth_sandwich(&t3, &table).unwrap().all_passed());
        assert_eq!(check_growth_sandwich(&t3, &growth_table(&tup, 3).unwrap()), Err(Error::ContextMismatch));
    }

    #[test]
    fn theta_partial_products() {
        let k = ParameterTuple::parse(2, "kappa:0.5").unwrap();
        // S = 1, 2, 3: (1+1)(1+1/2)(1+1/4) = 15/4.
        let (n, d) = theta_lower(&k, 3).unwrap();
        assert_eq!(n * 4u32, d * 15u32);
    }

    #[test]
    fn quasilinear_small() {
        let k = ParameterTuple::parse(2, "kappa:0.5").unwrap();
        let table = growth_table(&k, 300).unwrap();
        let rep = check_quasilinear_bounds(&k, &table).unwrap();
        assert!(rep.all_passed(), "{rep}");
        let bad = t(2, 1, 2);
        assert_eq!(
            check_quasilinear_bounds(&bad, &growth_table(&bad, 50).unwrap()),
            Err(Error::BoundsRequireUnitR)
        );
    }

    #[test]
    fn cubic_small() {
        let tup = ParameterTuple::parse(3, "explicit:2,1;1,3;2,2;1,1;3,1;1,1;1,1").unwrap();
        let max = crate::params::pivot_weight(&tup, 4).unwrap();
        let table = sampled_table(&tup, &sample_weights(&tup, &max, 100, 4).unwrap()).unwrap();
        let rep = check_cubic_bounds(&tup, &table).unwrap();
        assert!(rep.all_passed(), "{rep}");
    }

    #[test]
    fn fit_behaviour() {
        let tup = t(2, 1, 1);
        let table = growth_table(&tup, 5000).unwrap();
        let fit = estimate_exponent(&table, FitLevel::Gk).unwrap();
        assert!(fit.beta > 1.5 && fit.beta < 2.3, "{fit}");
        let short = GrowthTable { tuple: tup.clone(), rows: table.rows[..20].to_vec() };
        assert_eq!(estimate_exponent(&short, FitLevel::Gk), Err(Error::WindowTooSmall));
        // Scaling the counts moves only the offset.
        let k = ParameterTuple::parse(2, "kappa:0.5").unwrap();
        let kt = growth_table(&k, 3000).unwrap();
        let a = estimate_exponent(&kt, FitLevel::Level(0)).unwrap();
        let scaled = GrowthTable {
            tuple: k.clone(),
            rows: kt
                .rows
                .iter()
                .map(|r| {
                    let mut c = r.counts.clone();
                    c.first *= 7u32;
                    c.second *= 7u32;
                    c.power_v *= 7u32;
                    c.power_w *= 7u32;
                    c.power_u *= 7u32;
                    GrowthRow { m: r.m.clone(), counts: c }
                })
                .collect(),
        };
        let b = estimate_exponent(&scaled, FitLevel::Level(0)).unwrap();
        assert!((a.beta - b.beta).abs() < 1e-6, "{a} vs {b}");
        assert!(estimate_exponent(&kt, FitLevel::Level(1)).is_ok());
    }
}
