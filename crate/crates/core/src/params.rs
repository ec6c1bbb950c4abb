//! Parameter tuples `Ξ = (S_i, R_i)` and the weight functions they induce.
//!
//! All weights are exact big integers. The `kappa` and `qkappa` rules are
//! evaluated with integer root extraction where the defining exponential
//! is algebraic, and with certified intervals otherwise.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::fp::Prime;
use crate::interval::Interval;
use crate::{Error, Result};

/// Largest `S_i` or `R_i` a tuple may produce; `p^S` is materialized as a big integer.
pub const MAX_ENTRY: u32 = 1 << 20;

/// A positive rational, used for `κ` so that decimal input stays exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidTuple("ratio must be positive".into()));
        }
        let g = num.gcd(&den);
        Ok(Ratio { num: num / g, den: den / g })
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl FromStr for Ratio {
    type Err = Error;

    /// Accepts `a/b` or a plain decimal such as `0.5`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(alloc::format!("bad rational `{s}`"));
        if let Some((a, b)) = s.split_once('/') {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            return Ratio::new(a, b).map_err(|_| bad());
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 12 || (int.is_empty() && frac.is_empty()) {
            return Err(bad());
        }
        let digits: String = [int, frac].concat();
        if !digits.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let num: u64 = digits.parse().map_err(|_| bad())?;
        Ratio::new(num, 10u64.pow(frac.len() as u32)).map_err(|_| bad())
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// How the sequence `(S_i, R_i)` is generated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TupleRule {
    Constant {
        s: u32,
        r: u32,
    },
    Periodic(Vec<(u32, u32)>),
    /// `S_i = floor((i+1)^(1/κ - 1))`, `R_i = 1`, for `κ ∈ (0, 1)`.
    Kappa(Ratio),
    /// `R_i = 1`, `S_0 = 1`, `S_0 + … + S_n = floor(exp^q(λ(n+2))) + 1` with `λ = ln(p²)/κ`.
    QKappa {
        q: u32,
        kappa: Ratio,
    },
    Explicit(Vec<(u32, u32)>),
}

impl TupleRule {
    pub fn period(&self) -> Option<usize> {
        match self {
            TupleRule::Constant { .. } => Some(1),
            TupleRule::Periodic(v) => Some(v.len()),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let pairs_ok =
            |v: &[(u32, u32)]| v.iter().all(|&(s, r)| s >= 1 && r >= 1 && s <= MAX_ENTRY && r <= MAX_ENTRY);
        match self {
            TupleRule::Constant { s, r } if !pairs_ok(&[(*s, *r)]) => {
                Err(Error::InvalidTuple("S and R must be positive".into()))
            }
            TupleRule::Periodic(v) | TupleRule::Explicit(v) if v.is_empty() || !pairs_ok(v) => {
                Err(Error::InvalidTuple("pairs must be non-empty with positive entries".into()))
            }
            TupleRule::Kappa(k) if k.num >= k.den => {
                Err(Error::InvalidTuple("kappa must lie in (0,1)".into()))
            }
            TupleRule::QKappa { q: 0, .. } => Err(Error::InvalidTuple("q must be at least 1".into())),
            _ => Ok(()),
        }
    }
}

fn parse_pairs(s: &str) -> Result<Vec<(u32, u32)>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|pair| {
            let (a, b) = pair
                .split_once(',')
                .ok_or_else(|| Error::Parse(alloc::format!("expected `S,R`, got `{pair}`")))?;
            let a = a.trim().parse().map_err(|_| Error::Parse(alloc::format!("bad integer `{a}`")))?;
            let b = b.trim().parse().map_err(|_| Error::Parse(alloc::format!("bad integer `{b}`")))?;
            Ok((a, b))
        })
        .collect()
}

impl FromStr for TupleRule {
    type Err = Error;

    /// `constant:S,R` | `periodic:S0,R0;S1,R1;…` | `kappa:0.5` | `qkappa:q,kappa` | `explicit:S0,R0;…`
    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(alloc::format!("missing `kind:` prefix in `{s}`")))?;
        let rule = match kind.trim() {
            "constant" => {
                let v = parse_pairs(body)?;
                if v.len() != 1 {
                    return Err(Error::Parse("constant takes exactly one S,R pair".into()));
                }
                TupleRule::Constant { s: v[0].0, r: v[0].1 }
            }
            "periodic" => TupleRule::Periodic(parse_pairs(body)?),
            "explicit" => TupleRule::Explicit(parse_pairs(body)?),
            "kappa" => TupleRule::Kappa(body.parse()?),
            "qkappa" => {
                let (q, k) =
                    body.split_once(',').ok_or_else(|| Error::Parse("qkappa takes `q,kappa`".into()))?;
                let q = q.trim().parse().map_err(|_| Error::Parse(alloc::format!("bad q `{q}`")))?;
                TupleRule::QKappa { q, kappa: k.parse()? }
            }
            other => return Err(Error::Parse(alloc::format!("unknown tuple kind `{other}`"))),
        };
        rule.validate()?;
        Ok(rule)
    }
}

impl fmt::Display for TupleRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs =
            |v: &[(u32, u32)]| v.iter().map(|(s, r)| alloc::format!("{s},{r}")).collect::<Vec<_>>().join(";");
        match self {
            TupleRule::Constant { s, r } => write!(f, "constant:{s},{r}"),
            TupleRule::Periodic(v) => write!(f, "periodic:{}", pairs(v)),
            TupleRule::Explicit(v) => write!(f, "explicit:{}", pairs(v)),
            TupleRule::Kappa(k) => write!(f, "kappa:{k}"),
            TupleRule::QKappa { q, kappa } => write!(f, "qkappa:{q},{kappa}"),
        }
    }
}

/// The prime `p` together with the rule producing `Ξ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterTuple {
    prime: Prime,
    rule: TupleRule,
}

impl ParameterTuple {
    pub fn new(p: u32, rule: TupleRule) -> Result<Self> {
        let prime = Prime::new(p)?;
        rule.validate()?;
        Ok(ParameterTuple { prime, rule })
    }

    pub fn constant(p: u32, s: u32, r: u32) -> Result<Self> {
        Self::new(p, TupleRule::Constant { s, r })
    }

    pub fn parse(p: u32, spec: &str) -> Result<Self> {
        Self::new(p, spec.parse()?)
    }

    pub fn p(&self) -> u32 {
        self.prime.get()
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn rule(&self) -> &TupleRule {
        &self.rule
    }

    /// `R_i = 1` for every index (the kappa-type rules, or explicit data that happens to satisfy it).
    pub fn has_unit_r(&self, upto: usize) -> Result<bool> {
        match &self.rule {
            TupleRule::Kappa(_) | TupleRule::QKappa { .. } => Ok(true),
            TupleRule::Constant { r, .. } => Ok(*r == 1),
            TupleRule::Periodic(v) => Ok(v.iter().all(|&(_, r)| r == 1)),
            TupleRule::Explicit(_) => {
                for i in 0..upto {
                    if self.materialize(i)?.1 != 1 {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// `(S_n, R_n)`. Deterministic and pure.
    pub fn materialize(&self, n: usize) -> Result<(u32, u32)> {
        let pair = match &self.rule {
            TupleRule::Constant { s, r } => (*s, *r),
            TupleRule::Periodic(v) => v[n % v.len()],
            TupleRule::Explicit(v) => *v.get(n).ok_or(Error::TupleExhausted(n))?,
            TupleRule::Kappa(k) => (kappa_entry(*k, n)?, 1),
            TupleRule::QKappa { q, kappa } => {
                let s = if n == 0 {
                    1
                } else {
                    let hi = qkappa_prefix(self.p(), *q, *kappa, n)?;
                    let lo = qkappa_prefix(self.p(), *q, *kappa, n - 1)?;
                    if hi <= lo {
                        return Err(Error::DegenerateTuple(n));
                    }
                    let d = &hi - &lo;
                    d.to_u32().filter(|&d| d <= MAX_ENTRY).ok_or(Error::TupleEntryTooLarge(n))?
                };
                (s, 1)
            }
        };
        Ok(pair)
    }

    /// Materializes the first `len` generations with all derived weights.
    pub fn materialized(&self, len: usize) -> Result<Materialized> {
        let mut m = Materialized::empty(self.clone());
        m.extend_to(len)?;
        Ok(m)
    }
}

impl fmt::Display for ParameterTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} {}", self.p(), self.rule)
    }
}

// floor((n+1)^((den-num)/num)), clamped to >= 1.
fn kappa_entry(k: Ratio, n: usize) -> Result<u32> {
    let base = BigUint::from(n as u64 + 1);
    let e = k.den - k.num;
    let e32 = u32::try_from(e).map_err(|_| Error::TupleEntryTooLarge(n))?;
    let root = u32::try_from(k.num).map_err(|_| Error::TupleEntryTooLarge(n))?;
    let v = base.pow(e32).nth_root(root);
    let v = v.to_u32().filter(|&v| v <= MAX_ENTRY).ok_or(Error::TupleEntryTooLarge(n))?;
    Ok(v.max(1))
}

// S_0 + … + S_n for the qkappa rule; equals 1 at n = 0.
fn qkappa_prefix(p: u32, q: u32, kappa: Ratio, n: usize) -> Result<BigUint> {
    if n == 0 {
        return Ok(BigUint::one());
    }
    // exp(λ(n+2)) = p^(2·den·(n+2)/num), an algebraic number.
    let num = u32::try_from(kappa.num).map_err(|_| Error::TupleEntryTooLarge(n))?;
    let e = 2u64
        .checked_mul(kappa.den)
        .and_then(|v| v.checked_mul(n as u64 + 2))
        .and_then(|v| u32::try_from(v).ok())
        .ok_or(Error::TupleEntryTooLarge(n))?;
    let pbits = (32 - p.leading_zeros()) as u64;
    if e as u64 * pbits > 1 << 24 || e as u64 * pbits / num as u64 > 4 * MAX_ENTRY as u64 {
        return Err(Error::TupleEntryTooLarge(n));
    }
    let power = BigUint::from(p).pow(e);
    if q == 1 {
        return Ok(power.nth_root(num) + 1u32);
    }
    // q >= 2: enclose the algebraic value, then iterate exp with certified floors.
    const FRAC_BITS: u32 = 64;
    let scaled = (&power << (FRAC_BITS as usize * num as usize)).nth_root(num);
    let lo = Interval::from_big(&scaled).lo / libm::ldexp(1.0, FRAC_BITS as i32);
    let hi = Interval::from_big(&(scaled + 1u32)).hi / libm::ldexp(1.0, FRAC_BITS as i32);
    let mut x = Interval::new(lo.next_down(), hi.next_up());
    for _ in 1..q {
        if x.hi > 700.0 {
            return Err(Error::TupleEntryTooLarge(n));
        }
        x = x.exp();
    }
    let fl = x.certified_floor().ok_or(Error::RoundingAmbiguous(n))?;
    if fl > 9.0e15 {
        return Err(Error::RoundingAmbiguous(n));
    }
    Ok(BigUint::from(fl as u64) + 1u32)
}

/// Which pivot family: `v` (on `x`), `w` (on `y`) or `u` (on `z`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PivotKind {
    V,
    W,
    U,
}

impl PivotKind {
    pub const ALL: [PivotKind; 3] = [PivotKind::V, PivotKind::W, PivotKind::U];
}

impl fmt::Display for PivotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PivotKind::V => "v",
            PivotKind::W => "w",
            PivotKind::U => "u",
        })
    }
}

/// Multidegree `Gr = (wt_1, wt_2, wt_3)` in the generators and its total `wt`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector {
    gr: [BigUint; 3],
    wt: BigUint,
}

impl WeightVector {
    pub fn new(gr: [BigUint; 3]) -> Self {
        let wt = &gr[0] + &gr[1] + &gr[2];
        WeightVector { gr, wt }
    }

    pub fn unit(k: PivotKind) -> Self {
        let mut gr = [BigUint::zero(), BigUint::zero(), BigUint::zero()];
        gr[k as usize] = BigUint::one();
        WeightVector::new(gr)
    }

    pub fn gr(&self) -> &[BigUint; 3] {
        &self.gr
    }

    pub fn wt(&self) -> &BigUint {
        &self.wt
    }

    /// `wt_1 + wt_2`, the multiplicity with respect to `v_0, w_0`.
    pub fn wt12(&self) -> BigUint {
        &self.gr[0] + &self.gr[1]
    }

    pub fn to_u64_triple(&self) -> Option<[u64; 3]> {
        Some([self.gr[0].to_u64()?, self.gr[1].to_u64()?, self.gr[2].to_u64()?])
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.gr[0], self.gr[1], self.gr[2])
    }
}

/// A materialized prefix of `Ξ` with every weight the algebra needs.
///
/// Index `i` holds `S_i, R_i`, `p^{S_i}`, `p^{R_i}`, `wt(v_i)` and the
/// multidegrees `Gr(v_i), Gr(w_i), Gr(u_i)`. Weight vectors carry one more
/// entry than the `S, R` lists so that `wt(v_len)` is always available.
#[derive(Debug, Clone)]
pub struct Materialized {
    tuple: ParameterTuple,
    s: Vec<u32>,
    r: Vec<u32>,
    ps: Vec<BigUint>,
    pr: Vec<BigUint>,
    weight: Vec<BigUint>,
    gr: Vec<[[BigUint; 3]; 3]>,
}

impl Materialized {
    fn empty(tuple: ParameterTuple) -> Self {
        let z = || BigUint::zero();
        let o = || BigUint::one();
        Materialized {
            tuple,
            s: Vec::new(),
            r: Vec::new(),
            ps: Vec::new(),
            pr: Vec::new(),
            weight: alloc::vec![BigUint::one()],
            gr: alloc::vec![[[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]]],
        }
    }

    pub fn tuple(&self) -> &ParameterTuple {
        &self.tuple
    }

    pub fn p(&self) -> u32 {
        self.tuple.p()
    }

    /// Number of generations with concrete `(S_i, R_i)`.
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn extend_to(&mut self, len: usize) -> Result<()> {
        while self.s.len() < len {
            let i = self.s.len();
            let (s, r) = self.tuple.materialize(i)?;
            let p = BigUint::from(self.tuple.p());
            let ps = p.pow(s);
            let pr = p.pow(r);
            let step = &ps + &pr - 1u32;
            let next_w = &self.weight[i] * &step;
            // Gr(v_{i+1}) = p^S Gr(v_i) + (p^R - 1) Gr(w_i), and the two sibling rows.
            let [a, b, c] = &self.gr[i];
            let ps1 = &ps - 1u32;
            let pr1 = &pr - 1u32;
            let comb = |x: &[BigUint; 3], cx: &BigUint, y: &[BigUint; 3], cy: &BigUint| -> [BigUint; 3] {
                [&x[0] * cx + &y[0] * cy, &x[1] * cx + &y[1] * cy, &x[2] * cx + &y[2] * cy]
            };
            let na = comb(a, &ps, b, &pr1);
            let nb = comb(a, &ps1, b, &pr);
            let nc = comb(a, &ps1, c, &pr);
            self.s.push(s);
            self.r.push(r);
            self.ps.push(ps);
            self.pr.push(pr);
            self.weight.push(next_w);
            self.gr.push([na, nb, nc]);
        }
        Ok(())
    }

    pub fn s(&self, i: usize) -> u32 {
        self.s[i]
    }

    pub fn r(&self, i: usize) -> u32 {
        self.r[i]
    }

    /// `p^{S_i}`.
    pub fn ps(&self, i: usize) -> &BigUint {
        &self.ps[i]
    }

    /// `p^{R_i}`.
    pub fn pr(&self, i: usize) -> &BigUint {
        &self.pr[i]
    }

    /// `wt(v_i) = wt(w_i) = wt(u_i)`; valid for `i <= len()`.
    pub fn weight(&self, i: usize) -> &BigUint {
        &self.weight[i]
    }

    pub fn multidegree(&self, i: usize, kind: PivotKind) -> WeightVector {
        WeightVector::new(self.gr[i][kind as usize].clone())
    }

    pub fn multidegree_raw(&self, i: usize, kind: PivotKind) -> &[BigUint; 3] {
        &self.gr[i][kind as usize]
    }
}

/// `wt(v_n) = ∏_{i<n} (p^{S_i} + p^{R_i} - 1)`.
pub fn pivot_weight(tuple: &ParameterTuple, n: usize) -> Result<BigUint> {
    let mut w = BigUint::one();
    let p = BigUint::from(tuple.p());
    for i in 0..n {
        let (s, r) = tuple.materialize(i)?;
        w *= p.pow(s) + p.pow(r) - 1u32;
    }
    Ok(w)
}

/// `Gr` of the pivot of generation `n`, by iterating the 3×3 weight recurrence.
pub fn pivot_multidegree(tuple: &ParameterTuple, n: usize, kind: PivotKind) -> Result<WeightVector> {
    Ok(tuple.materialized(n)?.multidegree(n, kind))
}

/// `W(N) = (p^{S_{N-2}} - 1) · wt(v_{N-2})`: components of weight at most
/// this are faithfully represented in the depth-`N` truncation.
pub fn trusted_weight_bound(tuple: &ParameterTuple, depth: usize) -> Result<BigUint> {
    if depth < 2 {
        return Err(Error::TruncationTooShallow);
    }
    let m = tuple.materialized(depth - 1)?;
    Ok((m.ps(depth - 2) - 1u32) * m.weight(depth - 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn materialize_examples() {
        let k = ParameterTuple::parse(2, "kappa:0.5").unwrap();
        assert_eq!(k.materialize(3).unwrap(), (4, 1));
        let c = ParameterTuple::constant(2, 1, 1).unwrap();
        assert_eq!(c.materialize(100).unwrap(), (1, 1));
        let q = ParameterTuple::parse(2, "qkappa:1,1").unwrap();
        assert_eq!(q.materialize(0).unwrap(), (1, 1));
        assert_eq!(q.materialize(1).unwrap(), (64, 1));
        // 4^4 + 1 - 65
        assert_eq!(q.materialize(2).unwrap(), (192, 1));
    }

    #[test]
    fn kappa_entries_match_float_evaluation_away_from_integers() {
        let k = ParameterTuple::parse(3, "kappa:0.3").unwrap();
        for i in 0..40usize {
            let x = libm::pow((i + 1) as f64, 1.0 / 0.3 - 1.0);
            let (s, r) = k.materialize(i).unwrap();
            assert_eq!(r, 1);
            if (x - libm::round(x)).abs() > 1e-6 {
                assert_eq!(s as f64, libm::floor(x).max(1.0), "i={i}");
            }
        }
    }

    #[test]
    fn kappa_is_monotone_below_one_half() {
        for spec in ["kappa:0.5", "kappa:0.25", "kappa:1/3"] {
            let t = ParameterTuple::parse(2, spec).unwrap();
            let s: Vec<u32> = (0..30).map(|i| t.materialize(i).unwrap().0).collect();
            assert!(s.windows(2).all(|w| w[0] <= w[1]), "{spec}: {s:?}");
            assert_eq!(s[0], 1);
        }
    }

    #[test]
    fn qkappa_degenerate_and_large_entries_fail_loudly() {
        let t = ParameterTuple::parse(2, "qkappa:1,100").unwrap();
        assert!((1..10).any(|i| t.materialize(i) == Err(Error::DegenerateTuple(i))));
        // exp(exp(3 ln 4)) = e^64 cannot be floored with double intervals.
        let t2 = ParameterTuple::parse(2, "qkappa:2,1").unwrap();
        assert!(matches!(
            t2.materialize(1),
            Err(Error::RoundingAmbiguous(1)) | Err(Error::TupleEntryTooLarge(1))
        ));
    }

    #[test]
    fn qkappa_two_levels_small_entries() {
        // λ = ln 2 / 4, exp(3λ) = 2^(3/4); floor(exp(2^(3/4))) + 1 = 6.
        let t = ParameterTuple::parse(2, "qkappa:2,8").unwrap();
        assert_eq!(t.materialize(1).unwrap(), (5, 1));
    }

    #[test]
    fn explicit_exhaustion() {
        let t = ParameterTuple::parse(3, "explicit:1,1;2,1").unwrap();
        assert_eq!(t.materialize(1).unwrap(), (2, 1));
        assert_eq!(t.materialize(2), Err(Error::TupleExhausted(2)));
    }

    #[test]
    fn rule_round_trip_and_errors() {
        for s in ["constant:2,1", "periodic:1,1;5,1", "kappa:1/2", "qkappa:1,1", "explicit:1,2;3,4"] {
            let r: TupleRule = s.parse().unwrap();
            assert_eq!(r.to_string().parse::<TupleRule>().unwrap(), r);
        }
        assert!("kappa:1.5".parse::<TupleRule>().is_err());
        assert!("constant:0,1".parse::<TupleRule>().is_err());
        assert!("bogus:1".parse::<TupleRule>().is_err());
        assert!(ParameterTuple::constant(4, 1, 1).is_err());
    }

    #[test]
    fn pivot_weight_examples() {
        let c = ParameterTuple::constant(2, 1, 1).unwrap();
        assert_eq!(pivot_weight(&c, 0).unwrap(), big(1));
        assert_eq!(pivot_weight(&c, 2).unwrap(), big(9));
        let d = ParameterTuple::constant(3, 2, 1).unwrap();
        assert_eq!(pivot_weight(&d, 1).unwrap(), big(11));
    }

    #[test]
    fn multidegree_examples() {
        let c = ParameterTuple::constant(2, 1, 1).unwrap();
        let t = ParameterTuple::parse(5, "explicit:2,3").unwrap();
        assert_eq!(pivot_multidegree(&t, 0, PivotKind::V).unwrap(), WeightVector::unit(PivotKind::V));
        assert_eq!(pivot_multidegree(&c, 2, PivotKind::U).unwrap().gr()[2], big(4));
        assert_eq!(pivot_multidegree(&c, 1, PivotKind::V).unwrap().gr(), &[big(2), big(1), big(0)]);
    }

    #[test]
    fn trusted_bound_examples() {
        let c = ParameterTuple::constant(2, 1, 1).unwrap();
        assert_eq!(trusted_weight_bound(&c, 3).unwrap(), big(3));
        assert_eq!(trusted_weight_bound(&c, 5).unwrap(), big(27));
        let d = ParameterTuple::constant(3, 2, 1).unwrap();
        assert_eq!(trusted_weight_bound(&d, 2).unwrap(), big(8));
        assert_eq!(trusted_weight_bound(&c, 1), Err(Error::TruncationTooShallow));
    }

    fn arb_tuple() -> impl Strategy<Value = ParameterTuple> {
        (prop::sample::select(alloc::vec![2u32, 3, 5]), prop::collection::vec((1u32..=3, 1u32..=3), 9))
            .prop_map(|(p, v)| ParameterTuple::new(p, TupleRule::Explicit(v)).unwrap())
    }

    proptest! {
        #[test]
        fn weight_recurrence_and_row_sums(t in arb_tuple()) {
            let m = t.materialized(8).unwrap();
            for n in 0..=8usize {
                let w = pivot_weight(&t, n).unwrap();
                prop_assert_eq!(m.weight(n), &w);
                if n >= 1 {
                    let (s, r) = t.materialize(n - 1).unwrap();
                    let p = big(t.p() as u64);
                    prop_assert_eq!(&w, &(m.weight(n - 1) * (p.pow(s) + p.pow(r) - 1u32)));
                }
                let rsum: u32 = (0..n).map(|i| m.r(i)).sum();
                let p3 = big(t.p() as u64).pow(rsum);
                for k in PivotKind::ALL {
                    let g = m.multidegree(n, k);
                    prop_assert_eq!(g.wt(), &w);
                    if k == PivotKind::U {
                        prop_assert_eq!(&g.gr()[2], &p3);
                        prop_assert_eq!(g.wt12(), &w - &p3);
                    } else {
                        prop_assert!(g.gr()[2].is_zero());
                        prop_assert_eq!(g.wt12(), w.clone());
                    }
                }
            }
        }

        #[test]
        fn cube_estimate(p in prop::sample::select(alloc::vec![2u32, 3, 5, 7]), s in 1u32..=10, r in 1u32..=10) {
            // (p^s + p^r - 1)^3 > p^(s + 2r)
            let pb = big(p as u64);
            let lhs = (pb.pow(s) + pb.pow(r) - 1u32).pow(3);
            prop_assert!(lhs > pb.pow(s + 2 * r));
        }
    }
}
