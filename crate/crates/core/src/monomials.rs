//! Standard and power standard monomials: descriptors, weights, realization
//! and exact counting of the weight growth function.
//!
//! A first-type monomial of length `n ≥ 1` is a tail `r_{n-2}(x,y)` times a
//! head `h_n^{ξ,η}`; a second-type one is a tail `r_{n-2}(x,y,z)` times
//! `g_n^{ξ,ζ}`. Both heads have weight `(ξ+η+2)·wt(v_{n-1})` (resp. with `ζ`),
//! and a tail exponent `e` on a variable of generation `i` lowers the weight by
//! `e·wt(v_i)`. Counting therefore reduces to counting tail exponent vectors
//! whose "deficiency" `Σ e_i wt(v_i)` clears a threshold, which is done either
//! densely (all weights up to a cap) or by a digit recursion on big integers.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::derivations::{self, Derivation};
use crate::dpalgebra::{DpContext, DpMonomial, Var};
use crate::params::{Materialized, ParameterTuple, PivotKind, WeightVector};
use crate::{Error, Result};

/// Largest dense table [`growth_table`] builds.
pub const DEFAULT_ROW_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    First,
    Second,
    PowerV,
    PowerW,
    PowerU,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::First, Family::Second, Family::PowerV, Family::PowerW, Family::PowerU];

    /// Spanning the subalgebra `Lie_p(v_0, w_0)` rather than the ideal.
    pub fn is_first_kind(self) -> bool {
        matches!(self, Family::First | Family::PowerV | Family::PowerW)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::First => "first",
            Family::Second => "second",
            Family::PowerV => "power_v",
            Family::PowerW => "power_w",
            Family::PowerU => "power_u",
        })
    }
}

/// The head of a descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Head {
    /// `v_0`, `w_0` or `u_0` (length 0).
    Generator(PivotKind),
    /// `h_n^{ξ,η}`.
    First { xi: u64, eta: u64 },
    /// `g_n^{ξ,ζ}`.
    Second { xi: u64, zeta: u64 },
    /// `pivot_{n-1}^{p^m}`, `m ≥ 1`.
    Power { kind: PivotKind, m: u32 },
}

/// One (power) standard monomial. `tail[i] = [ξ_i, η_i, ζ_i]` for `i ≤ n-2`
/// (`ζ_i = 0` for first type); power monomials and generators have no tail.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialDescriptor {
    pub length: usize,
    pub head: Head,
    pub tail: Vec<[u64; 3]>,
}

impl MonomialDescriptor {
    pub fn generator(kind: PivotKind) -> Self {
        MonomialDescriptor { length: 0, head: Head::Generator(kind), tail: Vec::new() }
    }

    pub fn first(tail: Vec<[u64; 3]>, xi: u64, eta: u64) -> Self {
        MonomialDescriptor { length: tail.len() + 1, head: Head::First { xi, eta }, tail }
    }

    pub fn second(tail: Vec<[u64; 3]>, xi: u64, zeta: u64) -> Self {
        MonomialDescriptor { length: tail.len() + 1, head: Head::Second { xi, zeta }, tail }
    }

    /// `pivot_{length-1}^{p^m}`.
    pub fn power(kind: PivotKind, length: usize, m: u32) -> Self {
        MonomialDescriptor { length, head: Head::Power { kind, m }, tail: Vec::new() }
    }

    pub fn family(&self) -> Family {
        match self.head {
            Head::Generator(PivotKind::U) | Head::Second { .. } => Family::Second,
            Head::Generator(_) | Head::First { .. } => Family::First,
            Head::Power { kind: PivotKind::V, .. } => Family::PowerV,
            Head::Power { kind: PivotKind::W, .. } => Family::PowerW,
            Head::Power { kind: PivotKind::U, .. } => Family::PowerU,
        }
    }

    /// Checks every index and exponent against `Ξ`.
    pub fn validate(&self, mat: &Materialized) -> Result<()> {
        let bad = Err(Error::DescriptorOutOfBounds);
        let n = self.length;
        if n > 0 && mat.len() < n {
            return Err(Error::TupleExhausted(mat.len()));
        }
        let ps = |i: usize| mat.ps(i).to_u64().unwrap_or(u64::MAX);
        let pr = |i: usize| mat.pr(i).to_u64().unwrap_or(u64::MAX);
        match self.head {
            Head::Generator(_) => {
                if n != 0 || !self.tail.is_empty() {
                    return bad;
                }
            }
            Head::Power { kind, m } => {
                let top = if kind == PivotKind::V { mat.s(n - 1) } else { mat.r(n - 1) };
                if n == 0 || m == 0 || m > top || !self.tail.is_empty() {
                    return bad;
                }
            }
            Head::First { xi, eta } => {
                let (a, b) = (ps(n - 1), pr(n - 1));
                if n == 0 || self.tail.len() != n - 1 || xi >= a || eta >= b || (xi == a - 1 && eta == b - 1)
                {
                    return bad;
                }
            }
            Head::Second { xi, zeta } => {
                let (a, b) = (ps(n - 1), pr(n - 1));
                if n == 0 || self.tail.len() != n - 1 || xi + 2 > a || zeta >= b {
                    return bad;
                }
            }
        }
        let second = self.family() == Family::Second;
        for (i, t) in self.tail.iter().enumerate() {
            if t[0] >= ps(i) || t[1] >= pr(i) || t[2] >= pr(i) || (!second && t[2] != 0) {
                return bad;
            }
        }
        Ok(())
    }

    /// The tail as a divided monomial.
    pub fn tail_monomial(&self) -> DpMonomial {
        DpMonomial::from_pairs(
            self.tail
                .iter()
                .enumerate()
                .flat_map(|(i, t)| [(Var::x(i), t[0]), (Var::y(i), t[1]), (Var::z(i), t[2])]),
        )
    }
}

impl fmt::Display for MonomialDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.length;
        let tail = self.tail_monomial();
        if !tail.is_one() {
            write!(f, "{tail}·")?;
        }
        match self.head {
            Head::Generator(k) => write!(f, "{k}0"),
            Head::First { xi, eta } => write!(f, "h{n}^({xi},{eta})"),
            Head::Second { xi, zeta } => write!(f, "g{n}^({xi},{zeta})"),
            Head::Power { kind, m } => write!(f, "{kind}{}^(p^{m})", n - 1),
        }
    }
}

fn big_int(x: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, x.clone())
}

/// Weight vector of `d`, from the pivot multidegrees.
pub fn monomial_weight_in(d: &MonomialDescriptor, mat: &Materialized) -> Result<WeightVector> {
    d.validate(mat)?;
    let n = d.length;
    let gr =
        |i: usize, k: PivotKind| -> [BigInt; 3] { mat.multidegree_raw(i, k).clone().map(|c| big_int(&c)) };
    let mut acc: [BigInt; 3] = Default::default();
    let mut add = |g: [BigInt; 3], c: BigInt| {
        for (a, g) in acc.iter_mut().zip(g) {
            *a += g * &c;
        }
    };
    match d.head {
        Head::Generator(k) => add(gr(0, k), BigInt::one()),
        Head::Power { kind, m } => add(gr(n - 1, kind), BigInt::from(mat.p()).pow(m)),
        Head::First { xi, eta } => {
            let (a, b) = (big_int(mat.ps(n - 1)), big_int(mat.pr(n - 1)));
            let (xi, eta) = (BigInt::from(xi), BigInt::from(eta));
            if eta <= &b - 2 {
                add(gr(n, PivotKind::V), BigInt::one());
                add(gr(n - 1, PivotKind::V), -(a - 1i32 - xi));
                add(gr(n - 1, PivotKind::W), -(b - 2i32 - eta));
            } else {
                add(gr(n, PivotKind::W), BigInt::one());
                add(gr(n - 1, PivotKind::V), -(a - 2i32 - xi));
                add(gr(n - 1, PivotKind::W), -(b - 1i32 - eta));
            }
        }
        Head::Second { xi, zeta } => {
            let (a, b) = (big_int(mat.ps(n - 1)), big_int(mat.pr(n - 1)));
            add(gr(n, PivotKind::U), BigInt::one());
            add(gr(n - 1, PivotKind::V), -(a - 2i32 - BigInt::from(xi)));
            add(gr(n - 1, PivotKind::U), -(b - 1i32 - BigInt::from(zeta)));
        }
    }
    for (i, t) in d.tail.iter().enumerate() {
        for (k, kind) in PivotKind::ALL.into_iter().enumerate() {
            add(gr(i, kind), -BigInt::from(t[k]));
        }
    }
    let out: Option<Vec<BigUint>> = acc.iter().map(|c| c.to_biguint()).collect();
    let out = out.ok_or(Error::DescriptorOutOfBounds)?;
    Ok(WeightVector::new([out[0].clone(), out[1].clone(), out[2].clone()]))
}

pub fn monomial_weight(d: &MonomialDescriptor, tuple: &ParameterTuple) -> Result<WeightVector> {
    monomial_weight_in(d, &tuple.materialized(d.length + 1)?)
}

/// The closed form `tail · head` as a derivation of `R_N`; requires `length < N`.
pub fn realize(d: &MonomialDescriptor, ctx: &DpContext) -> Result<Derivation> {
    if d.length >= ctx.depth() {
        return Err(Error::GenerationBeyondTruncation);
    }
    d.validate(ctx.weights())?;
    let tail = d.tail_monomial();
    let n = d.length;
    match d.head {
        Head::Generator(k) => derivations::pivot(ctx, k, 0),
        Head::First { xi, eta } => derivations::head_first_with_tail(ctx, n - 1, xi, eta, &tail),
        Head::Second { xi, zeta } => derivations::head_second_with_tail(ctx, n - 1, xi, zeta, &tail),
        Head::Power { kind, m } => derivations::pivot_power_with_tail(ctx, kind, n - 1, m, &tail),
    }
}

/// Builds a tail-free descriptor from the pivots by brackets and `p`-th powers:
/// `h_n^{ξ,η} = (ad v)^ξ (ad w)^η [w, v]`, `g_n^{ξ,ζ} = (ad v)^ξ (ad u)^ζ [v, u]`
/// with pivots of generation `n-1`. Returns `None` when the tail is nonempty.
pub fn realize_by_brackets(d: &MonomialDescriptor, ctx: &DpContext) -> Result<Option<Derivation>> {
    if !d.tail.is_empty() {
        return Ok(None);
    }
    if d.length >= ctx.depth() {
        return Err(Error::GenerationBeyondTruncation);
    }
    d.validate(ctx.weights())?;
    let n = d.length;
    let pv = |k| derivations::pivot(ctx, k, n.saturating_sub(1));
    let out = match d.head {
        Head::Generator(k) => derivations::pivot(ctx, k, 0)?,
        Head::Power { kind, m } => derivations::p_power_iter(ctx, &pv(kind)?, m)?,
        Head::First { xi, eta } => {
            let (v, w) = (pv(PivotKind::V)?, pv(PivotKind::W)?);
            let h = derivations::bracket(ctx, &w, &v);
            derivations::ad_power(ctx, &v, &derivations::ad_power(ctx, &w, &h, eta), xi)
        }
        Head::Second { xi, zeta } => {
            let (v, u) = (pv(PivotKind::V)?, pv(PivotKind::U)?);
            let g = derivations::bracket(ctx, &v, &u);
            derivations::ad_power(ctx, &v, &derivations::ad_power(ctx, &u, &g, zeta), xi)
        }
    };
    Ok(Some(out))
}

// ---------------------------------------------------------------------------
// Enumeration

/// Which families to list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyFilter(u8);

impl FamilyFilter {
    pub const ALL: FamilyFilter = FamilyFilter(0b11111);
    pub const STANDARD: FamilyFilter = FamilyFilter(0b00011);
    pub const POWER: FamilyFilter = FamilyFilter(0b11100);
    pub const FIRST_KIND: FamilyFilter = FamilyFilter(0b01101);
    pub const SECOND_KIND: FamilyFilter = FamilyFilter(0b10010);

    pub fn only(f: Family) -> Self {
        FamilyFilter(1 << f as u8)
    }

    pub fn contains(self, f: Family) -> bool {
        self.0 >> f as u8 & 1 == 1
    }
}

/// Every descriptor of weight at most `max_weight` accepted by `filter`,
/// sorted by total weight and then by descriptor.
pub fn enumerate(
    tuple: &ParameterTuple,
    filter: FamilyFilter,
    max_weight: u64,
) -> Result<Vec<(MonomialDescriptor, WeightVector)>> {
    let mut mat = tuple.materialized(1)?;
    let m = max_weight as u128;
    let mut out = Vec::new();
    if m >= 1 {
        for k in PivotKind::ALL {
            let d = MonomialDescriptor::generator(k);
            if filter.contains(d.family()) {
                out.push(d);
            }
        }
    }
    let mut n = 1usize;
    loop {
        // Minimal weight of a length-n monomial (second type), monotone in n.
        let mut min2 = 2u128;
        for j in 0..n.saturating_sub(1) {
            let pj = mat.weight(j).to_u128().ok_or(Error::TableTooLarge)?;
            min2 += (mat.ps(j).to_u128().ok_or(Error::TableTooLarge)? - 1) * pj;
        }
        if min2 > m {
            break;
        }
        mat.extend_to(n)?;
        let pw: Vec<u128> =
            (0..n).map(|j| mat.weight(j).to_u128()).collect::<Option<_>>().ok_or(Error::TableTooLarge)?;
        let a: Vec<u64> =
            (0..n).map(|j| mat.ps(j).to_u64()).collect::<Option<_>>().ok_or(Error::TableTooLarge)?;
        let b: Vec<u64> =
            (0..n).map(|j| mat.pr(j).to_u64()).collect::<Option<_>>().ok_or(Error::TableTooLarge)?;
        let p_top = pw[n - 1];
        let (an, bn) = (a[n - 1], b[n - 1]);
        if filter.contains(Family::First) {
            for xi in 0..an {
                for eta in 0..bn {
                    if xi == an - 1 && eta == bn - 1 {
                        continue;
                    }
                    let head = (xi + eta + 2) as u128 * p_top;
                    enumerate_tails(&pw, &a, &b, false, n - 1, head, m, &mut |tail| {
                        out.push(MonomialDescriptor::first(tail, xi, eta))
                    });
                }
            }
        }
        if filter.contains(Family::Second) {
            for xi in 0..an.saturating_sub(1) {
                for zeta in 0..bn {
                    let head = (xi + zeta + 2) as u128 * p_top;
                    enumerate_tails(&pw, &a, &b, true, n - 1, head, m, &mut |tail| {
                        out.push(MonomialDescriptor::second(tail, xi, zeta))
                    });
                }
            }
        }
        for (fam, kind, top) in [
            (Family::PowerV, PivotKind::V, mat.s(n - 1)),
            (Family::PowerW, PivotKind::W, mat.r(n - 1)),
            (Family::PowerU, PivotKind::U, mat.r(n - 1)),
        ] {
            if filter.contains(fam) {
                let mut w = p_top;
                for mm in 1..=top {
                    w = w.saturating_mul(tuple.p() as u128);
                    if w > m {
                        break;
                    }
                    out.push(MonomialDescriptor::power(kind, n, mm));
                }
            }
        }
        n += 1;
    }
    let mut weighted =
        out.into_iter().map(|d| monomial_weight_in(&d, &mat).map(|w| (d, w))).collect::<Result<Vec<_>>>()?;
    weighted.sort_by(|x, y| x.1.wt().cmp(y.1.wt()).then_with(|| x.0.cmp(&y.0)));
    Ok(weighted)
}

// Tails over generations 0..len whose deficiency brings `head` down to <= m.
#[allow(clippy::too_many_arguments)]
fn enumerate_tails(
    pw: &[u128],
    a: &[u64],
    b: &[u64],
    with_z: bool,
    len: usize,
    head: u128,
    m: u128,
    emit: &mut dyn FnMut(Vec<[u64; 3]>),
) {
    let cap = |j: usize| (a[j] - 1) + (b[j] - 1) + if with_z { b[j] - 1 } else { 0 };
    // dmax[j] = largest deficiency using generations < j.
    let mut dmax = alloc::vec![0u128; len + 1];
    for j in 0..len {
        dmax[j + 1] = dmax[j] + cap(j) as u128 * pw[j];
    }
    let need = head.saturating_sub(m);
    if need > dmax[len] {
        return;
    }
    let mut tail = alloc::vec![[0u64; 3]; len];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        j: usize,
        need: u128,
        pw: &[u128],
        a: &[u64],
        b: &[u64],
        with_z: bool,
        dmax: &[u128],
        tail: &mut Vec<[u64; 3]>,
        emit: &mut dyn FnMut(Vec<[u64; 3]>),
    ) {
        if j == 0 {
            if need == 0 {
                emit(tail.clone());
            }
            return;
        }
        let g = j - 1;
        let zs = if with_z { b[g] } else { 1 };
        for x in 0..a[g] {
            for y in 0..b[g] {
                for z in 0..zs {
                    let d = (x + y + z) as u128 * pw[g];
                    let rest = need.saturating_sub(d);
                    if rest > dmax[g] {
                        continue;
                    }
                    tail[g] = [x, y, z];
                    rec(g, rest, pw, a, b, with_z, dmax, tail, emit);
                }
            }
        }
        tail[g] = [0, 0, 0];
    }
    rec(len, need, pw, a, b, with_z, &dmax, &mut tail, emit);
}

// ---------------------------------------------------------------------------
// Counting

/// Counts per family of monomials with weight at most some `m`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FamilyCounts {
    pub first: BigUint,
    pub second: BigUint,
    pub power_v: BigUint,
    pub power_w: BigUint,
    pub power_u: BigUint,
}

impl FamilyCounts {
    pub fn power_first(&self) -> BigUint {
        &self.power_v + &self.power_w
    }

    pub fn power_second(&self) -> BigUint {
        self.power_u.clone()
    }

    pub fn total(&self) -> BigUint {
        &self.first + &self.second + &self.power_v + &self.power_w + &self.power_u
    }

    pub fn get(&self, f: Family) -> &BigUint {
        match f {
            Family::First => &self.first,
            Family::Second => &self.second,
            Family::PowerV => &self.power_v,
            Family::PowerW => &self.power_w,
            Family::PowerU => &self.power_u,
        }
    }

    fn get_mut(&mut self, f: Family) -> &mut BigUint {
        match f {
            Family::First => &mut self.first,
            Family::Second => &mut self.second,
            Family::PowerV => &mut self.power_v,
            Family::PowerW => &mut self.power_w,
            Family::PowerU => &mut self.power_u,
        }
    }

    fn add_assign(&mut self, o: &FamilyCounts) {
        for f in Family::ALL {
            *self.get_mut(f) += o.get(f);
        }
    }
}

fn tri2(k: &BigInt) -> BigInt {
    if k.is_negative() {
        return BigInt::zero();
    }
    (k + 1) * (k + 2) / 2
}

fn tri3(k: &BigInt) -> BigInt {
    if k.is_negative() {
        return BigInt::zero();
    }
    (k + 1) * (k + 2) * (k + 3) / 6
}

/// `#{0 ≤ e_i < caps_i : Σ e_i ≤ k}` by inclusion–exclusion; two or three caps.
fn bounded_prefix(k: &BigInt, caps: &[BigInt]) -> BigInt {
    let mut total = BigInt::zero();
    for mask in 0u32..(1 << caps.len()) {
        let mut shift = BigInt::zero();
        for (i, c) in caps.iter().enumerate() {
            if mask >> i & 1 == 1 {
                shift += c;
            }
        }
        let t = if caps.len() == 2 { tri2(&(k - shift)) } else { tri3(&(k - shift)) };
        if mask.count_ones() % 2 == 0 {
            total += t;
        } else {
            total -= t;
        }
    }
    total
}

/// `#{0 ≤ e_i < caps_i : lo ≤ Σ e_i ≤ hi}`.
fn bounded_range(lo: &BigInt, hi: &BigInt, caps: &[BigInt]) -> BigInt {
    if hi < lo {
        return BigInt::zero();
    }
    bounded_prefix(hi, caps) - bounded_prefix(&(lo - 1), caps)
}

fn ceil_div(x: &BigInt, d: &BigInt) -> BigInt {
    x.div_ceil(d)
}

// Tail model for one family: generation j has digit t_j ∈ [0, cap_j] with
// multiplicity given by `caps[j]`, and contributes t_j·P_j to the deficiency.
struct TailModel {
    caps: Vec<Vec<BigInt>>,
    top: Vec<BigInt>,
    pw: Vec<BigInt>,
    dmax: Vec<BigInt>,  // dmax[j]: largest deficiency over generations < j
    total: Vec<BigInt>, // total[j]: number of tails over generations < j
}

impl TailModel {
    fn new(mat: &Materialized, len: usize, with_z: bool) -> Self {
        let mut m = TailModel {
            caps: Vec::new(),
            top: Vec::new(),
            pw: Vec::new(),
            dmax: alloc::vec![BigInt::zero()],
            total: alloc::vec![BigInt::one()],
        };
        for j in 0..len {
            let a = big_int(mat.ps(j));
            let b = big_int(mat.pr(j));
            let caps = if with_z { alloc::vec![a, b.clone(), b] } else { alloc::vec![a, b] };
            let top: BigInt = caps.iter().map(|c| c - 1).sum();
            let card: BigInt = caps.iter().product();
            let pw = big_int(mat.weight(j));
            m.dmax.push(&m.dmax[j] + &top * &pw);
            m.total.push(&m.total[j] * card);
            m.caps.push(caps);
            m.top.push(top);
            m.pw.push(pw);
        }
        m
    }

    /// Number of tails over generations `< j` with deficiency `≥ k`.
    fn at_least(&self, j: usize, k: &BigInt, memo: &mut BTreeMap<(usize, BigInt), BigInt>) -> BigInt {
        if !k.is_positive() {
            return self.total[j].clone();
        }
        if j == 0 || k > &self.dmax[j] {
            return BigInt::zero();
        }
        if let Some(v) = memo.get(&(j, k.clone())) {
            return v.clone();
        }
        let g = j - 1;
        let (pw, top, caps) = (&self.pw[g], &self.top[g], &self.caps[g]);
        let full_from = ceil_div(k, pw);
        let mut res = BigInt::zero();
        if &full_from <= top {
            res += bounded_range(&full_from, top, caps) * &self.total[g];
        }
        let lo = ceil_div(&(k - &self.dmax[g]), pw).max(BigInt::zero());
        let hi: BigInt = (&full_from - 1i32).min(top.clone());
        let mut t = lo;
        while t <= hi {
            let mult = bounded_range(&t, &t, caps);
            if !mult.is_zero() {
                res += &mult * &self.at_least(g, &(k - &t * pw), memo);
            }
            t += 1;
        }
        memo.insert((j, k.clone()), res.clone());
        res
    }
}

/// Exact counting of monomials of bounded weight for one tuple, extending the
/// materialized prefix of `Ξ` on demand.
#[derive(Debug, Clone)]
pub struct GrowthCounter {
    mat: Materialized,
}

impl GrowthCounter {
    pub fn new(tuple: &ParameterTuple) -> Result<Self> {
        Ok(GrowthCounter { mat: tuple.materialized(0)? })
    }

    pub fn tuple(&self) -> &ParameterTuple {
        self.mat.tuple()
    }

    /// Materialized weights with at least `len` generations.
    pub fn materialized(&mut self, len: usize) -> Result<&Materialized> {
        self.mat.extend_to(len)?;
        Ok(&self.mat)
    }

    /// `2 + Σ_{j ≤ n-2} (p^{S_j} - 1) wt(v_j)`, the least weight of a length-`n` monomial.
    pub fn min_weight(&mut self, n: usize) -> Result<BigUint> {
        if n == 0 {
            return Ok(BigUint::one());
        }
        self.mat.extend_to(n - 1)?;
        let mut w = BigUint::from(2u32);
        for j in 0..n - 1 {
            w += (self.mat.ps(j) - 1u32) * self.mat.weight(j);
        }
        Ok(w)
    }

    /// Counts of length-`n` monomials of weight `≤ m`.
    pub fn length_counts(&mut self, n: usize, m: &BigUint) -> Result<FamilyCounts> {
        let mut out = FamilyCounts::default();
        if m.is_zero() {
            return Ok(out);
        }
        if n == 0 {
            out.first = BigUint::from(2u32);
            out.second = BigUint::one();
            return Ok(out);
        }
        if &self.min_weight(n)? > m {
            return Ok(out);
        }
        self.mat.extend_to(n)?;
        let mat = &self.mat;
        let mi = big_int(m);
        let pt = big_int(mat.weight(n - 1));
        let a = big_int(mat.ps(n - 1));
        let b = big_int(mat.pr(n - 1));
        let q = &mi / &pt;
        let hmax: BigInt = &a + &b - 3i32;
        for (with_z, fam) in [(false, Family::First), (true, Family::Second)] {
            let caps =
                if with_z { alloc::vec![&a - 1i32, b.clone()] } else { alloc::vec![a.clone(), b.clone()] };
            let tails = TailModel::new(mat, n - 1, with_z);
            // Heads with (h+2)·P ≤ m take every tail.
            let full_hi: BigInt = (&q - 2i32).min(hmax.clone());
            let mut count = bounded_range(&BigInt::zero(), &full_hi, &caps) * &tails.total[n - 1];
            let mut memo = BTreeMap::new();
            let mut h: BigInt = (&q - 1i32).max(BigInt::zero());
            while h <= hmax {
                let need: BigInt = (&h + 2i32) * &pt - &mi;
                if need > tails.dmax[n - 1] {
                    break;
                }
                let mult = bounded_range(&h, &h, &caps);
                if !mult.is_zero() {
                    count += &mult * &tails.at_least(n - 1, &need, &mut memo);
                }
                h += 1;
            }
            *out.get_mut(fam) = count.to_biguint().expect("counts are non-negative");
        }
        let p = BigUint::from(mat.p());
        for (fam, top) in
            [(Family::PowerV, mat.s(n - 1)), (Family::PowerW, mat.r(n - 1)), (Family::PowerU, mat.r(n - 1))]
        {
            let mut w = mat.weight(n - 1).clone();
            let mut c = 0u32;
            while c < top {
                w *= &p;
                if &w > m {
                    break;
                }
                c += 1;
            }
            *out.get_mut(fam) = BigUint::from(c);
        }
        Ok(out)
    }

    /// Cumulative counts of all monomials of weight `≤ m`.
    pub fn count_le(&mut self, m: &BigUint) -> Result<FamilyCounts> {
        let mut out = FamilyCounts::default();
        let mut n = 0;
        while &self.min_weight(n)? <= m {
            out.add_assign(&self.length_counts(n, m)?);
            n += 1;
        }
        Ok(out)
    }
}

/// One row of a growth table: cumulative counts at weight `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthRow {
    pub m: BigUint,
    pub counts: FamilyCounts,
}

impl GrowthRow {
    pub fn total(&self) -> BigUint {
        self.counts.total()
    }

    /// `ln γ̃(m) / ln m` as a decimal estimate; `None` at `m = 1`.
    pub fn log_ratio(&self) -> Option<f64> {
        if self.m <= BigUint::one() {
            return None;
        }
        let num = crate::interval::Interval::ln_big(&self.total());
        let den = crate::interval::Interval::ln_big(&self.m);
        Some((num / den).mid())
    }
}

/// Rows sorted by strictly increasing `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthTable {
    pub tuple: ParameterTuple,
    pub rows: Vec<GrowthRow>,
}

impl GrowthTable {
    pub fn row_at(&self, m: &BigUint) -> Option<&GrowthRow> {
        self.rows.binary_search_by(|r| r.m.cmp(m)).ok().map(|k| &self.rows[k])
    }
}

// Per-weight counts of one family at one length, for weights 1..=m.
fn dense_length_family(
    mat: &Materialized,
    n: usize,
    with_z: bool,
    m: usize,
    per_weight: &mut [u128],
) -> Result<()> {
    let too_large = || Error::TableTooLarge;
    let u = |x: &BigUint| x.to_u64().ok_or_else(too_large);
    let mut dist: Vec<u128> = alloc::vec![1];
    for j in 0..n - 1 {
        let (a, b, pw) = (u(mat.ps(j))?, u(mat.pr(j))?, u(mat.weight(j))? as usize);
        let mult = digit_multiplicities(a, b, with_z);
        let new_len = dist.len() + (mult.len() - 1) * pw;
        if new_len as u64 > 8 * DEFAULT_ROW_CAP {
            return Err(too_large());
        }
        let mut next = alloc::vec![0u128; new_len];
        for (d, &c) in dist.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (t, &k) in mult.iter().enumerate() {
                let slot = &mut next[d + t * pw];
                *slot = slot.checked_add(c.checked_mul(k).ok_or_else(too_large)?).ok_or_else(too_large)?;
            }
        }
        dist = next;
    }
    let (a, b, pt) = (u(mat.ps(n - 1))?, u(mat.pr(n - 1))?, u(mat.weight(n - 1))? as usize);
    let heads =
        if with_z { digit_multiplicities_caps(&[a - 1, b]) } else { digit_multiplicities_caps(&[a, b]) };
    // The first-type corner (h = a+b-2) is excluded; second-type heads stop at a+b-3 anyway.
    for (h, &hm) in heads.iter().enumerate().take((a + b - 2) as usize) {
        if hm == 0 {
            continue;
        }
        let head = (h + 2) * pt;
        let lo = head.saturating_sub(m);
        for (d, &c) in dist.iter().enumerate().take(head).skip(lo) {
            let w = head - d;
            per_weight[w] = per_weight[w].checked_add(hm * c).ok_or_else(too_large)?;
        }
    }
    Ok(())
}

fn digit_multiplicities(a: u64, b: u64, with_z: bool) -> Vec<u128> {
    if with_z {
        digit_multiplicities_caps(&[a, b, b])
    } else {
        digit_multiplicities_caps(&[a, b])
    }
}

// Coefficients of ∏ (1 + t + … + t^{c-1}).
fn digit_multiplicities_caps(caps: &[u64]) -> Vec<u128> {
    let mut poly = alloc::vec![1u128];
    for &c in caps {
        let c = c as usize;
        let mut next = alloc::vec![0u128; poly.len() + c - 1];
        let mut window = 0u128;
        for (k, slot) in next.iter_mut().enumerate() {
            if k < poly.len() {
                window += poly[k];
            }
            if k >= c && k - c < poly.len() {
                window -= poly[k - c];
            }
            *slot = window;
        }
        poly = next;
    }
    poly
}

/// Dense table with one row per weight `1..=max_weight`, computed by convolving
/// tail distributions. Independent of [`GrowthCounter`].
pub fn growth_table(tuple: &ParameterTuple, max_weight: u64) -> Result<GrowthTable> {
    growth_table_capped(tuple, max_weight, DEFAULT_ROW_CAP)
}

pub fn growth_table_capped(tuple: &ParameterTuple, max_weight: u64, row_cap: u64) -> Result<GrowthTable> {
    if max_weight > row_cap {
        return Err(Error::TableTooLarge);
    }
    let m = max_weight as usize;
    let mut counter = GrowthCounter::new(tuple)?;
    let mut per: [Vec<u128>; 5] = core::array::from_fn(|_| alloc::vec![0u128; m + 1]);
    if m >= 1 {
        per[Family::First as usize][1] = 2;
        per[Family::Second as usize][1] = 1;
    }
    let mut n = 1;
    while counter.min_weight(n)? <= BigUint::from(max_weight) {
        let mat = counter.materialized(n)?.clone();
        dense_length_family(&mat, n, false, m, &mut per[Family::First as usize])?;
        dense_length_family(&mat, n, true, m, &mut per[Family::Second as usize])?;
        let p = mat.p() as u128;
        for (fam, top) in
            [(Family::PowerV, mat.s(n - 1)), (Family::PowerW, mat.r(n - 1)), (Family::PowerU, mat.r(n - 1))]
        {
            let mut w = mat.weight(n - 1).to_u128().unwrap_or(u128::MAX);
            for _ in 0..top {
                w = w.saturating_mul(p);
                if w > m as u128 {
                    break;
                }
                per[fam as usize][w as usize] += 1;
            }
        }
        n += 1;
    }
    let mut rows = Vec::with_capacity(m);
    let mut acc = [0u128; 5];
    for w in 1..=m {
        for (a, col) in acc.iter_mut().zip(&per) {
            *a += col[w];
        }
        rows.push(GrowthRow {
            m: BigUint::from(w as u64),
            counts: FamilyCounts {
                first: BigUint::from(acc[0]),
                second: BigUint::from(acc[1]),
                power_v: BigUint::from(acc[2]),
                power_w: BigUint::from(acc[3]),
                power_u: BigUint::from(acc[4]),
            },
        });
    }
    Ok(GrowthTable { tuple: tuple.clone(), rows })
}

/// Table at the given weights only, via [`GrowthCounter`]; the weights are sorted and deduplicated.
pub fn sampled_table(tuple: &ParameterTuple, weights: &[BigUint]) -> Result<GrowthTable> {
    let mut ms: Vec<BigUint> = weights.iter().filter(|m| !m.is_zero()).cloned().collect();
    ms.sort();
    ms.dedup();
    let mut counter = GrowthCounter::new(tuple)?;
    let rows = ms
        .into_iter()
        .map(|m| counter.count_le(&m).map(|counts| GrowthRow { m, counts }))
        .collect::<Result<Vec<_>>>()?;
    Ok(GrowthTable { tuple: tuple.clone(), rows })
}

/// A sample of weights up to `max`: every weight up to `dense`, then roughly
/// `per_octave` points per doubling, plus each `wt(v_n)` and its neighbours and small multiples.
pub fn sample_weights(
    tuple: &ParameterTuple,
    max: &BigUint,
    dense: u64,
    per_octave: u32,
) -> Result<Vec<BigUint>> {
    let mut out: Vec<BigUint> = (1..=dense).map(BigUint::from).filter(|m| m <= max).collect();
    let mut base = BigUint::from(dense.max(1));
    while &base <= max {
        for k in 0..per_octave.max(1) {
            let m = &base + (&base * k) / per_octave.max(1);
            if &m <= max {
                out.push(m);
            }
        }
        base <<= 1;
    }
    let mut counter = GrowthCounter::new(tuple)?;
    let mut n = 0;
    loop {
        let w = counter.materialized(n)?.weight(n).clone();
        if &w > max {
            break;
        }
        for c in 1u32..=6 {
            for m in [&w * c - 1u32, &w * c, &w * c + 1u32] {
                if &m <= max && !m.is_zero() {
                    out.push(m);
                }
            }
        }
        n += 1;
    }
    out.push(max.clone());
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn t(p: u32, s: u32, r: u32) -> ParameterTuple {
        ParameterTuple::constant(p, s, r).unwrap()
    }

    fn ctx(p: u32, s: u32, r: u32, n: usize) -> DpContext {
        DpContext::new(&t(p, s, r), n).unwrap()
    }

    #[test]
    fn weight_examples() {
        let c = t(2, 1, 1);
        let w = |d: &MonomialDescriptor| monomial_weight(d, &c).unwrap().wt().to_u64().unwrap();
        assert_eq!(w(&MonomialDescriptor::generator(PivotKind::V)), 1);
        assert_eq!(w(&MonomialDescriptor::power(PivotKind::V, 1, 1)), 2);
        assert_eq!(w(&MonomialDescriptor::second(alloc::vec![], 0, 0)), 2);
        let d = MonomialDescriptor::power(PivotKind::V, 1, 1);
        assert_eq!(monomial_weight(&d, &c).unwrap().gr(), &[2u32, 0, 0].map(BigUint::from));
        let bad = MonomialDescriptor::first(alloc::vec![], 1, 1);
        assert_eq!(monomial_weight(&bad, &c), Err(Error::DescriptorOutOfBounds));
    }

    #[test]
    fn realize_examples() {
        let c = ctx(3, 1, 1, 3);
        let v1 = derivations::pivot(&c, PivotKind::V, 1).unwrap();
        let w1 = derivations::pivot(&c, PivotKind::W, 1).unwrap();
        let u1 = derivations::pivot(&c, PivotKind::U, 1).unwrap();
        assert_eq!(realize(&MonomialDescriptor::first(alloc::vec![], 2, 1), &c).unwrap(), v1);
        assert_eq!(realize(&MonomialDescriptor::second(alloc::vec![], 1, 2), &c).unwrap(), u1);
        assert_eq!(realize(&MonomialDescriptor::first(alloc::vec![], 1, 2), &c).unwrap(), w1.scaled(&c, 2));
        let long = MonomialDescriptor::first(alloc::vec![[0, 0, 0], [0, 0, 0]], 0, 0);
        assert_eq!(realize(&long, &c), Err(Error::GenerationBeyondTruncation));
    }

    #[test]
    fn realize_agrees_with_brackets_and_weights() {
        for (p, s, r) in [(2, 1, 1), (3, 1, 1), (2, 2, 1), (2, 1, 2)] {
            let c = ctx(p, s, r, 3);
            for (d, w) in enumerate(c.tuple(), FamilyFilter::ALL, 40).unwrap() {
                if d.length + 1 > c.depth() {
                    continue;
                }
                let x = realize(&d, &c).unwrap();
                assert!(!x.is_zero(), "{d}");
                if let Some(y) = realize_by_brackets(&d, &c).unwrap() {
                    assert_eq!(x, y, "{d}");
                }
                let g = derivations::multidegree(&c, &x).expect("homogeneous");
                let want = w.to_u64_triple().unwrap().map(|v| v as i128);
                assert_eq!(g, want, "{d}");
            }
        }
    }

    #[test]
    fn enumerate_examples() {
        let c = t(2, 1, 1);
        let gens: Vec<_> = enumerate(&c, FamilyFilter::ALL, 1).unwrap().into_iter().map(|x| x.0).collect();
        assert_eq!(gens, PivotKind::ALL.map(MonomialDescriptor::generator).to_vec());
        let pw: Vec<_> =
            enumerate(&c, FamilyFilter::POWER, 2).unwrap().into_iter().map(|x| x.0.to_string()).collect();
        assert_eq!(pw, ["v0^(p^1)", "w0^(p^1)", "u0^(p^1)"]);
    }

    #[test]
    fn bounds_conformance() {
        for tup in [
            t(2, 1, 1),
            t(3, 2, 1),
            t(2, 1, 2),
            ParameterTuple::parse(2, "explicit:2,1;1,2;3,1;1,1;1,1;1,1;1,1").unwrap(),
        ] {
            let mat = tup.materialized(6).unwrap();
            for (d, w) in enumerate(&tup, FamilyFilter::ALL, 300).unwrap() {
                let n = d.length;
                let wt = w.wt();
                if n == 0 {
                    assert_eq!(wt, &BigUint::one());
                    continue;
                }
                assert!(wt <= mat.weight(n), "{d}");
                match d.family() {
                    Family::Second => {
                        if n >= 2 {
                            assert!(wt > &((mat.ps(n - 2) - 1u32) * mat.weight(n - 2)), "{d}");
                        }
                        if let Head::Second { xi, zeta } = d.head {
                            assert!(wt <= &(mat.weight(n - 1) * (xi + zeta + 2)));
                            if xi + zeta > 0 {
                                assert!(wt > mat.weight(n - 1));
                            }
                        }
                    }
                    _ => assert!(wt > mat.weight(n - 1), "{d}"),
                }
            }
        }
    }

    #[test]
    fn power_counts_per_length() {
        // S_n + R_n first-type and R_n second-type powers of each pivot.
        let tup = ParameterTuple::parse(3, "explicit:2,3;1,1;1,1;1,1;1,1").unwrap();
        let all = enumerate(&tup, FamilyFilter::POWER, 2_000).unwrap();
        let len1: Vec<_> = all.iter().filter(|(d, _)| d.length == 1).map(|(d, _)| d.family()).collect();
        assert_eq!(len1.iter().filter(|f| f.is_first_kind()).count(), 5);
        assert_eq!(len1.iter().filter(|f| **f == Family::PowerU).count(), 3);
    }

    fn enumerated_counts(tup: &ParameterTuple, m: u64) -> FamilyCounts {
        let mut c = FamilyCounts::default();
        for (d, _) in enumerate(tup, FamilyFilter::ALL, m).unwrap() {
            *c.get_mut(d.family()) += 1u32;
        }
        c
    }

    #[test]
    fn three_routes_agree() {
        for tup in
            [t(2, 1, 1), t(3, 1, 1), t(2, 2, 1), t(5, 1, 2), ParameterTuple::parse(2, "kappa:0.5").unwrap()]
        {
            let table = growth_table(&tup, 400).unwrap();
            let mut counter = GrowthCounter::new(&tup).unwrap();
            for m in [1u64, 2, 3, 5, 8, 9, 10, 27, 28, 100, 243, 400] {
                let dense = &table.rows[m as usize - 1].counts;
                assert_eq!(&counter.count_le(&BigUint::from(m)).unwrap(), dense, "{tup} m={m}");
                assert_eq!(&enumerated_counts(&tup, m), dense, "{tup} m={m}");
            }
        }
    }

    #[test]
    fn generator_row() {
        let table = growth_table(&t(2, 1, 1), 3).unwrap();
        assert_eq!(table.rows[0].total(), BigUint::from(3u32));
        assert!(growth_table_capped(&t(2, 1, 1), 100, 10).is_err());
    }

    #[test]
    fn huge_weights_are_counted() {
        let tup = ParameterTuple::parse(2, "qkappa:1,1").unwrap();
        let mut counter = GrowthCounter::new(&tup).unwrap();
        let w3 = counter.materialized(3).unwrap().weight(3).clone();
        assert!(w3.bits() > 250);
        let at = counter.count_le(&w3).unwrap();
        let below = counter.count_le(&(&w3 - 1u32)).unwrap();
        assert!(at.total() > below.total());
        // wt(v_3) itself: v_3, w_3 and u_3 are among the monomials of that weight.
        assert!(at.total() - below.total() >= BigUint::from(3u32));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn dense_and_digit_counts_agree(
            p in prop::sample::select(alloc::vec![2u32, 3]),
            v in prop::collection::vec((1u32..=2, 1u32..=2), 6),
            ms in prop::collection::vec(1u64..3000, 5),
        ) {
            let tup = ParameterTuple::new(p, crate::params::TupleRule::Explicit(v)).unwrap();
            let Ok(table) = growth_table(&tup, 3000) else { return Ok(()) };
            let mut counter = GrowthCounter::new(&tup).unwrap();
            let mut prev = BigUint::zero();
            for row in &table.rows {
                prop_assert!(row.total() >= prev);
                prev = row.total();
            }
            for m in ms {
                prop_assert_eq!(&counter.count_le(&BigUint::from(m)).unwrap(), &table.rows[m as usize - 1].counts);
            }
        }
    }
}
