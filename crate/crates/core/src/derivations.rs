//! Special derivations `Σ f_{a,j} ∂_a^{p^j}` of `R_N`, the pivot elements,
//! brackets and `p`-th powers.
//!
//! The operators `∂_a^{p^j}` pairwise commute and each is a derivation of the
//! divided power algebra, so the bracket has the closed form
//! `[f∂α, g∂β] = f·∂α(g)·∂β − g·∂β(f)·∂α`. Keeping `∂_a^{p^j}` as a basis
//! symbol (instead of only `∂_a`) is what makes `p`-th powers representable.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::dpalgebra::{AlgebraElement, DpContext, DpMonomial, Letter, Var, DEFAULT_BASIS_CAP};
use crate::params::PivotKind;
use crate::report::VerificationReport;
use crate::{Error, Result};

/// The operator `∂_var^{p^level}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partial {
    pub var: Var,
    pub level: u32,
}

impl Partial {
    pub fn new(var: Var, level: u32) -> Self {
        Partial { var, level }
    }
}

impl fmt::Display for Partial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level == 0 {
            write!(f, "∂_{{{}}}", self.var)
        } else {
            write!(f, "∂_{{{}}}^(p^{})", self.var, self.level)
        }
    }
}

/// A finite sum `Σ f_k ∂_k` with no zero coefficients stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Derivation {
    terms: BTreeMap<Partial, AlgebraElement>,
}

impl Derivation {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn partial(var: Var, level: u32) -> Self {
        Self::term(AlgebraElement::one(), Partial::new(var, level))
    }

    pub fn term(f: AlgebraElement, d: Partial) -> Self {
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(d, f);
        }
        Derivation { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Partial, &AlgebraElement)> + '_ {
        self.terms.iter().map(|(&k, f)| (k, f))
    }

    pub fn coefficient(&self, d: Partial) -> AlgebraElement {
        self.terms.get(&d).cloned().unwrap_or_default()
    }

    /// Coefficient of `m·d`.
    pub fn term_coefficient(&self, d: Partial, m: &DpMonomial) -> u32 {
        self.terms.get(&d).map_or(0, |f| f.coefficient(m))
    }

    /// Number of `(monomial, ∂)` terms.
    pub fn support_size(&self) -> usize {
        self.terms.values().map(|f| f.len()).sum()
    }

    /// Every `(∂, monomial, coefficient)` triple in canonical order.
    pub fn flat_terms(&self) -> impl Iterator<Item = (Partial, &DpMonomial, u32)> + '_ {
        self.terms.iter().flat_map(|(&k, f)| f.terms().map(move |(m, c)| (k, m, c)))
    }

    /// The canonically first term, used as the echelon pivot.
    pub fn leading_term(&self) -> Option<(Partial, &DpMonomial, u32)> {
        self.flat_terms().next()
    }

    pub fn add_coefficient(&mut self, ctx: &DpContext, d: Partial, f: &AlgebraElement, c: u32) {
        if f.is_zero() || c == 0 {
            return;
        }
        let slot = self.terms.entry(d).or_default();
        slot.add_scaled(ctx.fp(), f, c);
        if slot.is_zero() {
            self.terms.remove(&d);
        }
    }

    pub fn add_term(&mut self, ctx: &DpContext, d: Partial, m: DpMonomial, c: u32) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(d).or_default();
        slot.add_term(ctx.fp(), m, c);
        if slot.is_zero() {
            self.terms.remove(&d);
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, ctx: &DpContext, other: &Derivation, c: u32) {
        for (&d, f) in &other.terms {
            self.add_coefficient(ctx, d, f, c);
        }
    }

    pub fn add(&self, ctx: &DpContext, other: &Derivation) -> Derivation {
        let mut out = self.clone();
        out.add_scaled(ctx, other, 1);
        out
    }

    pub fn sub(&self, ctx: &DpContext, other: &Derivation) -> Derivation {
        let mut out = self.clone();
        out.add_scaled(ctx, other, ctx.fp().neg(1));
        out
    }

    pub fn scaled(&self, ctx: &DpContext, c: u32) -> Derivation {
        let mut out = Derivation::zero();
        out.add_scaled(ctx, self, c);
        out
    }

    /// `f · self`.
    pub fn mul_coefficient(&self, ctx: &DpContext, f: &AlgebraElement) -> Derivation {
        let mut out = Derivation::zero();
        for (&d, g) in &self.terms {
            out.add_coefficient(ctx, d, &ctx.mul(f, g), 1);
        }
        out
    }

    /// Renames every variable `shift` generations later.
    pub fn shifted(&self, shift: usize) -> Derivation {
        Derivation {
            terms: self
                .terms
                .iter()
                .map(|(d, f)| (Partial::new(d.var.shifted(shift), d.level), f.shifted(shift)))
                .collect(),
        }
    }

    /// Largest generation of any variable or operator appearing.
    pub fn max_generation(&self) -> Option<usize> {
        self.flat_terms().map(|(d, m, _)| d.var.generation().max(m.max_generation().unwrap_or(0))).max()
    }

    pub fn in_context(&self, ctx: &DpContext) -> bool {
        self.terms.iter().all(|(d, f)| {
            d.var.generation() < ctx.depth() && d.level < ctx.levels(d.var) && ctx.element_in_bounds(f)
        })
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (d, m, c)) in self.flat_terms().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            match (c, m.is_one()) {
                (1, true) => write!(f, "{d}")?,
                (1, false) => write!(f, "{m}·{d}")?,
                (c, true) => write!(f, "{c}·{d}")?,
                (c, false) => write!(f, "{c}·{m}·{d}")?,
            }
        }
        Ok(())
    }
}

fn kind_letter(kind: PivotKind) -> Letter {
    match kind {
        PivotKind::V => Letter::X,
        PivotKind::W => Letter::Y,
        PivotKind::U => Letter::Z,
    }
}

/// The recursion coefficient of generation `i`: `x^(a-1) y^(b-1)` for `v, w`,
/// `z^(b-1) x^(a-1)` for `u`.
pub fn corner_monomial(ctx: &DpContext, kind: PivotKind, i: usize) -> DpMonomial {
    let second = if kind == PivotKind::U { Var::z(i) } else { Var::y(i) };
    DpMonomial::from_pairs([(Var::x(i), ctx.a(i) - 1), (second, ctx.b(i) - 1)])
}

/// `v_i`, `w_i` or `u_i` restricted to `R_N`: the expansion stops at `∂` of generation `N-1`.
pub fn pivot(ctx: &DpContext, kind: PivotKind, i: usize) -> Result<Derivation> {
    pivot_with_prefix(ctx, kind, i, DpMonomial::one())
}

// prefix · pivot(kind, i); the prefix must not involve generations >= i.
fn pivot_with_prefix(ctx: &DpContext, kind: PivotKind, i: usize, prefix: DpMonomial) -> Result<Derivation> {
    if i > ctx.depth() {
        return Err(Error::GenerationBeyondTruncation);
    }
    let letter = kind_letter(kind);
    let mut out = Derivation::zero();
    let mut coef = prefix;
    for k in i..ctx.depth() {
        out.terms.insert(Partial::new(Var::new(k, letter), 0), AlgebraElement::monomial(coef.clone(), 1));
        let (_, next) = ctx
            .mul_monomials(&coef, &corner_monomial(ctx, kind, k))
            .expect("corner factors touch a fresh generation");
        coef = next;
    }
    Ok(out)
}

/// `D(f) = Σ f_k ∂_k(f)`.
pub fn apply(ctx: &DpContext, d: &Derivation, f: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (k, coef) in d.terms() {
        let df = ctx.derive(k.var, k.level, f);
        if !df.is_zero() {
            out.add_scaled(ctx.fp(), &ctx.mul(coef, &df), 1);
        }
    }
    out
}

/// `D` applied `n` times.
pub fn apply_iter(ctx: &DpContext, d: &Derivation, f: &AlgebraElement, n: u64) -> AlgebraElement {
    let mut g = f.clone();
    for _ in 0..n {
        if g.is_zero() {
            break;
        }
        g = apply(ctx, d, &g);
    }
    g
}

/// Checked variant of [`apply`].
pub fn try_apply(ctx: &DpContext, d: &Derivation, f: &AlgebraElement) -> Result<AlgebraElement> {
    if !d.in_context(ctx) || !ctx.element_in_bounds(f) {
        return Err(Error::ContextMismatch);
    }
    Ok(apply(ctx, d, f))
}

/// `[D, E]` by the closed form.
pub fn bracket(ctx: &DpContext, d: &Derivation, e: &Derivation) -> Derivation {
    let fp = ctx.fp();
    let mut out = Derivation::zero();
    for (a, f) in d.terms() {
        for (b, g) in e.terms() {
            let ag = ctx.derive(a.var, a.level, g);
            if !ag.is_zero() {
                out.add_coefficient(ctx, b, &ctx.mul(f, &ag), 1);
            }
            let bf = ctx.derive(b.var, b.level, f);
            if !bf.is_zero() {
                out.add_coefficient(ctx, a, &ctx.mul(g, &bf), fp.neg(1));
            }
        }
    }
    out
}

pub fn try_bracket(ctx: &DpContext, d: &Derivation, e: &Derivation) -> Result<Derivation> {
    if !d.in_context(ctx) || !e.in_context(ctx) {
        return Err(Error::ContextMismatch);
    }
    Ok(bracket(ctx, d, e))
}

/// `(ad D)^n (E)`.
pub fn ad_power(ctx: &DpContext, d: &Derivation, e: &Derivation, n: u64) -> Derivation {
    let mut out = e.clone();
    for _ in 0..n {
        if out.is_zero() {
            break;
        }
        out = bracket(ctx, d, &out);
    }
    out
}

/// `D^p`, reconstructed from its values on the generators `t^(p^k)`.
pub fn p_power(ctx: &DpContext, d: &Derivation) -> Result<Derivation> {
    p_power_checked(ctx, d, false)
}

/// [`p_power`], optionally compared against `p`-fold application on every basis monomial.
pub fn p_power_checked(ctx: &DpContext, d: &Derivation, verify: bool) -> Result<Derivation> {
    let p = ctx.p() as u64;
    let fp = ctx.fp();
    let mut out = Derivation::zero();
    if d.is_zero() {
        return Ok(out);
    }
    for var in ctx.variables() {
        let mut found: Vec<AlgebraElement> = Vec::new();
        for k in 0..ctx.levels(var) {
            let pk = p.pow(k);
            let img = apply_iter(ctx, d, &ctx.var_power(var, pk), p);
            // The candidate so far sends t^(p^k) to Σ_{j<k} f_j t^(p^k - p^j).
            let mut fk = img;
            for (j, fj) in found.iter().enumerate() {
                let shifted = ctx.mul(fj, &ctx.var_power(var, pk - p.pow(j as u32)));
                fk.add_scaled(fp, &shifted, fp.neg(1));
            }
            out.add_coefficient(ctx, Partial::new(var, k), &fk, 1);
            found.push(fk);
        }
    }
    if verify {
        for m in ctx.basis(DEFAULT_BASIS_CAP)? {
            let f = AlgebraElement::monomial(m, 1);
            if apply_iter(ctx, d, &f, p) != apply(ctx, &out, &f) {
                return Err(Error::PowerReconstruction);
            }
        }
    }
    Ok(out)
}

/// `D^{p^m}`.
pub fn p_power_iter(ctx: &DpContext, d: &Derivation, m: u32) -> Result<Derivation> {
    let mut out = d.clone();
    for _ in 0..m {
        if out.is_zero() {
            break;
        }
        out = p_power(ctx, &out)?;
    }
    Ok(out)
}

/// Two derivations agree as operators on every basis monomial of `R_N`.
pub fn operator_eq(ctx: &DpContext, d: &Derivation, e: &Derivation) -> Result<bool> {
    for m in ctx.basis(DEFAULT_BASIS_CAP)? {
        let f = AlgebraElement::monomial(m, 1);
        if apply(ctx, d, &f) != apply(ctx, e, &f) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Gr` of the term `m · ∂`, in signed coordinates.
pub fn term_multidegree(ctx: &DpContext, d: Partial, m: &DpMonomial) -> [i128; 3] {
    let scale = (ctx.p() as i128).pow(d.level);
    let mut g = ctx.var_degree(d.var).map(|c| c * scale);
    for (v, e) in m.iter() {
        let dv = ctx.var_degree(v);
        for c in 0..3 {
            g[c] -= e as i128 * dv[c];
        }
    }
    g
}

/// Splits `D` into its multidegree-homogeneous parts.
pub fn homogeneous_parts(ctx: &DpContext, d: &Derivation) -> BTreeMap<[i128; 3], Derivation> {
    let mut parts: BTreeMap<[i128; 3], Derivation> = BTreeMap::new();
    for (k, m, c) in d.flat_terms() {
        parts.entry(term_multidegree(ctx, k, m)).or_default().add_term(ctx, k, m.clone(), c);
    }
    parts
}

/// The common multidegree of all terms, if `D` is nonzero and homogeneous.
pub fn multidegree(ctx: &DpContext, d: &Derivation) -> Option<[i128; 3]> {
    let mut it = d.flat_terms().map(|(k, m, _)| term_multidegree(ctx, k, m));
    let first = it.next()?;
    it.all(|g| g == first).then_some(first)
}

/// First-type head of length `i+1`:
/// `x_i^(a-1-ξ) y_i^(b-2-η) v_{i+1} − x_i^(a-2-ξ) y_i^(b-1-η) w_{i+1}`,
/// a term with a negative exponent being absent.
pub fn head_first(ctx: &DpContext, i: usize, xi: u64, eta: u64) -> Result<Derivation> {
    head_first_with_tail(ctx, i, xi, eta, &DpMonomial::one())
}

pub(crate) fn head_first_with_tail(
    ctx: &DpContext,
    i: usize,
    xi: u64,
    eta: u64,
    tail: &DpMonomial,
) -> Result<Derivation> {
    let (a, b) = (ctx.a(i), ctx.b(i));
    if i + 1 > ctx.depth() || xi >= a || eta >= b || (xi == a - 1 && eta == b - 1) {
        return Err(Error::DescriptorOutOfBounds);
    }
    let with = |ex: i128, ey: i128| -> Option<DpMonomial> {
        (ex >= 0 && ey >= 0).then(|| {
            let mut pairs: Vec<(Var, u64)> = tail.iter().collect();
            pairs.push((Var::x(i), ex as u64));
            pairs.push((Var::y(i), ey as u64));
            DpMonomial::from_pairs(pairs)
        })
    };
    let (a, b, xi, eta) = (a as i128, b as i128, xi as i128, eta as i128);
    let mut out = Derivation::zero();
    if let Some(m) = with(a - 1 - xi, b - 2 - eta) {
        out = pivot_with_prefix(ctx, PivotKind::V, i + 1, m)?;
    }
    if let Some(m) = with(a - 2 - xi, b - 1 - eta) {
        let w = pivot_with_prefix(ctx, PivotKind::W, i + 1, m)?;
        out.add_scaled(ctx, &w, ctx.fp().neg(1));
    }
    Ok(out)
}

/// Second-type head of length `i+1`: `x_i^(a-2-ξ) z_i^(b-1-ζ) u_{i+1}`.
pub fn head_second(ctx: &DpContext, i: usize, xi: u64, zeta: u64) -> Result<Derivation> {
    head_second_with_tail(ctx, i, xi, zeta, &DpMonomial::one())
}

pub(crate) fn head_second_with_tail(
    ctx: &DpContext,
    i: usize,
    xi: u64,
    zeta: u64,
    tail: &DpMonomial,
) -> Result<Derivation> {
    let (a, b) = (ctx.a(i), ctx.b(i));
    if i + 1 > ctx.depth() || xi + 2 > a || zeta >= b {
        return Err(Error::DescriptorOutOfBounds);
    }
    let mut pairs: Vec<(Var, u64)> = tail.iter().collect();
    pairs.push((Var::x(i), a - 2 - xi));
    pairs.push((Var::z(i), b - 1 - zeta));
    pivot_with_prefix(ctx, PivotKind::U, i + 1, DpMonomial::from_pairs(pairs))
}

/// `tail · pivot^{p^m}` by the closed form
/// `∂^{p^m} + t^(bound - p^m) c^(·) next`, where the `∂` term is absent once `p^m` reaches the bound.
pub(crate) fn pivot_power_with_tail(
    ctx: &DpContext,
    kind: PivotKind,
    i: usize,
    m: u32,
    tail: &DpMonomial,
) -> Result<Derivation> {
    if i >= ctx.depth() {
        return Err(Error::GenerationBeyondTruncation);
    }
    let own = Var::new(i, kind_letter(kind));
    let levels = ctx.levels(own);
    if m > levels {
        return Err(Error::DescriptorOutOfBounds);
    }
    let step = (ctx.p() as u64).pow(m);
    let corner = corner_monomial(ctx, kind, i);
    let coef = DpMonomial::from_pairs(tail.iter().chain(corner.iter().map(|(v, e)| {
        if v == own {
            (v, e + 1 - step)
        } else {
            (v, e)
        }
    })));
    let mut out = pivot_with_prefix(ctx, kind, i + 1, coef)?;
    if m < levels {
        out.add_term(ctx, Partial::new(own, m), tail.clone(), 1);
    }
    Ok(out)
}

/// `pivot(kind, i)^{p^m}` by its closed form.
pub fn pivot_power(ctx: &DpContext, kind: PivotKind, i: usize, m: u32) -> Result<Derivation> {
    pivot_power_with_tail(ctx, kind, i, m, &DpMonomial::one())
}

/// The Jacobson polynomials `s_1, …, s_{p-1}` with
/// `(D+E)^p = D^p + E^p + Σ s_i(D, E)`, where `i·s_i` is the coefficient of
/// `t^{i-1}` in `ad(tD+E)^{p-1}(D)`. Computed by expanding all words.
pub fn jacobson_terms(ctx: &DpContext, d: &Derivation, e: &Derivation) -> Vec<Derivation> {
    let p = ctx.p() as usize;
    let fp = ctx.fp();
    let mut sums = alloc::vec![Derivation::zero(); p];
    for word in 0u64..(1u64 << (p - 1)) {
        let mut acc = d.clone();
        let mut ds = 0;
        for pos in 0..p - 1 {
            let use_d = word >> pos & 1 == 1;
            ds += use_d as usize;
            acc = bracket(ctx, if use_d { d } else { e }, &acc);
            if acc.is_zero() {
                break;
            }
        }
        sums[ds].add_scaled(ctx, &acc, 1);
    }
    (1..p).map(|i| sums[i - 1].scaled(ctx, fp.inv(i as u32))).collect()
}

fn pivots(ctx: &DpContext, i: usize) -> Result<[Derivation; 3]> {
    Ok([pivot(ctx, PivotKind::V, i)?, pivot(ctx, PivotKind::W, i)?, pivot(ctx, PivotKind::U, i)?])
}

/// The basic relations among pivots of one generation, for every generation `i` with `i + 1 < N`:
/// pivot powers for every admissible exponent, `[w^{p^R-1}, v^{p^S}] = v_{i+1}` and its
/// two siblings, the brackets `[w,v]`, `[v,u]`, `[w,u]`, and every head cell of both
/// types in both multiplication orders.
pub fn relation_suite(ctx: &DpContext) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new();
    let fp = ctx.fp();
    for i in 0..ctx.depth().saturating_sub(1) {
        let [v, w, u] = pivots(ctx, i)?;
        let [v1, w1, u1] = pivots(ctx, i + 1)?;
        let s = ctx.levels(Var::x(i));
        let r = ctx.levels(Var::y(i));
        for (kind, base, top) in [(PivotKind::V, &v, s), (PivotKind::W, &w, r), (PivotKind::U, &u, r)] {
            let mut pw = base.clone();
            for m in 0..=top {
                if m > 0 {
                    pw = p_power(ctx, &pw)?;
                }
                let want = pivot_power(ctx, kind, i, m)?;
                rep.check(
                    alloc::format!("pivot-power/{kind}/i={i}/m={m}"),
                    pw == want,
                    if pw == want {
                        alloc::string::String::new()
                    } else {
                        alloc::format!("got {pw}; want {want}")
                    },
                );
            }
        }
        // Top powers, as products with a single coefficient.
        let vs = p_power_iter(ctx, &v, s)?;
        let wr = p_power_iter(ctx, &w, r)?;
        let ur = p_power_iter(ctx, &u, r)?;
        let y_top = AlgebraElement::monomial(DpMonomial::var(Var::y(i), ctx.b(i) - 1), 1);
        let x_top = AlgebraElement::monomial(DpMonomial::var(Var::x(i), ctx.a(i) - 1), 1);
        rep.check(alloc::format!("top-power/v/i={i}"), vs == v1.mul_coefficient(ctx, &y_top), "");
        rep.check(alloc::format!("top-power/w/i={i}"), wr == w1.mul_coefficient(ctx, &x_top), "");
        rep.check(alloc::format!("top-power/u/i={i}"), ur == u1.mul_coefficient(ctx, &x_top), "");
        let (a, b) = (ctx.a(i), ctx.b(i));
        rep.check(alloc::format!("recover/v/i={i}"), ad_power(ctx, &w, &vs, b - 1) == v1, "");
        rep.check(alloc::format!("recover/w/i={i}"), ad_power(ctx, &v, &wr, a - 1) == w1, "");
        rep.check(alloc::format!("recover/u/i={i}"), ad_power(ctx, &v, &ur, a - 1) == u1, "");

        let h = bracket(ctx, &w, &v);
        let g = bracket(ctx, &v, &u);
        rep.check(alloc::format!("bracket/wu/i={i}"), bracket(ctx, &w, &u).is_zero(), "");
        rep.check(alloc::format!("bracket/wv/i={i}"), h == head_first(ctx, i, 0, 0)?, alloc::format!("{h}"));
        rep.check(alloc::format!("bracket/vu/i={i}"), g == head_second(ctx, i, 0, 0)?, alloc::format!("{g}"));

        let mut cells_ok = true;
        let mut order_ok = true;
        for xi in 0..a {
            for eta in 0..b {
                if xi == a - 1 && eta == b - 1 {
                    continue;
                }
                let vw = ad_power(ctx, &v, &ad_power(ctx, &w, &h, eta), xi);
                let wv = ad_power(ctx, &w, &ad_power(ctx, &v, &h, xi), eta);
                cells_ok &= vw == head_first(ctx, i, xi, eta)?;
                order_ok &= vw == wv;
            }
        }
        rep.check(alloc::format!("heads-first/i={i}"), cells_ok, "");
        rep.check(alloc::format!("heads-first-order/i={i}"), order_ok, "");
        if a >= 2 && b >= 2 {
            let hv = ad_power(ctx, &v, &ad_power(ctx, &w, &h, b - 2), a - 1);
            rep.check(alloc::format!("heads-first-corner-v/i={i}"), hv == v1, "");
        }
        let hw = ad_power(ctx, &v, &ad_power(ctx, &w, &h, b - 1), a - 2);
        rep.check(alloc::format!("heads-first-corner-w/i={i}"), hw == w1.scaled(ctx, fp.neg(1)), "");

        let mut cells_ok = true;
        let mut order_ok = true;
        for xi in 0..=a - 2 {
            for zeta in 0..b {
                let vu = ad_power(ctx, &v, &ad_power(ctx, &u, &g, zeta), xi);
                let uv = ad_power(ctx, &u, &ad_power(ctx, &v, &g, xi), zeta);
                cells_ok &= vu == head_second(ctx, i, xi, zeta)?;
                order_ok &= vu == uv;
            }
        }
        rep.check(alloc::format!("heads-second/i={i}"), cells_ok, "");
        rep.check(alloc::format!("heads-second-order/i={i}"), order_ok, "");
        let gu = ad_power(ctx, &v, &ad_power(ctx, &u, &g, b - 1), a - 2);
        rep.check(alloc::format!("heads-second-corner/i={i}"), gu == u1, "");
    }
    Ok(rep)
}
