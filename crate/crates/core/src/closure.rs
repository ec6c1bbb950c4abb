//! Brute-force restricted closure inside `Der R_N`, and the checks run against it.
//!
//! The closure of a set `X` of homogeneous derivations is built weight by
//! weight: first the Lie part, spanned by left-normed brackets `[g, b]` with
//! `g ∈ X`, then the `p^k`-th powers of its basis vectors. Every component is
//! kept in reduced echelon form, pivoting on the first term in the canonical
//! `(∂, monomial)` order, so membership is a single reduction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::derivations::{self, Derivation, Partial};
use crate::dpalgebra::{DpContext, DpMonomial};
use crate::monomials::{self, FamilyFilter};
use crate::params::{trusted_weight_bound, ParameterTuple, PivotKind};
use crate::report::{Status, VerificationReport};
use crate::{Error, Result};

pub type Multidegree = [u64; 3];

/// Total weight of a multidegree.
pub fn total_weight(g: &Multidegree) -> u64 {
    g.iter().sum()
}

/// A stored basis vector and the word that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisVector {
    pub vector: Derivation,
    pub word: String,
}

/// One homogeneous component in reduced echelon form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Component {
    rows: Vec<BasisVector>,
    pivots: BTreeMap<(Partial, DpMonomial), usize>,
}

impl Component {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BasisVector] {
        &self.rows
    }

    /// `d` minus its projection on the span, in the pivot coordinates.
    pub fn reduce(&self, ctx: &DpContext, d: &Derivation) -> Derivation {
        let mut v = d.clone();
        for ((part, mono), &k) in &self.pivots {
            let c = v.term_coefficient(*part, mono);
            if c != 0 {
                v.add_scaled(ctx, &self.rows[k].vector, ctx.fp().neg(c));
            }
        }
        v
    }

    pub fn contains(&self, ctx: &DpContext, d: &Derivation) -> bool {
        self.reduce(ctx, d).is_zero()
    }

    /// Adds `d` if it is independent of the span; returns whether the rank grew.
    pub fn insert(&mut self, ctx: &DpContext, d: &Derivation, word: impl Into<String>) -> bool {
        let r = self.reduce(ctx, d);
        let Some((part, mono, c)) = r.leading_term() else {
            return false;
        };
        let key = (part, mono.clone());
        let r = r.scaled(ctx, ctx.fp().inv(c));
        for row in &mut self.rows {
            let c = row.vector.term_coefficient(key.0, &key.1);
            if c != 0 {
                row.vector.add_scaled(ctx, &r, ctx.fp().neg(c));
            }
        }
        self.pivots.insert(key, self.rows.len());
        self.rows.push(BasisVector { vector: r, word: word.into() });
        true
    }
}

/// Homogeneous components of a restricted subalgebra, truncated at a weight cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    cap: u64,
    components: BTreeMap<Multidegree, Component>,
}

impl GradedBasis {
    pub fn new(cap: u64) -> Self {
        GradedBasis { cap, components: BTreeMap::new() }
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn components(&self) -> &BTreeMap<Multidegree, Component> {
        &self.components
    }

    pub fn component(&self, g: &Multidegree) -> Option<&Component> {
        self.components.get(g)
    }

    pub fn dim(&self) -> usize {
        self.components.values().map(Component::dim).sum()
    }

    /// Dimensions per total weight.
    pub fn dims_by_weight(&self) -> BTreeMap<u64, usize> {
        let mut out = BTreeMap::new();
        for (g, c) in &self.components {
            *out.entry(total_weight(g)).or_insert(0) += c.dim();
        }
        out
    }

    pub fn dims_by_multidegree(&self) -> BTreeMap<Multidegree, usize> {
        self.components.iter().map(|(g, c)| (*g, c.dim())).filter(|x| x.1 > 0).collect()
    }

    /// All stored vectors with their multidegree, ordered by total weight.
    pub fn vectors(&self) -> Vec<(Multidegree, &BasisVector)> {
        let mut out: Vec<_> =
            self.components.iter().flat_map(|(g, c)| c.rows.iter().map(move |r| (*g, r))).collect();
        out.sort_by_key(|(g, _)| total_weight(g));
        out
    }

    /// Inserts a homogeneous derivation; returns whether the rank grew.
    pub fn insert(&mut self, ctx: &DpContext, d: &Derivation, word: impl Into<String>) -> Result<bool> {
        if d.is_zero() {
            return Ok(false);
        }
        let g = homogeneous_degree(ctx, d)?;
        Ok(self.components.entry(g).or_default().insert(ctx, d, word))
    }

    /// Membership, splitting `d` into homogeneous parts first.
    pub fn contains(&self, ctx: &DpContext, d: &Derivation) -> bool {
        derivations::homogeneous_parts(ctx, d).into_iter().all(|(g, part)| {
            let Some(g) = to_multidegree(g) else { return false };
            self.components.get(&g).is_some_and(|c| c.contains(ctx, &part))
        })
    }
}

impl fmt::Display for GradedBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, c) in &self.components {
            writeln!(f, "({},{},{}) dim {}", g[0], g[1], g[2], c.dim())?;
        }
        write!(f, "total {}", self.dim())
    }
}

fn to_multidegree(g: [i128; 3]) -> Option<Multidegree> {
    Some([g[0].to_u64()?, g[1].to_u64()?, g[2].to_u64()?])
}

fn homogeneous_degree(ctx: &DpContext, d: &Derivation) -> Result<Multidegree> {
    derivations::multidegree(ctx, d).and_then(to_multidegree).ok_or(Error::InhomogeneousGenerator)
}

/// Largest total weight among the homogeneous parts of `d`.
pub fn weight_support(ctx: &DpContext, d: &Derivation) -> Option<u64> {
    derivations::homogeneous_parts(ctx, d).keys().map(|g| g.iter().sum::<i128>().max(0) as u64).max()
}

/// `W(N)` of the context, as a machine integer.
pub fn trusted_bound(ctx: &DpContext) -> Result<u64> {
    trusted_weight_bound(ctx.tuple(), ctx.depth())?.to_u64().ok_or(Error::TableTooLarge)
}

/// `[v_0, w_0, u_0]`.
pub fn clover_generators(ctx: &DpContext) -> Result<Vec<Derivation>> {
    PivotKind::ALL.into_iter().map(|k| derivations::pivot(ctx, k, 0)).collect()
}

/// The restricted subalgebra generated by homogeneous `gens`, up to total weight `cap`.
pub fn restricted_closure(ctx: &DpContext, gens: &[Derivation], cap: u64) -> Result<GradedBasis> {
    if BigUint::from(cap) > trusted_weight_bound(ctx.tuple(), ctx.depth())? {
        return Err(Error::OutsideTrustedZone);
    }
    let mut seeds = Vec::new();
    for (k, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let w = total_weight(&homogeneous_degree(ctx, g)?);
        if w == 0 {
            return Err(Error::InhomogeneousGenerator);
        }
        seeds.push((w, g, format!("g{k}")));
    }
    let mut basis = GradedBasis::new(cap);
    let cap_us = cap as usize;
    // lie[w]: a basis of the Lie part of weight w; powers[w]: p^k-th powers landing at w.
    let mut lie: Vec<Vec<(Derivation, String)>> = alloc::vec![Vec::new(); cap_us + 1];
    let mut powers: Vec<Vec<(Derivation, String)>> = alloc::vec![Vec::new(); cap_us + 1];
    let p = ctx.p() as usize;
    for w in 1..=cap_us {
        let mut fresh = Vec::new();
        for (wg, g, name) in &seeds {
            let wg = *wg as usize;
            if wg == w {
                fresh.push(((*g).clone(), name.clone()));
            } else if wg < w {
                for (b, word) in &lie[w - wg] {
                    fresh.push((derivations::bracket(ctx, g, b), format!("[{name},{word}]")));
                }
            }
        }
        for (d, word) in fresh {
            if basis.insert(ctx, &d, word.clone())? {
                lie[w].push((d, word));
            }
        }
        if w % p == 0 {
            let below: Vec<_> = lie[w / p].iter().chain(&powers[w / p]).cloned().collect();
            for (d, word) in below {
                let pw = derivations::p_power(ctx, &d)?;
                let word = format!("({word})^[p]");
                basis.insert(ctx, &pw, word.clone())?;
                if !pw.is_zero() {
                    powers[w].push((pw, word));
                }
            }
        }
    }
    Ok(basis)
}

// ---------------------------------------------------------------------------
// Basis theorem and grading

fn fmt_md(g: &Multidegree) -> String {
    format!("({},{},{})", g[0], g[1], g[2])
}

/// Closure dimensions against monomial counts, membership and independence of
/// the realized monomials, and the semidirect structure, all up to `W(N)`.
pub fn verify_basis_theorem(tuple: &ParameterTuple, depth: usize) -> Result<VerificationReport> {
    if depth < 3 {
        return Err(Error::TruncationTooShallow);
    }
    let ctx = DpContext::new(tuple, depth)?;
    let cap = trusted_bound(&ctx)?;
    let gens = clover_generators(&ctx)?;
    let closure = restricted_closure(&ctx, &gens, cap)?;
    let sub = restricted_closure(&ctx, &gens[..2], cap)?;
    let descriptors = monomials::enumerate(tuple, FamilyFilter::ALL, cap)?;
    let mut rep = VerificationReport::new();

    let mut predicted: BTreeMap<Multidegree, usize> = BTreeMap::new();
    let mut predicted_first: BTreeMap<u64, usize> = BTreeMap::new();
    for (d, w) in &descriptors {
        let g = w.to_u64_triple().ok_or(Error::TableTooLarge)?;
        *predicted.entry(g).or_insert(0) += 1;
        if d.family().is_first_kind() {
            *predicted_first.entry(total_weight(&g)).or_insert(0) += 1;
        }
    }
    let got = closure.dims_by_multidegree();
    let sub_dims = sub.dims_by_weight();
    for w in 1..=cap {
        let mut bad = Vec::new();
        let keys: BTreeSet<_> = predicted.keys().chain(got.keys()).filter(|g| total_weight(g) == w).collect();
        for g in keys {
            let (a, b) = (got.get(g).copied().unwrap_or(0), predicted.get(g).copied().unwrap_or(0));
            if a != b {
                bad.push(format!("{} closure {a} monomials {b}", fmt_md(g)));
            }
        }
        let dim: usize = got.iter().filter(|(g, _)| total_weight(g) == w).map(|x| x.1).sum();
        let detail = if bad.is_empty() { format!("dim {dim}") } else { bad.join("; ") };
        rep.check(format!("dim/w={w}"), bad.is_empty(), detail);
        let (a, b) = (sub_dims.get(&w).copied().unwrap_or(0), predicted_first.get(&w).copied().unwrap_or(0));
        rep.check(format!("subalgebra-dim/w={w}"), a == b, format!("closure of v0,w0: {a}; first kind: {b}"));
    }

    let mut realized = Vec::new();
    let mut missing = Vec::new();
    let mut fresh = GradedBasis::new(cap);
    let mut first_span = GradedBasis::new(cap);
    let mut ideal_span = GradedBasis::new(cap);
    for (d, w) in &descriptors {
        let x = monomials::realize(d, &ctx)?;
        if !closure.contains(&ctx, &x) {
            missing.push(format!("{d}"));
        }
        fresh.insert(&ctx, &x, format!("{d}"))?;
        if d.family().is_first_kind() {
            first_span.insert(&ctx, &x, format!("{d}"))?;
        } else {
            ideal_span.insert(&ctx, &x, format!("{d}"))?;
        }
        realized.push((d, w.wt().to_u64().ok_or(Error::TableTooLarge)?, x));
    }
    rep.check(
        "realized-in-closure",
        missing.is_empty(),
        if missing.is_empty() { format!("{} monomials", realized.len()) } else { missing.join(", ") },
    );
    rep.check(
        "realized-independent",
        fresh.dim() == realized.len(),
        format!("rank {} of {}", fresh.dim(), realized.len()),
    );

    let (mut sub_ok, mut ideal_ok, mut outside) = (Vec::new(), Vec::new(), 0usize);
    let (mut sub_n, mut ideal_n) = (0usize, 0usize);
    for (i, (da, wa, xa)) in realized.iter().enumerate() {
        for (db, wb, xb) in &realized[i..] {
            if wa + wb > cap {
                outside += 1;
                continue;
            }
            let br = derivations::bracket(&ctx, xa, xb);
            if da.family().is_first_kind() && db.family().is_first_kind() {
                sub_n += 1;
                if !first_span.contains(&ctx, &br) {
                    sub_ok.push(format!("[{da},{db}]"));
                }
            } else {
                ideal_n += 1;
                if !ideal_span.contains(&ctx, &br) {
                    ideal_ok.push(format!("[{da},{db}]"));
                }
            }
        }
        if wa * ctx.p() as u64 <= cap {
            let pw = derivations::p_power(&ctx, xa)?;
            let first = da.family().is_first_kind();
            *(if first { &mut sub_n } else { &mut ideal_n }) += 1;
            let span = if first { &first_span } else { &ideal_span };
            if !span.contains(&ctx, &pw) {
                let list = if first { &mut sub_ok } else { &mut ideal_ok };
                list.push(format!("({da})^[p]"));
            }
        }
    }
    rep.check("semidirect/subalgebra", sub_ok.is_empty(), witness(&sub_ok, sub_n));
    rep.check("semidirect/ideal", ideal_ok.is_empty(), witness(&ideal_ok, ideal_n));
    rep.push(
        "semidirect/beyond-zone",
        Status::OutsideTrustedZone,
        format!("{outside} pairs above W(N) = {cap}"),
    );
    Ok(rep)
}

fn witness(bad: &[String], checked: usize) -> String {
    if bad.is_empty() {
        format!("{checked} products")
    } else {
        bad.iter().take(8).cloned().collect::<Vec<_>>().join(", ")
    }
}

/// Brackets and `p`-th powers of basis vectors land in the predicted component.
pub fn verify_grading(tuple: &ParameterTuple, depth: usize) -> Result<VerificationReport> {
    if depth < 2 {
        return Err(Error::TruncationTooShallow);
    }
    let ctx = DpContext::new(tuple, depth)?;
    let cap = trusted_bound(&ctx)?;
    let basis = restricted_closure(&ctx, &clover_generators(&ctx)?, cap)?;
    let vecs = basis.vectors();
    let mut rep = VerificationReport::new();
    let (mut bad, mut checked, mut outside) = (Vec::new(), 0usize, 0usize);
    let lands = |x: &Derivation, g: Multidegree| {
        x.is_zero()
            || (homogeneous_degree(&ctx, x).ok() == Some(g)
                && basis.component(&g).is_some_and(|c| c.contains(&ctx, x)))
    };
    for (i, (ga, a)) in vecs.iter().enumerate() {
        for (gb, b) in &vecs[i..] {
            let g = [ga[0] + gb[0], ga[1] + gb[1], ga[2] + gb[2]];
            if total_weight(&g) > cap {
                outside += 1;
                continue;
            }
            checked += 1;
            if !lands(&derivations::bracket(&ctx, &a.vector, &b.vector), g) {
                bad.push(format!("[{}, {}]", a.word, b.word));
            }
        }
        let p = ctx.p() as u64;
        let g = ga.map(|c| c * p);
        if total_weight(&g) <= cap {
            checked += 1;
            if !lands(&derivations::p_power(&ctx, &a.vector)?, g) {
                bad.push(format!("({})^[p]", a.word));
            }
        }
    }
    rep.check("grading", bad.is_empty(), witness(&bad, checked));
    rep.push(
        "grading/beyond-zone",
        Status::OutsideTrustedZone,
        format!("{outside} pairs above W(N) = {cap}"),
    );
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Nil p-mapping

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NilVerdict {
    /// `e^{[p^k]} = 0` with `k` least, certified inside the trusted zone.
    Nil { k: u32 },
    /// The chain would leave the trusted zone after `e^{[p^k]} ≠ 0`.
    Inconclusive { k: u32 },
}

impl NilVerdict {
    pub fn is_conclusive(self) -> bool {
        matches!(self, NilVerdict::Nil { .. })
    }
}

impl fmt::Display for NilVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NilVerdict::Nil { k } => write!(f, "nil, index p^{k}"),
            NilVerdict::Inconclusive { k } => write!(f, "inconclusive after p^{k}"),
        }
    }
}

/// Iterates the `p`-map on `e` while the next power is known to stay within `W(N)`.
pub fn nil_index(ctx: &DpContext, basis: &GradedBasis, e: &Derivation) -> Result<NilVerdict> {
    if !basis.contains(ctx, e) {
        return Err(Error::OutsideAlgebra);
    }
    let cap = trusted_bound(ctx)?;
    let mut cur = e.clone();
    let mut k = 0;
    loop {
        let Some(w) = weight_support(ctx, &cur) else {
            return Ok(NilVerdict::Nil { k });
        };
        if w * ctx.p() as u64 > cap {
            return Ok(NilVerdict::Inconclusive { k });
        }
        cur = derivations::p_power(ctx, &cur)?;
        k += 1;
    }
}

/// Random `F_p`-combinations of `1..=max_terms` distinct basis vectors with nonzero coefficients.
pub fn sample_elements(
    ctx: &DpContext,
    basis: &GradedBasis,
    count: usize,
    max_terms: usize,
    seed: u64,
) -> Vec<Derivation> {
    let vecs = basis.vectors();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = ctx.p();
    (0..count)
        .map(|_| {
            let t = rng.gen_range(1..=max_terms.clamp(1, vecs.len().max(1)));
            let mut picked = BTreeSet::new();
            while picked.len() < t.min(vecs.len()) {
                picked.insert(rng.gen_range(0..vecs.len()));
            }
            let mut e = Derivation::zero();
            for k in picked {
                e.add_scaled(ctx, &vecs[k].1.vector, rng.gen_range(1..p));
            }
            e
        })
        .collect()
}

/// Tally of a nil sampling run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NilSummary {
    pub samples: usize,
    /// `histogram[k]` samples were nil with index `p^k`.
    pub histogram: Vec<usize>,
    pub inconclusive: usize,
}

impl NilSummary {
    pub fn conclusive(&self) -> usize {
        self.samples - self.inconclusive
    }

    pub fn conclusive_fraction(&self) -> f64 {
        if self.samples == 0 {
            return 0.0;
        }
        self.conclusive() as f64 / self.samples as f64
    }
}

impl fmt::Display for NilSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} samples, {} conclusive, {} inconclusive",
            self.samples,
            self.conclusive(),
            self.inconclusive
        )?;
        for (k, n) in self.histogram.iter().enumerate().filter(|x| *x.1 > 0) {
            write!(f, "; index p^{k}: {n}")?;
        }
        Ok(())
    }
}

/// Samples elements of the closure of `v_0, w_0, u_0` and runs [`nil_index`] on each.
/// Terms are drawn from basis vectors of weight at most `sample_cap`, by default `W(N)`.
pub fn nil_sampling(
    tuple: &ParameterTuple,
    depth: usize,
    samples: usize,
    max_terms: usize,
    seed: u64,
    sample_cap: Option<u64>,
) -> Result<NilSummary> {
    let ctx = DpContext::new(tuple, depth)?;
    let gens = clover_generators(&ctx)?;
    let zone = trusted_bound(&ctx)?;
    let basis = restricted_closure(&ctx, &gens, zone)?;
    let pool = match sample_cap {
        Some(c) if c < zone => restricted_closure(&ctx, &gens, c)?,
        _ => basis.clone(),
    };
    let mut out = NilSummary { samples, ..Default::default() };
    for e in sample_elements(&ctx, &pool, samples, max_terms, seed) {
        match nil_index(&ctx, &basis, &e)? {
            NilVerdict::Nil { k } => {
                let k = k as usize;
                if out.histogram.len() <= k {
                    out.histogram.resize(k + 1, 0);
                }
                out.histogram[k] += 1;
            }
            NilVerdict::Inconclusive { .. } => out.inconclusive += 1,
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Restricted axioms and self-similarity

/// For `pairs` random pairs `D, E` of closure elements: Jacobson's formula for
/// `(D+E)^{[p]}`, `ad(D^{[p]}) = (ad D)^p` on every basis vector, and `(λD)^{[p]} = λ^p D^{[p]}`.
pub fn check_restricted_axioms(
    tuple: &ParameterTuple,
    depth: usize,
    pairs: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let ctx = DpContext::new(tuple, depth)?;
    let basis = restricted_closure(&ctx, &clover_generators(&ctx)?, trusted_bound(&ctx)?)?;
    let elems = sample_elements(&ctx, &basis, 2 * pairs, 5, seed);
    let vecs = basis.vectors();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let fp = ctx.fp();
    let (mut jac, mut adp, mut scal) = (Vec::new(), Vec::new(), Vec::new());
    for (k, de) in elems.chunks(2).enumerate() {
        let (d, e) = (&de[0], &de[1]);
        let dp = derivations::p_power(&ctx, d)?;
        let ep = derivations::p_power(&ctx, e)?;
        let mut rhs = dp.add(&ctx, &ep);
        for s in derivations::jacobson_terms(&ctx, d, e) {
            rhs = rhs.add(&ctx, &s);
        }
        if derivations::p_power(&ctx, &d.add(&ctx, e))? != rhs {
            jac.push(format!("pair {k}"));
        }
        for (_, b) in &vecs {
            let lhs = derivations::bracket(&ctx, &dp, &b.vector);
            if lhs != derivations::ad_power(&ctx, d, &b.vector, ctx.p() as u64) {
                adp.push(format!("pair {k} on {}", b.word));
            }
        }
        let lambda = rng.gen_range(1..ctx.p());
        let lhs = derivations::p_power(&ctx, &d.scaled(&ctx, lambda))?;
        if lhs != dp.scaled(&ctx, fp.pow(lambda, ctx.p() as u64)) {
            scal.push(format!("pair {k}, λ={lambda}"));
        }
    }
    let mut rep = VerificationReport::new();
    rep.check("axiom/jacobson", jac.is_empty(), witness(&jac, pairs));
    rep.check("axiom/ad-power", adp.is_empty(), witness(&adp, pairs * vecs.len()));
    rep.check("axiom/scalar-power", scal.is_empty(), witness(&scal, pairs));
    Ok(rep)
}

/// For a tuple of period `N_p`: each generator splits as `d + P·g'` with `d`
/// involving only generations `< N_p`, `P` the product of corners over those
/// generations and `g'` the same pivot of generation `N_p`; and shifting by
/// `N_p` carries pivots, brackets and `p`-th powers of a shallower truncation
/// onto those of generation `N_p` and beyond.
pub fn self_similarity_decompose(tuple: &ParameterTuple, depth: usize) -> Result<VerificationReport> {
    let np = tuple.rule().period().ok_or(Error::NotPeriodic)?;
    if depth < 2 * np {
        return Err(Error::TruncationTooShallow);
    }
    let ctx = DpContext::new(tuple, depth)?;
    let head = DpContext::new(tuple, np)?;
    let tail = DpContext::new(tuple, depth - np)?;
    let mut rep = VerificationReport::new();
    for kind in PivotKind::ALL {
        let g0 = derivations::pivot(&ctx, kind, 0)?;
        let gn = derivations::pivot(&ctx, kind, np)?;
        let prefix = DpMonomial::from_pairs(
            (0..np).flat_map(|l| derivations::corner_monomial(&ctx, kind, l).iter().collect::<Vec<_>>()),
        );
        let prefix = crate::dpalgebra::AlgebraElement::monomial(prefix, 1);
        let d = g0.sub(&ctx, &gn.mul_coefficient(&ctx, &prefix));
        let low = d.max_generation().is_none_or(|g| g < np);
        rep.check(format!("split/{kind}"), low, format!("d = {d}"));
        rep.check(
            format!("split-head/{kind}"),
            d == derivations::pivot(&head, kind, 0)?,
            "d is the generation-0 pivot of depth N_p",
        );
    }
    let mut pivots_ok = true;
    for i in 0..depth - np {
        for kind in PivotKind::ALL {
            pivots_ok &=
                derivations::pivot(&tail, kind, i)?.shifted(np) == derivations::pivot(&ctx, kind, i + np)?;
        }
    }
    rep.check("shift/pivots", pivots_ok, "");
    let small = clover_generators(&tail)?;
    let mut ops_ok = true;
    for a in &small {
        for b in &small {
            let lhs = derivations::bracket(&tail, a, b).shifted(np);
            ops_ok &= lhs == derivations::bracket(&ctx, &a.shifted(np), &b.shifted(np));
        }
        let lhs = derivations::p_power(&tail, a)?.shifted(np);
        ops_ok &= lhs == derivations::p_power(&ctx, &a.shifted(np))?;
    }
    rep.check("shift/operations", ops_ok, "");
    let rel = derivations::relation_suite(&ctx)?;
    rep.check("shift/relations", rel.all_passed(), format!("{} relation checks", rel.records.len()));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(p: u32, s: u32, r: u32) -> ParameterTuple {
        ParameterTuple::constant(p, s, r).unwrap()
    }

    #[test]
    fn generators_only() {
        let ctx = DpContext::new(&t(2, 1, 1), 3).unwrap();
        let b = restricted_closure(&ctx, &clover_generators(&ctx).unwrap(), 1).unwrap();
        let dims: Vec<_> = b.dims_by_multidegree().into_iter().collect();
        assert_eq!(dims, [([0, 0, 1], 1), ([0, 1, 0], 1), ([1, 0, 0], 1)]);
    }

    #[test]
    fn closure_matches_table() {
        let tup = t(2, 1, 1);
        let ctx = DpContext::new(&tup, 4).unwrap();
        let b = restricted_closure(&ctx, &clover_generators(&ctx).unwrap(), 3).unwrap();
        let table = monomials::growth_table(&tup, 3).unwrap();
        let dims = b.dims_by_weight();
        let mut acc = 0;
        for row in &table.rows {
            acc += dims.get(&row.m.to_u64().unwrap()).copied().unwrap_or(0);
            assert_eq!(BigUint::from(acc), row.total());
        }
    }

    #[test]
    fn zone_is_enforced() {
        let ctx = DpContext::new(&t(2, 1, 1), 3).unwrap();
        let gens = clover_generators(&ctx).unwrap();
        assert!(restricted_closure(&ctx, &gens, 3).is_ok());
        assert_eq!(restricted_closure(&ctx, &gens, 4), Err(Error::OutsideTrustedZone));
    }

    #[test]
    fn order_independent() {
        let ctx = DpContext::new(&t(3, 1, 1), 3).unwrap();
        let mut gens = clover_generators(&ctx).unwrap();
        let a = restricted_closure(&ctx, &gens, 10).unwrap();
        gens.reverse();
        let b = restricted_closure(&ctx, &gens, 10).unwrap();
        assert_eq!(a.dims_by_multidegree(), b.dims_by_multidegree());
        let c = restricted_closure(&ctx, &gens, 6).unwrap();
        for (g, d) in c.dims_by_multidegree() {
            assert_eq!(a.dims_by_multidegree()[&g], d);
        }
    }

    #[test]
    fn basis_theorem_small() {
        for (p, s, r) in [(2, 1, 1), (2, 2, 1), (2, 1, 2)] {
            let rep = verify_basis_theorem(&t(p, s, r), 3).unwrap();
            assert!(rep.all_passed(), "{rep}");
        }
    }

    #[test]
    fn grading_small() {
        let rep = verify_grading(&t(2, 1, 1), 3).unwrap();
        assert!(rep.all_passed(), "{rep}");
        let ctx = DpContext::new(&t(2, 1, 1), 3).unwrap();
        let [v, _, u]: [Derivation; 3] = clover_generators(&ctx).unwrap().try_into().unwrap();
        assert_eq!(derivations::multidegree(&ctx, &derivations::bracket(&ctx, &v, &u)), Some([1, 0, 1]));
    }

    #[test]
    fn nil_examples() {
        let ctx = DpContext::new(&t(2, 1, 1), 4).unwrap();
        let gens = clover_generators(&ctx).unwrap();
        let basis = restricted_closure(&ctx, &gens, 9).unwrap();
        assert_eq!(nil_index(&ctx, &basis, &gens[0]).unwrap(), NilVerdict::Nil { k: 2 });
        assert_eq!(nil_index(&ctx, &basis, &Derivation::zero()).unwrap(), NilVerdict::Nil { k: 0 });
        let outside = Derivation::partial(crate::dpalgebra::Var::x(3), 0);
        assert_eq!(nil_index(&ctx, &basis, &outside), Err(Error::OutsideAlgebra));
        let s = gens[0].add(&ctx, &gens[1]).add(&ctx, &gens[2]);
        assert!(matches!(
            nil_index(&ctx, &basis, &s).unwrap(),
            NilVerdict::Nil { .. } | NilVerdict::Inconclusive { .. }
        ));
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = nil_sampling(&t(2, 1, 1), 4, 30, 5, 7, None).unwrap();
        let b = nil_sampling(&t(2, 1, 1), 4, 30, 5, 7, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples, 30);
    }

    #[test]
    fn axioms_small() {
        let rep = check_restricted_axioms(&t(3, 1, 1), 3, 5, 1).unwrap();
        assert!(rep.all_passed(), "{rep}");
    }

    #[test]
    fn self_similarity() {
        let rep = self_similarity_decompose(&t(2, 1, 1), 3).unwrap();
        assert!(rep.all_passed(), "{rep}");
        let d = rep.records.iter().find(|r| r.id == "split/v").unwrap();
        assert_eq!(d.detail, "d = ∂_{x0}");
        let per = ParameterTuple::parse(3, "periodic:1,1;2,1").unwrap();
        assert!(self_similarity_decompose(&per, 4).unwrap().all_passed());
        let k = ParameterTuple::parse(2, "kappa:0.5").unwrap();
        assert_eq!(self_similarity_decompose(&k, 4), Err(Error::NotPeriodic));
    }
}
