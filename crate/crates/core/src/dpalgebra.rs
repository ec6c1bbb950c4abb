//! The truncated divided power algebra `R_N` over `F_p`.
//!
//! `R_N` has basis `∏_{i<N} x_i^(α_i) y_i^(β_i) z_i^(γ_i)` with
//! `α_i < p^{S_i}` and `β_i, γ_i < p^{R_i}`, and product
//! `t^(i) · t^(j) = C(i+j, i) t^(i+j)` (zero past the bound).

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write as _};

use crate::fp::Prime;
use num_traits::ToPrimitive;

use crate::params::{Materialized, ParameterTuple, PivotKind};
use crate::{Error, Result};

/// Default cap for [`DpContext::basis`].
pub const DEFAULT_BASIS_CAP: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::X, Letter::Y, Letter::Z];

    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::Y => 'y',
            Letter::Z => 'z',
        }
    }
}

/// A divided variable `x_i`, `y_i` or `z_i`; ordered by generation, then letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    pub fn new(generation: usize, letter: Letter) -> Var {
        Var(generation as u32 * 3 + letter as u32)
    }

    pub fn x(i: usize) -> Var {
        Var::new(i, Letter::X)
    }

    pub fn y(i: usize) -> Var {
        Var::new(i, Letter::Y)
    }

    pub fn z(i: usize) -> Var {
        Var::new(i, Letter::Z)
    }

    pub fn generation(self) -> usize {
        (self.0 / 3) as usize
    }

    pub fn letter(self) -> Letter {
        Letter::ALL[(self.0 % 3) as usize]
    }

    /// The same letter `shift` generations later.
    pub fn shifted(self, shift: usize) -> Var {
        Var(self.0 + 3 * shift as u32)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter().as_char(), self.generation())
    }
}

/// A divided monomial, stored sparsely as `(variable, exponent)` pairs sorted by variable.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DpMonomial(Vec<(Var, u64)>);

impl DpMonomial {
    pub fn one() -> Self {
        DpMonomial(Vec::new())
    }

    /// Builds a canonical monomial; zero exponents are dropped and repeated variables rejected.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u64)>) -> Self {
        let mut v: Vec<(Var, u64)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_unstable_by_key(|&(var, _)| var);
        debug_assert!(v.windows(2).all(|w| w[0].0 != w[1].0), "repeated variable");
        DpMonomial(v)
    }

    pub fn var(v: Var, e: u64) -> Self {
        Self::from_pairs([(v, e)])
    }

    pub fn exponent(&self, v: Var) -> u64 {
        self.0.binary_search_by_key(&v, |&(w, _)| w).map(|k| self.0[k].1).unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, u64)> + '_ {
        self.0.iter().copied()
    }

    pub fn max_generation(&self) -> Option<usize> {
        self.0.last().map(|(v, _)| v.generation())
    }

    /// Same exponents on variables `shift` generations later.
    pub fn shifted(&self, shift: usize) -> Self {
        DpMonomial(self.0.iter().map(|&(v, e)| (v.shifted(shift), e)).collect())
    }

    fn with_exponent(&self, v: Var, e: u64) -> Self {
        let mut out = self.0.clone();
        match out.binary_search_by_key(&v, |&(w, _)| w) {
            Ok(k) if e == 0 => {
                out.remove(k);
            }
            Ok(k) => out[k].1 = e,
            Err(k) if e > 0 => out.insert(k, (v, e)),
            Err(_) => {}
        }
        DpMonomial(out)
    }
}

impl fmt::Display for DpMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_char('.')?;
            }
            write!(f, "{v}^({e})")?;
        }
        Ok(())
    }
}

/// An `F_p`-linear combination of divided monomials, with no zero coefficients stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraElement {
    terms: BTreeMap<DpMonomial, u32>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(DpMonomial::one(), 1)
    }

    pub fn monomial(m: DpMonomial, c: u32) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(m, c);
        }
        AlgebraElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DpMonomial, u32)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &DpMonomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Adds `c · m` in place.
    pub fn add_term(&mut self, fp: Prime, m: DpMonomial, c: u32) {
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let s = fp.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, fp: Prime, other: &AlgebraElement, c: u32) {
        if c == 0 {
            return;
        }
        for (m, &d) in &other.terms {
            self.add_term(fp, m.clone(), fp.mul(c, d));
        }
    }

    pub fn scaled(&self, fp: Prime, c: u32) -> AlgebraElement {
        if c == 0 {
            return AlgebraElement::zero();
        }
        AlgebraElement { terms: self.terms.iter().map(|(m, &d)| (m.clone(), fp.mul(c, d))).collect() }
    }

    pub fn add(&self, fp: Prime, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.add_scaled(fp, other, 1);
        out
    }

    pub fn sub(&self, fp: Prime, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.add_scaled(fp, other, fp.neg(1));
        out
    }

    pub fn shifted(&self, shift: usize) -> AlgebraElement {
        AlgebraElement { terms: self.terms.iter().map(|(m, &c)| (m.shifted(shift), c)).collect() }
    }
}

impl FromIterator<(DpMonomial, u32)> for AlgebraElement {
    /// Collects terms whose coefficients are already reduced and whose monomials are distinct.
    fn from_iter<I: IntoIterator<Item = (DpMonomial, u32)>>(iter: I) -> Self {
        AlgebraElement { terms: iter.into_iter().filter(|&(_, c)| c != 0).collect() }
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            match (c, m.is_one()) {
                (1, _) => write!(f, "{m}")?,
                (c, true) => write!(f, "{c}")?,
                (c, false) => write!(f, "{c}·{m}")?,
            }
        }
        Ok(())
    }
}

/// Bounds of `R_N`: the prime, the depth `N` and `p^{S_i}`, `p^{R_i}` for `i < N`.
#[derive(Debug, Clone)]
pub struct DpContext {
    fp: Prime,
    depth: usize,
    weights: Materialized,
    bound_x: Vec<u64>,
    bound_yz: Vec<u64>,
    // Gr(v_i), Gr(w_i), Gr(u_i) for i <= depth.
    degrees: Vec<[[i128; 3]; 3]>,
}

impl PartialEq for DpContext {
    fn eq(&self, other: &Self) -> bool {
        self.fp == other.fp
            && self.depth == other.depth
            && self.bound_x == other.bound_x
            && self.bound_yz == other.bound_yz
    }
}

impl Eq for DpContext {}

impl DpContext {
    /// The depth-`N` truncation for `tuple`; requires `p^{S_i}` to fit in 64 bits.
    pub fn new(tuple: &ParameterTuple, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::TruncationTooShallow);
        }
        let weights = tuple.materialized(depth)?;
        let p = tuple.p();
        let pow = |e: u32| crate::fp::checked_pow(p, e).ok_or(Error::TruncationTooLarge);
        let mut bound_x = Vec::with_capacity(depth);
        let mut bound_yz = Vec::with_capacity(depth);
        for i in 0..depth {
            bound_x.push(pow(weights.s(i))?);
            bound_yz.push(pow(weights.r(i))?);
        }
        let mut degrees = Vec::with_capacity(depth + 1);
        for i in 0..=depth {
            let mut row = [[0i128; 3]; 3];
            for (k, kind) in PivotKind::ALL.into_iter().enumerate() {
                for (c, g) in weights.multidegree_raw(i, kind).iter().enumerate() {
                    row[k][c] = g.to_i128().filter(|&g| g < 1 << 100).ok_or(Error::TruncationTooLarge)?;
                }
            }
            degrees.push(row);
        }
        Ok(DpContext { fp: tuple.prime(), depth, weights, bound_x, bound_yz, degrees })
    }

    pub fn fp(&self) -> Prime {
        self.fp
    }

    pub fn p(&self) -> u32 {
        self.fp.get()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn tuple(&self) -> &ParameterTuple {
        self.weights.tuple()
    }

    /// Weights and multidegrees for generations `0..=depth`.
    pub fn weights(&self) -> &Materialized {
        &self.weights
    }

    /// `p^{S_i}`.
    pub fn a(&self, i: usize) -> u64 {
        self.bound_x[i]
    }

    /// `p^{R_i}`.
    pub fn b(&self, i: usize) -> u64 {
        self.bound_yz[i]
    }

    /// `Gr` of the pivot of generation `i <= depth`.
    pub fn pivot_degree(&self, i: usize, kind: PivotKind) -> [i128; 3] {
        self.degrees[i][kind as usize]
    }

    /// `Gr(∂_v)`: the multidegree of the pivot whose leading term is `∂_v`.
    pub fn var_degree(&self, v: Var) -> [i128; 3] {
        self.degrees[v.generation()][v.letter() as usize]
    }

    /// Exclusive exponent bound of `v`.
    pub fn bound(&self, v: Var) -> u64 {
        match v.letter() {
            Letter::X => self.bound_x[v.generation()],
            _ => self.bound_yz[v.generation()],
        }
    }

    /// Number of `p`-power levels of `∂_v`: `S_i` for `x_i`, `R_i` otherwise.
    pub fn levels(&self, v: Var) -> u32 {
        match v.letter() {
            Letter::X => self.weights.s(v.generation()),
            _ => self.weights.r(v.generation()),
        }
    }

    pub fn variables(&self) -> impl Iterator<Item = Var> {
        (0..self.depth).flat_map(|i| Letter::ALL.map(|l| Var::new(i, l)))
    }

    /// `v^(e)` as an element (zero past the bound).
    pub fn var_power(&self, v: Var, e: u64) -> AlgebraElement {
        if v.generation() >= self.depth || e >= self.bound(v) {
            AlgebraElement::zero()
        } else {
            AlgebraElement::monomial(DpMonomial::var(v, e), 1)
        }
    }

    pub fn monomial_in_bounds(&self, m: &DpMonomial) -> bool {
        m.iter().all(|(v, e)| v.generation() < self.depth && e < self.bound(v))
    }

    pub fn element_in_bounds(&self, a: &AlgebraElement) -> bool {
        a.terms().all(|(m, c)| c < self.p() && self.monomial_in_bounds(m))
    }

    /// Product of two monomials: coefficient and result, or `None` when it vanishes.
    pub fn mul_monomials(&self, a: &DpMonomial, b: &DpMonomial) -> Option<(u32, DpMonomial)> {
        let (x, y) = (&a.0, &b.0);
        let mut out = Vec::with_capacity(x.len() + y.len());
        let mut coef = 1u32;
        let (mut i, mut j) = (0, 0);
        while i < x.len() && j < y.len() {
            match x[i].0.cmp(&y[j].0) {
                core::cmp::Ordering::Less => {
                    out.push(x[i]);
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    out.push(y[j]);
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    let v = x[i].0;
                    let e = x[i].1 + y[j].1;
                    if e >= self.bound(v) {
                        return None;
                    }
                    let c = self.fp.binom(e, x[i].1);
                    if c == 0 {
                        return None;
                    }
                    coef = self.fp.mul(coef, c);
                    out.push((v, e));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&x[i..]);
        out.extend_from_slice(&y[j..]);
        Some((coef, DpMonomial(out)))
    }

    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                if let Some((c, m)) = self.mul_monomials(ma, mb) {
                    out.add_term(self.fp, m, self.fp.mul(c, self.fp.mul(ca, cb)));
                }
            }
        }
        out
    }

    /// `c·m · a` for a single monomial factor.
    pub fn mul_monomial(&self, m: &DpMonomial, c: u32, a: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (ma, ca) in a.terms() {
            if let Some((k, prod)) = self.mul_monomials(m, ma) {
                out.add_term(self.fp, prod, self.fp.mul(k, self.fp.mul(c, ca)));
            }
        }
        out
    }

    /// `∂_v^{p^m}` on a monomial: the exponent of `v` drops by `p^m`.
    pub fn derive_monomial(&self, v: Var, m: u32, mono: &DpMonomial) -> Option<DpMonomial> {
        let step = crate::fp::checked_pow(self.p(), m)?;
        if step >= self.bound(v) {
            return None;
        }
        let e = mono.exponent(v);
        (e >= step).then(|| mono.with_exponent(v, e - step))
    }

    /// `∂_v^{p^m}(a)`.
    pub fn derive(&self, v: Var, m: u32, a: &AlgebraElement) -> AlgebraElement {
        a.terms().filter_map(|(mono, c)| self.derive_monomial(v, m, mono).map(|d| (d, c))).collect()
    }

    pub fn basis_dim(&self) -> Option<u64> {
        (0..self.depth).try_fold(1u64, |acc, i| {
            acc.checked_mul(self.bound_x[i])?.checked_mul(self.bound_yz[i])?.checked_mul(self.bound_yz[i])
        })
    }

    /// All basis monomials of `R_N` in a fixed order (odometer over variables,
    /// the first variable varying slowest).
    pub fn basis(&self, cap: u64) -> Result<Vec<DpMonomial>> {
        let dim = self.basis_dim().filter(|&d| d <= cap).ok_or(Error::TruncationTooLarge)?;
        let vars: Vec<Var> = self.variables().collect();
        let mut digits = alloc::vec![0u64; vars.len()];
        let mut out = Vec::with_capacity(dim as usize);
        loop {
            out.push(DpMonomial::from_pairs(vars.iter().copied().zip(digits.iter().copied())));
            let mut k = vars.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                digits[k] += 1;
                if digits[k] < self.bound(vars[k]) {
                    break;
                }
                digits[k] = 0;
            }
        }
    }
}

/// Product with a context check on both operands.
pub fn dp_mul(ctx: &DpContext, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
    if !ctx.element_in_bounds(a) || !ctx.element_in_bounds(b) {
        return Err(Error::ContextMismatch);
    }
    Ok(ctx.mul(a, b))
}

/// `∂_v^{p^m}(a)`; zero when `p^m` reaches the bound of `v`.
pub fn dp_derive(ctx: &DpContext, v: Var, m: u32, a: &AlgebraElement) -> AlgebraElement {
    ctx.derive(v, m, a)
}

pub fn dp_basis(ctx: &DpContext) -> Result<Vec<DpMonomial>> {
    ctx.basis(DEFAULT_BASIS_CAP)
}

pub fn dp_basis_dim(ctx: &DpContext) -> Option<u64> {
    ctx.basis_dim()
}

/// Renders `a` with every coefficient printed, for golden files.
pub fn render(a: &AlgebraElement) -> String {
    alloc::format!("{a}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn ctx(p: u32, s: u32, r: u32, n: usize) -> DpContext {
        DpContext::new(&ParameterTuple::constant(p, s, r).unwrap(), n).unwrap()
    }

    fn x0(e: u64) -> AlgebraElement {
        AlgebraElement::monomial(DpMonomial::var(Var::x(0), e), 1)
    }

    #[test]
    fn product_examples() {
        let c2 = ctx(2, 1, 1, 1);
        assert!(c2.mul(&x0(1), &x0(1)).is_zero());
        let y = AlgebraElement::monomial(DpMonomial::var(Var::y(0), 1), 1);
        let xy = c2.mul(&x0(1), &y);
        assert_eq!(xy.to_string(), "x0^(1).y0^(1)");
        let c3 = ctx(3, 1, 1, 1);
        assert_eq!(c3.mul(&x0(1), &x0(1)), x0(2).scaled(c3.fp(), 2));
        // Past the bound p^S = 3.
        assert!(c3.mul(&x0(2), &x0(1)).is_zero());
    }

    #[test]
    fn product_matches_exact_binomials() {
        let c = ctx(5, 2, 1, 1);
        for i in 0..25u64 {
            for j in 0..25u64 {
                let got = c.mul(&x0(i), &x0(j));
                let want = if i + j < 25 {
                    let mut b = 1u128;
                    for k in 0..i as u128 {
                        b = b * (i as u128 + j as u128 - k) / (k + 1);
                    }
                    x0(i + j).scaled(c.fp(), (b % 5) as u32)
                } else {
                    AlgebraElement::zero()
                };
                assert_eq!(got, want, "{i} {j}");
            }
        }
    }

    #[test]
    fn derive_examples() {
        let c3 = ctx(3, 1, 1, 1);
        assert_eq!(c3.derive(Var::x(0), 0, &x0(2)), x0(1));
        let y = c3.var_power(Var::y(0), 1);
        assert!(c3.derive(Var::x(0), 0, &y).is_zero());
        // ∂^{p^S} = 0.
        assert!(c3.derive(Var::x(0), 1, &x0(2)).is_zero());
        let c = ctx(2, 3, 1, 1);
        assert_eq!(c.derive(Var::x(0), 2, &x0(6)), x0(2));
    }

    #[test]
    fn basis_dimensions() {
        assert_eq!(ctx(2, 1, 1, 1).basis(1000).unwrap().len(), 8);
        assert_eq!(ctx(2, 1, 1, 3).basis(1000).unwrap().len(), 512);
        assert_eq!(ctx(3, 1, 1, 2).basis(1000).unwrap().len(), 729);
        assert_eq!(ctx(3, 1, 1, 2).basis(100), Err(Error::TruncationTooLarge));
        let b = ctx(2, 1, 1, 2).basis(1000).unwrap();
        let mut sorted = b.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), b.len());
    }

    #[test]
    fn rendering() {
        let m = DpMonomial::from_pairs([(Var::y(1), 3), (Var::x(0), 1), (Var::z(0), 0)]);
        assert_eq!(m.to_string(), "x0^(1).y1^(3)");
        let c = ctx(3, 1, 1, 2);
        let mut a = AlgebraElement::one();
        a.add_term(c.fp(), m, 2);
        assert_eq!(a.to_string(), "1 + 2·x0^(1).y1^(3)");
        assert_eq!(AlgebraElement::zero().to_string(), "0");
    }

    #[test]
    fn context_mismatch() {
        let c = ctx(2, 1, 1, 1);
        let bad = AlgebraElement::monomial(DpMonomial::var(Var::x(1), 1), 1);
        assert_eq!(dp_mul(&c, &bad, &x0(1)), Err(Error::ContextMismatch));
    }

    fn arb_element(p: u32, s: u32, r: u32, n: usize) -> impl Strategy<Value = AlgebraElement> {
        let c = ctx(p, s, r, n);
        let vars: Vec<(Var, u64)> = c.variables().map(|v| (v, c.bound(v))).collect();
        let nv = vars.len();
        prop::collection::vec((prop::collection::vec(0u64..64, nv), 1..p), 0..5).prop_map(move |terms| {
            let fp = Prime::new(p).unwrap();
            let mut a = AlgebraElement::zero();
            for (exps, coef) in terms {
                let m = DpMonomial::from_pairs(vars.iter().zip(exps).map(|(&(v, b), e)| (v, e % b)));
                a.add_term(fp, m, coef);
            }
            a
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn commutative_and_associative(
            a in arb_element(3, 2, 1, 2), b in arb_element(3, 2, 1, 2), c in arb_element(3, 2, 1, 2)
        ) {
            let k = ctx(3, 2, 1, 2);
            prop_assert_eq!(k.mul(&a, &b), k.mul(&b, &a));
            prop_assert_eq!(k.mul(&k.mul(&a, &b), &c), k.mul(&a, &k.mul(&b, &c)));
            prop_assert_eq!(k.mul(&AlgebraElement::one(), &a), a.clone());
            prop_assert_eq!(k.mul(&a, &AlgebraElement::one()), a);
        }

        #[test]
        fn leibniz(f in arb_element(2, 2, 2, 2), g in arb_element(2, 2, 2, 2), var in 0usize..6, m in 0u32..2) {
            let k = ctx(2, 2, 2, 2);
            let v = k.variables().nth(var).unwrap();
            let lhs = k.derive(v, m, &k.mul(&f, &g));
            let rhs = k.mul(&k.derive(v, m, &f), &g).add(k.fp(), &k.mul(&f, &k.derive(v, m, &g)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn power_levels_compose(f in arb_element(3, 2, 2, 1), var in 0usize..3) {
            let k = ctx(3, 2, 2, 1);
            let v = k.variables().nth(var).unwrap();
            let mut g = f.clone();
            for _ in 0..3 {
                g = k.derive(v, 0, &g);
            }
            prop_assert_eq!(k.derive(v, 1, &f), g);
        }
    }
}
