//! Outward-rounded interval arithmetic on `f64`.
//!
//! Every arithmetic result is widened to the next representable float on
//! each side, so the true value stays enclosed. `ln` and `exp` come from
//! `libm`, whose results are within one ulp; those are widened by two ulps.

use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

#[inline]
fn down(x: f64) -> f64 {
    if x.is_nan() {
        x
    } else {
        x.next_down()
    }
}

#[inline]
fn up(x: f64) -> f64 {
    if x.is_nan() {
        x
    } else {
        x.next_up()
    }
}

// Upper bound on `top + 1` for the leading 64 bits of a big integer.
fn top_up(top: u64) -> f64 {
    match top.checked_add(1) {
        Some(t) => Interval::from_u64(t).hi,
        None => 18_446_744_073_709_551_616.0,
    }
}

impl Interval {
    pub const fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// Encloses an integer that may not be exactly representable.
    pub fn from_u64(n: u64) -> Self {
        let x = n as f64;
        if x as u64 == n && x < 1.8e19 {
            Interval::point(x)
        } else {
            Interval::new(down(x), up(x))
        }
    }

    pub fn from_big(n: &BigUint) -> Self {
        match n.to_u64() {
            Some(v) => Interval::from_u64(v),
            None => {
                let bits = n.bits();
                if bits > 1020 {
                    return Interval::new(f64::MAX, f64::INFINITY);
                }
                let shift = bits - 64;
                let top = (n >> shift).to_u64().unwrap();
                let scale = libm::ldexp(1.0, shift as i32);
                let lo = Interval::from_u64(top).lo * scale;
                let hi = top_up(top) * scale;
                Interval::new(down(lo), up(hi))
            }
        }
    }

    /// Natural logarithm of a positive big integer, valid at any size.
    pub fn ln_big(n: &BigUint) -> Self {
        assert!(!n.is_zero(), "ln of zero");
        let bits = n.bits();
        if bits <= 900 {
            return Interval::from_big(n).ln();
        }
        let shift = bits - 64;
        let top = (n >> shift).to_u64().unwrap();
        let head = Interval::new(Interval::from_u64(top).lo, top_up(top)).ln();
        head + Interval::LN2 * Interval::from_u64(shift)
    }

    pub const LN2: Interval = Interval { lo: 0.693_147_180_559_945_2, hi: 0.693_147_180_559_945_4 };

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn ln(self) -> Self {
        assert!(self.lo > 0.0, "ln of non-positive interval");
        let lo = down(down(libm::log(self.lo)));
        let hi = up(up(libm::log(self.hi)));
        Interval::new(lo, hi)
    }

    pub fn exp(self) -> Self {
        let lo = down(down(libm::exp(self.lo))).max(0.0);
        let hi = up(up(libm::exp(self.hi)));
        Interval::new(lo, hi)
    }

    /// `self^e` for a positive base, through `exp(e ln self)`.
    pub fn powf(self, e: Interval) -> Self {
        (self.ln() * e).exp()
    }

    /// The floor, if it is the same integer across the whole interval.
    pub fn certified_floor(&self) -> Option<f64> {
        let (a, b) = (libm::floor(self.lo), libm::floor(self.hi));
        if a == b && self.lo.is_finite() && self.hi.is_finite() {
            Some(a)
        } else {
            None
        }
    }

    pub fn max(self, o: Interval) -> Self {
        Interval::new(self.lo.max(o.lo), self.hi.max(o.hi))
    }

    pub fn min(self, o: Interval) -> Self {
        Interval::new(self.lo.min(o.lo), self.hi.min(o.hi))
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval::new(down(self.lo + o.lo), up(self.hi + o.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval::new(down(self.lo - o.hi), up(self.hi - o.lo))
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo), up(hi))
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, o: Interval) -> Interval {
        assert!(o.lo > 0.0 || o.hi < 0.0, "division by interval containing zero");
        let c = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(down(lo), up(hi))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12}, {:.12}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn encloses_known_constants() {
        let ln3 = Interval::from_u64(3).ln();
        assert!(ln3.contains(core::f64::consts::LN_10 * 0.0 + 1.0986122886681098));
        let l = Interval::from_u64(3) * Interval::LN2 / ln3;
        assert!(l.contains(3.0 * core::f64::consts::LN_2 / 1.0986122886681098));
        assert!(l.width() < 1e-14);
    }

    #[test]
    fn big_logs_are_consistent() {
        let n = BigUint::from(2u32).pow(3000) * BigUint::from(7u32);
        let l = Interval::ln_big(&n);
        let want = 3000.0 * core::f64::consts::LN_2 + libm::log(7.0);
        assert!(l.contains(want), "{l} vs {want}");
        let small = BigUint::from(12345u32);
        assert!(Interval::ln_big(&small).contains(libm::log(12345.0)));
    }

    #[test]
    fn floor_certification() {
        assert_eq!(Interval::new(2.5, 2.7).certified_floor(), Some(2.0));
        assert_eq!(Interval::new(2.999, 3.001).certified_floor(), None);
    }
}
