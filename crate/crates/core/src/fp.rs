//! Arithmetic in the prime field `F_p` and binomial coefficients mod `p`.

use crate::{Error, Result};

/// A prime modulus. Elements of `F_p` are plain `u32` residues in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        self.add(a, self.0 - b % self.0)
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1 % self.0;
        a %= self.0;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; `a` must be nonzero mod `p`.
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(a % self.0 != 0);
        self.pow(a, self.0 as u64 - 2)
    }

    /// Reduce a signed integer into `0..p`.
    pub fn from_i64(self, a: i64) -> u32 {
        a.rem_euclid(self.0 as i64) as u32
    }

    /// `binom(n, k) mod p` by Lucas' theorem.
    pub fn binom(self, mut n: u64, mut k: u64) -> u32 {
        if k > n {
            return 0;
        }
        let p = self.0 as u64;
        let mut acc = 1u32;
        while k > 0 {
            let (nd, kd) = (n % p, k % p);
            if kd > nd {
                return 0;
            }
            acc = self.mul(acc, small_binom_mod(nd, kd, self));
            n /= p;
            k /= p;
        }
        acc
    }
}

// binom(n, k) mod p for 0 <= k <= n < p, via the multiplicative formula.
fn small_binom_mod(n: u64, k: u64, p: Prime) -> u32 {
    let k = k.min(n - k);
    let mut num = 1u32;
    let mut den = 1u32;
    for i in 0..k {
        num = p.mul(num, ((n - i) % p.0 as u64) as u32);
        den = p.mul(den, ((i + 1) % p.0 as u64) as u32);
    }
    p.mul(num, p.inv(den))
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `p^e` as `u64`, or `None` on overflow.
pub fn checked_pow(p: u32, e: u32) -> Option<u64> {
    (p as u64).checked_pow(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom_exact(n: u64, k: u64) -> u128 {
        if k > n {
            return 0;
        }
        let mut r: u128 = 1;
        for i in 0..k {
            r = r * (n - i) as u128 / (i + 1) as u128;
        }
        r
    }

    #[test]
    fn lucas_matches_exact_binomials() {
        for p in [2u32, 3, 5, 7] {
            let fp = Prime::new(p).unwrap();
            for n in 0..60u64 {
                for k in 0..=n {
                    let want = (binom_exact(n, k) % p as u128) as u32;
                    assert_eq!(fp.binom(n, k), want, "p={p} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn field_ops() {
        let f = Prime::new(5).unwrap();
        for a in 1..5 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        assert_eq!(f.sub(1, 3), 3);
        assert_eq!(f.from_i64(-1), 4);
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(1).is_err());
    }
}
