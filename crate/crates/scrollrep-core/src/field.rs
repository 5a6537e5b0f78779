//! Exact scalar arithmetic.
//!
//! A field is a *context* object implementing [`Field`]; elements are plain
//! data and every operation goes through the context. This keeps prime-field
//! elements at a bare `u64` (the modulus lives in the context, not in each
//! element) while rationals carry arbitrary-precision numerator and
//! denominator.

use crate::error::{Error, Result};
use alloc::string::{String, ToString};
use core::fmt::Debug;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Field context. `Elem` values are only meaningful relative to the context
/// that produced them; mixing contexts is a caller error and is checked at the
/// ring level.
pub trait Field: Clone + PartialEq + Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Debug + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Characteristic: `Some(p)` for a prime field, `None` for the rationals.
    fn characteristic(&self) -> Option<u64>;

    /// A field element drawn from the generator: uniform over the residues
    /// of a prime field, a bounded integer over the rationals.
    fn sample(&self, rng: &mut crate::rng::Rng) -> Self::Elem;

    /// Canonical text for an element: decimal integer or `a/b`.
    fn format(&self, a: &Self::Elem) -> String;

    /// Parse the canonical text form.
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    /// True when the element equals the integer `n`.
    fn eq_i64(&self, a: &Self::Elem, n: i64) -> bool {
        *a == self.from_i64(n)
    }
}

/// The rational numbers. Elements are reduced fractions with positive
/// denominator (maintained by the underlying representation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(a.recip())
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn characteristic(&self) -> Option<u64> {
        None
    }
    fn sample(&self, rng: &mut crate::rng::Rng) -> BigRational {
        self.from_i64(rng.below(2001) as i64 - 1000)
    }
    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            a.to_string()
        }
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        let parse_int = |t: &str| -> Result<BigInt> {
            t.parse::<BigInt>()
                .map_err(|_| Error::Parse(alloc::format!("bad integer `{t}`")))
        };
        match s.split_once('/') {
            None => Ok(BigRational::from_integer(parse_int(s.trim())?)),
            Some((n, d)) => {
                let den = parse_int(d.trim())?;
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(BigRational::new(parse_int(n.trim())?, den))
            }
        }
    }
}

/// Deterministic Miller-Rabin, valid for all n < 3_215_031_751 with the base
/// set below; we only admit moduli below 2^31.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let pow = |mut b: u64, mut e: u64, m: u64| -> u64 {
        let mut acc = 1u64;
        b %= m;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.wrapping_mul(b) % m;
            }
            b = b.wrapping_mul(b) % m;
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7] {
        let mut x = pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = x.wrapping_mul(x) % n;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime field F_p with p an odd prime below 2^31, so products of two reduced
/// elements fit in a u64 without overflow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p >= (1 << 31) || !is_prime_u64(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn powmod(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Result<u64> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.powmod(*a, self.p - 2))
    }
    fn from_i64(&self, n: i64) -> u64 {
        let r = n.rem_euclid(self.p as i64);
        r as u64
    }
    fn characteristic(&self) -> Option<u64> {
        Some(self.p)
    }
    fn sample(&self, rng: &mut crate::rng::Rng) -> u64 {
        rng.below(self.p)
    }
    fn format(&self, a: &u64) -> String {
        // Small negative residues print as signed integers, which keeps the
        // text form of a reduced-from-Q polynomial readable.
        if *a > self.p / 2 {
            alloc::format!("-{}", self.p - a)
        } else {
            a.to_string()
        }
    }
    fn parse(&self, s: &str) -> Result<u64> {
        match s.split_once('/') {
            None => {
                let v = s
                    .trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(alloc::format!("bad integer `{s}`")))?;
                Ok(self.from_i64(v))
            }
            Some((n, d)) => {
                let num = n
                    .trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(alloc::format!("bad numerator `{n}`")))?;
                let den = d
                    .trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(alloc::format!("bad denominator `{d}`")))?;
                self.div(&self.from_i64(num), &self.from_i64(den))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_wrap() {
        let f = PrimeField::new(101).unwrap();
        assert_eq!(f.add(&50, &51), 0);
        assert_eq!(f.sub(&3, &7), 97);
    }

    #[test]
    fn rational_sum() {
        let q = Rationals;
        let half = q.div(&q.from_i64(1), &q.from_i64(2)).unwrap();
        let third = q.div(&q.from_i64(1), &q.from_i64(3)).unwrap();
        let s = q.add(&half, &third);
        assert_eq!(q.format(&s), "5/6");
    }

    #[test]
    fn inverse_matches_exhaustive_scan() {
        // Oracle: scan all residues for the multiplicative inverse.
        let f = PrimeField::new(7).unwrap();
        let brute = (1..7).find(|b| 3 * b % 7 == 1).unwrap();
        assert_eq!(brute, 5);
        assert_eq!(f.inv(&3).unwrap(), brute);
        for a in 1..7u64 {
            let brute = (1..7).find(|b| a * b % 7 == 1).unwrap();
            assert_eq!(f.inv(&a).unwrap(), brute);
        }
    }

    #[test]
    fn rejects_composite_and_huge_moduli() {
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(91).is_err());
        assert!(PrimeField::new(1 << 31).is_err());
        assert!(PrimeField::new(32003).is_ok());
        assert!(PrimeField::new(10007).is_ok());
    }

    #[test]
    fn primality_scan_agrees_with_trial_division() {
        let trial = |n: u64| {
            if n < 2 {
                return false;
            }
            let mut d = 2;
            while d * d <= n {
                if n % d == 0 {
                    return false;
                }
                d += 1;
            }
            true
        };
        for n in 0..2000 {
            assert_eq!(is_prime_u64(n), trial(n), "disagree at {n}");
        }
    }
}
