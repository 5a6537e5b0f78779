//! Monomials with a fixed-capacity exponent vector and the three term orders
//! used by the Groebner engine.
//!
//! Every ring in this crate has at most [`MAX_VARS`] variables (the largest
//! one, a product embedding with an auxiliary elimination variable, needs 12),
//! so exponents live in a fixed array and monomials are `Copy`.

use crate::error::{Error, Result};
use core::cmp::Ordering;

pub const MAX_VARS: usize = 12;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    deg: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            exps: [0; MAX_VARS],
            deg: 0,
        }
    }

    pub fn var(i: usize) -> Self {
        assert!(i < MAX_VARS);
        let mut exps = [0u16; MAX_VARS];
        exps[i] = 1;
        Monomial { exps, deg: 1 }
    }

    pub fn from_exps(exps: &[u16]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(Error::LengthMismatch {
                expected: MAX_VARS,
                got: exps.len(),
            });
        }
        let mut e = [0u16; MAX_VARS];
        e[..exps.len()].copy_from_slice(exps);
        let deg = e.iter().map(|&x| x as u32).sum();
        Ok(Monomial { exps: e, deg })
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn exps(&self) -> &[u16; MAX_VARS] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    /// Total degree restricted to a subset of the variables, for product
    /// rings graded by blocks.
    pub fn degree_on(&self, vars: &[usize]) -> u32 {
        vars.iter().map(|&i| self.exps[i] as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u16; MAX_VARS];
        for i in 0..MAX_VARS {
            exps[i] = self.exps[i]
                .checked_add(other.exps[i])
                .expect("monomial exponent overflow");
        }
        Monomial {
            exps,
            deg: self.deg + other.deg,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        if self.deg > other.deg {
            return false;
        }
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = [0u16; MAX_VARS];
        for i in 0..MAX_VARS {
            exps[i] = other.exps[i].checked_sub(self.exps[i])?;
        }
        Some(Monomial {
            exps,
            deg: other.deg - self.deg,
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u16; MAX_VARS];
        for i in 0..MAX_VARS {
            exps[i] = self.exps[i].max(other.exps[i]);
        }
        let deg = exps.iter().map(|&x| x as u32).sum();
        Monomial { exps, deg }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u16; MAX_VARS];
        for i in 0..MAX_VARS {
            exps[i] = self.exps[i].min(other.exps[i]);
        }
        let deg = exps.iter().map(|&x| x as u32).sum();
        Monomial { exps, deg }
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn pow(&self, k: u16) -> Monomial {
        let mut exps = [0u16; MAX_VARS];
        for i in 0..MAX_VARS {
            exps[i] = self.exps[i].checked_mul(k).expect("monomial exponent overflow");
        }
        Monomial {
            exps,
            deg: self.deg * k as u32,
        }
    }
}

/// Term orders. Variable 0 is the largest variable in every order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MonomialOrder {
    /// Degree reverse lexicographic.
    GrevLex,
    /// Pure lexicographic.
    Lex,
    /// Elimination order for the first `k` variables: grevlex on the leading
    /// block dominates, ties broken by grevlex on the rest. Leading terms
    /// free of the first `k` variables therefore certify membership in the
    /// eliminated subring.
    Block(usize),
}

fn cmp_grevlex(a: &Monomial, b: &Monomial, lo: usize, hi: usize) -> Ordering {
    let da: u32 = (lo..hi).map(|i| a.exp(i) as u32).sum();
    let db: u32 = (lo..hi).map(|i| b.exp(i) as u32).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    // Equal degree: the one whose trailing difference is negative is larger.
    for i in (lo..hi).rev() {
        match a.exp(i).cmp(&b.exp(i)) {
            Ordering::Equal => continue,
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

fn cmp_lex(a: &Monomial, b: &Monomial, nvars: usize) -> Ordering {
    for i in 0..nvars {
        match a.exp(i).cmp(&b.exp(i)) {
            Ordering::Equal => continue,
            ord => return ord,
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial, nvars: usize) -> Ordering {
        match *self {
            MonomialOrder::GrevLex => cmp_grevlex(a, b, 0, nvars),
            MonomialOrder::Lex => cmp_lex(a, b, nvars),
            MonomialOrder::Block(k) => {
                let k = k.min(nvars);
                match cmp_grevlex(a, b, 0, k) {
                    Ordering::Equal => cmp_grevlex(a, b, k, nvars),
                    ord => ord,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_exps(e).unwrap()
    }

    #[test]
    fn grevlex_on_quadrics_in_three_vars() {
        // Descending: x^2, xy, y^2, xz, yz, z^2.
        let want = [
            m(&[2, 0, 0]),
            m(&[1, 1, 0]),
            m(&[0, 2, 0]),
            m(&[1, 0, 1]),
            m(&[0, 1, 1]),
            m(&[0, 0, 2]),
        ];
        let mut got: Vec<Monomial> = want.to_vec();
        got.reverse();
        got.sort_by(|a, b| MonomialOrder::GrevLex.cmp(b, a, 3));
        assert_eq!(got, want);
    }

    #[test]
    fn lex_on_quadrics_in_three_vars() {
        // Descending: x^2, xy, xz, y^2, yz, z^2.
        let want = [
            m(&[2, 0, 0]),
            m(&[1, 1, 0]),
            m(&[1, 0, 1]),
            m(&[0, 2, 0]),
            m(&[0, 1, 1]),
            m(&[0, 0, 2]),
        ];
        let mut got: Vec<Monomial> = want.to_vec();
        got.reverse();
        got.sort_by(|a, b| MonomialOrder::Lex.cmp(b, a, 3));
        assert_eq!(got, want);
    }

    #[test]
    fn block_order_eliminates_leading_variables() {
        // With Block(1) in vars (t, x, y): any power of t beats anything
        // t-free, and t-free monomials compare by grevlex on (x, y).
        let ord = MonomialOrder::Block(1);
        assert_eq!(ord.cmp(&m(&[1, 0, 0]), &m(&[0, 5, 5]), 3), Ordering::Greater);
        assert_eq!(ord.cmp(&m(&[0, 2, 0]), &m(&[0, 1, 1]), 3), Ordering::Greater);
        assert_eq!(ord.cmp(&m(&[2, 0, 0]), &m(&[1, 3, 0]), 3), Ordering::Greater);
    }

    #[test]
    fn divisibility_and_quotient() {
        let a = m(&[1, 2, 0]);
        let b = m(&[2, 2, 1]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(a.div(&b).unwrap(), m(&[1, 0, 1]));
        assert_eq!(a.lcm(&b), m(&[2, 2, 1]));
        assert_eq!(a.gcd(&b), m(&[1, 2, 0]));
    }

    #[test]
    fn grevlex_is_multiplicative_on_samples() {
        let ord = MonomialOrder::GrevLex;
        let mut rng = crate::rng::Rng::new(7);
        for _ in 0..2000 {
            let mut e = [0u16; 3];
            let mut f = [0u16; 3];
            let mut g = [0u16; 3];
            for i in 0..3 {
                e[i] = rng.below(5) as u16;
                f[i] = rng.below(5) as u16;
                g[i] = rng.below(5) as u16;
            }
            let (a, b, c) = (m(&e), m(&f), m(&g));
            let ab = ord.cmp(&a, &b, 3);
            assert_eq!(ord.cmp(&a.mul(&c), &b.mul(&c), 3), ab);
        }
    }
}
