//! Dense univariate arithmetic over a prime field, sized for root hunting:
//! remainders, gcds, modular powers and the rational roots of one-variable
//! polynomials. Coefficients are ascending, `c[0] + c[1] t + ...`, with no
//! trailing zero.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{Field, PrimeField};
use crate::rng::Rng;

fn trim(c: &mut Vec<u64>) {
    while c.last() == Some(&0) {
        c.pop();
    }
}

pub fn degree(c: &[u64]) -> Option<usize> {
    if c.is_empty() {
        None
    } else {
        Some(c.len() - 1)
    }
}

pub fn eval(fp: &PrimeField, c: &[u64], t: u64) -> u64 {
    let mut acc = 0u64;
    for &k in c.iter().rev() {
        acc = fp.add(&fp.mul(&acc, &t), &k);
    }
    acc
}

fn monic(fp: &PrimeField, a: &[u64]) -> Vec<u64> {
    match a.last() {
        None => Vec::new(),
        Some(&lead) => {
            let inv = fp.inv(&lead).expect("leading coefficient is nonzero");
            a.iter().map(|&c| fp.mul(&c, &inv)).collect()
        }
    }
}

fn sub(fp: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] = c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] = fp.sub(&out[i], &c);
    }
    trim(&mut out);
    out
}

fn mul(fp: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = fp.add(&out[i + j], &fp.mul(&x, &y));
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` by nonzero `b`.
fn rem(fp: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let b = monic(fp, b);
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    while r.len() >= b.len() {
        let lead = *r.last().expect("trimmed nonempty");
        let shift = r.len() - b.len();
        for (i, &c) in b.iter().enumerate() {
            r[shift + i] = fp.sub(&r[shift + i], &fp.mul(&lead, &c));
        }
        trim(&mut r);
    }
    r
}

/// Quotient and remainder of `a` by nonzero `b`.
fn divrem(fp: &PrimeField, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let bm = monic(fp, b);
    let blead_inv = fp.inv(b.last().expect("nonzero divisor")).expect("unit");
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    if r.len() < bm.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - bm.len() + 1];
    while r.len() >= bm.len() {
        let lead = *r.last().expect("trimmed nonempty");
        let shift = r.len() - bm.len();
        q[shift] = fp.add(&q[shift], &fp.mul(&lead, &blead_inv));
        for (i, &c) in bm.iter().enumerate() {
            r[shift + i] = fp.sub(&r[shift + i], &fp.mul(&lead, &c));
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Monic gcd.
fn gcd(fp: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x: Vec<u64> = a.to_vec();
    let mut y: Vec<u64> = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(fp, &x, &y);
        x = y;
        y = r;
    }
    monic(fp, &x)
}

/// `base^e` modulo `m` (`m` of degree at least 1).
fn powrem(fp: &PrimeField, base: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = rem(fp, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(fp, &mul(fp, &acc, &b), m);
        }
        b = rem(fp, &mul(fp, &b, &b), m);
        e >>= 1;
    }
    acc
}

/// All roots in the field, each listed once, ascending. The zero polynomial
/// and constants report no roots.
pub fn roots(fp: &PrimeField, coeffs: &[u64], rng: &mut Rng) -> Vec<u64> {
    let mut f: Vec<u64> = coeffs.iter().map(|&c| c % fp.modulus()).collect();
    trim(&mut f);
    if f.len() <= 1 {
        return Vec::new();
    }
    let f = monic(fp, &f);
    // gcd with t^p - t keeps exactly the distinct linear factors
    let tp = powrem(fp, &[0, 1], fp.modulus(), &f);
    let split = gcd(fp, &f, &sub(fp, &tp, &[0, 1]));
    let mut out = Vec::new();
    collect_roots(fp, split, rng, &mut out);
    out.sort_unstable();
    out
}

/// True when the polynomial is coprime with its derivative, so it has no
/// repeated root in any extension. Constants are square free; zero is not.
/// Callers keep the degree below the characteristic, where the derivative
/// of a nonconstant polynomial cannot vanish.
pub fn square_free(fp: &PrimeField, coeffs: &[u64]) -> bool {
    let mut f: Vec<u64> = coeffs.iter().map(|&c| c % fp.modulus()).collect();
    trim(&mut f);
    if f.is_empty() {
        return false;
    }
    if f.len() == 1 {
        return true;
    }
    let deriv: Vec<u64> = (1..f.len())
        .map(|i| fp.mul(&f[i], &(i as u64 % fp.modulus())))
        .collect();
    gcd(fp, &f, &deriv).len() == 1
}

/// Roots of a monic product of distinct linear factors, by random quadratic
/// residue splitting.
fn collect_roots(fp: &PrimeField, g: Vec<u64>, rng: &mut Rng, out: &mut Vec<u64>) {
    match g.len() {
        0 | 1 => {}
        2 => out.push(fp.neg(&g[0])),
        _ => loop {
            let a = rng.below(fp.modulus());
            let half = (fp.modulus() - 1) / 2;
            let pw = powrem(fp, &[a, 1], half, &g);
            let h = gcd(fp, &g, &sub(fp, &pw, &[1]));
            if !h.is_empty() && h.len() > 1 && h.len() < g.len() {
                let (q, r) = divrem(fp, &g, &h);
                debug_assert!(r.is_empty());
                collect_roots(fp, h, rng, out);
                collect_roots(fp, q, rng, out);
                return;
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    #[test]
    fn roots_of_a_split_cubic() {
        let fp = fp();
        // (t - 2)(t - 5)(t - 7) = t^3 - 14 t^2 + 59 t - 70
        let p = fp.modulus();
        let f = [p - 70, 59, p - 14, 1];
        let mut rng = Rng::new(9);
        assert_eq!(roots(&fp, &f, &mut rng), vec![2, 5, 7]);
    }

    #[test]
    fn irreducible_quadratic_has_no_roots() {
        let fp = fp();
        // t^2 + 1 is irreducible since 32003 = 3 mod 4
        let f = [1, 0, 1];
        let mut rng = Rng::new(3);
        assert!(roots(&fp, &f, &mut rng).is_empty());
    }

    #[test]
    fn square_free_detects_repeated_factors() {
        let fp = fp();
        let p = fp.modulus();
        // (t - 1)(t - 2) and (t - 1)^2
        assert!(square_free(&fp, &[2, p - 3, 1]));
        assert!(!square_free(&fp, &[1, p - 2, 1]));
        assert!(square_free(&fp, &[7]));
        assert!(!square_free(&fp, &[]));
    }

    #[test]
    fn repeated_roots_are_reported_once() {
        let fp = fp();
        // t^2 (t - 1)
        let p = fp.modulus();
        let f = [0, 0, p - 1, 1];
        let mut rng = Rng::new(5);
        assert_eq!(roots(&fp, &f, &mut rng), vec![0, 1]);
    }

    #[test]
    fn high_degree_product_recovers_all_roots() {
        let fp = fp();
        let picks = [1u64, 4, 9, 100, 2024, 31000, 7];
        let mut f = vec![1u64];
        for &r in &picks {
            f = mul(&fp, &f, &[fp.neg(&r), 1]);
        }
        // multiply in an irreducible-looking factor too: t^2 + t + 1 has
        // roots only when p = 1 mod 3, and 32003 = 2 mod 3
        f = mul(&fp, &f, &[1, 1, 1]);
        let mut rng = Rng::new(11);
        let mut want: Vec<u64> = picks.to_vec();
        want.sort_unstable();
        assert_eq!(roots(&fp, &f, &mut rng), want);
    }
}
