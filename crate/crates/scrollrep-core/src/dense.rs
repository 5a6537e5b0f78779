//! Dense homogeneous forms over a prime field.
//!
//! Certifying a composition of maps exactly means expanding forms of degree
//! around thirty-five in four variables; sparse term arithmetic drowns
//! there. A [`DensePoly`] stores the full coefficient vector of one
//! homogeneous degree, indexed by a combinatorial rank of the exponent
//! vector, so multiplication is table lookups over `u64` residues.

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::monomial::Monomial;
use crate::poly::{PolyRing, Polynomial};
use alloc::vec;
use alloc::vec::Vec;

pub const MAX_DENSE_VARS: usize = 8;

/// Largest rectangular accumulator the boxed multiply will allocate.
const BOX_SLOTS: usize = 1 << 22;

/// Largest modulus whose products can accumulate unreduced in a `u64`
/// across any plausible coefficient count.
const LAZY_MODULUS: u64 = 46340;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensePoly {
    pub deg: u32,
    pub coeffs: Vec<u64>,
}

pub struct DenseCtx {
    field: PrimeField,
    nvars: usize,
    max_deg: u32,
    /// binom[n][k] with n up to max_deg + nvars.
    binom: Vec<Vec<u64>>,
    /// Exponent vectors per degree, in rank order.
    tables: Vec<Vec<[u16; MAX_DENSE_VARS]>>,
}

impl DenseCtx {
    pub fn new(field: PrimeField, nvars: usize, max_deg: u32) -> Self {
        assert!(nvars >= 1 && nvars <= MAX_DENSE_VARS);
        let nmax = max_deg as usize + nvars + 1;
        let mut binom = vec![vec![0u64; nmax + 1]; nmax + 1];
        for row in binom.iter_mut() {
            row[0] = 1;
        }
        for n in 1..=nmax {
            for k in 1..=n {
                binom[n][k] = binom[n - 1][k - 1] + binom[n - 1][k];
            }
        }
        let mut ctx = DenseCtx {
            field,
            nvars,
            max_deg,
            binom,
            tables: Vec::new(),
        };
        for d in 0..=max_deg {
            ctx.tables.push(ctx.enumerate(d));
        }
        ctx
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    fn choose(&self, n: usize, k: usize) -> u64 {
        if k > n {
            return 0;
        }
        self.binom[n][k]
    }

    /// Number of degree-d monomials in `k` variables.
    fn count_in(&self, k: usize, d: u32) -> usize {
        self.choose(d as usize + k - 1, k - 1) as usize
    }

    pub fn len(&self, d: u32) -> usize {
        self.count_in(self.nvars, d)
    }

    fn enumerate(&self, d: u32) -> Vec<[u16; MAX_DENSE_VARS]> {
        let mut out = Vec::with_capacity(self.len(d));
        let mut cur = [0u16; MAX_DENSE_VARS];
        fn rec(
            nvars: usize,
            left: u32,
            var: usize,
            cur: &mut [u16; MAX_DENSE_VARS],
            out: &mut Vec<[u16; MAX_DENSE_VARS]>,
        ) {
            if var + 1 == nvars {
                cur[var] = left as u16;
                out.push(*cur);
                cur[var] = 0;
                return;
            }
            for e in 0..=left {
                cur[var] = e as u16;
                rec(nvars, left - e, var + 1, cur, out);
            }
            cur[var] = 0;
        }
        rec(self.nvars, d, 0, &mut cur, &mut out);
        out
    }

    /// Rank of an exponent vector within its degree, matching the
    /// enumeration order (ascending in the first variable, then the next).
    /// The count of monomials skipped by choosing exponent `e` at a slot
    /// telescopes to a difference of two binomials.
    pub fn rank(&self, exps: &[u16]) -> usize {
        let mut rem: usize = exps[..self.nvars].iter().map(|&e| e as usize).sum();
        let mut rank = 0u64;
        for i in 0..self.nvars - 1 {
            let k = self.nvars - i - 1;
            let e = exps[i] as usize;
            rank += self.choose(rem + k, k) - self.choose(rem - e + k, k);
            rem -= e;
        }
        rank as usize
    }

    pub fn exps(&self, d: u32, idx: usize) -> &[u16] {
        &self.tables[d as usize][idx][..self.nvars]
    }

    pub fn zero(&self, d: u32) -> DensePoly {
        DensePoly {
            deg: d,
            coeffs: vec![0; self.len(d)],
        }
    }

    pub fn one(&self) -> DensePoly {
        DensePoly {
            deg: 0,
            coeffs: vec![1],
        }
    }

    pub fn from_sparse(&self, ring: &PolyRing<PrimeField>, f: &Polynomial<PrimeField>) -> Result<DensePoly> {
        assert_eq!(ring.nvars(), self.nvars);
        let d = ring.homogeneous_degree(f)?;
        if d > self.max_deg {
            return Err(Error::Pipeline("degree exceeds dense context".into()));
        }
        let mut out = self.zero(d);
        for (m, c) in f.terms() {
            out.coeffs[self.rank(&m.exps()[..self.nvars])] = *c;
        }
        Ok(out)
    }

    pub fn to_sparse(&self, ring: &PolyRing<PrimeField>, f: &DensePoly) -> Polynomial<PrimeField> {
        assert_eq!(ring.nvars(), self.nvars);
        let mut terms = Vec::new();
        for (i, &c) in f.coeffs.iter().enumerate() {
            if c != 0 {
                let e = self.exps(f.deg, i);
                terms.push((Monomial::from_exps(e).expect("within bounds"), c));
            }
        }
        ring.from_terms(terms)
    }

    pub fn is_zero(&self, f: &DensePoly) -> bool {
        f.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add_assign(&self, a: &mut DensePoly, b: &DensePoly) {
        assert_eq!(a.deg, b.deg);
        let p = self.field.modulus();
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            let s = *x + *y;
            *x = if s >= p { s - p } else { s };
        }
    }

    pub fn sub(&self, a: &DensePoly, b: &DensePoly) -> DensePoly {
        assert_eq!(a.deg, b.deg);
        let p = self.field.modulus();
        DensePoly {
            deg: a.deg,
            coeffs: a
                .coeffs
                .iter()
                .zip(b.coeffs.iter())
                .map(|(&x, &y)| if x >= y { x - y } else { x + p - y })
                .collect(),
        }
    }

    pub fn scale(&self, a: &DensePoly, c: u64) -> DensePoly {
        let p = self.field.modulus();
        DensePoly {
            deg: a.deg,
            coeffs: a.coeffs.iter().map(|&x| x * c % p).collect(),
        }
    }

    pub fn mul(&self, a: &DensePoly, b: &DensePoly) -> DensePoly {
        let d = a.deg + b.deg;
        assert!(d <= self.max_deg, "dense context too small for product");
        let side = d as usize + 1;
        if self.field.modulus() <= LAZY_MODULUS {
            if let Some(slots) = side
                .checked_pow(self.nvars as u32 - 1)
                .filter(|&n| n <= BOX_SLOTS)
            {
                return self.mul_boxed(a, b, slots, side);
            }
        }
        let p = self.field.modulus();
        let mut out = self.zero(d);
        let ta = &self.tables[a.deg as usize];
        let tb = &self.tables[b.deg as usize];
        let mut sum = [0u16; MAX_DENSE_VARS];
        for (i, &ca) in a.coeffs.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            let ea = &ta[i];
            for (j, &cb) in b.coeffs.iter().enumerate() {
                if cb == 0 {
                    continue;
                }
                let eb = &tb[j];
                for v in 0..self.nvars {
                    sum[v] = ea[v] + eb[v];
                }
                let r = self.rank(&sum[..self.nvars]);
                let slot = &mut out.coeffs[r];
                *slot = (*slot + ca * cb) % p;
            }
        }
        out
    }

    /// Position of a monomial in a rectangular grid over the first
    /// `nvars - 1` exponents. Within one total degree the grid index is
    /// injective, and it is additive on exponent vectors, which lets the
    /// boxed multiply place products without ranking each pair.
    fn box_rank(&self, exps: &[u16; MAX_DENSE_VARS], side: usize) -> usize {
        let mut r = 0usize;
        for v in 0..self.nvars - 1 {
            r = r * side + exps[v] as usize;
        }
        r
    }

    /// Schoolbook multiply into a rectangular accumulator, deferring the
    /// modular reduction to a single sweep at the end. Safe only while
    /// every partial sum fits in a machine word, hence the modulus gate
    /// in `mul`.
    fn mul_boxed(&self, a: &DensePoly, b: &DensePoly, slots: usize, side: usize) -> DensePoly {
        let d = a.deg + b.deg;
        let p = self.field.modulus();
        let ta = &self.tables[a.deg as usize];
        let tb = &self.tables[b.deg as usize];
        let rb: Vec<u32> = tb.iter().map(|e| self.box_rank(e, side) as u32).collect();
        let mut acc = vec![0u64; slots];
        for (i, &ca) in a.coeffs.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            let base = self.box_rank(&ta[i], side);
            for (j, &cb) in b.coeffs.iter().enumerate() {
                if cb != 0 {
                    acc[base + rb[j] as usize] += ca * cb;
                }
            }
        }
        let mut out = self.zero(d);
        for (slot, e) in out.coeffs.iter_mut().zip(self.tables[d as usize].iter()) {
            let v = acc[self.box_rank(e, side)];
            if v != 0 {
                *slot = v % p;
            }
        }
        out
    }

    pub fn pow(&self, a: &DensePoly, e: u32) -> DensePoly {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Substitute dense images (all of one degree) for the variables of a
    /// sparse homogeneous form, term by term with cached image powers.
    pub fn compose(
        &self,
        src: &PolyRing<PrimeField>,
        g: &Polynomial<PrimeField>,
        images: &[DensePoly],
    ) -> Result<DensePoly> {
        assert_eq!(images.len(), src.nvars());
        let e = src.homogeneous_degree(g)?;
        let d = images.first().map(|f| f.deg).unwrap_or(0);
        for f in images {
            if f.deg != d {
                return Err(Error::Pipeline("images of mixed degrees".into()));
            }
        }
        let out_deg = e * d;
        if out_deg > self.max_deg {
            return Err(Error::Pipeline("degree exceeds dense context".into()));
        }
        let mut pows: Vec<Vec<DensePoly>> = images.iter().map(|f| vec![self.one(), f.clone()]).collect();
        for (m, _) in g.terms() {
            for (i, tab) in pows.iter_mut().enumerate() {
                while (tab.len() as u16) <= m.exp(i) {
                    let last = tab.last().expect("seeded").clone();
                    tab.push(self.mul(&last, &images[i]));
                }
            }
        }
        let mut acc = self.zero(out_deg);
        let mut factors: Vec<(usize, u16)> = Vec::new();
        for (m, c) in g.terms() {
            factors.clear();
            for i in 0..src.nvars() {
                if m.exp(i) > 0 {
                    factors.push((i, m.exp(i)));
                }
            }
            // Largest exponents first, so the growing product only ever
            // multiplies against the smaller remaining powers.
            factors.sort_by(|x, y| y.1.cmp(&x.1));
            let mut t = match factors.first() {
                Some(&(i, k)) => pows[i][k as usize].clone(),
                None => self.one(),
            };
            for &(i, k) in factors.iter().skip(1) {
                t = self.mul(&t, &pows[i][k as usize]);
            }
            let t = self.scale(&t, *c);
            debug_assert_eq!(t.deg, out_deg);
            self.add_assign(&mut acc, &t);
        }
        Ok(acc)
    }

    /// True when `a = lambda b` for a nonzero scalar.
    pub fn proportional(&self, a: &DensePoly, b: &DensePoly) -> bool {
        if a.deg != b.deg {
            return false;
        }
        let pivot = match b.coeffs.iter().position(|&c| c != 0) {
            Some(i) => i,
            None => return self.is_zero(a),
        };
        if a.coeffs[pivot] == 0 {
            return false;
        }
        let lambda = self
            .field
            .div(&a.coeffs[pivot], &b.coeffs[pivot])
            .expect("pivot nonzero");
        let p = self.field.modulus();
        a.coeffs
            .iter()
            .zip(b.coeffs.iter())
            .all(|(&x, &y)| x == y * lambda % p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::MonomialOrder;
    use crate::rng::Rng;

    fn ctx(n: usize, d: u32) -> DenseCtx {
        DenseCtx::new(PrimeField::new(32003).unwrap(), n, d)
    }

    fn ring(n: usize) -> PolyRing<PrimeField> {
        let names: Vec<alloc::string::String> =
            (0..n).map(|i| alloc::format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        PolyRing::new(PrimeField::new(32003).unwrap(), &refs, MonomialOrder::GrevLex)
    }

    fn random_form(r: &PolyRing<PrimeField>, d: u32, rng: &mut Rng) -> Polynomial<PrimeField> {
        let terms = r
            .monomials_of_degree(d)
            .into_iter()
            .map(|m| (m, rng.below(32003)))
            .collect();
        r.from_terms(terms)
    }

    #[test]
    fn rank_is_a_bijection() {
        let c = ctx(4, 8);
        for d in 0..=8u32 {
            let n = c.len(d);
            for idx in 0..n {
                let e = c.exps(d, idx).to_vec();
                assert_eq!(c.rank(&e), idx, "degree {d} index {idx}");
            }
        }
    }

    #[test]
    fn sparse_round_trip() {
        let c = ctx(4, 6);
        let r = ring(4);
        let mut rng = Rng::new(14);
        for d in [0u32, 1, 3, 6] {
            let f = random_form(&r, d, &mut rng);
            let dense = c.from_sparse(&r, &f).unwrap();
            assert_eq!(c.to_sparse(&r, &dense), f);
        }
    }

    #[test]
    fn dense_multiplication_matches_sparse() {
        let c = ctx(4, 9);
        let r = ring(4);
        let mut rng = Rng::new(15);
        for (da, db) in [(1u32, 1u32), (2, 3), (4, 5)] {
            let f = random_form(&r, da, &mut rng);
            let g = random_form(&r, db, &mut rng);
            let dense = c.mul(
                &c.from_sparse(&r, &f).unwrap(),
                &c.from_sparse(&r, &g).unwrap(),
            );
            assert_eq!(c.to_sparse(&r, &dense), r.mul(&f, &g));
        }
    }

    #[test]
    fn composition_matches_sparse_substitution() {
        let c = ctx(4, 12);
        let target = ring(4);
        let src = ring(3);
        let mut rng = Rng::new(16);
        let g = random_form(&src, 3, &mut rng);
        let images: Vec<Polynomial<PrimeField>> =
            (0..3).map(|_| random_form(&target, 2, &mut rng)).collect();
        let dense_images: Vec<DensePoly> = images
            .iter()
            .map(|f| c.from_sparse(&target, f).unwrap())
            .collect();
        let got = c.compose(&src, &g, &dense_images).unwrap();
        let want = src.substitute(&g, &target, &images);
        assert_eq!(c.to_sparse(&target, &got), want);
    }

    #[test]
    fn proportionality_detection() {
        let c = ctx(3, 4);
        let r = ring(3);
        let mut rng = Rng::new(17);
        let f = random_form(&r, 3, &mut rng);
        let df = c.from_sparse(&r, &f).unwrap();
        let scaled = c.scale(&df, 12345);
        assert!(c.proportional(&scaled, &df));
        assert!(c.proportional(&df, &scaled));
        let g = random_form(&r, 3, &mut rng);
        let dg = c.from_sparse(&r, &g).unwrap();
        assert!(!c.proportional(&df, &dg));
        let z = c.zero(3);
        assert!(c.proportional(&z, &z));
        assert!(!c.proportional(&df, &z));
    }
}
