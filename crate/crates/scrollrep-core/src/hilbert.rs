//! Hilbert series of homogeneous ideals, and the numeric invariants read off
//! from them: dimension, degree, Hilbert polynomial, arithmetic genus.
//!
//! The series of `R/I` equals the series of `R/lt(I)`, so everything reduces
//! to a monomial ideal taken from a cached Groebner basis. The numerator is
//! computed by pivot splitting: for a pure power `p`,
//! `HS(R/M) = HS(R/(M + p)) + t^deg(p) HS(R/(M : p))`, with memoization on
//! the minimized generator set.
//!
//! Since the series ignores saturation in high degrees, degree and Hilbert
//! polynomial of a subscheme may be read off an unsaturated ideal.

use crate::field::Field;
use crate::ideal::Ideal;
use crate::monomial::{Monomial, MonomialOrder, MAX_VARS};
use alloc::vec;
use alloc::vec::Vec;
use hashbrown::HashMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Numerator coefficients of a Hilbert series over `(1-t)^n`.
type Num = Vec<i128>;

fn num_trim(mut a: Num) -> Num {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn num_add_shifted(mut a: Num, b: &Num, shift: usize) -> Num {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (j, c) in b.iter().enumerate() {
        a[j + shift] += c;
    }
    num_trim(a)
}

/// Multiply by `1 - t^d`.
fn num_mul_one_minus(a: &Num, d: usize) -> Num {
    let mut out = vec![0i128; a.len() + d];
    for (j, c) in a.iter().enumerate() {
        out[j] += c;
        out[j + d] -= c;
    }
    num_trim(out)
}

fn canonical_sort(gens: &mut [Monomial]) {
    gens.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.exps().cmp(b.exps()))
    });
}

/// Remove duplicates and non-minimal elements.
fn minimize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    canonical_sort(&mut gens);
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

fn pairwise_coprime(gens: &[Monomial]) -> bool {
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            if !gens[i].coprime(&gens[j]) {
                return false;
            }
        }
    }
    true
}

/// Pivot for splitting: a power of the most shared variable, clamped so the
/// pivot itself stays outside the ideal.
fn choose_pivot(gens: &[Monomial]) -> Monomial {
    let mut counts = [0u32; MAX_VARS];
    for g in gens {
        for (v, c) in counts.iter_mut().enumerate() {
            if g.exp(v) > 0 {
                *c += 1;
            }
        }
    }
    let v = (0..MAX_VARS)
        .max_by_key(|&i| counts[i])
        .expect("nonempty range");
    debug_assert!(counts[v] >= 2, "coprime case is handled before splitting");
    let mut exps: Vec<u16> = gens.iter().map(|g| g.exp(v)).filter(|&e| e > 0).collect();
    exps.sort_unstable();
    let median = exps[exps.len() / 2];
    // A pure power of v among the generators caps the exponent from above.
    let cap = gens
        .iter()
        .filter(|g| g.exp(v) as u32 == g.degree())
        .map(|g| g.exp(v) - 1)
        .min()
        .unwrap_or(u16::MAX);
    let e = median.min(cap).max(1);
    Monomial::var(v).pow(e)
}

fn hn(gens: Vec<Monomial>, memo: &mut HashMap<Vec<Monomial>, Num>) -> Num {
    if gens.is_empty() {
        return vec![1];
    }
    if pairwise_coprime(&gens) {
        let mut acc = vec![1i128];
        for g in &gens {
            acc = num_mul_one_minus(&acc, g.degree() as usize);
        }
        return acc;
    }
    if let Some(v) = memo.get(&gens) {
        return v.clone();
    }
    let p = choose_pivot(&gens);
    let pv = (0..MAX_VARS).find(|&i| p.exp(i) > 0).expect("pivot nontrivial");
    let pe = p.exp(pv);
    let mut plus = gens.clone();
    plus.push(p);
    let plus = minimize(plus);
    debug_assert!(plus.len() <= gens.len(), "pivot absorbs at least itself");
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|g| {
            let mut exps = *g.exps();
            exps[pv] = exps[pv].saturating_sub(pe);
            Monomial::from_exps(&exps).expect("within bounds")
        })
        .collect();
    let colon = minimize(colon);
    let a = hn(plus, memo);
    let b = hn(colon, memo);
    let out = num_add_shifted(a, &b, pe as usize);
    memo.insert(gens, out.clone());
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct HilbertData {
    nvars: usize,
    numerator: Num,
    /// Numerator after cancelling all factors of `1 - t`.
    reduced: Num,
    /// Remaining pole order at t = 1: the Krull dimension of the graded
    /// quotient ring.
    pole: usize,
}

/// Series data for a set of monomial generators in an `nvars`-variable ring.
pub fn from_monomials(nvars: usize, gens: Vec<Monomial>) -> HilbertData {
    let gens = minimize(gens);
    let mut memo = HashMap::new();
    let numerator = hn(gens, &mut memo);
    let mut reduced = numerator.clone();
    let mut pole = nvars;
    loop {
        if reduced.is_empty() {
            break;
        }
        let total: i128 = reduced.iter().sum();
        if total != 0 || pole == 0 {
            break;
        }
        // Divide by 1 - t: prefix sums.
        let mut q = Vec::with_capacity(reduced.len().saturating_sub(1));
        let mut acc = 0i128;
        for c in &reduced[..reduced.len() - 1] {
            acc += c;
            q.push(acc);
        }
        reduced = num_trim(q);
        pole -= 1;
    }
    if reduced.is_empty() {
        // The series is identically zero: the quotient ring is zero.
        pole = 0;
    }
    HilbertData {
        nvars,
        numerator,
        reduced,
        pole,
    }
}

/// Series data of `R/I` for a homogeneous ideal, off its cached grevlex
/// leading terms.
pub fn hilbert_data<F: Field>(ideal: &Ideal<F>) -> HilbertData {
    debug_assert!(ideal.is_homogeneous());
    let lms = ideal.leading_monomials(MonomialOrder::GrevLex);
    from_monomials(ideal.ring().nvars(), lms)
}

fn binom_i128(n: i128, k: usize) -> i128 {
    if n < 0 {
        return 0;
    }
    if (n as usize) < k {
        return 0;
    }
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i as i128) / (i as i128 + 1);
    }
    acc
}

impl HilbertData {
    /// Dimension of the projective scheme: `-1` when empty.
    pub fn projective_dim(&self) -> i64 {
        self.pole as i64 - 1
    }

    pub fn is_empty_projective(&self) -> bool {
        self.pole == 0
    }

    /// Degree of the projective scheme (for dimension 0 this is the length).
    pub fn degree(&self) -> i128 {
        if self.pole == 0 {
            return 0;
        }
        self.reduced.iter().sum()
    }

    /// Exact value of the Hilbert function of the graded quotient at `d`.
    pub fn hilbert_function(&self, d: u32) -> i128 {
        let n = self.nvars;
        let mut acc = 0i128;
        for (j, c) in self.numerator.iter().enumerate() {
            if j as u32 > d {
                break;
            }
            acc += c * binom_i128((d - j as u32) as i128 + n as i128 - 1, n - 1);
        }
        acc
    }

    /// Coefficients of the Hilbert polynomial in the degree variable,
    /// constant term first. Empty for the empty scheme.
    pub fn hilbert_polynomial(&self) -> Vec<BigRational> {
        if self.pole == 0 {
            return Vec::new();
        }
        let d = self.pole;
        let fact: BigInt = (1..d as u64).map(BigInt::from).product();
        let mut total = vec![BigRational::zero(); d];
        for (j, q) in self.reduced.iter().enumerate() {
            if *q == 0 {
                continue;
            }
            // q * prod_{i=1}^{d-1} (m - j + i) / (d-1)!
            let mut poly = vec![BigRational::from_integer(BigInt::from(*q))];
            for i in 1..d {
                let shift = BigRational::from_integer(BigInt::from(i as i64 - j as i64));
                let mut next = vec![BigRational::zero(); poly.len() + 1];
                for (k, c) in poly.iter().enumerate() {
                    next[k] += c * &shift;
                    next[k + 1] += c;
                }
                poly = next;
            }
            for (k, c) in poly.into_iter().enumerate() {
                total[k] += c;
            }
        }
        let fq = BigRational::from_integer(fact);
        for c in &mut total {
            *c /= fq.clone();
        }
        while total.len() > 1 && total.last().map(|c| c.is_zero()) == Some(true) {
            total.pop();
        }
        total
    }

    pub fn hp_value(&self, m: i64) -> BigRational {
        let coeffs = self.hilbert_polynomial();
        let mb = BigRational::from_integer(BigInt::from(m));
        let mut acc = BigRational::zero();
        for c in coeffs.iter().rev() {
            acc = acc * &mb + c;
        }
        acc
    }

    /// Arithmetic genus `1 - HP(0)` of a one-dimensional scheme.
    pub fn arithmetic_genus(&self) -> Option<i128> {
        if self.projective_dim() != 1 {
            return None;
        }
        let one = BigRational::one();
        let p0 = self.hp_value(0);
        (one - p0).to_integer().to_i128()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::poly::PolyRing;
    use crate::rng::Rng;

    fn p2() -> PolyRing<Rationals> {
        PolyRing::new(Rationals, &["x", "y", "z"], MonomialOrder::GrevLex)
    }

    fn p3() -> PolyRing<Rationals> {
        PolyRing::new(Rationals, &["x", "y", "z", "w"], MonomialOrder::GrevLex)
    }

    #[test]
    fn whole_space_series() {
        let r = p3();
        let i = Ideal::zero(r);
        let h = hilbert_data(&i);
        assert_eq!(h.projective_dim(), 3);
        assert_eq!(h.degree(), 1);
        assert_eq!(h.hilbert_function(3), 20);
    }

    #[test]
    fn three_coordinate_points_in_the_plane() {
        let r = p2();
        let i = Ideal::new(
            r.clone(),
            vec![
                r.parse("x*y").unwrap(),
                r.parse("x*z").unwrap(),
                r.parse("y*z").unwrap(),
            ],
        );
        let h = hilbert_data(&i);
        assert_eq!(h.projective_dim(), 0);
        assert_eq!(h.degree(), 3);
        assert_eq!(h.hilbert_function(0), 1);
        assert_eq!(h.hilbert_function(1), 3);
        assert_eq!(h.hilbert_function(5), 3);
        // Quartics through the three points: 15 monomials minus the value 3.
        assert_eq!(h.hilbert_function(4), 3);
    }

    #[test]
    fn twisted_cubic_invariants() {
        let r = p3();
        let i = Ideal::new(
            r.clone(),
            vec![
                r.parse("x*z - y^2").unwrap(),
                r.parse("y*w - z^2").unwrap(),
                r.parse("x*w - y*z").unwrap(),
            ],
        );
        let h = hilbert_data(&i);
        assert_eq!(h.projective_dim(), 1);
        assert_eq!(h.degree(), 3);
        assert_eq!(h.arithmetic_genus(), Some(0));
        // HP(m) = 3m + 1.
        let hp = h.hilbert_polynomial();
        assert_eq!(hp.len(), 2);
        assert_eq!(hp[0], BigRational::from_integer(1.into()));
        assert_eq!(hp[1], BigRational::from_integer(3.into()));
    }

    #[test]
    fn plane_quartic_genus() {
        let r = p2();
        let i = Ideal::new(r.clone(), vec![r.parse("x^4 + y^4 + z^4").unwrap()]);
        let h = hilbert_data(&i);
        assert_eq!(h.projective_dim(), 1);
        assert_eq!(h.degree(), 4);
        assert_eq!(h.arithmetic_genus(), Some(3));
    }

    #[test]
    fn empty_scheme_detected() {
        let r = p2();
        let i = Ideal::new(
            r.clone(),
            vec![
                r.parse("x").unwrap(),
                r.parse("y").unwrap(),
                r.parse("z").unwrap(),
            ],
        );
        let h = hilbert_data(&i);
        assert!(h.is_empty_projective());
        assert_eq!(h.projective_dim(), -1);
    }

    #[test]
    fn hilbert_function_matches_standard_monomial_count() {
        // Oracle: count degree-d monomials outside the monomial ideal.
        let r = p2();
        let mut rng = Rng::new(13);
        for _ in 0..30 {
            let mut gens = Vec::new();
            for _ in 0..1 + rng.below(4) {
                let e = [
                    rng.below(4) as u16,
                    rng.below(4) as u16,
                    rng.below(4) as u16,
                ];
                let m = Monomial::from_exps(&e).unwrap();
                if !m.is_one() {
                    gens.push(m);
                }
            }
            let h = from_monomials(3, gens.clone());
            for d in 0..8u32 {
                let count = r
                    .monomials_of_degree(d)
                    .into_iter()
                    .filter(|m| !gens.iter().any(|g| g.divides(m)))
                    .count() as i128;
                assert_eq!(h.hilbert_function(d), count, "gens {gens:?} degree {d}");
            }
        }
    }

    #[test]
    fn degree_reads_through_lower_dimensional_junk() {
        // (xy, x^3) cuts out the line x = 0 together with an embedded point
        // at (1:0:0); dimension and degree see only the line.
        let r = p2();
        let line_with_junk = Ideal::new(
            r.clone(),
            vec![r.parse("x*y").unwrap(), r.parse("x^3").unwrap()],
        );
        let h = hilbert_data(&line_with_junk);
        assert_eq!(h.projective_dim(), 1);
        assert_eq!(h.degree(), 1);
    }

    #[test]
    fn unit_ideal_is_the_empty_scheme() {
        let r = p2();
        let i = Ideal::new(r.clone(), vec![r.parse("3").unwrap()]);
        let h = hilbert_data(&i);
        assert!(h.is_empty_projective());
        assert_eq!(h.degree(), 0);
        assert_eq!(h.hilbert_function(2), 0);
    }

    #[test]
    fn two_points_from_product_ideal() {
        // (x, y) cap (y, z) = (y, xz): two reduced points.
        let r = p2();
        let i = Ideal::new(
            r.clone(),
            vec![r.parse("y").unwrap(), r.parse("x*z").unwrap()],
        );
        let h = hilbert_data(&i);
        assert_eq!(h.projective_dim(), 0);
        assert_eq!(h.degree(), 2);
    }

    #[test]
    fn double_point_length() {
        // (x^2, y) in the plane: one point of length 2.
        let r = p2();
        let i = Ideal::new(
            r.clone(),
            vec![r.parse("x^2").unwrap(), r.parse("y").unwrap()],
        );
        let h = hilbert_data(&i);
        assert_eq!(h.projective_dim(), 0);
        assert_eq!(h.degree(), 2);
    }
}
