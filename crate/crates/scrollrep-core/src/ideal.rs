//! Ideals and the Groebner machinery: Buchberger's algorithm with the
//! Gebauer-Moeller pair criteria and sugar selection, normal forms over a
//! geobucket, and the derived operations (elimination, intersection, ideal
//! quotients, saturation).
//!
//! An [`Ideal`] caches one reduced Groebner basis per term order, write-once
//! and shared across clones, so repeated queries against the same ideal pay
//! for a basis exactly once.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::monomial::{Monomial, MonomialOrder, MAX_VARS};
use crate::poly::{rename_vars, Geobucket, PolyRing, Polynomial};
use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use hashbrown::HashMap;
use once_cell::race::OnceBox;

struct BasisCache<F: Field> {
    grevlex: OnceBox<Vec<Polynomial<F>>>,
    lex: OnceBox<Vec<Polynomial<F>>>,
    block: [OnceBox<Vec<Polynomial<F>>>; MAX_VARS + 1],
}

impl<F: Field> BasisCache<F> {
    fn new() -> Self {
        BasisCache {
            grevlex: OnceBox::new(),
            lex: OnceBox::new(),
            block: core::array::from_fn(|_| OnceBox::new()),
        }
    }

    fn slot(&self, order: MonomialOrder) -> &OnceBox<Vec<Polynomial<F>>> {
        match order {
            MonomialOrder::GrevLex => &self.grevlex,
            MonomialOrder::Lex => &self.lex,
            MonomialOrder::Block(k) => &self.block[k.min(MAX_VARS)],
        }
    }
}

pub struct Ideal<F: Field> {
    ring: PolyRing<F>,
    gens: Vec<Polynomial<F>>,
    cache: Arc<BasisCache<F>>,
}

impl<F: Field> Clone for Ideal<F> {
    fn clone(&self) -> Self {
        Ideal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            cache: Arc::clone(&self.cache),
        }
    }
}

impl<F: Field> core::fmt::Debug for Ideal<F> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Ideal({} gens in {:?})", self.gens.len(), self.ring.vars())
    }
}

impl<F: Field> Ideal<F> {
    pub fn new(ring: PolyRing<F>, gens: Vec<Polynomial<F>>) -> Self {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal {
            ring,
            gens,
            cache: Arc::new(BasisCache::new()),
        }
    }

    pub fn zero(ring: PolyRing<F>) -> Self {
        Ideal::new(ring, Vec::new())
    }

    pub fn ring(&self) -> &PolyRing<F> {
        &self.ring
    }

    pub fn gens(&self) -> &[Polynomial<F>] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// The reduced Groebner basis under `order`, computed on first use and
    /// cached. Elements are monic, fully reduced, sorted descending by
    /// leading monomial.
    pub fn groebner_basis(&self, order: MonomialOrder) -> &[Polynomial<F>] {
        self.cache.slot(order).get_or_init(|| {
            let r = self.ring.with_order(order);
            let gens: Vec<Polynomial<F>> = self.gens.iter().map(|g| r.reorder(g)).collect();
            Box::new(buchberger(&r, gens))
        })
    }

    /// Full normal form against the cached basis for `order`. The result is
    /// sorted under `order`.
    pub fn normal_form(&self, f: &Polynomial<F>, order: MonomialOrder) -> Polynomial<F> {
        let r = self.ring.with_order(order);
        let gb = self.groebner_basis(order);
        normal_form(&r, r.reorder(f), gb, None)
    }

    pub fn contains(&self, f: &Polynomial<F>) -> bool {
        self.normal_form(f, MonomialOrder::GrevLex).is_zero()
    }

    pub fn contains_ideal(&self, other: &Ideal<F>) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn equals(&self, other: &Ideal<F>) -> bool {
        if self.ring != other.ring {
            return false;
        }
        self.groebner_basis(MonomialOrder::GrevLex)
            == other.groebner_basis(MonomialOrder::GrevLex)
    }

    pub fn is_one(&self) -> bool {
        let gb = self.groebner_basis(MonomialOrder::GrevLex);
        gb.len() == 1 && gb[0].degree() == Some(0)
    }

    /// Generators replaced by the reduced grevlex basis.
    pub fn reduced(&self) -> Ideal<F> {
        let gb = self.groebner_basis(MonomialOrder::GrevLex).to_vec();
        let out = Ideal::new(self.ring.clone(), gb);
        out.cache
            .slot(MonomialOrder::GrevLex)
            .get_or_init(|| Box::new(out.gens.clone()));
        out
    }

    pub fn sum(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ok(Ideal::new(self.ring.clone(), gens))
    }

    pub fn plus_gens(&self, extra: &[Polynomial<F>]) -> Ideal<F> {
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().cloned());
        Ideal::new(self.ring.clone(), gens)
    }

    pub fn product(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(self.ring.mul(a, b));
            }
        }
        Ok(Ideal::new(self.ring.clone(), gens))
    }

    pub fn power(&self, e: u32) -> Ideal<F> {
        if e == 0 {
            return Ideal::new(self.ring.clone(), vec![self.ring.one()]);
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.product(self).expect("same ring");
        }
        acc
    }

    /// Generators of the ideal's contraction to the subring without the
    /// first `k` variables, via a block elimination order.
    pub fn eliminate(&self, k: usize) -> Vec<Polynomial<F>> {
        let gb = self.groebner_basis(MonomialOrder::Block(k));
        gb.iter()
            .filter(|g| {
                g.terms()
                    .iter()
                    .all(|(m, _)| (0..k).all(|i| m.exp(i) == 0))
            })
            .map(|g| self.ring.reorder(g))
            .collect()
    }

    /// Intersection via an auxiliary variable: `I cap J` is the elimination
    /// of `t` from `t I + (1 - t) J`.
    pub fn intersect(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.is_zero_ideal() || other.is_zero_ideal() {
            return Ok(Ideal::zero(self.ring.clone()));
        }
        let n = self.ring.nvars();
        if n + 1 > MAX_VARS {
            return Err(Error::Pipeline(
                "no room for the auxiliary intersection variable".into(),
            ));
        }
        let mut ext_vars: Vec<&str> = vec!["t_aux"];
        let names: Vec<alloc::string::String> = self.ring.vars().to_vec();
        ext_vars.extend(names.iter().map(|s| s.as_str()));
        let ext = PolyRing::new(
            self.ring.field().clone(),
            &ext_vars,
            MonomialOrder::Block(1),
        );
        let up: Vec<Option<usize>> = (0..n).map(|i| Some(i + 1)).collect();
        let t = ext.var(0);
        let one_minus_t = ext.sub(&ext.one(), &t);
        let mut gens = Vec::new();
        for f in &self.gens {
            let lifted = rename_vars(&self.ring, f, &ext, &up)?;
            gens.push(ext.mul(&t, &lifted));
        }
        for g in &other.gens {
            let lifted = rename_vars(&self.ring, g, &ext, &up)?;
            gens.push(ext.mul(&one_minus_t, &lifted));
        }
        let ext_ideal = Ideal::new(ext.clone(), gens);
        let eliminated = ext_ideal.eliminate(1);
        let mut down: Vec<Option<usize>> = vec![None];
        down.extend((0..n).map(Some));
        let back: Result<Vec<Polynomial<F>>> = eliminated
            .iter()
            .map(|f| rename_vars(&ext, f, &self.ring, &down))
            .collect();
        Ok(Ideal::new(self.ring.clone(), back?))
    }

    /// Ideal quotient by one polynomial: `(I : g) = (I cap (g)) / g`.
    pub fn colon_poly(&self, g: &Polynomial<F>) -> Result<Ideal<F>> {
        if g.is_zero() {
            return Ok(Ideal::new(self.ring.clone(), vec![self.ring.one()]));
        }
        let principal = Ideal::new(self.ring.clone(), vec![g.clone()]);
        let inter = self.intersect(&principal)?;
        let gens: Vec<Polynomial<F>> = inter
            .gens
            .iter()
            .map(|f| {
                self.ring
                    .exact_div(f, g)
                    .ok_or(Error::InexactDivision)
            })
            .collect::<Result<_>>()?;
        Ok(Ideal::new(self.ring.clone(), gens))
    }

    /// Ideal quotient: `(I : J)` as the intersection of the quotients by the
    /// generators of `J`.
    pub fn colon_ideal(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        if other.is_zero_ideal() {
            return Ok(Ideal::new(self.ring.clone(), vec![self.ring.one()]));
        }
        let mut acc: Option<Ideal<F>> = None;
        for g in &other.gens {
            let q = self.colon_poly(g)?;
            acc = Some(match acc {
                None => q,
                Some(a) => a.intersect(&q)?,
            });
        }
        Ok(acc.expect("at least one generator"))
    }

    /// Saturation by one polynomial: iterate the quotient until it
    /// stabilizes.
    pub fn saturate_poly(&self, g: &Polynomial<F>) -> Result<Ideal<F>> {
        let mut cur = self.reduced();
        loop {
            let next = cur.colon_poly(g)?;
            if next.equals(&cur) {
                return Ok(cur);
            }
            cur = next.reduced();
        }
    }

    /// Saturation by an ideal, distributed over its generators:
    /// `sat(I, J) = cap_l sat(I, j_l)`.
    pub fn saturate_ideal(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        if other.is_zero_ideal() {
            return Ok(Ideal::new(self.ring.clone(), vec![self.ring.one()]));
        }
        let mut acc: Option<Ideal<F>> = None;
        for g in &other.gens {
            let s = self.saturate_poly(g)?;
            acc = Some(match acc {
                None => s,
                Some(a) => a.intersect(&s)?,
            });
        }
        Ok(acc.expect("at least one generator"))
    }

    /// Saturation by an ideal through iterated quotients; slower than
    /// [`Ideal::saturate_ideal`] but follows the definition directly.
    pub fn saturate_ideal_iterated(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        let mut cur = self.reduced();
        loop {
            let next = cur.colon_ideal(other)?;
            if next.equals(&cur) {
                return Ok(cur);
            }
            cur = next.reduced();
        }
    }

    /// Leading monomials of the cached basis for `order`.
    pub fn leading_monomials(&self, order: MonomialOrder) -> Vec<Monomial> {
        self.groebner_basis(order)
            .iter()
            .filter_map(|g| g.lm().copied())
            .collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens
            .iter()
            .all(|g| self.ring.homogeneous_degree(g).is_ok())
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

/// Reduced Groebner basis of the given generators in the ring's order.
pub fn buchberger<F: Field>(ring: &PolyRing<F>, gens: Vec<Polynomial<F>>) -> Vec<Polynomial<F>> {
    let mut input: Vec<Polynomial<F>> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    if input.is_empty() {
        return Vec::new();
    }
    if input.iter().any(|g| g.degree() == Some(0)) {
        return vec![ring.one()];
    }
    input.sort_by(|a, b| {
        ring.cmp_mon(a.lm().expect("nonzero"), b.lm().expect("nonzero"))
    });

    let mut basis: Vec<Polynomial<F>> = Vec::new();
    let mut sugars: Vec<u32> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    for g in input {
        let sugar = g.degree().expect("nonzero");
        let g = ring.monic(&g);
        push_element(ring, &mut basis, &mut sugars, &mut pairs, g, sugar);
    }

    while !pairs.is_empty() {
        let best = select_pair(ring, &pairs);
        let pair = pairs.swap_remove(best);
        let s = s_polynomial(ring, &basis[pair.i], &basis[pair.j], &pair.lcm);
        let nf = normal_form(ring, s, &basis, None);
        if nf.is_zero() {
            continue;
        }
        if nf.degree() == Some(0) {
            return vec![ring.one()];
        }
        let sugar = pair.sugar.max(nf.degree().expect("nonzero"));
        let nf = ring.monic(&nf);
        push_element(ring, &mut basis, &mut sugars, &mut pairs, nf, sugar);
    }

    interreduce(ring, basis)
}

fn select_pair<F: Field>(ring: &PolyRing<F>, pairs: &[Pair]) -> usize {
    let mut best = 0;
    for k in 1..pairs.len() {
        let a = &pairs[k];
        let b = &pairs[best];
        let ord = a
            .sugar
            .cmp(&b.sugar)
            .then_with(|| a.lcm.degree().cmp(&b.lcm.degree()))
            .then_with(|| ring.cmp_mon(&a.lcm, &b.lcm))
            .then_with(|| a.i.cmp(&b.i))
            .then_with(|| a.j.cmp(&b.j));
        if ord == Ordering::Less {
            best = k;
        }
    }
    best
}

fn s_polynomial<F: Field>(
    ring: &PolyRing<F>,
    f: &Polynomial<F>,
    g: &Polynomial<F>,
    lcm: &Monomial,
) -> Polynomial<F> {
    // Both inputs are monic.
    let qf = f.lm().expect("nonzero").div(lcm).expect("lcm is a multiple");
    let qg = g.lm().expect("nonzero").div(lcm).expect("lcm is a multiple");
    let one = ring.field().one();
    ring.sub(&ring.mul_term(f, &qf, &one), &ring.mul_term(g, &qg, &one))
}

/// Gebauer-Moeller update: add `g` to the basis, prune old pairs, build and
/// prune the new ones.
fn push_element<F: Field>(
    ring: &PolyRing<F>,
    basis: &mut Vec<Polynomial<F>>,
    sugars: &mut Vec<u32>,
    pairs: &mut Vec<Pair>,
    g: Polynomial<F>,
    sugar: u32,
) {
    let t = basis.len();
    let lt = *g.lm().expect("nonzero");

    // Drop old pairs whose lcm is a proper multiple covered through `t`.
    pairs.retain(|p| {
        if !lt.divides(&p.lcm) {
            return true;
        }
        let lit = basis[p.i].lm().expect("nonzero").lcm(&lt);
        let ljt = basis[p.j].lm().expect("nonzero").lcm(&lt);
        lit == p.lcm || ljt == p.lcm
    });

    // Candidate new pairs (i, t).
    let mut cand: Vec<Pair> = (0..t)
        .map(|i| {
            let li = basis[i].lm().expect("nonzero");
            let lcm = li.lcm(&lt);
            let s_i = sugars[i] + lcm.degree() - li.degree();
            let s_t = sugar + lcm.degree() - lt.degree();
            Pair {
                i,
                j: t,
                lcm,
                sugar: s_i.max(s_t),
            }
        })
        .collect();

    // Multiple criterion: keep only pairs whose lcm is minimal under proper
    // divisibility among the candidates.
    let keep: Vec<bool> = (0..cand.len())
        .map(|a| {
            !(0..cand.len()).any(|b| {
                b != a && cand[b].lcm != cand[a].lcm && cand[b].lcm.divides(&cand[a].lcm)
            })
        })
        .collect();
    let mut kept: Vec<Pair> = cand
        .drain(..)
        .zip(keep)
        .filter_map(|(p, k)| if k { Some(p) } else { None })
        .collect();

    // Equal-lcm classes: a class containing a coprime pair dies entirely;
    // otherwise its smallest representative survives.
    kept.sort_by(|a, b| {
        ring.cmp_mon(&a.lcm, &b.lcm)
            .then_with(|| a.i.cmp(&b.i))
    });
    let mut idx = 0;
    while idx < kept.len() {
        let mut end = idx + 1;
        while end < kept.len() && kept[end].lcm == kept[idx].lcm {
            end += 1;
        }
        let class_coprime = (idx..end).any(|k| {
            let p = &kept[k];
            basis[p.i].lm().expect("nonzero").coprime(&lt)
        });
        if class_coprime {
            kept.drain(idx..end);
        } else {
            kept.drain(idx + 1..end);
            idx += 1;
        }
    }

    pairs.extend(kept);
    basis.push(g);
    sugars.push(sugar);
}

/// Full normal form of `f` against `basis` (all monic, nonzero), optionally
/// skipping one index. Result terms all lie outside the leading-term ideal.
pub fn normal_form<F: Field>(
    ring: &PolyRing<F>,
    f: Polynomial<F>,
    basis: &[Polynomial<F>],
    skip: Option<usize>,
) -> Polynomial<F> {
    let mut out: Vec<(Monomial, F::Elem)> = Vec::new();
    let mut bucket = Geobucket::from_poly(f);
    'outer: while let Some((m, c)) = bucket.pop_lt(ring) {
        for (idx, g) in basis.iter().enumerate() {
            if Some(idx) == skip {
                continue;
            }
            let gm = g.lm().expect("basis elements are nonzero");
            if gm.divides(&m) {
                let q = gm.div(&m).expect("divides");
                bucket.add(ring, ring.mul_term(&g.tail(), &q, &ring.field().neg(&c)));
                continue 'outer;
            }
        }
        out.push((m, c));
    }
    ring.from_sorted_terms(out)
}

fn interreduce<F: Field>(ring: &PolyRing<F>, mut basis: Vec<Polynomial<F>>) -> Vec<Polynomial<F>> {
    basis.sort_by(|a, b| {
        ring.cmp_mon(a.lm().expect("nonzero"), b.lm().expect("nonzero"))
    });
    let mut minimal: Vec<Polynomial<F>> = Vec::new();
    for g in basis {
        let lm = g.lm().expect("nonzero");
        if !minimal
            .iter()
            .any(|h| h.lm().expect("nonzero").divides(lm))
        {
            minimal.push(g);
        }
    }
    let snapshot = minimal.clone();
    let mut reduced: Vec<Polynomial<F>> = Vec::with_capacity(minimal.len());
    for (i, g) in snapshot.iter().enumerate() {
        let r = normal_form(ring, g.clone(), &snapshot, Some(i));
        reduced.push(ring.monic(&r));
    }
    reduced.sort_by(|a, b| {
        ring.cmp_mon(b.lm().expect("nonzero"), a.lm().expect("nonzero"))
    });
    reduced
}

/// Homogeneous-membership oracle by straight linear algebra: the degree-d
/// piece of a homogeneous ideal is spanned by the monomial shifts of its
/// generators, so membership is a rank comparison on the Macaulay matrix.
pub fn macaulay_contains<F: Field>(
    ring: &PolyRing<F>,
    gens: &[Polynomial<F>],
    f: &Polynomial<F>,
) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    let d = ring.homogeneous_degree(f)?;
    let cols = ring.monomials_of_degree(d);
    let index: HashMap<Monomial, usize> = cols
        .iter()
        .enumerate()
        .map(|(i, m)| (*m, i))
        .collect();
    let to_row = |g: &Polynomial<F>| -> Vec<F::Elem> {
        let mut row = vec![ring.field().zero(); cols.len()];
        for (m, c) in g.terms() {
            row[index[m]] = c.clone();
        }
        row
    };
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let dg = ring.homogeneous_degree(g)?;
        if dg > d {
            continue;
        }
        for m in ring.monomials_of_degree(d - dg) {
            rows.push(to_row(&ring.mul_term(g, &m, &ring.field().one())));
        }
    }
    let base = Matrix::from_rows(ring.field().clone(), rows.clone()).rank();
    rows.push(to_row(f));
    let ext = Matrix::from_rows(ring.field().clone(), rows).rank();
    Ok(base == ext)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::rng::Rng;

    fn qring3() -> PolyRing<Rationals> {
        PolyRing::new(Rationals, &["x", "y", "z"], MonomialOrder::GrevLex)
    }

    #[test]
    fn twisted_cubic_elimination_matches_resultant() {
        // Eliminating x from (y - x^2, z - x^3) gives (y^3 - z^2), the
        // resultant of the two generators with respect to x.
        let r = qring3();
        let i = Ideal::new(
            r.clone(),
            vec![r.parse("y - x^2").unwrap(), r.parse("z - x^3").unwrap()],
        );
        let eliminated = i.eliminate(1);
        let got = Ideal::new(r.clone(), eliminated);
        let want = Ideal::new(r.clone(), vec![r.parse("y^3 - z^2").unwrap()]);
        assert!(got.equals(&want));
    }

    #[test]
    fn principal_intersection() {
        let r = qring3();
        let a = Ideal::new(r.clone(), vec![r.parse("x").unwrap()]);
        let b = Ideal::new(r.clone(), vec![r.parse("y").unwrap()]);
        let inter = a.intersect(&b).unwrap();
        let want = Ideal::new(r.clone(), vec![r.parse("x*y").unwrap()]);
        assert!(inter.equals(&want));
    }

    #[test]
    fn colon_strips_a_factor() {
        let r = qring3();
        let i = Ideal::new(r.clone(), vec![r.parse("x^2*y").unwrap()]);
        let q = i.colon_poly(&r.parse("x").unwrap()).unwrap();
        let want = Ideal::new(r.clone(), vec![r.parse("x*y").unwrap()]);
        assert!(q.equals(&want));
    }

    #[test]
    fn saturation_removes_all_powers() {
        // I = x * (x*y, z), so saturating by x must leave exactly (y, z):
        // two quotient steps are needed, one is not enough.
        let r = qring3();
        let i = Ideal::new(
            r.clone(),
            vec![r.parse("x^2*y").unwrap(), r.parse("x*z").unwrap()],
        );
        let once = i.colon_poly(&r.parse("x").unwrap()).unwrap();
        let s = i.saturate_poly(&r.parse("x").unwrap()).unwrap();
        let want = Ideal::new(
            r.clone(),
            vec![r.parse("y").unwrap(), r.parse("z").unwrap()],
        );
        assert!(!once.equals(&want));
        assert!(s.equals(&want));
    }

    #[test]
    fn saturation_reaching_unit_ideal() {
        let r = qring3();
        let i = Ideal::new(r.clone(), vec![r.parse("x^3").unwrap()]);
        let s = i.saturate_poly(&r.parse("x").unwrap()).unwrap();
        assert!(s.is_one());
    }

    #[test]
    fn ideal_saturation_strategies_agree() {
        let r = qring3();
        let i = Ideal::new(
            r.clone(),
            vec![r.parse("x^2*z").unwrap(), r.parse("x*y^2").unwrap()],
        );
        let m = Ideal::new(
            r.clone(),
            vec![r.parse("x").unwrap(), r.parse("y").unwrap()],
        );
        let a = i.saturate_ideal(&m).unwrap();
        let b = i.saturate_ideal_iterated(&m).unwrap();
        assert!(a.equals(&b));
    }

    #[test]
    fn buchberger_criterion_on_random_ideals() {
        // Every S-polynomial of a computed basis must reduce to zero, and
        // the original generators must be members.
        let fp = PrimeField::new(101).unwrap();
        let r = PolyRing::new(fp, &["x", "y", "z"], MonomialOrder::GrevLex);
        let mut rng = Rng::new(42);
        for _ in 0..25 {
            let mut gens = Vec::new();
            for _ in 0..2 + rng.below(2) {
                let mut terms = Vec::new();
                for _ in 0..1 + rng.below(4) {
                    let e = [
                        rng.below(3) as u16,
                        rng.below(3) as u16,
                        rng.below(3) as u16,
                    ];
                    terms.push((
                        Monomial::from_exps(&e).unwrap(),
                        rng.below(101),
                    ));
                }
                gens.push(r.from_terms(terms));
            }
            let ideal = Ideal::new(r.clone(), gens.clone());
            let gb = ideal.groebner_basis(MonomialOrder::GrevLex).to_vec();
            for g in &gens {
                assert!(ideal.contains(g));
            }
            for a in 0..gb.len() {
                for b in (a + 1)..gb.len() {
                    let lcm = gb[a].lm().unwrap().lcm(gb[b].lm().unwrap());
                    let s = s_polynomial(&r, &gb[a], &gb[b], &lcm);
                    assert!(normal_form(&r, s, &gb, None).is_zero());
                }
            }
        }
    }

    #[test]
    fn membership_agrees_with_macaulay_oracle() {
        let fp = PrimeField::new(32003).unwrap();
        let r = PolyRing::new(fp, &["x", "y", "z", "w"], MonomialOrder::GrevLex);
        let mut rng = Rng::new(97);
        let random_form = |rng: &mut Rng, d: u32, r: &PolyRing<PrimeField>| {
            let terms = r
                .monomials_of_degree(d)
                .into_iter()
                .map(|m| (m, rng.below(32003)))
                .collect();
            r.from_terms(terms)
        };
        for trial in 0..10 {
            let gens = vec![
                random_form(&mut rng, 2, &r),
                random_form(&mut rng, 2, &r),
                random_form(&mut rng, 3, &r),
            ];
            let ideal = Ideal::new(r.clone(), gens.clone());
            // A combination that is a member by construction.
            let inside = r.add(
                &r.mul(&random_form(&mut rng, 1, &r), &gens[0]),
                &r.mul(&random_form(&mut rng, 1, &r), &gens[1]),
            );
            assert!(macaulay_contains(&r, &gens, &inside).unwrap());
            assert!(ideal.contains(&inside));
            // A random cubic, judged identically by both routes.
            let probe = random_form(&mut rng, 3, &r);
            assert_eq!(
                macaulay_contains(&r, &gens, &probe).unwrap(),
                ideal.contains(&probe),
                "trial {trial}"
            );
        }
    }

    #[test]
    fn reduced_basis_is_canonical_and_cached() {
        let r = qring3();
        let i1 = Ideal::new(
            r.clone(),
            vec![r.parse("x^2 + y").unwrap(), r.parse("x*y - z").unwrap()],
        );
        let i2 = Ideal::new(
            r.clone(),
            vec![r.parse("x*y - z").unwrap(), r.parse("x^2 + y").unwrap()],
        );
        assert_eq!(
            i1.groebner_basis(MonomialOrder::GrevLex),
            i2.groebner_basis(MonomialOrder::GrevLex)
        );
        let c = i1.clone();
        let p1 = i1.groebner_basis(MonomialOrder::GrevLex).as_ptr();
        let p2 = c.groebner_basis(MonomialOrder::GrevLex).as_ptr();
        assert_eq!(p1, p2);
    }

    #[test]
    fn unit_ideal_detection() {
        let r = qring3();
        let i = Ideal::new(
            r.clone(),
            vec![r.parse("x + 1").unwrap(), r.parse("x").unwrap()],
        );
        assert!(i.is_one());
    }

    #[test]
    fn homogeneous_power_of_maximal_ideal() {
        let r = qring3();
        let m = Ideal::new(
            r.clone(),
            vec![
                r.parse("x").unwrap(),
                r.parse("y").unwrap(),
                r.parse("z").unwrap(),
            ],
        );
        let m2 = m.power(2);
        assert!(m2.contains(&r.parse("x*y").unwrap()));
        assert!(!m2.contains(&r.parse("x").unwrap()));
        assert!(m2.is_homogeneous());
    }
}
