//! Multivariate polynomials over a [`Field`] context.
//!
//! A [`Polynomial`] is a vector of `(monomial, coefficient)` terms kept
//! strictly descending in the ring's term order with no zero coefficients.
//! Polynomials do not carry their ring; every operation is a method on
//! [`PolyRing`], which supplies the field, the variable names and the order.
//! Keeping two rings' polynomials apart is the caller's responsibility (the
//! ideal layer checks it where it matters).

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rationals};
use crate::monomial::{Monomial, MonomialOrder, MAX_VARS};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use hashbrown::HashMap;
use num_traits::Signed;

#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial<F: Field> {
    terms: Vec<(Monomial, F::Elem)>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, F::Elem)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading term under the order the polynomial was built with.
    pub fn lt(&self) -> Option<(&Monomial, &F::Elem)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn lm(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn lc(&self) -> Option<&F::Elem> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Everything after the leading term.
    pub fn tail(&self) -> Polynomial<F> {
        Polynomial {
            terms: self.terms.get(1..).map(|t| t.to_vec()).unwrap_or_default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PolyRing<F: Field> {
    field: F,
    vars: Vec<String>,
    order: MonomialOrder,
}

impl<F: Field> PartialEq for PolyRing<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.vars == other.vars
    }
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F, vars: &[&str], order: MonomialOrder) -> Self {
        assert!(vars.len() <= MAX_VARS, "at most {MAX_VARS} variables");
        PolyRing {
            field,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            order,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    /// Same ring with a different term order. Polynomials must be re-sorted
    /// with [`PolyRing::reorder`] when they cross over.
    pub fn with_order(&self, order: MonomialOrder) -> Self {
        PolyRing {
            field: self.field.clone(),
            vars: self.vars.clone(),
            order,
        }
    }

    /// Same field and order with different variables.
    pub fn with_vars(&self, vars: &[&str]) -> Self {
        Self::new(self.field.clone(), vars, self.order)
    }

    pub fn cmp_mon(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.cmp(a, b, self.vars.len())
    }

    pub fn var(&self, i: usize) -> Polynomial<F> {
        assert!(i < self.vars.len());
        Polynomial {
            terms: vec![(Monomial::var(i), self.field.one())],
        }
    }

    pub fn constant(&self, c: F::Elem) -> Polynomial<F> {
        if self.field.is_zero(&c) {
            Polynomial::zero()
        } else {
            Polynomial {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    pub fn one(&self) -> Polynomial<F> {
        self.constant(self.field.one())
    }

    pub fn from_i64(&self, n: i64) -> Polynomial<F> {
        self.constant(self.field.from_i64(n))
    }

    pub fn monomial(&self, m: Monomial, c: F::Elem) -> Polynomial<F> {
        if self.field.is_zero(&c) {
            Polynomial::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    /// Build from terms already strictly descending in this ring's order
    /// with no zero coefficients.
    pub(crate) fn from_sorted_terms(&self, terms: Vec<(Monomial, F::Elem)>) -> Polynomial<F> {
        debug_assert!(terms
            .windows(2)
            .all(|w| self.cmp_mon(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|(_, c)| !self.field.is_zero(c)));
        Polynomial { terms }
    }

    /// Build from arbitrary terms: combines duplicates, drops zeros, sorts.
    pub fn from_terms(&self, terms: Vec<(Monomial, F::Elem)>) -> Polynomial<F> {
        let mut map: HashMap<Monomial, F::Elem> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            match map.get_mut(&m) {
                Some(acc) => *acc = self.field.add(acc, &c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        let mut out: Vec<(Monomial, F::Elem)> = map
            .into_iter()
            .filter(|(_, c)| !self.field.is_zero(c))
            .collect();
        out.sort_by(|a, b| self.cmp_mon(&b.0, &a.0));
        Polynomial { terms: out }
    }

    /// Re-sort a polynomial built under another order on the same variables.
    pub fn reorder(&self, f: &Polynomial<F>) -> Polynomial<F> {
        let mut terms = f.terms.clone();
        terms.sort_by(|a, b| self.cmp_mon(&b.0, &a.0));
        Polynomial { terms }
    }

    pub fn add(&self, f: &Polynomial<F>, g: &Polynomial<F>) -> Polynomial<F> {
        let mut out = Vec::with_capacity(f.terms.len() + g.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < f.terms.len() && j < g.terms.len() {
            match self.cmp_mon(&f.terms[i].0, &g.terms[j].0) {
                Ordering::Greater => {
                    out.push(f.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(g.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.field.add(&f.terms[i].1, &g.terms[j].1);
                    if !self.field.is_zero(&c) {
                        out.push((f.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&f.terms[i..]);
        out.extend_from_slice(&g.terms[j..]);
        Polynomial { terms: out }
    }

    pub fn neg(&self, f: &Polynomial<F>) -> Polynomial<F> {
        Polynomial {
            terms: f
                .terms
                .iter()
                .map(|(m, c)| (*m, self.field.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, f: &Polynomial<F>, g: &Polynomial<F>) -> Polynomial<F> {
        self.add(f, &self.neg(g))
    }

    pub fn scale(&self, f: &Polynomial<F>, c: &F::Elem) -> Polynomial<F> {
        if self.field.is_zero(c) {
            return Polynomial::zero();
        }
        Polynomial {
            terms: f
                .terms
                .iter()
                .map(|(m, a)| (*m, self.field.mul(a, c)))
                .collect(),
        }
    }

    /// Multiply by a single term. Order-preserving, so no re-sort.
    pub fn mul_term(&self, f: &Polynomial<F>, m: &Monomial, c: &F::Elem) -> Polynomial<F> {
        if self.field.is_zero(c) {
            return Polynomial::zero();
        }
        Polynomial {
            terms: f
                .terms
                .iter()
                .map(|(fm, fc)| (fm.mul(m), self.field.mul(fc, c)))
                .collect(),
        }
    }

    pub fn mul(&self, f: &Polynomial<F>, g: &Polynomial<F>) -> Polynomial<F> {
        if f.is_zero() || g.is_zero() {
            return Polynomial::zero();
        }
        let (small, large) = if f.terms.len() <= g.terms.len() {
            (f, g)
        } else {
            (g, f)
        };
        let mut map: HashMap<Monomial, F::Elem> =
            HashMap::with_capacity(small.terms.len() * large.terms.len() / 2 + 1);
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                let m = ma.mul(mb);
                let c = self.field.mul(ca, cb);
                match map.get_mut(&m) {
                    Some(acc) => *acc = self.field.add(acc, &c),
                    None => {
                        map.insert(m, c);
                    }
                }
            }
        }
        let mut out: Vec<(Monomial, F::Elem)> = map
            .into_iter()
            .filter(|(_, c)| !self.field.is_zero(c))
            .collect();
        out.sort_by(|a, b| self.cmp_mon(&b.0, &a.0));
        Polynomial { terms: out }
    }

    pub fn pow(&self, f: &Polynomial<F>, mut e: u32) -> Polynomial<F> {
        let mut acc = self.one();
        let mut base = f.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn monic(&self, f: &Polynomial<F>) -> Polynomial<F> {
        match f.lc() {
            None => Polynomial::zero(),
            Some(c) => {
                let inv = self.field.inv(c).expect("leading coefficient is nonzero");
                self.scale(f, &inv)
            }
        }
    }

    pub fn derivative(&self, f: &Polynomial<F>, var: usize) -> Polynomial<F> {
        let mut terms = Vec::new();
        for (m, c) in &f.terms {
            let e = m.exp(var);
            if e == 0 {
                continue;
            }
            let mut exps = *m.exps();
            exps[var] = e - 1;
            let factor = self.field.from_i64(e as i64);
            let c = self.field.mul(c, &factor);
            if !self.field.is_zero(&c) {
                terms.push((Monomial::from_exps(&exps).expect("within bounds"), c));
            }
        }
        self.from_terms(terms)
    }

    /// Degree witness for a homogeneous polynomial; zero passes with degree 0.
    pub fn homogeneous_degree(&self, f: &Polynomial<F>) -> Result<u32> {
        let mut it = f.terms.iter();
        let d = match it.next() {
            None => return Ok(0),
            Some((m, _)) => m.degree(),
        };
        if it.all(|(m, _)| m.degree() == d) {
            Ok(d)
        } else {
            Err(Error::NotHomogeneous)
        }
    }

    /// Multigraded homogeneity: every term must have the same degree on each
    /// listed block of variables.
    pub fn is_homogeneous_on(&self, f: &Polynomial<F>, blocks: &[&[usize]]) -> bool {
        for block in blocks {
            let mut degs = f.terms.iter().map(|(m, _)| m.degree_on(block));
            if let Some(d0) = degs.next() {
                if !degs.all(|d| d == d0) {
                    return false;
                }
            }
        }
        true
    }

    pub fn eval(&self, f: &Polynomial<F>, point: &[F::Elem]) -> F::Elem {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = self.field.zero();
        for (m, c) in &f.terms {
            let mut t = c.clone();
            for (i, p) in point.iter().enumerate() {
                for _ in 0..m.exp(i) {
                    t = self.field.mul(&t, p);
                }
            }
            acc = self.field.add(&acc, &t);
        }
        acc
    }

    /// Substitute `images[i]` (a polynomial of the target ring) for variable
    /// `i`. Ring homomorphism on the coefficients is the identity, so both
    /// rings must share the field.
    pub fn substitute(
        &self,
        f: &Polynomial<F>,
        target: &PolyRing<F>,
        images: &[Polynomial<F>],
    ) -> Polynomial<F> {
        assert_eq!(images.len(), self.vars.len());
        // Power tables per variable, built to the largest exponent needed.
        let mut max_exp = vec![0u16; self.vars.len()];
        for (m, _) in &f.terms {
            for (i, e) in max_exp.iter_mut().enumerate() {
                *e = (*e).max(m.exp(i));
            }
        }
        let mut powers: Vec<Vec<Polynomial<F>>> = Vec::with_capacity(self.vars.len());
        for (i, me) in max_exp.iter().enumerate() {
            let mut tab = Vec::with_capacity(*me as usize + 1);
            tab.push(target.one());
            for e in 1..=*me {
                let prev = tab[(e - 1) as usize].clone();
                tab.push(target.mul(&prev, &images[i]));
            }
            powers.push(tab);
        }
        let mut acc = Polynomial::zero();
        for (m, c) in &f.terms {
            let mut t = target.constant(c.clone());
            for (i, tab) in powers.iter().enumerate() {
                let e = m.exp(i);
                if e > 0 {
                    t = target.mul(&t, &tab[e as usize]);
                }
            }
            acc = target.add(&acc, &t);
        }
        acc
    }

    /// Multivariate division: `f = sum q_i g_i + r` with no term of `r`
    /// divisible by any leading monomial of the divisors. Returns
    /// `(quotients, remainder)`.
    pub fn divmod(
        &self,
        f: &Polynomial<F>,
        divisors: &[Polynomial<F>],
    ) -> (Vec<Polynomial<F>>, Polynomial<F>) {
        let mut quots = vec![Polynomial::zero(); divisors.len()];
        let mut rem: Vec<(Monomial, F::Elem)> = Vec::new();
        let mut work = Geobucket::from_poly(f.clone());
        'outer: while let Some((m, c)) = work.pop_lt(self) {
            for (gi, g) in divisors.iter().enumerate() {
                let (gm, gc) = match g.lt() {
                    Some(t) => t,
                    None => continue,
                };
                if let Some(q) = gm.div(&m) {
                    let qc = self
                        .field
                        .div(&c, gc)
                        .expect("leading coefficient is nonzero");
                    quots[gi] = self.add(&quots[gi], &self.monomial(q, qc.clone()));
                    // work -= (q, qc) * tail(g)
                    let tail = Polynomial {
                        terms: g.terms[1..].to_vec(),
                    };
                    work.add(self, self.mul_term(&tail, &q, &self.field.neg(&qc)));
                    continue 'outer;
                }
            }
            rem.push((m, c));
        }
        (quots, Polynomial { terms: rem })
    }

    /// Exact quotient `f / g`, or `None` if `g` does not divide `f`.
    pub fn exact_div(&self, f: &Polynomial<F>, g: &Polynomial<F>) -> Option<Polynomial<F>> {
        if g.is_zero() {
            return None;
        }
        let (mut quots, rem) = self.divmod(f, core::slice::from_ref(g));
        if rem.is_zero() {
            Some(quots.remove(0))
        } else {
            None
        }
    }

    /// Monic greatest common divisor via the primitive polynomial remainder
    /// sequence, recursing on the main variable's coefficients.
    pub fn gcd(&self, f: &Polynomial<F>, g: &Polynomial<F>) -> Polynomial<F> {
        if f.is_zero() {
            return self.monic(g);
        }
        if g.is_zero() {
            return self.monic(f);
        }
        let var = match self.main_var(f).into_iter().chain(self.main_var(g)).min() {
            Some(v) => v,
            None => return self.one(),
        };
        let (cf, mut a) = self.cont_pp(f, var);
        let (cg, mut b) = self.cont_pp(g, var);
        let d = self.gcd(&cf, &cg);
        if self.deg_in(&a, var) < self.deg_in(&b, var) {
            core::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = self.pseudo_rem(&a, &b, var);
            if r.is_zero() {
                break;
            }
            a = b;
            b = self.cont_pp(&r, var).1;
        }
        self.monic(&self.mul(&d, &b))
    }

    fn main_var(&self, f: &Polynomial<F>) -> Option<usize> {
        (0..self.vars.len()).find(|&i| f.terms.iter().any(|(m, _)| m.exp(i) > 0))
    }

    pub fn deg_in(&self, f: &Polynomial<F>, var: usize) -> u16 {
        f.terms.iter().map(|(m, _)| m.exp(var)).max().unwrap_or(0)
    }

    /// Coefficients of `f` as a univariate polynomial in `var`; index is the
    /// exponent, entries are free of `var`.
    fn to_recursive(&self, f: &Polynomial<F>, var: usize) -> Vec<Polynomial<F>> {
        let deg = self.deg_in(f, var) as usize;
        let mut out = vec![Polynomial::zero(); deg + 1];
        for (m, c) in &f.terms {
            let e = m.exp(var) as usize;
            let mut exps = *m.exps();
            exps[var] = 0;
            let stripped = Monomial::from_exps(&exps).expect("within bounds");
            out[e] = self.add(&out[e], &self.monomial(stripped, c.clone()));
        }
        out
    }

    /// Content and primitive part with respect to `var`: `f = cont * pp`
    /// where `cont` is the (monic-normalized) gcd of the recursive
    /// coefficients.
    fn cont_pp(&self, f: &Polynomial<F>, var: usize) -> (Polynomial<F>, Polynomial<F>) {
        let coeffs = self.to_recursive(f, var);
        let mut cont = Polynomial::zero();
        for c in coeffs.iter().filter(|c| !c.is_zero()) {
            cont = self.gcd(&cont, c);
            if cont.degree() == Some(0) {
                break;
            }
        }
        let pp = self.exact_div(f, &cont).expect("content divides");
        (cont, pp)
    }

    /// Pseudo-remainder of `f` by `g` in `var`: repeated elimination of the
    /// top term after scaling by the leading coefficient of `g`.
    fn pseudo_rem(&self, f: &Polynomial<F>, g: &Polynomial<F>, var: usize) -> Polynomial<F> {
        let dg = self.deg_in(g, var);
        debug_assert!(!g.is_zero());
        let gc = {
            let coeffs = self.to_recursive(g, var);
            coeffs[dg as usize].clone()
        };
        let mut r = f.clone();
        loop {
            let dr = self.deg_in(&r, var);
            if r.is_zero() || dr < dg {
                return r;
            }
            let rc = {
                let coeffs = self.to_recursive(&r, var);
                coeffs[dr as usize].clone()
            };
            let shift = Monomial::var(var).pow(dr - dg);
            // r := gc * r - rc * x^(dr-dg) * g
            let left = self.mul(&gc, &r);
            let right = self.mul(&self.mul_term(&rc, &shift, &self.field.one()), g);
            r = self.sub(&left, &right);
        }
    }

    /// All monomials of total degree `d`, descending in the ring order.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = [0u16; MAX_VARS];
        self.enumerate_degree(d, 0, &mut exps, &mut out);
        out.sort_by(|a, b| self.cmp_mon(b, a));
        out
    }

    fn enumerate_degree(&self, left: u32, var: usize, exps: &mut [u16; MAX_VARS], out: &mut Vec<Monomial>) {
        if var + 1 == self.vars.len() {
            exps[var] = left as u16;
            out.push(Monomial::from_exps(&exps[..self.vars.len()]).expect("within bounds"));
            exps[var] = 0;
            return;
        }
        for e in 0..=left {
            exps[var] = e as u16;
            self.enumerate_degree(left - e, var + 1, exps, out);
        }
        exps[var] = 0;
    }

    pub fn format(&self, f: &Polynomial<F>) -> String {
        if f.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in f.terms.iter().enumerate() {
            let cs = self.field.format(c);
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else if neg {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            let mon = self.format_monomial(m);
            if mon.is_empty() {
                s.push_str(&mag);
            } else if mag == "1" {
                s.push_str(&mon);
            } else {
                s.push_str(&mag);
                s.push('*');
                s.push_str(&mon);
            }
        }
        s
    }

    fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, name) in self.vars.iter().enumerate() {
            let e = m.exp(i);
            if e == 1 {
                parts.push(name.clone());
            } else if e > 1 {
                parts.push(format!("{name}^{e}"));
            }
        }
        parts.join("*")
    }

    /// Parse `+ - * ^ ( )` expressions over integers, rational constants
    /// written `a/b`, and this ring's variable names.
    pub fn parse(&self, input: &str) -> Result<Polynomial<F>> {
        let mut p = Parser {
            ring: self,
            tokens: tokenize(input)?,
            pos: 0,
        };
        let f = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!(
                "trailing input near `{:?}`",
                p.tokens[p.pos]
            )));
        }
        Ok(f)
    }
}

/// Reindex variables: `map[i] = Some(j)` sends source variable `i` to target
/// variable `j`; a variable mapped to `None` must not occur in the input.
pub fn rename_vars<F: Field>(
    src: &PolyRing<F>,
    f: &Polynomial<F>,
    dst: &PolyRing<F>,
    map: &[Option<usize>],
) -> Result<Polynomial<F>> {
    assert_eq!(map.len(), src.nvars());
    let mut terms = Vec::with_capacity(f.len());
    for (m, c) in f.terms() {
        let mut exps = [0u16; MAX_VARS];
        for i in 0..src.nvars() {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            match map[i] {
                Some(j) => {
                    assert!(j < dst.nvars());
                    exps[j] = e;
                }
                None => {
                    return Err(Error::Geometry(format!(
                        "variable `{}` occurs but has no image",
                        src.vars()[i]
                    )))
                }
            }
        }
        terms.push((Monomial::from_exps(&exps[..dst.nvars()])?, c.clone()));
    }
    Ok(dst.from_terms(terms))
}

/// Reduce rational coefficients modulo the target prime. Fails when a
/// denominator vanishes modulo p.
pub fn reduce_mod_p(
    src: &PolyRing<Rationals>,
    f: &Polynomial<Rationals>,
    dst: &PolyRing<PrimeField>,
) -> Result<Polynomial<PrimeField>> {
    assert_eq!(src.vars(), dst.vars());
    let p = dst.field().modulus();
    let big_p = num_bigint::BigInt::from(p);
    let to_fp = |n: &num_bigint::BigInt| -> u64 {
        let r = n % &big_p;
        let r = if r.is_negative() { r + &big_p } else { r };
        let (_, digits) = r.to_u64_digits();
        digits.first().copied().unwrap_or(0)
    };
    let mut terms = Vec::with_capacity(f.len());
    for (m, c) in f.terms() {
        let den = to_fp(c.denom());
        if den == 0 {
            return Err(Error::BadPrime(format!(
                "denominator of a coefficient vanishes modulo {p}"
            )));
        }
        let num = to_fp(c.numer());
        let val = dst.field().div(&num, &den)?;
        terms.push((*m, val));
    }
    Ok(dst.from_terms(terms))
}

/// Summand heap for long reductions: terms are spread over buckets of
/// geometrically growing capacity so that adding a short polynomial to a huge
/// accumulator does not touch the whole accumulator.
pub struct Geobucket<F: Field> {
    // Each bucket holds terms sorted ascending (leading term last), bucket i
    // at most 4^(i+1) of them.
    buckets: Vec<Vec<(Monomial, F::Elem)>>,
}

const GEO_RATIO: usize = 4;

impl<F: Field> Geobucket<F> {
    pub fn new() -> Self {
        Geobucket { buckets: Vec::new() }
    }

    pub fn from_poly(f: Polynomial<F>) -> Self {
        let mut b = Geobucket::new();
        b.buckets.push(f.terms.into_iter().rev().collect());
        b
    }

    fn capacity(i: usize) -> usize {
        GEO_RATIO.pow(i as u32 + 1)
    }

    pub fn add(&mut self, ring: &PolyRing<F>, f: Polynomial<F>) {
        if f.is_zero() {
            return;
        }
        let mut incoming: Vec<(Monomial, F::Elem)> = f.terms.into_iter().rev().collect();
        let mut i = 0;
        while Self::capacity(i) < incoming.len() {
            i += 1;
        }
        loop {
            if i >= self.buckets.len() {
                self.buckets.resize_with(i + 1, Vec::new);
            }
            if self.buckets[i].is_empty() {
                self.buckets[i] = incoming;
                return;
            }
            let old = core::mem::take(&mut self.buckets[i]);
            incoming = merge_ascending(ring, old, incoming);
            if incoming.len() <= Self::capacity(i) {
                self.buckets[i] = incoming;
                return;
            }
            i += 1;
        }
    }

    /// Remove and return the overall leading term, cancelling across buckets.
    pub fn pop_lt(&mut self, ring: &PolyRing<F>) -> Option<(Monomial, F::Elem)> {
        loop {
            let mut best: Option<Monomial> = None;
            for b in &self.buckets {
                if let Some((m, _)) = b.last() {
                    match &best {
                        None => best = Some(*m),
                        Some(bm) => {
                            if ring.cmp_mon(m, bm) == Ordering::Greater {
                                best = Some(*m);
                            }
                        }
                    }
                }
            }
            let m = best?;
            let mut coeff = ring.field().zero();
            for b in &mut self.buckets {
                while let Some((bm, _)) = b.last() {
                    if *bm == m {
                        let (_, c) = b.pop().expect("checked non-empty");
                        coeff = ring.field().add(&coeff, &c);
                    } else {
                        break;
                    }
                }
            }
            if !ring.field().is_zero(&coeff) {
                return Some((m, coeff));
            }
        }
    }

    pub fn into_poly(mut self, ring: &PolyRing<F>) -> Polynomial<F> {
        let mut acc: Vec<(Monomial, F::Elem)> = Vec::new();
        for b in self.buckets.drain(..) {
            acc = merge_ascending(ring, acc, b);
        }
        acc.reverse();
        Polynomial { terms: acc }
    }
}

impl<F: Field> Default for Geobucket<F> {
    fn default() -> Self {
        Self::new()
    }
}

fn merge_ascending<F: Field>(
    ring: &PolyRing<F>,
    a: Vec<(Monomial, F::Elem)>,
    b: Vec<(Monomial, F::Elem)>,
) -> Vec<(Monomial, F::Elem)> {
    if a.is_empty() {
        return b;
    }
    if b.is_empty() {
        return a;
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut ia = a.into_iter().peekable();
    let mut ib = b.into_iter().peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (Some((ma, _)), Some((mb, _))) => match ring.cmp_mon(ma, mb) {
                Ordering::Less => out.push(ia.next().expect("peeked")),
                Ordering::Greater => out.push(ib.next().expect("peeked")),
                Ordering::Equal => {
                    let (m, ca) = ia.next().expect("peeked");
                    let (_, cb) = ib.next().expect("peeked");
                    let c = ring.field().add(&ca, &cb);
                    if !ring.field().is_zero(&c) {
                        out.push((m, c));
                    }
                }
            },
            (Some(_), None) => {
                out.extend(ia);
                break;
            }
            (None, Some(_)) => {
                out.extend(ib);
                break;
            }
            (None, None) => break,
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Token::Num(input[start..i].to_string()));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push(Token::Ident(input[start..i].to_string()));
            }
            _ => return Err(Error::Parse(format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    ring: &'a PolyRing<F>,
    tokens: Vec<Token>,
    pos: usize,
}

impl<'a, F: Field> Parser<'a, F> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Polynomial<F>> {
        let mut acc = match self.peek() {
            Some(Token::Minus) => {
                self.bump();
                self.ring.neg(&self.term()?)
            }
            Some(Token::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.ring.add(&acc, &t);
                }
                Some(Token::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.ring.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial<F>> {
        let mut acc = self.factor()?;
        while let Some(Token::Star) = self.peek() {
            self.bump();
            let f = self.factor()?;
            acc = self.ring.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial<F>> {
        let base = self.base()?;
        if let Some(Token::Caret) = self.peek() {
            self.bump();
            match self.bump() {
                Some(Token::Num(n)) => {
                    let e: u32 = n
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent `{n}`")))?;
                    return Ok(self.ring.pow(&base, e));
                }
                t => return Err(Error::Parse(format!("expected exponent, got {t:?}"))),
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Polynomial<F>> {
        match self.bump() {
            Some(Token::Num(n)) => {
                // A slash directly after a number makes a rational constant.
                if let (Some(Token::Slash), Some(Token::Num(d))) =
                    (self.peek().cloned(), self.tokens.get(self.pos + 1).cloned())
                {
                    self.pos += 2;
                    let c = self.ring.field().parse(&format!("{n}/{d}"))?;
                    return Ok(self.ring.constant(c));
                }
                let c = self.ring.field().parse(&n)?;
                Ok(self.ring.constant(c))
            }
            Some(Token::Ident(name)) => {
                match self.ring.vars().iter().position(|v| *v == name) {
                    Some(i) => Ok(self.ring.var(i)),
                    None => Err(Error::Parse(format!("unknown variable `{name}`"))),
                }
            }
            Some(Token::Minus) => Ok(self.ring.neg(&self.factor()?)),
            Some(Token::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(e),
                    t => Err(Error::Parse(format!("expected `)`, got {t:?}"))),
                }
            }
            t => Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn qring() -> PolyRing<Rationals> {
        PolyRing::new(Rationals, &["x", "y", "z"], MonomialOrder::GrevLex)
    }

    #[test]
    fn cube_of_binomial_matches_coefficients() {
        let r = qring();
        let f = r.parse("x + 1").unwrap();
        let c = r.pow(&f, 3);
        assert_eq!(r.format(&c), "x^3 + 3*x^2 + 3*x + 1");
    }

    #[test]
    fn parse_format_round_trip() {
        let r = qring();
        for s in [
            "x^2*y - 1/2*z^3 + 7",
            "-x + y - z",
            "x*y*z",
            "0",
            "3",
            "-2/3*x^2 + z",
        ] {
            let f = r.parse(s).unwrap();
            assert_eq!(r.format(&f), *s);
            let g = r.parse(&r.format(&f)).unwrap();
            assert_eq!(f, g);
        }
    }

    #[test]
    fn parenthesized_parse() {
        let r = qring();
        let f = r.parse("(x + y)*(x - y)").unwrap();
        let g = r.parse("x^2 - y^2").unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn division_reassembles() {
        let r = qring();
        let f = r.parse("x^3*y + x*y^2 + y + 5").unwrap();
        let g1 = r.parse("x*y - 1").unwrap();
        let g2 = r.parse("y^2 - 1").unwrap();
        let (q, rem) = r.divmod(&f, &[g1.clone(), g2.clone()]);
        let mut back = rem.clone();
        back = r.add(&back, &r.mul(&q[0], &g1));
        back = r.add(&back, &r.mul(&q[1], &g2));
        assert_eq!(back, f);
        // No remainder term divisible by a leading monomial.
        for (m, _) in rem.terms() {
            assert!(!g1.lm().unwrap().divides(m));
            assert!(!g2.lm().unwrap().divides(m));
        }
    }

    #[test]
    fn derivative_product_rule_sample() {
        let r = qring();
        let f = r.parse("x^2*y + z").unwrap();
        let g = r.parse("x*z - y").unwrap();
        let lhs = r.derivative(&r.mul(&f, &g), 0);
        let rhs = r.add(
            &r.mul(&r.derivative(&f, 0), &g),
            &r.mul(&f, &r.derivative(&g, 0)),
        );
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitute_is_homomorphic_sample() {
        let r = qring();
        let target = PolyRing::new(Rationals, &["s", "t"], MonomialOrder::GrevLex);
        let images = [
            target.parse("s^2").unwrap(),
            target.parse("s*t").unwrap(),
            target.parse("t^2 + 1").unwrap(),
        ];
        let f = r.parse("x*z - y^2").unwrap();
        let g = r.parse("x + y + z").unwrap();
        let lhs = r.substitute(&r.mul(&f, &g), &target, &images);
        let rhs = target.mul(
            &r.substitute(&f, &target, &images),
            &r.substitute(&g, &target, &images),
        );
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn gcd_of_products_with_common_factor() {
        let r = qring();
        let a = r.parse("(x + y)^2*(x - y)").unwrap();
        let b = r.parse("(x + y)*(x - y)^2").unwrap();
        let g = r.gcd(&a, &b);
        let want = r.monic(&r.parse("(x + y)*(x - y)").unwrap());
        assert_eq!(g, want);
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let r = qring();
        let a = r.parse("x^2 + y").unwrap();
        let b = r.parse("z^3 - x").unwrap();
        assert_eq!(r.gcd(&a, &b), r.one());
    }

    #[test]
    fn gcd_univariate_matches_euclid() {
        // (x^2 - 1, x^2 - 2x + 1) have gcd x - 1.
        let r = PolyRing::new(Rationals, &["x"], MonomialOrder::Lex);
        let a = r.parse("x^2 - 1").unwrap();
        let b = r.parse("x^2 - 2*x + 1").unwrap();
        assert_eq!(r.format(&r.gcd(&a, &b)), "x - 1");
    }

    #[test]
    fn exact_division_recovers_factor() {
        let r = qring();
        let f = r.parse("x^2 - y^2").unwrap();
        let g = r.parse("x + y").unwrap();
        let q = r.exact_div(&f, &g).unwrap();
        assert_eq!(r.format(&q), "x - y");
        assert!(r.exact_div(&f, &r.parse("x + z").unwrap()).is_none());
    }

    #[test]
    fn geobucket_accumulates_like_plain_addition() {
        let r = qring();
        let mut rng = crate::rng::Rng::new(11);
        let mut bucket = Geobucket::new();
        let mut plain = Polynomial::zero();
        for _ in 0..200 {
            let mut terms = Vec::new();
            for _ in 0..(1 + rng.below(6)) {
                let e = [
                    rng.below(4) as u16,
                    rng.below(4) as u16,
                    rng.below(4) as u16,
                ];
                let c = r.field().from_i64(rng.below(19) as i64 - 9);
                terms.push((Monomial::from_exps(&e).unwrap(), c));
            }
            let f = r.from_terms(terms);
            plain = r.add(&plain, &f);
            bucket.add(&r, f);
        }
        assert_eq!(bucket.into_poly(&r), plain);
    }

    #[test]
    fn geobucket_pop_streams_terms_in_order() {
        let r = qring();
        let f = r.parse("x^3 + x^2*y - 4*z^3 + x - 2").unwrap();
        let mut b = Geobucket::from_poly(f.clone());
        b.add(&r, r.parse("-x^3 + x").unwrap());
        let want = r.add(&f, &r.parse("-x^3 + x").unwrap());
        let mut got = Vec::new();
        while let Some(t) = b.pop_lt(&r) {
            got.push(t);
        }
        assert_eq!(got, want.terms().to_vec());
    }

    #[test]
    fn homogeneity_witnesses() {
        let r = qring();
        let f = r.parse("x^2*y + z^3").unwrap();
        assert_eq!(r.homogeneous_degree(&f).unwrap(), 3);
        assert!(r.homogeneous_degree(&r.parse("x + 1").unwrap()).is_err());
        // Bihomogeneous on blocks {x}, {y, z}.
        let g = r.parse("x*y + x*z").unwrap();
        assert!(r.is_homogeneous_on(&g, &[&[0], &[1, 2]]));
        assert!(!r.is_homogeneous_on(&r.parse("x*y + y*z").unwrap(), &[&[0], &[1, 2]]));
    }

    #[test]
    fn monomial_enumeration_counts_and_order() {
        let r = qring();
        let ms = r.monomials_of_degree(3);
        assert_eq!(ms.len(), 10);
        for w in ms.windows(2) {
            assert_eq!(r.cmp_mon(&w[0], &w[1]), core::cmp::Ordering::Greater);
        }
    }

    #[test]
    fn rational_to_prime_field_reduction() {
        let rq = qring();
        let fp = PrimeField::new(7).unwrap();
        let rp = PolyRing::new(fp, &["x", "y", "z"], MonomialOrder::GrevLex);
        let f = rq.parse("1/2*x + 3*y - 10").unwrap();
        let g = reduce_mod_p(&rq, &f, &rp).unwrap();
        // 1/2 = 4 mod 7, -10 = 4 mod 7.
        assert_eq!(rp.format(&g), "-3*x + 3*y - 3");
        let bad = rq.parse("1/7*x").unwrap();
        assert!(reduce_mod_p(&rq, &bad, &rp).is_err());
    }

    #[test]
    fn prime_field_ring_arithmetic_sample() {
        let fp = PrimeField::new(32003).unwrap();
        let r = PolyRing::new(fp, &["a", "b"], MonomialOrder::GrevLex);
        let f = r.parse("a + b").unwrap();
        let p32003 = r.pow(&f, 2);
        assert_eq!(r.format(&p32003), "a^2 + 2*a*b + b^2");
    }
}
