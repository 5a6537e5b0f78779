//! Rational maps between projective spaces: closures of images through
//! graph elimination, base ideals, fibres, saturation by the irrelevant
//! ideal, and certified inversion of birational maps over a prime field.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::dense::{DenseCtx, DensePoly, MAX_DENSE_VARS};
use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::ideal::Ideal;
use crate::linalg::{signed_kernel_minors, Matrix};
use crate::monomial::{Monomial, MonomialOrder, MAX_VARS};
use crate::poly::{rename_vars, PolyRing, Polynomial};
use crate::rng::Rng;

/// A rational map between projective spaces, given by one homogeneous form
/// per target coordinate. All nonzero components must share one degree; a
/// multigraded source (a product of projective spaces) is supported through
/// [`RationalMap::new_multigraded`].
#[derive(Clone, Debug)]
pub struct RationalMap<F: Field> {
    src: PolyRing<F>,
    dst: PolyRing<F>,
    comps: Vec<Polynomial<F>>,
    src_blocks: Option<Vec<Vec<usize>>>,
    degree: u32,
}

impl<F: Field> RationalMap<F> {
    pub fn new(src: PolyRing<F>, dst: PolyRing<F>, comps: Vec<Polynomial<F>>) -> Result<Self> {
        if comps.len() != dst.nvars() {
            return Err(Error::LengthMismatch {
                expected: dst.nvars(),
                got: comps.len(),
            });
        }
        let mut degree = None;
        for c in &comps {
            if c.is_zero() {
                continue;
            }
            let d = src.homogeneous_degree(c)?;
            match degree {
                None => degree = Some(d),
                Some(d0) if d0 != d => {
                    return Err(Error::Geometry(
                        "components of mixed degrees do not define a map".into(),
                    ))
                }
                _ => {}
            }
        }
        let degree = degree
            .ok_or_else(|| Error::Geometry("all components vanish identically".into()))?;
        Ok(RationalMap {
            src,
            dst,
            comps,
            src_blocks: None,
            degree,
        })
    }

    /// A map whose source is a product of projective spaces: the variable
    /// blocks partition the source variables, and every component must be
    /// homogeneous of one common multidegree.
    pub fn new_multigraded(
        src: PolyRing<F>,
        dst: PolyRing<F>,
        comps: Vec<Polynomial<F>>,
        blocks: &[Vec<usize>],
    ) -> Result<Self> {
        if comps.len() != dst.nvars() {
            return Err(Error::LengthMismatch {
                expected: dst.nvars(),
                got: comps.len(),
            });
        }
        let mut seen = vec![false; src.nvars()];
        for block in blocks {
            for &i in block {
                assert!(i < src.nvars() && !seen[i], "blocks must partition the variables");
                seen[i] = true;
            }
        }
        assert!(seen.iter().all(|&s| s), "blocks must cover every variable");
        let views: Vec<&[usize]> = blocks.iter().map(|b| b.as_slice()).collect();
        let mut multidegree: Option<Vec<u32>> = None;
        for c in &comps {
            if c.is_zero() {
                continue;
            }
            if !src.is_homogeneous_on(c, &views) {
                return Err(Error::NotHomogeneous);
            }
            let lead = c.lm().expect("nonzero");
            let md: Vec<u32> = blocks.iter().map(|b| lead.degree_on(b)).collect();
            match &multidegree {
                None => multidegree = Some(md),
                Some(md0) if *md0 != md => {
                    return Err(Error::Geometry(
                        "components of mixed multidegrees do not define a map".into(),
                    ))
                }
                _ => {}
            }
        }
        let multidegree = multidegree
            .ok_or_else(|| Error::Geometry("all components vanish identically".into()))?;
        Ok(RationalMap {
            src,
            dst,
            comps,
            src_blocks: Some(blocks.to_vec()),
            degree: multidegree.iter().sum(),
        })
    }

    pub fn src(&self) -> &PolyRing<F> {
        &self.src
    }

    pub fn dst(&self) -> &PolyRing<F> {
        &self.dst
    }

    pub fn comps(&self) -> &[Polynomial<F>] {
        &self.comps
    }

    /// Total degree of the defining forms.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn eval(&self, point: &[F::Elem]) -> Vec<F::Elem> {
        self.comps.iter().map(|c| self.src.eval(c, point)).collect()
    }

    pub fn is_defined_at(&self, point: &[F::Elem]) -> bool {
        let f = self.src.field();
        self.eval(point).iter().any(|v| !f.is_zero(v))
    }

    /// Substitute the defining forms into a polynomial of the target ring.
    pub fn pullback(&self, g: &Polynomial<F>) -> Polynomial<F> {
        self.dst.substitute(g, &self.src, &self.comps)
    }

    /// The composite `self . inner`, defined on the source of `inner`.
    /// Components are not reduced; see [`RationalMap::reduce_common_factor`].
    pub fn compose(&self, inner: &RationalMap<F>) -> Result<RationalMap<F>> {
        if inner.dst != self.src {
            return Err(Error::RingMismatch);
        }
        let comps: Vec<Polynomial<F>> = self
            .comps
            .iter()
            .map(|f| self.src.substitute(f, &inner.src, &inner.comps))
            .collect();
        match &inner.src_blocks {
            None => RationalMap::new(inner.src.clone(), self.dst.clone(), comps),
            Some(blocks) => {
                RationalMap::new_multigraded(inner.src.clone(), self.dst.clone(), comps, blocks)
            }
        }
    }

    /// Divide the components by their greatest common divisor. Returns the
    /// reduced map and the degree of the removed factor.
    pub fn reduce_common_factor(&self) -> (RationalMap<F>, u32) {
        let ring = &self.src;
        let mut g = Polynomial::zero();
        for c in &self.comps {
            g = ring.gcd(&g, c);
            if g.degree() == Some(0) {
                break;
            }
        }
        let removed = g.degree().unwrap_or(0);
        if removed == 0 {
            return (self.clone(), 0);
        }
        let comps: Vec<Polynomial<F>> = self
            .comps
            .iter()
            .map(|c| {
                if c.is_zero() {
                    Polynomial::zero()
                } else {
                    ring.exact_div(c, &g).expect("the common factor divides")
                }
            })
            .collect();
        let map = RationalMap {
            src: self.src.clone(),
            dst: self.dst.clone(),
            comps,
            src_blocks: self.src_blocks.clone(),
            degree: self.degree - removed,
        };
        (map, removed)
    }

    /// Rescale so the first nonzero component has leading coefficient one.
    pub fn normalized(&self) -> RationalMap<F> {
        let f = self.src.field();
        let lc = self
            .comps
            .iter()
            .find(|c| !c.is_zero())
            .and_then(|c| c.lc())
            .cloned()
            .expect("a map has a nonzero component");
        let inv = match f.inv(&lc) {
            Ok(v) => v,
            Err(_) => return self.clone(),
        };
        let comps = self.comps.iter().map(|c| self.src.scale(c, &inv)).collect();
        RationalMap {
            src: self.src.clone(),
            dst: self.dst.clone(),
            comps,
            src_blocks: self.src_blocks.clone(),
            degree: self.degree,
        }
    }

    /// True when the two maps have proportional component tuples, so they
    /// agree as rational maps.
    pub fn proportional_to(&self, other: &RationalMap<F>) -> bool {
        if self.src != other.src || self.comps.len() != other.comps.len() {
            return false;
        }
        let ring = &self.src;
        for i in 0..self.comps.len() {
            for j in (i + 1)..self.comps.len() {
                let left = ring.mul(&self.comps[i], &other.comps[j]);
                let right = ring.mul(&self.comps[j], &other.comps[i]);
                if !ring.sub(&left, &right).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// The polynomial ring of the graph, source variables first so that a
    /// block order eliminates them.
    fn product_ring(&self) -> Result<PolyRing<F>> {
        let nx = self.src.nvars();
        let ny = self.dst.nvars();
        if nx + ny > MAX_VARS {
            return Err(Error::Pipeline(
                "no room for the graph ring variables".into(),
            ));
        }
        let mut names: Vec<&str> = self.src.vars().iter().map(|s| s.as_str()).collect();
        for v in self.dst.vars() {
            if self.src.vars().iter().any(|u| u == v) {
                return Err(Error::Geometry(format!(
                    "variable `{v}` appears on both sides of the map"
                )));
            }
            names.push(v);
        }
        Ok(PolyRing::new(
            self.src.field().clone(),
            &names,
            MonomialOrder::Block(nx),
        ))
    }

    /// The ideal of the closure of the image of `V(src_ideal)`: the kernel
    /// of the coordinate ring map, computed by eliminating the source
    /// variables from the graph ideal. Pass the zero ideal for a map
    /// defined on all of the source space.
    pub fn image_closure(&self, src_ideal: &Ideal<F>) -> Result<Ideal<F>> {
        if src_ideal.ring() != &self.src {
            return Err(Error::RingMismatch);
        }
        let ext = self.product_ring()?;
        let nx = self.src.nvars();
        let ny = self.dst.nvars();
        let up: Vec<Option<usize>> = (0..nx).map(Some).collect();
        let mut gens = Vec::with_capacity(src_ideal.gens().len() + ny);
        for g in src_ideal.gens() {
            gens.push(rename_vars(&self.src, g, &ext, &up)?);
        }
        for (j, f) in self.comps.iter().enumerate() {
            let lifted = rename_vars(&self.src, f, &ext, &up)?;
            gens.push(ext.sub(&ext.var(nx + j), &lifted));
        }
        let eliminated = Ideal::new(ext.clone(), gens).eliminate(nx);
        let mut down: Vec<Option<usize>> = vec![None; nx];
        down.extend((0..ny).map(Some));
        let back: Result<Vec<Polynomial<F>>> = eliminated
            .iter()
            .map(|f| rename_vars(&ext, f, &self.dst, &down))
            .collect();
        Ok(Ideal::new(self.dst.clone(), back?))
    }

    /// Source ideal of the fibre over a target point: the source ideal plus
    /// the conditions that the component tuple is proportional to the
    /// point. Not saturated; the base locus still sits inside it.
    pub fn preimage_of_point(
        &self,
        src_ideal: &Ideal<F>,
        point: &[F::Elem],
    ) -> Result<Ideal<F>> {
        if src_ideal.ring() != &self.src {
            return Err(Error::RingMismatch);
        }
        if point.len() != self.comps.len() {
            return Err(Error::LengthMismatch {
                expected: self.comps.len(),
                got: point.len(),
            });
        }
        let mut gens: Vec<Polynomial<F>> = src_ideal.gens().to_vec();
        for i in 0..self.comps.len() {
            for j in (i + 1)..self.comps.len() {
                let left = self.src.scale(&self.comps[i], &point[j]);
                let right = self.src.scale(&self.comps[j], &point[i]);
                let m = self.src.sub(&left, &right);
                if !m.is_zero() {
                    gens.push(m);
                }
            }
        }
        Ok(Ideal::new(self.src.clone(), gens))
    }

    /// The source ideal together with the defining forms; its saturation is
    /// the base locus of the map on `V(src_ideal)`.
    pub fn base_ideal(&self, src_ideal: &Ideal<F>) -> Result<Ideal<F>> {
        if src_ideal.ring() != &self.src {
            return Err(Error::RingMismatch);
        }
        Ok(src_ideal.plus_gens(&self.comps))
    }
}

/// The map selecting the listed source coordinates, such as a linear
/// projection from the span of the omitted ones.
pub fn coordinate_projection<F: Field>(
    src: &PolyRing<F>,
    dst: &PolyRing<F>,
    coords: &[usize],
) -> Result<RationalMap<F>> {
    let comps: Vec<Polynomial<F>> = coords.iter().map(|&i| src.var(i)).collect();
    RationalMap::new(src.clone(), dst.clone(), comps)
}

/// A projective point with at least one nonzero coordinate.
pub fn random_point<F: Field>(field: &F, n: usize, rng: &mut Rng) -> Vec<F::Elem> {
    loop {
        let pt: Vec<F::Elem> = (0..n).map(|_| field.sample(rng)).collect();
        if pt.iter().any(|v| !field.is_zero(v)) {
            return pt;
        }
    }
}

/// A random invertible linear substitution and its inverse, each given as
/// variable images. Substituting one tuple and then the other restores the
/// input polynomial.
pub fn random_linear_change<F: Field>(
    ring: &PolyRing<F>,
    rng: &mut Rng,
) -> (Vec<Polynomial<F>>, Vec<Polynomial<F>>) {
    let f = ring.field().clone();
    let n = ring.nvars();
    loop {
        let rows: Vec<Vec<F::Elem>> = (0..n)
            .map(|_| (0..n).map(|_| f.sample(rng)).collect())
            .collect();
        let m = Matrix::from_rows(f.clone(), rows.clone());
        if f.is_zero(&m.det()) {
            continue;
        }
        let mut inv_cols: Vec<Vec<F::Elem>> = Vec::with_capacity(n);
        for i in 0..n {
            let e: Vec<F::Elem> = (0..n)
                .map(|j| if j == i { f.one() } else { f.zero() })
                .collect();
            inv_cols.push(m.solve(&e).expect("the matrix is invertible"));
        }
        let linear = |coeff: &dyn Fn(usize) -> F::Elem| -> Polynomial<F> {
            let terms: Vec<(Monomial, F::Elem)> =
                (0..n).map(|j| (Monomial::var(j), coeff(j))).collect();
            ring.from_terms(terms)
        };
        let fwd: Vec<Polynomial<F>> = (0..n).map(|i| linear(&|j| rows[i][j].clone())).collect();
        let bwd: Vec<Polynomial<F>> =
            (0..n).map(|i| linear(&|j| inv_cols[j][i].clone())).collect();
        return (fwd, bwd);
    }
}

/// Apply a substitution endomorphism to every generator.
pub fn substitute_ideal<F: Field>(ideal: &Ideal<F>, images: &[Polynomial<F>]) -> Ideal<F> {
    let ring = ideal.ring().clone();
    let gens: Vec<Polynomial<F>> = ideal
        .gens()
        .iter()
        .map(|g| ring.substitute(g, &ring, images))
        .collect();
    Ideal::new(ring, gens)
}

/// Ideal of the partial derivatives of one form.
pub fn jacobian_ideal<F: Field>(ring: &PolyRing<F>, f: &Polynomial<F>) -> Ideal<F> {
    let gens: Vec<Polynomial<F>> = (0..ring.nvars())
        .map(|i| ring.derivative(f, i))
        .filter(|g| !g.is_zero())
        .collect();
    Ideal::new(ring.clone(), gens)
}

/// Order of vanishing of a homogeneous form at the coordinate point of the
/// chart variable, with the initial form there: set that variable to one
/// and keep the terms of lowest degree in the rest. The initial form
/// generates the tangent cone of the hypersurface at the point.
pub fn chart_multiplicity<F: Field>(
    ring: &PolyRing<F>,
    f: &Polynomial<F>,
    chart: usize,
) -> Result<(u32, Polynomial<F>)> {
    if f.is_zero() {
        return Err(Error::Geometry("the zero form has no multiplicity".into()));
    }
    ring.homogeneous_degree(f)?;
    let residual = |m: &Monomial| m.degree() - u32::from(m.exp(chart));
    let mult = f
        .terms()
        .iter()
        .map(|(m, _)| residual(m))
        .min()
        .expect("nonzero");
    let mut terms = Vec::new();
    for (m, c) in f.terms() {
        if residual(m) == mult {
            let mut exps = *m.exps();
            exps[chart] = 0;
            terms.push((Monomial::from_exps(&exps[..ring.nvars()])?, c.clone()));
        }
    }
    Ok((mult, ring.from_terms(terms)))
}

/// Saturation of a homogeneous ideal by the irrelevant maximal ideal,
/// through a random linear change moving a generic hyperplane to the last
/// variable and one grevlex basis: in that order, dividing each basis
/// element by its power of the last variable saturates in a single pass.
/// Two independent draws must agree; a third breaks ties.
pub fn saturate_irrelevant<F: Field>(ideal: &Ideal<F>, rng: &mut Rng) -> Result<Ideal<F>> {
    let first = saturate_by_generic_hyperplane(ideal, rng)?;
    let second = saturate_by_generic_hyperplane(ideal, rng)?;
    if first.equals(&second) {
        return Ok(first);
    }
    let third = saturate_by_generic_hyperplane(ideal, rng)?;
    if third.equals(&first) {
        return Ok(first);
    }
    if third.equals(&second) {
        return Ok(second);
    }
    Err(Error::Geometry(
        "saturations along independent generic hyperplanes keep disagreeing".into(),
    ))
}

fn saturate_by_generic_hyperplane<F: Field>(ideal: &Ideal<F>, rng: &mut Rng) -> Result<Ideal<F>> {
    let ring = ideal.ring().clone();
    let n = ring.nvars();
    assert!(n >= 2, "needs a projective ambient space");
    for g in ideal.gens() {
        ring.homogeneous_degree(g)?;
    }
    if ideal.is_zero_ideal() {
        return Ok(ideal.clone());
    }
    let last = n - 1;
    let mut shift = Polynomial::zero();
    for i in 0..last {
        let c = ring.field().sample(rng);
        shift = ring.add(&shift, &ring.scale(&ring.var(i), &c));
    }
    let mut fwd: Vec<Polynomial<F>> = (0..n).map(|i| ring.var(i)).collect();
    let mut bwd = fwd.clone();
    fwd[last] = ring.sub(&ring.var(last), &shift);
    bwd[last] = ring.add(&ring.var(last), &shift);
    let moved: Vec<Polynomial<F>> = ideal
        .gens()
        .iter()
        .map(|g| ring.substitute(g, &ring, &fwd))
        .collect();
    let moved = Ideal::new(ring.clone(), moved);
    let gb = moved.groebner_basis(MonomialOrder::GrevLex);
    let mut sat_gens = Vec::with_capacity(gb.len());
    for g in gb {
        let k = g
            .terms()
            .iter()
            .map(|(m, _)| m.exp(last))
            .min()
            .unwrap_or(0);
        if k == 0 {
            sat_gens.push(g.clone());
        } else {
            let divisor = ring.monomial(Monomial::var(last).pow(k), ring.field().one());
            sat_gens.push(ring.exact_div(g, &divisor).expect("monomial factor"));
        }
    }
    let back: Vec<Polynomial<F>> = sat_gens
        .iter()
        .map(|g| ring.substitute(g, &ring, &bwd))
        .collect();
    Ok(Ideal::new(ring, back))
}

/// Search controls for [`invert_birational`].
pub struct InversionOptions {
    /// Largest degree tried for the linear relations on the graph.
    pub max_relation_degree: u32,
    /// Sample points beyond the unknown count, to starve spurious kernels.
    pub oversample: usize,
    /// Fresh attempts with new sample points before giving up.
    pub retries: u32,
}

impl Default for InversionOptions {
    fn default() -> Self {
        InversionOptions {
            max_relation_degree: 8,
            oversample: 48,
            retries: 3,
        }
    }
}

/// A computed inverse together with how it was assembled.
pub struct Inversion<F: Field> {
    pub inverse: RationalMap<F>,
    /// Degrees of the graph relations whose minors give the inverse.
    pub row_degrees: Vec<u32>,
    /// Degree of the common factor removed from the raw minors.
    pub removed_factor_degree: u32,
}

/// Invert a birational map from `V(src_ideal)` onto its target space.
///
/// Forms `a_0, ..., a_n` on the target give a relation when
/// `sum a_i(map(x)) x_i` lies in the source ideal; a point of the target
/// then determines its preimage as the kernel vector of the relation rows.
/// The search finds relation rows degree by degree from sampled graph
/// points, keeps rows that stay independent at random probes and that pass
/// an exact membership check, and takes signed maximal minors once the
/// rows reach the rank of the source dimension. The caller supplies a
/// sampler producing points of `V(src_ideal)` and should certify the
/// result with [`certify_inverse`].
pub fn invert_birational(
    map: &RationalMap<PrimeField>,
    src_ideal: &Ideal<PrimeField>,
    sample_source: &mut dyn FnMut(&mut Rng) -> Option<Vec<u64>>,
    rng: &mut Rng,
    opts: &InversionOptions,
) -> Result<Inversion<PrimeField>> {
    if src_ideal.ring() != map.src() {
        return Err(Error::RingMismatch);
    }
    let mut last = None;
    for _ in 0..=opts.retries {
        let mut attempt = rng.fork();
        match try_invert(map, src_ideal, sample_source, &mut attempt, opts) {
            Ok(done) => return Ok(done),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt ran"))
}

fn try_invert(
    map: &RationalMap<PrimeField>,
    src_ideal: &Ideal<PrimeField>,
    sample_source: &mut dyn FnMut(&mut Rng) -> Option<Vec<u64>>,
    rng: &mut Rng,
    opts: &InversionOptions,
) -> Result<Inversion<PrimeField>> {
    let field = map.src().field().clone();
    let dst = map.dst().clone();
    let need_rank = map.src().nvars() - 1;
    let probes: Vec<Vec<u64>> = (0..3)
        .map(|_| random_point(&field, dst.nvars(), rng))
        .collect();
    let mut selected: Vec<(u32, Vec<Polynomial<PrimeField>>)> = Vec::new();
    let mut rank = 0usize;
    'degrees: for d in 1..=opts.max_relation_degree {
        let space = relation_space(map, src_ideal, d, sample_source, rng, opts)?;
        for row in space {
            let mut tentative: Vec<&[Polynomial<PrimeField>]> =
                selected.iter().map(|(_, r)| r.as_slice()).collect();
            tentative.push(&row);
            if generic_rank(&field, &dst, &tentative, &probes) <= rank {
                continue;
            }
            if !relation_holds(map, src_ideal, &row)? {
                continue;
            }
            rank += 1;
            selected.push((d, row));
            if rank == need_rank {
                break 'degrees;
            }
        }
    }
    if rank < need_rank {
        return Err(Error::Geometry(format!(
            "graph relations reach rank {rank} of {need_rank} within degree {}",
            opts.max_relation_degree
        )));
    }
    let rows: Vec<Vec<Polynomial<PrimeField>>> =
        selected.iter().map(|(_, r)| r.clone()).collect();
    let minors = signed_kernel_minors(&dst, &rows);
    if minors.iter().all(|c| c.is_zero()) {
        return Err(Error::Geometry(
            "the selected relations have identically vanishing minors".into(),
        ));
    }
    let raw = RationalMap::new(dst, map.src().clone(), minors)?;
    let (reduced, removed) = raw.reduce_common_factor();
    Ok(Inversion {
        inverse: reduced.normalized(),
        row_degrees: selected.iter().map(|(d, _)| *d).collect(),
        removed_factor_degree: removed,
    })
}

/// Rows of target forms of degree `d` that vanish against the coordinate
/// tuple on the sampled graph. Sampling can only overestimate the true
/// relation space, so callers re-check rows exactly before using them.
fn relation_space(
    map: &RationalMap<PrimeField>,
    src_ideal: &Ideal<PrimeField>,
    d: u32,
    sample_source: &mut dyn FnMut(&mut Rng) -> Option<Vec<u64>>,
    rng: &mut Rng,
    opts: &InversionOptions,
) -> Result<Vec<Vec<Polynomial<PrimeField>>>> {
    let field = map.src().field().clone();
    let src = map.src();
    let dst = map.dst();
    let ncomp = src.nvars();
    let mons = dst.monomials_of_degree(d);
    let cols = ncomp * mons.len();
    let want = cols + opts.oversample;
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(want);
    let mut attempts = 0usize;
    while rows.len() < want {
        attempts += 1;
        if attempts > 40 * want {
            return Err(Error::Geometry(
                "the source point sampler keeps failing".into(),
            ));
        }
        let x = match sample_source(rng) {
            Some(x) => x,
            None => continue,
        };
        if x.len() != src.nvars() {
            return Err(Error::LengthMismatch {
                expected: src.nvars(),
                got: x.len(),
            });
        }
        debug_assert!(src_ideal
            .gens()
            .iter()
            .all(|g| field.is_zero(&src.eval(g, &x))));
        let y = map.eval(&x);
        if y.iter().all(|v| field.is_zero(v)) {
            continue;
        }
        let pows: Vec<Vec<u64>> = y
            .iter()
            .map(|v| {
                let mut tab = vec![1u64];
                for e in 1..=d as usize {
                    let next = field.mul(&tab[e - 1], v);
                    tab.push(next);
                }
                tab
            })
            .collect();
        let mut row = Vec::with_capacity(cols);
        for xi in &x {
            for m in &mons {
                let mut val = *xi;
                for (j, tab) in pows.iter().enumerate() {
                    val = field.mul(&val, &tab[m.exp(j) as usize]);
                }
                row.push(val);
            }
        }
        rows.push(row);
    }
    let kernel = Matrix::from_rows(field, rows).kernel_basis();
    let mut out = Vec::with_capacity(kernel.len());
    for v in kernel {
        let mut row = Vec::with_capacity(ncomp);
        for i in 0..ncomp {
            let terms: Vec<(Monomial, u64)> = mons
                .iter()
                .enumerate()
                .filter(|(k, _)| v[i * mons.len() + k] != 0)
                .map(|(k, m)| (*m, v[i * mons.len() + k]))
                .collect();
            row.push(dst.from_terms(terms));
        }
        out.push(row);
    }
    Ok(out)
}

/// Largest numeric rank of the rows over a few fixed probe points; equals
/// the generic rank of the polynomial matrix away from bad probes.
fn generic_rank<F: Field>(
    field: &F,
    dst: &PolyRing<F>,
    rows: &[&[Polynomial<F>]],
    probes: &[Vec<F::Elem>],
) -> usize {
    let mut best = 0;
    for p in probes {
        let numeric: Vec<Vec<F::Elem>> = rows
            .iter()
            .map(|row| row.iter().map(|f| dst.eval(f, p)).collect())
            .collect();
        best = best.max(Matrix::from_rows(field.clone(), numeric).rank());
    }
    best
}

/// Exact membership check for one candidate relation row.
fn relation_holds(
    map: &RationalMap<PrimeField>,
    src_ideal: &Ideal<PrimeField>,
    row: &[Polynomial<PrimeField>],
) -> Result<bool> {
    let src = map.src();
    let dst = map.dst();
    if src_ideal.is_zero_ideal() && src.nvars() <= MAX_DENSE_VARS {
        let d = row.iter().filter_map(|f| f.degree()).max().unwrap_or(0);
        let out_deg = d * map.degree() + 1;
        let ctx = DenseCtx::new(src.field().clone(), src.nvars(), out_deg);
        let images = dense_images(&ctx, src, map.comps(), map.degree())?;
        let mut acc = ctx.zero(out_deg);
        for (i, a) in row.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let pulled = ctx.compose(dst, a, &images)?;
            let xi = ctx.from_sparse(src, &src.var(i))?;
            let term = ctx.mul(&pulled, &xi);
            ctx.add_assign(&mut acc, &term);
        }
        Ok(ctx.is_zero(&acc))
    } else {
        let mut acc = Polynomial::zero();
        for (i, a) in row.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let pulled = dst.substitute(a, src, map.comps());
            acc = src.add(&acc, &src.mul(&pulled, &src.var(i)));
        }
        Ok(src_ideal.normal_form(&acc, MonomialOrder::GrevLex).is_zero())
    }
}

fn dense_images(
    ctx: &DenseCtx,
    ring: &PolyRing<PrimeField>,
    comps: &[Polynomial<PrimeField>],
    degree: u32,
) -> Result<Vec<DensePoly>> {
    comps
        .iter()
        .map(|c| {
            if c.is_zero() {
                Ok(ctx.zero(degree))
            } else {
                ctx.from_sparse(ring, c)
            }
        })
        .collect()
}

/// Outcome of the exact inverse certification.
pub struct InverseCertificate {
    /// The source equations vanish after substituting the inverse, so the
    /// inverse lands inside the source variety.
    pub lands_on_source: bool,
    /// The composite of map and inverse is a scalar multiple of the
    /// identity tuple, so the two maps compose to the identity wherever
    /// defined.
    pub identity_composite: bool,
}

impl InverseCertificate {
    pub fn holds(&self) -> bool {
        self.lands_on_source && self.identity_composite
    }
}

/// Certify an inverse by exact dense arithmetic over the target ring: the
/// source equations pull back to zero through it, and `map . inverse` is
/// proportional to the identity. Both checks are identities of
/// polynomials, not spot tests.
pub fn certify_inverse(
    map: &RationalMap<PrimeField>,
    src_ideal: &Ideal<PrimeField>,
    inverse: &RationalMap<PrimeField>,
) -> Result<InverseCertificate> {
    if inverse.src() != map.dst() || inverse.dst() != map.src() {
        return Err(Error::RingMismatch);
    }
    if src_ideal.ring() != map.src() {
        return Err(Error::RingMismatch);
    }
    let yring = map.dst();
    let xring = map.src();
    if yring.nvars() > MAX_DENSE_VARS {
        return Err(Error::Pipeline(
            "too many target variables for dense certification".into(),
        ));
    }
    let gen_deg = src_ideal
        .gens()
        .iter()
        .filter_map(|g| g.degree())
        .max()
        .unwrap_or(0);
    let need = (map.degree() * inverse.degree() + 1).max(gen_deg * inverse.degree());
    let ctx = DenseCtx::new(yring.field().clone(), yring.nvars(), need);
    let images = dense_images(&ctx, yring, inverse.comps(), inverse.degree())?;
    let mut lands = true;
    for q in src_ideal.gens() {
        if !ctx.is_zero(&ctx.compose(xring, q, &images)?) {
            lands = false;
            break;
        }
    }
    let composite: Result<Vec<DensePoly>> = map
        .comps()
        .iter()
        .map(|c| {
            if c.is_zero() {
                Ok(ctx.zero(map.degree() * inverse.degree()))
            } else {
                ctx.compose(xring, c, &images)
            }
        })
        .collect();
    let composite = composite?;
    let mut identity = composite.iter().any(|g| !ctx.is_zero(g));
    let vars: Result<Vec<DensePoly>> = (0..yring.nvars())
        .map(|i| ctx.from_sparse(yring, &yring.var(i)))
        .collect();
    let vars = vars?;
    'pairs: for i in 0..composite.len() {
        for j in (i + 1)..composite.len() {
            let left = ctx.mul(&composite[i], &vars[j]);
            let right = ctx.mul(&composite[j], &vars[i]);
            if !ctx.is_zero(&ctx.sub(&left, &right)) {
                identity = false;
                break 'pairs;
            }
        }
    }
    Ok(InverseCertificate {
        lands_on_source: lands,
        identity_composite: identity,
    })
}

/// Certify an inverse by sparse exact composition. Works over any field and
/// needs no dense tables; meant for the small maps where the composites stay
/// modest. The checks are the same polynomial identities as in
/// [`certify_inverse`].
pub fn certify_inverse_sparse<F: Field>(
    map: &RationalMap<F>,
    src_ideal: &Ideal<F>,
    inverse: &RationalMap<F>,
) -> Result<InverseCertificate> {
    if inverse.src() != map.dst() || inverse.dst() != map.src() {
        return Err(Error::RingMismatch);
    }
    if src_ideal.ring() != map.src() {
        return Err(Error::RingMismatch);
    }
    let yring = map.dst();
    let xring = map.src();
    let lands = src_ideal
        .gens()
        .iter()
        .all(|q| xring.substitute(q, yring, inverse.comps()).is_zero());
    let composite: Vec<Polynomial<F>> = map
        .comps()
        .iter()
        .map(|c| xring.substitute(c, yring, inverse.comps()))
        .collect();
    let mut identity = composite.iter().any(|g| !g.is_zero());
    'pairs: for i in 0..composite.len() {
        for j in (i + 1)..composite.len() {
            let left = yring.mul(&composite[i], &yring.var(j));
            let right = yring.mul(&composite[j], &yring.var(i));
            if !yring.sub(&left, &right).is_zero() {
                identity = false;
                break 'pairs;
            }
        }
    }
    Ok(InverseCertificate {
        lands_on_source: lands,
        identity_composite: identity,
    })
}

/// True when the two tuples agree projectively modulo an ideal: every cross
/// product `a_i b_j - a_j b_i` reduces to zero.
pub fn tuples_proportional_mod<F: Field>(
    ring: &PolyRing<F>,
    a: &[Polynomial<F>],
    b: &[Polynomial<F>],
    ideal: &Ideal<F>,
) -> bool {
    if a.len() != b.len() {
        return false;
    }
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            let cross = ring.sub(&ring.mul(&a[i], &b[j]), &ring.mul(&a[j], &b[i]));
            if !ideal.normal_form(&cross, MonomialOrder::GrevLex).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Invert a birational map by exact linear algebra, over any field.
///
/// The relation rows of each degree are the exact kernel of the normal-form
/// coefficient matrix of the products `x_i mu(map(x))` modulo the source
/// ideal, so every kernel row is a true relation and only the rank-growth
/// screening uses random probe points. Exhaustive and exact, but the
/// coefficient matrices grow quickly; the sampled [`invert_birational`]
/// scales much further over prime fields.
pub fn invert_birational_exact<F: Field>(
    map: &RationalMap<F>,
    src_ideal: &Ideal<F>,
    rng: &mut Rng,
    opts: &InversionOptions,
) -> Result<Inversion<F>> {
    if src_ideal.ring() != map.src() {
        return Err(Error::RingMismatch);
    }
    let field = map.src().field().clone();
    let dst = map.dst().clone();
    let need_rank = map.src().nvars() - 1;
    let probes: Vec<Vec<F::Elem>> = (0..4)
        .map(|_| random_point(&field, dst.nvars(), rng))
        .collect();
    let mut selected: Vec<(u32, Vec<Polynomial<F>>)> = Vec::new();
    let mut rank = 0usize;
    'degrees: for d in 1..=opts.max_relation_degree {
        let space = relation_space_exact(map, src_ideal, d);
        for row in space {
            let mut tentative: Vec<&[Polynomial<F>]> =
                selected.iter().map(|(_, r)| r.as_slice()).collect();
            tentative.push(&row);
            if generic_rank(&field, &dst, &tentative, &probes) <= rank {
                continue;
            }
            rank += 1;
            selected.push((d, row));
            if rank == need_rank {
                break 'degrees;
            }
        }
    }
    if rank < need_rank {
        return Err(Error::Geometry(format!(
            "graph relations reach rank {rank} of {need_rank} within degree {}",
            opts.max_relation_degree
        )));
    }
    let rows: Vec<Vec<Polynomial<F>>> = selected.iter().map(|(_, r)| r.clone()).collect();
    let minors = signed_kernel_minors(&dst, &rows);
    if minors.iter().all(|c| c.is_zero()) {
        return Err(Error::Geometry(
            "the selected relations have identically vanishing minors".into(),
        ));
    }
    let raw = RationalMap::new(dst, map.src().clone(), minors)?;
    let (reduced, removed) = raw.reduce_common_factor();
    Ok(Inversion {
        inverse: reduced.normalized(),
        row_degrees: selected.iter().map(|(d, _)| *d).collect(),
        removed_factor_degree: removed,
    })
}

/// Exact basis of the degree-`d` relation rows: kernel of the coefficient
/// matrix of `NF(x_i mu(map(x)))` over all target monomials `mu` of degree
/// `d`, with columns laid out as in the sampled search.
fn relation_space_exact<F: Field>(
    map: &RationalMap<F>,
    src_ideal: &Ideal<F>,
    d: u32,
) -> Vec<Vec<Polynomial<F>>> {
    let field = map.src().field().clone();
    let src = map.src();
    let dst = map.dst();
    let ncomp = src.nvars();
    let mons = dst.monomials_of_degree(d);
    let reduce = !src_ideal.is_zero_ideal();
    let mut powers: Vec<Vec<Polynomial<F>>> = Vec::with_capacity(map.comps().len());
    for c in map.comps() {
        let mut tab = vec![src.one()];
        for e in 1..=d as usize {
            let next = src.mul(&tab[e - 1], c);
            let next = if reduce {
                src_ideal.normal_form(&next, MonomialOrder::GrevLex)
            } else {
                next
            };
            tab.push(next);
        }
        powers.push(tab);
    }
    let mut entries: Vec<Polynomial<F>> = Vec::with_capacity(ncomp * mons.len());
    for i in 0..ncomp {
        for m in &mons {
            let mut f = src.var(i);
            for (j, tab) in powers.iter().enumerate() {
                let e = m.exp(j) as usize;
                if e > 0 {
                    f = src.mul(&f, &tab[e]);
                }
            }
            let nf = if reduce {
                src_ideal.normal_form(&f, MonomialOrder::GrevLex)
            } else {
                f
            };
            entries.push(nf);
        }
    }
    let mut support: Vec<Monomial> = Vec::new();
    {
        let mut seen: hashbrown::HashSet<Monomial> = hashbrown::HashSet::new();
        for f in &entries {
            for (m, _) in f.terms() {
                if seen.insert(*m) {
                    support.push(*m);
                }
            }
        }
    }
    support.sort_unstable_by(|a, b| src.cmp_mon(a, b));
    let index: hashbrown::HashMap<Monomial, usize> = support
        .iter()
        .enumerate()
        .map(|(k, m)| (*m, k))
        .collect();
    let mut matrix_rows: Vec<Vec<F::Elem>> = vec![vec![field.zero(); entries.len()]; support.len()];
    for (col, f) in entries.iter().enumerate() {
        for (m, c) in f.terms() {
            matrix_rows[index[m]][col] = c.clone();
        }
    }
    let kernel = Matrix::from_rows(field, matrix_rows).kernel_basis();
    let mut out = Vec::with_capacity(kernel.len());
    for v in kernel {
        let mut row = Vec::with_capacity(ncomp);
        for i in 0..ncomp {
            let terms: Vec<(Monomial, F::Elem)> = mons
                .iter()
                .enumerate()
                .filter(|(k, _)| !map.src().field().is_zero(&v[i * mons.len() + k]))
                .map(|(k, m)| (*m, v[i * mons.len() + k].clone()))
                .collect();
            row.push(dst.from_terms(terms));
        }
        out.push(row);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use alloc::string::ToString;

    fn qring(vars: &[&str]) -> PolyRing<Rationals> {
        PolyRing::new(Rationals, vars, MonomialOrder::GrevLex)
    }

    fn fpring(p: u64, vars: &[&str]) -> PolyRing<PrimeField> {
        PolyRing::new(PrimeField::new(p).unwrap(), vars, MonomialOrder::GrevLex)
    }

    #[test]
    fn image_of_the_rational_normal_cubic() {
        let src = qring(&["s", "t"]);
        let dst = qring(&["x", "y", "z", "w"]);
        let comps = ["s^3", "s^2*t", "s*t^2", "t^3"]
            .iter()
            .map(|s| src.parse(s).unwrap())
            .collect();
        let map = RationalMap::new(src.clone(), dst.clone(), comps).unwrap();
        let image = map.image_closure(&Ideal::zero(src)).unwrap();
        let expected = Ideal::new(
            dst.clone(),
            ["x*z - y^2", "x*w - y*z", "y*w - z^2"]
                .iter()
                .map(|s| dst.parse(s).unwrap())
                .collect(),
        );
        assert!(image.equals(&expected));
    }

    #[test]
    fn projections_of_the_twisted_cubic() {
        let p3 = qring(&["x", "y", "z", "w"]);
        let curve = Ideal::new(
            p3.clone(),
            ["x*z - y^2", "x*w - y*z", "y*w - z^2"]
                .iter()
                .map(|s| p3.parse(s).unwrap())
                .collect(),
        );
        // From a point of the curve the image is a conic.
        let p2 = qring(&["a", "b", "c"]);
        let from_on = coordinate_projection(&p3, &p2, &[0, 1, 2]).unwrap();
        let conic = from_on.image_closure(&curve).unwrap();
        let expected = Ideal::new(p2.clone(), vec![p2.parse("a*c - b^2").unwrap()]);
        assert!(conic.equals(&expected));
        // From a point off the curve it is a singular plane cubic.
        let from_off = coordinate_projection(&p3, &p2, &[0, 1, 3]).unwrap();
        let cubic = from_off.image_closure(&curve).unwrap();
        let expected = Ideal::new(p2.clone(), vec![p2.parse("b^3 - a^2*c").unwrap()]);
        assert!(cubic.equals(&expected));
    }

    #[test]
    fn segre_quadric_from_a_multigraded_source() {
        let src = qring(&["s", "t", "u", "v"]);
        let dst = qring(&["x", "y", "z", "w"]);
        let comps = ["s*u", "s*v", "t*u", "t*v"]
            .iter()
            .map(|s| src.parse(s).unwrap())
            .collect();
        let map =
            RationalMap::new_multigraded(src.clone(), dst.clone(), comps, &[vec![0, 1], vec![2, 3]])
                .unwrap();
        assert_eq!(map.degree(), 2);
        let image = map.image_closure(&Ideal::zero(src)).unwrap();
        let expected = Ideal::new(dst.clone(), vec![dst.parse("x*w - y*z").unwrap()]);
        assert!(image.equals(&expected));
    }

    #[test]
    fn mixed_degree_components_are_rejected() {
        let src = qring(&["s", "t"]);
        let dst = qring(&["x", "y"]);
        let comps = vec![src.parse("s").unwrap(), src.parse("s*t").unwrap()];
        assert!(RationalMap::new(src, dst, comps).is_err());
    }

    #[test]
    fn fibre_of_a_conic_point_is_one_parameter_value() {
        let src = fpring(101, &["s", "t"]);
        let dst = fpring(101, &["x", "y", "z"]);
        let comps = ["s^2", "s*t", "t^2"]
            .iter()
            .map(|f| src.parse(f).unwrap())
            .collect();
        let map = RationalMap::new(src.clone(), dst, comps).unwrap();
        let zero = Ideal::zero(src.clone());
        let fibre = map.preimage_of_point(&zero, &[1, 1, 1]).unwrap();
        let mut rng = Rng::new(7);
        let cleaned = saturate_irrelevant(&fibre, &mut rng).unwrap();
        let expected = Ideal::new(src.clone(), vec![src.parse("s - t").unwrap()]);
        assert!(cleaned.equals(&expected));
    }

    #[test]
    fn generic_hyperplane_saturation_matches_the_colon_route() {
        let ring = fpring(32003, &["x", "y", "z"]);
        let ideal = Ideal::new(
            ring.clone(),
            ["x^2", "x*y", "x*z"]
                .iter()
                .map(|s| ring.parse(s).unwrap())
                .collect(),
        );
        let irrelevant = Ideal::new(
            ring.clone(),
            (0..3).map(|i| ring.var(i)).collect(),
        );
        let mut rng = Rng::new(11);
        let fast = saturate_irrelevant(&ideal, &mut rng).unwrap();
        let slow = ideal.saturate_ideal(&irrelevant).unwrap();
        assert!(fast.equals(&slow));
        let expected = Ideal::new(ring.clone(), vec![ring.var(0)]);
        assert!(fast.equals(&expected));
        // An already saturated ideal passes through unchanged.
        let curve = Ideal::new(
            ring.clone(),
            vec![ring.parse("x*y - z^2").unwrap()],
        );
        let same = saturate_irrelevant(&curve, &mut rng).unwrap();
        assert!(same.equals(&curve));
    }

    #[test]
    fn chart_multiplicity_reports_the_initial_form() {
        let ring = qring(&["y0", "y1", "y2", "y3"]);
        let f = ring.parse("y0^2*y2 + y1^3").unwrap();
        let (mult, cone) = chart_multiplicity(&ring, &f, 2).unwrap();
        assert_eq!(mult, 2);
        assert_eq!(ring.format(&cone), "y0^2");
        let smooth = ring.parse("y0*y2^2 + y1^3 - y3^2*y1").unwrap();
        let (mult, cone) = chart_multiplicity(&ring, &smooth, 2).unwrap();
        assert_eq!(mult, 1);
        assert_eq!(ring.format(&cone), "y0");
    }

    #[test]
    fn random_linear_change_round_trips() {
        let ring = fpring(32003, &["x", "y", "z", "w"]);
        let mut rng = Rng::new(5);
        let (fwd, bwd) = random_linear_change(&ring, &mut rng);
        let f = ring.parse("x^3 - 2*y*z*w + w^3 + x*y^2").unwrap();
        let once = ring.substitute(&f, &ring, &fwd);
        let back = ring.substitute(&once, &ring, &bwd);
        assert_eq!(ring.format(&back), ring.format(&f));
    }

    #[test]
    fn quadratic_involution_inverts_to_itself() {
        let p = PrimeField::new(32003).unwrap();
        let src = fpring(32003, &["x0", "x1", "x2"]);
        let dst = fpring(32003, &["y0", "y1", "y2"]);
        let comps: Vec<_> = ["x1*x2", "x0*x2", "x0*x1"]
            .iter()
            .map(|s| src.parse(s).unwrap())
            .collect();
        let map = RationalMap::new(src.clone(), dst.clone(), comps).unwrap();
        let zero = Ideal::zero(src.clone());
        let mut rng = Rng::new(42);
        let mut sampler = {
            let p = p.clone();
            move |r: &mut Rng| Some(alloc::vec![r.below(p.modulus()), r.below(p.modulus()), r.below(p.modulus())])
        };
        let done =
            invert_birational(&map, &zero, &mut sampler, &mut rng, &InversionOptions::default())
                .unwrap();
        assert_eq!(done.row_degrees, alloc::vec![1, 1]);
        assert_eq!(done.removed_factor_degree, 0);
        let expected_comps: Vec<_> = ["y1*y2", "y0*y2", "y0*y1"]
            .iter()
            .map(|s| dst.parse(s).unwrap())
            .collect();
        let expected = RationalMap::new(dst.clone(), src.clone(), expected_comps).unwrap();
        assert!(done.inverse.proportional_to(&expected));
        let cert = certify_inverse(&map, &zero, &done.inverse).unwrap();
        assert!(cert.holds());
    }

    #[test]
    fn linear_automorphism_inverse_sheds_the_minor_content() {
        let p = PrimeField::new(32003).unwrap();
        let src = fpring(32003, &["x0", "x1", "x2", "x3"]);
        let dst = fpring(32003, &["y0", "y1", "y2", "y3"]);
        let mut rng = Rng::new(9001);
        let (fwd, _) = random_linear_change(&src, &mut rng);
        let map = RationalMap::new(src.clone(), dst.clone(), fwd).unwrap();
        let zero = Ideal::zero(src.clone());
        let mut sampler = {
            let p = p.clone();
            move |r: &mut Rng| {
                Some((0..4).map(|_| r.below(p.modulus())).collect::<Vec<_>>())
            }
        };
        let done =
            invert_birational(&map, &zero, &mut sampler, &mut rng, &InversionOptions::default())
                .unwrap();
        // Three linear relation rows leave cubic minors sharing a quadric.
        assert_eq!(done.row_degrees, alloc::vec![1, 1, 1]);
        assert_eq!(done.removed_factor_degree, 2);
        assert_eq!(done.inverse.degree(), 1);
        let cert = certify_inverse(&map, &zero, &done.inverse).unwrap();
        assert!(cert.holds());
        // Composing back gives a scalar multiple of the identity tuple.
        let composite = map.compose(&done.inverse).unwrap();
        let identity =
            RationalMap::new(dst.clone(), dst.clone(), (0..4).map(|i| dst.var(i)).collect())
                .unwrap();
        assert!(composite.proportional_to(&identity));
    }

    #[test]
    fn base_ideal_collects_the_components() {
        let src = qring(&["x", "y", "z"]);
        let dst = qring(&["a", "b"]);
        let comps = vec![src.parse("x*y").unwrap(), src.parse("x*z").unwrap()];
        let map = RationalMap::new(src.clone(), dst, comps).unwrap();
        let base = map.base_ideal(&Ideal::zero(src.clone())).unwrap();
        let mut rng = Rng::new(3);
        let cleaned = saturate_irrelevant(&base, &mut rng).unwrap();
        // The base locus is the union of the line x = 0 and the point (1:0:0).
        let expected = Ideal::new(
            src.clone(),
            vec![src.parse("x*y").unwrap(), src.parse("x*z").unwrap()],
        );
        assert!(cleaned.equals(&expected));
        assert_eq!(
            src.format(&map.pullback(&map.dst().parse("a + b").unwrap())),
            "x*y + x*z".to_string()
        );
    }
}
