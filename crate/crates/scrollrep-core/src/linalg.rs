//! Dense linear algebra over a field, and determinant-style operations on
//! matrices with polynomial entries.
//!
//! The scalar side (row reduction, kernels, solving) backs the sampled
//! relation search and the Macaulay-matrix cross-checks. The polynomial side
//! (determinants, minors, Pfaffians, kernel vectors of almost-square
//! matrices) builds the determinantal ideals and scroll maps.

use crate::field::Field;
use crate::poly::{PolyRing, Polynomial};
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zero(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix {
            field,
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Matrix::zero(field.clone(), n, n);
        for i in 0..n {
            *m.at_mut(i, i) = field.one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut F::Elem {
        &mut self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let piv = (r..self.rows).find(|&i| !f.is_zero(self.at(i, c)));
            let piv = match piv {
                Some(p) => p,
                None => continue,
            };
            self.swap_rows(r, piv);
            let inv = f.inv(self.at(r, c)).expect("pivot is nonzero");
            for j in c..self.cols {
                let v = f.mul(self.at(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || f.is_zero(self.at(i, c)) {
                    continue;
                }
                let factor = self.at(i, c).clone();
                for j in c..self.cols {
                    let v = f.sub(self.at(i, j), &f.mul(&factor, self.at(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let f = self.field.clone();
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; self.cols];
            for &p in &pivots {
                s[p] = true;
            }
            s
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free] {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = f.neg(m.at(prow, free));
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `M x = b`, if consistent.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(b.len(), self.rows);
        let f = self.field.clone();
        let mut aug = Matrix::zero(f.clone(), self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = aug.at(prow, self.cols).clone();
        }
        Some(x)
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = f.zero();
                for c in 0..self.cols {
                    acc = f.add(&acc, &f.mul(self.at(r, c), &v[c]));
                }
                acc
            })
            .collect()
    }

    pub fn det(&self) -> F::Elem {
        assert_eq!(self.rows, self.cols);
        let f = self.field.clone();
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..m.cols {
            let piv = (c..m.rows).find(|&i| !f.is_zero(m.at(i, c)));
            let piv = match piv {
                Some(p) => p,
                None => return f.zero(),
            };
            if piv != c {
                m.swap_rows(c, piv);
                det = f.neg(&det);
            }
            det = f.mul(&det, m.at(c, c));
            let inv = f.inv(m.at(c, c)).expect("pivot is nonzero");
            for i in (c + 1)..m.rows {
                if f.is_zero(m.at(i, c)) {
                    continue;
                }
                let factor = f.mul(m.at(i, c), &inv);
                for j in c..m.cols {
                    let v = f.sub(m.at(i, j), &f.mul(&factor, m.at(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Inverse of a square matrix, or `None` if it is singular.
    pub fn inverse(&self) -> Option<Matrix<F>> {
        assert_eq!(self.rows, self.cols);
        let f = self.field.clone();
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![f.zero(); n];
            e[j] = f.one();
            cols.push(self.solve(&e)?);
        }
        let mut out = Matrix::zero(f, n, n);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                out.set(i, j, v.clone());
            }
        }
        Some(out)
    }
}

/// All k-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// Determinant of a square matrix of polynomials, by dynamic programming
/// over column subsets (division-free, so valid over any coefficient ring).
pub fn poly_det<F: Field>(ring: &PolyRing<F>, m: &[Vec<Polynomial<F>>]) -> Polynomial<F> {
    let n = m.len();
    if n == 0 {
        return ring.one();
    }
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    assert!(n <= 16, "determinant expansion limited to 16 rows");
    // table[s] = determinant of rows 0..popcount(s) on the column set s.
    let mut table: Vec<Option<Polynomial<F>>> = vec![None; 1 << n];
    table[0] = Some(ring.one());
    for s in 1usize..(1 << n) {
        let row = (s as u32).count_ones() as usize - 1;
        let mut acc = Polynomial::zero();
        let mut sign_flip = row % 2 == 1;
        for j in 0..n {
            if s & (1 << j) == 0 {
                continue;
            }
            let sub = table[s & !(1 << j)]
                .as_ref()
                .expect("smaller subsets already filled");
            let term = ring.mul(&m[row][j], sub);
            acc = if sign_flip {
                ring.sub(&acc, &term)
            } else {
                ring.add(&acc, &term)
            };
            sign_flip = !sign_flip;
        }
        table[s] = Some(acc);
    }
    table[(1 << n) - 1].take().expect("full subset filled")
}

/// All `k x k` minors, over row subsets then column subsets, each in
/// lexicographic order.
pub fn poly_minors<F: Field>(
    ring: &PolyRing<F>,
    m: &[Vec<Polynomial<F>>],
    k: usize,
) -> Vec<Polynomial<F>> {
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut out = Vec::new();
    for rs in combinations(rows, k) {
        for cs in combinations(cols, k) {
            let sub: Vec<Vec<Polynomial<F>>> = rs
                .iter()
                .map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect())
                .collect();
            out.push(poly_det(ring, &sub));
        }
    }
    out
}

/// For a `k x (k+1)` matrix `M` of generic rank `k`, the vector of signed
/// maximal minors `v_j = (-1)^j det(M without column j)` satisfies
/// `M v = 0` identically.
pub fn signed_kernel_minors<F: Field>(
    ring: &PolyRing<F>,
    m: &[Vec<Polynomial<F>>],
) -> Vec<Polynomial<F>> {
    let k = m.len();
    assert!(m.iter().all(|row| row.len() == k + 1));
    let mut out = Vec::with_capacity(k + 1);
    for j in 0..=k {
        let sub: Vec<Vec<Polynomial<F>>> = m
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let d = poly_det(ring, &sub);
        out.push(if j % 2 == 0 { d } else { ring.neg(&d) });
    }
    out
}

/// Pfaffian of a skew-symmetric matrix of even size, by expansion along the
/// first remaining row.
pub fn pfaffian<F: Field>(ring: &PolyRing<F>, m: &[Vec<Polynomial<F>>]) -> Polynomial<F> {
    let n = m.len();
    assert!(n % 2 == 0, "Pfaffian needs even size");
    assert!(m.iter().all(|row| row.len() == n));
    let idx: Vec<usize> = (0..n).collect();
    pf_rec(ring, m, &idx)
}

fn pf_rec<F: Field>(
    ring: &PolyRing<F>,
    m: &[Vec<Polynomial<F>>],
    idx: &[usize],
) -> Polynomial<F> {
    if idx.is_empty() {
        return ring.one();
    }
    let i0 = idx[0];
    let mut acc = Polynomial::zero();
    for (pos, &j) in idx.iter().enumerate().skip(1) {
        let rest: Vec<usize> = idx
            .iter()
            .copied()
            .filter(|&k| k != i0 && k != j)
            .collect();
        let sub = pf_rec(ring, m, &rest);
        let term = ring.mul(&m[i0][j], &sub);
        acc = if pos % 2 == 1 {
            ring.add(&acc, &term)
        } else {
            ring.sub(&acc, &term)
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::monomial::MonomialOrder;
    use crate::rng::Rng;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rref_and_rank() {
        let f = fp(101);
        let m = Matrix::from_rows(
            f.clone(),
            vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]],
        );
        assert_eq!(m.rank(), 2);
        let id = Matrix::identity(f, 3);
        assert_eq!(id.rank(), 3);
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let f = fp(32003);
        let mut rng = Rng::new(3);
        for _ in 0..20 {
            let rows = 3 + rng.below(3) as usize;
            let cols = rows + 1 + rng.below(3) as usize;
            let data: Vec<Vec<u64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.below(32003)).collect())
                .collect();
            let m = Matrix::from_rows(f.clone(), data);
            let basis = m.kernel_basis();
            assert_eq!(basis.len(), cols - m.rank());
            for v in basis {
                assert!(m.mul_vec(&v).iter().all(|x| *x == 0));
            }
        }
    }

    #[test]
    fn solve_round_trip() {
        let f = fp(101);
        let mut rng = Rng::new(5);
        for _ in 0..20 {
            let n = 4;
            let data: Vec<Vec<u64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.below(101)).collect())
                .collect();
            let m = Matrix::from_rows(f.clone(), data);
            let x0: Vec<u64> = (0..n).map(|_| rng.below(101)).collect();
            let b = m.mul_vec(&x0);
            let x = m.solve(&b).expect("consistent by construction");
            assert_eq!(m.mul_vec(&x), b);
        }
    }

    #[test]
    fn inconsistent_system_detected() {
        let f = fp(101);
        let m = Matrix::from_rows(f, vec![vec![1, 1], vec![2, 2]]);
        assert!(m.solve(&[1, 3]).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let f = fp(32003);
        let mut rng = Rng::new(11);
        for _ in 0..20 {
            let n = 3 + rng.below(3) as usize;
            let data: Vec<Vec<u64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.below(32003)).collect())
                .collect();
            let m = Matrix::from_rows(f.clone(), data);
            match m.inverse() {
                Some(inv) => {
                    for j in 0..n {
                        let mut e = vec![0u64; n];
                        e[j] = 1;
                        let col: Vec<u64> = (0..n).map(|i| *inv.at(i, j)).collect();
                        assert_eq!(m.mul_vec(&col), e);
                    }
                }
                None => assert!(m.rank() < n),
            }
        }
        let sing = Matrix::from_rows(f, vec![vec![1, 2], vec![2, 4]]);
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn scalar_det_matches_cofactor_expansion() {
        let f = fp(32003);
        let mut rng = Rng::new(9);
        let cofactor3 = |m: &Matrix<PrimeField>, f: &PrimeField| {
            let a = |r: usize, c: usize| *m.at(r, c);
            let mut acc = 0u64;
            let terms = [
                (a(0, 0), a(1, 1), a(2, 2), false),
                (a(0, 0), a(1, 2), a(2, 1), true),
                (a(0, 1), a(1, 0), a(2, 2), true),
                (a(0, 1), a(1, 2), a(2, 0), false),
                (a(0, 2), a(1, 0), a(2, 1), false),
                (a(0, 2), a(1, 1), a(2, 0), true),
            ];
            for (x, y, z, neg) in terms {
                let t = f.mul(&f.mul(&x, &y), &z);
                acc = if neg { f.sub(&acc, &t) } else { f.add(&acc, &t) };
            }
            acc
        };
        for _ in 0..50 {
            let data: Vec<Vec<u64>> = (0..3)
                .map(|_| (0..3).map(|_| rng.below(32003)).collect())
                .collect();
            let m = Matrix::from_rows(f.clone(), data);
            assert_eq!(m.det(), cofactor3(&m, &f));
        }
    }

    #[test]
    fn vandermonde_determinant_formula() {
        let r = PolyRing::new(Rationals, &["x", "y", "z"], MonomialOrder::GrevLex);
        let row = |v: &str| {
            vec![
                r.one(),
                r.parse(v).unwrap(),
                r.pow(&r.parse(v).unwrap(), 2),
            ]
        };
        let m = vec![row("x"), row("y"), row("z")];
        let det = poly_det(&r, &m);
        let want = r
            .parse("(y - x)*(z - x)*(z - y)")
            .unwrap();
        assert_eq!(det, want);
    }

    #[test]
    fn kernel_minors_annihilate_symbolically() {
        let r = PolyRing::new(Rationals, &["a", "b", "c", "d", "e", "f"], MonomialOrder::GrevLex);
        let m = vec![
            vec![r.var(0), r.var(1), r.var(2)],
            vec![r.var(3), r.var(4), r.var(5)],
        ];
        let v = signed_kernel_minors(&r, &m);
        assert_eq!(v.len(), 3);
        for row in &m {
            let mut acc = Polynomial::zero();
            for (e, vi) in row.iter().zip(v.iter()) {
                acc = r.add(&acc, &r.mul(e, vi));
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn pfaffian_squares_to_determinant() {
        let fq = Rationals;
        let r = PolyRing::new(fq, &["t"], MonomialOrder::Lex);
        let mut rng = Rng::new(21);
        for n in [4usize, 6] {
            let mut m = vec![vec![Polynomial::zero(); n]; n];
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = r.from_i64(rng.below(19) as i64 - 9);
                    m[i][j] = v.clone();
                    m[j][i] = r.neg(&v);
                }
            }
            let pf = pfaffian(&r, &m);
            let det = poly_det(&r, &m);
            assert_eq!(r.mul(&pf, &pf), det);
        }
    }

    #[test]
    fn pfaffian_of_standard_block_form() {
        // Block-diagonal skew with blocks [[0, a], [-a, 0]] and [[0, b], [-b, 0]]
        // has Pfaffian a*b.
        let r = PolyRing::new(Rationals, &["a", "b"], MonomialOrder::GrevLex);
        let z = Polynomial::zero;
        let a = r.var(0);
        let b = r.var(1);
        let m = vec![
            vec![z(), a.clone(), z(), z()],
            vec![r.neg(&a), z(), z(), z()],
            vec![z(), z(), z(), b.clone()],
            vec![z(), z(), r.neg(&b), z()],
        ];
        assert_eq!(pfaffian(&r, &m), r.mul(&a, &b));
    }

    #[test]
    fn minor_count_for_rectangular_matrix() {
        let r = PolyRing::new(Rationals, &["x"], MonomialOrder::Lex);
        let m: Vec<Vec<Polynomial<Rationals>>> =
            (0..4).map(|i| (0..3).map(|j| r.from_i64((i * 3 + j) as i64)).collect()).collect();
        assert_eq!(poly_minors(&r, &m, 3).len(), 4);
        assert_eq!(poly_minors(&r, &m, 2).len(), 18);
    }
}
