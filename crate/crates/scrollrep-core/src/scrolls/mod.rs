//! Pipelines that rebuild threefold scrolls, project them birationally to
//! `P^3`, and verify the structure of the resulting linear systems of
//! monoids.
//!
//! Every pipeline shares one coordinate frame. The scroll lives in `P^5`
//! with coordinates `x0..x5`; its ruling map lands in a plane `P^2` with
//! coordinates `w0..w2`; the auxiliary product `P^2 x P^1` embeds by Segre
//! coordinates `z00, z01, z10, z11, z20, z21` (`z_jk = w_j t_k`); and the
//! target `P^3` has coordinates `y0..y3`. The projection center is the line
//! `L = {z01 = z11 = z20 = z21 = 0}`, so the projection simply reads off
//! those four coordinates as `(y0 : y1 : y2 : y3)`. Under it the plane
//! `{z01 = z11 = z21 = 0}` contracts to the point `P = (0:0:1:0)` and the
//! quadric `{z20 = z21 = 0}` contracts to the line `{y2 = y3 = 0}`.

pub mod bordiga;
pub mod prop11;
pub mod tower;

use alloc::vec::Vec;

use crate::field::Field;
use crate::ideal::Ideal;
use crate::monomial::MonomialOrder;
use crate::poly::{rename_vars, PolyRing, Polynomial};
use crate::Result;

/// Target `P^3`, coordinates `y0..y3`.
pub fn target_ring<F: Field>(field: F) -> PolyRing<F> {
    PolyRing::new(field, &["y0", "y1", "y2", "y3"], MonomialOrder::GrevLex)
}

/// Scroll ambient `P^5`, coordinates `x0..x5`.
pub fn scroll_ring<F: Field>(field: F) -> PolyRing<F> {
    PolyRing::new(
        field,
        &["x0", "x1", "x2", "x3", "x4", "x5"],
        MonomialOrder::GrevLex,
    )
}

/// Segre `P^5` for `P^2 x P^1`, coordinates `z_jk = w_j t_k` in row-major
/// order.
pub fn segre_ring<F: Field>(field: F) -> PolyRing<F> {
    PolyRing::new(
        field,
        &["z00", "z01", "z10", "z11", "z20", "z21"],
        MonomialOrder::GrevLex,
    )
}

/// Plane `P^2` of ruling images, coordinates `w0..w2`.
pub fn plane_ring<F: Field>(field: F) -> PolyRing<F> {
    PolyRing::new(field, &["w0", "w1", "w2"], MonomialOrder::GrevLex)
}

/// The distinguished point `P = (0:0:1:0)` of the target.
pub fn center_point<F: Field>(field: &F) -> Vec<F::Elem> {
    let mut p = alloc::vec![field.zero(); 4];
    p[2] = field.one();
    p
}

/// Maximal ideal `(y0, y1, y3)` of the distinguished point.
pub fn max_ideal_at_center<F: Field>(yring: &PolyRing<F>) -> Ideal<F> {
    Ideal::new(
        yring.clone(),
        alloc::vec![yring.var(0), yring.var(1), yring.var(3)],
    )
}

/// The ideal generated by all degree-`n` monomials in `y0, y1, y3`: the
/// `(n-1)`-st infinitesimal neighborhood of the distinguished point.
pub fn center_neighborhood<F: Field>(yring: &PolyRing<F>, n: u32) -> Ideal<F> {
    let mut gens = Vec::new();
    for i in 0..=n {
        for j in 0..=(n - i) {
            let k = n - i - j;
            let m = yring.mul(
                &yring.pow(&yring.var(0), i),
                &yring.mul(&yring.pow(&yring.var(1), j), &yring.pow(&yring.var(3), k)),
            );
            gens.push(m);
        }
    }
    Ideal::new(yring.clone(), gens)
}

/// Ideal `(y2, y3)` of the line the ruled quadric contracts to.
pub fn contracted_line_ideal<F: Field>(yring: &PolyRing<F>) -> Ideal<F> {
    Ideal::new(yring.clone(), alloc::vec![yring.var(2), yring.var(3)])
}

/// Transport an ideal of the ruling plane into the target as the cone with
/// vertex `P`: the plane point `(w0 : w1 : w2)` corresponds to the line
/// through `P` in direction `(y0 : y1 : y3)`, so generators substitute
/// `(w0, w1, w2) -> (y0, y1, y3)`.
pub fn cone_over_plane_ideal<F: Field>(
    pring: &PolyRing<F>,
    gens: &[Polynomial<F>],
    yring: &PolyRing<F>,
) -> Result<Vec<Polynomial<F>>> {
    gens.iter()
        .map(|g| rename_vars(pring, g, yring, &[Some(0), Some(1), Some(3)]))
        .collect()
}

/// True when every term of `f` has degree at least `n` in `y0, y1, y3`,
/// i.e. `f` lies in the `n`-th power of the maximal ideal at `P`.
pub fn vanishes_to_order_at_center<F: Field>(f: &Polynomial<F>, n: u32) -> bool {
    f.terms()
        .iter()
        .all(|(m, _)| m.degree_on(&[0, 1, 3]) >= n)
}
