//! The quadric-scroll warm-up: embed `P^2 x P^1` by Segre, project from the
//! distinguished line, and verify everything the projection is supposed to
//! do: it is birational with quadric inverse, its base locus is a line plus
//! a point off the line, and the plane they span contracts back to the
//! projection center.
//!
//! This suite runs over the rationals as well as over prime fields; the
//! ideals involved are small enough for exact arithmetic everywhere.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::birat::{
    certify_inverse_sparse, coordinate_projection, invert_birational_exact, saturate_irrelevant,
    tuples_proportional_mod, InversionOptions, RationalMap,
};
use crate::field::Field;
use crate::hilbert::hilbert_data;
use crate::ideal::Ideal;
use crate::linalg::poly_minors;
use crate::monomial::MonomialOrder;
use crate::poly::PolyRing;
use crate::report::Report;
use crate::rng::Rng;
use crate::scrolls::{
    center_point, contracted_line_ideal, max_ideal_at_center, segre_ring, target_ring,
};
use crate::Result;

/// Run the whole suite and return its report.
pub fn verify_projection<F: Field>(field: F, seed: u64, field_label: &str) -> Result<Report> {
    let mut rng = Rng::new(seed);
    let mut report = Report::new("quadric scroll projection", seed, field_label);

    // P^2 x P^1 with its two degree blocks, and the Segre embedding
    let product = PolyRing::new(
        field.clone(),
        &["w0", "w1", "w2", "t0", "t1"],
        MonomialOrder::GrevLex,
    );
    let zring = segre_ring(field.clone());
    let mut comps = Vec::with_capacity(6);
    for j in 0..3 {
        for k in 0..2 {
            comps.push(product.mul(&product.var(j), &product.var(3 + k)));
        }
    }
    let segre = RationalMap::new_multigraded(
        product.clone(),
        zring.clone(),
        comps,
        &[vec![0, 1, 2], vec![3, 4]],
    )?;
    let nothing = Ideal::zero(product.clone());
    let x_ideal = segre.image_closure(&nothing)?;

    // the image ideal is the 2x2 minors of the 3x2 coordinate matrix
    let rows: Vec<Vec<_>> = (0..3)
        .map(|j| vec![zring.var(2 * j), zring.var(2 * j + 1)])
        .collect();
    let minors = Ideal::new(zring.clone(), poly_minors(&zring, &rows, 2));
    report.check(
        "segre.ideal_is_minors",
        x_ideal.equals(&minors),
        format!(
            "image ideal on {} generators matches the 2x2 minors",
            x_ideal.gens().len()
        ),
    );
    let x_data = hilbert_data(&x_ideal);
    report.check(
        "segre.dimension",
        x_data.projective_dim() == 3,
        format!("projective dimension {}", x_data.projective_dim()),
    );
    report.check(
        "segre.degree",
        x_data.degree() == 3,
        format!("degree {}", x_data.degree()),
    );

    // the two special divisors and the projection center
    let f1 = x_ideal.plus_gens(&[zring.var(1), zring.var(3), zring.var(5)]);
    let f2 = x_ideal.plus_gens(&[zring.var(4), zring.var(5)]);
    let f1_data = hilbert_data(&f1);
    let f2_data = hilbert_data(&f2);
    report.check(
        "plane_divisor.is_plane",
        f1_data.projective_dim() == 2 && f1_data.degree() == 1,
        format!("dim {} degree {}", f1_data.projective_dim(), f1_data.degree()),
    );
    report.check(
        "quadric_divisor.is_quadric",
        f2_data.projective_dim() == 2 && f2_data.degree() == 2,
        format!("dim {} degree {}", f2_data.projective_dim(), f2_data.degree()),
    );
    let center = Ideal::new(
        zring.clone(),
        vec![zring.var(1), zring.var(3), zring.var(4), zring.var(5)],
    );
    report.check(
        "center.line_on_scroll",
        center.contains_ideal(&x_ideal),
        String::from("the scroll equations vanish on the center line"),
    );

    // the projection and its exact inverse
    let yring = target_ring(field.clone());
    let proj = coordinate_projection(&zring, &yring, &[1, 3, 4, 5])?;
    let inversion = invert_birational_exact(&proj, &x_ideal, &mut rng, &InversionOptions::default())?;
    let cert = certify_inverse_sparse(&proj, &x_ideal, &inversion.inverse)?;
    report.check(
        "projection.birational",
        cert.holds(),
        format!(
            "lands on source: {}; composite proportional to identity: {}",
            cert.lands_on_source, cert.identity_composite
        ),
    );
    report.check(
        "inverse.by_quadrics",
        inversion.inverse.degree() == 2,
        format!("inverse degree {}", inversion.inverse.degree()),
    );
    let y = |i: usize| yring.var(i);
    let expected = vec![
        yring.mul(&y(0), &y(2)),
        yring.mul(&y(0), &y(3)),
        yring.mul(&y(1), &y(2)),
        yring.mul(&y(1), &y(3)),
        yring.mul(&y(2), &y(3)),
        yring.mul(&y(3), &y(3)),
    ];
    let expected_map = RationalMap::new(yring.clone(), zring.clone(), expected)?;
    report.check(
        "inverse.closed_form",
        inversion.inverse.proportional_to(&expected_map),
        String::from("matches (y0 y2 : y0 y3 : y1 y2 : y1 y3 : y2 y3 : y3^2)"),
    );

    // round trip on the source side, modulo the scroll ideal
    let back = inversion.inverse.compose(&proj)?;
    let identity: Vec<_> = (0..6).map(|i| zring.var(i)).collect();
    report.check(
        "projection.round_trip_on_source",
        tuples_proportional_mod(&zring, back.comps(), &identity, &x_ideal),
        String::from("inverse after projection is the identity modulo the scroll ideal"),
    );

    // images of the two contracted divisors
    let p_image = proj.image_closure(&f1)?;
    let p_ideal = Ideal::new(yring.clone(), vec![y(0), y(1), y(3)]);
    report.check(
        "plane_divisor.contracts_to_point",
        p_image.equals(&p_ideal),
        String::from("image ideal is (y0, y1, y3)"),
    );
    let b_image = proj.image_closure(&f2)?;
    let b_ideal = contracted_line_ideal(&yring);
    report.check(
        "quadric_divisor.contracts_to_line",
        b_image.equals(&b_ideal),
        String::from("image ideal is (y2, y3)"),
    );
    let p_point = center_point(&field);
    report.check(
        "base.point_off_line",
        !b_ideal
            .gens()
            .iter()
            .all(|g| field.is_zero(&yring.eval(g, &p_point))),
        String::from("(0:0:1:0) does not lie on the image line"),
    );

    // the base locus of the inverse: the line, plus the point as an
    // honest extra component
    let base = inversion.inverse.base_ideal(&Ideal::zero(yring.clone()))?;
    let base_sat = saturate_irrelevant(&base, &mut rng)?;
    let expected_base = b_ideal.intersect(&max_ideal_at_center(&yring))?;
    report.check(
        "inverse.base_is_line_and_point",
        base_sat.equals(&expected_base),
        String::from("saturated base ideal equals (y2, y3) meet (y0, y1, y3)"),
    );

    // the plane spanned by line and point contracts to the center
    let plane = Ideal::new(yring.clone(), vec![y(3)]);
    let plane_image = inversion.inverse.image_closure(&plane)?;
    report.check(
        "span_plane.contracts_to_center",
        plane_image.equals(&center),
        String::from("image of {y3 = 0} is the center line"),
    );

    report.artifact(
        "inverse.components",
        format!("{}", format_tuple(&yring, inversion.inverse.comps())),
    );
    Ok(report)
}

fn format_tuple<F: Field>(ring: &PolyRing<F>, comps: &[crate::poly::Polynomial<F>]) -> String {
    let mut s = String::from("(");
    for (i, c) in comps.iter().enumerate() {
        if i > 0 {
            s.push_str(" : ");
        }
        s.push_str(&ring.format(c));
    }
    s.push(')');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn full_suite_over_the_rationals() {
        let report = verify_projection(Rationals, 7, "QQ").unwrap();
        assert!(
            report.all_passed(),
            "failures: {:?}",
            report.failures().collect::<Vec<_>>()
        );
    }

    #[test]
    fn full_suite_over_a_prime_field() {
        let fp = PrimeField::new(32003).unwrap();
        let report = verify_projection(fp, 7, "F32003").unwrap();
        assert!(
            report.all_passed(),
            "failures: {:?}",
            report.failures().collect::<Vec<_>>()
        );
    }
}
