//! Exactness reports for the three two-parameter families at p = 3.

use brauerkit::algebra::{parse_poly, Ideal, MultiPoly};
use brauerkit::landweber::*;
use brauerkit::{artin, stienstra};

fn poly(v: &VSequence, s: &str) -> MultiPoly {
    parse_poly(&v.ring, s).unwrap()
}

fn assert_common(r: &ExactnessReport) {
    assert_eq!(r.verdict.verdict, Verdict::ExactAtP);
    assert_eq!((r.verdict.unit_at, r.verdict.regular_up_to), (Some(3), 3));
    assert_eq!(r.loci.len(), 3);
    for l in &r.loci {
        assert_ne!(l.witness, Witness::NotFound, "locus of depth {}", l.depth);
    }
    assert_eq!(r.top_locus_points, vec![vec![0, 0]]);
    assert!(r.top_locus_is_origin);
    assert_eq!(r.law.order(), 10);
}

#[test]
fn family_q() {
    let f = Family::Stienstra(stienstra::models::family_q());
    let r = exactness_report(&f, 3, 3).unwrap();
    assert_common(&r);
    assert_eq!(r.v.v(1).unwrap(), &poly(&r.v, "-b"));
    assert_eq!(r.v.v(2).unwrap(), &poly(&r.v, "-a^2 - a*b^2"));
    // (v1, v2) = (b, a^2), and v3 is 1 there
    let i = Ideal::new(&r.v.ring, &[poly(&r.v, "b"), poly(&r.v, "a^2")]).unwrap();
    assert_eq!(i.reduce(r.v.v(3).unwrap()).to_string(), "1");
    assert_eq!(r.v.reduced(3).unwrap().to_string(), "1");
    assert!(r.coefficient_ring.contains("[Delta^-1]"));
}

#[test]
fn family_d() {
    let f = Family::Stienstra(stienstra::models::family_d());
    let r = exactness_report(&f, 3, 3).unwrap();
    assert_common(&r);
    assert_eq!(r.v.v(1).unwrap(), &poly(&r.v, "b"));
    assert_eq!(r.v.v(2).unwrap(), &poly(&r.v, "a"));
    assert_eq!(r.v.reduced(3).unwrap().to_string(), "1");
}

#[test]
fn family_e() {
    let f = Family::Elliptic(artin::models::family_e());
    let r = exactness_report(&f, 3, 3).unwrap();
    assert_common(&r);
    assert_eq!(r.v.v(1).unwrap(), &poly(&r.v, "b^2"));
    assert_eq!(r.v.v(2).unwrap(), &poly(&r.v, "a^4 - a*b + b^4"));
    let v3 = r.v.v(3).unwrap();
    let origin = Ideal::new(&r.v.ring, &[poly(&r.v, "a"), poly(&r.v, "b")]).unwrap();
    assert_eq!(origin.reduce(v3), poly(&r.v, "-1"));
    let lower = r.v.ideal(2).unwrap();
    assert!(!brauerkit::algebra::is_zero_divisor(v3, &lower).unwrap());
    // frozen normal form of v3 modulo (v1, v2)
    assert_eq!(
        r.v.reduced(3).unwrap().to_string(),
        "2*a^3*b + 2*a^3 + 2*a^2*b + 2*a^2 + a*b + a + b + 2"
    );
    assert!(matches!(r.loci[0].witness, Witness::DiscriminantBound { k, .. } if k <= 3));
    assert!(!r.coefficient_ring.contains("Delta"));
}

#[test]
fn origin_fibres_have_smooth_points() {
    let q = Family::Stienstra(stienstra::models::family_q());
    let quartic = q.fibre(3, &[0, 0]).unwrap();
    assert_eq!(first_smooth_point(std::slice::from_ref(&quartic)).unwrap(), Some(vec![1, 0, 0, 2]));
    assert!(hypersurface_is_smooth(&quartic).unwrap());
    let d = Family::Stienstra(stienstra::models::family_d());
    let sextic = d.fibre(3, &[0, 0]).unwrap();
    assert_eq!(first_smooth_point(&[sextic]).unwrap(), Some(vec![1, 0, 1]));
}
