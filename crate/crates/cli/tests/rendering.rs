//! Canonical renderings re-parse to the same value, in every ring a job can
//! declare.

use brauerkit::algebra::{parse_poly, Ring};
use proptest::prelude::*;

fn rings() -> Vec<Ring> {
    let z = Ring::integers();
    let f3 = Ring::prime_field(3).unwrap();
    let f3ab = Ring::poly(&f3, &["a", "b"]).unwrap();
    vec![
        Ring::poly(&z, &["a", "b", "x0", "x1"]).unwrap(),
        Ring::poly(&Ring::rationals(), &["a", "b", "x0", "x1"]).unwrap(),
        Ring::poly(&f3, &["a", "b", "x0", "x1"]).unwrap(),
        Ring::poly(&f3ab, &["x0", "x1"]).unwrap(),
    ]
}

fn term_text(c: i64, den: i64, e: &[u8; 4]) -> String {
    let vars = ["a", "b", "x0", "x1"];
    let mut s = if den == 1 { format!("{c}") } else { format!("{c}/{den}") };
    for (v, &k) in vars.iter().zip(e) {
        if k > 0 {
            s.push_str(&format!("*{v}^{k}"));
        }
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn renderings_reparse(
        which in 0usize..4,
        terms in prop::collection::vec((-40i64..=40, 1i64..=6, prop::array::uniform4(0u8..4)), 0..8),
    ) {
        let ring = &rings()[which];
        let src: Vec<String> = terms
            .iter()
            .map(|(c, d, e)| {
                let d = if which == 1 { *d } else { 1 };
                term_text(*c, d, e)
            })
            .collect();
        let src = if src.is_empty() { "0".to_string() } else { src.join(" + ").replace("+ -", "- ") };
        let f = parse_poly(ring, &src).unwrap();
        let again = parse_poly(ring, &f.to_string()).unwrap();
        prop_assert_eq!(&again, &f, "{} rendered as {}", src, f);
        prop_assert_eq!(again.to_string(), f.to_string());
    }
}
