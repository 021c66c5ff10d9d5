//! The characteristic-2 height criterion against heights computed from the
//! Brauer law, on seeded random models with `a_2 = 0` and `a_{1,2} = 1`.

use brauerkit::algebra::Ring;
use brauerkit::artin::{artin_brauer_law, char2_coefficients, char2_height_predicate, Char2Bound};
use brauerkit::elliptic::WeierstrassModel;
use brauerkit::fgl::{height_mod_p, Height};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_model(rng: &mut StdRng, f2: &Ring) -> Option<WeierstrassModel> {
    let mut strs = Vec::new();
    for i in [1u32, 2, 3, 4, 6] {
        let mut terms = Vec::new();
        for j in 0..=2 * i {
            let bit = match (i, j) {
                (2, _) => false,
                (1, 2) => true,
                _ => rng.random_bool(0.5),
            };
            if bit {
                terms.push(format!("t^{j}"));
            }
        }
        strs.push(if terms.is_empty() { "0".to_string() } else { terms.join(" + ") });
    }
    WeierstrassModel::parse(f2, "t", [&strs[0], &strs[1], &strs[2], &strs[3], &strs[4]]).ok()
}

#[test]
fn predicate_matches_computed_height() {
    let f2 = Ring::prime_field(2).unwrap();
    let mut rng = StdRng::seed_from_u64(0x6b33);
    let mut checked = 0;
    let mut seen = [0usize; 4];
    let mut attempts = 0;
    while checked < 10 {
        attempts += 1;
        assert!(attempts < 500, "too few usable models");
        let Some(w) = random_model(&mut rng, &f2) else { continue };
        let Ok(report) = artin_brauer_law(&w, 9, 18) else { continue };
        let height = height_mod_p(&report.law, 2, 3).unwrap().value;
        let bound = char2_height_predicate(&char2_coefficients(&w).unwrap()).unwrap();
        match height {
            Height::Finite(h) => {
                assert!(h <= 3);
                assert_eq!(bound.lower_bound(), h, "model {w}");
                seen[h as usize] += 1;
                checked += 1;
            }
            _ => assert_eq!(bound, Char2Bound::AtLeast4, "model {w}"),
        }
    }
    // the sample reaches every height the order can see
    assert!(seen[1] > 0 && seen[2] + seen[3] > 0, "{seen:?}");
}
