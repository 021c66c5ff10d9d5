//! Acceptance run: one pass/fail line per criterion, with the reason.
//!
//! Exact arithmetic throughout, so every comparison is equality. The only
//! tolerances are the wall-clock budgets below.

mod props;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use brauerkit::algebra::{is_zero_divisor, parse_poly, Ideal};
use brauerkit::artin::{self, models as amodels, Char2Bound};
use brauerkit::elliptic;
use brauerkit::fgl::{self, Height};
use brauerkit::landweber::{exactness_report, Family, Verdict};
use brauerkit::stienstra::{self, models as smodels};
use num_bigint::BigInt;

const BUDGET_FERMAT_LAW: Duration = Duration::from_secs(10);
const BUDGET_HEIGHTS: Duration = Duration::from_secs(60);
const BUDGET_ARTIN: Duration = Duration::from_secs(120);
const BUDGET_FAMILIES: Duration = Duration::from_secs(30 * 60);

const FERMAT_LAW: &str = "x + y - 24*x^4*y - 48*x^3*y^2 - 48*x^2*y^3 - 24*x*y^4 - 1944*x^8*y - 6624*x^7*y^2 \
- 14304*x^6*y^3 - 20880*x^5*y^4 - 20880*x^4*y^5 - 14304*x^3*y^6 - 6624*x^2*y^7 - 1944*x*y^8 + O(11)";

const QUARTIC_CHAR5_LAW: &str = "x + y + 2*x^2*y + 2*x*y^2 + 4*x^3*y^2 + 4*x^2*y^3 + x^6*y + 3*x^5*y^2 + 3*x^4*y^3 \
+ 3*x^3*y^4 + 2*x^2*y^5 + x*y^6 + x^8*y + 2*x^7*y^2 + 3*x^6*y^3 + 3*x^3*y^6 + 2*x^2*y^7 + x*y^8 + O(11)";

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg.into()) }
}

fn s<E: ToString>(e: E) -> String {
    e.to_string()
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |a, k| a * k)
}

/// Terms present in one rendering but not the other.
fn term_diff(expected: &str, got: &str) -> String {
    let terms = |s: &str| -> Vec<String> { s.replace(" - ", " + -").split(" + ").map(str::to_string).collect() };
    let (e, g) = (terms(expected), terms(got));
    let missing: Vec<&String> = e.iter().filter(|t| !g.contains(t)).collect();
    let extra: Vec<&String> = g.iter().filter(|t| !e.contains(t)).collect();
    format!("expected terms {missing:?}, computed {extra:?}")
}

fn fermat_law() -> Check {
    let x = smodels::fermat_quartic();
    let betas = x.betas(13);
    for (i, b) in betas.iter().enumerate() {
        let m = i as u32 + 1;
        let want = if m % 4 == 1 {
            let k = (m - 1) / 4;
            factorial(4 * k) / factorial(k).pow(4)
        } else {
            BigInt::from(0)
        };
        ensure(b.to_string() == want.to_string(), format!("beta_{m} = {b}, expected {want}"))?;
    }
    let g = stienstra::rational_fgl(&x, 11).map_err(s)?;
    let got = g.to_string();
    ensure(got == FERMAT_LAW, term_diff(FERMAT_LAW, &got))?;
    Ok(format!("beta_1..beta_13 match; law = {got}"))
}

fn stienstra_heights() -> Check {
    let mut seen = Vec::new();
    for (name, x, finite, open) in [
        ("Fermat", smodels::fermat_quartic(), &[5u64, 13, 17, 29][..], &[3u64, 7, 11][..]),
        ("sextic", smodels::diagonal_sextic(), &[7, 13][..], &[5, 11][..]),
    ] {
        for &p in finite {
            let h = stienstra::brauer_height(&x, p, p as u32 + 1).map_err(s)?.value;
            ensure(h == Height::Finite(1), format!("{name} at {p}: {h}"))?;
            seen.push(format!("{name} {p}: 1"));
        }
        for &p in open {
            let n = (p * p + 1) as u32;
            let h = stienstra::brauer_height(&x, p, n).map_err(s)?.value;
            ensure(h == Height::Indeterminate { order: n }, format!("{name} at {p}: {h}"))?;
            seen.push(format!("{name} {p}: indeterminate at {n}"));
        }
    }
    Ok(seen.join("; "))
}

fn artin_char5() -> Check {
    let w = amodels::fermat_quartic_char5();
    let r = artin::artin_brauer_law(&w, 11, 22).map_err(s)?;
    let h = fgl::height_mod_p(&r.law, 5, 1).map_err(s)?;
    let tail = format!("[5] = {}, height {}", h.p_series, h.value);
    ensure(h.p_series.to_string() == "4*x^5 + O(11)" && h.value == Height::Finite(1), tail.clone())?;
    let got = r.law.to_string();
    ensure(got == QUARTIC_CHAR5_LAW, format!("{tail}; law differs from the display: {}", term_diff(QUARTIC_CHAR5_LAW, &got)))?;
    Ok(tail)
}

fn artin_char2() -> Check {
    let w = amodels::char2_height3();
    let r = artin::artin_brauer_law(&w, 9, 18).map_err(s)?;
    let h = fgl::height_mod_p(&r.law, 2, 3).map_err(s)?;
    let got = format!("law {}, [2] = {}, height {}", r.law, h.p_series, h.value);
    ensure(
        r.law.to_string() == "x + y + x^4*y^4 + O(9)" && h.p_series.to_string() == "x^8 + O(9)" && h.value == Height::Finite(3),
        got.clone(),
    )?;
    let c = artin::char2_coefficients(&w).map_err(s)?;
    let bound = artin::char2_height_predicate(&c).map_err(s)?;
    let quartic = artin::char2_h4_polynomial(&c);
    ensure(bound == Char2Bound::AtLeast3, format!("predicate gives {bound}"))?;
    ensure(quartic.to_string() == "1", format!("degree-4 polynomial is {quartic}"))?;
    Ok(format!("{got}; predicate {bound}, not h>=4"))
}

fn discriminant() -> Check {
    let w = amodels::fermat_quartic_char5();
    let d = elliptic::discriminant(&w);
    let ring = w.ring();
    let product = parse_poly(ring, "t^4*(t+1)^2*(t+2)^2*(t+3)^2*(t+4)^2*(t^2+2)^2*(t^2+3)^2").map_err(s)?;
    let unit = (1..5).find(|&c| product.scale(&ring.scalars().from_i64(c)) == d.delta);
    ensure(unit.is_some(), format!("Delta = {} is not a unit multiple of the product", d.delta))?;
    ensure(d.t_adic_valuation == Some(4), format!("v_t = {:?}", d.t_adic_valuation))?;
    Ok(format!("Delta = {} * product, v_t = 4", unit.unwrap()))
}

fn families() -> Check {
    let mut seen = Vec::new();
    for (name, fam) in [
        ("Q", Family::Stienstra(smodels::family_q())),
        ("D", Family::Stienstra(smodels::family_d())),
        ("E", Family::Elliptic(amodels::family_e())),
    ] {
        let r = exactness_report(&fam, 3, 3).map_err(s)?;
        let v = &r.v;
        let p = |src: &str| parse_poly(&v.ring, src).map_err(s);
        let (v1, v2, v3) = (v.v(1).ok_or("no v1")?, v.v(2).ok_or("no v2")?, v.v(3).ok_or("no v3")?);
        let (w1, w2) = match name {
            "Q" => ("-b", "-a^2 - a*b^2"),
            "D" => ("b", "a"),
            _ => ("b^2", "a^4 - a*b + b^4"),
        };
        ensure(v1 == &p(w1)? && v2 == &p(w2)?, format!("{name}: v1 = {v1}, v2 = {v2}"))?;
        let detail = match name {
            "Q" => {
                let res = Ideal::new(&v.ring, &[p("b")?, p("a^2")?]).map_err(s)?.reduce(v3);
                ensure(res.is_constant() && !res.is_zero(), format!("Q: v3 mod (b, a^2) = {res}"))?;
                format!("v3 mod (b, a^2) = {res}")
            }
            "D" => {
                let res = v.reduced(3).map_err(s)?;
                ensure(res.to_string() == "1", format!("D: v3 mod (v1, v2) = {res}"))?;
                "v3 mod (v1, v2) = 1".to_string()
            }
            _ => {
                let res = Ideal::new(&v.ring, &[p("a")?, p("b")?]).map_err(s)?.reduce(v3);
                ensure(res == p("-1")?, format!("E: v3 mod (a, b) = {res}"))?;
                let zd = is_zero_divisor(v3, &v.ideal(2).map_err(s)?).map_err(s)?;
                ensure(!zd, "E: v3 is a zero divisor mod (v1, v2)")?;
                "v3 = -1 mod (a, b), non-zero-divisor mod (v1, v2)".to_string()
            }
        };
        ensure(r.verdict.verdict == Verdict::ExactAtP, format!("{name}: verdict {}", r.verdict.verdict))?;
        seen.push(format!("{name}: v1 = {w1}, v2 = {w2}, {detail}, exact_at_3"));
    }
    Ok(seen.join("; "))
}

fn properties() -> Check {
    let mut failed = Vec::new();
    for (name, f) in props::ALL {
        if panic::catch_unwind(AssertUnwindSafe(f)).is_err() {
            failed.push(*name);
        }
    }
    ensure(failed.is_empty(), format!("failed: {}", failed.join(", ")))?;
    Ok(format!("{} suites, 200 cases each", props::ALL.len()))
}

fn shortcut() -> Check {
    let w = amodels::fermat_quartic_char5();
    let n = 17;
    let series = artin::shortcut_series(&w, n).map_err(s)?;
    match fgl::validate_fgl(series) {
        Err(e @ fgl::FglError::AxiomViolated { axiom: fgl::Axiom::Associativity, .. }) => {
            Ok(format!("shortcut at N={n} rejected: {e}"))
        }
        Err(e) => Err(format!("rejected for another reason: {e}")),
        Ok(_) => Err(format!("shortcut at N={n} accepted")),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Check, Option<Duration>); 8] = [
        ("Fermat betas and law over Z", fermat_law, Some(BUDGET_FERMAT_LAW)),
        ("Stienstra heights", stienstra_heights, Some(BUDGET_HEIGHTS)),
        ("Artin, characteristic 5", artin_char5, Some(BUDGET_ARTIN)),
        ("Artin, characteristic 2", artin_char2, None),
        ("discriminant of the quartic model", discriminant, None),
        ("families Q, D, E at p = 3", families, Some(BUDGET_FAMILIES)),
        ("property suites", properties, None),
        ("shortcut rejected by the validator", shortcut, None),
    ];
    let mut failures = 0;
    for (i, (title, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match (outcome, budget) {
            (Ok(_), Some(b)) if took > b => Err(format!("took {took:.1?}, budget {b:?}")),
            (o, _) => o,
        };
        let (label, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failures += outcome.is_err() as usize;
        println!("criterion {}: {label} {title} ({took:.1?}): {detail}", i + 1);
    }
    println!("{} of 8 criteria pass", 8 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
