//! Weierstrass models `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` with
//! coefficients in `k[t]`, their discriminants, and the formal group law of
//! the curve at the origin.
//!
//! The law is written in the parameter `s = x/y`, so that it begins
//! `x + y + a1 xy - a2 (x^2 y + x y^2) + ...`. Internally the chord
//! construction runs in `z = -x/y`, `w = -1/y`, and the result is conjugated
//! by `s = -z`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::algebra::{AlgebraError, MultiPoly, Ring, RingHom};
use crate::fgl::{self, FglError, FormalGroupLaw};
use crate::series::{SeriesError, SeriesMono, TruncSeries};

/// Largest order for which the universal law over `Z[a1, ..., a6]` is built.
pub const MAX_UNIVERSAL_ORDER: u32 = 18;

pub const COEFF_NAMES: [&str; 5] = ["a1", "a2", "a3", "a4", "a6"];
const COEFF_WEIGHTS: [i32; 5] = [1, 2, 3, 4, 6];

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EllipticError {
    #[error("order {0} exceeds the universal-law limit {MAX_UNIVERSAL_ORDER}")]
    OrderTooLarge(u32),
    #[error("invalid model: {0}")]
    Model(String),
    #[error("formal inverse check failed")]
    Inverse,
    #[error("weight check failed at {0}")]
    Weight(String),
    #[error(transparent)]
    Fgl(#[from] FglError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` with `a_i` in `base[t]`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassModel {
    ring: Ring,
    t: String,
    coeffs: [MultiPoly; 5],
}

impl WeierstrassModel {
    /// Coefficients `[a1, a2, a3, a4, a6]` in `ring`, which must contain the
    /// variable `t`.
    pub fn new(ring: &Ring, t: &str, coeffs: [MultiPoly; 5]) -> Result<WeierstrassModel, EllipticError> {
        if ring.var_index(t).is_none() {
            return Err(AlgebraError::UnknownVariable(t.into()).into());
        }
        if ring.laurent_var().is_some() {
            return Err(EllipticError::Model("coefficients must be polynomials in t".into()));
        }
        if coeffs.iter().any(|c| c.ring() != ring) {
            return Err(AlgebraError::RingMismatch.into());
        }
        Ok(WeierstrassModel { ring: ring.clone(), t: t.to_string(), coeffs })
    }

    /// Parse the five coefficients over `base[t]`.
    pub fn parse(base: &Ring, t: &str, coeffs: [&str; 5]) -> Result<WeierstrassModel, EllipticError> {
        let ring = Ring::poly(base, &[t])?;
        let mut parsed = Vec::with_capacity(5);
        for (name, src) in COEFF_NAMES.iter().zip(coeffs) {
            let p = crate::algebra::parse_poly(&ring, src)
                .map_err(|e| EllipticError::Model(format!("{name}: {e}")))?;
            parsed.push(p);
        }
        let coeffs: [MultiPoly; 5] = parsed.try_into().expect("five coefficients");
        WeierstrassModel::new(&ring, t, coeffs)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn t_name(&self) -> &str {
        &self.t
    }

    pub fn t_index(&self) -> usize {
        self.ring.var_index(&self.t).expect("t is a ring variable")
    }

    /// `[a1, a2, a3, a4, a6]`.
    pub fn coeffs(&self) -> &[MultiPoly; 5] {
        &self.coeffs
    }

    /// The ring without `t`.
    pub fn base(&self) -> Result<Ring, AlgebraError> {
        self.ring.drop_var(&self.t)
    }

    /// The same model with its coefficients pushed through `h`.
    pub fn map(&self, h: &RingHom, t: &str) -> Result<WeierstrassModel, EllipticError> {
        let mut out = Vec::with_capacity(5);
        for c in &self.coeffs {
            out.push(h.apply(c)?);
        }
        WeierstrassModel::new(h.target(), t, out.try_into().expect("five coefficients"))
    }

    pub fn degrees(&self) -> [Option<i32>; 5] {
        let ti = self.t_index();
        let mut d = [None; 5];
        for (k, c) in self.coeffs.iter().enumerate() {
            d[k] = c.degree_in(ti);
        }
        d
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4, a6] = &self.coeffs;
        write!(f, "y^2 + ({a1})*x*y + ({a3})*y = x^3 + ({a2})*x^2 + ({a4})*x + ({a6})")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Discriminant {
    pub delta: MultiPoly,
    /// `None` when `delta = 0`.
    pub t_adic_valuation: Option<u32>,
}

/// `b2, b4, b6, b8` and `Delta = -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6`.
pub fn discriminant_of(coeffs: &[MultiPoly; 5]) -> MultiPoly {
    let [a1, a2, a3, a4, a6] = coeffs;
    let r = a1.ring();
    let k = |n: i64| MultiPoly::from_i64(r, n);
    let b2 = &(a1 * a1) + &(&k(4) * a2);
    let b4 = &(&k(2) * a4) + &(a1 * a3);
    let b6 = &(a3 * a3) + &(&k(4) * a6);
    let b8 = &(&(&(&(a1 * a1) * a6) + &(&(&k(4) * a2) * a6)) - &(&(a1 * a3) * a4)) + &(&(&(a2 * a3) * a3) - &(a4 * a4));
    let t1 = &(&(&b2 * &b2) * &b8) * &k(-1);
    let t2 = &(&(&b4 * &b4) * &b4) * &k(-8);
    let t3 = &(&b6 * &b6) * &k(-27);
    let t4 = &(&(&b2 * &b4) * &b6) * &k(9);
    &(&(&t1 + &t2) + &t3) + &t4
}

pub fn discriminant(w: &WeierstrassModel) -> Discriminant {
    let delta = discriminant_of(&w.coeffs);
    let t_adic_valuation = delta.valuation_in(w.t_index()).map(|v| v as u32);
    Discriminant { delta, t_adic_valuation }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K3ShapeReport {
    /// `deg_t a_i` for `a1, a2, a3, a4, a6` (`None` for a zero coefficient).
    pub degrees: [Option<i32>; 5],
    /// `deg a_i <= 2i` for every `i`.
    pub within_bounds: bool,
    /// Indices `i` with `deg a_i > i`.
    pub excess: Vec<u32>,
    pub is_k3_shape: bool,
    pub delta_valuation: Option<u32>,
    /// `v_t(Delta) < 12`, which guarantees minimality at `t = 0`.
    pub is_minimal_hint: bool,
}

pub fn validate_k3(w: &WeierstrassModel) -> K3ShapeReport {
    let degrees = w.degrees();
    let mut within_bounds = true;
    let mut excess = Vec::new();
    for (k, d) in degrees.iter().enumerate() {
        let i = COEFF_WEIGHTS[k];
        if let Some(d) = d {
            if *d > 2 * i {
                within_bounds = false;
            }
            if *d > i {
                excess.push(i as u32);
            }
        }
    }
    let disc = discriminant(w);
    K3ShapeReport {
        degrees,
        within_bounds,
        is_k3_shape: within_bounds && !excess.is_empty(),
        excess,
        delta_valuation: disc.t_adic_valuation,
        is_minimal_hint: disc.t_adic_valuation.is_some_and(|v| v < 12),
    }
}

/// Smallest `k` such that the coefficients of `t^0, ..., t^k` in `Delta`
/// have no common zero in the parameters (over an algebraic closure), so
/// that `v_t(Delta) <= k` for every specialization. `None` if no `k <= max_k`
/// works. Requires a prime field base with at most four parameters.
pub fn uniform_valuation_bound(w: &WeierstrassModel, max_k: u32) -> Result<Option<u32>, EllipticError> {
    let delta = discriminant_of(&w.coeffs);
    let base = w.base()?;
    let ti = w.t_index();
    let mut gens = Vec::new();
    for k in 0..=max_k {
        let c = delta.coefficient_in(&[ti], &[k as i32]).drop_var(&w.t, &base)?;
        gens.push(c);
        if crate::algebra::Ideal::new(&base, &gens)?.is_unit() {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// A formal group law together with its formal inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct EllipticFormalGroup {
    pub law: FormalGroupLaw,
    /// `i(x)` with `G(x, i(x)) = 0`, as a series in `x`.
    pub inverse: TruncSeries,
}

impl EllipticFormalGroup {
    pub fn apply_hom(&self, h: &RingHom) -> Result<EllipticFormalGroup, EllipticError> {
        let law = fgl::base_change_hom(&self.law, h)?;
        let inverse = self.inverse.apply_hom(h)?;
        Ok(EllipticFormalGroup { law, inverse })
    }
}

/// `w(z) = z^3 + a1 z w + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3` by
/// fixed-point iteration, as a series in `z` of order `n`.
pub fn w_series(coeffs: &[MultiPoly; 5], n: u32) -> TruncSeries {
    let ring = coeffs[0].ring();
    let [a1, a2, a3, a4, a6] = coeffs;
    let z = TruncSeries::var(ring, &["z"], n, 0);
    let z2 = &z * &z;
    let z3 = &z2 * &z;
    let mut w = z3.clone();
    loop {
        let ww = &w * &w;
        let next = &(&(&(&(&z3 + &(&z * &w).scale(a1)) + &(&z2 * &w).scale(a2)) + &ww.scale(a3))
            + &(&z * &ww).scale(a4))
            + &(&ww * &w).scale(a6);
        if next == w {
            return w;
        }
        w = next;
    }
}

/// The law and inverse in the curve parameter `z = -x/y`, computed over the
/// ring of the coefficients without any division by integers.
fn chord_law(coeffs: &[MultiPoly; 5], n: u32) -> Result<(TruncSeries, TruncSeries), SeriesError> {
    let ring = coeffs[0].ring();
    let [a1, a2, a3, a4, a6] = coeffs;
    let w = w_series(coeffs, n + 3);
    let vars = ["x", "y"];
    let one = TruncSeries::constant(ring, &vars, n, MultiPoly::one(ring));
    let z1 = TruncSeries::var(ring, &vars, n, 0);
    let z2 = TruncSeries::var(ring, &vars, n, 1);
    // slope (w(z2) - w(z1)) / (z2 - z1): coefficient of z1^i z2^j is A_{i+j+1}
    let mut lambda = z1.like();
    let mut w1 = z1.like();
    for d in 0..n {
        let a = w.coefficient(&[(d + 1) as u16]);
        if !a.is_zero() {
            for i in 0..=d {
                lambda.add_term(SeriesMono::new(&[i as u16, (d - i) as u16]), a.clone());
            }
        }
        let ad = w.coefficient(&[d as u16]);
        if !ad.is_zero() {
            w1.add_term(SeriesMono::new(&[d as u16, 0]), ad);
        }
    }
    let nu = &w1 - &(&lambda * &z1);
    let l2 = &lambda * &lambda;
    let l3 = &l2 * &lambda;
    let l_nu = &lambda * &nu;
    // z1 + z2 + z3 = -(z^2 coefficient) / (z^3 coefficient) after w = lambda z + nu
    let num = &(&(&(&lambda.scale(a1) + &l2.scale(a3)) + &nu.scale(a2)) + &l_nu.scale(&(a4 + a4)))
        + &(&l2 * &nu).scale(&(&(a6 + a6) + a6));
    let den = &(&(&one + &lambda.scale(a2)) + &l2.scale(a4)) + &l3.scale(a6);
    let z3 = &(&(-&z1) - &z2) - &(&num * &den.inverse()?);
    let w3 = &(&lambda * &z3) + &nu;
    // the third point is -P3, whose parameter is -z3 / (1 - a1 z3 - a3 w3)
    let d3 = &(&one - &z3.scale(a1)) - &w3.scale(a3);
    let f = -&(&z3 * &d3.inverse()?);
    // inverse i(z) = -z / (1 - a1 z - a3 w(z))
    let z = TruncSeries::var(ring, &["x"], n, 0);
    let wz = w.truncate(n).renamed(&["x"]);
    let one1 = TruncSeries::constant(ring, &["x"], n, MultiPoly::one(ring));
    let di = &(&one1 - &z.scale(a1)) - &wz.scale(a3);
    let inv = -&(&z * &di.inverse()?);
    Ok((f, inv))
}

/// Conjugate a law and inverse by `s = -z`.
fn flip(f: &TruncSeries, inv: &TruncSeries) -> (TruncSeries, TruncSeries) {
    let ring = f.ring();
    let m1 = MultiPoly::from_i64(ring, -1);
    let g = -&f.rescale(&[m1.clone(), m1.clone()]);
    let i = -&inv.rescale(&[m1]);
    (g, i)
}

/// Law and inverse without validation.
pub(crate) fn weierstrass_law_unchecked(
    coeffs: &[MultiPoly; 5],
    n: u32,
) -> Result<(TruncSeries, TruncSeries), EllipticError> {
    let ring = coeffs[0].ring();
    if coeffs.iter().any(|c| c.ring() != ring) {
        return Err(AlgebraError::RingMismatch.into());
    }
    let (f, inv) = chord_law(coeffs, n)?;
    Ok(flip(&f, &inv))
}

/// Formal group law of the Weierstrass curve with the given coefficients,
/// validated (axioms and `G(x, i(x)) = 0`).
pub fn weierstrass_fgl(coeffs: &[MultiPoly; 5], n: u32) -> Result<EllipticFormalGroup, EllipticError> {
    let (g, inverse) = weierstrass_law_unchecked(coeffs, n)?;
    let law = fgl::validate_fgl(g)?;
    check_inverse(&law, &inverse)?;
    Ok(EllipticFormalGroup { law, inverse })
}

fn check_inverse(law: &FormalGroupLaw, inverse: &TruncSeries) -> Result<(), EllipticError> {
    let x = TruncSeries::var(law.ring(), &["x"], law.order(), 0);
    if law.apply(&x, inverse)?.is_zero() {
        Ok(())
    } else {
        Err(EllipticError::Inverse)
    }
}

/// `Z[a1, a2, a3, a4, a6]`.
pub fn universal_ring() -> Ring {
    static RING: OnceLock<Ring> = OnceLock::new();
    RING.get_or_init(|| Ring::poly(&Ring::integers(), &COEFF_NAMES).expect("distinct names")).clone()
}

/// The law of the universal Weierstrass curve, computed once per order.
pub fn universal_elliptic_fgl(n: u32) -> Result<EllipticFormalGroup, EllipticError> {
    if n > MAX_UNIVERSAL_ORDER {
        return Err(EllipticError::OrderTooLarge(n));
    }
    static CACHE: OnceLock<Mutex<BTreeMap<u32, EllipticFormalGroup>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(g) = cache.lock().expect("cache lock").get(&n) {
        return Ok(g.clone());
    }
    let ring = universal_ring();
    let coeffs: [MultiPoly; 5] = COEFF_NAMES.map(|a| MultiPoly::var(&ring, a).expect("variable"));
    let g = weierstrass_fgl(&coeffs, n)?;
    check_weights(g.law.series())?;
    cache.lock().expect("cache lock").insert(n, g.clone());
    Ok(g)
}

/// Every term `c * a^alpha * x^i * y^j` of the universal law satisfies
/// `sum_k k alpha_k = i + j - 1`.
pub fn check_weights(s: &TruncSeries) -> Result<(), EllipticError> {
    for (m, c) in s.terms() {
        let target = m.degree() as i32 - 1;
        for (mono, _) in c.terms() {
            let wt: i32 = (0..5).map(|k| COEFF_WEIGHTS[k] * mono.exp(k)).sum();
            if wt != target {
                return Err(EllipticError::Weight(format!("({c}) at degree {}", m.degree())));
            }
        }
    }
    Ok(())
}

/// The law of the model over `base[t]`: the universal law with
/// `a_i -> a_i(t)` when the order allows, otherwise computed directly.
pub fn specialize(w: &WeierstrassModel, n: u32) -> Result<EllipticFormalGroup, EllipticError> {
    if n <= MAX_UNIVERSAL_ORDER && w.ring.quotient_basis().is_none() {
        let u = universal_elliptic_fgl(n)?;
        let h = RingHom::new(&universal_ring(), &w.ring, w.coeffs.to_vec())?;
        return u.apply_hom(&h);
    }
    weierstrass_fgl(&w.coeffs, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    #[test]
    fn universal_low_degrees() {
        let g = universal_elliptic_fgl(5).unwrap();
        let r = universal_ring();
        let c = |i, j| g.law.coefficient(i, j);
        let p = |s: &str| parse_poly(&r, s).unwrap();
        assert_eq!(c(1, 1), p("a1"));
        assert_eq!(c(2, 1), p("-a2"));
        assert_eq!(c(1, 2), p("-a2"));
        assert_eq!(c(3, 1), p("2*a3"));
        assert_eq!(c(1, 3), p("2*a3"));
        // the middle coefficient is 3 a3 - a1 a2; -3 a3 would break associativity
        assert_eq!(c(2, 2), p("3*a3 - a1*a2"));
        let h = RingHom::by_name(&r, &r, &[("a1", MultiPoly::zero(&r)), ("a2", MultiPoly::zero(&r))]).unwrap();
        let g0 = fgl::base_change_hom(&g.law, &h).unwrap();
        assert_eq!(g0.to_string(), "x + y + 2*a3*x^3*y + 3*a3*x^2*y^2 + 2*a3*x*y^3 + O(5)");
        let mut wrong = g0.series().clone();
        wrong.add_term(SeriesMono::new(&[2, 2]), p("-6*a3"));
        assert!(fgl::validate_fgl(wrong).is_err());
    }

    #[test]
    fn vanishing_coefficients_give_additive_law() {
        let g = universal_elliptic_fgl(7).unwrap();
        let r = universal_ring();
        let z = Ring::integers();
        let h = RingHom::new(&r, &z, vec![MultiPoly::zero(&z); 5]).unwrap();
        assert!(g.apply_hom(&h).unwrap().law.is_additive());
    }

    #[test]
    fn slope_by_exact_division() {
        let r = universal_ring();
        let coeffs: [MultiPoly; 5] = COEFF_NAMES.map(|a| MultiPoly::var(&r, a).unwrap());
        let w = w_series(&coeffs, 8);
        let z1 = TruncSeries::var(&r, &["x", "y"], 5, 0);
        let z2 = TruncSeries::var(&r, &["x", "y"], 5, 1);
        let w2 = w.truncate(6).embed(&["x", "y"], &[1]);
        let w1 = w.truncate(6).embed(&["x", "y"], &[0]);
        let z1_6 = TruncSeries::var(&r, &["x", "y"], 6, 0);
        let z2_6 = TruncSeries::var(&r, &["x", "y"], 6, 1);
        let slope = (&w2 - &w1).exact_divide(&(&z2_6 - &z1_6)).unwrap();
        assert_eq!(slope.order(), 5);
        let lead = &(&(&z1 * &z1) + &(&z1 * &z2)) + &(&z2 * &z2);
        assert_eq!(slope.homogeneous_part(2), lead);
        assert_eq!(w.coefficient(&[4]), MultiPoly::var(&r, "a1").unwrap());
    }

    #[test]
    fn weights_are_homogeneous() {
        let g = universal_elliptic_fgl(9).unwrap();
        assert!(check_weights(g.law.series()).is_ok());
    }

    #[test]
    fn discriminant_examples() {
        let q = Ring::rationals();
        let k = |n| MultiPoly::from_i64(&q, n);
        assert_eq!(discriminant_of(&[k(0), k(0), k(0), k(1), k(0)]), k(-64));
        assert!(discriminant_of(&[k(0), k(0), k(0), k(0), k(0)]).is_zero());
        let f5 = Ring::prime_field(5).unwrap();
        let w = WeierstrassModel::parse(&f5, "t", ["0", "3*t^2", "0", "0", "4*t^10 + 3*t^6 + 4*t^2"]).unwrap();
        let d = discriminant(&w);
        assert_eq!(d.t_adic_valuation, Some(4));
        let expected = parse_poly(
            w.ring(),
            "t^4*(t+1)^2*(t+2)^2*(t+3)^2*(t+4)^2*(t^2+2)^2*(t^2+3)^2",
        )
        .unwrap();
        let ratio = d.delta.leading_term().unwrap().1.clone();
        assert_eq!(d.delta, expected.scale(&ratio));
        let report = validate_k3(&w);
        assert!(report.is_k3_shape && report.is_minimal_hint);
        assert_eq!(report.excess, vec![6]);
        let flat = WeierstrassModel::parse(&f5, "t", ["1", "1", "0", "2", "3"]).unwrap();
        assert!(!validate_k3(&flat).is_k3_shape);
    }

    #[test]
    fn quartic_char5_law_has_no_odd_terms() {
        let f5 = Ring::prime_field(5).unwrap();
        let w = WeierstrassModel::parse(&f5, "t", ["0", "3*t^2", "0", "0", "4*t^10 + 3*t^6 + 4*t^2"]).unwrap();
        let g = specialize(&w, 9).unwrap();
        for (m, _) in g.law.series().terms() {
            assert_eq!(m.degree() % 2, 1, "even-degree term needs a1 or a3");
        }
        let direct = weierstrass_fgl(w.coeffs(), 9).unwrap();
        assert_eq!(direct, g);
    }
}
