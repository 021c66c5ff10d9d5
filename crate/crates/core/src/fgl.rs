//! One-dimensional formal group laws.
//!
//! A [`FormalGroupLaw`] is a truncated series `G(x, y)` that has been checked
//! for unitality, commutativity and associativity (the latter in three
//! genuine variables) up to its order.

use std::fmt;

use crate::algebra::{AlgebraError, MultiPoly, Ring, RingHom, ScalarRing};
use crate::series::{SeriesError, SeriesMono, TruncSeries};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Axiom {
    Unitality,
    Commutativity,
    Associativity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Unitality => "unitality",
            Axiom::Commutativity => "commutativity",
            Axiom::Associativity => "associativity",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FglError {
    #[error("{axiom} violated at {monomial} (degree {degree})")]
    AxiomViolated { axiom: Axiom, monomial: String, degree: u32 },
    #[error("not a formal group law shape: {0}")]
    Shape(String),
    #[error("order {order} is too small: need more than {needed}")]
    InsufficientOrder { order: u32, needed: u64 },
    #[error("leading p-series coefficient {coeff} at degree {degree} is not a unit")]
    NonUnitLeading { degree: u32, coeff: String },
    #[error("first nonzero p-series term has degree {0}, not a power of p")]
    NotPowerOfP(u32),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, PartialEq)]
pub struct FormalGroupLaw {
    series: TruncSeries,
}

impl FormalGroupLaw {
    /// Wrap a series without checking the axioms.
    pub(crate) fn trusted(series: TruncSeries) -> FormalGroupLaw {
        FormalGroupLaw { series }
    }

    pub fn additive(ring: &Ring, order: u32) -> FormalGroupLaw {
        let x = TruncSeries::var(ring, &["x", "y"], order, 0);
        let y = TruncSeries::var(ring, &["x", "y"], order, 1);
        FormalGroupLaw { series: &x + &y }
    }

    /// `x + y - xy`.
    pub fn multiplicative(ring: &Ring, order: u32) -> FormalGroupLaw {
        let x = TruncSeries::var(ring, &["x", "y"], order, 0);
        let y = TruncSeries::var(ring, &["x", "y"], order, 1);
        FormalGroupLaw { series: &(&x + &y) - &(&x * &y) }
    }

    pub fn series(&self) -> &TruncSeries {
        &self.series
    }

    pub fn into_series(self) -> TruncSeries {
        self.series
    }

    pub fn ring(&self) -> &Ring {
        self.series.ring()
    }

    pub fn order(&self) -> u32 {
        self.series.order()
    }

    pub fn coefficient(&self, i: u16, j: u16) -> MultiPoly {
        self.series.coefficient(&[i, j])
    }

    /// True when the law is literally `x + y`.
    pub fn is_additive(&self) -> bool {
        self.series.num_terms() == 2
            && self.coefficient(1, 0).is_one()
            && self.coefficient(0, 1).is_one()
    }

    pub fn truncate(&self, order: u32) -> FormalGroupLaw {
        FormalGroupLaw { series: self.series.truncate(order) }
    }

    /// One-variable series in `x` of the same ring and order.
    fn x_series(&self) -> TruncSeries {
        TruncSeries::var(self.ring(), &["x"], self.order(), 0)
    }

    /// `G(a, b)` for series `a`, `b` living in a common space.
    pub fn apply(&self, a: &TruncSeries, b: &TruncSeries) -> Result<TruncSeries, SeriesError> {
        self.series.substitute(&[a.clone(), b.clone()])
    }
}

impl fmt::Display for FormalGroupLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.series.fmt(f)
    }
}

impl fmt::Debug for FormalGroupLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormalGroupLaw({:?})", self.series)
    }
}

fn violation(series: &TruncSeries, axiom: Axiom, m: &SeriesMono) -> FglError {
    let mut parts = Vec::new();
    for (i, v) in series.vars().iter().enumerate() {
        match m.exp(i) {
            0 => {}
            1 => parts.push(v.clone()),
            e => parts.push(format!("{v}^{e}")),
        }
    }
    let monomial = if parts.is_empty() { "1".to_string() } else { parts.join("*") };
    FglError::AxiomViolated { axiom, monomial, degree: m.degree() }
}

/// First monomial (in display order) where `a` and `b` differ.
fn first_difference(a: &TruncSeries, b: &TruncSeries) -> Option<SeriesMono> {
    let d = a - b;
    let first = d.terms().next().map(|(m, _)| *m);
    first
}

/// Check the axioms for a series in two variables.
pub fn validate_fgl(series: TruncSeries) -> Result<FormalGroupLaw, FglError> {
    check_unital_commutative(&series)?;
    check_associative(&series)?;
    Ok(FormalGroupLaw { series })
}

fn check_unital_commutative(series: &TruncSeries) -> Result<(), FglError> {
    if series.nvars() != 2 {
        return Err(FglError::Shape(format!("{} series variables", series.nvars())));
    }
    let n = series.order();
    if n < 2 {
        return Err(FglError::Shape(format!("order {n} < 2")));
    }
    for (i, j) in [(1u16, 0u16), (0, 1)] {
        if !series.coefficient(&[i, j]).is_one() {
            return Err(violation(series, Axiom::Unitality, &SeriesMono::new(&[i, j])));
        }
    }
    for (m, _) in series.terms() {
        let (i, j) = (m.exp(0), m.exp(1));
        if (i == 0 || j == 0) && m.degree() != 1 {
            return Err(violation(series, Axiom::Unitality, m));
        }
    }
    for (m, c) in series.terms() {
        if &series.coefficient(&[m.exp(1), m.exp(0)]) != c {
            return Err(violation(series, Axiom::Commutativity, m));
        }
    }
    Ok(())
}

fn check_associative(series: &TruncSeries) -> Result<(), FglError> {
    let vars = ["x", "y", "z"];
    let g_xy = series.embed(&vars, &[0, 1]);
    let g_yz = series.embed(&vars, &[1, 2]);
    let ring = series.ring();
    let n = series.order();
    let x = TruncSeries::var(ring, &vars, n, 0);
    let z = TruncSeries::var(ring, &vars, n, 2);
    let left = series.substitute(&[g_xy, z])?;
    let right = series.substitute(&[x, g_yz])?;
    if let Some(m) = first_difference(&left, &right) {
        return Err(violation(&left, Axiom::Associativity, &m));
    }
    Ok(())
}

/// `log(x) = integral of 1 / (dG/dy)(x, 0)`, as a series in `t`.
pub fn logarithm(g: &FormalGroupLaw) -> Result<TruncSeries, FglError> {
    let ring = g.ring();
    let n = g.order();
    let coeffs: Vec<MultiPoly> = (0..n.saturating_sub(1)).map(|i| g.coefficient(i as u16, 1)).collect();
    let d = TruncSeries::from_coeffs(ring, "t", n - 1, coeffs);
    Ok(d.inverse()?.integrate()?)
}

/// `exp(log(x) + log(y))`, validated.
pub fn fgl_from_log(log: &TruncSeries) -> Result<FormalGroupLaw, FglError> {
    check_log_shape(log)?;
    let ring = log.ring();
    let n = log.order();
    let exp = log.reversion()?;
    let x = TruncSeries::var(ring, &["x", "y"], n, 0);
    let y = TruncSeries::var(ring, &["x", "y"], n, 1);
    let sum = &log.substitute(&[x])? + &log.substitute(&[y])?;
    validate_fgl(exp.substitute(&[sum])?)
}

fn check_log_shape(log: &TruncSeries) -> Result<(), FglError> {
    if log.nvars() != 1 {
        return Err(FglError::Shape("a logarithm is a series in one variable".into()));
    }
    if !log.coefficient(&[0]).is_zero() || !log.coefficient(&[1]).is_one() {
        return Err(FglError::Shape("a logarithm must start t + O(t^2)".into()));
    }
    Ok(())
}

/// `[p](t) = exp(p * log(t))`, as a series in `x`.
pub fn p_series_from_log(log: &TruncSeries, p: u64) -> Result<TruncSeries, FglError> {
    check_log_shape(log)?;
    let exp = log.reversion()?;
    let scaled = log.scale_scalar(&log.ring().scalars().from_i64(p as i64));
    Ok(exp.substitute(&[scaled])?.renamed(&["x"]))
}

/// The p-fold formal sum `x +_G x +_G ... +_G x`, by doubling.
pub fn p_series(g: &FormalGroupLaw, p: u64) -> Result<TruncSeries, FglError> {
    n_series(g, p)
}

/// `[n](x)` for any `n >= 0`.
pub fn n_series(g: &FormalGroupLaw, n: u64) -> Result<TruncSeries, FglError> {
    let x = g.x_series();
    let mut acc = x.like();
    for bit in (0..64 - n.leading_zeros()).rev() {
        if !acc.is_zero() {
            acc = g.apply(&acc, &acc)?;
        }
        if (n >> bit) & 1 == 1 {
            acc = if acc.is_zero() { x.clone() } else { g.apply(&acc, &x)? };
        }
    }
    Ok(acc)
}

/// Keep the terms `t^(p^k)` of a logarithm.
pub fn p_typicalize_log(log: &TruncSeries, p: u64) -> TruncSeries {
    let mut out = log.like();
    let mut q: u64 = 1;
    while q < log.order() as u64 {
        let c = log.coefficient(&[q as u16]);
        out.add_term(SeriesMono::new(&[q as u16]), c);
        q *= p;
    }
    out
}

/// Formal inverse `i(x)` with `G(x, i(x)) = 0`.
pub fn formal_inverse(g: &FormalGroupLaw) -> Result<TruncSeries, FglError> {
    let x = g.x_series();
    let mut inv = -&x;
    // each pass fixes at least one more degree since dG/dy(x, i(x)) = 1 + O(x)
    for _ in 1..g.order() {
        let defect = g.apply(&x, &inv)?;
        if defect.is_zero() {
            return Ok(inv);
        }
        inv = &inv - &defect;
    }
    if g.apply(&x, &inv)?.is_zero() {
        Ok(inv)
    } else {
        Err(FglError::Shape("formal inverse did not converge".into()))
    }
}

/// `phi^-1(G(phi(x), phi(y)))` for a coordinate change `phi(t) = u t + ...`.
pub fn change_coordinates(g: &FormalGroupLaw, phi: &TruncSeries) -> Result<FormalGroupLaw, FglError> {
    if phi.nvars() != 1 || phi.ring() != g.ring() || phi.order() != g.order() {
        return Err(FglError::Shape("coordinate change must be a one-variable series over the same ring".into()));
    }
    let ring = g.ring();
    let n = g.order();
    let x = TruncSeries::var(ring, &["x", "y"], n, 0);
    let y = TruncSeries::var(ring, &["x", "y"], n, 1);
    let inv = phi.reversion()?;
    let inner = g.apply(&phi.substitute(&[x])?, &phi.substitute(&[y])?)?;
    validate_fgl(inv.substitute(&[inner])?)
}

/// Image of the law under a ring homomorphism, validated.
pub fn base_change_hom(g: &FormalGroupLaw, h: &RingHom) -> Result<FormalGroupLaw, FglError> {
    validate_fgl(g.series.apply_hom(h)?)
}

/// Image under the map sending the named variables to the given elements of
/// `target` and every other variable to its namesake.
pub fn base_change(
    g: &FormalGroupLaw,
    target: &Ring,
    assignment: &[(&str, MultiPoly)],
) -> Result<FormalGroupLaw, FglError> {
    let h = RingHom::by_name(g.ring(), target, assignment)?;
    base_change_hom(g, &h)
}

/// The same ring with its ground ring replaced by `F_p`.
pub fn mod_p_ring(ring: &Ring, p: u64) -> Result<Ring, AlgebraError> {
    if let ScalarRing::PrimeField(q) = ring.scalars() {
        if *q == p {
            return Ok(ring.clone());
        }
    }
    ring.with_scalars(ScalarRing::prime_field(p)?)
}

/// Reduce a series modulo `p` (coefficients mapped into the `F_p` version of
/// the ring).
pub fn reduce_series_mod_p(s: &TruncSeries, p: u64) -> Result<TruncSeries, FglError> {
    let target = mod_p_ring(s.ring(), p)?;
    if &target == s.ring() {
        return Ok(s.clone());
    }
    Ok(s.map_coefficients(&target, |c| c.map_scalars(&target))?)
}

pub fn reduce_mod_p(g: &FormalGroupLaw, p: u64) -> Result<FormalGroupLaw, FglError> {
    let s = reduce_series_mod_p(&g.series, p)?;
    Ok(if &s == g.series() { g.clone() } else { validate_fgl(s)? })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Height {
    Finite(u32),
    Infinite,
    /// `[p]` vanishes below the truncation order and nothing structural
    /// decides the matter.
    Indeterminate { order: u32 },
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(h) => write!(f, "{h}"),
            Height::Infinite => f.write_str("infinite"),
            Height::Indeterminate { order } => write!(f, "indeterminate at order {order}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeightResult {
    pub value: Height,
    pub leading_unit: Option<MultiPoly>,
    /// The p-series modulo p it was read from.
    pub p_series: TruncSeries,
}

/// Height of the reduction modulo `p`, read from the first nonzero term of
/// `[p]`.
pub fn height_mod_p(g: &FormalGroupLaw, p: u64, h_max: u32) -> Result<HeightResult, FglError> {
    let needed = p.checked_pow(h_max).unwrap_or(u64::MAX);
    if (g.order() as u64) <= needed {
        return Err(FglError::InsufficientOrder { order: g.order(), needed });
    }
    let gp = reduce_mod_p(g, p)?;
    let ps = p_series(&gp, p)?;
    height_from_p_series(&gp, ps, p)
}

/// Height from an already computed p-series over a ring of characteristic `p`.
pub fn height_from_p_series(g: &FormalGroupLaw, ps: TruncSeries, p: u64) -> Result<HeightResult, FglError> {
    if ps.is_zero() && g.is_additive() {
        return Ok(HeightResult { value: Height::Infinite, leading_unit: None, p_series: ps });
    }
    height_of_p_series(ps, p)
}

/// Height read from a p-series alone; a vanishing series is indeterminate.
pub fn height_of_p_series(ps: TruncSeries, p: u64) -> Result<HeightResult, FglError> {
    let Some((m, c)) = ps.terms().next().map(|(m, c)| (*m, c.clone())) else {
        return Ok(HeightResult { value: Height::Indeterminate { order: ps.order() }, leading_unit: None, p_series: ps });
    };
    let d = m.degree();
    let h = power_of(d as u64, p).ok_or(FglError::NotPowerOfP(d))?;
    if c.inverse().is_none() {
        return Err(FglError::NonUnitLeading { degree: d, coeff: c.to_string() });
    }
    Ok(HeightResult { value: Height::Finite(h), leading_unit: Some(c), p_series: ps })
}

/// `k` with `n = p^k`.
pub fn power_of(n: u64, p: u64) -> Option<u32> {
    let mut q = 1u64;
    let mut k = 0;
    while q < n {
        q = q.checked_mul(p)?;
        k += 1;
    }
    (q == n).then_some(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    fn xy(ring: &Ring, n: u32) -> (TruncSeries, TruncSeries) {
        (TruncSeries::var(ring, &["x", "y"], n, 0), TruncSeries::var(ring, &["x", "y"], n, 1))
    }

    #[test]
    fn validation_examples() {
        let z = Ring::integers();
        let (x, y) = xy(&z, 6);
        assert!(validate_fgl(&x + &y).is_ok());
        assert!(validate_fgl(&(&x + &y) - &(&x * &y)).is_ok());
        let err = validate_fgl(&(&x + &y) + &(&x * &x)).unwrap_err();
        assert_eq!(err, FglError::AxiomViolated { axiom: Axiom::Unitality, monomial: "x^2".into(), degree: 2 });
        // x + y + xy^2 + x^2y is unital and commutative but not associative
        let bad = &(&(&x + &y) + &(&x * &(&y * &y))) + &(&(&x * &x) * &y);
        let err = validate_fgl(bad).unwrap_err();
        assert!(matches!(err, FglError::AxiomViolated { axiom: Axiom::Associativity, .. }), "{err}");
        let skew = &(&x + &y) + &(&(&x * &x) * &y);
        assert!(matches!(validate_fgl(skew), Err(FglError::AxiomViolated { axiom: Axiom::Commutativity, .. })));
    }

    #[test]
    fn multiplicative_log_and_p_series() {
        let q = Ring::rationals();
        let g = FormalGroupLaw::multiplicative(&q, 8);
        let log = logarithm(&g).unwrap();
        assert_eq!(log.to_string(), "t + 1/2*t^2 + 1/3*t^3 + 1/4*t^4 + 1/5*t^5 + 1/6*t^6 + 1/7*t^7 + O(8)");
        assert_eq!(fgl_from_log(&log).unwrap(), g);
        // 1 - (1 - x)^3
        assert_eq!(p_series(&g, 3).unwrap().to_string(), "3*x - 3*x^2 + x^3 + O(8)");
        assert_eq!(p_series_from_log(&log, 3).unwrap(), p_series(&g, 3).unwrap());
        let add = FormalGroupLaw::additive(&q, 8);
        assert_eq!(p_series(&add, 5).unwrap().to_string(), "5*x + O(8)");
        assert_eq!(logarithm(&add).unwrap().to_string(), "t + O(8)");
    }

    #[test]
    fn heights() {
        let z = Ring::integers();
        let g = FormalGroupLaw::multiplicative(&z, 10);
        for p in [2, 3, 5, 7] {
            let h = height_mod_p(&g, p, 1).unwrap();
            assert_eq!(h.value, Height::Finite(1));
            let u = h.leading_unit.unwrap().constant_value().unwrap();
            let r = ScalarRing::prime_field(p).unwrap();
            assert!(r.is_one(&u) || r.is_one(&r.neg(&u)));
        }
        let add = FormalGroupLaw::additive(&z, 10);
        assert_eq!(height_mod_p(&add, 3, 2).unwrap().value, Height::Infinite);
        assert!(matches!(height_mod_p(&add, 3, 3), Err(FglError::InsufficientOrder { .. })));
    }

    #[test]
    fn typicalization() {
        let q = Ring::rationals();
        let coeffs: Vec<MultiPoly> = (0..10)
            .map(|m| if m == 0 { MultiPoly::zero(&q) } else { parse_poly(&q, &format!("1/{m}")).unwrap() })
            .collect();
        let log = TruncSeries::from_coeffs(&q, "t", 10, coeffs);
        assert_eq!(p_typicalize_log(&log, 2).to_string(), "t + 1/2*t^2 + 1/4*t^4 + 1/8*t^8 + O(10)");
        let t = TruncSeries::var(&q, &["t"], 10, 0);
        assert_eq!(p_typicalize_log(&t, 3), t);
    }

    #[test]
    fn inverse_and_coordinate_change() {
        let z = Ring::integers();
        let g = FormalGroupLaw::multiplicative(&z, 7);
        // x / (x - 1) = -x - x^2 - ...
        assert_eq!(formal_inverse(&g).unwrap().to_string(), "-x - x^2 - x^3 - x^4 - x^5 - x^6 + O(7)");
        let f5 = Ring::prime_field(5).unwrap();
        let g5 = reduce_mod_p(&g, 5).unwrap();
        let phi = TruncSeries::from_coeffs(
            &f5,
            "t",
            7,
            ["0", "1", "2", "0", "3"].iter().map(|c| parse_poly(&f5, c).unwrap()).collect(),
        );
        let h = change_coordinates(&g5, &phi).unwrap();
        assert_ne!(h, g5);
        assert_eq!(height_mod_p(&h, 5, 1).unwrap().value, Height::Finite(1));
    }

    #[test]
    fn base_change_reduces() {
        let src = Ring::poly(&Ring::integers(), &["a"]).unwrap();
        let (x, y) = xy(&src, 5);
        let a = MultiPoly::var(&src, "a").unwrap();
        let g = validate_fgl(&(&x + &y) + &(&x * &y).scale(&a)).unwrap();
        let f3 = Ring::prime_field(3).unwrap();
        let g3 = base_change(&g, &f3, &[("a", MultiPoly::from_i64(&f3, 4))]).unwrap();
        assert_eq!(g3.to_string(), "x + y + x*y + O(5)");
        let same = base_change(&g, &src, &[]).unwrap();
        assert_eq!(same, g);
    }
}
