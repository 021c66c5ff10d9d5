//! Artin's coboundary elimination for elliptic K3 surfaces, and the
//! characteristic-2 height criterion.
//!
//! The loop starts from `F = x/t +_E y/t` and repeatedly subtracts (in the
//! elliptic law `E`) the parts of `F` whose `t`-degree is not `-1`, until
//! `tF(x, y)` has coefficients in the base field.
//!
//! Representation. Write `u = x/t`. A term `t^e x^i y^j` becomes
//! `t^(e+i+j) u^i v^j`, and every quantity in the loop has a nonnegative
//! exponent `w = e + i + j` because `E` and its inverse have coefficients in
//! `k[t]`. These exponents add under every operation, so terms with
//! `w >= N - 1` can never feed a term `t^-1 x^i y^j` with `i + j < N`. The
//! loop therefore runs over `k[t]/(t^(N-1))` with no Laurent variable, and a
//! term is "good" exactly when `w = i + j - 1`.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{AlgebraError, Mono, MultiPoly, Ring, RingHom};
use crate::elliptic::{self, EllipticError, EllipticFormalGroup, WeierstrassModel, MAX_UNIVERSAL_ORDER};
use crate::fgl::{self, FglError, FormalGroupLaw};
use crate::series::{SeriesError, SeriesMono, TruncSeries};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ArtinError {
    #[error("truncation order {0} is too small")]
    Order(u32),
    #[error("not an elliptic K3 model: {0}")]
    NotK3(String),
    #[error("no convergence after {iterations} iterations: {residual} terms of t-degree != -1 remain, lowest in degree {degree}")]
    IterationLimit { iterations: u32, degree: u32, residual: usize },
    #[error("iteration {iteration} made no progress: lowest bad degree {degree} did not increase")]
    Stalled { iteration: u32, degree: u32 },
    #[error("F(x, 0) != x/t after iteration {0}")]
    Unitality(u32),
    #[error("characteristic-2 normalization violated: {0}")]
    Normalization(String),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Fgl(#[from] FglError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Outcome of the elimination loop.
#[derive(Clone, Debug, PartialEq)]
pub struct ArtinReport {
    /// `tF(x, y)` over the base ring, validated.
    pub law: FormalGroupLaw,
    pub iterations: u32,
    /// Lowest total degree of a bad term before each iteration.
    pub bad_degrees: Vec<u32>,
}

/// Same, for the one-variable route: `[n]` of the Brauer law.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesReport {
    pub series: TruncSeries,
    pub iterations: u32,
    pub bad_degrees: Vec<u32>,
}

/// The elliptic law transported to `base[t]/(t^(N-1))`.
struct Weighted {
    base: Ring,
    t: usize,
    group: EllipticFormalGroup,
}

impl Weighted {
    /// `(good, plus, minus)` parts of a series.
    fn split(&self, f: &TruncSeries) -> (TruncSeries, TruncSeries, TruncSeries) {
        let mut parts = [f.like(), f.like(), f.like()];
        let ring = f.ring();
        for (m, c) in f.terms() {
            let target = m.degree() as i32 - 1;
            let mut buckets: [Vec<_>; 3] = Default::default();
            for (mono, s) in c.terms() {
                let w = mono.exp(self.t);
                let k = match w.cmp(&target) {
                    std::cmp::Ordering::Equal => 0,
                    std::cmp::Ordering::Greater => 1,
                    std::cmp::Ordering::Less => 2,
                };
                buckets[k].push((*mono, s.clone()));
            }
            for (k, b) in buckets.into_iter().enumerate() {
                if !b.is_empty() {
                    parts[k].add_term(*m, MultiPoly::from_sorted(ring, b));
                }
            }
        }
        let [g, p, n] = parts;
        (g, p, n)
    }

    /// `f -_E plus -_E minus`.
    fn eliminate(&self, f: &TruncSeries, plus: &TruncSeries, minus: &TruncSeries) -> Result<TruncSeries, ArtinError> {
        let law = &self.group.law;
        let b = law.apply(plus, minus)?;
        let neg = self.group.inverse.substitute(std::slice::from_ref(&b))?;
        Ok(law.apply(f, &neg)?)
    }

    /// Read off `t^(i+j-1) u^i v^j -> x^i y^j` over the base ring.
    fn harvest(&self, f: &TruncSeries) -> TruncSeries {
        let mut out = TruncSeries::zero(&self.base, &f.var_names(), f.order());
        for (m, c) in f.terms() {
            let target = m.degree() as i32 - 1;
            let terms: Vec<(Mono, _)> = c
                .terms()
                .iter()
                .filter(|(mono, _)| mono.exp(self.t) == target)
                .map(|(mono, s)| (mono.with_exp(self.t, 0), s.clone()))
                .collect();
            if !terms.is_empty() {
                out.add_term(*m, MultiPoly::from_terms(&self.base, terms));
            }
        }
        out
    }

    /// Run the loop on `f` until every term is good.
    fn reduce(
        &self,
        mut f: TruncSeries,
        max_iter: u32,
        check_unit: bool,
    ) -> Result<(TruncSeries, u32, Vec<u32>), ArtinError> {
        let mut iterations = 0;
        let mut bad_degrees = Vec::new();
        loop {
            let (_, plus, minus) = self.split(&f);
            let degree = match (plus.valuation(), minus.valuation()) {
                (None, None) => return Ok((f, iterations, bad_degrees)),
                (a, b) => a.into_iter().chain(b).min().expect("some bad term"),
            };
            if let Some(&last) = bad_degrees.last() {
                if degree <= last {
                    return Err(ArtinError::Stalled { iteration: iterations, degree });
                }
            }
            if iterations >= max_iter {
                let residual = plus.num_terms() + minus.num_terms();
                return Err(ArtinError::IterationLimit { iterations, degree, residual });
            }
            bad_degrees.push(degree);
            f = self.eliminate(&f, &plus, &minus)?;
            iterations += 1;
            if check_unit && !is_unital(&f) {
                return Err(ArtinError::Unitality(iterations));
            }
        }
    }
}

/// `F(u, 0) = u`.
fn is_unital(f: &TruncSeries) -> bool {
    f.terms().filter(|(m, _)| m.exp(1) == 0).all(|(m, c)| m.exp(0) == 1 && c.is_one())
}

fn check_order(n: u32) -> Result<(), ArtinError> {
    if n < 3 {
        return Err(ArtinError::Order(n));
    }
    Ok(())
}

/// `base/(extra)[t]/(t^(n-1))` and the map from the ring of `source`.
fn weighted_ring(source: &Ring, t: &str, n: u32, extra: &[MultiPoly]) -> Result<(Ring, Ring, RingHom), ArtinError> {
    if source.quotient_basis().is_some() || source.laurent_var().is_some() {
        return Err(AlgebraError::Unsupported("expected a polynomial ring over the base".into()).into());
    }
    let base = source.drop_var(t)?;
    let base_q = if extra.is_empty() { base } else { Ring::quotient(&base, extra)? };
    let r0 = Ring::poly(&base_q, &[t])?;
    let tn = MultiPoly::var(&r0, t)?.pow(n - 1);
    let ring = Ring::quotient(&r0, &[tn])?;
    let images: Result<Vec<_>, _> = source.vars().iter().map(|v| MultiPoly::var(&ring, v)).collect();
    let h = RingHom::new(source, &ring, images?)?;
    Ok((ring, base_q, h))
}

fn require_prime_characteristic(ring: &Ring) -> Result<u64, ArtinError> {
    let p = ring.characteristic();
    if p == 0 || !crate::algebra::is_prime(p) {
        return Err(AlgebraError::Unsupported(format!("coefficients must have prime characteristic, got {p}")).into());
    }
    Ok(p)
}

fn require_k3(w: &WeierstrassModel) -> Result<(), ArtinError> {
    let report = elliptic::validate_k3(w);
    if !report.within_bounds {
        return Err(ArtinError::NotK3(format!("degrees {:?} exceed deg a_i <= 2i", report.degrees)));
    }
    if report.excess.is_empty() {
        return Err(ArtinError::NotK3("every deg a_i <= i (rational or trivial fibration)".into()));
    }
    if report.delta_valuation.is_none() {
        return Err(ArtinError::NotK3("discriminant vanishes".into()));
    }
    Ok(())
}

/// The elliptic law of `w` over `base/(extra)[t]/(t^(n-1))`.
fn weighted_for_model(w: &WeierstrassModel, n: u32, extra: &[MultiPoly]) -> Result<Weighted, ArtinError> {
    let (ring, base, h) = weighted_ring(w.ring(), w.t_name(), n, extra)?;
    let t = ring.var_index(w.t_name()).expect("t survives");
    let group = if n <= MAX_UNIVERSAL_ORDER {
        elliptic::specialize(w, n)?.apply_hom(&h)?
    } else {
        let mut coeffs = Vec::with_capacity(5);
        for c in w.coeffs() {
            coeffs.push(h.apply(c)?);
        }
        let coeffs: [MultiPoly; 5] = coeffs.try_into().expect("five coefficients");
        let (g, inverse) = elliptic::weierstrass_law_unchecked(&coeffs, n)?;
        let law = FormalGroupLaw::trusted(g);
        let x = TruncSeries::var(&ring, &["x"], n, 0);
        if !law.apply(&x, &inverse)?.is_zero() {
            return Err(EllipticError::Inverse.into());
        }
        EllipticFormalGroup { law, inverse }
    };
    Ok(Weighted { base, t, group })
}

/// Artin's algorithm on a precomputed elliptic law over `k[t]`.
pub fn artin_reduce(g: &EllipticFormalGroup, t: &str, n: u32, max_iter: u32) -> Result<ArtinReport, ArtinError> {
    check_order(n)?;
    require_prime_characteristic(g.law.ring())?;
    if g.law.order() < n {
        return Err(ArtinError::Order(g.law.order()));
    }
    let (ring, base, h) = weighted_ring(g.law.ring(), t, n, &[])?;
    let t = ring.var_index(t).expect("t survives");
    let g = EllipticFormalGroup { law: g.law.truncate(n), inverse: g.inverse.truncate(n) };
    let weighted = Weighted { base, t, group: g.apply_hom(&h)? };
    run_bivariate(&weighted, max_iter)
}

fn run_bivariate(weighted: &Weighted, max_iter: u32) -> Result<ArtinReport, ArtinError> {
    let start = weighted.group.law.series().clone();
    if weighted.group.law.is_additive() {
        return Err(ArtinError::NotK3("the elliptic law is additive".into()));
    }
    let (f, iterations, bad_degrees) = weighted.reduce(start, max_iter, true)?;
    let law = fgl::validate_fgl(weighted.harvest(&f))?;
    Ok(ArtinReport { law, iterations, bad_degrees })
}

/// The formal Brauer group law of the elliptic K3 surface `w` modulo degree
/// `n`, over the ring of `w` without `t`.
pub fn artin_brauer_law(w: &WeierstrassModel, n: u32, max_iter: u32) -> Result<ArtinReport, ArtinError> {
    check_order(n)?;
    require_prime_characteristic(w.ring())?;
    require_k3(w)?;
    let weighted = weighted_for_model(w, n, &[])?;
    run_bivariate(&weighted, max_iter)
}

/// [`artin_brauer_law`] with the default iteration bound `2n`, for models
/// whose coefficients involve parameters.
pub fn artin_family(w: &WeierstrassModel, n: u32) -> Result<ArtinReport, ArtinError> {
    artin_brauer_law(w, n, 2 * n)
}

/// `[p]` of the Brauer law, computed by running the loop on the single
/// cocycle `[p]_E(x/t)` instead of the two-variable law. Coefficients are
/// taken modulo the base ideal `extra` (given over the base ring).
pub fn artin_p_series(
    w: &WeierstrassModel,
    p: u64,
    n: u32,
    extra: &[MultiPoly],
    max_iter: u32,
) -> Result<SeriesReport, ArtinError> {
    check_order(n)?;
    let ch = require_prime_characteristic(w.ring())?;
    if ch != p {
        return Err(AlgebraError::Unsupported(format!("prime {p} differs from the characteristic {ch}")).into());
    }
    require_k3(w)?;
    let weighted = weighted_for_model(w, n, extra)?;
    let start = fgl::p_series(&weighted.group.law, p)?;
    let (f, iterations, bad_degrees) = weighted.reduce(start, max_iter, false)?;
    Ok(SeriesReport { series: weighted.harvest(&f), iterations, bad_degrees })
}

/// The misreading that keeps the `t^-1` terms of `x/t +_E y/t` and stops.
/// The result is generally not a formal group law; it exists only to show
/// that validation rejects it.
pub fn shortcut_series(w: &WeierstrassModel, n: u32) -> Result<TruncSeries, ArtinError> {
    check_order(n)?;
    let weighted = weighted_for_model(w, n, &[])?;
    Ok(weighted.harvest(weighted.group.law.series()))
}

/// Lower bound on the height from the characteristic-2 criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Char2Bound {
    One,
    AtLeast2,
    AtLeast3,
    AtLeast4,
}

impl Char2Bound {
    /// The height is at least this.
    pub fn lower_bound(self) -> u32 {
        match self {
            Char2Bound::One => 1,
            Char2Bound::AtLeast2 => 2,
            Char2Bound::AtLeast3 => 3,
            Char2Bound::AtLeast4 => 4,
        }
    }
}

impl fmt::Display for Char2Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Char2Bound::One => write!(f, "h=1"),
            Char2Bound::AtLeast2 => write!(f, "h>=2"),
            Char2Bound::AtLeast3 => write!(f, "h>=3"),
            Char2Bound::AtLeast4 => write!(f, "h>=4"),
        }
    }
}

/// Monomials `a_{i,j}` of the degree-4 condition, one product per entry.
const H4_CONDITION: &[&[(u32, u32)]] = &[
    &[(1, 0), (1, 0), (1, 0), (4, 7)],
    &[(1, 0), (1, 0), (4, 5)],
    &[(1, 0), (3, 1), (3, 6)],
    &[(1, 0), (3, 2), (3, 5)],
    &[(1, 0), (4, 3)],
    &[(1, 0), (6, 7)],
    &[(3, 0), (3, 5)],
    &[(3, 0), (4, 7)],
    &[(3, 1), (3, 4)],
    &[(3, 1), (4, 6)],
    &[(3, 2), (4, 5)],
    &[(3, 4), (4, 3)],
    &[(3, 5), (4, 2)],
    &[(3, 6), (4, 1)],
    &[(4, 1)],
    &[(6, 5)],
];

/// The condition polynomial for `h >= 4` evaluated over `F_2`.
pub fn char2_h4_polynomial(a: &BTreeMap<(u32, u32), u8>) -> u8 {
    let get = |k: &(u32, u32)| a.get(k).copied().unwrap_or(0) & 1;
    H4_CONDITION.iter().map(|term| term.iter().map(get).product::<u8>()).sum::<u8>() & 1
}

/// Evaluate the characteristic-2 criterion on the coefficients
/// `a_i(t) = sum_j a_{i,j} t^j` (values mod 2). Requires `a_2 = 0` and
/// `a_{1,2} = 1`.
pub fn char2_height_predicate(a: &BTreeMap<(u32, u32), u8>) -> Result<Char2Bound, ArtinError> {
    let get = |i, j| a.get(&(i, j)).copied().unwrap_or(0) & 1;
    if (0..=4).any(|j| get(2, j) != 0) {
        return Err(ArtinError::Normalization("a_2 must vanish".into()));
    }
    if get(1, 2) != 1 {
        return Err(ArtinError::Normalization("a_{1,2} must be 1".into()));
    }
    if get(1, 1) != 0 {
        return Ok(Char2Bound::One);
    }
    if get(3, 3) != 0 {
        return Ok(Char2Bound::AtLeast2);
    }
    if char2_h4_polynomial(a) != 0 {
        return Ok(Char2Bound::AtLeast3);
    }
    Ok(Char2Bound::AtLeast4)
}

/// The table `a_{i,j}` of a model over `F_2[t]`.
pub fn char2_coefficients(w: &WeierstrassModel) -> Result<BTreeMap<(u32, u32), u8>, ArtinError> {
    if w.ring().characteristic() != 2 || w.ring().nvars() != 1 {
        return Err(ArtinError::Normalization("expected a model over F_2[t]".into()));
    }
    let mut out = BTreeMap::new();
    for (k, c) in w.coeffs().iter().enumerate() {
        let i = [1, 2, 3, 4, 6][k];
        for (mono, _) in c.terms() {
            out.insert((i, mono.exp(0) as u32), 1);
        }
    }
    Ok(out)
}

/// The elliptic surfaces used as fixtures and in the reproduction jobs.
pub mod models {
    use super::*;

    /// Minimal model of the Fermat quartic over `F_5`.
    pub fn fermat_quartic_char5() -> WeierstrassModel {
        let f5 = Ring::prime_field(5).expect("prime");
        WeierstrassModel::parse(&f5, "t", ["0", "3*t^2", "0", "0", "4*t^10 + 3*t^6 + 4*t^2"]).expect("valid model")
    }

    /// `y^2 + t^2 xy = x^3 + tx` over `F_2`.
    pub fn char2_height3() -> WeierstrassModel {
        let f2 = Ring::prime_field(2).expect("prime");
        WeierstrassModel::parse(&f2, "t", ["t^2", "0", "0", "t", "0"]).expect("valid model")
    }

    /// `y^2 + (a + bt)xy + t^2 y = x^3 + (1 + t)x^2 + (1 + t^4 + t^8)x + t^7 + t^8`
    /// over `F_3[a, b]`.
    pub fn family_e() -> WeierstrassModel {
        let base = Ring::poly(&Ring::prime_field(3).expect("prime"), &["a", "b"]).expect("ring");
        WeierstrassModel::parse(&base, "t", ["a + b*t", "1 + t", "t^2", "1 + t^4 + t^8", "t^7 + t^8"])
            .expect("valid model")
    }
}

/// `SeriesMono` for `x^i y^j`, for tests and callers.
pub fn xy(i: u16, j: u16) -> SeriesMono {
    SeriesMono::new(&[i, j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::Height;

    #[test]
    fn fermat_char5_law() {
        let w = models::fermat_quartic_char5();
        let r = artin_brauer_law(&w, 11, 22).unwrap();
        assert_eq!(
            r.law.to_string(),
            "x + y + 2*x^2*y + 2*x*y^2 + 4*x^3*y^2 + 4*x^2*y^3 + x^6*y + 3*x^5*y^2 + 3*x^4*y^3 \
             + 3*x^3*y^4 + 3*x^2*y^5 + x*y^6 + x^8*y + 2*x^7*y^2 + 3*x^6*y^3 + 3*x^3*y^6 \
             + 2*x^2*y^7 + x*y^8 + O(11)"
        );
        assert!(r.iterations <= 11 / 2 + 3, "{} iterations", r.iterations);
        let h = fgl::height_mod_p(&r.law, 5, 1).unwrap();
        assert_eq!(h.value, Height::Finite(1));
        assert_eq!(h.p_series.to_string(), "4*x^5 + O(11)");
        let one_var = artin_p_series(&w, 5, 11, &[], 22).unwrap();
        assert_eq!(one_var.series, h.p_series);
    }

    #[test]
    fn char2_example_has_height_three() {
        let w = models::char2_height3();
        let r = artin_brauer_law(&w, 9, 18).unwrap();
        assert_eq!(r.law.to_string(), "x + y + x^4*y^4 + O(9)");
        let h = fgl::height_mod_p(&r.law, 2, 3).unwrap();
        assert_eq!(h.value, Height::Finite(3));
        assert_eq!(h.p_series.to_string(), "x^8 + O(9)");
        let a = char2_coefficients(&w).unwrap();
        assert_eq!(char2_height_predicate(&a).unwrap(), Char2Bound::AtLeast3);
        assert_eq!(char2_h4_polynomial(&a), 1);
    }

    #[test]
    fn char2_predicate_branches() {
        let mut a = BTreeMap::from([((1, 2), 1u8)]);
        assert_eq!(char2_height_predicate(&a).unwrap(), Char2Bound::AtLeast4);
        a.insert((3, 3), 1);
        assert_eq!(char2_height_predicate(&a).unwrap(), Char2Bound::AtLeast2);
        a.insert((1, 1), 1);
        assert_eq!(char2_height_predicate(&a).unwrap(), Char2Bound::One);
        a.insert((2, 0), 1);
        assert!(char2_height_predicate(&a).is_err());
        assert!(char2_height_predicate(&BTreeMap::new()).is_err());
    }

    #[test]
    fn asymmetric_transcription_is_rejected() {
        // the commonly quoted form of this law has 2*x^2*y^5 against 3*x^5*y^2
        let f5 = Ring::prime_field(5).unwrap();
        let r = artin_brauer_law(&models::fermat_quartic_char5(), 11, 22).unwrap();
        let mut quoted = r.law.series().clone();
        quoted.add_term(xy(2, 5), MultiPoly::from_i64(&f5, -1));
        let err = fgl::validate_fgl(quoted).unwrap_err();
        assert!(matches!(err, FglError::AxiomViolated { axiom: fgl::Axiom::Commutativity, .. }), "{err}");
    }

    #[test]
    fn shortcut_agrees_in_low_degree_then_breaks() {
        let w = models::fermat_quartic_char5();
        let low = shortcut_series(&w, 13).unwrap();
        assert_eq!(low, artin_brauer_law(&w, 13, 26).unwrap().law.into_series());
        let s = shortcut_series(&w, 17).unwrap();
        let err = fgl::validate_fgl(s).unwrap_err();
        assert!(matches!(err, FglError::AxiomViolated { axiom: fgl::Axiom::Associativity, .. }), "{err}");
    }

    #[test]
    fn constant_model_is_rejected() {
        let f5 = Ring::prime_field(5).unwrap();
        let w = WeierstrassModel::parse(&f5, "t", ["0", "0", "0", "1", "1"]).unwrap();
        assert!(matches!(artin_brauer_law(&w, 7, 14), Err(ArtinError::NotK3(_))));
    }

    #[test]
    fn precomputed_law_route_agrees() {
        let w = models::char2_height3();
        let g = elliptic::specialize(&w, 9).unwrap();
        let a = artin_reduce(&g, "t", 9, 18).unwrap();
        let b = artin_brauer_law(&w, 9, 18).unwrap();
        assert_eq!(a.law, b.law);
    }

    #[test]
    fn iteration_limit_is_reported() {
        let w = models::fermat_quartic_char5();
        let err = artin_brauer_law(&w, 11, 1).unwrap_err();
        assert!(matches!(err, ArtinError::IterationLimit { iterations: 1, .. }), "{err}");
    }
}
