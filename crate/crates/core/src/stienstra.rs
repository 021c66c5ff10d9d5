//! Logarithms of formal Brauer groups from Stienstra's coefficient formulas.
//!
//! For a K3 complete intersection cut out by `f_1, ..., f_{n-2}` in `P^n` the
//! logarithm is `sum beta_m t^m / m` with `beta_m` the coefficient of
//! `(x_0 ... x_n)^(m-1)` in `(f_1 ... f_{n-2})^(m-1)`. For a double plane
//! `w^2 = f` with `f` a sextic, `beta_m` vanishes for even `m` and is the
//! coefficient of `(x_0 x_1 x_2)^(m-1)` in `f^((m-1)/2)` for odd `m`.

use std::thread;

use rustc_hash::FxHashMap;

use crate::algebra::{Accumulator, AlgebraError, Mono, MultiPoly, Ring, ScalarRing};
use crate::fgl::{self, FglError, FormalGroupLaw};
use crate::series::TruncSeries;

const MAX_COORDS: usize = 6;

type CoordExp = [u16; MAX_COORDS];

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StienstraError {
    #[error("degree condition violated: {0}")]
    Degree(String),
    #[error("coefficient ring must be Z or Q based: {0}")]
    NotFlat(String),
    #[error("coefficient {coeff} of {monomial} is not {p}-integral")]
    NonIntegral { p: u64, monomial: String, coeff: String },
    #[error(transparent)]
    Fgl(#[from] FglError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A polynomial split into coordinate monomials with coefficients in the
/// parameter ring.
#[derive(Clone, Debug)]
struct Split {
    ncoords: usize,
    terms: Vec<(CoordExp, MultiPoly)>,
}

impl Split {
    fn new(f: &MultiPoly, coord_idx: &[usize], params: &Ring) -> Split {
        let ring = f.ring();
        let param_idx: Vec<usize> = (0..ring.nvars()).filter(|i| !coord_idx.contains(i)).collect();
        let mut grouped: FxHashMap<CoordExp, Vec<(Mono, crate::algebra::Scalar)>> = FxHashMap::default();
        for (m, c) in f.terms() {
            let mut e = [0u16; MAX_COORDS];
            for (k, &i) in coord_idx.iter().enumerate() {
                e[k] = m.exp(i) as u16;
            }
            let pe: Vec<i32> = param_idx.iter().map(|&i| m.exp(i)).collect();
            grouped.entry(e).or_default().push((Mono::from_exps(&pe), c.clone()));
        }
        let mut terms: Vec<(CoordExp, MultiPoly)> =
            grouped.into_iter().map(|(e, ts)| (e, MultiPoly::from_terms(params, ts))).collect();
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Split { ncoords: coord_idx.len(), terms }
    }

    fn max_degrees(&self) -> CoordExp {
        let mut d = [0u16; MAX_COORDS];
        for (e, _) in &self.terms {
            for j in 0..self.ncoords {
                d[j] = d[j].max(e[j]);
            }
        }
        d
    }

    /// Coefficient of `(x_0 ... x_n)^target` in `self^k`, pruning partial
    /// products that can no longer reach the target.
    fn diagonal_coefficient(&self, k: u32, target: u16, params: &Ring) -> MultiPoly {
        let maxdeg = self.max_degrees();
        let nc = self.ncoords;
        let mut state: FxHashMap<CoordExp, MultiPoly> = FxHashMap::default();
        state.insert([0; MAX_COORDS], MultiPoly::one(params));
        for step in 0..k {
            let remaining = k - step - 1;
            let mut next: FxHashMap<CoordExp, Accumulator> = FxHashMap::default();
            for (e, c) in &state {
                'terms: for (fe, fc) in &self.terms {
                    let mut ne = [0u16; MAX_COORDS];
                    for j in 0..nc {
                        let v = e[j] + fe[j];
                        if v > target || (v as u32) + (maxdeg[j] as u32) * remaining < target as u32 {
                            continue 'terms;
                        }
                        ne[j] = v;
                    }
                    next.entry(ne).or_insert_with(|| Accumulator::new(params)).add_product(c, fc);
                }
            }
            state = next
                .into_iter()
                .map(|(e, a)| (e, a.finish(params)))
                .filter(|(_, c)| !c.is_zero())
                .collect();
        }
        let mut t = [0u16; MAX_COORDS];
        for v in t.iter_mut().take(nc) {
            *v = target;
        }
        state.remove(&t).unwrap_or_else(|| MultiPoly::zero(params))
    }
}

fn coordinate_indices(ring: &Ring, coords: &[&str]) -> Result<Vec<usize>, AlgebraError> {
    coords.iter().map(|c| ring.var_index(c).ok_or_else(|| AlgebraError::UnknownVariable(c.to_string()))).collect()
}

fn parameter_ring(ring: &Ring, coords: &[&str]) -> Result<Ring, AlgebraError> {
    let mut r = ring.clone();
    for c in coords {
        r = r.drop_var(c)?;
    }
    Ok(r)
}

fn check_flat(ring: &Ring) -> Result<(), StienstraError> {
    match ring.scalars() {
        ScalarRing::Integers | ScalarRing::Rationals => Ok(()),
        other => Err(StienstraError::NotFlat(other.name())),
    }
}

/// K3 surface cut out by `n - 2` homogeneous polynomials in `P^n`.
#[derive(Clone, Debug)]
pub struct CompleteIntersectionK3 {
    ring: Ring,
    params: Ring,
    coords: Vec<String>,
    polys: Vec<MultiPoly>,
    product: Split,
}

impl CompleteIntersectionK3 {
    /// `ring` holds the coordinates `coords` (n + 1 of them) and any
    /// parameters.
    pub fn new(ring: &Ring, coords: &[&str], polys: Vec<MultiPoly>) -> Result<CompleteIntersectionK3, StienstraError> {
        check_flat(ring)?;
        let n = coords.len().saturating_sub(1);
        if !(3..=5).contains(&n) {
            return Err(StienstraError::Degree(format!("ambient P^{n} not in P^3..P^5")));
        }
        if polys.len() != n - 2 {
            return Err(StienstraError::Degree(format!("{} equations in P^{n}, expected {}", polys.len(), n - 2)));
        }
        let idx = coordinate_indices(ring, coords)?;
        let mut total = 0;
        for (i, f) in polys.iter().enumerate() {
            if f.ring() != ring {
                return Err(AlgebraError::RingMismatch.into());
            }
            let d = f
                .homogeneous_degree_in(&idx)
                .ok_or_else(|| StienstraError::Degree(format!("f_{} is not homogeneous", i + 1)))?;
            total += d;
        }
        if total != n as i32 + 1 {
            return Err(StienstraError::Degree(format!("degrees sum to {total}, expected {}", n + 1)));
        }
        let params = parameter_ring(ring, coords)?;
        let prod = polys.iter().fold(MultiPoly::one(ring), |acc, f| &acc * f);
        let product = Split::new(&prod, &idx, &params);
        Ok(CompleteIntersectionK3 {
            ring: ring.clone(),
            params,
            coords: coords.iter().map(|s| s.to_string()).collect(),
            polys,
            product,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }
}

/// Double cover `w^2 = f` of `P^2` branched along a sextic.
#[derive(Clone, Debug)]
pub struct DoublePlaneK3 {
    ring: Ring,
    params: Ring,
    coords: Vec<String>,
    sextic: MultiPoly,
    split: Split,
}

impl DoublePlaneK3 {
    pub fn new(ring: &Ring, coords: &[&str], sextic: MultiPoly) -> Result<DoublePlaneK3, StienstraError> {
        check_flat(ring)?;
        if coords.len() != 3 {
            return Err(StienstraError::Degree(format!("{} coordinates, expected 3", coords.len())));
        }
        if sextic.ring() != ring {
            return Err(AlgebraError::RingMismatch.into());
        }
        let idx = coordinate_indices(ring, coords)?;
        match sextic.homogeneous_degree_in(&idx) {
            Some(6) => {}
            Some(d) => return Err(StienstraError::Degree(format!("branch curve has degree {d}, expected 6"))),
            None => return Err(StienstraError::Degree("branch curve is not homogeneous".into())),
        }
        let params = parameter_ring(ring, coords)?;
        let split = Split::new(&sextic, &idx, &params);
        Ok(DoublePlaneK3 {
            ring: ring.clone(),
            params,
            coords: coords.iter().map(|s| s.to_string()).collect(),
            sextic,
            split,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn sextic(&self) -> &MultiPoly {
        &self.sextic
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }
}

#[derive(Clone, Debug)]
pub enum StienstraSurface {
    CompleteIntersection(CompleteIntersectionK3),
    DoublePlane(DoublePlaneK3),
}

impl From<CompleteIntersectionK3> for StienstraSurface {
    fn from(x: CompleteIntersectionK3) -> Self {
        StienstraSurface::CompleteIntersection(x)
    }
}

impl From<DoublePlaneK3> for StienstraSurface {
    fn from(x: DoublePlaneK3) -> Self {
        StienstraSurface::DoublePlane(x)
    }
}

impl StienstraSurface {
    /// The ring `K` of the coefficients `beta_m` (the coordinates removed).
    pub fn parameter_ring(&self) -> &Ring {
        match self {
            StienstraSurface::CompleteIntersection(x) => &x.params,
            StienstraSurface::DoublePlane(x) => &x.params,
        }
    }

    /// `beta_m` over `K`, no division involved.
    pub fn beta(&self, m: u32) -> MultiPoly {
        assert!(m >= 1);
        match self {
            StienstraSurface::CompleteIntersection(x) => {
                x.product.diagonal_coefficient(m - 1, (m - 1) as u16, &x.params)
            }
            StienstraSurface::DoublePlane(x) => {
                if m.is_multiple_of(2) {
                    MultiPoly::zero(&x.params)
                } else {
                    x.split.diagonal_coefficient((m - 1) / 2, (m - 1) as u16, &x.params)
                }
            }
        }
    }

    /// `[beta_1, ..., beta_M]`, computed in parallel.
    pub fn betas(&self, m_max: u32) -> Vec<MultiPoly> {
        let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(m_max.max(1) as usize);
        let mut out: Vec<Option<MultiPoly>> = vec![None; m_max as usize];
        thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    s.spawn(move || {
                        // largest indices first to balance the load
                        (1..=m_max)
                            .rev()
                            .skip(w)
                            .step_by(workers)
                            .map(|m| (m, self.beta(m)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (m, b) in h.join().expect("beta worker panicked") {
                    out[(m - 1) as usize] = Some(b);
                }
            }
        });
        out.into_iter().map(|b| b.expect("every index computed")).collect()
    }

    /// `K` with rational scalars.
    pub fn rational_ring(&self) -> Result<Ring, StienstraError> {
        Ok(self.parameter_ring().with_scalars(ScalarRing::Rationals)?)
    }
}

/// `sum_{m=1}^{M} beta_m t^m / m` over `ring` (which must contain `Q`), of
/// order `M + 1`.
pub fn log_from_betas(betas: &[MultiPoly], ring: &Ring) -> Result<TruncSeries, StienstraError> {
    let sc = ring.scalars();
    let mut coeffs = vec![MultiPoly::zero(ring)];
    for (i, b) in betas.iter().enumerate() {
        let m = i as i64 + 1;
        let inv = sc.inv(&sc.from_i64(m)).ok_or_else(|| StienstraError::NotFlat(format!("1/{m} not in {}", sc.name())))?;
        let b = if b.ring() == ring { b.clone() } else { b.map_scalars(ring)? };
        coeffs.push(b.scale(&inv));
    }
    Ok(TruncSeries::from_coeffs(ring, "t", betas.len() as u32 + 1, coeffs))
}

/// Logarithm of a complete intersection up to `t^M`.
pub fn ci_log(x: &CompleteIntersectionK3, m_max: u32) -> Result<TruncSeries, StienstraError> {
    let s = StienstraSurface::CompleteIntersection(x.clone());
    log_from_betas(&s.betas(m_max), &s.rational_ring()?)
}

/// Logarithm of a double plane up to `t^M`.
pub fn dp_log(x: &DoublePlaneK3, m_max: u32) -> Result<TruncSeries, StienstraError> {
    let s = StienstraSurface::DoublePlane(x.clone());
    log_from_betas(&s.betas(m_max), &s.rational_ring()?)
}

/// Raw `beta_m` list for a family with parameters.
pub fn family_log(x: &StienstraSurface, m_max: u32) -> Vec<MultiPoly> {
    x.betas(m_max)
}

/// Logarithm over `K` tensor `Q` to order `n`.
pub fn surface_log(x: &StienstraSurface, n: u32) -> Result<TruncSeries, StienstraError> {
    log_from_betas(&x.betas(n.saturating_sub(1)), &x.rational_ring()?)
}

/// The law `exp(log x + log y)` over `K` tensor `Q`.
pub fn rational_fgl(x: &StienstraSurface, n: u32) -> Result<FormalGroupLaw, StienstraError> {
    Ok(fgl::fgl_from_log(&surface_log(x, n)?)?)
}

fn check_p_integral(s: &TruncSeries, p: u64) -> Result<(), StienstraError> {
    for (m, c) in s.terms() {
        for (_, q) in c.terms() {
            if let crate::algebra::Scalar::Rat(r) = q {
                if r.denom() % p == num_bigint::BigInt::from(0) {
                    let names = s.var_names();
                    let monomial = (0..s.nvars())
                        .filter(|&i| m.exp(i) > 0)
                        .map(|i| format!("{}^{}", names[i], m.exp(i)))
                        .collect::<Vec<_>>()
                        .join("*");
                    return Err(StienstraError::NonIntegral { p, monomial, coeff: c.to_string() });
                }
            }
        }
    }
    Ok(())
}

/// The formal Brauer group law modulo `p^precision`, from the rational law.
pub fn brauer_fgl(x: &StienstraSurface, p: u64, precision: u32, n: u32) -> Result<FormalGroupLaw, StienstraError> {
    let g = rational_fgl(x, n)?;
    check_p_integral(g.series(), p)?;
    let modulus = p.checked_pow(precision).ok_or_else(|| StienstraError::NotFlat("modulus overflow".into()))?;
    let scalars = if precision == 1 { ScalarRing::prime_field(p)? } else { ScalarRing::integers_mod(modulus)? };
    let target = g.ring().with_scalars(scalars)?;
    let s = g.series().map_coefficients(&target, |c| c.map_scalars(&target)).map_err(FglError::from)?;
    Ok(fgl::validate_fgl(s)?)
}

/// `[p](x) = exp(p log x)` reduced modulo `p`, without forming the
/// two-variable law.
///
/// `ideal` optionally lists monomials in the parameters to kill first (the
/// computation then runs in `K tensor Q / ideal`), which keeps high orders
/// cheap when only residues modulo such an ideal matter.
pub fn brauer_p_series(
    x: &StienstraSurface,
    p: u64,
    n: u32,
    ideal: &[&str],
) -> Result<TruncSeries, StienstraError> {
    let mut ring = x.rational_ring()?;
    if !ideal.is_empty() {
        let gens: Result<Vec<_>, _> = ideal.iter().map(|g| crate::algebra::parse_poly(&ring, g)).collect();
        let gens = gens.map_err(|e| AlgebraError::Unsupported(e.to_string()))?;
        ring = Ring::quotient(&ring, &gens)?;
    }
    let betas: Vec<MultiPoly> = x
        .betas(n.saturating_sub(1))
        .into_iter()
        .map(|b| b.map_scalars(&ring.ambient()).map(|b| MultiPoly::from_terms(&ring, b.terms().to_vec())))
        .collect::<Result<_, _>>()?;
    let log = log_from_betas(&betas, &ring)?;
    let ps = fgl::p_series_from_log(&log, p)?;
    check_p_integral(&ps, p)?;
    Ok(fgl::reduce_series_mod_p(&ps, p)?)
}

/// Height modulo `p` from `[p]` at order `n`.
pub fn brauer_height(x: &StienstraSurface, p: u64, n: u32) -> Result<fgl::HeightResult, StienstraError> {
    Ok(fgl::height_of_p_series(brauer_p_series(x, p, n, &[])?, p)?)
}

/// Surfaces used as fixtures and in the reproduction jobs.
pub mod models {
    use super::*;
    use crate::algebra::parse_poly;

    fn ring_with(params: &[&str], coords: &[&str]) -> Ring {
        let mut vars: Vec<&str> = params.to_vec();
        vars.extend_from_slice(coords);
        Ring::poly(&Ring::integers(), &vars).expect("distinct names")
    }

    fn quartic(params: &[&str], src: &str) -> StienstraSurface {
        let coords = ["x0", "x1", "x2", "x3"];
        let r = ring_with(params, &coords);
        let f = parse_poly(&r, src).expect("valid quartic");
        CompleteIntersectionK3::new(&r, &coords, vec![f]).expect("quartic surface").into()
    }

    /// `x0^4 + x1^4 + x2^4 + x3^4` over `Z`.
    pub fn fermat_quartic() -> StienstraSurface {
        quartic(&[], "x0^4 + x1^4 + x2^4 + x3^4")
    }

    /// The quartic family over `Z[a, b]` with a single height-3 point mod 3.
    pub fn family_q() -> StienstraSurface {
        quartic(
            &["a", "b"],
            "x0^4 + x0^2*x1*x3 + x0*x1*x2^2 + x0*x3^3 + x1^4 + x2^4 + a*x1*x3^3 + b*x1*x2^2*x3",
        )
    }

    /// `w^2 = x0^6 + x1^6 + x2^6` over `Z`.
    pub fn diagonal_sextic() -> StienstraSurface {
        let coords = ["x0", "x1", "x2"];
        let r = ring_with(&[], &coords);
        let f = parse_poly(&r, "x0^6 + x1^6 + x2^6").expect("valid sextic");
        DoublePlaneK3::new(&r, &coords, f).expect("double plane").into()
    }

    /// The double-plane family `w^2 = f_{a,b}(x0, x1, x2)` over `Z[a, b]`.
    pub fn family_d() -> StienstraSurface {
        let coords = ["x0", "x1", "x2"];
        let r = ring_with(&["a", "b"], &coords);
        let f = parse_poly(
            &r,
            "-x0^6 + x0^2*x1^4 + x0*x1^5 + x1*x2^5 + x2^6 + a*x0*x1^2*x2^3 + b*x0^2*x1^2*x2^2",
        )
        .expect("valid sextic");
        DoublePlaneK3::new(&r, &coords, f).expect("double plane").into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use num_bigint::BigInt;

    fn fermat() -> StienstraSurface {
        let r = Ring::poly(&Ring::integers(), &["x0", "x1", "x2", "x3"]).unwrap();
        let f = parse_poly(&r, "x0^4 + x1^4 + x2^4 + x3^4").unwrap();
        CompleteIntersectionK3::new(&r, &["x0", "x1", "x2", "x3"], vec![f]).unwrap().into()
    }

    fn factorial(n: u32) -> BigInt {
        (1..=n).map(BigInt::from).product()
    }

    #[test]
    fn fermat_betas() {
        let x = fermat();
        let betas = x.betas(13);
        for (i, b) in betas.iter().enumerate() {
            let m = i as u32 + 1;
            let expected = if (m - 1).is_multiple_of(4) {
                let k = (m - 1) / 4;
                factorial(4 * k) / factorial(k).pow(4)
            } else {
                BigInt::from(0)
            };
            assert_eq!(b, &MultiPoly::from_bigint(x.parameter_ring(), &expected), "beta_{m}");
        }
        assert_eq!(betas[4].to_string(), "24");
        assert_eq!(betas[8].to_string(), "2520");
    }

    #[test]
    fn diagonal_sextic() {
        let r = Ring::poly(&Ring::integers(), &["x0", "x1", "x2"]).unwrap();
        let f = parse_poly(&r, "x0^6 + x1^6 + x2^6").unwrap();
        let x: StienstraSurface = DoublePlaneK3::new(&r, &["x0", "x1", "x2"], f).unwrap().into();
        let betas = x.betas(13);
        let nonzero: Vec<(usize, String)> =
            betas.iter().enumerate().filter(|(_, b)| !b.is_zero()).map(|(i, b)| (i + 1, b.to_string())).collect();
        assert_eq!(nonzero, vec![(1, "1".into()), (7, "6".into()), (13, "90".into())]);
    }

    #[test]
    fn degree_checks() {
        let r = Ring::poly(&Ring::integers(), &["x0", "x1", "x2", "x3"]).unwrap();
        let cubic = parse_poly(&r, "x0^3 + x1^3").unwrap();
        assert!(matches!(
            CompleteIntersectionK3::new(&r, &["x0", "x1", "x2", "x3"], vec![cubic]),
            Err(StienstraError::Degree(_))
        ));
        let mixed = parse_poly(&r, "x0^4 + x1").unwrap();
        assert!(CompleteIntersectionK3::new(&r, &["x0", "x1", "x2", "x3"], vec![mixed]).is_err());
        let r3 = Ring::poly(&Ring::integers(), &["x0", "x1", "x2"]).unwrap();
        let quintic = parse_poly(&r3, "x0^5 + x1^5").unwrap();
        assert!(DoublePlaneK3::new(&r3, &["x0", "x1", "x2"], quintic).is_err());
    }

    #[test]
    fn fermat_law_over_z() {
        let g = rational_fgl(&fermat(), 11).unwrap();
        assert_eq!(
            g.to_string(),
            "x + y - 24*x^4*y - 48*x^3*y^2 - 48*x^2*y^3 - 24*x*y^4 - 1944*x^8*y - 6624*x^7*y^2 - 14304*x^6*y^3 \
             - 20880*x^5*y^4 - 20880*x^4*y^5 - 14304*x^3*y^6 - 6624*x^2*y^7 - 1944*x*y^8 + O(11)"
        );
        let g5 = brauer_fgl(&fermat(), 5, 1, 11).unwrap();
        assert_eq!(fgl::p_series(&g5, 5).unwrap().to_string(), "4*x^5 + O(11)");
        let g3 = brauer_fgl(&fermat(), 3, 1, 11).unwrap();
        assert_eq!(fgl::p_series(&g3, 3).unwrap().to_string(), "0 + O(11)");
        let ps = brauer_p_series(&fermat(), 5, 11, &[]).unwrap();
        assert_eq!(ps.to_string(), "4*x^5 + O(11)");
    }

    #[test]
    fn sparse_quartic_against_expansion() {
        let r = Ring::poly(&Ring::integers(), &["x0", "x1", "x2", "x3"]).unwrap();
        let f = parse_poly(&r, "x0^4 + 2*x0*x1*x2*x3 - x1^3*x2 + x2^2*x3^2 + 3*x3^4 + x0^2*x1*x3").unwrap();
        let x: StienstraSurface =
            CompleteIntersectionK3::new(&r, &["x0", "x1", "x2", "x3"], vec![f.clone()]).unwrap().into();
        for m in 1..=5u32 {
            let full = f.pow(m - 1);
            let e = (m - 1) as i32;
            let c = full.coefficient_of(&[e, e, e, e]).unwrap();
            assert_eq!(x.beta(m), MultiPoly::constant(x.parameter_ring(), c), "m = {m}");
        }
    }
}
