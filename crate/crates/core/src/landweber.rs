//! Landweber exactness at a prime.
//!
//! The `v_n` are read off the `p`-series as the coefficients of `x^(p^n)`.
//! Regularity of `p, v_1, v_2, ...` is decided over the reduction
//! `F_p[params]`: the step `v_0 = p` holds because the bases in question are
//! torsion-free lifts, and each later step is a zero-divisor test modulo the
//! previous `v`'s. Loci are checked against the singular locus by exhibiting
//! parameter points whose fibre is smooth.

use std::fmt;

use crate::algebra::{is_zero_divisor, AlgebraError, Ideal, Mono, MultiPoly, Ring, RingHom, Scalar, ScalarRing};
use crate::artin::{self, ArtinError};
use crate::elliptic::{self, EllipticError, WeierstrassModel};
use crate::fgl::{self, FglError, FormalGroupLaw};
use crate::series::TruncSeries;
use crate::stienstra::{self, StienstraError, StienstraSurface};

/// Largest exponent tried when looking for `x^k` in an ideal.
const MAX_POWER_PROBE: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LandweberError {
    #[error("order {order} does not exceed p^h = {needed}")]
    InsufficientOrder { order: u32, needed: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("point {0} is not on the variety")]
    NotOnVariety(String),
    #[error(transparent)]
    Fgl(#[from] FglError),
    #[error(transparent)]
    Stienstra(#[from] StienstraError),
    #[error(transparent)]
    Artin(#[from] ArtinError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// One `v_n` over `F_p[params]`, known modulo the ideal `modulo` (empty when
/// it is known exactly).
#[derive(Clone, Debug, PartialEq)]
pub struct VEntry {
    pub value: MultiPoly,
    pub modulo: Vec<MultiPoly>,
}

/// `v_0 = p, v_1, ..., v_h`.
#[derive(Clone, Debug, PartialEq)]
pub struct VSequence {
    pub p: u64,
    /// `F_p[params]`, where the `v_n` for `n >= 1` live.
    pub ring: Ring,
    entries: Vec<VEntry>,
}

impl VSequence {
    pub fn new(p: u64, ring: &Ring, entries: Vec<VEntry>) -> VSequence {
        VSequence { p, ring: ring.clone(), entries }
    }

    /// Coefficients of `x^p, x^(p^2), ..., x^(p^h)` of a `p`-series over a
    /// ring of characteristic `p` (possibly a quotient, whose ideal is then
    /// recorded with every entry).
    pub fn from_p_series(ps: &TruncSeries, p: u64, h: u32) -> Result<VSequence, LandweberError> {
        let needed = p.checked_pow(h).unwrap_or(u64::MAX);
        if ps.order() as u64 <= needed {
            return Err(LandweberError::InsufficientOrder { order: ps.order(), needed });
        }
        let ring = ps.ring();
        if ring.characteristic() != p || ring.laurent_var().is_some() {
            return Err(LandweberError::Unsupported(format!("p-series over {} is not over F_{p}[params]", ring.describe())));
        }
        let ambient = ring.ambient();
        let modulo = ring.quotient_basis().map(|b| b.to_vec()).unwrap_or_default();
        let mut entries = Vec::new();
        for n in 1..=h {
            let c = ps.coefficient(&[p.pow(n) as u16]);
            let value = MultiPoly::from_terms(&ambient, c.terms().to_vec());
            entries.push(VEntry { value, modulo: modulo.clone() });
        }
        Ok(VSequence { p, ring: ambient, entries })
    }

    /// Largest `n` with a recorded `v_n`.
    pub fn height_bound(&self) -> u32 {
        self.entries.len() as u32
    }

    pub fn entries(&self) -> &[VEntry] {
        &self.entries
    }

    /// `v_n` for `n >= 1`.
    pub fn v(&self, n: u32) -> Option<&MultiPoly> {
        n.checked_sub(1).and_then(|i| self.entries.get(i as usize)).map(|e| &e.value)
    }

    pub fn push(&mut self, entry: VEntry) {
        self.entries.push(entry);
    }

    /// `(v_1, ..., v_n)` in `F_p[params]`.
    pub fn ideal(&self, n: u32) -> Result<Ideal, LandweberError> {
        let gens: Vec<MultiPoly> = self.entries.iter().take(n as usize).map(|e| e.value.clone()).collect();
        Ok(Ideal::new(&self.ring, &gens)?)
    }

    /// Normal form of `v_n` modulo `(v_1, ..., v_(n-1))`.
    pub fn reduced(&self, n: u32) -> Result<MultiPoly, LandweberError> {
        let v = self.v(n).ok_or_else(|| LandweberError::Unsupported(format!("v_{n} not computed")))?;
        Ok(self.ideal(n - 1)?.reduce(v))
    }
}

impl fmt::Display for VSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v0 = {}", self.p)?;
        for (i, e) in self.entries.iter().enumerate() {
            write!(f, ", v{} = {}", i + 1, e.value)?;
            if !e.modulo.is_empty() {
                let gs: Vec<String> = e.modulo.iter().map(|g| g.to_string()).collect();
                write!(f, " mod ({})", gs.join(", "))?;
            }
        }
        Ok(())
    }
}

/// `v_0, ..., v_h` of a law, over its reduction modulo `p`.
pub fn extract_v(g: &FormalGroupLaw, p: u64, h_max: u32) -> Result<VSequence, LandweberError> {
    let needed = p.checked_pow(h_max).unwrap_or(u64::MAX);
    if g.order() as u64 <= needed {
        return Err(LandweberError::InsufficientOrder { order: g.order(), needed });
    }
    let gp = fgl::reduce_mod_p(g, p)?;
    let ps = fgl::p_series(&gp, p)?;
    VSequence::from_p_series(&ps, p, h_max)
}

/// How the base ring relates to the reduction the `v`'s were computed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseShape {
    /// A `Q`-algebra: `p` is a unit.
    Rational,
    /// A torsion-free ring (`Z`, `Z_p`, `Z_p[a, b]`, ...) whose reduction
    /// modulo `p` is the ring of the `v`'s.
    TorsionFreeLift,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    /// `p` is a unit, so the quotient is already zero.
    Unit,
    /// Injectivity of `p` holds because the base is torsion-free.
    TorsionFree,
    /// `v_n` is a non-zero-divisor modulo the previous ones.
    Regular,
    /// `v_n` is a zero divisor modulo the previous ones.
    ZeroDivisor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub n: u32,
    pub outcome: StepOutcome,
    /// `(p, v_1, ..., v_n)` is the unit ideal.
    pub collapses: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    ExactAtP,
    FailsAt(u32),
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessVerdict {
    pub p: u64,
    pub regular_up_to: u32,
    pub unit_at: Option<u32>,
    pub verdict: Verdict,
    pub steps: Vec<Step>,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::ExactAtP => write!(f, "exact"),
            Verdict::FailsAt(n) => write!(f, "fails at v{n}"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Decide regularity of `p, v_1, ..., v_h`. Other primes `q != p` need no
/// check for `Z_p`-algebras.
pub fn regularity_check(v: &VSequence, base: BaseShape) -> Result<ExactnessVerdict, LandweberError> {
    let p = v.p;
    if base == BaseShape::Rational {
        let steps = vec![Step { n: 0, outcome: StepOutcome::Unit, collapses: true }];
        return Ok(ExactnessVerdict { p, regular_up_to: 0, unit_at: Some(0), verdict: Verdict::ExactAtP, steps });
    }
    let mut steps = vec![Step { n: 0, outcome: StepOutcome::TorsionFree, collapses: false }];
    let mut ideal = Ideal::new(&v.ring, &[])?;
    let mut regular_up_to = 0;
    for (i, e) in v.entries.iter().enumerate() {
        let n = i as u32 + 1;
        if let Some(g) = e.modulo.iter().find(|g| !ideal.contains(g)) {
            return Err(LandweberError::Unsupported(format!(
                "v{n} is only known modulo {g}, which is not in (v1, ..., v{})",
                n - 1
            )));
        }
        if is_zero_divisor(&e.value, &ideal)? {
            steps.push(Step { n, outcome: StepOutcome::ZeroDivisor, collapses: false });
            return Ok(ExactnessVerdict { p, regular_up_to, unit_at: None, verdict: Verdict::FailsAt(n), steps });
        }
        ideal = ideal.with(std::slice::from_ref(&e.value))?;
        regular_up_to = n;
        let collapses = ideal.is_unit();
        steps.push(Step { n, outcome: StepOutcome::Regular, collapses });
        if collapses {
            return Ok(ExactnessVerdict { p, regular_up_to, unit_at: Some(n), verdict: Verdict::ExactAtP, steps });
        }
    }
    Ok(ExactnessVerdict { p, regular_up_to, unit_at: None, verdict: Verdict::Inconclusive, steps })
}

fn prime_of(ring: &Ring) -> Result<u64, LandweberError> {
    match ring.scalars() {
        ScalarRing::PrimeField(p) => Ok(*p),
        other => Err(LandweberError::Unsupported(format!("expected a prime field, got {}", other.name()))),
    }
}

fn scalar_u64(sc: &ScalarRing, s: &Scalar) -> u64 {
    let p = sc.characteristic();
    let n = sc.to_integer(s).expect("prime field element");
    let r = n % num_bigint::BigInt::from(p);
    let r = if r < num_bigint::BigInt::from(0) { r + num_bigint::BigInt::from(p) } else { r };
    u64::try_from(r).expect("residue fits")
}

/// Rank of a matrix over `F_p`.
fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_multiple_of(p)) else { continue };
        rows.swap(rank, pivot);
        let inv = crate::algebra::inv_mod(rows[rank][col], p).expect("nonzero mod p");
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let factor = rows[r][col] * inv % p;
                for c in 0..ncols {
                    let sub = factor * rows[rank][c] % p;
                    rows[r][c] = (rows[r][c] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Whether the variety `f_1 = ... = f_r = 0` (a complete intersection of
/// codimension `r`) is smooth at `point`: the Jacobian there has rank `r`.
pub fn smooth_at_point(polys: &[MultiPoly], point: &[Scalar]) -> Result<bool, LandweberError> {
    let Some(first) = polys.first() else { return Ok(true) };
    let ring = first.ring();
    let p = prime_of(ring)?;
    let sc = ring.scalars();
    if point.len() != ring.nvars() {
        return Err(AlgebraError::Arity { expected: ring.nvars(), got: point.len() }.into());
    }
    let render = || point.iter().map(|s| sc.render(s)).collect::<Vec<_>>().join(", ");
    let mut rows = Vec::with_capacity(polys.len());
    for f in polys {
        if f.ring() != ring {
            return Err(AlgebraError::RingMismatch.into());
        }
        if !sc.is_zero(&f.evaluate(point)?) {
            return Err(LandweberError::NotOnVariety(format!("({})", render())));
        }
        let row: Result<Vec<u64>, AlgebraError> =
            (0..ring.nvars()).map(|i| f.derivative(i).evaluate(point).map(|v| scalar_u64(sc, &v))).collect();
        rows.push(row?);
    }
    Ok(rank_mod_p(rows, p) == polys.len())
}

/// Whether the projective hypersurface `f = 0` (in the variables of its
/// ring, over `F_p`) is smooth: on every standard chart the ideal generated
/// by `f` and its partials is the unit ideal.
pub fn hypersurface_is_smooth(f: &MultiPoly) -> Result<bool, LandweberError> {
    let ring = f.ring();
    prime_of(ring)?;
    let n = ring.nvars();
    let mut gens = vec![f.clone()];
    gens.extend((0..n).map(|i| f.derivative(i)));
    for chart in 0..n {
        let others: Vec<&str> = ring.vars().iter().enumerate().filter(|(i, _)| *i != chart).map(|(_, v)| v.as_str()).collect();
        let target = Ring::poly(&Ring::scalar(ring.scalars().clone()), &others)?;
        let images: Result<Vec<_>, _> = (0..n)
            .map(|i| if i == chart { Ok(MultiPoly::one(&target)) } else { MultiPoly::var(&target, &ring.vars()[i]) })
            .collect();
        let h = RingHom::new(ring, &target, images?)?;
        let local: Result<Vec<_>, _> = gens.iter().map(|g| h.apply(g)).collect();
        if !Ideal::new(&target, &local?)?.is_unit() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First `F_p`-point of the projective variety `f_1 = ... = f_r = 0` at
/// which it is smooth, in lexicographic order of normalized coordinates.
pub fn first_smooth_point(polys: &[MultiPoly]) -> Result<Option<Vec<i64>>, LandweberError> {
    let Some(first) = polys.first() else { return Ok(None) };
    let ring = first.ring();
    let p = prime_of(ring)?;
    let sc = ring.scalars();
    let n = ring.nvars();
    for lead in 0..n {
        for tail in points(p, n - lead - 1) {
            let mut pt = vec![0i64; lead];
            pt.push(1);
            pt.extend(tail);
            let scalars: Vec<Scalar> = pt.iter().map(|&c| sc.from_i64(c)).collect();
            let mut on = true;
            for f in polys {
                if !sc.is_zero(&f.evaluate(&scalars)?) {
                    on = false;
                    break;
                }
            }
            if on && smooth_at_point(polys, &scalars)? {
                return Ok(Some(pt));
            }
        }
    }
    Ok(None)
}

/// A family of K3 surfaces over `Z_p[params]`.
#[derive(Clone, Debug)]
pub enum Family {
    Stienstra(StienstraSurface),
    Elliptic(WeierstrassModel),
}

impl Family {
    fn params(&self) -> Result<Vec<String>, LandweberError> {
        Ok(match self {
            Family::Stienstra(x) => x.parameter_ring().vars().to_vec(),
            Family::Elliptic(w) => w.base()?.vars().to_vec(),
        })
    }

    /// The formal Brauer group law over `F_p[params]` modulo degree `n`.
    pub fn law_mod_p(&self, p: u64, n: u32) -> Result<FormalGroupLaw, LandweberError> {
        match self {
            Family::Stienstra(x) => Ok(stienstra::brauer_fgl(x, p, 1, n)?),
            Family::Elliptic(w) => Ok(artin::artin_family(w, n)?.law),
        }
    }

    /// `[p]` over `F_p[params]/(monomials)` modulo degree `n`.
    pub fn p_series_mod(&self, p: u64, n: u32, monomials: &[MultiPoly]) -> Result<TruncSeries, LandweberError> {
        match self {
            Family::Stienstra(x) => {
                let names: Vec<String> = monomials.iter().map(|m| m.to_string()).collect();
                let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
                Ok(stienstra::brauer_p_series(x, p, n, &refs)?)
            }
            Family::Elliptic(w) => {
                let base = w.base()?;
                let gens: Vec<MultiPoly> =
                    monomials.iter().map(|m| MultiPoly::from_terms(&base, m.terms().to_vec())).collect();
                Ok(artin::artin_p_series(w, p, n, &gens, 2 * n)?.series)
            }
        }
    }

    /// Defining hypersurface of the fibre over an `F_p`-point of the
    /// parameters: the quartic, or the branch sextic of a double plane.
    pub fn fibre(&self, p: u64, point: &[i64]) -> Result<MultiPoly, LandweberError> {
        let Family::Stienstra(x) = self else {
            return Err(LandweberError::Unsupported("fibre smoothness of Weierstrass families".into()));
        };
        let (ring, coords, f) = match x {
            StienstraSurface::CompleteIntersection(ci) => {
                if ci.polys().len() != 1 {
                    return Err(LandweberError::Unsupported("smoothness checks for complete intersections of codimension > 1".into()));
                }
                (ci.ring(), ci.coords(), &ci.polys()[0])
            }
            StienstraSurface::DoublePlane(dp) => {
                if p == 2 {
                    return Err(LandweberError::Unsupported("double planes in characteristic 2".into()));
                }
                (dp.ring(), dp.coords(), dp.sextic())
            }
        };
        let coord_refs: Vec<&str> = coords.iter().map(|s| s.as_str()).collect();
        let target = Ring::poly(&Ring::prime_field(p)?, &coord_refs)?;
        let params = x.parameter_ring().vars();
        let assignment: Vec<(&str, MultiPoly)> =
            params.iter().zip(point).map(|(v, &c)| (v.as_str(), MultiPoly::from_i64(&target, c))).collect();
        let h = RingHom::by_name(ring, &target, &assignment)?;
        Ok(h.apply(f)?)
    }

    fn fibre_is_smooth(&self, p: u64, point: &[i64]) -> Result<bool, LandweberError> {
        hypersurface_is_smooth(&self.fibre(p, point)?)
    }
}

/// How a locus was shown not to lie in the singular locus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A parameter point on the locus with smooth fibre.
    SmoothFibre(Vec<i64>),
    /// `v_t(Delta) <= k` for every parameter value, so no fibre degenerates
    /// at `t = 0`; the point is the first `F_p`-point of the locus.
    DiscriminantBound { k: u32, point: Vec<i64> },
    /// No `F_p`-point of the locus has a smooth fibre.
    NotFound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusCheck {
    /// Number of `v`'s cutting out the locus (0 for `(p)`).
    pub depth: u32,
    pub witness: Witness,
}

#[derive(Clone, Debug)]
pub struct ExactnessReport {
    pub p: u64,
    pub h_max: u32,
    pub params: Vec<String>,
    /// The law over `F_p[params]` at order `p^(h_max - 1) + 1`.
    pub law: FormalGroupLaw,
    pub v: VSequence,
    pub verdict: ExactnessVerdict,
    pub loci: Vec<LocusCheck>,
    /// `F_p`-points of `V(v_1, ..., v_(h_max - 1))`.
    pub top_locus_points: Vec<Vec<i64>>,
    /// `V(v_1, ..., v_(h_max - 1))` is the origin alone, over an algebraic
    /// closure.
    pub top_locus_is_origin: bool,
    pub coefficient_ring: String,
    /// Regularity at primes other than `p`: automatic for `Z_p`-algebras.
    pub other_primes: String,
}

/// All points of `F_p^n` in lexicographic order.
fn points(p: u64, n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|pt| {
                (0..p as i64).map(move |c| {
                    let mut q = pt.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

fn on_locus(vs: &[MultiPoly], point: &[i64]) -> Result<bool, LandweberError> {
    for v in vs {
        let sc = v.ring().scalars();
        let pt: Vec<Scalar> = point.iter().map(|&c| sc.from_i64(c)).collect();
        if !sc.is_zero(&v.evaluate(&pt)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For each variable, the least `k` with `x^k` in the ideal.
fn pure_powers(ideal: &Ideal) -> Option<Vec<u32>> {
    let ring = ideal.ring();
    (0..ring.nvars())
        .map(|i| {
            let x = MultiPoly::var_at(ring, i);
            (1..=MAX_POWER_PROBE).find(|&k| ideal.contains(&x.pow(k)))
        })
        .collect()
}

/// A monomial ideal of finite colength inside `ideal`, if the ideal defines
/// the origin alone.
pub fn monomial_subideal(ideal: &Ideal) -> Option<Vec<MultiPoly>> {
    let ring = ideal.ring();
    let powers = pure_powers(ideal)?;
    let mut gens: Vec<MultiPoly> = Vec::new();
    let mut exps = vec![0i32; ring.nvars()];
    // walk the box below the pure powers
    'walk: loop {
        let m = Mono::from_exps(&exps);
        let dominated = gens.iter().any(|g| g.terms()[0].0.divides(&m, None));
        if !dominated {
            let mono = MultiPoly::monomial(ring, m, ring.scalars().one());
            if ideal.contains(&mono) {
                gens.push(mono);
            }
        }
        for i in 0..exps.len() {
            exps[i] += 1;
            if exps[i] <= powers[i] as i32 {
                continue 'walk;
            }
            exps[i] = 0;
        }
        break;
    }
    Some(gens)
}

/// Full Landweber report for a two-parameter family at `p` up to height
/// `h_max` (at least 2).
pub fn exactness_report(family: &Family, p: u64, h_max: u32) -> Result<ExactnessReport, LandweberError> {
    if h_max < 2 {
        return Err(LandweberError::Unsupported("reports start at height 2".into()));
    }
    let params = family.params()?;
    let low_order = p.pow(h_max - 1) as u32 + 1;
    let top_order = p.pow(h_max) as u32 + 1;
    let law = family.law_mod_p(p, low_order)?;
    let mut v = extract_v(&law, p, h_max - 1)?;
    let lower = v.ideal(h_max - 1)?;
    let early = regularity_check(&v, BaseShape::TorsionFreeLift)?;
    let verdict = if early.verdict == Verdict::Inconclusive {
        let working = monomial_subideal(&lower);
        let top_ps = family.p_series_mod(p, top_order, working.as_deref().unwrap_or(&[]))?;
        let top = VSequence::from_p_series(&top_ps, p, h_max)?;
        let lift = |f: &MultiPoly| MultiPoly::from_terms(&v.ring, f.terms().to_vec());
        // the lower v's of both computations agree modulo the working ideal
        if let Some(gens) = &working {
            let m = Ideal::new(&v.ring, gens)?;
            for n in 1..h_max {
                let d = v.v(n).expect("computed") - &lift(top.v(n).expect("computed"));
                if !m.contains(&d) {
                    return Err(LandweberError::Unsupported(format!(
                        "v{n} disagrees between orders {low_order} and {top_order}"
                    )));
                }
            }
        }
        let last = top.entries().last().expect("h_max entries");
        v.push(VEntry { value: lift(&last.value), modulo: last.modulo.iter().map(lift).collect() });
        regularity_check(&v, BaseShape::TorsionFreeLift)?
    } else {
        early
    };

    let all_points = points(p, params.len());
    let bound = match family {
        Family::Elliptic(w) => elliptic::uniform_valuation_bound(w, 11)?,
        Family::Stienstra(_) => None,
    };
    let mut loci = Vec::new();
    for depth in 0..h_max {
        let vs: Vec<MultiPoly> = (1..=depth).map(|n| v.v(n).expect("computed").clone()).collect();
        let mut witness = Witness::NotFound;
        for pt in &all_points {
            if !on_locus(&vs, pt)? {
                continue;
            }
            match (family, bound) {
                (Family::Elliptic(_), Some(k)) => {
                    witness = Witness::DiscriminantBound { k, point: pt.clone() };
                    break;
                }
                (Family::Elliptic(_), None) => break,
                (Family::Stienstra(_), _) => {
                    if family.fibre_is_smooth(p, pt)? {
                        witness = Witness::SmoothFibre(pt.clone());
                        break;
                    }
                }
            }
        }
        loci.push(LocusCheck { depth, witness });
    }
    let top_vs: Vec<MultiPoly> = (1..h_max).map(|n| v.v(n).expect("computed").clone()).collect();
    let mut top_locus_points = Vec::new();
    for pt in &all_points {
        if on_locus(&top_vs, pt)? {
            top_locus_points.push(pt.clone());
        }
    }
    let origin = vec![0i64; params.len()];
    let top_locus_is_origin = pure_powers(&lower).is_some() && on_locus(&top_vs, &origin)?;
    let names = params.join(",");
    let localization = match family {
        Family::Elliptic(_) if bound.is_some() => String::new(),
        _ => "[Delta^-1]".to_string(),
    };
    let coefficient_ring = format!("Z_{p}[{names}]{localization}[u^+-1], |u| = 2, parameters in degree 0");
    Ok(ExactnessReport {
        p,
        h_max,
        params,
        law,
        v,
        verdict,
        loci,
        top_locus_points,
        top_locus_is_origin,
        coefficient_ring,
        other_primes: format!("q-regular for every prime q != {p}: q is a unit in a Z_{p}-algebra"),
    })
}
