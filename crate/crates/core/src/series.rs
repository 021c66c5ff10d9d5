//! Truncated power series in one to three series variables with coefficients
//! in any [`Ring`].
//!
//! A series of order `N` stores the terms of total degree `< N` in the series
//! variables; everything of degree `>= N` is unknown. Degrees in the
//! coefficient ring (for instance a Laurent variable `t`) are never truncated.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use rustc_hash::FxHashMap;

use crate::algebra::{Accumulator, AlgebraError, Mono, MultiPoly, Ring, RingHom, Scalar};

pub const MAX_SERIES_VARS: usize = 3;

/// Valuation assigned to the zero series.
const INFINITE: u32 = u32::MAX / 4;

/// Exponent vector in the series variables. Ordered by ascending total
/// degree, then descending graded reverse lexicographic order, which is the
/// display order (`x^2*y` before `x*y^2`).
#[derive(Copy, Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct SeriesMono(pub [u16; MAX_SERIES_VARS]);

impl SeriesMono {
    pub fn new(exps: &[u16]) -> SeriesMono {
        let mut m = [0u16; MAX_SERIES_VARS];
        m[..exps.len()].copy_from_slice(exps);
        SeriesMono(m)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.0[i]
    }

    fn mul(&self, o: &SeriesMono) -> SeriesMono {
        SeriesMono([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }

    fn divides(&self, o: &SeriesMono) -> bool {
        (0..MAX_SERIES_VARS).all(|i| self.0[i] <= o.0[i])
    }

    fn div(&self, o: &SeriesMono) -> SeriesMono {
        SeriesMono([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Ord for SeriesMono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for i in (0..MAX_SERIES_VARS).rev() {
                if self.0[i] != other.0[i] {
                    return self.0[i].cmp(&other.0[i]);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for SeriesMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("series mismatch: {0}")]
    Mismatch(String),
    #[error("argument has a nonzero constant term")]
    NonzeroConstant,
    #[error("not a unit: {0}")]
    NonUnit(String),
    #[error("inexact division: {0}")]
    Inexact(String),
    #[error("integer {0} is not invertible in the coefficient ring")]
    NotInvertibleInteger(u32),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone)]
pub struct TruncSeries {
    ring: Ring,
    vars: Vec<String>,
    order: u32,
    terms: BTreeMap<SeriesMono, MultiPoly>,
}

type Parts = Vec<Vec<(SeriesMono, MultiPoly)>>;

impl TruncSeries {
    pub fn zero(ring: &Ring, vars: &[&str], order: u32) -> TruncSeries {
        assert!(!vars.is_empty() && vars.len() <= MAX_SERIES_VARS, "one to three series variables");
        TruncSeries { ring: ring.clone(), vars: vars.iter().map(|s| s.to_string()).collect(), order, terms: BTreeMap::new() }
    }

    /// Zero series in the same space as `self`.
    pub fn like(&self) -> TruncSeries {
        TruncSeries { ring: self.ring.clone(), vars: self.vars.clone(), order: self.order, terms: BTreeMap::new() }
    }

    fn like_with_order(&self, order: u32) -> TruncSeries {
        TruncSeries { order, ..self.like() }
    }

    pub fn var(ring: &Ring, vars: &[&str], order: u32, i: usize) -> TruncSeries {
        let mut s = TruncSeries::zero(ring, vars, order);
        let mut e = [0u16; MAX_SERIES_VARS];
        e[i] = 1;
        s.insert(SeriesMono(e), MultiPoly::one(ring));
        s
    }

    pub fn constant(ring: &Ring, vars: &[&str], order: u32, c: MultiPoly) -> TruncSeries {
        let mut s = TruncSeries::zero(ring, vars, order);
        s.insert(SeriesMono::default(), c);
        s
    }

    /// One-variable series with `coeffs[k]` the coefficient of `var^k`.
    pub fn from_coeffs(ring: &Ring, var: &str, order: u32, coeffs: Vec<MultiPoly>) -> TruncSeries {
        let mut s = TruncSeries::zero(ring, &[var], order);
        for (k, c) in coeffs.into_iter().enumerate() {
            s.insert(SeriesMono::new(&[k as u16]), c);
        }
        s
    }

    pub fn from_terms(
        ring: &Ring,
        vars: &[&str],
        order: u32,
        terms: impl IntoIterator<Item = (SeriesMono, MultiPoly)>,
    ) -> TruncSeries {
        let mut s = TruncSeries::zero(ring, vars, order);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    /// Store a coefficient (dropping zeros and out-of-range degrees).
    fn insert(&mut self, m: SeriesMono, c: MultiPoly) {
        assert!(c.ring() == &self.ring, "coefficient ring mismatch");
        if !c.is_zero() && m.degree() < self.order {
            self.terms.insert(m, c);
        }
    }

    /// Add `c * m` to the series.
    pub fn add_term(&mut self, m: SeriesMono, c: MultiPoly) {
        if m.degree() >= self.order || c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&m) {
            Some(old) => &old + &c,
            None => c,
        };
        self.insert(m, v);
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_names(&self) -> Vec<&str> {
        self.vars.iter().map(|s| s.as_str()).collect()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SeriesMono, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u16]) -> MultiPoly {
        self.terms.get(&SeriesMono::new(exps)).cloned().unwrap_or_else(|| MultiPoly::zero(&self.ring))
    }

    /// Lowest total degree of a nonzero term.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    fn val(&self) -> u32 {
        self.valuation().unwrap_or(INFINITE)
    }

    pub fn same_space(&self, other: &TruncSeries) -> bool {
        self.ring == other.ring && self.vars == other.vars && self.order == other.order
    }

    fn check_compatible(&self, other: &TruncSeries) {
        assert!(self.ring == other.ring, "series coefficient rings differ");
        assert!(self.vars.len() == other.vars.len(), "series variable counts differ");
    }

    pub fn truncate(&self, order: u32) -> TruncSeries {
        assert!(order <= self.order, "cannot raise the truncation order");
        let mut s = self.like_with_order(order);
        s.terms = self.terms.iter().filter(|(m, _)| m.degree() < order).map(|(m, c)| (*m, c.clone())).collect();
        s
    }

    /// Rename the series variables (same count).
    pub fn renamed(&self, vars: &[&str]) -> TruncSeries {
        assert_eq!(vars.len(), self.vars.len());
        let mut s = self.clone();
        s.vars = vars.iter().map(|v| v.to_string()).collect();
        s
    }

    /// Homogeneous components by total degree, up to the order.
    fn parts(&self) -> Parts {
        let mut parts: Parts = vec![Vec::new(); self.order as usize];
        for (m, c) in &self.terms {
            parts[m.degree() as usize].push((*m, c.clone()));
        }
        parts
    }

    pub fn homogeneous_part(&self, d: u32) -> TruncSeries {
        let mut s = self.like();
        s.terms = self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (*m, c.clone())).collect();
        s
    }

    /// Product keeping only degrees below `bound`; the result order follows
    /// the precision of the factors.
    pub fn mul_bounded(&self, other: &TruncSeries, bound: u32) -> TruncSeries {
        self.check_compatible(other);
        let order = bound
            .min(self.order.saturating_add(other.val()))
            .min(other.order.saturating_add(self.val()));
        let mut by_degree: Vec<Vec<(&SeriesMono, &MultiPoly)>> = vec![Vec::new(); order as usize];
        for (m, c) in &other.terms {
            let d = m.degree();
            if d < order {
                by_degree[d as usize].push((m, c));
            }
        }
        let mut acc: FxHashMap<SeriesMono, Accumulator> = FxHashMap::default();
        for (am, ac) in &self.terms {
            let da = am.degree();
            if da >= order {
                break;
            }
            for bucket in &by_degree[..(order - da) as usize] {
                for (bm, bc) in bucket {
                    acc.entry(am.mul(bm)).or_insert_with(|| Accumulator::new(&self.ring)).add_product(ac, bc);
                }
            }
        }
        let mut s = self.like_with_order(order);
        for (m, a) in acc {
            let c = a.finish(&self.ring);
            if !c.is_zero() {
                s.terms.insert(m, c);
            }
        }
        s
    }

    pub fn pow(&self, e: u32) -> TruncSeries {
        let mut acc = TruncSeries::constant(&self.ring, &self.var_names(), self.order, MultiPoly::one(&self.ring));
        for _ in 0..e {
            acc = acc.mul_bounded(self, self.order);
        }
        acc
    }

    pub fn scale(&self, c: &MultiPoly) -> TruncSeries {
        let mut s = self.like();
        for (m, v) in &self.terms {
            s.insert(*m, v * c);
        }
        s
    }

    pub fn scale_scalar(&self, c: &Scalar) -> TruncSeries {
        let mut s = self.like();
        for (m, v) in &self.terms {
            s.insert(*m, v.scale(c));
        }
        s
    }

    /// Apply `f` to every coefficient, landing in `ring`.
    pub fn map_coefficients(
        &self,
        ring: &Ring,
        f: impl Fn(&MultiPoly) -> Result<MultiPoly, AlgebraError>,
    ) -> Result<TruncSeries, SeriesError> {
        let mut s = TruncSeries { ring: ring.clone(), vars: self.vars.clone(), order: self.order, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            s.insert(*m, f(c)?);
        }
        Ok(s)
    }

    pub fn apply_hom(&self, h: &RingHom) -> Result<TruncSeries, SeriesError> {
        self.map_coefficients(h.target(), |c| h.apply(c))
    }

    /// Keep, inside every coefficient, only the terms whose exponent vector
    /// satisfies `keep`.
    pub fn filter_coefficient_terms(&self, keep: impl Fn(&Mono) -> bool) -> TruncSeries {
        let mut s = self.like();
        for (m, c) in &self.terms {
            s.insert(*m, c.filter_terms(&keep));
        }
        s
    }

    /// Multiply the coefficient of `x^e` by `prod_i scales[i]^e_i`.
    pub fn rescale(&self, scales: &[MultiPoly]) -> TruncSeries {
        assert_eq!(scales.len(), self.nvars());
        let mut cache: FxHashMap<(usize, u16), MultiPoly> = FxHashMap::default();
        let mut s = self.like();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, sc) in scales.iter().enumerate() {
                let e = m.exp(i);
                if e > 0 {
                    let p = cache.entry((i, e)).or_insert_with(|| sc.pow(e as u32)).clone();
                    v = &v * &p;
                }
            }
            s.insert(*m, v);
        }
        s
    }

    /// View as a series in `vars`, sending variable `i` to `vars[positions[i]]`.
    pub fn embed(&self, vars: &[&str], positions: &[usize]) -> TruncSeries {
        assert_eq!(positions.len(), self.nvars());
        let mut s = TruncSeries::zero(&self.ring, vars, self.order);
        for (m, c) in &self.terms {
            let mut e = [0u16; MAX_SERIES_VARS];
            for (i, &p) in positions.iter().enumerate() {
                e[p] += m.exp(i);
            }
            s.insert(SeriesMono(e), c.clone());
        }
        s
    }

    /// Partial derivative in variable `i`; the order drops by one.
    pub fn derivative(&self, i: usize) -> TruncSeries {
        let mut s = self.like_with_order(self.order.saturating_sub(1));
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e > 0 {
                let mut d = *m;
                d.0[i] -= 1;
                s.insert(d, c.scale(&self.ring.scalars().from_i64(e as i64)));
            }
        }
        s
    }

    /// Term-wise antiderivative of a one-variable series; the order rises by one.
    pub fn integrate(&self) -> Result<TruncSeries, SeriesError> {
        assert_eq!(self.nvars(), 1);
        let sc = self.ring.scalars();
        let mut s = self.like_with_order(self.order + 1);
        for (m, c) in &self.terms {
            let k = m.exp(0) as u32 + 1;
            let inv = sc.inv(&sc.from_i64(k as i64)).ok_or(SeriesError::NotInvertibleInteger(k))?;
            s.insert(SeriesMono::new(&[k as u16]), c.scale(&inv));
        }
        Ok(s)
    }

    /// `f(args)`: substitute `args[i]` for the i-th variable of `self`.
    pub fn substitute(&self, args: &[TruncSeries]) -> Result<TruncSeries, SeriesError> {
        if args.len() != self.nvars() {
            return Err(SeriesError::Mismatch(format!("{} arguments for {} variables", args.len(), self.nvars())));
        }
        let target = &args[0];
        for a in args {
            if a.ring != self.ring || a.vars.len() != target.vars.len() || a.order != target.order {
                return Err(SeriesError::Mismatch("substitution arguments live in different spaces".into()));
            }
            if a.terms.contains_key(&SeriesMono::default()) {
                return Err(SeriesError::NonzeroConstant);
            }
        }
        let vals: Vec<u32> = args.iter().map(|a| a.val()).collect();
        let min_val = *vals.iter().min().unwrap();
        let order = target.order.min(self.order.saturating_mul(min_val));
        let weight = |m: &SeriesMono| -> u64 { (0..args.len()).map(|i| m.exp(i) as u64 * vals[i] as u64).sum() };
        let terms: Vec<(SeriesMono, &MultiPoly)> =
            self.terms.iter().filter(|(m, _)| weight(m) < order as u64).map(|(m, c)| (*m, c)).collect();
        let mut pows: Vec<Vec<TruncSeries>> = Vec::with_capacity(args.len());
        for (i, a) in args.iter().enumerate() {
            let emax = terms.iter().map(|(m, _)| m.exp(i)).max().unwrap_or(0);
            let mut p = vec![TruncSeries::constant(&self.ring, &a.var_names(), order, MultiPoly::one(&self.ring))];
            for e in 1..=emax {
                let next = p[e as usize - 1].mul_bounded(a, order);
                p.push(next);
            }
            pows.push(p);
        }
        let mut out = subst_rec(&terms, args.len() - 1, order, &pows, &vals, target);
        out.order = order;
        Ok(out)
    }

    /// Compositional inverse of a one-variable series with unit linear
    /// coefficient, by undetermined coefficients.
    pub fn reversion(&self) -> Result<TruncSeries, SeriesError> {
        if self.nvars() != 1 {
            return Err(SeriesError::Mismatch("reversion needs a one-variable series".into()));
        }
        if self.terms.contains_key(&SeriesMono::default()) {
            return Err(SeriesError::NonzeroConstant);
        }
        let n = self.order as usize;
        let f: Vec<MultiPoly> = (0..n).map(|k| self.coefficient(&[k as u16])).collect();
        if n < 2 {
            return Ok(self.like());
        }
        let f1_inv = f[1].inverse().ok_or_else(|| SeriesError::NonUnit(f[1].to_string()))?;
        let zero = MultiPoly::zero(&self.ring);
        // p[j][k] = coefficient of t^k in g^j
        let mut p: Vec<Vec<MultiPoly>> = vec![vec![zero.clone(); n]; n];
        let mut c = vec![zero.clone(); n];
        c[1] = f1_inv.clone();
        p[1][1] = c[1].clone();
        for k in 2..n {
            let mut acc = Accumulator::new(&self.ring);
            for j in 2..=k {
                let mut pj = Accumulator::new(&self.ring);
                for i in 1..=(k - j + 1) {
                    if !c[i].is_zero() && !p[j - 1][k - i].is_zero() {
                        pj.add_product(&c[i], &p[j - 1][k - i]);
                    }
                }
                p[j][k] = pj.finish(&self.ring);
                if !f[j].is_zero() && !p[j][k].is_zero() {
                    acc.add_product(&f[j], &p[j][k]);
                }
            }
            let s = acc.finish(&self.ring);
            c[k] = -&(&s * &f1_inv);
            p[1][k] = c[k].clone();
        }
        Ok(TruncSeries::from_coeffs(&self.ring, &self.vars[0], self.order, c))
    }

    /// Multiplicative inverse of a series whose constant term is a unit.
    pub fn inverse(&self) -> Result<TruncSeries, SeriesError> {
        let c0 = self.terms.get(&SeriesMono::default()).cloned().unwrap_or_else(|| MultiPoly::zero(&self.ring));
        let c0_inv = c0.inverse().ok_or_else(|| SeriesError::NonUnit(c0.to_string()))?;
        let den = self.parts();
        let n = self.order as usize;
        let mut q: Parts = vec![Vec::new(); n];
        if n > 0 {
            q[0].push((SeriesMono::default(), c0_inv.clone()));
        }
        for d in 1..n {
            let mut acc: BTreeMap<SeriesMono, Accumulator> = BTreeMap::new();
            for j in 1..=d {
                for (m1, c1) in &den[j] {
                    for (m2, c2) in &q[d - j] {
                        acc.entry(m1.mul(m2)).or_insert_with(|| Accumulator::new(&self.ring)).add_product(c1, c2);
                    }
                }
            }
            for (m, a) in acc {
                let v = -&(&a.finish(&self.ring) * &c0_inv);
                if !v.is_zero() {
                    q[d].push((m, v));
                }
            }
        }
        let mut s = self.like();
        for part in q {
            for (m, c) in part {
                s.insert(m, c);
            }
        }
        Ok(s)
    }

    /// `q` with `q * den = self`. When the constant term of `den` is a unit
    /// this is ordinary division; otherwise the quotient is found degree by
    /// degree, losing `val(den)` degrees of precision, and the division must
    /// be exact.
    pub fn exact_divide(&self, den: &TruncSeries) -> Result<TruncSeries, SeriesError> {
        self.check_compatible(den);
        let c0 = den.coefficient(&[0, 0, 0][..den.nvars()]);
        if c0.inverse().is_some() {
            let inv = den.inverse()?;
            return Ok(self.mul_bounded(&inv, self.order.min(den.order)));
        }
        let d = den.valuation().ok_or_else(|| SeriesError::Inexact("division by zero".into()))?;
        let order = self.order.min(den.order);
        if let Some(v) = self.valuation() {
            if v < d.min(order) {
                return Err(SeriesError::Inexact(format!("numerator has terms of degree {v} < {d}")));
            }
        }
        let qorder = order - d;
        let num = self.parts();
        let den_parts = den.parts();
        let h = &den_parts[d as usize];
        let (lm, lc) = h[h.len() - 1].clone();
        let lc_inv = lc.inverse();
        let mut q: Parts = vec![Vec::new(); qorder as usize];
        for k in 0..qorder as usize {
            let mut r: BTreeMap<SeriesMono, MultiPoly> = num[k + d as usize].iter().cloned().collect();
            for j in 1..=k {
                for (m1, c1) in &den_parts[d as usize + j] {
                    for (m2, c2) in &q[k - j] {
                        let key = m1.mul(m2);
                        let v = match r.remove(&key) {
                            Some(old) => &old - &(c1 * c2),
                            None => -&(c1 * c2),
                        };
                        if !v.is_zero() {
                            r.insert(key, v);
                        }
                    }
                }
            }
            // divide the homogeneous remainder by h
            while let Some((m, c)) = r.pop_last() {
                if !lm.divides(&m) {
                    return Err(SeriesError::Inexact(format!("degree {} remainder not divisible", k + d as usize)));
                }
                let qc = match &lc_inv {
                    Some(inv) => &c * inv,
                    None => c.try_div_exact(&lc).ok_or_else(|| SeriesError::Inexact("coefficient division".into()))?,
                };
                let qm = m.div(&lm);
                for (hm, hc) in h {
                    if *hm == lm {
                        continue;
                    }
                    let key = hm.mul(&qm);
                    let v = match r.remove(&key) {
                        Some(old) => &old - &(hc * &qc),
                        None => -&(hc * &qc),
                    };
                    if !v.is_zero() {
                        r.insert(key, v);
                    }
                }
                q[k].push((qm, qc));
            }
        }
        let mut s = self.like_with_order(qorder);
        for part in q {
            for (m, c) in part {
                s.add_term(m, c);
            }
        }
        let back = s.mul_bounded(den, order);
        if back != self.truncate(back.order) {
            return Err(SeriesError::Inexact("back-multiplication check failed".into()));
        }
        Ok(s)
    }

    fn render_term(&self, m: &SeriesMono, c: &MultiPoly, first: bool) -> String {
        let mut mono = Vec::new();
        for (i, v) in self.vars.iter().enumerate() {
            match m.exp(i) {
                0 => {}
                1 => mono.push(v.clone()),
                e => mono.push(format!("{v}^{e}")),
            }
        }
        let mono = mono.join("*");
        let sc = self.ring.scalars();
        let (neg, body) = match c.constant_value() {
            Some(k) => {
                let neg = sc.is_negative(&k);
                let abs = if neg { sc.neg(&k) } else { k };
                let body = if mono.is_empty() {
                    sc.render(&abs)
                } else if sc.is_one(&abs) {
                    mono
                } else {
                    format!("{}*{}", sc.render(&abs), mono)
                };
                (neg, body)
            }
            None if c.len() == 1 => {
                let neg = sc.is_negative(&c.terms()[0].1);
                let cs = if neg { (-c).to_string() } else { c.to_string() };
                (neg, if mono.is_empty() { cs } else { format!("{cs}*{mono}") })
            }
            None => (false, if mono.is_empty() { format!("({c})") } else { format!("({c})*{mono}") }),
        };
        match (first, neg) {
            (true, true) => format!("-{body}"),
            (true, false) => body,
            (false, true) => format!(" - {body}"),
            (false, false) => format!(" + {body}"),
        }
    }
}

fn subst_rec(
    terms: &[(SeriesMono, &MultiPoly)],
    level: usize,
    bound: u32,
    pows: &[Vec<TruncSeries>],
    vals: &[u32],
    target: &TruncSeries,
) -> TruncSeries {
    let mut out = target.like_with_order(bound);
    if level == 0 {
        let mut acc: FxHashMap<SeriesMono, Accumulator> = FxHashMap::default();
        for (m, c) in terms {
            let p = &pows[0][m.exp(0) as usize];
            for (pm, pc) in &p.terms {
                if pm.degree() >= bound {
                    break;
                }
                acc.entry(*pm).or_insert_with(|| Accumulator::new(&target.ring)).add_product(c, pc);
            }
        }
        for (m, a) in acc {
            let c = a.finish(&target.ring);
            out.insert(m, c);
        }
        return out;
    }
    let mut groups: BTreeMap<u16, Vec<(SeriesMono, &MultiPoly)>> = BTreeMap::new();
    for (m, c) in terms {
        groups.entry(m.exp(level)).or_default().push((*m, *c));
    }
    for (e, group) in groups {
        let shift = e as u64 * vals[level] as u64;
        if shift >= bound as u64 {
            continue;
        }
        let inner = subst_rec(&group, level - 1, bound - shift as u32, pows, vals, target);
        let piece = if e == 0 { inner } else { inner.mul_bounded(&pows[level][e as usize], bound) };
        out = add_series(&out, &piece, false);
        out.order = bound;
    }
    out
}

fn add_series(a: &TruncSeries, b: &TruncSeries, negate: bool) -> TruncSeries {
    a.check_compatible(b);
    let mut s = a.like_with_order(a.order.min(b.order));
    s.terms = a.terms.iter().filter(|(m, _)| m.degree() < s.order).map(|(m, c)| (*m, c.clone())).collect();
    for (m, c) in &b.terms {
        if m.degree() >= s.order {
            continue;
        }
        let c = if negate { -c } else { c.clone() };
        s.add_term(*m, c);
    }
    s
}

impl std::ops::Add for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        add_series(self, rhs, false)
    }
}

impl std::ops::Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        add_series(self, rhs, true)
    }
}

impl std::ops::Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        let mut s = self.like();
        s.terms = self.terms.iter().map(|(m, c)| (*m, -c)).collect();
        s
    }
}

impl std::ops::Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        self.mul_bounded(rhs, self.order.max(rhs.order))
    }
}

impl PartialEq for TruncSeries {
    fn eq(&self, other: &TruncSeries) -> bool {
        self.order == other.order && self.vars.len() == other.vars.len() && self.ring == other.ring && self.terms == other.terms
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O({})", self.order);
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            f.write_str(&self.render_term(m, c, i == 0))?;
        }
        write!(f, " + O({})", self.order)
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {}", self.ring)
    }
}

fn check_same_space(a: &TruncSeries, b: &TruncSeries) -> Result<(), SeriesError> {
    if a.ring != b.ring {
        return Err(SeriesError::Mismatch("coefficient rings differ".into()));
    }
    if a.vars != b.vars {
        return Err(SeriesError::Mismatch("series variables differ".into()));
    }
    if a.order != b.order {
        return Err(SeriesError::Mismatch(format!("orders {} and {} differ", a.order, b.order)));
    }
    Ok(())
}

/// Product of two series in the same space.
pub fn series_mul(a: &TruncSeries, b: &TruncSeries) -> Result<TruncSeries, SeriesError> {
    check_same_space(a, b)?;
    Ok(a * b)
}

/// `f(args)`, see [`TruncSeries::substitute`].
pub fn series_substitute(f: &TruncSeries, args: &[TruncSeries]) -> Result<TruncSeries, SeriesError> {
    f.substitute(args)
}

pub fn series_reversion(f: &TruncSeries) -> Result<TruncSeries, SeriesError> {
    f.reversion()
}

pub fn series_exact_divide(num: &TruncSeries, den: &TruncSeries) -> Result<TruncSeries, SeriesError> {
    check_same_space(num, den)?;
    num.exact_divide(den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    fn q() -> Ring {
        Ring::rationals()
    }

    fn xy(order: u32) -> (TruncSeries, TruncSeries) {
        let r = q();
        (TruncSeries::var(&r, &["x", "y"], order, 0), TruncSeries::var(&r, &["x", "y"], order, 1))
    }

    fn one_var(coeffs: &[&str], order: u32) -> TruncSeries {
        let r = q();
        TruncSeries::from_coeffs(&r, "t", order, coeffs.iter().map(|c| parse_poly(&r, c).unwrap()).collect())
    }

    #[test]
    fn binomial_square() {
        let (x, y) = xy(3);
        let s = &x + &y;
        assert_eq!(series_mul(&s, &s).unwrap().to_string(), "x^2 + 2*x*y + y^2 + O(3)");
    }

    #[test]
    fn geometric_series() {
        let r = q();
        let geo = TruncSeries::from_coeffs(&r, "x", 8, vec![MultiPoly::one(&r); 8]);
        let one_minus = TruncSeries::from_coeffs(&r, "x", 8, vec![MultiPoly::one(&r), MultiPoly::from_i64(&r, -1)]);
        assert_eq!((&geo * &one_minus).to_string(), "1 + O(8)");
    }

    #[test]
    fn truncation_discards_top_degree() {
        let (x, y) = xy(5);
        assert!((&x.pow(4) * &y).is_zero());
    }

    #[test]
    fn substitution_examples() {
        let (x, y) = xy(3);
        let sum = &x + &y;
        let t = one_var(&["0", "1"], 3);
        assert_eq!(t.substitute(std::slice::from_ref(&sum)).unwrap(), sum);
        let t2 = one_var(&["0", "0", "1"], 3);
        assert_eq!(t2.substitute(std::slice::from_ref(&sum)).unwrap().to_string(), "x^2 + 2*x*y + y^2 + O(3)");
        let c = one_var(&["1", "1"], 3);
        let shifted = &TruncSeries::constant(&q(), &["x", "y"], 3, MultiPoly::one(&q())) + &x;
        assert_eq!(c.substitute(&[shifted]), Err(SeriesError::NonzeroConstant));
    }

    #[test]
    fn log_and_its_reversion() {
        let n = 9;
        let coeffs: Vec<String> = (0..n).map(|m| if m == 0 { "0".into() } else { format!("1/{m}") }).collect();
        let refs: Vec<&str> = coeffs.iter().map(|s| s.as_str()).collect();
        let log = one_var(&refs, n);
        let exp = log.reversion().unwrap();
        // 1 - e^{-t} = t - t^2/2 + t^3/6 - ...
        assert_eq!(exp.to_string(), "t - 1/2*t^2 + 1/6*t^3 - 1/24*t^4 + 1/120*t^5 - 1/720*t^6 + 1/5040*t^7 - 1/40320*t^8 + O(9)");
        let t = one_var(&["0", "1"], n);
        assert_eq!(log.substitute(std::slice::from_ref(&exp)).unwrap(), t);
        assert_eq!(exp.substitute(&[log]).unwrap(), t);
    }

    #[test]
    fn reversion_needs_unit() {
        let r = Ring::integers();
        let f = TruncSeries::from_coeffs(&r, "t", 5, vec![MultiPoly::zero(&r), MultiPoly::from_i64(&r, 2)]);
        assert!(matches!(f.reversion(), Err(SeriesError::NonUnit(_))));
    }

    #[test]
    fn division_examples() {
        let (x, y) = xy(6);
        let num = &(&x * &x) - &(&y * &y);
        let den = &x - &y;
        let qt = num.exact_divide(&den).unwrap();
        assert_eq!(qt.to_string(), "x + y + O(5)");
        let r = q();
        let one_minus = TruncSeries::from_coeffs(&r, "x", 5, vec![MultiPoly::one(&r), MultiPoly::from_i64(&r, -1)]);
        let one = TruncSeries::constant(&r, &["x"], 5, MultiPoly::one(&r));
        assert_eq!(series_exact_divide(&one, &one_minus).unwrap().to_string(), "1 + x + x^2 + x^3 + x^4 + O(5)");
        assert!(matches!((&x + &y).exact_divide(&(&x * &y)), Err(SeriesError::Inexact(_))));
    }

    #[test]
    fn mismatched_orders_rejected() {
        let (x, _) = xy(4);
        let (x5, _) = xy(5);
        assert!(series_mul(&x, &x5).is_err());
    }
}
