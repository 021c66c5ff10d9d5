//! Sparse multivariate polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use rustc_hash::FxHashMap;

use super::mono::Mono;
use super::ring::Ring;
use super::scalar::{Scalar, ScalarRing};
use super::AlgebraError;

/// A polynomial in canonical sparse form: terms sorted by descending graded
/// reverse lexicographic order, no zero coefficients, reduced modulo the
/// ring's ideal when there is one.
#[derive(Clone)]
pub struct MultiPoly {
    ring: Ring,
    terms: Vec<(Mono, Scalar)>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// `a op b`, checking that both live in the same ring.
pub fn poly_arith(a: &MultiPoly, b: &MultiPoly, op: ArithOp) -> Result<MultiPoly, AlgebraError> {
    if a.ring != b.ring {
        return Err(AlgebraError::RingMismatch);
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
    })
}

impl MultiPoly {
    pub fn zero(ring: &Ring) -> MultiPoly {
        MultiPoly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Ring) -> MultiPoly {
        MultiPoly::constant(ring, ring.scalars().one())
    }

    pub fn constant(ring: &Ring, c: Scalar) -> MultiPoly {
        MultiPoly::monomial(ring, Mono::ONE, c)
    }

    pub fn from_i64(ring: &Ring, n: i64) -> MultiPoly {
        MultiPoly::constant(ring, ring.scalars().from_i64(n))
    }

    pub fn from_bigint(ring: &Ring, n: &BigInt) -> MultiPoly {
        MultiPoly::constant(ring, ring.scalars().from_bigint(n))
    }

    pub fn from_rational(ring: &Ring, q: &BigRational) -> Option<MultiPoly> {
        Some(MultiPoly::constant(ring, ring.scalars().from_rational(q)?))
    }

    pub fn var(ring: &Ring, name: &str) -> Result<MultiPoly, AlgebraError> {
        let i = ring.var_index(name).ok_or_else(|| AlgebraError::UnknownVariable(name.into()))?;
        Ok(MultiPoly::monomial(ring, Mono::var(i), ring.scalars().one()))
    }

    pub fn var_at(ring: &Ring, i: usize) -> MultiPoly {
        assert!(i < ring.nvars());
        MultiPoly::monomial(ring, Mono::var(i), ring.scalars().one())
    }

    pub fn monomial(ring: &Ring, m: Mono, c: Scalar) -> MultiPoly {
        check_mono(ring, &m);
        if ring.scalars().is_zero(&c) {
            return MultiPoly::zero(ring);
        }
        normalize(ring, vec![(m, c)])
    }

    /// Build from arbitrary terms (duplicates combined, zeros dropped).
    pub fn from_terms(ring: &Ring, terms: Vec<(Mono, Scalar)>) -> MultiPoly {
        let sc = ring.scalars();
        let mut acc: BTreeMap<Mono, Scalar> = BTreeMap::new();
        for (m, c) in terms {
            check_mono(ring, &m);
            match acc.get_mut(&m) {
                Some(v) => *v = sc.add(v, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let terms = acc.into_iter().rev().filter(|(_, c)| !sc.is_zero(c)).collect();
        normalize(ring, terms)
    }

    /// Terms already canonical for `ring` apart from the quotient reduction.
    pub(crate) fn from_sorted(ring: &Ring, terms: Vec<(Mono, Scalar)>) -> MultiPoly {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        normalize(ring, terms)
    }

    /// Same terms viewed in another ring with a compatible variable layout
    /// (no reduction performed).
    pub(crate) fn reinterpret(&self, ring: &Ring) -> MultiPoly {
        MultiPoly { ring: ring.clone(), terms: self.terms.clone() }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(Mono, Scalar)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.ring.scalars().is_one(&self.terms[0].1)
    }

    /// The scalar value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Scalar> {
        if self.terms.is_empty() {
            return Some(self.ring.scalars().zero());
        }
        self.is_constant().then(|| self.terms[0].1.clone())
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Mono::ONE)
    }

    pub fn leading_term(&self) -> Option<&(Mono, Scalar)> {
        self.terms.first()
    }

    pub fn coefficient(&self, m: &Mono) -> Scalar {
        match self.terms.binary_search_by(|(k, _)| m.cmp(k)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.ring.scalars().zero(),
        }
    }

    /// Coefficient of the monomial with the given exponent vector.
    pub fn coefficient_of(&self, exps: &[i32]) -> Result<Scalar, AlgebraError> {
        if exps.len() != self.ring.nvars() {
            return Err(AlgebraError::Arity { expected: self.ring.nvars(), got: exps.len() });
        }
        Ok(self.coefficient(&Mono::from_exps(exps)))
    }

    /// Coefficient of `x_{vars[0]}^{exps[0]} ...` viewing the remaining
    /// variables as coefficients. The result lives in the same ring and is
    /// free of the listed variables.
    pub fn coefficient_in(&self, vars: &[usize], exps: &[i32]) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| vars.iter().zip(exps).all(|(&v, &e)| m.exp(v) == e))
            .map(|(m, c)| {
                let mut m = *m;
                for &v in vars {
                    m = m.with_exp(v, 0);
                }
                (m, c.clone())
            })
            .collect();
        MultiPoly::from_terms(&self.ring, terms)
    }

    pub fn total_degree(&self) -> Option<i32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    /// Largest exponent of variable `i`.
    pub fn degree_in(&self, i: usize) -> Option<i32> {
        self.terms.iter().map(|(m, _)| m.exp(i)).max()
    }

    /// Smallest exponent of variable `i`.
    pub fn valuation_in(&self, i: usize) -> Option<i32> {
        self.terms.iter().map(|(m, _)| m.exp(i)).min()
    }

    /// Degree when homogeneous in the listed variables.
    pub fn homogeneous_degree_in(&self, vars: &[usize]) -> Option<i32> {
        let mut deg = None;
        for (m, _) in &self.terms {
            let d: i32 = vars.iter().map(|&v| m.exp(v)).sum();
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        let sc = self.ring.scalars();
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (*m, sc.mul(a, c)))
            .filter(|(_, a)| !sc.is_zero(a))
            .collect();
        normalize(&self.ring, terms)
    }

    /// Multiply by the monomial `c * m`.
    pub fn mul_term(&self, m: &Mono, c: &Scalar) -> MultiPoly {
        let sc = self.ring.scalars();
        let terms = self
            .terms
            .iter()
            .map(|(k, a)| (k.mul(m), sc.mul(a, c)))
            .filter(|(_, a)| !sc.is_zero(a))
            .collect();
        normalize(&self.ring, terms)
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut result = MultiPoly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Keep only the terms satisfying `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Mono) -> bool) -> MultiPoly {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| keep(m)).cloned().collect(),
        }
    }

    /// Multiply every monomial by `x_i^shift` (Laurent variable or
    /// non-negative result required).
    pub fn shift_var(&self, i: usize, shift: i32) -> MultiPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.with_exp(i, m.exp(i) + shift), c.clone())).collect();
        MultiPoly::from_sorted(&self.ring, terms)
    }

    pub fn derivative(&self, i: usize) -> MultiPoly {
        let sc = self.ring.scalars();
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(i) != 0)
            .map(|(m, c)| (m.with_exp(i, m.exp(i) - 1), sc.mul(c, &sc.from_i64(m.exp(i) as i64))))
            .collect();
        MultiPoly::from_terms(&self.ring, terms)
    }

    /// Value at a point given by one scalar per variable.
    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar, AlgebraError> {
        let n = self.ring.nvars();
        if point.len() != n {
            return Err(AlgebraError::Arity { expected: n, got: point.len() });
        }
        let sc = self.ring.scalars();
        let mut acc = sc.zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, x) in point.iter().enumerate() {
                let e = m.exp(i);
                let base = if e < 0 {
                    sc.inv(x).ok_or_else(|| AlgebraError::NotInvertible(sc.render(x)))?
                } else {
                    x.clone()
                };
                v = sc.mul(&v, &sc.pow(&base, e.unsigned_abs()));
            }
            acc = sc.add(&acc, &v);
        }
        Ok(acc)
    }

    /// Multiplicative inverse, for units of the form `c * (Laurent monomial)`.
    pub fn inverse(&self) -> Option<MultiPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = &self.terms[0];
        let l = self.ring.laurent_var();
        if (0..self.ring.nvars()).any(|i| Some(i) != l && m.exp(i) != 0) {
            return None;
        }
        let ci = self.ring.scalars().inv(c)?;
        Some(MultiPoly::monomial(&self.ring, Mono::ONE.div(m), ci))
    }

    /// `self / d` when `d` divides `self` exactly (multivariate division with
    /// zero remainder).
    pub fn try_div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        assert!(self.ring == d.ring, "ring mismatch");
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let sc = self.ring.scalars();
        let l = self.ring.laurent_var();
        let (dm, dc) = d.terms[0].clone();
        let floor = self.terms.last().unwrap().0.div(&d.terms.last().unwrap().0);
        let mut r = self.clone();
        let mut q: Vec<(Mono, Scalar)> = Vec::new();
        while let Some((rm, rc)) = r.terms.first().cloned() {
            if !dm.divides(&rm, l) {
                return None;
            }
            let m = rm.div(&dm);
            if m < floor {
                return None;
            }
            let c = sc.div_exact(&rc, &dc)?;
            r = &r - &d.mul_term(&m, &c);
            q.push((m, c));
        }
        Some(MultiPoly::from_terms(&self.ring, q))
    }

    /// Convert to a ring with the same variables over another ground ring.
    pub fn map_scalars(&self, target: &Ring) -> Result<MultiPoly, AlgebraError> {
        if target.vars() != self.ring.vars() {
            return Err(AlgebraError::RingMismatch);
        }
        let (src, dst) = (self.ring.scalars(), target.scalars());
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let img = dst
                .map_from(src, c)
                .ok_or_else(|| AlgebraError::Unmappable(format!("{} from {} to {}", src.render(c), src, dst)))?;
            if !dst.is_zero(&img) {
                terms.push((*m, img));
            }
        }
        Ok(MultiPoly::from_sorted(target, terms))
    }

    /// Remove variable `idx` (which must not occur) and land in `target`.
    pub(crate) fn drop_var_into(&self, idx: usize, target: &Ring) -> Result<MultiPoly, AlgebraError> {
        let n = self.ring.nvars();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if m.exp(idx) != 0 {
                return Err(AlgebraError::Unmappable(format!(
                    "term still involves {}",
                    self.ring.vars()[idx]
                )));
            }
            let exps: Vec<i32> = (0..n).filter(|&i| i != idx).map(|i| m.exp(i)).collect();
            terms.push((Mono::from_exps(&exps), c.clone()));
        }
        Ok(MultiPoly::from_terms(target, terms))
    }

    /// Drop variable `name` (which must not occur) into `target`.
    pub fn drop_var(&self, name: &str, target: &Ring) -> Result<MultiPoly, AlgebraError> {
        let idx = self.ring.var_index(name).ok_or_else(|| AlgebraError::UnknownVariable(name.into()))?;
        self.drop_var_into(idx, target)
    }

    /// Rendering of a single monomial.
    pub fn render_mono(ring: &Ring, m: &Mono) -> String {
        let mut parts = Vec::new();
        for (i, v) in ring.vars().iter().enumerate() {
            match m.exp(i) {
                0 => {}
                1 => parts.push(v.clone()),
                e => parts.push(format!("{v}^{e}")),
            }
        }
        parts.join("*")
    }
}

fn check_mono(ring: &Ring, m: &Mono) {
    let l = ring.laurent_var();
    for i in 0..super::mono::MAX_VARS {
        let e = m.exp(i);
        assert!(i < ring.nvars() || e == 0, "exponent for a variable outside the ring");
        assert!(e >= 0 || Some(i) == l, "negative exponent outside the Laurent variable");
    }
}

/// Reduce canonical-order terms modulo the ring's ideal.
fn normalize(ring: &Ring, terms: Vec<(Mono, Scalar)>) -> MultiPoly {
    let terms = match ring.quotient_basis() {
        None => terms,
        Some(basis) if ring.quotient_is_monomial() => {
            let l = ring.laurent_var();
            let gens: Vec<Mono> = basis.iter().map(|g| g.terms[0].0).collect();
            terms.into_iter().filter(|(m, _)| !gens.iter().any(|g| g.divides(m, l))).collect()
        }
        Some(basis) => reduce_terms(ring.scalars(), ring.laurent_var(), terms, basis),
    };
    MultiPoly { ring: ring.clone(), terms }
}

/// Normal form of `terms` with respect to a monic Gröbner basis.
pub(crate) fn reduce_terms(
    sc: &ScalarRing,
    laurent: Option<usize>,
    terms: Vec<(Mono, Scalar)>,
    basis: &[MultiPoly],
) -> Vec<(Mono, Scalar)> {
    let reducible = |m: &Mono| basis.iter().any(|g| g.terms[0].0.divides(m, laurent));
    if !terms.iter().any(|(m, _)| reducible(m)) {
        return terms;
    }
    let mut pending: BTreeMap<Mono, Scalar> = terms.into_iter().collect();
    let mut out = Vec::new();
    while let Some((m, c)) = pending.pop_last() {
        match basis.iter().find(|g| g.terms[0].0.divides(&m, laurent)) {
            None => out.push((m, c)),
            Some(g) => {
                let shift = m.div(&g.terms[0].0);
                for (gm, gc) in &g.terms[1..] {
                    let k = gm.mul(&shift);
                    let v = sc.neg(&sc.mul(&c, gc));
                    match pending.get_mut(&k) {
                        Some(e) => {
                            *e = sc.add(e, &v);
                            if sc.is_zero(e) {
                                pending.remove(&k);
                            }
                        }
                        None => {
                            pending.insert(k, v);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Sum of products of polynomials, combined lazily and reduced once.
pub(crate) struct Accumulator {
    sc: ScalarRing,
    modulus: Option<u64>,
    residues: FxHashMap<Mono, u64>,
    general: FxHashMap<Mono, Scalar>,
}

impl Accumulator {
    pub(crate) fn new(ring: &Ring) -> Accumulator {
        let sc = ring.scalars().clone();
        let modulus = sc.modulus();
        Accumulator { sc, modulus, residues: FxHashMap::default(), general: FxHashMap::default() }
    }

    fn push(&mut self, m: Mono, c: Scalar) {
        match (self.modulus, c) {
            (Some(md), Scalar::Mod(r)) => {
                let e = self.residues.entry(m).or_insert(0);
                *e = ((*e as u128 + r as u128) % md as u128) as u64;
            }
            (_, c) => match self.general.entry(m) {
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    let v = self.sc.add(e.get(), &c);
                    *e.get_mut() = v;
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
            },
        }
    }

    pub(crate) fn add_product(&mut self, a: &MultiPoly, b: &MultiPoly) {
        if let Some(md) = self.modulus {
            for (am, ac) in &a.terms {
                let Scalar::Mod(x) = ac else { unreachable!() };
                for (bm, bc) in &b.terms {
                    let Scalar::Mod(y) = bc else { unreachable!() };
                    let p = ((*x as u128 * *y as u128) % md as u128) as u64;
                    let e = self.residues.entry(am.mul(bm)).or_insert(0);
                    *e = ((*e as u128 + p as u128) % md as u128) as u64;
                }
            }
        } else {
            for (am, ac) in &a.terms {
                for (bm, bc) in &b.terms {
                    self.push(am.mul(bm), self.sc.mul(ac, bc));
                }
            }
        }
    }

    pub(crate) fn finish(self, ring: &Ring) -> MultiPoly {
        let sc = self.sc;
        let mut out: Vec<(Mono, Scalar)> = if self.modulus.is_some() {
            self.residues.into_iter().filter(|(_, c)| *c != 0).map(|(m, c)| (m, Scalar::Mod(c))).collect()
        } else {
            self.general.into_iter().filter(|(_, c)| !sc.is_zero(c)).collect()
        };
        out.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        normalize(ring, out)
    }
}

fn merge(sc: &ScalarRing, a: &[(Mono, Scalar)], b: &[(Mono, Scalar)], negate_b: bool) -> Vec<(Mono, Scalar)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let nb = |c: &Scalar| if negate_b { sc.neg(c) } else { c.clone() };
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Less => {
                out.push((b[j].0, nb(&b[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = if negate_b { sc.sub(&a[i].1, &b[j].1) } else { sc.add(&a[i].1, &b[j].1) };
                if !sc.is_zero(&c) {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(m, c)| (*m, nb(c))));
    out
}

pub(crate) fn mul_terms(sc: &ScalarRing, a: &[(Mono, Scalar)], b: &[(Mono, Scalar)]) -> Vec<(Mono, Scalar)> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    if b.len() == 1 {
        let (bm, bc) = &b[0];
        return a
            .iter()
            .map(|(m, c)| (m.mul(bm), sc.mul(c, bc)))
            .filter(|(_, c)| !sc.is_zero(c))
            .collect();
    }
    let mut out: Vec<(Mono, Scalar)> = if let Some(md) = sc.modulus() {
        let mut acc: FxHashMap<Mono, u64> = FxHashMap::default();
        acc.reserve(a.len() * 2);
        for (am, ac) in a {
            let Scalar::Mod(x) = ac else { unreachable!() };
            for (bm, bc) in b {
                let Scalar::Mod(y) = bc else { unreachable!() };
                let p = ((*x as u128 * *y as u128) % md as u128) as u64;
                let e = acc.entry(am.mul(bm)).or_insert(0);
                *e = ((*e as u128 + p as u128) % md as u128) as u64;
            }
        }
        acc.into_iter().filter(|(_, c)| *c != 0).map(|(m, c)| (m, Scalar::Mod(c))).collect()
    } else {
        let mut acc: FxHashMap<Mono, Scalar> = FxHashMap::default();
        for (am, ac) in a {
            for (bm, bc) in b {
                let p = sc.mul(ac, bc);
                match acc.entry(am.mul(bm)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        let v = sc.add(e.get(), &p);
                        *e.get_mut() = v;
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(p);
                    }
                }
            }
        }
        acc.into_iter().filter(|(_, c)| !sc.is_zero(c)).collect()
    };
    out.sort_unstable_by(|x, y| y.0.cmp(&x.0));
    out
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert!(self.ring == rhs.ring, "ring mismatch");
        MultiPoly { ring: self.ring.clone(), terms: merge(self.ring.scalars(), &self.terms, &rhs.terms, false) }
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert!(self.ring == rhs.ring, "ring mismatch");
        MultiPoly { ring: self.ring.clone(), terms: merge(self.ring.scalars(), &self.terms, &rhs.terms, true) }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert!(self.ring == rhs.ring, "ring mismatch");
        normalize(&self.ring, mul_terms(self.ring.scalars(), &self.terms, &rhs.terms))
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let sc = self.ring.scalars();
        MultiPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (*m, sc.neg(c))).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &MultiPoly) -> bool {
        self.terms == other.terms && self.ring == other.ring
    }
}

impl Eq for MultiPoly {}

impl Hash for MultiPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let sc = self.ring.scalars();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = sc.is_negative(c);
            let abs = if neg { sc.neg(c) } else { c.clone() };
            let mono = MultiPoly::render_mono(&self.ring, m);
            let body = if mono.is_empty() {
                sc.render(&abs)
            } else if sc.is_one(&abs) {
                mono
            } else {
                format!("{}*{}", sc.render(&abs), mono)
            };
            match (i, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => f.write_str(&body)?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.ring)
    }
}
