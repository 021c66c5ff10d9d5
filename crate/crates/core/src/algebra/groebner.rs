//! Buchberger's algorithm over prime fields, with ideal membership, ideal
//! quotients and zero-divisor tests.
//!
//! Everything here runs on a private representation (exponent vector,
//! residue) so that the elimination order needed for ideal quotients can
//! coexist with the grevlex order used everywhere else.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::mono::{Mono, MAX_VARS};
use super::poly::MultiPoly;
use super::ring::Ring;
use super::scalar::{inv_mod, Scalar, ScalarRing};
use super::AlgebraError;

/// Largest number of (non-Laurent) variables accepted by the engine.
pub const MAX_GB_VARS: usize = 4;

/// Sort key: the tag exponent (always 0 for plain grevlex) then grevlex.
type Key = (i16, Mono);
type Poly = Vec<(Mono, u64)>;

#[derive(Copy, Clone)]
struct Engine {
    p: u64,
    /// Slot of the elimination tag variable, if any.
    tag: Option<usize>,
}

impl Engine {
    fn key(&self, m: &Mono) -> Key {
        (self.tag.map_or(0, |s| m.0[s]), *m)
    }

    fn sort(&self, f: &mut Poly) {
        f.sort_unstable_by(|a, b| self.key(&b.0).cmp(&self.key(&a.0)));
    }

    fn monic(&self, f: &mut Poly) {
        if let Some(&(_, lc)) = f.first() {
            let inv = inv_mod(lc, self.p).expect("nonzero residue");
            for (_, c) in f.iter_mut() {
                *c = mul(*c, inv, self.p);
            }
        }
    }

    /// Full normal form of `f` modulo monic `basis`.
    fn normal_form(&self, f: &Poly, basis: &[Poly]) -> Poly {
        let p = self.p;
        let mut pending: BTreeMap<Key, (Mono, u64)> = f.iter().map(|(m, c)| (self.key(m), (*m, *c))).collect();
        let mut out = Vec::new();
        while let Some((_, (m, c))) = pending.pop_last() {
            match basis.iter().find(|g| g[0].0.divides(&m, None)) {
                None => out.push((m, c)),
                Some(g) => {
                    let shift = m.div(&g[0].0);
                    for (gm, gc) in &g[1..] {
                        let k = gm.mul(&shift);
                        let v = (p - mul(c, *gc, p)) % p;
                        let key = self.key(&k);
                        match pending.get_mut(&key) {
                            Some(e) => {
                                e.1 = (e.1 + v) % p;
                                if e.1 == 0 {
                                    pending.remove(&key);
                                }
                            }
                            None => {
                                pending.insert(key, (k, v));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn spoly(&self, f: &Poly, g: &Poly) -> Poly {
        let l = f[0].0.lcm(&g[0].0);
        let (sf, sg) = (l.div(&f[0].0), l.div(&g[0].0));
        let mut acc: BTreeMap<Key, (Mono, u64)> = BTreeMap::new();
        for (m, c) in &f[1..] {
            let k = m.mul(&sf);
            acc.insert(self.key(&k), (k, *c));
        }
        for (m, c) in &g[1..] {
            let k = m.mul(&sg);
            let e = acc.entry(self.key(&k)).or_insert((k, 0));
            e.1 = (e.1 + self.p - c) % self.p;
        }
        acc.into_values().rev().filter(|(_, c)| *c != 0).collect()
    }

    fn groebner(&self, gens: Vec<Poly>) -> Vec<Poly> {
        let mut basis: Vec<Poly> = Vec::new();
        for mut g in gens.into_iter().filter(|g| !g.is_empty()) {
            self.sort(&mut g);
            self.monic(&mut g);
            basis.push(g);
        }
        let mut pairs: Vec<(usize, usize)> =
            (0..basis.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        while !pairs.is_empty() {
            // normal selection strategy: smallest lcm first
            let (idx, _) = pairs
                .iter()
                .enumerate()
                .min_by_key(|(_, &(i, j))| {
                    let l = basis[i][0].0.lcm(&basis[j][0].0);
                    (self.key(&l), i, j)
                })
                .unwrap();
            let (i, j) = pairs.swap_remove(idx);
            if basis[i][0].0.is_coprime(&basis[j][0].0) {
                continue;
            }
            let s = self.spoly(&basis[i], &basis[j]);
            let mut r = self.normal_form(&s, &basis);
            if r.is_empty() {
                continue;
            }
            self.monic(&mut r);
            let n = basis.len();
            pairs.extend((0..n).map(|k| (k, n)));
            basis.push(r);
        }
        self.reduce(basis)
    }

    /// Minimalize and interreduce; sort by ascending leading monomial.
    fn reduce(&self, basis: Vec<Poly>) -> Vec<Poly> {
        let mut minimal: Vec<Poly> = Vec::new();
        for (i, g) in basis.iter().enumerate() {
            let redundant = basis.iter().enumerate().any(|(j, h)| {
                j != i && h[0].0.divides(&g[0].0, None) && (h[0].0 != g[0].0 || j < i)
            });
            if !redundant {
                minimal.push(g.clone());
            }
        }
        let mut out = Vec::with_capacity(minimal.len());
        for i in 0..minimal.len() {
            let others: Vec<Poly> =
                minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
            let mut g = vec![minimal[i][0]];
            g.extend(self.normal_form(&minimal[i][1..].to_vec(), &others));
            out.push(g);
        }
        out.sort_by(|a, b| self.key(&a[0].0).cmp(&self.key(&b[0].0)));
        out
    }
}

fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn to_internal(f: &MultiPoly) -> Poly {
    f.terms()
        .iter()
        .map(|(m, c)| match c {
            Scalar::Mod(r) => (*m, *r),
            _ => unreachable!("prime field coefficients"),
        })
        .collect()
}

fn from_internal(ring: &Ring, f: Poly) -> MultiPoly {
    MultiPoly::from_terms(ring, f.into_iter().map(|(m, c)| (m, Scalar::Mod(c))).collect())
}

fn prime_of(ring: &Ring) -> Result<u64, AlgebraError> {
    match ring.scalars() {
        ScalarRing::PrimeField(p) => Ok(*p),
        other => Err(AlgebraError::Unsupported(format!("Gröbner bases need a prime field, not {other}"))),
    }
}

/// Reduced grevlex Gröbner basis of the given polynomials (all in one
/// ambient ring over a prime field).
pub(crate) fn reduced_basis(gens: &[MultiPoly]) -> Result<Vec<MultiPoly>, AlgebraError> {
    let ring = gens[0].ring().clone();
    let p = prime_of(&ring)?;
    let engine = Engine { p, tag: None };
    let basis = engine.groebner(gens.iter().map(to_internal).collect());
    Ok(basis.into_iter().map(|g| from_internal(&ring, g)).collect())
}

/// An ideal of a polynomial ring over a prime field. When built over a
/// quotient ring, the ideal lives in the ambient ring and includes the
/// quotient's generators.
pub struct Ideal {
    ring: Ring,
    generators: Vec<MultiPoly>,
    basis: OnceLock<Vec<MultiPoly>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Ideal {
        let basis = OnceLock::new();
        if let Some(b) = self.basis.get() {
            let _ = basis.set(b.clone());
        }
        Ideal { ring: self.ring.clone(), generators: self.generators.clone(), basis }
    }
}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let gs: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "Ideal({}) in {}", gs.join(", "), self.ring)
    }
}

impl Ideal {
    pub fn new(ring: &Ring, generators: &[MultiPoly]) -> Result<Ideal, AlgebraError> {
        prime_of(ring)?;
        let ambient = ring.ambient();
        let l = ring.laurent_var();
        let plain_vars = ring.nvars() - usize::from(l.is_some());
        if plain_vars > MAX_GB_VARS {
            return Err(AlgebraError::Unsupported(format!(
                "Gröbner engine is limited to {MAX_GB_VARS} variables, got {plain_vars}"
            )));
        }
        if ring.nvars() >= MAX_VARS {
            return Err(AlgebraError::Unsupported("no slot left for the elimination variable".into()));
        }
        let mut gens: Vec<MultiPoly> = ring.quotient_basis().map(|b| b.to_vec()).unwrap_or_default();
        for g in generators {
            if g.ring() != ring && g.ring() != &ambient {
                return Err(AlgebraError::RingMismatch);
            }
            if let Some(l) = l {
                if g.terms().iter().any(|(m, _)| m.exp(l) != 0) {
                    return Err(AlgebraError::Unsupported(
                        "ideal generators may not involve the Laurent variable".into(),
                    ));
                }
            }
            let g = g.reinterpret(&ambient);
            if !g.is_zero() {
                gens.push(g);
            }
        }
        Ok(Ideal { ring: ambient, generators: gens, basis: OnceLock::new() })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    fn engine(&self) -> Engine {
        Engine { p: self.ring.characteristic(), tag: None }
    }

    /// Cached reduced Gröbner basis (grevlex, monic, sorted by leading term).
    pub fn groebner_basis(&self) -> &[MultiPoly] {
        self.basis.get_or_init(|| {
            let engine = self.engine();
            engine
                .groebner(self.generators.iter().map(to_internal).collect())
                .into_iter()
                .map(|g| from_internal(&self.ring, g))
                .collect()
        })
    }

    fn internal_basis(&self) -> Vec<Poly> {
        self.groebner_basis().iter().map(to_internal).collect()
    }

    /// Normal form of `f` modulo the ideal.
    pub fn reduce(&self, f: &MultiPoly) -> MultiPoly {
        let f = f.reinterpret(&self.ring);
        let r = self.engine().normal_form(&to_internal(&f), &self.internal_basis());
        from_internal(&self.ring, r)
    }

    pub fn contains(&self, f: &MultiPoly) -> bool {
        self.reduce(f).is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.groebner_basis().iter().any(|g| g.is_constant())
    }

    /// Same ideal (equal reduced bases).
    pub fn same_as(&self, other: &Ideal) -> bool {
        self.ring == other.ring && self.groebner_basis() == other.groebner_basis()
    }

    /// The ideal extended by more generators.
    pub fn with(&self, more: &[MultiPoly]) -> Result<Ideal, AlgebraError> {
        let mut gens = self.generators.clone();
        gens.extend(more.iter().map(|g| g.reinterpret(&self.ring)));
        Ideal::new(&self.ring, &gens)
    }

    /// `(I : v) = { w : v w ∈ I }`, via `I ∩ (v)` computed with an
    /// elimination variable.
    pub fn quotient_by(&self, v: &MultiPoly) -> Result<Ideal, AlgebraError> {
        let v = v.reinterpret(&self.ring);
        let one = MultiPoly::one(&self.ring);
        if v.is_zero() || self.contains(&v) {
            return Ideal::new(&self.ring, &[one]);
        }
        let tag = self.ring.nvars();
        let engine = Engine { p: self.ring.characteristic(), tag: Some(tag) };
        let p = engine.p;
        let s = Mono::var(tag);
        let mut gens: Vec<Poly> = self
            .groebner_basis()
            .iter()
            .map(|g| to_internal(g).into_iter().map(|(m, c)| (m.mul(&s), c)).collect())
            .collect();
        let vi = to_internal(&v);
        let mut last: Poly = vi.clone();
        last.extend(vi.iter().map(|(m, c)| (m.mul(&s), (p - c) % p)));
        gens.push(last);
        let elim = engine.groebner(gens);
        let mut quotient_gens = Vec::new();
        for g in elim.into_iter().filter(|g| g.iter().all(|(m, _)| m.0[tag] == 0)) {
            let g = from_internal(&self.ring, g);
            let q = g.try_div_exact(&v).ok_or(AlgebraError::Internal("intersection element not divisible".into()))?;
            quotient_gens.push(q);
        }
        Ideal::new(&self.ring, &quotient_gens)
    }
}

/// Compute and cache the reduced Gröbner basis.
pub fn buchberger(ideal: &Ideal) -> Ideal {
    ideal.groebner_basis();
    ideal.clone()
}

/// Whether `v` is a zero divisor on `R/I`, i.e. `(I : v)` strictly contains `I`.
pub fn is_zero_divisor(v: &MultiPoly, ideal: &Ideal) -> Result<bool, AlgebraError> {
    let q = ideal.quotient_by(v)?;
    Ok(q.groebner_basis().iter().any(|g| !ideal.contains(g)))
}

pub fn is_unit_ideal(ideal: &Ideal) -> bool {
    ideal.is_unit()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3ab() -> (Ring, MultiPoly, MultiPoly) {
        let r = Ring::poly(&Ring::prime_field(3).unwrap(), &["a", "b"]).unwrap();
        let a = MultiPoly::var(&r, "a").unwrap();
        let b = MultiPoly::var(&r, "b").unwrap();
        (r, a, b)
    }

    fn basis_strings(i: &Ideal) -> Vec<String> {
        i.groebner_basis().iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn principal_and_unit_ideals() {
        let (r, a, _) = f3ab();
        assert_eq!(basis_strings(&Ideal::new(&r, std::slice::from_ref(&a)).unwrap()), vec!["a"]);
        let one = MultiPoly::one(&r);
        let i = Ideal::new(&r, &[a.clone(), &a + &one]).unwrap();
        assert_eq!(basis_strings(&i), vec!["1"]);
        assert!(is_unit_ideal(&i));
    }

    #[test]
    fn family_ideal_basis() {
        let (r, a, b) = f3ab();
        let v2 = &a.pow(2) + &(&a * &b.pow(2));
        let i = Ideal::new(&r, &[b.clone(), v2]).unwrap();
        assert_eq!(basis_strings(&i), vec!["b", "a^2"]);
        assert!(!i.is_unit());
    }

    #[test]
    fn zero_divisor_examples() {
        let (r, a, b) = f3ab();
        assert!(is_zero_divisor(&a, &Ideal::new(&r, &[a.pow(2)]).unwrap()).unwrap());
        assert!(!is_zero_divisor(&b, &Ideal::new(&r, std::slice::from_ref(&a)).unwrap()).unwrap());
        let v = &a.pow(2) + &(&a * &b.pow(2));
        assert!(!is_zero_divisor(&v, &Ideal::new(&r, std::slice::from_ref(&b)).unwrap()).unwrap());
    }

    #[test]
    fn ideal_quotient_of_product() {
        let (r, a, b) = f3ab();
        // (ab : a) = (b)
        let i = Ideal::new(&r, &[&a * &b]).unwrap();
        assert_eq!(basis_strings(&i.quotient_by(&a).unwrap()), vec!["b"]);
    }

    #[test]
    fn variable_limit() {
        let r = Ring::poly(&Ring::prime_field(2).unwrap(), &["a", "b", "c", "d", "e"]).unwrap();
        assert!(Ideal::new(&r, &[]).is_err());
        let z = Ring::poly(&Ring::integers(), &["a"]).unwrap();
        assert!(Ideal::new(&z, &[]).is_err());
    }
}
