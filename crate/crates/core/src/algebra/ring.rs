//! Coefficient ring descriptors.
//!
//! Every ring is a polynomial ring (possibly in zero variables) over a
//! [`ScalarRing`], optionally Laurent in one designated variable, optionally
//! modulo an ideal given by a Gröbner basis. Towers such as `Z[a,b][t]` are
//! flattened into a single variable list.

use std::fmt;
use std::sync::Arc;

use super::groebner;
use super::mono::MAX_VARS;
use super::poly::MultiPoly;
use super::scalar::ScalarRing;
use super::AlgebraError;

#[derive(Clone)]
pub struct Ring(Arc<RingData>);

struct RingData {
    scalars: ScalarRing,
    vars: Vec<String>,
    laurent: Option<usize>,
    quotient: Option<QuotientData>,
}

struct QuotientData {
    ambient: Ring,
    /// Reduced Gröbner basis in the ambient ring (monic).
    basis: Vec<MultiPoly>,
    monomial: bool,
}

/// Shape of a ring, for introspection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    Integers,
    Rationals,
    IntegersMod(u64),
    PrimeField(u64),
    Poly,
    Quotient,
}

impl Ring {
    pub fn scalar(scalars: ScalarRing) -> Ring {
        Ring(Arc::new(RingData { scalars, vars: Vec::new(), laurent: None, quotient: None }))
    }

    pub fn integers() -> Ring {
        Ring::scalar(ScalarRing::Integers)
    }

    pub fn rationals() -> Ring {
        Ring::scalar(ScalarRing::Rationals)
    }

    pub fn integers_mod(m: u64) -> Result<Ring, AlgebraError> {
        Ok(Ring::scalar(ScalarRing::integers_mod(m)?))
    }

    pub fn prime_field(p: u64) -> Result<Ring, AlgebraError> {
        Ok(Ring::scalar(ScalarRing::prime_field(p)?))
    }

    fn build(
        scalars: ScalarRing,
        vars: Vec<String>,
        laurent: Option<usize>,
        quotient: Option<QuotientData>,
    ) -> Result<Ring, AlgebraError> {
        if vars.len() > MAX_VARS {
            return Err(AlgebraError::InvalidRing(format!("at most {MAX_VARS} variables are supported")));
        }
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(v) {
                return Err(AlgebraError::InvalidRing(format!("invalid variable name {v:?}")));
            }
            if vars[..i].contains(v) {
                return Err(AlgebraError::InvalidRing(format!("duplicate variable {v}")));
            }
        }
        Ok(Ring(Arc::new(RingData { scalars, vars, laurent, quotient })))
    }

    /// `base[vars]`. The base may itself be a polynomial or quotient ring;
    /// the new variables are appended.
    pub fn poly(base: &Ring, vars: &[&str]) -> Result<Ring, AlgebraError> {
        base.extend(vars, false)
    }

    /// `base[var, var^-1]`.
    pub fn laurent(base: &Ring, var: &str) -> Result<Ring, AlgebraError> {
        if base.0.laurent.is_some() {
            return Err(AlgebraError::InvalidRing("only one Laurent variable per ring".into()));
        }
        base.extend(&[var], true)
    }

    fn extend(&self, vars: &[&str], laurent: bool) -> Result<Ring, AlgebraError> {
        let mut all = self.0.vars.clone();
        all.extend(vars.iter().map(|s| s.to_string()));
        let laurent_idx = if laurent { Some(all.len() - 1) } else { self.0.laurent };
        let ambient = Ring::build(self.0.scalars.clone(), all.clone(), laurent_idx, None)?;
        match &self.0.quotient {
            None => Ok(ambient),
            Some(q) => {
                let basis = q.basis.iter().map(|g| g.reinterpret(&ambient)).collect();
                Ring::build(
                    self.0.scalars.clone(),
                    all,
                    laurent_idx,
                    Some(QuotientData { ambient, basis, monomial: q.monomial }),
                )
            }
        }
    }

    /// `base / (gens)`.
    ///
    /// Over a prime field any ideal is accepted (a Gröbner basis is computed).
    /// Over other ground rings only monomial ideals are supported. The
    /// Laurent variable may not occur in the generators.
    pub fn quotient(base: &Ring, gens: &[MultiPoly]) -> Result<Ring, AlgebraError> {
        let ambient = base.ambient();
        let mut all: Vec<MultiPoly> = match &base.0.quotient {
            Some(q) => q.basis.clone(),
            None => Vec::new(),
        };
        for g in gens {
            if g.ring() != base && g.ring() != &ambient {
                return Err(AlgebraError::RingMismatch);
            }
            let g = g.reinterpret(&ambient);
            if let Some(l) = base.0.laurent {
                if g.terms().iter().any(|(m, _)| m.exp(l) != 0) {
                    return Err(AlgebraError::Unsupported(
                        "ideal generators may not involve the Laurent variable".into(),
                    ));
                }
            }
            if !g.is_zero() {
                all.push(g);
            }
        }
        if all.is_empty() {
            return Ok(ambient);
        }
        let monomial = all.iter().all(|g| g.terms().len() == 1);
        let basis = if monomial {
            let sc = &base.0.scalars;
            let mut monos = Vec::new();
            for g in &all {
                let (m, c) = &g.terms()[0];
                if !sc.is_unit(c) {
                    return Err(AlgebraError::Unsupported(
                        "monomial generators need unit coefficients".into(),
                    ));
                }
                monos.push(*m);
            }
            monos.sort();
            monos.dedup();
            let minimal: Vec<_> = monos
                .iter()
                .filter(|m| !monos.iter().any(|d| d != *m && d.divides(m, None)))
                .map(|m| MultiPoly::monomial(&ambient, *m, sc.one()))
                .collect();
            minimal
        } else {
            if !matches!(base.0.scalars, ScalarRing::PrimeField(_)) {
                return Err(AlgebraError::Unsupported(
                    "non-monomial quotients require a prime field".into(),
                ));
            }
            groebner::reduced_basis(&all)?
        };
        if basis.iter().any(|g| g.is_constant()) {
            return Err(AlgebraError::InvalidRing("quotient by the unit ideal".into()));
        }
        Ring::build(
            base.0.scalars.clone(),
            base.0.vars.clone(),
            base.0.laurent,
            Some(QuotientData { ambient, basis, monomial }),
        )
    }

    /// The same ring without its quotient.
    pub fn ambient(&self) -> Ring {
        match &self.0.quotient {
            Some(q) => q.ambient.clone(),
            None => self.clone(),
        }
    }

    /// Same variables and quotient over a different ground ring. Only
    /// monomial quotients can be transported.
    pub fn with_scalars(&self, scalars: ScalarRing) -> Result<Ring, AlgebraError> {
        let ambient = Ring::build(scalars.clone(), self.0.vars.clone(), self.0.laurent, None)?;
        match &self.0.quotient {
            None => Ok(ambient),
            Some(q) if q.monomial => {
                let gens: Vec<_> = q
                    .basis
                    .iter()
                    .map(|g| MultiPoly::monomial(&ambient, g.terms()[0].0, scalars.one()))
                    .collect();
                Ring::quotient(&ambient, &gens)
            }
            Some(_) if scalars == self.0.scalars => Ok(self.clone()),
            Some(_) => Err(AlgebraError::Unsupported("cannot change scalars of a non-monomial quotient".into())),
        }
    }

    /// The ring with variable `name` removed. The quotient (if any) must not
    /// involve it.
    pub fn drop_var(&self, name: &str) -> Result<Ring, AlgebraError> {
        let idx = self.var_index(name).ok_or_else(|| AlgebraError::UnknownVariable(name.into()))?;
        let vars: Vec<String> = self.0.vars.iter().filter(|v| *v != name).cloned().collect();
        let laurent = match self.0.laurent {
            Some(l) if l == idx => None,
            Some(l) if l > idx => Some(l - 1),
            other => other,
        };
        let ambient = Ring::build(self.0.scalars.clone(), vars, laurent, None)?;
        match &self.0.quotient {
            None => Ok(ambient),
            Some(q) => {
                let gens: Result<Vec<_>, _> = q.basis.iter().map(|g| g.drop_var_into(idx, &ambient)).collect();
                Ring::quotient(&ambient, &gens?)
            }
        }
    }

    pub fn kind(&self) -> RingKind {
        if self.0.quotient.is_some() {
            return RingKind::Quotient;
        }
        if !self.0.vars.is_empty() {
            return RingKind::Poly;
        }
        match self.0.scalars {
            ScalarRing::Integers => RingKind::Integers,
            ScalarRing::Rationals => RingKind::Rationals,
            ScalarRing::IntegersMod(m) => RingKind::IntegersMod(m),
            ScalarRing::PrimeField(p) => RingKind::PrimeField(p),
        }
    }

    pub fn scalars(&self) -> &ScalarRing {
        &self.0.scalars
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    pub fn laurent_var(&self) -> Option<usize> {
        self.0.laurent
    }

    pub fn quotient_basis(&self) -> Option<&[MultiPoly]> {
        self.0.quotient.as_ref().map(|q| q.basis.as_slice())
    }

    pub(crate) fn quotient_is_monomial(&self) -> bool {
        self.0.quotient.as_ref().is_some_and(|q| q.monomial)
    }

    pub fn characteristic(&self) -> u64 {
        self.0.scalars.characteristic()
    }

    pub fn same(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn describe(&self) -> String {
        let mut s = self.0.scalars.name();
        if !self.0.vars.is_empty() {
            let vs: Vec<String> = self
                .0
                .vars
                .iter()
                .enumerate()
                .map(|(i, v)| if Some(i) == self.0.laurent { format!("{v},{v}^-1") } else { v.clone() })
                .collect();
            s = format!("{s}[{}]", vs.join(","));
        }
        if let Some(q) = &self.0.quotient {
            let gs: Vec<String> = q.basis.iter().map(|g| g.to_string()).collect();
            s = format!("{s}/({})", gs.join(", "));
        }
        s
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PartialEq for Ring {
    fn eq(&self, other: &Ring) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        let (a, b) = (&*self.0, &*other.0);
        a.scalars == b.scalars
            && a.vars == b.vars
            && a.laurent == b.laurent
            && match (&a.quotient, &b.quotient) {
                (None, None) => true,
                (Some(x), Some(y)) => {
                    x.basis.len() == y.basis.len()
                        && x.basis.iter().zip(&y.basis).all(|(g, h)| g.terms() == h.terms())
                }
                _ => false,
            }
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.describe())
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}
