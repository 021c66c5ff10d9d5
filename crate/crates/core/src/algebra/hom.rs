//! Ring homomorphisms out of polynomial rings, determined by the images of
//! the variables and the canonical map on ground rings.

use rustc_hash::FxHashMap;

use super::mono::Mono;
use super::poly::MultiPoly;
use super::ring::Ring;
use super::scalar::Scalar;
use super::AlgebraError;

#[derive(Clone, Debug)]
pub struct RingHom {
    source: Ring,
    target: Ring,
    images: Vec<MultiPoly>,
}

impl RingHom {
    pub fn new(source: &Ring, target: &Ring, images: Vec<MultiPoly>) -> Result<RingHom, AlgebraError> {
        if images.len() != source.nvars() {
            return Err(AlgebraError::Arity { expected: source.nvars(), got: images.len() });
        }
        if images.iter().any(|g| g.ring() != target) {
            return Err(AlgebraError::RingMismatch);
        }
        Ok(RingHom { source: source.clone(), target: target.clone(), images })
    }

    /// Variables listed in `assignment` go to the given images; every other
    /// source variable goes to the target variable of the same name.
    pub fn by_name(source: &Ring, target: &Ring, assignment: &[(&str, MultiPoly)]) -> Result<RingHom, AlgebraError> {
        let mut images = Vec::with_capacity(source.nvars());
        for v in source.vars() {
            match assignment.iter().find(|(n, _)| n == v) {
                Some((_, img)) => images.push(img.clone()),
                None => images.push(
                    MultiPoly::var(target, v)
                        .map_err(|_| AlgebraError::Unmappable(format!("variable {v} has no image")))?,
                ),
            }
        }
        for (n, _) in assignment {
            if source.var_index(n).is_none() {
                return Err(AlgebraError::UnknownVariable(n.to_string()));
            }
        }
        RingHom::new(source, target, images)
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    fn map_scalar(&self, c: &Scalar) -> Result<Scalar, AlgebraError> {
        let (s, t) = (self.source.scalars(), self.target.scalars());
        t.map_from(s, c).ok_or_else(|| AlgebraError::Unmappable(format!("{} from {} to {}", s.render(c), s, t)))
    }

    pub fn apply(&self, f: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        if f.ring() != &self.source {
            return Err(AlgebraError::RingMismatch);
        }
        let tsc = self.target.scalars();
        let monomial_images = self.images.iter().all(|g| g.len() == 1);
        if monomial_images {
            let mut terms = Vec::with_capacity(f.len());
            for (m, c) in f.terms() {
                let mut coeff = self.map_scalar(c)?;
                let mut mono = Mono::ONE;
                for (i, g) in self.images.iter().enumerate() {
                    let e = m.exp(i);
                    if e == 0 {
                        continue;
                    }
                    let (gm, gc) = &g.terms()[0];
                    let gc = if e < 0 {
                        tsc.inv(gc).ok_or_else(|| AlgebraError::NotInvertible(g.to_string()))?
                    } else {
                        gc.clone()
                    };
                    coeff = tsc.mul(&coeff, &tsc.pow(&gc, e.unsigned_abs()));
                    for _ in 0..e.unsigned_abs() {
                        mono = if e > 0 { mono.mul(gm) } else { mono.div(gm) };
                    }
                }
                if let Some(l) = self.target.laurent_var() {
                    if (0..self.target.nvars()).any(|i| i != l && mono.exp(i) < 0) {
                        return Err(AlgebraError::NotInvertible("negative power of a non-unit".into()));
                    }
                } else if (0..self.target.nvars()).any(|i| mono.exp(i) < 0) {
                    return Err(AlgebraError::NotInvertible("negative power of a non-unit".into()));
                }
                terms.push((mono, coeff));
            }
            return Ok(MultiPoly::from_terms(&self.target, terms));
        }
        let mut cache: FxHashMap<(usize, i32), MultiPoly> = FxHashMap::default();
        let mut acc = MultiPoly::zero(&self.target);
        for (m, c) in f.terms() {
            let mut v = MultiPoly::constant(&self.target, self.map_scalar(c)?);
            for i in 0..self.source.nvars() {
                let e = m.exp(i);
                if e == 0 {
                    continue;
                }
                let p = self.power(&mut cache, i, e)?;
                v = &v * &p;
            }
            acc = &acc + &v;
        }
        Ok(acc)
    }

    fn power(&self, cache: &mut FxHashMap<(usize, i32), MultiPoly>, i: usize, e: i32) -> Result<MultiPoly, AlgebraError> {
        if let Some(p) = cache.get(&(i, e)) {
            return Ok(p.clone());
        }
        let p = if e == 1 {
            self.images[i].clone()
        } else if e == -1 {
            self.images[i].inverse().ok_or_else(|| AlgebraError::NotInvertible(self.images[i].to_string()))?
        } else {
            let step = e.signum();
            let prev = self.power(cache, i, e - step)?;
            let unit = self.power(cache, i, step)?;
            &prev * &unit
        };
        cache.insert((i, e), p.clone());
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    #[test]
    fn specialization_and_reduction() {
        let src = Ring::poly(&Ring::integers(), &["a", "t"]).unwrap();
        let dst = Ring::poly(&Ring::prime_field(5).unwrap(), &["t"]).unwrap();
        let f = parse_poly(&src, "7*a^2*t + a - 3").unwrap();
        let h = RingHom::by_name(&src, &dst, &[("a", parse_poly(&dst, "t + 1").unwrap())]).unwrap();
        // 7(t+1)^2 t + t + 1 - 3 = 2t^3 + 4t^2 + 3t + 3 mod 5
        assert_eq!(h.apply(&f).unwrap(), parse_poly(&dst, "2*t^3 + 4*t^2 + 3*t + 3").unwrap());
    }

    #[test]
    fn unmappable_denominator() {
        let src = Ring::poly(&Ring::rationals(), &["x"]).unwrap();
        let dst = Ring::poly(&Ring::prime_field(5).unwrap(), &["x"]).unwrap();
        let h = RingHom::by_name(&src, &dst, &[]).unwrap();
        assert!(h.apply(&parse_poly(&src, "x/5").unwrap()).is_err());
        assert!(h.apply(&parse_poly(&src, "x/3").unwrap()).is_ok());
    }
}
