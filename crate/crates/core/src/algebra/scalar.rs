//! Ground rings: the integers, the rationals, and residue rings `Z/m`.
//!
//! Elements of every ground ring share the [`Scalar`] representation; the
//! ring itself ([`ScalarRing`]) supplies the arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ScalarRing {
    Integers,
    Rationals,
    IntegersMod(u64),
    PrimeField(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    /// Canonical residue in `0..m`.
    Mod(u64),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

fn bigint_mod(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits in u64")
}

impl ScalarRing {
    pub fn integers_mod(m: u64) -> Result<ScalarRing, AlgebraError> {
        if m < 2 {
            return Err(AlgebraError::InvalidRing(format!("modulus {m} must be at least 2")));
        }
        Ok(ScalarRing::IntegersMod(m))
    }

    pub fn prime_field(p: u64) -> Result<ScalarRing, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::InvalidRing(format!("{p} is not prime")));
        }
        Ok(ScalarRing::PrimeField(p))
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            ScalarRing::IntegersMod(m) | ScalarRing::PrimeField(m) => Some(*m),
            _ => None,
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.modulus().unwrap_or(0)
    }

    pub fn is_field(&self) -> bool {
        matches!(self, ScalarRing::Rationals | ScalarRing::PrimeField(_))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            ScalarRing::Integers => Scalar::Int(BigInt::zero()),
            ScalarRing::Rationals => Scalar::Rat(BigRational::zero()),
            _ => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            ScalarRing::Integers => Scalar::Int(n.clone()),
            ScalarRing::Rationals => Scalar::Rat(BigRational::from_integer(n.clone())),
            ScalarRing::IntegersMod(m) | ScalarRing::PrimeField(m) => Scalar::Mod(bigint_mod(n, *m)),
        }
    }

    /// Image of a rational number, if its denominator is invertible here.
    pub fn from_rational(&self, q: &BigRational) -> Option<Scalar> {
        match self {
            ScalarRing::Integers => q.is_integer().then(|| Scalar::Int(q.to_integer())),
            ScalarRing::Rationals => Some(Scalar::Rat(q.clone())),
            ScalarRing::IntegersMod(m) | ScalarRing::PrimeField(m) => {
                let num = bigint_mod(q.numer(), *m);
                let den = inv_mod(bigint_mod(q.denom(), *m), *m)?;
                Some(Scalar::Mod(mul_mod(num, den, *m)))
            }
        }
    }

    /// Image of `x`, an element of `src`, under the canonical map `src → self`.
    ///
    /// Defined for `Z → anything`, `Q → R` when denominators invert, and
    /// `Z/m → Z/m'` when `m' | m`.
    pub fn map_from(&self, src: &ScalarRing, x: &Scalar) -> Option<Scalar> {
        if src == self {
            return Some(x.clone());
        }
        match (src, x) {
            (ScalarRing::Integers, Scalar::Int(n)) => Some(self.from_bigint(n)),
            (ScalarRing::Rationals, Scalar::Rat(q)) => self.from_rational(q),
            (ScalarRing::IntegersMod(m) | ScalarRing::PrimeField(m), Scalar::Mod(r)) => {
                let target = self.modulus()?;
                (m % target == 0).then(|| Scalar::Mod(r % target))
            }
            _ => None,
        }
    }

    pub fn is_zero(&self, x: &Scalar) -> bool {
        match x {
            Scalar::Int(n) => n.is_zero(),
            Scalar::Rat(q) => q.is_zero(),
            Scalar::Mod(r) => *r == 0,
        }
    }

    pub fn is_one(&self, x: &Scalar) -> bool {
        match x {
            Scalar::Int(n) => n.is_one(),
            Scalar::Rat(q) => q.is_one(),
            Scalar::Mod(r) => *r == 1,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x + y),
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Scalar::Mod(x), Scalar::Mod(y)) => {
                let m = self.modulus().expect("residue ring");
                Scalar::Mod(((*x as u128 + *y as u128) % m as u128) as u64)
            }
            _ => panic!("scalar kind mismatch"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Int(x) => Scalar::Int(-x),
            Scalar::Rat(x) => Scalar::Rat(-x),
            Scalar::Mod(x) => {
                let m = self.modulus().expect("residue ring");
                Scalar::Mod(if *x == 0 { 0 } else { m - x })
            }
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x * y),
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(mul_mod(*x, *y, self.modulus().expect("residue ring"))),
            _ => panic!("scalar kind mismatch"),
        }
    }

    pub fn pow(&self, a: &Scalar, e: u32) -> Scalar {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match a {
            Scalar::Int(x) => (x.is_one() || (-x).is_one()).then(|| Scalar::Int(x.clone())),
            Scalar::Rat(x) => (!x.is_zero()).then(|| Scalar::Rat(x.recip())),
            Scalar::Mod(x) => inv_mod(*x, self.modulus().expect("residue ring")).map(Scalar::Mod),
        }
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        self.inv(a).is_some()
    }

    /// `a / b` when the quotient exists in this ring.
    pub fn div_exact(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        match (a, b) {
            (Scalar::Int(x), Scalar::Int(y)) => {
                if y.is_zero() {
                    return None;
                }
                let (q, r) = x.div_rem(y);
                r.is_zero().then_some(Scalar::Int(q))
            }
            _ => Some(self.mul(a, &self.inv(b)?)),
        }
    }

    /// Integer value of an integral element (residues map to `0..m`).
    pub fn to_integer(&self, a: &Scalar) -> Option<BigInt> {
        match a {
            Scalar::Int(x) => Some(x.clone()),
            Scalar::Rat(q) => q.is_integer().then(|| q.to_integer()),
            Scalar::Mod(r) => Some(BigInt::from(*r)),
        }
    }

    /// True if the element prints with a leading minus sign.
    pub fn is_negative(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Int(x) => x.is_negative(),
            Scalar::Rat(q) => q.is_negative(),
            Scalar::Mod(_) => false,
        }
    }

    pub fn render(&self, a: &Scalar) -> String {
        match a {
            Scalar::Int(x) => x.to_string(),
            Scalar::Rat(q) if q.is_integer() => q.numer().to_string(),
            Scalar::Rat(q) => format!("{}/{}", q.numer(), q.denom()),
            Scalar::Mod(r) => r.to_string(),
        }
    }

    pub fn name(&self) -> String {
        match self {
            ScalarRing::Integers => "Z".into(),
            ScalarRing::Rationals => "Q".into(),
            ScalarRing::IntegersMod(m) => format!("Z/{m}"),
            ScalarRing::PrimeField(p) => format!("F_{p}"),
        }
    }
}

impl fmt::Display for ScalarRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_by_trial_division() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(ScalarRing::prime_field(9).is_err());
    }

    #[test]
    fn modular_inverse() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(6, 9), None);
        let f = ScalarRing::PrimeField(5);
        assert_eq!(f.inv(&Scalar::Mod(2)), Some(Scalar::Mod(3)));
    }

    #[test]
    fn rational_reduction() {
        let f = ScalarRing::PrimeField(5);
        let q = BigRational::new(24.into(), 5.into());
        assert_eq!(f.from_rational(&q), None);
        let q = BigRational::new(24.into(), 7.into());
        // 24/7 = 4 * 3 = 12 = 2 mod 5
        assert_eq!(f.from_rational(&q), Some(Scalar::Mod(2)));
        assert_eq!(ScalarRing::Integers.from_rational(&q), None);
    }

    #[test]
    fn residue_to_residue() {
        let z9 = ScalarRing::IntegersMod(9);
        let f3 = ScalarRing::PrimeField(3);
        assert_eq!(f3.map_from(&z9, &Scalar::Mod(7)), Some(Scalar::Mod(1)));
        assert_eq!(z9.map_from(&f3, &Scalar::Mod(1)), None);
    }

    #[test]
    fn integer_exact_division() {
        let z = ScalarRing::Integers;
        assert_eq!(z.div_exact(&z.from_i64(12), &z.from_i64(-4)), Some(z.from_i64(-3)));
        assert_eq!(z.div_exact(&z.from_i64(12), &z.from_i64(5)), None);
    }
}
