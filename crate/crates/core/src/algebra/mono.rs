//! Exponent vectors.

use std::cmp::Ordering;

/// Largest number of variables a polynomial ring may carry.
pub const MAX_VARS: usize = 8;

/// An exponent vector. Unused trailing slots are zero. Ordered by graded
/// reverse lexicographic order (larger is "leading").
#[derive(Copy, Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Mono(pub(crate) [i16; MAX_VARS]);

impl Mono {
    pub const ONE: Mono = Mono([0; MAX_VARS]);

    pub fn from_exps(exps: &[i32]) -> Mono {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = [0i16; MAX_VARS];
        for (slot, &e) in m.iter_mut().zip(exps) {
            *slot = i16::try_from(e).expect("exponent out of range");
        }
        Mono(m)
    }

    pub fn var(i: usize) -> Mono {
        let mut m = Mono::ONE;
        m.0[i] = 1;
        m
    }

    pub fn exp(&self, i: usize) -> i32 {
        self.0[i] as i32
    }

    pub fn with_exp(mut self, i: usize, e: i32) -> Mono {
        self.0[i] = i16::try_from(e).expect("exponent out of range");
        self
    }

    pub fn exps(&self, nvars: usize) -> Vec<i32> {
        self.0[..nvars].iter().map(|&e| e as i32).collect()
    }

    pub fn degree(&self) -> i32 {
        self.0.iter().map(|&e| e as i32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut m = [0i16; MAX_VARS];
        for i in 0..MAX_VARS {
            m[i] = self.0[i].checked_add(other.0[i]).expect("exponent overflow");
        }
        Mono(m)
    }

    /// `self / other` as an exponent difference (may be negative).
    pub fn div(&self, other: &Mono) -> Mono {
        let mut m = [0i16; MAX_VARS];
        for i in 0..MAX_VARS {
            m[i] = self.0[i] - other.0[i];
        }
        Mono(m)
    }

    /// Whether `other` is a multiple of `self`; the variable `skip` (the
    /// Laurent variable, a unit) is ignored.
    pub fn divides(&self, other: &Mono, skip: Option<usize>) -> bool {
        (0..MAX_VARS).all(|i| Some(i) == skip || self.0[i] <= other.0[i])
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        let mut m = [0i16; MAX_VARS];
        for i in 0..MAX_VARS {
            m[i] = self.0[i].max(other.0[i]);
        }
        Mono(m)
    }

    pub fn is_coprime(&self, other: &Mono) -> bool {
        (0..MAX_VARS).all(|i| self.0[i] <= 0 || other.0[i] <= 0)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for i in (0..MAX_VARS).rev() {
                if self.0[i] != other.0[i] {
                    return other.0[i].cmp(&self.0[i]);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
