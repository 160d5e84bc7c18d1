//! Exact arithmetic in prime residue fields F_q.
//!
//! Only prime fields are supported; residue extensions enter the library
//! through degree bookkeeping, never as explicit F_{q^k} elements. The
//! modulus is kept below 2^31 so products fit in u64 without overflow.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A prime field F_q, q prime, q < 2^31.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    q: u64,
}

/// An element of a prime field, stored reduced mod q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElement {
    value: u64,
    q: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl PrimeField {
    /// Builds F_q, verifying that q is prime and below 2^31.
    pub fn new(q: u64) -> Result<Self> {
        if q >= 1 << 31 {
            return Err(Error::IncompatibleModulus(format!("q = {q} exceeds 2^31")));
        }
        if !is_prime(q) {
            return Err(Error::IncompatibleModulus(format!("q = {q} is not prime")));
        }
        Ok(PrimeField { q })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Reduces an arbitrary signed integer into the field.
    pub fn elt(&self, v: i64) -> FieldElement {
        let q = self.q as i64;
        let mut r = v % q;
        if r < 0 {
            r += q;
        }
        FieldElement {
            value: r as u64,
            q: self.q,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.elt(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elt(1)
    }

    /// All nonzero elements, in order 1, 2, ..., q-1.
    pub fn units(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.q).map(move |v| FieldElement {
            value: v,
            q: self.q,
        })
    }

    /// The smallest primitive root of F_q*.
    pub fn canonical_generator(&self) -> FieldElement {
        if self.q == 2 {
            return self.one();
        }
        let order = self.q - 1;
        let primes = prime_factors(order);
        for g in 2..self.q {
            let g = self.elt(g as i64);
            if primes.iter().all(|&p| g.pow(order / p).value != 1) {
                return g;
            }
        }
        unreachable!("every prime field has a primitive root")
    }
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { q: self.q }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    pub fn add(&self, rhs: &FieldElement) -> FieldElement {
        debug_assert_eq!(self.q, rhs.q);
        FieldElement {
            value: (self.value + rhs.value) % self.q,
            q: self.q,
        }
    }

    pub fn sub(&self, rhs: &FieldElement) -> FieldElement {
        debug_assert_eq!(self.q, rhs.q);
        FieldElement {
            value: (self.value + self.q - rhs.value) % self.q,
            q: self.q,
        }
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement {
            value: (self.q - self.value) % self.q,
            q: self.q,
        }
    }

    pub fn mul(&self, rhs: &FieldElement) -> FieldElement {
        debug_assert_eq!(self.q, rhs.q);
        FieldElement {
            value: self.value * rhs.value % self.q,
            q: self.q,
        }
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = *self;
        let mut acc = FieldElement {
            value: 1,
            q: self.q,
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero (callers check first).
    pub fn inverse(&self) -> FieldElement {
        assert!(self.value != 0, "inverse of zero");
        self.pow(self.q - 2)
    }

    pub fn div(&self, rhs: &FieldElement) -> FieldElement {
        self.mul(&rhs.inverse())
    }

    /// Multiplicative order in F_q*.
    pub fn order(&self) -> u64 {
        assert!(self.value != 0);
        let group = self.q - 1;
        let mut ord = group;
        for p in prime_factors(group) {
            while ord.is_multiple_of(p) && self.pow(ord / p).value == 1 {
                ord /= p;
            }
        }
        ord
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn check_divides(n: u64, q: u64) -> Result<()> {
    if n == 0 || !(q - 1).is_multiple_of(n) {
        return Err(Error::IncompatibleModulus(format!(
            "n = {n} does not divide q - 1 = {}",
            q - 1
        )));
    }
    Ok(())
}

/// Tests whether a is an n-th power in F_q*, by the criterion
/// a^((q-1)/n) = 1. Requires n | q - 1 and a != 0.
pub fn nth_power_test(a: &FieldElement, n: u64) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::ZeroInput("nth_power_test"));
    }
    let q = a.q;
    check_divides(n, q)?;
    Ok(a.pow((q - 1) / n).value == 1)
}

/// The smallest element of F_q of exact multiplicative order m.
/// Requires m | q - 1.
pub fn primitive_root_of_unity(field: &PrimeField, m: u64) -> Result<FieldElement> {
    let q = field.modulus();
    check_divides(m, q)?;
    if m == 1 {
        return Ok(field.one());
    }
    let primes = prime_factors(m);
    for v in 2..q {
        let x = field.elt(v as i64);
        if x.pow(m).value == 1 && primes.iter().all(|&p| x.pow(m / p).value != 1) {
            return Ok(x);
        }
    }
    unreachable!("m | q - 1 guarantees an element of order m")
}

/// Discrete-log coordinate of a on kappa*/kappa*^n, relative to the
/// canonical (smallest) generator of F_q*. Additive in products.
pub fn unit_class(a: &FieldElement, n: u64) -> Result<u64> {
    if a.is_zero() {
        return Err(Error::ZeroInput("unit_class"));
    }
    let q = a.q;
    check_divides(n, q)?;
    let field = a.field();
    let g = field.canonical_generator();
    let mut acc = field.one();
    for k in 0..q - 1 {
        if acc == *a {
            return Ok(k % n);
        }
        acc = acc.mul(&g);
    }
    unreachable!("generator exhausts the unit group")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_rejects_composites() {
        assert!(PrimeField::new(6).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(5).is_ok());
    }

    #[test]
    fn nth_power_test_examples() {
        let f13 = PrimeField::new(13).unwrap();
        // oracle: cubes mod 13 enumerated directly
        let cubes: Vec<u64> = (1..13).map(|v| v * v * v % 13).collect();
        assert!(cubes.contains(&5));
        assert!(!cubes.contains(&2));
        assert!(nth_power_test(&f13.elt(5), 3).unwrap());
        assert!(!nth_power_test(&f13.elt(2), 3).unwrap());
        assert!(nth_power_test(&f13.elt(1), 3).unwrap());
        assert!(nth_power_test(&f13.elt(0), 3).is_err());
        assert!(nth_power_test(&f13.elt(2), 5).is_err());
    }

    #[test]
    fn primitive_roots() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(primitive_root_of_unity(&f5, 4).unwrap().value(), 2);
        assert_eq!(primitive_root_of_unity(&f5, 1).unwrap().value(), 1);
        let f13 = PrimeField::new(13).unwrap();
        assert_eq!(primitive_root_of_unity(&f13, 3).unwrap().value(), 3);
        assert!(primitive_root_of_unity(&f13, 5).is_err());
    }

    #[test]
    fn primitive_root_has_exact_order() {
        for q in [5u64, 7, 13, 17, 19, 41] {
            let f = PrimeField::new(q).unwrap();
            for m in 1..q {
                if (q - 1) % m != 0 {
                    continue;
                }
                let r = primitive_root_of_unity(&f, m).unwrap();
                assert_eq!(r.pow(m).value(), 1);
                for k in 1..m {
                    assert_ne!(r.pow(k).value(), 1, "q={q} m={m} k={k}");
                }
            }
        }
    }

    #[test]
    fn unit_class_examples() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(unit_class(&f5.elt(1), 4).unwrap(), 0);
        assert_eq!(unit_class(&f5.elt(2), 4).unwrap(), 1);
        assert_eq!(unit_class(&f5.elt(4), 4).unwrap(), 2);
    }

    #[test]
    fn unit_class_is_homomorphism_and_detects_powers() {
        // exhaustive over every prime q <= 41 and n in {2, 3, 4} with n | q - 1
        for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
            let f = PrimeField::new(q).unwrap();
            for n in [2u64, 3, 4] {
                if (q - 1) % n != 0 {
                    continue;
                }
                for a in f.units() {
                    let ca = unit_class(&a, n).unwrap();
                    assert_eq!(nth_power_test(&a, n).unwrap(), ca == 0);
                    for b in f.units() {
                        let cb = unit_class(&b, n).unwrap();
                        let cab = unit_class(&a.mul(&b), n).unwrap();
                        assert_eq!(cab, (ca + cb) % n);
                    }
                }
            }
        }
    }
}
