//! Prime fields F_q with deterministic square roots, and the search for primes
//! in which a list of rational numbers are all squares.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ntheory::{is_prime, mod_inv, mul_mod, pow_mod};

/// The prime field F_q, `q` an odd prime below 2^32.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if q == 2 {
            return Err(Error::InvalidInput("characteristic 2 is not supported".into()));
        }
        if q >= 1 << 32 {
            return Err(Error::InvalidInput(format!("prime {q} exceeds 2^32")));
        }
        Ok(Self { q })
    }

    pub fn characteristic(&self) -> u64 {
        self.q
    }

    pub fn elem(&self, v: i64) -> Fp {
        Fp { value: crate::ntheory::residue(v, self.q), q: self.q }
    }

    pub fn zero(&self) -> Fp {
        self.elem(0)
    }

    pub fn one(&self) -> Fp {
        self.elem(1)
    }

    /// All elements `0, 1, ..., q-1`.
    pub fn elements(&self) -> impl Iterator<Item = Fp> + '_ {
        (0..self.q).map(move |v| Fp { value: v, q: self.q })
    }

    /// Image of a rational number, or `None` when `q` divides its denominator.
    pub fn reduce_rational(&self, x: &BigRational) -> Option<Fp> {
        let qb = BigInt::from(self.q);
        let den = residue_big(x.denom(), &qb);
        if den == 0 {
            return None;
        }
        let num = residue_big(x.numer(), &qb);
        let inv = mod_inv(den, self.q)?;
        Some(Fp { value: mul_mod(num, inv, self.q), q: self.q })
    }

    /// A fixed square root of `-1`, if `q ≡ 1 mod 4`.
    pub fn sqrt_minus_one(&self) -> Option<Fp> {
        sqrt_mod(self.elem(-1))
    }
}

fn residue_big(x: &BigInt, q: &BigInt) -> u64 {
    let r = ((x % q) + q) % q;
    r.to_u64().expect("residue below q")
}

/// An element of a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    value: u64,
    q: u64,
}

impl Fp {
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn characteristic(self) -> u64 {
        self.q
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn is_one(self) -> bool {
        self.value == 1
    }

    pub fn inv(self) -> Result<Fp> {
        if self.value == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Fp { value: pow_mod(self.value, self.q - 2, self.q), q: self.q })
    }

    pub fn checked_div(self, other: Fp) -> Result<Fp> {
        Ok(self * other.inv()?)
    }

    pub fn pow(self, e: u64) -> Fp {
        Fp { value: pow_mod(self.value, e, self.q), q: self.q }
    }

    pub fn square(self) -> Fp {
        self * self
    }

    /// Legendre symbol as `1`, `-1` or `0`.
    pub fn legendre(self) -> i8 {
        if self.value == 0 {
            return 0;
        }
        if pow_mod(self.value, (self.q - 1) / 2, self.q) == 1 {
            1
        } else {
            -1
        }
    }

    pub fn is_square(self) -> bool {
        self.legendre() >= 0
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        assert_eq!(self.q, rhs.q, "mixed characteristics");
        Fp { value: (self.value + rhs.value) % self.q, q: self.q }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self + (-rhs)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp { value: (self.q - self.value) % self.q, q: self.q }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        assert_eq!(self.q, rhs.q, "mixed characteristics");
        Fp { value: mul_mod(self.value, rhs.value, self.q), q: self.q }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for Fp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.value)
    }
}

/// Square root by Tonelli-Shanks. Of the two roots the one with the smaller
/// representative in `[0, q)` is returned.
pub fn sqrt_mod(a: Fp) -> Option<Fp> {
    let q = a.q;
    if a.value == 0 {
        return Some(a);
    }
    if a.legendre() != 1 {
        return None;
    }
    let root = if q % 4 == 3 {
        pow_mod(a.value, (q + 1) / 4, q)
    } else {
        let mut s = q - 1;
        let mut e = 0;
        while s.is_multiple_of(2) {
            s /= 2;
            e += 1;
        }
        let z = (2..q).find(|&z| Fp { value: z, q }.legendre() == -1).expect("non-residue exists");
        let mut c = pow_mod(z, s, q);
        let mut x = pow_mod(a.value, s.div_ceil(2), q);
        let mut t = pow_mod(a.value, s, q);
        let mut m = e;
        while t != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt != 1 {
                tt = mul_mod(tt, tt, q);
                i += 1;
            }
            let b = pow_mod(c, 1 << (m - i - 1), q);
            x = mul_mod(x, b, q);
            c = mul_mod(b, b, q);
            t = mul_mod(t, c, q);
            m = i;
        }
        x
    };
    Some(Fp { value: root.min(q - root), q })
}

/// A list of nonzero rationals that must all be squares in the target field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicandRequest {
    radicands: Vec<BigRational>,
    context: String,
}

impl RadicandRequest {
    pub fn new(radicands: Vec<BigRational>, context: impl Into<String>) -> Result<Self> {
        if radicands.iter().any(Zero::is_zero) {
            return Err(Error::InvalidInput("radicands must be nonzero".into()));
        }
        Ok(Self { radicands, context: context.into() })
    }

    pub fn from_integers(values: &[i64], context: impl Into<String>) -> Result<Self> {
        Self::new(values.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect(), context)
    }

    pub fn radicands(&self) -> &[BigRational] {
        &self.radicands
    }

    pub fn context(&self) -> &str {
        &self.context
    }

    /// True when `q` divides no numerator or denominator and every radicand is a nonzero square mod `q`.
    pub fn splits_at(&self, q: u64) -> bool {
        let Ok(field) = PrimeField::new(q) else { return false };
        let qb = BigInt::from(q);
        self.radicands.iter().all(|r| {
            if residue_big(r.numer(), &qb) == 0 {
                return false;
            }
            field.reduce_rational(r).is_some_and(|x| x.legendre() == 1)
        })
    }
}

/// The first `count` odd primes `q > lower` at which every radicand is a square.
pub fn find_splitting_prime(req: &RadicandRequest, lower: u64, count: usize, search_bound: u64) -> Result<Vec<u64>> {
    if lower < 3 {
        return Err(Error::InvalidInput("search must start at 3 or above".into()));
    }
    let mut out = Vec::with_capacity(count);
    let mut q = lower + 1;
    while out.len() < count {
        if q > search_bound {
            return Err(Error::NoSplittingPrime(search_bound));
        }
        if is_prime(q) && req.splits_at(q) {
            out.push(q);
        }
        q += 1;
    }
    Ok(out)
}
