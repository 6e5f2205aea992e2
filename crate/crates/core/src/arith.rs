//! Exact integer, rational and fixed-precision p-adic primitives: valuations,
//! quadratic characters, square classes.
//!
//! Everything here is immutable and pure. p-adic values are residues modulo
//! p^N with an explicit precision budget `N`; a valuation query is answered
//! only when the valuation is certifiably below `N` and fails loudly
//! otherwise, because silent precision loss is the classic bug in local
//! computations.

use crate::{Error, Rat};
use core::cmp::Ordering;
use core::fmt;
use num_traits::Zero;

/// A p-adic valuation: a (possibly negative) integer, or ∞ for the value 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    /// min(self, cap) as a plain integer, treating ∞ as larger than any cap.
    pub fn min_with(self, cap: i64) -> i64 {
        match self {
            Valuation::Finite(v) => v.min(cap),
            Valuation::Infinity => cap,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
            (Valuation::Infinity, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Finite(_), Valuation::Infinity) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl core::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// Exact p-adic valuation of an integer, with ord_p(0) = ∞.
pub fn ord_int(p: u64, n: i128) -> Valuation {
    debug_assert!(p >= 2);
    if n == 0 {
        return Valuation::Infinity;
    }
    let p = p as i128;
    let mut n = n.unsigned_abs() as i128;
    let mut k = 0i64;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    Valuation::Finite(k)
}

/// Exact p-adic valuation of a rational, negative for non-integral inputs.
pub fn ord(p: u64, x: &Rat) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinity;
    }
    let num = ord_int(p, *x.numer()).finite().expect("nonzero numerator");
    let den = ord_int(p, *x.denom()).finite().expect("nonzero denominator");
    Valuation::Finite(num - den)
}

/// The quadratic character η at an odd prime p of ℚ:
/// 1 on unit squares, −1 on unit non-squares, −p on multiples of p.
///
/// η is never applied at p = 2 (all dyadic factors go through the β oracles),
/// so p = 2 is rejected rather than silently extended.
pub fn eta(p: u64, x: i128) -> Result<i64, Error> {
    if p == 2 {
        return Err(Error::EtaAtEvenPrime);
    }
    debug_assert!(p > 2 && p % 2 == 1);
    let r = x.rem_euclid(p as i128) as u64;
    if r == 0 {
        return Ok(-(p as i64));
    }
    // Euler's criterion: r^((p-1)/2) mod p is 1 for squares, p-1 otherwise.
    let ls = mod_pow(r as u128, ((p - 1) / 2) as u128, p as u128);
    Ok(if ls == 1 { 1 } else { -1 })
}

/// x^e mod m with u128 intermediates (m ≤ 2^64 keeps products in range).
pub(crate) fn mod_pow(mut x: u128, mut e: u128, m: u128) -> u128 {
    debug_assert!(m > 0 && m <= 1 << 64);
    let mut acc: u128 = 1 % m;
    x %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * x % m;
        }
        x = x * x % m;
        e >>= 1;
    }
    acc
}

/// Largest N such that p^N fits the 64-bit residue representation.
pub fn max_precision(p: u64) -> u32 {
    debug_assert!(p >= 2);
    let mut n = 0u32;
    let mut acc: u128 = 1;
    let limit: u128 = 1 << 64;
    while acc <= limit / p as u128 {
        acc *= p as u128;
        n += 1;
    }
    n
}

/// A p-adic integer known modulo p^N: residue in [0, p^N).
///
/// Arithmetic is exact modulo p^N. Valuation queries are answered only when
/// the valuation is certifiably < N; a zero residue means "valuation ≥ N,
/// possibly ∞" and such queries fail with `InsufficientPrecision`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadicApprox {
    p: u64,
    prec: u32,
    modulus: u128,
    residue: u128,
}

impl PadicApprox {
    /// Embed an integer modulo p^prec.
    pub fn from_int(p: u64, prec: u32, n: i128) -> Result<Self, Error> {
        let modulus = checked_power(p, prec)?;
        let residue = n.rem_euclid(modulus as i128) as u128;
        Ok(PadicApprox {
            p,
            prec,
            modulus,
            residue,
        })
    }

    /// Embed a p-integral rational (denominator prime to p) modulo p^prec.
    pub fn from_rat(p: u64, prec: u32, x: &Rat) -> Result<Self, Error> {
        let den = PadicApprox::from_int(p, prec, *x.denom())?;
        let num = PadicApprox::from_int(p, prec, *x.numer())?;
        num.mul(&den.invert()?)
    }

    pub fn zero(p: u64, prec: u32) -> Result<Self, Error> {
        PadicApprox::from_int(p, prec, 0)
    }

    pub fn one(p: u64, prec: u32) -> Result<Self, Error> {
        PadicApprox::from_int(p, prec, 1)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn residue(&self) -> u128 {
        self.residue
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    /// Residue modulo p^k for k ≤ prec.
    pub fn residue_mod(&self, k: u32) -> u128 {
        assert!(k <= self.prec, "residue_mod beyond carried precision");
        self.residue % power(self.p, k)
    }

    pub fn is_zero_residue(&self) -> bool {
        self.residue == 0
    }

    /// Truncate to a lower precision.
    pub fn truncate(&self, prec: u32) -> Self {
        assert!(prec <= self.prec, "cannot raise precision by truncation");
        let modulus = power(self.p, prec);
        PadicApprox {
            p: self.p,
            prec,
            modulus,
            residue: self.residue % modulus,
        }
    }

    fn align(&self, other: &Self) -> (Self, Self) {
        assert_eq!(self.p, other.p, "mixed primes in p-adic arithmetic");
        let prec = self.prec.min(other.prec);
        (self.truncate(prec), other.truncate(prec))
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        let (a, b) = self.align(other);
        Ok(PadicApprox {
            residue: (a.residue + b.residue) % a.modulus,
            ..a
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        let (a, b) = self.align(other);
        Ok(PadicApprox {
            residue: (a.residue + a.modulus - b.residue) % a.modulus,
            ..a
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        let (a, b) = self.align(other);
        Ok(PadicApprox {
            residue: a.residue * b.residue % a.modulus,
            ..a
        })
    }

    pub fn neg(&self) -> Self {
        PadicApprox {
            residue: (self.modulus - self.residue) % self.modulus,
            ..*self
        }
    }

    pub fn mul_int(&self, n: i128) -> Result<Self, Error> {
        self.mul(&PadicApprox::from_int(self.p, self.prec, n)?)
    }

    /// The exact valuation, certified to be < prec.
    pub fn valuation(&self) -> Result<u32, Error> {
        if self.residue == 0 {
            return Err(Error::InsufficientPrecision {
                p: self.p,
                available: self.prec,
                needed: self.prec + 1,
            });
        }
        let mut r = self.residue;
        let mut k = 0u32;
        while r % self.p as u128 == 0 {
            r /= self.p as u128;
            k += 1;
        }
        Ok(k)
    }

    /// min(valuation, cap); certified because valuations ≥ cap are clamped.
    pub fn valuation_capped(&self, cap: u32) -> u32 {
        assert!(cap <= self.prec, "cap beyond carried precision");
        match self.valuation() {
            Ok(v) => v.min(cap),
            Err(_) => cap,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.residue % self.p as u128 != 0
    }

    /// Inverse of a unit, exact modulo p^prec.
    pub fn invert(&self) -> Result<Self, Error> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        // Hensel lift of the mod-p inverse, doubling digits per step.
        let p = self.p as u128;
        let mut inv = mod_pow(self.residue % p, p - 2, p);
        let mut prec = 1u32;
        while prec < self.prec {
            prec = (prec * 2).min(self.prec);
            let m = power(self.p, prec);
            let r = self.residue % m;
            // inv <- inv * (2 - r*inv) mod p^prec
            let t = (2 + m - r * inv % m) % m;
            inv = inv * t % m;
        }
        Ok(PadicApprox {
            residue: inv % self.modulus,
            ..*self
        })
    }

    /// Exact division: requires ord(divisor) ≤ ord(self) (with zero residues
    /// treated as "≥ prec"). The quotient carries prec − ord(divisor) digits.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, Error> {
        let (a, b) = self.align(divisor);
        let k = b.valuation()?;
        let pk = power(a.p, k);
        if a.residue % pk != 0 {
            return Err(Error::InsufficientPrecision {
                p: a.p,
                available: a.prec,
                needed: a.prec + k,
            });
        }
        let prec = a.prec - k;
        let unit = PadicApprox {
            p: a.p,
            prec,
            modulus: power(a.p, prec),
            residue: (b.residue / pk) % power(a.p, prec),
        };
        let num = PadicApprox {
            p: a.p,
            prec,
            modulus: power(a.p, prec),
            residue: (a.residue / pk) % power(a.p, prec),
        };
        num.mul(&unit.invert()?)
    }

    /// p^k · self at the same stated precision. Sound: p^k·(x + O(p^N)) is
    /// known modulo p^{N+k}, a fortiori modulo p^N.
    pub fn mul_prime_power(&self, k: u32) -> Result<Self, Error> {
        self.mul_int(checked_power(self.p, k)? as i128)
    }

    /// Whether a certified unit is a square in ℤ_p^×.
    ///
    /// For odd p this is the residue character; for p = 2 it is u ≡ 1 (mod 8),
    /// which needs at least 3 carried digits.
    pub fn is_unit_square(&self) -> Result<bool, Error> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        if self.p == 2 {
            if self.prec < 3 {
                return Err(Error::InsufficientPrecision {
                    p: 2,
                    available: self.prec,
                    needed: 3,
                });
            }
            Ok(self.residue % 8 == 1)
        } else {
            Ok(eta(self.p, (self.residue % self.p as u128) as i128)? == 1)
        }
    }

    /// η(self) at an odd prime: only divisibility by p and the mod-p residue
    /// matter, so one carried digit certifies the answer.
    pub fn eta(&self) -> Result<i64, Error> {
        eta(self.p, (self.residue % self.p as u128) as i128)
    }
}

impl fmt::Display for PadicApprox {
    /// Prints `u*p^k (mod p^N)` with u the unit part, or `0 (mod p^N)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.residue == 0 {
            return write!(f, "0 (mod {}^{})", self.p, self.prec);
        }
        let k = self.valuation().expect("nonzero residue");
        let u = self.residue / power(self.p, k);
        write!(f, "{}*{}^{} (mod {}^{})", u, self.p, k, self.p, self.prec)
    }
}

/// p^k as u128; panics if it does not fit the residue representation.
pub fn power(p: u64, k: u32) -> u128 {
    checked_power(p, k).expect("prime power exceeds residue representation")
}

pub(crate) fn checked_power(p: u64, k: u32) -> Result<u128, Error> {
    let cap = max_precision(p);
    if k > cap {
        return Err(Error::PrecisionCapExceeded {
            p,
            requested: k,
            cap,
        });
    }
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc *= p as u128;
    }
    Ok(acc)
}
