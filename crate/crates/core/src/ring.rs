//! Base rings: prime fields, the rationals, the integers and residue rings Z/p^k.
//!
//! Elements of every ring are stored as [`Scalar`] (an arbitrary-precision
//! fraction). For the integer-like rings the denominator is always 1 and the
//! numerator is the canonical representative (in `[0, n)` for residues).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

pub type Scalar = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    PrimeField(u64),
    Rational,
    Integer,
    /// Z/p^k with k >= 1.
    Residue { p: u64, k: u32 },
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Returns `(p, k)` with `n = p^k`, or `None` if `n` is not a prime power.
pub fn prime_power_u64(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 0;
    if is_prime_u64(n) {
        return Some((n, 1));
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            p = d;
            break;
        }
        d += 1;
    }
    if p == 0 {
        return None;
    }
    let (mut m, mut k) = (n, 0);
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

/// Prime-power test for arbitrary integers: `Some((p, e))` when `|n| = p^e`, e >= 1.
pub fn prime_power_big(n: &BigInt) -> Option<(BigInt, u32)> {
    let n = n.abs();
    if n < BigInt::from(2) {
        return None;
    }
    let mut p = None;
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            p = Some(d.clone());
            break;
        }
        d += 1;
    }
    let p = p.unwrap_or_else(|| n.clone());
    let (mut m, mut e) = (n, 0u32);
    while (&m % &p).is_zero() {
        m /= &p;
        e += 1;
    }
    m.is_one().then_some((p, e))
}

fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

impl Ring {
    pub fn prime_field(p: u64) -> Result<Ring> {
        if !is_prime_u64(p) {
            return Err(Error::UnsupportedRing(format!("{p} is not prime")));
        }
        Ok(Ring::PrimeField(p))
    }

    pub fn residue(n: u64) -> Result<Ring> {
        let (p, k) = prime_power_u64(n)
            .ok_or_else(|| Error::UnsupportedRing(format!("Z/{n}: modulus is not a prime power")))?;
        Ok(Ring::Residue { p, k })
    }

    /// Parses `F_p`, `Fp`, `GF(p)`, `Q`, `Z`, `Z/n` or the long forms
    /// `prime-field(p)`, `rational`, `integer`, `residue(n)`. `Z/p` is the prime field.
    pub fn parse(s: &str) -> Result<Ring> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let num = |x: &str| x.parse::<u64>().map_err(|_| Error::Parse(format!("bad ring {s:?}")));
        let inner = |x: &str, pre: &str| x.strip_prefix(pre).and_then(|r| r.strip_suffix(')')).map(str::to_string);
        match t.as_str() {
            "Q" | "rational" => Ok(Ring::Rational),
            "Z" | "integer" => Ok(Ring::Integer),
            _ => {
                if let Some(p) = inner(&t, "GF(").or_else(|| inner(&t, "prime-field(")) {
                    Ring::prime_field(num(&p)?)
                } else if let Some(p) = t.strip_prefix("F_").or_else(|| t.strip_prefix('F')) {
                    Ring::prime_field(num(p)?)
                } else if let Some(n) = t.strip_prefix("Z/").map(str::to_string).or_else(|| inner(&t, "residue(")) {
                    let n = num(&n)?;
                    match prime_power_u64(n) {
                        Some((p, 1)) => Ok(Ring::PrimeField(p)),
                        _ => Ring::residue(n),
                    }
                } else {
                    Err(Error::Parse(format!("unknown ring {s:?}")))
                }
            }
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, Ring::PrimeField(_) | Ring::Rational)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Ring::PrimeField(_) | Ring::Residue { .. })
    }

    /// The modulus `n` of a finite ring.
    pub fn modulus(&self) -> Option<BigInt> {
        match self {
            Ring::PrimeField(p) => Some(BigInt::from(*p)),
            Ring::Residue { p, k } => Some(BigInt::from(*p).pow(*k)),
            _ => None,
        }
    }

    pub fn modulus_u64(&self) -> Option<u64> {
        self.modulus().and_then(|m| m.to_u64())
    }

    /// Residue characteristic prime for the local rings Z/p^k and F_p.
    pub fn prime(&self) -> Option<u64> {
        match self {
            Ring::PrimeField(p) | Ring::Residue { p, .. } => Some(*p),
            _ => None,
        }
    }

    pub fn characteristic(&self) -> BigInt {
        self.modulus().unwrap_or_else(BigInt::zero)
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.reduce_int(&BigInt::from(v))
    }

    pub fn from_int(&self, v: &BigInt) -> Scalar {
        self.reduce_int(v)
    }

    fn reduce_int(&self, v: &BigInt) -> Scalar {
        match self.modulus() {
            Some(m) => Scalar::from_integer(v.mod_floor(&m)),
            None => Scalar::from_integer(v.clone()),
        }
    }

    /// Maps an arbitrary fraction into the ring; fails when the denominator is not invertible.
    pub fn coerce(&self, v: &Scalar) -> Result<Scalar> {
        match self {
            Ring::Rational => Ok(v.clone()),
            Ring::Integer => {
                if v.is_integer() {
                    Ok(v.clone())
                } else {
                    Err(Error::Parse(format!("{v} is not an integer")))
                }
            }
            _ => {
                let num = self.reduce_int(v.numer());
                let den = self.reduce_int(v.denom());
                let inv = self
                    .inv(&den)
                    .ok_or_else(|| Error::Parse(format!("denominator of {v} is not a unit")))?;
                Ok(self.mul(&num, &inv))
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Ring::Rational => a + b,
            Ring::Integer => Scalar::from_integer(a.numer() + b.numer()),
            _ => self.reduce_int(&(a.numer() + b.numer())),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Ring::Rational => a - b,
            Ring::Integer => Scalar::from_integer(a.numer() - b.numer()),
            _ => self.reduce_int(&(a.numer() - b.numer())),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            Ring::Rational => a * b,
            Ring::Integer => Scalar::from_integer(a.numer() * b.numer()),
            _ => self.reduce_int(&(a.numer() * b.numer())),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match self {
            Ring::Rational | Ring::Integer => -a,
            _ => self.reduce_int(&-a.numer()),
        }
    }

    pub fn pow(&self, a: &Scalar, e: u64) -> Scalar {
        let mut r = self.one();
        for _ in 0..e {
            r = self.mul(&r, a);
        }
        r
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        match self {
            Ring::Rational => !a.is_zero(),
            Ring::Integer => a.numer().abs().is_one(),
            Ring::PrimeField(_) => !a.is_zero(),
            Ring::Residue { p, .. } => !(a.numer() % BigInt::from(*p)).is_zero(),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if !self.is_unit(a) {
            return None;
        }
        match self {
            Ring::Rational => Some(a.recip()),
            Ring::Integer => Some(a.clone()),
            _ => {
                let m = self.modulus().unwrap();
                let g = a.numer().extended_gcd(&m);
                Some(self.reduce_int(&g.x))
            }
        }
    }

    /// Exact quotient `a / b` when `b` divides `a` in the ring.
    pub fn div_exact(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        if let Some(inv) = self.inv(b) {
            return Some(self.mul(a, &inv));
        }
        match self {
            Ring::Integer => {
                if b.is_zero() {
                    return a.is_zero().then(|| self.zero());
                }
                let (q, r) = a.numer().div_rem(b.numer());
                r.is_zero().then(|| Scalar::from_integer(q))
            }
            Ring::Residue { p, k } => {
                let vb = self.valuation(b);
                let va = self.valuation(a);
                if va < vb {
                    return None;
                }
                if vb == *k {
                    // b = 0 divides only 0
                    return a.is_zero().then(|| self.zero());
                }
                let pe = BigInt::from(*p).pow(vb);
                let a1 = Scalar::from_integer(a.numer() / &pe);
                let b1 = Scalar::from_integer(b.numer() / &pe);
                let u = self.inv(&b1)?;
                Some(self.mul(&a1, &u))
            }
            _ => None,
        }
    }

    /// p-adic valuation capped at k (zero has valuation k). Residue rings only.
    pub fn valuation(&self, a: &Scalar) -> u32 {
        match self {
            Ring::Residue { p, k } => {
                if a.is_zero() {
                    return *k;
                }
                let p = BigInt::from(*p);
                let mut v = 0;
                let mut x = a.numer().clone();
                while (&x % &p).is_zero() {
                    x /= &p;
                    v += 1;
                }
                v
            }
            Ring::PrimeField(_) | Ring::Rational => u32::from(a.is_zero()),
            Ring::Integer => 0,
        }
    }

    /// Ordering key used to choose Smith pivots: smaller is preferred.
    pub(crate) fn pivot_key(&self, a: &Scalar) -> BigInt {
        match self {
            Ring::Integer => a.numer().abs(),
            Ring::Residue { .. } => BigInt::from(self.valuation(a)),
            _ => BigInt::zero(),
        }
    }

    /// Splits `a = c * u` with `u` a unit and `c` the canonical associate; returns `(c, u^{-1})`.
    pub(crate) fn normalize_associate(&self, a: &Scalar) -> (Scalar, Scalar) {
        match self {
            Ring::Rational | Ring::PrimeField(_) => {
                if a.is_zero() {
                    (self.zero(), self.one())
                } else {
                    (self.one(), self.inv(a).unwrap())
                }
            }
            Ring::Integer => {
                if a.is_negative() {
                    (-a, int(-1))
                } else {
                    (a.clone(), self.one())
                }
            }
            Ring::Residue { p, k } => {
                let v = self.valuation(a);
                if v == *k {
                    return (self.zero(), self.one());
                }
                let c = self.from_int(&BigInt::from(*p).pow(v));
                let u = self.div_exact(a, &c).unwrap();
                (c, self.inv(&u).unwrap())
            }
        }
    }

    /// Canonical form of an elementary divisor: nonnegative over Z, p^e over Z/p^k
    /// (with zero written as p^k), 1 or 0 over fields.
    pub fn canonical_divisor(&self, a: &Scalar) -> BigInt {
        match self {
            Ring::Residue { p, k } => BigInt::from(*p).pow(self.valuation(a).min(*k)),
            Ring::Integer => a.numer().abs(),
            _ => {
                if a.is_zero() {
                    BigInt::zero()
                } else {
                    BigInt::one()
                }
            }
        }
    }

    /// Number of elements of `R / (d)` for a canonical divisor `d`; `None` if infinite.
    pub fn cyclic_order(&self, d: &BigInt) -> Option<BigInt> {
        match self {
            Ring::Rational => d.is_one().then(BigInt::one),
            Ring::Integer => (!d.is_zero()).then(|| d.abs()),
            Ring::PrimeField(p) => Some(if d.is_zero() { BigInt::from(*p) } else { BigInt::one() }),
            Ring::Residue { p, k } => {
                let m = BigInt::from(*p).pow(*k);
                Some(if d.is_zero() { m } else { d.gcd(&m) })
            }
        }
    }

    /// Canonical representative of `x` modulo the canonical divisor `d`.
    pub fn reduce_mod_divisor(&self, x: &Scalar, d: &BigInt) -> Scalar {
        match self {
            Ring::Rational | Ring::PrimeField(_) => {
                if d.is_zero() {
                    x.clone()
                } else {
                    self.zero()
                }
            }
            Ring::Integer => {
                if d.is_zero() {
                    x.clone()
                } else {
                    Scalar::from_integer(x.numer().mod_floor(d))
                }
            }
            Ring::Residue { .. } => Scalar::from_integer(x.numer().mod_floor(d)),
        }
    }

    /// Whether a canonical divisor generates the unit ideal.
    pub fn divisor_is_unit(&self, d: &BigInt) -> bool {
        d.is_one()
    }

    /// Canonical divisor of the zero ideal (free cyclic summand).
    pub fn free_divisor(&self) -> BigInt {
        match self {
            Ring::Residue { p, k } => BigInt::from(*p).pow(*k),
            _ => BigInt::zero(),
        }
    }

    /// Canonical generator of `gcd(a, b)` for canonical divisors.
    pub fn divisor_gcd(&self, a: &BigInt, b: &BigInt) -> BigInt {
        match self {
            Ring::Rational | Ring::PrimeField(_) => {
                if a.is_zero() && b.is_zero() {
                    BigInt::zero()
                } else {
                    BigInt::one()
                }
            }
            _ => a.gcd(b),
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let v: Scalar = if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))?;
            let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Scalar::new(n, d)
        } else {
            let n: BigInt = s.parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))?;
            Scalar::from_integer(n)
        };
        self.coerce(&v)
    }

    pub fn format_elem(&self, a: &Scalar) -> String {
        match self {
            Ring::Rational => format!("{}/{}", a.numer(), a.denom()),
            _ => a.numer().to_string(),
        }
    }

    /// All elements of a finite ring in increasing order of representative.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        let n = self.modulus_u64()?;
        Some((0..n).map(|i| Scalar::from_integer(BigInt::from(i))).collect())
    }

    /// Uniform element for finite rings, integer in `[-bound, bound]` otherwise.
    pub fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> Scalar {
        match self.modulus_u64() {
            Some(n) => int(rng.gen_range(0..n) as i64),
            None => int(rng.gen_range(-bound..=bound)),
        }
    }

    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::PrimeField(p) => write!(f, "F_{p}"),
            Ring::Rational => write!(f, "Q"),
            Ring::Integer => write!(f, "Z"),
            Ring::Residue { p, k } => write!(f, "Z/{}", BigInt::from(*p).pow(*k)),
        }
    }
}
