//! Univariate polynomials over a field ring, coefficients listed from degree 0.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ring::{Ring, Scalar};

pub type Poly = Vec<Scalar>;

pub fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn degree(p: &Poly) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn eval(ring: &Ring, p: &Poly, x: &Scalar) -> Scalar {
    p.iter().rev().fold(ring.zero(), |acc, c| ring.add(&ring.mul(&acc, x), c))
}

pub fn sub(ring: &Ring, a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let z = ring.zero();
    trim((0..n).map(|i| ring.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect())
}

pub fn mul(ring: &Ring, a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] = ring.add(&c[i + j], &ring.mul(x, y));
        }
    }
    trim(c)
}

/// `(q, r)` with `a = q b + r` and `deg r < deg b`.
pub fn divrem(ring: &Ring, a: &Poly, b: &Poly) -> (Poly, Poly) {
    let b = trim(b.clone());
    let db = degree(&b).expect("division by the zero polynomial");
    let lead_inv = ring.inv(&b[db]).expect("field");
    let mut r = trim(a.clone());
    let mut q = vec![ring.zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = ring.mul(&r[dr], &lead_inv);
        let s = dr - db;
        q[s] = ring.add(&q[s], &c);
        for (i, bi) in b.iter().enumerate() {
            r[s + i] = ring.sub(&r[s + i], &ring.mul(&c, bi));
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn monic(ring: &Ring, p: &Poly) -> Poly {
    let p = trim(p.clone());
    match p.last() {
        Some(l) => {
            let inv = ring.inv(l).expect("field");
            p.iter().map(|c| ring.mul(c, &inv)).collect()
        }
        None => p,
    }
}

pub fn gcd(ring: &Ring, a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while degree(&b).is_some() {
        let (_, r) = divrem(ring, &a, &b);
        a = b;
        b = r;
    }
    monic(ring, &a)
}

/// `base^e mod m`.
fn powmod(ring: &Ring, base: &Poly, e: &BigInt, m: &Poly) -> Poly {
    let mut result = vec![ring.one()];
    let b = divrem(ring, base, m).1;
    let bits = e.to_str_radix(2);
    for bit in bits.chars() {
        result = divrem(ring, &mul(ring, &result, &result), m).1;
        if bit == '1' {
            result = divrem(ring, &mul(ring, &result, &b), m).1;
        }
    }
    result
}

/// Distinct roots in the base field, in increasing order of representative.
/// Over Q only roots whose numerator and denominator are found by trial
/// division below a fixed bound are reported.
pub fn roots(ring: &Ring, p: &Poly) -> Vec<Scalar> {
    let p = trim(p.clone());
    let Some(d) = degree(&p) else { return Vec::new() };
    if d == 0 {
        return Vec::new();
    }
    let mut out = match ring {
        Ring::PrimeField(q) if *q <= 1 << 16 => {
            (0..*q).map(|x| ring.from_i64(x as i64)).filter(|x| eval(ring, &p, x).is_zero()).collect()
        }
        Ring::PrimeField(q) => {
            let x = vec![ring.zero(), ring.one()];
            let xq = powmod(ring, &x, &BigInt::from(*q), &p);
            let split = gcd(ring, &p, &sub(ring, &xq, &x));
            let mut acc = Vec::new();
            split_linear(ring, *q, &split, &mut ChaCha8Rng::seed_from_u64(0), &mut acc);
            acc
        }
        Ring::Rational => rational_roots(&p),
        _ => panic!("roots over a non-field"),
    };
    out.sort();
    out.dedup();
    out
}

/// Cantor-Zassenhaus splitting of a squarefree product of distinct linear factors.
fn split_linear(ring: &Ring, q: u64, f: &Poly, rng: &mut ChaCha8Rng, out: &mut Vec<Scalar>) {
    match degree(f) {
        None | Some(0) => {}
        Some(1) => {
            let f = monic(ring, f);
            out.push(ring.neg(&f[0]));
        }
        Some(_) => loop {
            let a = ring.random_elem(rng, 0);
            let e = BigInt::from((q - 1) / 2);
            let h = powmod(ring, &vec![a, ring.one()], &e, f);
            let g = gcd(ring, f, &sub(ring, &h, &vec![ring.one()]));
            let dg = degree(&g).unwrap_or(0);
            if dg > 0 && dg < degree(f).unwrap() {
                let (rest, _) = divrem(ring, f, &g);
                split_linear(ring, q, &g, rng, out);
                split_linear(ring, q, &rest, rng, out);
                return;
            }
        },
    }
}

const RATIONAL_ROOT_BOUND: u64 = 1 << 20;

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return Some(vec![BigInt::one()]);
    }
    if n > BigInt::from(RATIONAL_ROOT_BOUND) {
        return None;
    }
    let n = n.to_u64().unwrap();
    Some((1..=n).filter(|d| n % d == 0).map(BigInt::from).collect())
}

fn rational_roots(p: &Poly) -> Vec<Scalar> {
    let q = Ring::Rational;
    let mut p = p.clone();
    let mut out = Vec::new();
    // Strip zero roots first so the constant term is nonzero.
    while p.first().is_some_and(Zero::is_zero) {
        p.remove(0);
        out.push(q.zero());
    }
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Scalar::from_integer(lcm.clone())).to_integer()).collect();
    let (Some(num), Some(den)) = (small_divisors(&ints[0]), small_divisors(ints.last().unwrap())) else {
        return out;
    };
    for a in &num {
        for b in &den {
            for s in [1, -1] {
                let x = Scalar::new(a * s, b.clone());
                if eval(&q, &p, &x).is_zero() {
                    out.push(x);
                }
            }
        }
    }
    out
}
