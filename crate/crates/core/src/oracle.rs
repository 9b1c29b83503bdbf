//! Brute-force ground truth over small finite rings.
//!
//! Everything here works on plain `u64` residues in the invariant-factor
//! coordinates of each module and enumerates candidates exhaustively; none of
//! the hom-space, kernel or search machinery is used.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::module::{hom_group, FPModule};
use crate::morph::MorphObject;
use crate::ring::{Ring, Scalar};

/// Ceiling on `|Hom(M0, N0)| * |Hom(M1, N1)|` for isomorphism checks.
pub const PAIR_LIMIT: u64 = 1 << 24;
/// Ceiling on `|Hom(C0, C1)|` for orbit enumeration.
pub const HOM_LIMIT: u64 = 1 << 16;

fn modulus(ring: &Ring) -> Result<u64> {
    match ring {
        Ring::PrimeField(_) | Ring::Residue { .. } => ring
            .modulus_u64()
            .filter(|&n| n < 1 << 20)
            .ok_or_else(|| Error::UnsupportedRing(format!("{ring} is too large for the oracle"))),
        _ => Err(Error::UnsupportedRing(format!("the oracle needs a finite ring, got {ring}"))),
    }
}

fn to_u64(x: &Scalar, n: u64) -> u64 {
    x.numer().to_i128().unwrap().rem_euclid(n as i128) as u64
}

/// `⊕ Z/(d_i)` with each `d_i` the order of the coordinate (`n` for free ones).
#[derive(Clone, Debug, PartialEq, Eq)]
struct Cyclic {
    orders: Vec<u64>,
}

impl Cyclic {
    fn of(m: &FPModule, n: u64) -> Self {
        let orders = m
            .divisors()
            .iter()
            .map(|d| if d.is_zero() { n } else { d.to_u64().unwrap() })
            .collect();
        Cyclic { orders }
    }

    fn size(&self) -> u64 {
        self.orders.iter().product()
    }

    fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &d in &self.orders {
            out = out.into_iter().flat_map(|v| (0..d).map(move |x| [v.clone(), vec![x]].concat())).collect();
        }
        out
    }
}

/// A linear map in coordinates: `rows = tgt.len()`, row-major.
type Map = Vec<u64>;

/// All homs `src -> tgt`: entry `(j, i)` ranges over `x mod tgt_j` with `src_i x = 0 mod tgt_j`.
fn homs(src: &Cyclic, tgt: &Cyclic) -> Vec<Map> {
    let mut out = vec![Vec::new()];
    for &t in &tgt.orders {
        for &s in &src.orders {
            let choices: Vec<u64> = (0..t).filter(|x| (s as u128 * *x as u128) % t as u128 == 0).collect();
            out = out.into_iter().flat_map(|v| choices.iter().map(move |&x| [v.clone(), vec![x]].concat())).collect();
        }
    }
    out
}

fn hom_count(src: &Cyclic, tgt: &Cyclic) -> u128 {
    let mut c = 1u128;
    for &t in &tgt.orders {
        for &s in &src.orders {
            c *= (0..t).filter(|x| (s as u128 * *x as u128) % t as u128 == 0).count() as u128;
        }
    }
    c
}

fn apply(u: &Map, src: &Cyclic, tgt: &Cyclic, v: &[u64]) -> Vec<u64> {
    let k = src.orders.len();
    tgt.orders
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            (0..k).map(|i| (u[j * k + i] as u128 * v[i] as u128) % t as u128).sum::<u128>() as u64 % t
        })
        .collect()
}

/// Composition `g ∘ f` for `f: a -> b`, `g: b -> c`.
fn compose(g: &Map, f: &Map, a: &Cyclic, b: &Cyclic, c: &Cyclic) -> Map {
    let (ka, kb) = (a.orders.len(), b.orders.len());
    let mut out = vec![0; c.orders.len() * ka];
    for (j, &t) in c.orders.iter().enumerate() {
        for i in 0..ka {
            let s: u128 = (0..kb).map(|l| g[j * kb + l] as u128 * f[l * ka + i] as u128).sum();
            out[j * ka + i] = (s % t as u128) as u64;
        }
    }
    out
}

fn is_bijective(u: &Map, src: &Cyclic, tgt: &Cyclic, elems: &[Vec<u64>]) -> bool {
    if src.size() != tgt.size() {
        return false;
    }
    let zero = vec![0; tgt.orders.len()];
    elems.iter().filter(|v| v.iter().any(|&x| x != 0)).all(|v| apply(u, src, tgt, v) != zero)
}

struct Side {
    m0: Cyclic,
    m1: Cyclic,
    mu: Map,
}

fn side(m: &MorphObject, n: u64) -> Side {
    let o = m.normalized().object;
    let (m0, m1) = (Cyclic::of(&o.m0, n), Cyclic::of(&o.m1, n));
    let mu = (0..o.mu.rows())
        .flat_map(|j| (0..o.mu.cols()).map(move |i| (j, i)))
        .map(|(j, i)| to_u64(o.mu.get(j, i), n) % m1.orders[j])
        .collect();
    Side { m0, m1, mu }
}

/// Exhaustive isomorphism test: some pair of bijections `(u0, u1)` with `u1 μ_M = μ_N u0`.
pub fn brute_force_iso(m: &MorphObject, n: &MorphObject) -> Result<bool> {
    let q = modulus(m.ring())?;
    if m.ring() != n.ring() {
        return Err(Error::PreconditionViolated("objects over different rings".into()));
    }
    let (a, b) = (side(m, q), side(n, q));
    let pairs = hom_count(&a.m0, &b.m0) * hom_count(&a.m1, &b.m1);
    if pairs > PAIR_LIMIT as u128 {
        return Err(Error::TooLarge { what: "candidate pairs".into(), size: pairs.to_string(), limit: PAIR_LIMIT.to_string() });
    }
    if a.m0.size() != b.m0.size() || a.m1.size() != b.m1.size() {
        return Ok(false);
    }
    let (e0, e1) = (a.m0.elements(), a.m1.elements());
    let iso0: Vec<Map> = homs(&a.m0, &b.m0).into_iter().filter(|u| is_bijective(u, &a.m0, &b.m0, &e0)).collect();
    if iso0.is_empty() {
        return Ok(false);
    }
    let iso1: Vec<Map> = homs(&a.m1, &b.m1).into_iter().filter(|u| is_bijective(u, &a.m1, &b.m1, &e1)).collect();
    for u0 in &iso0 {
        let rhs = compose(&b.mu, u0, &a.m0, &b.m0, &b.m1);
        if iso1.iter().any(|u1| compose(u1, &a.mu, &a.m0, &a.m1, &b.m1) == rhs) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Number of commuting pairs `(u0, u1)`, i.e. `|Hom(M, N)|`.
pub fn brute_force_hom_count(m: &MorphObject, n: &MorphObject) -> Result<u64> {
    let q = modulus(m.ring())?;
    let (a, b) = (side(m, q), side(n, q));
    let pairs = hom_count(&a.m0, &b.m0) * hom_count(&a.m1, &b.m1);
    if pairs > PAIR_LIMIT as u128 {
        return Err(Error::TooLarge { what: "candidate pairs".into(), size: pairs.to_string(), limit: PAIR_LIMIT.to_string() });
    }
    let h1 = homs(&a.m1, &b.m1);
    let mut count = 0;
    for u0 in homs(&a.m0, &b.m0) {
        let rhs = compose(&b.mu, &u0, &a.m0, &b.m0, &b.m1);
        count += h1.iter().filter(|u1| compose(u1, &a.mu, &a.m0, &a.m1, &b.m1) == rhs).count() as u64;
    }
    Ok(count)
}

/// Orbits of `Aut(C1) x Aut(C0)` acting on `Hom(C0, C1)` by `g -> u1 g u0^{-1}`.
#[derive(Clone, Debug)]
pub struct OrbitPartition {
    /// Normalized presentations of `C0` and `C1`.
    pub c0: FPModule,
    pub c1: FPModule,
    /// Each orbit as a list of matrices, in increasing order of entries.
    pub orbits: Vec<Vec<ExactMatrix>>,
}

impl OrbitPartition {
    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }

    /// The object `C0 -> C1` given by the first member of orbit `i`.
    pub fn representative(&self, i: usize) -> MorphObject {
        MorphObject::new(self.c0.clone(), self.c1.clone(), self.orbits[i][0].clone()).unwrap()
    }

    pub fn object(&self, i: usize, j: usize) -> MorphObject {
        MorphObject::new(self.c0.clone(), self.c1.clone(), self.orbits[i][j].clone()).unwrap()
    }
}

pub fn orbit_partition(c0: &FPModule, c1: &FPModule) -> Result<OrbitPartition> {
    let ring = c0.ring().clone();
    let q = modulus(&ring)?;
    let (n0, n1) = (c0.normal_form().module.clone(), c1.normal_form().module.clone());
    let (a, b) = (Cyclic::of(&n0, q), Cyclic::of(&n1, q));
    let count = hom_count(&a, &b);
    if count > HOM_LIMIT as u128 {
        return Err(Error::TooLarge { what: "Hom(C0, C1)".into(), size: count.to_string(), limit: HOM_LIMIT.to_string() });
    }
    let auts = |c: &Cyclic| -> Result<Vec<Map>> {
        let n = hom_count(c, c);
        if n > HOM_LIMIT as u128 {
            return Err(Error::TooLarge { what: "End(C)".into(), size: n.to_string(), limit: HOM_LIMIT.to_string() });
        }
        let e = c.elements();
        Ok(homs(c, c).into_iter().filter(|u| is_bijective(u, c, c, &e)).collect())
    };
    let (g0, g1) = (auts(&a)?, auts(&b)?);
    let all = homs(&a, &b);
    let mut seen: HashSet<Map> = HashSet::new();
    let mut orbits = Vec::new();
    for g in &all {
        if seen.contains(g) {
            continue;
        }
        let mut orbit: BTreeSet<Map> = BTreeSet::new();
        for u1 in &g1 {
            let h = compose(u1, g, &a, &b, &b);
            for w in &g0 {
                orbit.insert(compose(&h, w, &a, &a, &b));
            }
        }
        seen.extend(orbit.iter().cloned());
        let k = a.orders.len();
        orbits.push(
            orbit
                .into_iter()
                .map(|u| {
                    let vals: Vec<i64> = u.iter().map(|&x| x as i64).collect();
                    ExactMatrix::from_vec_i64(&ring, b.orders.len(), k, &vals)
                })
                .collect(),
        );
    }
    Ok(OrbitPartition { c0: n0, c1: n1, orbits })
}

/// Bounds for [`generate_corpus`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusSpec {
    pub ring: Ring,
    /// Maximum number of cyclic summands of each module.
    pub max_gens: usize,
    /// Maximum exponent `e` of the summands `Z/p^e` (residue rings only).
    pub max_exponent: u32,
    /// Extra seeded random objects.
    pub random: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corpus {
    pub ring: Ring,
    pub objects: Vec<MorphObject>,
}

/// Enumerates all objects `μ: M0 -> M1` with `M0, M1` built from the allowed
/// cyclic summands, skipping pairs with more than `EXHAUSTIVE_HOMS` maps.
const EXHAUSTIVE_HOMS: u64 = 64;

fn summand_lists(ring: &Ring, max_gens: usize, max_exponent: u32) -> Vec<Vec<BigInt>> {
    let exps: Vec<BigInt> = match ring {
        Ring::Residue { p, k } => (1..=max_exponent.min(*k)).map(|e| BigInt::from(*p).pow(e)).collect(),
        _ => vec![BigInt::zero()],
    };
    let mut out: Vec<Vec<BigInt>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<BigInt>> = vec![Vec::new()];
    for _ in 0..max_gens {
        let mut next = Vec::new();
        for l in &frontier {
            for (i, d) in exps.iter().enumerate() {
                // Nondecreasing lists only.
                if l.last().map_or(true, |x| exps.iter().position(|y| y == x).unwrap() <= i) {
                    let mut v = l.clone();
                    v.push(d.clone());
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn module_from(ring: &Ring, divs: &[BigInt]) -> FPModule {
    match ring {
        Ring::Residue { .. } => FPModule::from_divisors(ring, divs),
        _ => FPModule::free(ring, divs.len()),
    }
}

fn forced_objects(ring: &Ring) -> Vec<MorphObject> {
    let mut out = vec![MorphObject::zero(ring)];
    match ring {
        Ring::Residue { p, k } => {
            let top = (*k).min(3);
            for a in 1..=top {
                for b in 1..=top {
                    let (m0, m1) = (FPModule::cyclic(ring, p.pow(a) as i64), FPModule::cyclic(ring, p.pow(b) as i64));
                    // Reduction for b <= a, the inclusion x -> p^{b-a} x otherwise.
                    let img = if b <= a { 1 } else { p.pow(b - a) as i64 };
                    out.push(MorphObject::new(m0.clone(), m1.clone(), ExactMatrix::from_i64(ring, &[&[img]])).unwrap());
                    out.push(MorphObject::new(m0, m1, ExactMatrix::zeros(ring, 1, 1)).unwrap());
                }
            }
        }
        _ => {
            for n in 1..=2 {
                out.push(MorphObject::free(ring, ExactMatrix::identity(ring, n)));
            }
            out.push(MorphObject::free_i64(ring, 2, 2, &[1, 0, 0, 0]));
        }
    }
    out
}

/// Deterministic corpus: forced seed objects, every object between small
/// enough module pairs, and `random` seeded extra objects.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Corpus> {
    let ring = &spec.ring;
    modulus(ring)?;
    let mut objects = forced_objects(ring);
    let lists = summand_lists(ring, spec.max_gens, spec.max_exponent);
    let modules: Vec<FPModule> = lists.iter().map(|l| module_from(ring, l)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut pairs = Vec::new();
    for m0 in &modules {
        for m1 in &modules {
            pairs.push((m0.clone(), m1.clone()));
            let hg = hom_group(m0, m1);
            let count = hg.order().expect("finite ring");
            if count <= BigInt::from(EXHAUSTIVE_HOMS) {
                enumerate_homs(&hg, &mut |mat| {
                    objects.push(MorphObject::new(m0.clone(), m1.clone(), mat).unwrap());
                });
            }
        }
    }
    for _ in 0..spec.random {
        let (m0, m1) = &pairs[rand::Rng::gen_range(&mut rng, 0..pairs.len())];
        let hg = hom_group(m0, m1);
        let coeffs: Vec<Scalar> = hg.orders.iter().map(|_| ring.random_elem(&mut rng, 0)).collect();
        let h = hg.combination(&coeffs);
        objects.push(MorphObject::new(m0.clone(), m1.clone(), h.matrix).unwrap());
    }
    let mut seen = HashSet::new();
    objects.retain(|o| seen.insert(o.to_json().to_string()));
    Ok(Corpus { ring: ring.clone(), objects })
}

fn enumerate_homs(hg: &crate::module::HomGroup, f: &mut impl FnMut(ExactMatrix)) {
    let ring = hg.source.ring().clone();
    let ranges: Vec<u64> = hg.orders.iter().map(|o| ring.cyclic_order(o).unwrap().to_u64().unwrap()).collect();
    let mut coeffs = vec![0u64; ranges.len()];
    loop {
        let c: Vec<Scalar> = coeffs.iter().map(|&x| ring.from_i64(x as i64)).collect();
        f(hg.combination(&c).matrix);
        let mut i = 0;
        loop {
            if i == coeffs.len() {
                return;
            }
            coeffs[i] += 1;
            if coeffs[i] < ranges[i] {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

impl Corpus {
    /// One JSON object per line: `{"ring", "m0", "m1", "mu"}`.
    pub fn to_jsonl(&self) -> String {
        self.objects
            .iter()
            .map(|o| {
                let mut v = o.to_json();
                v["ring"] = json!(self.ring.to_string());
                v.to_string() + "\n"
            })
            .collect()
    }

    pub fn from_jsonl(text: &str) -> Result<Corpus> {
        let mut ring = None;
        let mut objects = Vec::new();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let v: Value = serde_json::from_str(line).map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
            let r = Ring::parse(v["ring"].as_str().ok_or_else(|| Error::Parse(format!("line {}: missing ring", i + 1)))?)?;
            if ring.as_ref().is_some_and(|x| *x != r) {
                return Err(Error::Parse(format!("line {}: mixed rings", i + 1)));
            }
            objects.push(MorphObject::from_json(&r, &v).map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?);
            ring = Some(r);
        }
        let ring = ring.ok_or_else(|| Error::Parse("empty corpus".into()))?;
        Ok(Corpus { ring, objects })
    }
}

/// Orbit labels of square matrices over `Z/n` under `A -> Q^{-1} A P`, by
/// enumerating every pair of invertible `(P, Q)`. Matrices are row-major.
pub fn equivalence_labels(n: u64, size: usize, mats: &[Vec<u64>]) -> Result<Vec<usize>> {
    let cells = size * size;
    let all = (n as u128).pow(cells as u32);
    if all > HOM_LIMIT as u128 {
        return Err(Error::TooLarge { what: "matrices".into(), size: all.to_string(), limit: HOM_LIMIT.to_string() });
    }
    let sq = Cyclic { orders: vec![n; size] };
    let elems = sq.elements();
    let gl: Vec<Map> = homs(&sq, &sq).into_iter().filter(|u| is_bijective(u, &sq, &sq, &elems)).collect();
    let pairs = gl.len() as u128 * gl.len() as u128;
    if pairs > PAIR_LIMIT as u128 {
        return Err(Error::TooLarge { what: "(P, Q) pairs".into(), size: pairs.to_string(), limit: PAIR_LIMIT.to_string() });
    }
    let mut label: std::collections::HashMap<Map, usize> = std::collections::HashMap::new();
    let mut next = 0;
    let mut out = Vec::with_capacity(mats.len());
    for a in mats {
        let a: Map = a.iter().map(|x| x % n).collect();
        if let Some(&l) = label.get(&a) {
            out.push(l);
            continue;
        }
        let right: BTreeSet<Map> = gl.iter().map(|p| compose(&a, p, &sq, &sq, &sq)).collect();
        for q in &gl {
            for ap in &right {
                label.entry(compose(q, ap, &sq, &sq, &sq)).or_insert(next);
            }
        }
        out.push(next);
        next += 1;
    }
    Ok(out)
}
