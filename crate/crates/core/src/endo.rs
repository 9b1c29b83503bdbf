//! Endomorphism rings `E_M` of objects of the morphism category.
//!
//! Field tier: `E_M` as an algebra of block-diagonal matrices `u0 ⊕ u1`, with
//! its Jacobson radical, the blocks of `E_M / J`, the type and the maximal
//! ideals. Finite-ring tier: exhaustive analysis of small endomorphism rings.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{nullspace, rank, rref, Rref};
use crate::matrix::ExactMatrix;
use crate::module::{FPModule, ModuleHom};
use crate::morph::{hom_space, is_iso_normal, MorphMap, MorphObject, NormalizedObject};
use crate::poly::{self, Poly};
use crate::ring::{Ring, Scalar};

fn vadd(ring: &Ring, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| ring.add(x, y)).collect()
}

fn vscale(ring: &Ring, a: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    a.iter().map(|x| ring.mul(x, c)).collect()
}

fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Rank of a family of coordinate vectors of length `n`.
fn span_rank(ring: &Ring, n: usize, vs: &[Vec<Scalar>]) -> usize {
    if vs.is_empty() || n == 0 {
        return 0;
    }
    rank(&ExactMatrix::from_columns(ring, n, vs)).unwrap()
}

/// A finite-dimensional unital algebra over a field given by structure constants.
#[derive(Clone, Debug)]
pub struct StructAlgebra {
    pub ring: Ring,
    pub dim: usize,
    /// `mult[i][j]` = coordinates of `b_i b_j`.
    pub mult: Vec<Vec<Vec<Scalar>>>,
    pub one: Vec<Scalar>,
}

impl StructAlgebra {
    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let r = &self.ring;
        let mut out = vec![r.zero(); self.dim];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let c = r.mul(x, y);
                for (k, m) in self.mult[i][j].iter().enumerate() {
                    if !m.is_zero() {
                        out[k] = r.add(&out[k], &r.mul(&c, m));
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &[Scalar], e: &BigInt) -> Vec<Scalar> {
        let mut result = self.one.clone();
        for bit in e.to_str_radix(2).chars() {
            result = self.mul(&result, &result);
            if bit == '1' {
                result = self.mul(&result, a);
            }
        }
        result
    }

    fn unit_vec(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.ring.zero(); self.dim];
        v[i] = self.ring.one();
        v
    }

    /// Basis of the center.
    pub fn center(&self) -> Vec<Vec<Scalar>> {
        let r = &self.ring;
        let d = self.dim;
        if d == 0 {
            return Vec::new();
        }
        // z = sum z_i b_i commutes with every b_l: sum_i z_i (b_i b_l - b_l b_i) = 0.
        let mut rows = Vec::new();
        for l in 0..d {
            for k in 0..d {
                rows.push((0..d).map(|i| r.sub(&self.mult[i][l][k], &self.mult[l][i][k])).collect::<Vec<_>>());
            }
        }
        let flat: Vec<Scalar> = rows.into_iter().flatten().collect();
        let sys = ExactMatrix::new(r, d * d, d, flat).unwrap();
        nullspace(&sys).unwrap()
    }

    /// Minimal polynomial of `a` inside the corner algebra with unit `e`.
    pub fn minpoly(&self, a: &[Scalar], e: &[Scalar]) -> Poly {
        let r = &self.ring;
        let mut powers = vec![e.to_vec()];
        loop {
            let next = self.mul(powers.last().unwrap(), a);
            let k = powers.len();
            let sys = ExactMatrix::from_columns(r, self.dim, &powers);
            let sol = crate::linalg::solve_linear(&sys, &next);
            if let Some(s) = sol.particular {
                let mut p: Poly = s.iter().map(|c| r.neg(c)).collect();
                p.push(r.one());
                debug_assert_eq!(p.len(), k + 1);
                return p;
            }
            powers.push(next);
        }
    }

    pub fn eval_poly(&self, p: &Poly, a: &[Scalar], e: &[Scalar]) -> Vec<Scalar> {
        let r = &self.ring;
        let mut acc = vec![r.zero(); self.dim];
        for c in p.iter().rev() {
            acc = vadd(r, &self.mul(&acc, a), &vscale(r, e, c));
        }
        acc
    }

    /// Primitive idempotents of the center of a semisimple algebra. The flag is
    /// false when some central factor could not be shown to be a field (only
    /// possible over Q when a central minimal polynomial has no rational root).
    pub fn central_idempotents(&self) -> (Vec<Vec<Scalar>>, Vec<bool>) {
        let r = &self.ring;
        let z = self.center();
        let splitters: Vec<Vec<Scalar>> = match r {
            Ring::PrimeField(p) => {
                // The Frobenius-fixed part of the center is a split algebra with the same idempotents.
                let p = BigInt::from(*p);
                let images: Vec<Vec<Scalar>> = z
                    .iter()
                    .map(|v| {
                        let fv = self.pow(v, &p);
                        fv.iter().zip(v).map(|(a, b)| r.sub(a, b)).collect()
                    })
                    .collect();
                if z.is_empty() {
                    Vec::new()
                } else {
                    let m = ExactMatrix::from_columns(r, self.dim, &images);
                    nullspace(&m)
                        .unwrap()
                        .iter()
                        .map(|c| {
                            let mut acc = vec![r.zero(); self.dim];
                            for (ci, zi) in c.iter().zip(&z) {
                                acc = vadd(r, &acc, &vscale(r, zi, ci));
                            }
                            acc
                        })
                        .collect()
                }
            }
            _ => z.clone(),
        };
        let mut idems = if self.dim == 0 { Vec::new() } else { vec![self.one.clone()] };
        for s in &splitters {
            let mut next = Vec::new();
            for e in &idems {
                let a = self.mul(e, s);
                let m = self.minpoly(&a, e);
                if m.len() <= 2 {
                    next.push(e.clone());
                    continue;
                }
                let roots = poly::roots(r, &m);
                let mut rest = e.clone();
                for lam in &roots {
                    let (q, _) = poly::divrem(r, &m, &vec![r.neg(lam), r.one()]);
                    let qa = self.eval_poly(&q, &a, e);
                    let ql = r.inv(&poly::eval(r, &q, lam)).unwrap();
                    let el = vscale(r, &qa, &ql);
                    rest = rest.iter().zip(&el).map(|(x, y)| r.sub(x, y)).collect();
                    next.push(el);
                }
                if !is_zero_vec(&rest) {
                    next.push(rest);
                }
            }
            idems = next;
        }
        let certified = idems
            .iter()
            .map(|e| {
                let piece: Vec<Vec<Scalar>> = z.iter().map(|v| self.mul(e, v)).collect();
                matches!(r, Ring::PrimeField(_)) || span_rank(r, self.dim, &piece) == 1
            })
            .collect();
        (idems, certified)
    }
}

/// A subalgebra of `M_n(k)` with an explicit basis.
#[derive(Clone, Debug)]
pub struct MatrixAlgebra {
    pub ring: Ring,
    pub size: usize,
    pub basis: Vec<ExactMatrix>,
    pub structure: StructAlgebra,
    solver: Rref,
}

impl MatrixAlgebra {
    /// The algebra spanned by `spanning`; fails unless the span is closed under
    /// multiplication and contains the identity.
    pub fn new(ring: &Ring, size: usize, spanning: &[ExactMatrix]) -> Result<Self> {
        if !ring.is_field() {
            return Err(Error::UnsupportedRing(format!("structure theory needs a field, got {ring}")));
        }
        let cols: Vec<Vec<Scalar>> = spanning.iter().map(ExactMatrix::to_vec).collect();
        let all = ExactMatrix::from_columns(ring, size * size, &cols);
        let rr = rref(&all)?;
        let basis: Vec<ExactMatrix> = rr.pivots.iter().map(|&j| spanning[j].clone()).collect();
        let bcols: Vec<Vec<Scalar>> = basis.iter().map(ExactMatrix::to_vec).collect();
        let solver = rref(&ExactMatrix::from_columns(ring, size * size, &bcols))?;
        let mut alg = MatrixAlgebra {
            ring: ring.clone(),
            size,
            basis,
            structure: StructAlgebra { ring: ring.clone(), dim: 0, mult: Vec::new(), one: Vec::new() },
            solver,
        };
        let d = alg.basis.len();
        let mut mult = Vec::with_capacity(d);
        for i in 0..d {
            let mut row = Vec::with_capacity(d);
            for j in 0..d {
                let c = alg
                    .coords(&alg.basis[i].mul(&alg.basis[j]))
                    .ok_or_else(|| Error::PreconditionViolated("span is not closed under multiplication".into()))?;
                row.push(c);
            }
            mult.push(row);
        }
        let one = alg
            .coords(&ExactMatrix::identity(ring, size))
            .ok_or_else(|| Error::PreconditionViolated("span does not contain the identity".into()))?;
        alg.structure = StructAlgebra { ring: ring.clone(), dim: d, mult, one };
        Ok(alg)
    }

    /// The full matrix algebra `M_n(k)`.
    pub fn full(ring: &Ring, n: usize) -> Result<Self> {
        let mut units = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let mut e = ExactMatrix::zeros(ring, n, n);
                e.set(i, j, ring.one());
                units.push(e);
            }
        }
        Self::new(ring, n, &units)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coords(&self, m: &ExactMatrix) -> Option<Vec<Scalar>> {
        let v = m.to_vec();
        let c = self.solver.transform.mul_vec(&v);
        let d = self.dim();
        c[d..].iter().all(Zero::is_zero).then(|| c[..d].to_vec())
    }

    pub fn element(&self, c: &[Scalar]) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(&self.ring, self.size, self.size);
        for (b, x) in self.basis.iter().zip(c) {
            if !x.is_zero() {
                m = m.add(&b.scale(x));
            }
        }
        m
    }

    /// `g(a) = (Tr(lift(a)^(p^i)) / p^i) mod p` on integer lifts.
    fn lifted_trace(&self, a: &ExactMatrix, p: u64, i: u32) -> Scalar {
        let n = a.rows();
        let modulus = BigInt::from(p).pow(i + 1);
        let lift: Vec<Vec<BigInt>> = (0..n).map(|r| a.row(r).iter().map(|x| x.numer().clone()).collect()).collect();
        let mul = |x: &Vec<Vec<BigInt>>, y: &Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
            (0..n)
                .map(|r| {
                    (0..n)
                        .map(|c| {
                            let s: BigInt = (0..n).map(|k| &x[r][k] * &y[k][c]).sum();
                            s % &modulus
                        })
                        .collect()
                })
                .collect()
        };
        let mut m = lift;
        for _ in 0..i {
            // m <- m^p
            let base = m.clone();
            let mut acc: Vec<Vec<BigInt>> =
                (0..n).map(|r| (0..n).map(|c| BigInt::from((r == c) as u8)).collect()).collect();
            for bit in BigInt::from(p).to_str_radix(2).chars() {
                acc = mul(&acc, &acc);
                if bit == '1' {
                    acc = mul(&acc, &base);
                }
            }
            m = acc;
        }
        let tr: BigInt = (0..n).map(|k| &m[k][k]).sum::<BigInt>() % &modulus;
        let pi = BigInt::from(p).pow(i);
        debug_assert!((&tr % &pi).is_zero(), "lifted trace not divisible by p^i");
        self.ring.from_int(&(tr / pi))
    }

    /// Jacobson radical as coordinate vectors: trace-form kernel in
    /// characteristic 0, iterated lifted traces in characteristic p.
    pub fn radical(&self) -> Vec<Vec<Scalar>> {
        let r = &self.ring;
        let d = self.dim();
        if d == 0 {
            return Vec::new();
        }
        match r {
            Ring::PrimeField(p) => {
                let p = *p;
                let mut current: Vec<Vec<Scalar>> = (0..d).map(|i| self.structure.unit_vec(i)).collect();
                let mut i = 0u32;
                loop {
                    if current.is_empty() {
                        break;
                    }
                    // g_i(x b_j) = 0 for all j, x ranging over the current ideal.
                    let elems: Vec<ExactMatrix> = current.iter().map(|c| self.element(c)).collect();
                    let mut rows = Vec::new();
                    for b in &self.basis {
                        rows.push(elems.iter().map(|x| self.lifted_trace(&x.mul(b), p, i)).collect::<Vec<_>>());
                    }
                    let flat: Vec<Scalar> = rows.into_iter().flatten().collect();
                    let sys = ExactMatrix::new(r, d, current.len(), flat).unwrap();
                    let ker = nullspace(&sys).unwrap();
                    current = ker
                        .iter()
                        .map(|c| {
                            let mut acc = vec![r.zero(); d];
                            for (ci, v) in c.iter().zip(&current) {
                                acc = vadd(r, &acc, &vscale(r, v, ci));
                            }
                            acc
                        })
                        .collect();
                    if (p as u128).pow(i + 1) > self.size as u128 {
                        break;
                    }
                    i += 1;
                }
                current
            }
            _ => {
                let mut gram = ExactMatrix::zeros(r, d, d);
                for i in 0..d {
                    for j in 0..d {
                        let m = self.basis[i].mul(&self.basis[j]);
                        let tr = (0..self.size).fold(r.zero(), |acc, k| r.add(&acc, m.get(k, k)));
                        gram.set(i, j, tr);
                    }
                }
                nullspace(&gram).unwrap()
            }
        }
    }

    /// Whether the span of `j` is a two-sided ideal with `J^dim = 0`.
    pub fn is_nilpotent_ideal(&self, j: &[Vec<Scalar>]) -> bool {
        let s = &self.structure;
        let d = self.dim();
        let r = &self.ring;
        let base = span_rank(r, d, j);
        for x in j {
            for i in 0..d {
                let b = s.unit_vec(i);
                for y in [s.mul(x, &b), s.mul(&b, x)] {
                    let mut ext = j.to_vec();
                    ext.push(y);
                    if span_rank(r, d, &ext) != base {
                        return false;
                    }
                }
            }
        }
        let mut power = j.to_vec();
        for _ in 0..=d {
            if power.iter().all(|v| is_zero_vec(v)) {
                return true;
            }
            power = power.iter().flat_map(|x| j.iter().map(move |y| s.mul(x, y))).collect();
            let rk = span_rank(r, d, &power);
            if rk == 0 {
                return true;
            }
            // Keep a spanning set of manageable size.
            let m = ExactMatrix::from_columns(r, d, &power);
            let rr = rref(&m).unwrap();
            power = rr.pivots.iter().map(|&c| power[c].clone()).collect();
        }
        false
    }

    /// Full structure analysis.
    pub fn analyze(&self) -> Structure {
        let r = &self.ring;
        let d = self.dim();
        let s = &self.structure;
        let radical = self.radical();
        let certified_radical = self.is_nilpotent_ideal(&radical);
        // Complement of J spanned by standard basis vectors outside the pivots of J.
        let jm = ExactMatrix::from_columns(r, d, &radical);
        let jpivots: Vec<usize> = if radical.is_empty() { Vec::new() } else { rref(&jm.transpose()).unwrap().pivots };
        let comp: Vec<usize> = (0..d).filter(|i| !jpivots.contains(i)).collect();
        let mut full_cols = radical.clone();
        full_cols.extend(comp.iter().map(|&i| s.unit_vec(i)));
        let change = ExactMatrix::from_columns(r, d, &full_cols);
        let inv = crate::linalg::inverse(&change).unwrap().expect("complement basis");
        let jd = radical.len();
        let proj = inv.submatrix(jd, 0, d - jd, d);
        let qd = d - jd;
        let mult: Vec<Vec<Vec<Scalar>>> = comp
            .iter()
            .map(|&a| comp.iter().map(|&b| proj.mul_vec(&s.mult[a][b])).collect())
            .collect();
        let quotient = StructAlgebra { ring: r.clone(), dim: qd, mult, one: proj.mul_vec(&s.one) };
        let (idems, central_fields) = quotient.central_idempotents();
        let center = quotient.center();
        let mut blocks = Vec::new();
        for (e, field) in idems.iter().zip(central_fields) {
            let block: Vec<Vec<Scalar>> = (0..qd).map(|i| quotient.mul(e, &quotient.unit_vec(i))).collect();
            let cpart: Vec<Vec<Scalar>> = center.iter().map(|z| quotient.mul(e, z)).collect();
            let block_dim = span_rank(r, qd, &block);
            let center_dim = span_rank(r, qd, &cpart);
            let division = if block_dim == center_dim {
                field.then_some(true)
            } else if matches!(r, Ring::PrimeField(_)) || has_zero_divisor(&quotient, e, &block) {
                Some(false)
            } else {
                None
            };
            blocks.push(Block { idempotent: e.clone(), dim: block_dim, center_dim, division });
        }
        let certified = certified_radical && blocks.iter().map(|b| b.dim).sum::<usize>() == qd;
        Structure { radical, quotient, projection: proj, blocks, certified }
    }
}

/// Finds an element of the block whose minimal polynomial has a rational
/// root without being linear, which makes the block a non-division ring.
fn has_zero_divisor(q: &StructAlgebra, e: &[Scalar], block: &[Vec<Scalar>]) -> bool {
    let r = &q.ring;
    let mut candidates: Vec<Vec<Scalar>> = block.to_vec();
    for i in 0..block.len() {
        for j in i + 1..block.len() {
            candidates.push(vadd(r, &block[i], &block[j]));
        }
    }
    candidates.iter().any(|a| {
        let m = q.minpoly(a, e);
        m.len() > 2 && !poly::roots(r, &m).is_empty()
    })
}

#[derive(Clone, Debug)]
pub struct Block {
    /// Central idempotent of the quotient algebra.
    pub idempotent: Vec<Scalar>,
    pub dim: usize,
    pub center_dim: usize,
    /// Whether the block is a division ring; `None` when undetermined.
    pub division: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct Structure {
    pub radical: Vec<Vec<Scalar>>,
    pub quotient: StructAlgebra,
    /// Coordinates of `A` to coordinates of `A / J`.
    pub projection: ExactMatrix,
    pub blocks: Vec<Block>,
    /// Radical is a nilpotent ideal and the blocks exhaust the quotient.
    pub certified: bool,
}

impl Structure {
    pub fn type_n(&self) -> Option<usize> {
        self.blocks.iter().all(|b| b.division == Some(true)).then_some(self.blocks.len())
    }

    pub fn is_local(&self) -> Option<bool> {
        match self.blocks.as_slice() {
            [b] => b.division,
            _ => Some(false),
        }
    }

    pub fn is_finite_type(&self) -> Option<bool> {
        if self.blocks.iter().any(|b| b.division == Some(false)) {
            Some(false)
        } else if self.blocks.iter().all(|b| b.division == Some(true)) {
            Some(true)
        } else {
            None
        }
    }

    /// Whether `x` (coordinates in `A`) lies in the maximal ideal of block `j`.
    pub fn in_maximal_ideal(&self, j: usize, x: &[Scalar]) -> bool {
        let px = self.projection.mul_vec(x);
        is_zero_vec(&self.quotient.mul(&self.blocks[j].idempotent, &px))
    }

    /// Basis (coordinates in `A`) of the maximal ideal of block `j`.
    pub fn maximal_ideal_basis(&self, j: usize) -> Vec<Vec<Scalar>> {
        let r = &self.quotient.ring;
        let d = self.projection.cols();
        if d == 0 {
            return Vec::new();
        }
        let e = &self.blocks[j].idempotent;
        let cols: Vec<Vec<Scalar>> = (0..d)
            .map(|i| {
                let mut v = vec![r.zero(); d];
                v[i] = r.one();
                self.quotient.mul(e, &self.projection.mul_vec(&v))
            })
            .collect();
        nullspace(&ExactMatrix::from_columns(r, self.quotient.dim, &cols)).unwrap()
    }
}

/// `E_M` over a field, in the invariant-factor coordinates of `M`.
#[derive(Clone, Debug)]
pub struct EndoAlgebra {
    pub object: MorphObject,
    pub normal: NormalizedObject,
    /// Basis endomorphisms in normalized coordinates.
    pub basis: Vec<MorphMap>,
    pub algebra: MatrixAlgebra,
}

fn block_of(u: &MorphMap) -> ExactMatrix {
    u.u0.block_diag(&u.u1)
}

pub fn endo_algebra(m: &MorphObject) -> Result<EndoAlgebra> {
    let ring = m.ring();
    if !ring.is_field() {
        return Err(Error::UnsupportedRing(format!("structure theory needs a field, got {ring}")));
    }
    let normal = m.normalized();
    let nobj = &normal.object;
    let (n0, n1) = (nobj.m0.ngens(), nobj.m1.ngens());
    let hs = hom_space(nobj, nobj);
    let mats: Vec<ExactMatrix> = hs.gens.iter().map(block_of).collect();
    let algebra = MatrixAlgebra::new(ring, n0 + n1, &mats)?;
    let basis = algebra
        .basis
        .iter()
        .map(|b| MorphMap { u0: b.submatrix(0, 0, n0, n0), u1: b.submatrix(n0, n0, n1, n1) })
        .collect();
    Ok(EndoAlgebra { object: m.clone(), normal, basis, algebra })
}

impl EndoAlgebra {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn ring(&self) -> &Ring {
        &self.algebra.ring
    }

    /// Moves an endomorphism of the original object into normalized coordinates.
    pub fn to_normal(&self, u: &MorphMap) -> MorphMap {
        let n = &self.normal;
        MorphMap { u0: n.to[0].mul(&u.u0).mul(&n.from[0]), u1: n.to[1].mul(&u.u1).mul(&n.from[1]) }
    }

    pub fn from_normal(&self, u: &MorphMap) -> MorphMap {
        crate::morph::transport_map(u, &self.normal, &self.normal)
    }

    /// Coordinates of an endomorphism of the original object.
    pub fn coords(&self, u: &MorphMap) -> Option<Vec<Scalar>> {
        self.coords_normal(&self.to_normal(u))
    }

    /// Coordinates of an endomorphism given in normalized coordinates.
    pub fn coords_normal(&self, u: &MorphMap) -> Option<Vec<Scalar>> {
        self.algebra.coords(&block_of(u))
    }

    pub fn element(&self, c: &[Scalar]) -> MorphMap {
        let m = self.algebra.element(c);
        let (n0, n1) = (self.normal.object.m0.ngens(), self.normal.object.m1.ngens());
        self.from_normal(&MorphMap { u0: m.submatrix(0, 0, n0, n0), u1: m.submatrix(n0, n0, n1, n1) })
    }

    /// The projection `π_i ε(E_M)` as a matrix algebra.
    pub fn component_algebra(&self, i: usize) -> Result<MatrixAlgebra> {
        let n = self.normal.object.component(i).ngens();
        let mut mats: Vec<ExactMatrix> = self.basis.iter().map(|u| u.component(i).clone()).collect();
        mats.push(ExactMatrix::identity(self.ring(), n));
        MatrixAlgebra::new(self.ring(), n, &mats)
    }

    pub fn radical(&self) -> Vec<Vec<Scalar>> {
        self.algebra.radical()
    }
}

/// Whether `u` lies in `J(E_M)`.
pub fn radical_membership(e: &EndoAlgebra, u: &MorphMap) -> Result<bool> {
    let c = e
        .coords(u)
        .ok_or_else(|| Error::InvalidAction("map is not an endomorphism of the object".into()))?;
    let j = e.radical();
    let r = e.ring();
    let base = span_rank(r, e.dim(), &j);
    let mut ext = j;
    ext.push(c);
    Ok(span_rank(r, e.dim(), &ext) == base)
}

/// The six completely prime ideals of the local-endomorphism and uniserial settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    /// `u0` not an automorphism.
    IMd,
    /// `u1` not an automorphism.
    IMc,
    /// `u0` not injective.
    I0,
    /// `u1` not injective.
    I1,
    /// `u0` not surjective.
    K0,
    /// `u1` not surjective.
    K1,
}

impl Tag {
    pub const ALL: [Tag; 6] = [Tag::IMd, Tag::IMc, Tag::I0, Tag::I1, Tag::K0, Tag::K1];

    pub fn name(self) -> &'static str {
        match self {
            Tag::IMd => "I_Md",
            Tag::IMc => "I_Mc",
            Tag::I0 => "I_0",
            Tag::I1 => "I_1",
            Tag::K0 => "K_0",
            Tag::K1 => "K_1",
        }
    }

    pub fn component(self) -> usize {
        match self {
            Tag::IMd | Tag::I0 | Tag::K0 => 0,
            _ => 1,
        }
    }
}

/// Membership test for one of the tagged ideals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaximalIdealPredicate {
    pub tag: Tag,
}

impl MaximalIdealPredicate {
    /// Whether the endomorphism `u` of `m` belongs to the ideal.
    pub fn contains(&self, u: &MorphMap, m: &MorphObject) -> bool {
        let i = self.tag.component();
        let h = ModuleHom::new(m.component(i).clone(), m.component(i).clone(), u.component(i).clone())
            .expect("component of an endomorphism");
        match self.tag {
            Tag::IMd | Tag::IMc => !h.is_isomorphism(),
            Tag::I0 | Tag::I1 => !h.is_injective(),
            Tag::K0 | Tag::K1 => !h.is_surjective(),
        }
    }
}

/// The six predicates, after checking that both modules are nonzero and
/// uniserial (so that their endomorphism rings are local).
pub fn ideal_predicates(m: &MorphObject) -> Result<Vec<MaximalIdealPredicate>> {
    for (i, module) in [&m.m0, &m.m1].into_iter().enumerate() {
        if !module.has_local_endomorphisms() {
            return Err(Error::PreconditionViolated(format!(
                "M{i} is not a nonzero uniserial module, so End(M{i}) is not local"
            )));
        }
    }
    Ok(Tag::ALL.iter().map(|&tag| MaximalIdealPredicate { tag }).collect())
}

/// Type of `End(M)` for the modules of the finite tiers: over a field
/// `End(k^n)` has type `n` only for `n <= 1`; over `Z/p^k` the endomorphism
/// ring of `⊕ Z/p^{a_i}` has finite type iff the exponents are distinct.
pub fn module_endo_type(m: &FPModule) -> Option<usize> {
    let divs = m.divisors();
    match m.ring() {
        Ring::PrimeField(_) | Ring::Rational => (divs.len() <= 1).then_some(divs.len()),
        Ring::Residue { .. } => {
            let distinct: HashSet<&BigInt> = divs.iter().collect();
            (distinct.len() == divs.len()).then_some(divs.len())
        }
        Ring::Integer => None,
    }
}

#[derive(Clone, Debug)]
pub struct EndoClassification {
    pub dim: usize,
    pub radical_dim: usize,
    pub semisimple_dim: usize,
    pub num_blocks: usize,
    pub block_division_flags: Vec<Option<bool>>,
    pub type_n: Option<usize>,
    pub is_local: Option<bool>,
    pub is_semilocal: bool,
    pub is_finite_type: Option<bool>,
    pub e0_dim: usize,
    pub e1_dim: usize,
    /// Per block: the tags whose ideal equals the block's maximal ideal, or `m<j>`.
    pub maximal_ideals: Vec<String>,
    pub certified: bool,
}

impl EndoClassification {
    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "radical_dim": self.radical_dim,
            "semisimple_dim": self.semisimple_dim,
            "num_blocks": self.num_blocks,
            "block_division_flags": self.block_division_flags,
            "type": self.type_n,
            "is_local": self.is_local,
            "is_semilocal": self.is_semilocal,
            "is_finite_type": self.is_finite_type,
            "E0_dim": self.e0_dim,
            "E1_dim": self.e1_dim,
            "maximal_ideals": self.maximal_ideals,
            "certified": self.certified,
        })
    }
}

/// Field-tier classification of `E_M`.
pub fn classify(e: &EndoAlgebra) -> EndoClassification {
    let st = e.algebra.analyze();
    classify_with(e, &st)
}

pub fn classify_with(e: &EndoAlgebra, st: &Structure) -> EndoClassification {
    let r = e.ring();
    let d = e.dim();
    let comp_dim = |i: usize| {
        let vs: Vec<Vec<Scalar>> = e.basis.iter().map(|u| u.component(i).to_vec()).collect();
        let n = e.normal.object.component(i).ngens();
        span_rank(r, n * n, &vs)
    };
    let maximal_ideals = (0..st.blocks.len())
        .map(|j| {
            let tags = matching_tags(e, st, j);
            if tags.is_empty() {
                format!("m{}", j + 1)
            } else {
                tags.iter().map(|t| t.name()).collect::<Vec<_>>().join("=")
            }
        })
        .collect();
    EndoClassification {
        dim: d,
        radical_dim: st.radical.len(),
        semisimple_dim: d - st.radical.len(),
        num_blocks: st.blocks.len(),
        block_division_flags: st.blocks.iter().map(|b| b.division).collect(),
        type_n: st.type_n(),
        is_local: st.is_local(),
        is_semilocal: st.certified,
        is_finite_type: st.is_finite_type(),
        e0_dim: comp_dim(0),
        e1_dim: comp_dim(1),
        maximal_ideals,
        certified: st.certified,
    }
}

/// Over a field the tagged ideals exist only when both modules are
/// one-dimensional, and then each is the kernel of `u -> u_i`.
fn matching_tags(e: &EndoAlgebra, st: &Structure, j: usize) -> Vec<Tag> {
    if ideal_predicates(&e.object).is_err() {
        return Vec::new();
    }
    let r = e.ring();
    let d = e.dim();
    let mj = st.maximal_ideal_basis(j);
    let kernel = |i: usize| -> Vec<Vec<Scalar>> {
        let cols: Vec<Vec<Scalar>> = e.basis.iter().map(|u| u.component(i).to_vec()).collect();
        let n = e.normal.object.component(i).ngens();
        nullspace(&ExactMatrix::from_columns(r, n * n, &cols)).unwrap()
    };
    let same = |a: &[Vec<Scalar>], b: &[Vec<Scalar>]| {
        let ra = span_rank(r, d, a);
        let mut both = a.to_vec();
        both.extend(b.iter().cloned());
        ra == span_rank(r, d, b) && ra == span_rank(r, d, &both)
    };
    let (k0, k1) = (kernel(0), kernel(1));
    Tag::ALL.into_iter().filter(|t| same(&mj, if t.component() == 0 { &k0 } else { &k1 })).collect()
}

/// Default ceiling on the number of elements enumerated by the finite tier.
pub const FINITE_LIMIT: u64 = 1 << 12;

/// Exhaustive view of a finite `E_M` in normalized coordinates.
#[derive(Clone, Debug)]
pub struct FiniteEndo {
    pub object: MorphObject,
    pub normal: NormalizedObject,
    pub elements: Vec<MorphMap>,
    index: HashMap<MorphMap, usize>,
    /// Additive generators (hom space generators).
    pub gens: Vec<MorphMap>,
    pub units: Vec<bool>,
}

pub fn finite_endo(m: &MorphObject, limit: u64) -> Result<FiniteEndo> {
    if !m.ring().is_finite() {
        return Err(Error::PreconditionViolated(format!("{} is not a finite ring", m.ring())));
    }
    let normal = m.normalized();
    let nobj = normal.object.clone();
    let hs = hom_space(&nobj, &nobj);
    let order = hs.order().expect("finite ring");
    if order > BigInt::from(limit) {
        return Err(Error::TooLarge { what: "endomorphism ring".into(), size: order.to_string(), limit: limit.to_string() });
    }
    let mut elements = Vec::with_capacity(order.to_usize().unwrap());
    hs.find_exhaustive(|u| {
        elements.push(u.canonical(&nobj));
        false
    });
    let index = elements.iter().enumerate().map(|(i, u)| (u.clone(), i)).collect();
    let units = elements
        .iter()
        .map(|u| is_iso_normal(&u.u0, &nobj.m0, &nobj.m0) && is_iso_normal(&u.u1, &nobj.m1, &nobj.m1))
        .collect();
    Ok(FiniteEndo { object: m.clone(), normal, elements, index, gens: hs.gens, units })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateReport {
    pub tag: Tag,
    pub members: usize,
    pub proper: bool,
    pub ideal: bool,
    pub completely_prime: bool,
    /// Proper completely prime ideals of a finite ring are maximal.
    pub maximal: bool,
}

impl PredicateReport {
    pub fn to_json(&self) -> Value {
        json!({
            "tag": self.tag.name(),
            "members": self.members,
            "proper": self.proper,
            "ideal": self.ideal,
            "completely_prime": self.completely_prime,
            "maximal": self.maximal,
        })
    }
}

impl FiniteEndo {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    fn nobj(&self) -> &MorphObject {
        &self.normal.object
    }

    pub fn index_of(&self, u: &MorphMap) -> usize {
        self.index[&u.canonical(self.nobj())]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index_of(&self.elements[a].compose(&self.elements[b]))
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.index_of(&self.elements[a].add(&self.elements[b]))
    }

    pub fn one(&self) -> usize {
        self.index_of(&MorphMap::identity(self.nobj()))
    }

    pub fn zero(&self) -> usize {
        self.index_of(&MorphMap::zero(self.nobj(), self.nobj()))
    }

    /// Moves an endomorphism of the original object into the element table.
    pub fn index_of_original(&self, u: &MorphMap) -> usize {
        let n = &self.normal;
        self.index_of(&MorphMap { u0: n.to[0].mul(&u.u0).mul(&n.from[0]), u1: n.to[1].mul(&u.u1).mul(&n.from[1]) })
    }

    /// Units found by searching for a two-sided inverse (independent of the componentwise test).
    pub fn units_by_inverse(&self) -> Vec<bool> {
        let one = self.one();
        (0..self.order())
            .map(|x| (0..self.order()).any(|y| self.mul(x, y) == one && self.mul(y, x) == one))
            .collect()
    }

    /// Whether the non-units are closed under addition.
    pub fn is_local(&self) -> bool {
        let non: Vec<usize> = (0..self.order()).filter(|&i| !self.units[i]).collect();
        self.order() > 1 && non.iter().all(|&a| non.iter().all(|&b| !self.units[self.add(a, b)]))
    }

    /// `J = {x : 1 - y x is a unit for all y}`.
    pub fn radical(&self) -> Vec<usize> {
        let one = &self.elements[self.one()];
        (0..self.order())
            .filter(|&x| {
                (0..self.order()).all(|y| {
                    let yx = self.elements[y].compose(&self.elements[x]);
                    self.units[self.index_of(&one.sub(&yx))]
                })
            })
            .collect()
    }

    pub fn component_is_aut(&self, x: usize, i: usize) -> bool {
        let c = self.nobj().component(i);
        is_iso_normal(self.elements[x].component(i), c, c)
    }

    pub fn analyze(&self, pred: MaximalIdealPredicate) -> PredicateReport {
        let nobj = self.nobj();
        let member: Vec<bool> = self.elements.iter().map(|u| pred.contains(u, nobj)).collect();
        let set: Vec<usize> = (0..self.order()).filter(|&i| member[i]).collect();
        let proper = set.len() < self.order();
        let gens: Vec<usize> = self.gens.iter().map(|g| self.index_of(g)).collect();
        let additive = set.iter().all(|&a| set.iter().all(|&b| member[self.add(a, b)]));
        let absorbing = set.iter().all(|&a| gens.iter().all(|&g| member[self.mul(g, a)] && member[self.mul(a, g)]));
        let ideal = !set.is_empty() && additive && absorbing;
        let outside: Vec<usize> = (0..self.order()).filter(|&i| !member[i]).collect();
        let completely_prime =
            ideal && proper && outside.iter().all(|&a| outside.iter().all(|&b| !member[self.mul(a, b)]));
        PredicateReport { tag: pred.tag, members: set.len(), proper, ideal, completely_prime, maximal: completely_prime }
    }
}

/// Both sides of the locality criteria, evaluated independently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalityReport {
    /// From the block structure (fields) or closure of non-units (finite rings).
    pub is_local: bool,
    /// The three-case criterion with `E_0`-invertibility.
    pub three_cases: bool,
    /// The "exists i" criterion, when both module endomorphism rings have finite type.
    pub component_criterion: Option<bool>,
    /// The two-condition criterion, when both modules have local endomorphism rings.
    pub local_modules_criterion: Option<bool>,
}

impl LocalityReport {
    pub fn agree(&self) -> bool {
        self.three_cases == self.is_local
            && self.component_criterion.map_or(true, |c| c == self.is_local)
            && self.local_modules_criterion.map_or(true, |c| c == self.is_local)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "is_local": self.is_local,
            "three_cases": self.three_cases,
            "component_criterion": self.component_criterion,
            "local_modules_criterion": self.local_modules_criterion,
            "agree": self.agree(),
        })
    }
}

pub fn locality_criteria_check(m: &MorphObject) -> Result<LocalityReport> {
    let fe = finite_endo(m, FINITE_LIMIT)?;
    let is_local = if m.ring().is_field() {
        let e = endo_algebra(m)?;
        classify(&e).is_local.unwrap_or(false)
    } else {
        fe.is_local()
    };
    let n = fe.order();
    let aut = |x: usize, i: usize| fe.component_is_aut(x, i);
    let one = &fe.elements[fe.one()];
    let one_minus = |x: usize| fe.index_of(&one.sub(&fe.elements[x]));
    let (z0, z1) = (m.m0.is_zero_module(), m.m1.is_zero_module());
    let three_cases = if z0 {
        m.m1.has_local_endomorphisms()
    } else if z1 {
        m.m0.has_local_endomorphisms()
    } else {
        // Invertibility inside E_0 agrees with invertibility in End(M0) for a finite ring.
        (0..n).all(|x| (aut(x, 0) || aut(one_minus(x), 0)) && (aut(x, 0) == aut(x, 1)))
    };
    // The zero object has the zero ring, which no "exists i" condition can detect.
    let finite_type = module_endo_type(&m.m0).is_some() && module_endo_type(&m.m1).is_some() && !(z0 && z1);
    let component_criterion = finite_type.then(|| {
        (0..2).any(|i| (0..n).all(|x| (aut(x, i) || aut(one_minus(x), i)) && (!aut(x, i) || fe.units[x])))
    });
    let local_modules = m.m0.has_local_endomorphisms() && m.m1.has_local_endomorphisms();
    let local_modules_criterion = local_modules
        .then(|| (0..n).all(|x| !aut(x, 0) || aut(x, 1)) || (0..n).all(|x| !aut(x, 1) || aut(x, 0)));
    Ok(LocalityReport { is_local, three_cases, component_criterion, local_modules_criterion })
}
