//! Finitely presented modules over the base ring and homomorphisms between them.
//!
//! A module is `R^ngens / (column span of relations)`. Homomorphisms act on
//! generators: column `j` of the matrix is the image of generator `j`.

use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::abelian::{kernel_decomposition, span_decomposition, CyclicDecomposition};
use crate::error::{Error, Result};
use crate::linalg::{inverse, smith_normal_form};
use crate::matrix::ExactMatrix;
use crate::ring::{prime_power_big, Ring, Scalar};

/// Invariant-factor form of a module: `M ≅ ⊕ R/(divisors[i])` via
/// `to_diag` (original generator coordinates to diagonal coordinates) and
/// `from_diag` (back).
#[derive(Clone, Debug)]
pub struct NormalForm {
    /// Canonical nonunit divisors in divisibility order; free summands last.
    pub divisors: Vec<BigInt>,
    pub to_diag: ExactMatrix,
    pub from_diag: ExactMatrix,
    pub module: FPModule,
}

#[derive(Clone, Debug)]
pub struct FPModule {
    ring: Ring,
    ngens: usize,
    relations: ExactMatrix,
    nf: OnceLock<Arc<NormalForm>>,
}

impl PartialEq for FPModule {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.ngens == other.ngens && self.relations == other.relations
    }
}

impl Eq for FPModule {}

impl Hash for FPModule {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ring.hash(state);
        self.ngens.hash(state);
        self.relations.hash(state);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleInvariants {
    /// Nonunit invariant factors (0 or p^k for free summands).
    pub divisors: Vec<BigInt>,
    /// Dimension, for modules over a field.
    pub dimension: Option<usize>,
    pub is_zero: bool,
    pub is_uniserial: bool,
}

impl ModuleInvariants {
    pub fn to_json(&self) -> Value {
        json!({
            "divisors": self.divisors.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "dimension": self.dimension,
            "is_zero": self.is_zero,
            "is_uniserial": self.is_uniserial,
        })
    }
}

impl FPModule {
    pub fn new(ring: &Ring, ngens: usize, relations: ExactMatrix) -> Result<Self> {
        if relations.rows() != ngens {
            return Err(Error::Dimension(format!(
                "relation matrix has {} rows for {ngens} generators",
                relations.rows()
            )));
        }
        if relations.ring() != ring {
            return Err(Error::Dimension("relation matrix over a different ring".into()));
        }
        Ok(FPModule { ring: ring.clone(), ngens, relations, nf: OnceLock::new() })
    }

    /// `R^n` with no relations.
    pub fn free(ring: &Ring, n: usize) -> Self {
        Self::new(ring, n, ExactMatrix::zeros(ring, n, 0)).unwrap()
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::free(ring, 0)
    }

    /// `⊕ R/(d_i)` with one generator and one relation per divisor.
    pub fn from_divisors(ring: &Ring, divisors: &[BigInt]) -> Self {
        let d: Vec<Scalar> = divisors.iter().map(|x| ring.from_int(x)).collect();
        Self::new(ring, d.len(), ExactMatrix::diagonal(ring, &d)).unwrap()
    }

    pub fn cyclic(ring: &Ring, d: i64) -> Self {
        Self::from_divisors(ring, &[BigInt::from(d)])
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn relations(&self) -> &ExactMatrix {
        &self.relations
    }

    /// Whether the presentation is already a normal form (square diagonal,
    /// canonical nonunit divisors in divisibility order).
    pub fn is_normal(&self) -> bool {
        let r = &self.relations;
        if r.cols() != self.ngens {
            return false;
        }
        let mut divs = Vec::with_capacity(self.ngens);
        for i in 0..self.ngens {
            for j in 0..self.ngens {
                if i != j && !r.get(i, j).is_zero() {
                    return false;
                }
            }
            let x = r.get(i, i);
            let d = self.ring.canonical_divisor(x);
            if d.is_one() || self.ring.from_int(&d) != *x {
                return false;
            }
            divs.push(d);
        }
        crate::linalg::is_divisor_chain(&self.ring, &divs)
    }

    pub fn normal_form(&self) -> Arc<NormalForm> {
        self.nf.get_or_init(|| Arc::new(self.compute_normal_form())).clone()
    }

    fn compute_normal_form(&self) -> NormalForm {
        let ring = &self.ring;
        let g = self.ngens;
        if self.is_normal() {
            let divisors = (0..g).map(|i| ring.canonical_divisor(self.relations.get(i, i))).collect();
            let id = ExactMatrix::identity(ring, g);
            let module = FPModule {
                ring: ring.clone(),
                ngens: g,
                relations: self.relations.clone(),
                nf: OnceLock::new(),
            };
            return NormalForm { divisors, to_diag: id.clone(), from_diag: id, module };
        }
        let s = smith_normal_form(&self.relations);
        let steps = s.elementary_divisors.len();
        let mut kept = Vec::new();
        let mut divisors = Vec::new();
        for i in 0..g {
            let d = if i < steps { s.elementary_divisors[i].clone() } else { ring.free_divisor() };
            if !d.is_one() {
                kept.push(i);
                divisors.push(d);
            }
        }
        let uinv = inverse(&s.u).expect("unimodular").expect("unimodular");
        let to_diag = s.u.select_rows(&kept);
        let from_diag = uinv.select_cols(&kept);
        let module = FPModule::from_divisors(ring, &divisors);
        NormalForm { divisors, to_diag, from_diag, module }
    }

    pub fn divisors(&self) -> Vec<BigInt> {
        self.normal_form().divisors.clone()
    }

    pub fn canonical_invariants(&self) -> ModuleInvariants {
        let divisors = self.divisors();
        let dimension = self.ring.is_field().then_some(divisors.len());
        let is_zero = divisors.is_empty();
        let is_uniserial = match divisors.as_slice() {
            [] => true,
            [d] => match self.ring {
                Ring::Integer => prime_power_big(d).is_some(),
                _ => true,
            },
            _ => false,
        };
        ModuleInvariants { divisors, dimension, is_zero, is_uniserial }
    }

    pub fn is_zero_module(&self) -> bool {
        self.divisors().is_empty()
    }

    /// Nonzero module whose endomorphism ring is local: a single cyclic
    /// summand of prime-power order (or a one-dimensional space).
    pub fn has_local_endomorphisms(&self) -> bool {
        let inv = self.canonical_invariants();
        !inv.is_zero && inv.is_uniserial
    }

    /// Dimension over a field.
    pub fn dim(&self) -> Result<usize> {
        if !self.ring.is_field() {
            return Err(Error::NonFieldRing(self.ring.to_string()));
        }
        Ok(self.divisors().len())
    }

    /// Number of elements, `None` if infinite.
    pub fn order(&self) -> Option<BigInt> {
        let mut n = BigInt::one();
        for d in self.divisors() {
            n *= self.ring.cyclic_order(&d)?;
        }
        Some(n)
    }

    /// Diagonal coordinates of an element, reduced to canonical residues.
    pub fn reduce_coords(&self, v: &[Scalar]) -> Vec<Scalar> {
        let nf = self.normal_form();
        let y = nf.to_diag.mul_vec(v);
        y.iter().zip(&nf.divisors).map(|(x, d)| self.ring.reduce_mod_divisor(x, d)).collect()
    }

    pub fn is_zero_elem(&self, v: &[Scalar]) -> bool {
        self.reduce_coords(v).iter().all(Zero::is_zero)
    }

    /// Canonical representative in generator coordinates.
    pub fn canonical_elem(&self, v: &[Scalar]) -> Vec<Scalar> {
        let nf = self.normal_form();
        nf.from_diag.mul_vec(&self.reduce_coords(v))
    }

    pub fn direct_sum(&self, other: &FPModule) -> FPModule {
        FPModule::new(&self.ring, self.ngens + other.ngens, self.relations.block_diag(&other.relations))
            .unwrap()
    }

    /// Injections and projections of `self ⊕ other`.
    pub fn biproduct(&self, other: &FPModule) -> Biproduct {
        let sum = self.direct_sum(other);
        let (a, b) = (self.ngens, other.ngens);
        let r = &self.ring;
        let mut i0 = ExactMatrix::zeros(r, a + b, a);
        i0.paste(0, 0, &ExactMatrix::identity(r, a));
        let mut i1 = ExactMatrix::zeros(r, a + b, b);
        i1.paste(a, 0, &ExactMatrix::identity(r, b));
        let p0 = i0.transpose();
        let p1 = i1.transpose();
        Biproduct {
            inj: [
                ModuleHom::new_unchecked(self.clone(), sum.clone(), i0),
                ModuleHom::new_unchecked(other.clone(), sum.clone(), i1),
            ],
            proj: [
                ModuleHom::new_unchecked(sum.clone(), self.clone(), p0),
                ModuleHom::new_unchecked(sum.clone(), other.clone(), p1),
            ],
            sum,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "ngens": self.ngens, "relations": self.relations.to_json() })
    }

    /// Accepts `{"ngens": n, "relations": [...]}` (columns are relators),
    /// `{"divisors": [d1, ...]}`, or a bare integer `n` for the free module of rank `n`.
    pub fn from_json(ring: &Ring, v: &Value) -> Result<Self> {
        if let Some(n) = v.as_u64() {
            return Ok(Self::free(ring, n as usize));
        }
        let obj = v.as_object().ok_or_else(|| Error::Parse("module must be an object or integer".into()))?;
        if let Some(divs) = obj.get("divisors") {
            let divs = divs
                .as_array()
                .ok_or_else(|| Error::Parse("divisors must be an array".into()))?
                .iter()
                .map(|d| d.as_i64().map(BigInt::from).ok_or_else(|| Error::Parse("divisors must be integers".into())))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Self::from_divisors(ring, &divs));
        }
        let ngens = obj
            .get("ngens")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("module needs integer field \"ngens\"".into()))? as usize;
        let relations = match obj.get("relations") {
            None | Some(Value::Null) => ExactMatrix::zeros(ring, ngens, 0),
            Some(rel) => {
                let rows = rel.as_array().ok_or_else(|| Error::Parse("relations must be an array".into()))?;
                let cols = rows.first().and_then(Value::as_array).map_or(0, Vec::len);
                ExactMatrix::from_json(ring, rel, Some((ngens, cols)))?
            }
        };
        Self::new(ring, ngens, relations)
    }
}

#[derive(Clone, Debug)]
pub struct Biproduct {
    pub sum: FPModule,
    pub inj: [ModuleHom; 2],
    pub proj: [ModuleHom; 2],
}

#[derive(Clone, Debug)]
pub struct ModuleHom {
    pub source: FPModule,
    pub target: FPModule,
    /// `target.ngens x source.ngens`, images of source generators as columns.
    pub matrix: ExactMatrix,
}

impl PartialEq for ModuleHom {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
            && self.target == other.target
            && hom_matrices_equal(&self.target, &self.matrix, &other.matrix)
    }
}

impl Eq for ModuleHom {}

/// Equality of two generator matrices as maps into `target`.
pub fn hom_matrices_equal(target: &FPModule, a: &ExactMatrix, b: &ExactMatrix) -> bool {
    let d = a.sub(b);
    (0..d.cols()).all(|j| target.is_zero_elem(&d.col(j)))
}

/// Reduces each column of `m` to its canonical representative in `target`.
pub fn canonical_hom_matrix(target: &FPModule, m: &ExactMatrix) -> ExactMatrix {
    let cols: Vec<Vec<Scalar>> = (0..m.cols()).map(|j| target.canonical_elem(&m.col(j))).collect();
    ExactMatrix::from_columns(target.ring(), target.ngens(), &cols)
}

impl ModuleHom {
    /// Validates that relators of the source map into the relation span of the target.
    pub fn new(source: FPModule, target: FPModule, matrix: ExactMatrix) -> Result<Self> {
        if matrix.shape() != (target.ngens(), source.ngens()) {
            return Err(Error::Dimension(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.ngens(),
                source.ngens()
            )));
        }
        let img = matrix.mul(source.relations());
        for j in 0..img.cols() {
            if !target.is_zero_elem(&img.col(j)) {
                return Err(Error::InvalidAction(format!("relator {j} of the source is not sent to zero")));
            }
        }
        Ok(Self::new_unchecked(source, target, matrix))
    }

    pub(crate) fn new_unchecked(source: FPModule, target: FPModule, matrix: ExactMatrix) -> Self {
        ModuleHom { source, target, matrix }
    }

    pub fn identity(m: &FPModule) -> Self {
        Self::new_unchecked(m.clone(), m.clone(), ExactMatrix::identity(m.ring(), m.ngens()))
    }

    pub fn zero(source: &FPModule, target: &FPModule) -> Self {
        let z = ExactMatrix::zeros(source.ring(), target.ngens(), source.ngens());
        Self::new_unchecked(source.clone(), target.clone(), z)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ModuleHom) -> ModuleHom {
        assert_eq!(first.target, self.source, "composition of incompatible homs");
        Self::new_unchecked(first.source.clone(), self.target.clone(), self.matrix.mul(&first.matrix))
    }

    pub fn add(&self, other: &ModuleHom) -> ModuleHom {
        Self::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.add(&other.matrix))
    }

    pub fn sub(&self, other: &ModuleHom) -> ModuleHom {
        Self::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.sub(&other.matrix))
    }

    pub fn canonical(&self) -> ModuleHom {
        Self::new_unchecked(self.source.clone(), self.target.clone(), canonical_hom_matrix(&self.target, &self.matrix))
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.target.is_zero_elem(&self.matrix.col(j)))
    }

    /// The map in diagonal coordinates of source and target normal forms.
    pub fn diagonal_matrix(&self) -> ExactMatrix {
        let ns = self.source.normal_form();
        let nt = self.target.normal_form();
        let m = nt.to_diag.mul(&self.matrix).mul(&ns.from_diag);
        let ring = self.source.ring();
        let mut out = m.clone();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set_canonical(i, j, ring.reduce_mod_divisor(m.get(i, j), &nt.divisors[i]));
            }
        }
        out
    }

    /// Kernel generators as a cyclic decomposition in diagonal coordinates of the source.
    fn kernel_in_diag(&self) -> CyclicDecomposition {
        let ns = self.source.normal_form();
        let nt = self.target.normal_form();
        kernel_decomposition(self.source.ring(), &ns.divisors, &self.diagonal_matrix(), &nt.divisors)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_in_diag().is_empty()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_zero_module()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// `(K, incl)` with `incl` injective and image equal to the kernel.
    pub fn kernel(&self) -> (FPModule, ModuleHom) {
        let ring = self.source.ring();
        let dec = self.kernel_in_diag();
        let k = FPModule::from_divisors(ring, &dec.orders);
        let ns = self.source.normal_form();
        let incl = ns.from_diag.mul(&dec.generators);
        (k.clone(), ModuleHom::new_unchecked(k, self.source.clone(), incl))
    }

    /// `(C, proj)` with `proj` surjective and `proj ∘ self = 0`.
    pub fn cokernel(&self) -> (FPModule, ModuleHom) {
        let ring = self.source.ring();
        let rel = self.target.relations().hstack(&self.matrix);
        let c = FPModule::new(ring, self.target.ngens(), rel).unwrap();
        let proj = ExactMatrix::identity(ring, self.target.ngens());
        (c.clone(), ModuleHom::new_unchecked(self.target.clone(), c, proj))
    }

    /// `(I, incl)` presenting the image as a submodule of the target.
    pub fn image(&self) -> (FPModule, ModuleHom) {
        submodule(&self.target, &self.matrix)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "matrix": self.matrix.to_json(),
        })
    }
}

/// The submodule of `m` generated by the columns of `gens` (generator coordinates),
/// presented in invariant-factor form, with its inclusion.
pub fn submodule(m: &FPModule, gens: &ExactMatrix) -> (FPModule, ModuleHom) {
    let ring = m.ring();
    let nf = m.normal_form();
    let diag_gens = nf.to_diag.mul(gens);
    let dec = span_decomposition(ring, &nf.divisors, &diag_gens);
    let s = FPModule::from_divisors(ring, &dec.orders);
    let incl = nf.from_diag.mul(&dec.generators);
    (s.clone(), ModuleHom::new_unchecked(s, m.clone(), incl))
}

/// Whether `v` lies in the submodule of `m` generated by the columns of `gens`.
pub fn in_submodule(m: &FPModule, gens: &ExactMatrix, v: &[Scalar]) -> bool {
    let ring = m.ring();
    let rel = m.relations().hstack(gens);
    let big = FPModule::new(ring, m.ngens(), rel).unwrap();
    big.is_zero_elem(v)
}

/// Generators of `Hom(M, N)` as a direct sum of cyclic groups: hom `t` is
/// `gens[t]` and its coefficients live modulo `orders[t]`.
pub fn hom_group(m: &FPModule, n: &FPModule) -> HomGroup {
    let ring = m.ring().clone();
    let nm = m.normal_form();
    let nn = n.normal_form();
    let mut gens = Vec::new();
    let mut orders = Vec::new();
    for (j, b) in nn.divisors.iter().enumerate() {
        for (i, a) in nm.divisors.iter().enumerate() {
            let Some((g, o)) = cyclic_hom(&ring, a, b) else { continue };
            let mut e = ExactMatrix::zeros(&ring, nn.divisors.len(), nm.divisors.len());
            e.set_canonical(j, i, ring.from_int(&g));
            let h = nn.from_diag.mul(&e).mul(&nm.to_diag);
            gens.push(canonical_hom_matrix(n, &h));
            orders.push(o);
        }
    }
    HomGroup { source: m.clone(), target: n.clone(), gens, orders }
}

/// `Hom(R/(a), R/(b))`: generator (as multiplier of 1) and its order, `None` if zero.
pub(crate) fn cyclic_hom(ring: &Ring, a: &BigInt, b: &BigInt) -> Option<(BigInt, BigInt)> {
    if ring.is_field() {
        return Some((BigInt::one(), BigInt::zero()));
    }
    if a.is_zero() {
        return Some((BigInt::one(), b.clone()));
    }
    if b.is_zero() {
        return None;
    }
    let g = ring.divisor_gcd(a, b);
    if g.is_one() {
        return None;
    }
    Some((b / &g, g))
}

#[derive(Clone, Debug)]
pub struct HomGroup {
    pub source: FPModule,
    pub target: FPModule,
    pub gens: Vec<ExactMatrix>,
    pub orders: Vec<BigInt>,
}

impl HomGroup {
    pub fn generators(&self) -> Vec<ModuleHom> {
        self.gens
            .iter()
            .map(|g| ModuleHom::new_unchecked(self.source.clone(), self.target.clone(), g.clone()))
            .collect()
    }

    pub fn order(&self) -> Option<BigInt> {
        let ring = self.source.ring();
        let mut n = BigInt::one();
        for o in &self.orders {
            n *= ring.cyclic_order(o)?;
        }
        Some(n)
    }

    /// The hom `sum_t c_t gens[t]`, canonicalized.
    pub fn combination(&self, coeffs: &[Scalar]) -> ModuleHom {
        let ring = self.source.ring();
        let mut m = ExactMatrix::zeros(ring, self.target.ngens(), self.source.ngens());
        for (g, c) in self.gens.iter().zip(coeffs) {
            if !c.is_zero() {
                m = m.add(&g.scale(c));
            }
        }
        ModuleHom::new_unchecked(self.source.clone(), self.target.clone(), canonical_hom_matrix(&self.target, &m))
    }
}
