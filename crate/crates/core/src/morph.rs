//! The morphism category: objects are module maps `mu: M0 -> M1`, arrows are
//! pairs `(u0, u1)` with `u1 mu_M = mu_N u0`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::abelian::kernel_decomposition;
use crate::error::{Error, Result};
use crate::linalg::{rank, solve_linear};
use crate::matrix::ExactMatrix;
use crate::module::{canonical_hom_matrix, hom_group, hom_matrices_equal, in_submodule, FPModule, ModuleHom};
use crate::ring::{Ring, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MorphObject {
    pub m0: FPModule,
    pub m1: FPModule,
    /// `m1.ngens x m0.ngens`.
    pub mu: ExactMatrix,
}

/// A commuting pair. Source and target objects are supplied by the caller.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MorphMap {
    pub u0: ExactMatrix,
    pub u1: ExactMatrix,
}

/// An object in invariant-factor coordinates together with the transports
/// back and forth (per component, as in [`crate::module::NormalForm`]).
#[derive(Clone, Debug)]
pub struct NormalizedObject {
    pub object: MorphObject,
    pub to: [ExactMatrix; 2],
    pub from: [ExactMatrix; 2],
}

impl MorphObject {
    pub fn new(m0: FPModule, m1: FPModule, mu: ExactMatrix) -> Result<Self> {
        ModuleHom::new(m0.clone(), m1.clone(), mu.clone())?;
        Ok(MorphObject { m0, m1, mu })
    }

    /// `mu: R^cols -> R^rows` between free modules.
    pub fn free(ring: &Ring, mu: ExactMatrix) -> Self {
        let m0 = FPModule::free(ring, mu.cols());
        let m1 = FPModule::free(ring, mu.rows());
        MorphObject { m0, m1, mu }
    }

    pub fn free_i64(ring: &Ring, rows: usize, cols: usize, vals: &[i64]) -> Self {
        Self::free(ring, ExactMatrix::from_vec_i64(ring, rows, cols, vals))
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::free(ring, ExactMatrix::zeros(ring, 0, 0))
    }

    pub fn ring(&self) -> &Ring {
        self.m0.ring()
    }

    pub fn mu_hom(&self) -> ModuleHom {
        ModuleHom::new_unchecked(self.m0.clone(), self.m1.clone(), self.mu.clone())
    }

    pub fn component(&self, i: usize) -> &FPModule {
        if i == 0 {
            &self.m0
        } else {
            &self.m1
        }
    }

    /// Whether both components are already in invariant-factor form.
    pub fn is_normal(&self) -> bool {
        self.m0.is_normal() && self.m1.is_normal()
    }

    pub fn normalized(&self) -> NormalizedObject {
        let n0 = self.m0.normal_form();
        let n1 = self.m1.normal_form();
        let mu = canonical_hom_matrix(&n1.module, &n1.to_diag.mul(&self.mu).mul(&n0.from_diag));
        NormalizedObject {
            object: MorphObject { m0: n0.module.clone(), m1: n1.module.clone(), mu },
            to: [n0.to_diag.clone(), n1.to_diag.clone()],
            from: [n0.from_diag.clone(), n1.from_diag.clone()],
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "m0": self.m0.to_json(), "m1": self.m1.to_json(), "mu": self.mu.to_json() })
    }

    pub fn from_json(ring: &Ring, v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("object must be a JSON object".into()))?;
        let get = |k: &str| obj.get(k).ok_or_else(|| Error::Parse(format!("object is missing \"{k}\"")));
        let m0 = FPModule::from_json(ring, get("m0")?)?;
        let m1 = FPModule::from_json(ring, get("m1")?)?;
        let mu = ExactMatrix::from_json(ring, get("mu")?, Some((m1.ngens(), m0.ngens())))?;
        Self::new(m0, m1, mu)
    }
}

impl MorphMap {
    pub fn identity(m: &MorphObject) -> Self {
        MorphMap {
            u0: ExactMatrix::identity(m.ring(), m.m0.ngens()),
            u1: ExactMatrix::identity(m.ring(), m.m1.ngens()),
        }
    }

    pub fn zero(m: &MorphObject, n: &MorphObject) -> Self {
        MorphMap {
            u0: ExactMatrix::zeros(m.ring(), n.m0.ngens(), m.m0.ngens()),
            u1: ExactMatrix::zeros(m.ring(), n.m1.ngens(), m.m1.ngens()),
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &MorphMap) -> MorphMap {
        MorphMap { u0: self.u0.mul(&first.u0), u1: self.u1.mul(&first.u1) }
    }

    pub fn add(&self, other: &MorphMap) -> MorphMap {
        MorphMap { u0: self.u0.add(&other.u0), u1: self.u1.add(&other.u1) }
    }

    pub fn sub(&self, other: &MorphMap) -> MorphMap {
        MorphMap { u0: self.u0.sub(&other.u0), u1: self.u1.sub(&other.u1) }
    }

    pub fn scale(&self, c: &Scalar) -> MorphMap {
        MorphMap { u0: self.u0.scale(c), u1: self.u1.scale(c) }
    }

    pub fn component(&self, i: usize) -> &ExactMatrix {
        if i == 0 {
            &self.u0
        } else {
            &self.u1
        }
    }

    pub fn hom(&self, i: usize, src: &MorphObject, tgt: &MorphObject) -> ModuleHom {
        ModuleHom::new_unchecked(src.component(i).clone(), tgt.component(i).clone(), self.component(i).clone())
    }

    /// Components are module maps and the square commutes.
    pub fn is_valid(&self, src: &MorphObject, tgt: &MorphObject) -> bool {
        if self.u0.shape() != (tgt.m0.ngens(), src.m0.ngens()) || self.u1.shape() != (tgt.m1.ngens(), src.m1.ngens()) {
            return false;
        }
        ModuleHom::new(src.m0.clone(), tgt.m0.clone(), self.u0.clone()).is_ok()
            && ModuleHom::new(src.m1.clone(), tgt.m1.clone(), self.u1.clone()).is_ok()
            && hom_matrices_equal(&tgt.m1, &self.u1.mul(&src.mu), &tgt.mu.mul(&self.u0))
    }

    pub fn equals(&self, other: &MorphMap, tgt: &MorphObject) -> bool {
        hom_matrices_equal(&tgt.m0, &self.u0, &other.u0) && hom_matrices_equal(&tgt.m1, &self.u1, &other.u1)
    }

    pub fn is_zero(&self, tgt: &MorphObject) -> bool {
        (0..self.u0.cols()).all(|j| tgt.m0.is_zero_elem(&self.u0.col(j)))
            && (0..self.u1.cols()).all(|j| tgt.m1.is_zero_elem(&self.u1.col(j)))
    }

    pub fn canonical(&self, tgt: &MorphObject) -> MorphMap {
        MorphMap { u0: canonical_hom_matrix(&tgt.m0, &self.u0), u1: canonical_hom_matrix(&tgt.m1, &self.u1) }
    }

    /// Two-sided invertibility in the category: both components are isomorphisms.
    pub fn is_isomorphism(&self, src: &MorphObject, tgt: &MorphObject) -> bool {
        self.hom(0, src, tgt).is_isomorphism() && self.hom(1, src, tgt).is_isomorphism()
    }

    pub fn to_json(&self) -> Value {
        json!({ "u0": self.u0.to_json(), "u1": self.u1.to_json() })
    }
}

/// `Hom(M, N)` written as `⊕ R/(orders[t])` with generator `gens[t]`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: MorphObject,
    pub target: MorphObject,
    pub gens: Vec<MorphMap>,
    pub orders: Vec<BigInt>,
}

impl HomSpace {
    pub fn ring(&self) -> &Ring {
        self.source.ring()
    }

    pub fn order(&self) -> Option<BigInt> {
        let mut n = BigInt::from(1);
        for o in &self.orders {
            n *= self.ring().cyclic_order(o)?;
        }
        Some(n)
    }

    /// Number of values each coefficient ranges over, when all are finite and fit in u64.
    pub fn ranges(&self) -> Option<Vec<u64>> {
        self.orders.iter().map(|o| self.ring().cyclic_order(o).and_then(|n| n.to_u64())).collect()
    }

    pub fn element(&self, coeffs: &[Scalar]) -> MorphMap {
        let mut acc = MorphMap::zero(&self.source, &self.target);
        for (g, c) in self.gens.iter().zip(coeffs) {
            if !c.is_zero() {
                acc = acc.add(&g.scale(c));
            }
        }
        acc
    }

    /// Calls `f` on every element (each exactly once) until it returns `true`.
    /// Returns the element on which `f` stopped, if any.
    pub fn find_exhaustive(&self, mut f: impl FnMut(&MorphMap) -> bool) -> Option<MorphMap> {
        let ranges = self.ranges().expect("finite hom space");
        let ring = self.ring().clone();
        let mut coeffs = vec![0u64; ranges.len()];
        let mut cur = MorphMap::zero(&self.source, &self.target);
        let wraps: Vec<MorphMap> =
            self.gens.iter().zip(&ranges).map(|(g, &r)| g.scale(&ring.from_i64(r as i64 - 1))).collect();
        loop {
            if f(&cur) {
                return Some(cur);
            }
            let mut t = 0;
            loop {
                if t == ranges.len() {
                    return None;
                }
                if coeffs[t] + 1 < ranges[t] {
                    coeffs[t] += 1;
                    cur = cur.add(&self.gens[t]);
                    break;
                }
                coeffs[t] = 0;
                cur = cur.sub(&wraps[t]);
                t += 1;
            }
        }
    }

    pub fn random_element(&self, rng: &mut ChaCha8Rng, bound: i64) -> MorphMap {
        let ring = self.ring();
        let coeffs: Vec<Scalar> = self
            .orders
            .iter()
            .map(|o| match ring.cyclic_order(o).and_then(|n| n.to_u64()) {
                Some(n) => ring.from_i64(rand::Rng::gen_range(rng, 0..n) as i64),
                None => ring.random_elem(rng, bound),
            })
            .collect();
        self.element(&coeffs)
    }
}

/// Hom space between objects already in invariant-factor coordinates.
fn hom_space_normal(m: &MorphObject, n: &MorphObject) -> HomSpace {
    let ring = m.ring().clone();
    let h0 = hom_group(&m.m0, &n.m0);
    let h1 = hom_group(&m.m1, &n.m1);
    let rows = n.m1.ngens();
    let cols = m.m0.ngens();
    let e = n.m1.divisors();
    // Columns of phi: the image of each generator under (u0, u1) -> u1 mu_M - mu_N u0,
    // flattened row-major in Hom(M0, N1).
    let mut phi_cols = Vec::new();
    for g in &h0.gens {
        phi_cols.push(n.mu.mul(g).neg().to_vec());
    }
    for g in &h1.gens {
        phi_cols.push(g.mul(&m.mu).to_vec());
    }
    let phi = ExactMatrix::from_columns(&ring, rows * cols, &phi_cols);
    let orders_out: Vec<BigInt> = (0..rows).flat_map(|j| std::iter::repeat(e[j].clone()).take(cols)).collect();
    let mut orders_in = h0.orders.clone();
    orders_in.extend(h1.orders.iter().cloned());
    let dec = kernel_decomposition(&ring, &orders_in, &phi, &orders_out);
    let k0 = h0.gens.len();
    let gens = (0..dec.len())
        .map(|t| {
            let c = dec.generators.col(t);
            let mut u0 = ExactMatrix::zeros(&ring, n.m0.ngens(), m.m0.ngens());
            let mut u1 = ExactMatrix::zeros(&ring, n.m1.ngens(), m.m1.ngens());
            for (s, x) in c.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                if s < k0 {
                    u0 = u0.add(&h0.gens[s].scale(x));
                } else {
                    u1 = u1.add(&h1.gens[s - k0].scale(x));
                }
            }
            MorphMap { u0, u1 }.canonical(n)
        })
        .collect();
    HomSpace { source: m.clone(), target: n.clone(), gens, orders: dec.orders }
}

/// Transports a map between normalized objects back to the original presentations.
pub fn transport_map(u: &MorphMap, m: &NormalizedObject, n: &NormalizedObject) -> MorphMap {
    MorphMap { u0: n.from[0].mul(&u.u0).mul(&m.to[0]), u1: n.from[1].mul(&u.u1).mul(&m.to[1]) }
}

/// Generators of `Hom(M, N)`: all solutions of `u1 mu_M = mu_N u0`.
pub fn hom_space(m: &MorphObject, n: &MorphObject) -> HomSpace {
    if m.is_normal() && n.is_normal() {
        return hom_space_normal(m, n);
    }
    let mn = m.normalized();
    let nn = n.normalized();
    let hs = hom_space_normal(&mn.object, &nn.object);
    let gens = hs.gens.iter().map(|u| transport_map(u, &mn, &nn).canonical(n)).collect();
    HomSpace { source: m.clone(), target: n.clone(), gens, orders: hs.orders }
}

#[derive(Clone, Debug)]
pub struct DirectSum {
    pub object: MorphObject,
    pub injections: Vec<MorphMap>,
    pub projections: Vec<MorphMap>,
}

/// Componentwise biproduct of a list of objects.
pub fn direct_sum(objects: &[MorphObject], ring: &Ring) -> DirectSum {
    let mut m0 = FPModule::zero(ring);
    let mut m1 = FPModule::zero(ring);
    let mut mu = ExactMatrix::zeros(ring, 0, 0);
    for o in objects {
        m0 = m0.direct_sum(&o.m0);
        m1 = m1.direct_sum(&o.m1);
        mu = mu.block_diag(&o.mu);
    }
    let (t0, t1) = (m0.ngens(), m1.ngens());
    let (mut off0, mut off1) = (0, 0);
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    for o in objects {
        let (a, b) = (o.m0.ngens(), o.m1.ngens());
        let mut i0 = ExactMatrix::zeros(ring, t0, a);
        i0.paste(off0, 0, &ExactMatrix::identity(ring, a));
        let mut i1 = ExactMatrix::zeros(ring, t1, b);
        i1.paste(off1, 0, &ExactMatrix::identity(ring, b));
        projections.push(MorphMap { u0: i0.transpose(), u1: i1.transpose() });
        injections.push(MorphMap { u0: i0, u1: i1 });
        off0 += a;
        off1 += b;
    }
    DirectSum { object: MorphObject { m0, m1, mu }, injections, projections }
}

/// The four canonical functors to modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Functor {
    Domain,
    Codomain,
    Kernel,
    Cokernel,
}

impl Functor {
    pub const ALL: [Functor; 4] = [Functor::Domain, Functor::Codomain, Functor::Kernel, Functor::Cokernel];

    pub fn name(self) -> &'static str {
        match self {
            Functor::Domain => "D",
            Functor::Codomain => "C",
            Functor::Kernel => "Ker",
            Functor::Cokernel => "Coker",
        }
    }

    pub fn on_object(self, m: &MorphObject) -> FPModule {
        match self {
            Functor::Domain => m.m0.clone(),
            Functor::Codomain => m.m1.clone(),
            Functor::Kernel => m.mu_hom().kernel().0,
            Functor::Cokernel => m.mu_hom().cokernel().0,
        }
    }

    /// The induced module map `F(M) -> F(N)`.
    pub fn on_map(self, u: &MorphMap, m: &MorphObject, n: &MorphObject) -> ModuleHom {
        match self {
            Functor::Domain => u.hom(0, m, n),
            Functor::Codomain => u.hom(1, m, n),
            Functor::Kernel => {
                let (km, im) = m.mu_hom().kernel();
                let (kn, inn) = n.mu_hom().kernel();
                // Express u0 restricted to ker mu_M in the generators of ker mu_N.
                let rel = inn.matrix.hstack(n.m0.relations());
                let img = u.u0.mul(&im.matrix);
                let cols: Vec<Vec<Scalar>> = (0..img.cols())
                    .map(|j| {
                        let sol = solve_linear(&rel, &img.col(j));
                        let x = sol.particular.expect("u0 maps the kernel into the kernel");
                        x[..kn.ngens()].to_vec()
                    })
                    .collect();
                let mat = ExactMatrix::from_columns(m.ring(), kn.ngens(), &cols);
                ModuleHom::new_unchecked(km, kn, mat)
            }
            Functor::Cokernel => {
                let (cm, _) = m.mu_hom().cokernel();
                let (cn, _) = n.mu_hom().cokernel();
                ModuleHom::new_unchecked(cm, cn, u.u1.clone())
            }
        }
    }
}

pub fn functor_d(m: &MorphObject) -> FPModule {
    Functor::Domain.on_object(m)
}

pub fn functor_c(m: &MorphObject) -> FPModule {
    Functor::Codomain.on_object(m)
}

pub fn functor_ker(m: &MorphObject) -> FPModule {
    Functor::Kernel.on_object(m)
}

pub fn functor_coker(m: &MorphObject) -> FPModule {
    Functor::Cokernel.on_object(m)
}

/// Report for `0 -> ker mu -> M0 -> M0 ⊕ M1 -> M0 ⊕ coker mu -> 0`.
#[derive(Clone, Debug)]
pub struct SequenceReport {
    pub exact: [bool; 4],
    /// Dimensions of the four nonzero terms (fields only).
    pub dims: Option<[usize; 4]>,
    /// Orders of the four nonzero terms (finite rings only).
    pub orders: Option<[BigInt; 4]>,
    pub maps: [ModuleHom; 3],
}

impl SequenceReport {
    pub fn alternating_sum(&self) -> Option<i64> {
        self.dims.map(|d| d[0] as i64 - d[1] as i64 + d[2] as i64 - d[3] as i64)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "exact": self.exact,
            "dims": self.dims,
            "orders": self.orders.as_ref().map(|o| o.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
            "alternating_sum": self.alternating_sum(),
        })
    }
}

/// `im f = ker g`, checked as `g f = 0` plus membership of kernel generators.
fn exact_at(f: &ModuleHom, g: &ModuleHom) -> bool {
    if !g.compose(f).is_zero() {
        return false;
    }
    let (_, kincl) = g.kernel();
    (0..kincl.matrix.cols()).all(|j| in_submodule(&f.target, &f.matrix, &kincl.matrix.col(j)))
}

/// Builds the four-term sequence with maps `incl`, `(0, mu)^T` and
/// `id ⊕ proj` and certifies exactness at every position.
pub fn verify_canonical_sequence(m: &MorphObject) -> Result<SequenceReport> {
    let ring = m.ring().clone();
    let (n0, n1) = (m.m0.ngens(), m.m1.ngens());
    let mu = m.mu_hom();
    let (_, incl) = mu.kernel();
    let (coker, _) = mu.cokernel();
    let sum = m.m0.direct_sum(&m.m1);
    let tail = m.m0.direct_sum(&coker);
    let mut f2m = ExactMatrix::zeros(&ring, n0 + n1, n0);
    f2m.paste(n0, 0, &m.mu);
    let f2 = ModuleHom::new(m.m0.clone(), sum.clone(), f2m)?;
    // Cokernel generators are those of M1, so the projection is the identity on generators.
    let f3 = ModuleHom::new(sum, tail, ExactMatrix::identity(&ring, n0 + n1))?;
    let exact = [incl.is_injective(), exact_at(&incl, &f2), exact_at(&f2, &f3), f3.is_surjective()];
    if let Some(pos) = exact.iter().position(|e| !e) {
        return Err(Error::ExactnessFailure { position: pos, detail: format!("object {}", m.mu) });
    }
    let terms = [&incl.source, &m.m0, &f2.target, &f3.target];
    let dims = if ring.is_field() {
        let d: Vec<usize> = terms.iter().map(|t| t.dim().unwrap()).collect();
        Some([d[0], d[1], d[2], d[3]])
    } else {
        None
    };
    let orders = if ring.is_finite() {
        let o: Vec<BigInt> = terms.iter().map(|t| t.order().unwrap()).collect();
        Some([o[0].clone(), o[1].clone(), o[2].clone(), o[3].clone()])
    } else {
        None
    };
    Ok(SequenceReport { exact, dims, orders, maps: [incl, f2, f3] })
}

/// How to search a hom space for an element with a given property.
#[derive(Clone, Debug)]
pub struct DecisionPolicy {
    /// Enumerate every element when the hom space has at most this many.
    pub exhaustive_limit: BigInt,
    pub trials: usize,
    /// Coefficient bound for random sampling over infinite rings.
    pub bound: i64,
    pub seed: u64,
}

impl Default for DecisionPolicy {
    fn default() -> Self {
        DecisionPolicy { exhaustive_limit: BigInt::from(1u64 << 20), trials: 512, bound: 10, seed: 0 }
    }
}

impl DecisionPolicy {
    pub fn with_seed(seed: u64) -> Self {
        DecisionPolicy { seed, ..Default::default() }
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(MorphMap),
    /// Every element was examined; `count` is the hom space order.
    Exhausted { count: BigInt },
    /// Random sampling failed; nothing can be concluded.
    NotFound { trials: usize },
}

/// Looks for an element of `space` satisfying `pred`, following `policy`.
pub fn search(space: &HomSpace, policy: &DecisionPolicy, pred: impl Fn(&MorphMap) -> bool) -> SearchOutcome {
    if let Some(order) = space.order() {
        if order <= policy.exhaustive_limit {
            return match space.find_exhaustive(|u| pred(u)) {
                Some(u) => SearchOutcome::Found(u),
                None => SearchOutcome::Exhausted { count: order },
            };
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    for _ in 0..policy.trials {
        let u = space.random_element(&mut rng, policy.bound);
        if pred(&u) {
            return SearchOutcome::Found(u);
        }
    }
    SearchOutcome::NotFound { trials: policy.trials }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Isomorphic,
    Not,
    Undecided,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Isomorphic => "isomorphic",
            Verdict::Not => "not",
            Verdict::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug)]
pub struct IsoResult {
    pub verdict: Verdict,
    pub witness: Option<MorphMap>,
    pub certificate: Value,
}

impl IsoResult {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict.as_str(),
            "witness": self.witness.as_ref().map(MorphMap::to_json),
            "certificate": self.certificate,
        })
    }
}

/// Fast isomorphism test for a map between invariant-factor modules with
/// identical divisor lists.
pub(crate) fn is_iso_normal(u: &ExactMatrix, src: &FPModule, tgt: &FPModule) -> bool {
    let ring = src.ring();
    if src.divisors() != tgt.divisors() {
        return false;
    }
    match ring {
        Ring::PrimeField(_) | Ring::Rational => rank(u).map(|r| r == u.rows()).unwrap_or(false),
        Ring::Residue { p, .. } => {
            // Equal finite orders: bijective iff surjective iff surjective mod p (Nakayama).
            let fp = Ring::PrimeField(*p);
            let vals: Vec<Scalar> = u.entries().iter().map(|x| fp.from_int(x.numer())).collect();
            let m = ExactMatrix::from_canonical(&fp, u.rows(), u.cols(), vals);
            rank(&m).unwrap() == u.rows()
        }
        Ring::Integer => ModuleHom::new_unchecked(src.clone(), tgt.clone(), u.clone()).is_isomorphism(),
    }
}

/// Decides `M ≅ N`. "not" answers are certified by a functor invariant
/// mismatch or by exhausting the hom space; random search never says "not".
pub fn iso_test(m: &MorphObject, n: &MorphObject, policy: &DecisionPolicy) -> IsoResult {
    for f in Functor::ALL {
        let a = f.on_object(m).canonical_invariants();
        let b = f.on_object(n).canonical_invariants();
        if a != b {
            return IsoResult {
                verdict: Verdict::Not,
                witness: None,
                certificate: json!({ "functor": f.name(), "left": a.to_json(), "right": b.to_json() }),
            };
        }
    }
    let mn = m.normalized();
    let nn = n.normalized();
    let space = hom_space_normal(&mn.object, &nn.object);
    let (a, b) = (&mn.object, &nn.object);
    let outcome = search(&space, policy, |u| is_iso_normal(&u.u0, &a.m0, &b.m0) && is_iso_normal(&u.u1, &a.m1, &b.m1));
    match outcome {
        SearchOutcome::Found(u) => IsoResult {
            verdict: Verdict::Isomorphic,
            witness: Some(transport_map(&u, &mn, &nn).canonical(n)),
            certificate: json!({ "hom_space_order": space.order().map(|o| o.to_string()) }),
        },
        SearchOutcome::Exhausted { count } => IsoResult {
            verdict: Verdict::Not,
            witness: None,
            certificate: json!({ "exhausted": count.to_string() }),
        },
        SearchOutcome::NotFound { trials } => IsoResult {
            verdict: Verdict::Undecided,
            witness: None,
            certificate: json!({ "random_trials": trials }),
        },
    }
}
