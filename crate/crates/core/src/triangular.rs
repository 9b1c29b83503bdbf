//! Right modules over the triangular ring `T = [[R, R], [0, R]]`, described by
//! the actions of the matrix units, and the equivalence with the morphism category.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::abelian::kernel_decomposition;
use crate::error::{Error, Result};
use crate::linalg::solve_linear;
use crate::matrix::ExactMatrix;
use crate::module::{hom_group, hom_matrices_equal, FPModule, ModuleHom};
use crate::morph::{MorphMap, MorphObject};
use crate::ring::{Ring, Scalar};

/// A right T-module: an R-module with the endomorphisms `x -> x e11` and
/// `x -> x e12` (the action of `e22` is `1 - e11`). Matrices act on generator
/// coordinates from the left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TModuleRep {
    pub underlying: FPModule,
    pub e11: ExactMatrix,
    pub e12: ExactMatrix,
}

impl TModuleRep {
    pub fn ring(&self) -> &Ring {
        self.underlying.ring()
    }

    pub fn e22(&self) -> ExactMatrix {
        ExactMatrix::identity(self.ring(), self.underlying.ngens()).sub(&self.e11)
    }

    fn eq(&self, a: &ExactMatrix, b: &ExactMatrix) -> bool {
        hom_matrices_equal(&self.underlying, a, b)
    }

    /// Checks that the actions are module maps and satisfy the relations of
    /// the matrix units under right multiplication.
    pub fn validate(&self) -> Result<()> {
        let u = &self.underlying;
        let n = u.ngens();
        for (name, m) in [("e11", &self.e11), ("e12", &self.e12)] {
            if m.shape() != (n, n) {
                return Err(Error::InvalidAction(format!("{name} action has shape {:?}", m.shape())));
            }
            ModuleHom::new(u.clone(), u.clone(), m.clone())
                .map_err(|_| Error::InvalidAction(format!("{name} action is not a module map")))?;
        }
        let (e11, e12, e22) = (&self.e11, &self.e12, &self.e22());
        let zero = ExactMatrix::zeros(self.ring(), n, n);
        // x (ab) = (x a) b, so the action of ab is act(b) * act(a).
        let checks = [
            ("e11 e11 = e11", e11.mul(e11), e11.clone()),
            ("e11 e12 = e12", e12.mul(e11), e12.clone()),
            ("e12 e22 = e12", e22.mul(e12), e12.clone()),
            ("e12 e11 = 0", e11.mul(e12), zero.clone()),
            ("e22 e12 = 0", e12.mul(e22), zero.clone()),
            ("e12 e12 = 0", e12.mul(e12), zero),
        ];
        for (name, lhs, rhs) in checks {
            if !self.eq(&lhs, &rhs) {
                return Err(Error::InvalidAction(format!("relation {name} fails")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({ "underlying": self.underlying.to_json(), "e11": self.e11.to_json(), "e12": self.e12.to_json() })
    }
}

/// `M0 ⊕ M1` with `e11` projecting onto `M0` and `e12` acting as `mu`.
pub fn functor_f(m: &MorphObject) -> TModuleRep {
    let ring = m.ring();
    let (n0, n1) = (m.m0.ngens(), m.m1.ngens());
    let underlying = m.m0.direct_sum(&m.m1);
    let mut e11 = ExactMatrix::zeros(ring, n0 + n1, n0 + n1);
    e11.paste(0, 0, &ExactMatrix::identity(ring, n0));
    let mut e12 = ExactMatrix::zeros(ring, n0 + n1, n0 + n1);
    e12.paste(n0, 0, &m.mu);
    TModuleRep { underlying, e11, e12 }
}

/// `F(u) = u0 ⊕ u1`.
pub fn functor_f_map(u: &MorphMap) -> ExactMatrix {
    u.u0.block_diag(&u.u1)
}

/// Result of splitting a T-module by its idempotent.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub object: MorphObject,
    /// Inclusions of `N e11` and `N e22` into the underlying module.
    pub incl: [ModuleHom; 2],
}

/// Expresses each column of `v` (elements of `incl.target`) in the generators of `incl.source`.
fn express(incl: &ModuleHom, v: &ExactMatrix) -> ExactMatrix {
    let rel = incl.matrix.hstack(incl.target.relations());
    let k = incl.source.ngens();
    let cols: Vec<Vec<Scalar>> = (0..v.cols())
        .map(|j| {
            let sol = solve_linear(&rel, &v.col(j));
            sol.particular.expect("element lies in the submodule")[..k].to_vec()
        })
        .collect();
    ExactMatrix::from_columns(v.ring(), k, &cols)
}

/// `N = N e11 ⊕ N e22` with `mu` the restriction of the `e12` action.
pub fn functor_g(n: &TModuleRep) -> Result<Splitting> {
    n.validate()?;
    let u = &n.underlying;
    let h11 = ModuleHom::new(u.clone(), u.clone(), n.e11.clone())?;
    let h22 = ModuleHom::new(u.clone(), u.clone(), n.e22())?;
    let (m0, i0) = h11.image();
    let (m1, i1) = h22.image();
    let mu = express(&i1, &n.e12.mul(&i0.matrix));
    let object = MorphObject::new(m0, m1, mu)?;
    Ok(Splitting { object, incl: [i0, i1] })
}

/// `G(f)` for a T-linear map `f: A -> B` given as a matrix on underlying generators.
pub fn functor_g_map(f: &ExactMatrix, a: &Splitting, b: &Splitting) -> MorphMap {
    MorphMap {
        u0: express(&b.incl[0], &f.mul(&a.incl[0].matrix)),
        u1: express(&b.incl[1], &f.mul(&a.incl[1].matrix)),
    }
}

/// The natural isomorphism `G(F(M)) -> M`.
pub fn roundtrip_iso(m: &MorphObject, gf: &Splitting) -> MorphMap {
    let (n0, n1) = (m.m0.ngens(), m.m1.ngens());
    MorphMap {
        u0: gf.incl[0].matrix.submatrix(0, 0, n0, gf.incl[0].matrix.cols()),
        u1: gf.incl[1].matrix.submatrix(n0, 0, n1, gf.incl[1].matrix.cols()),
    }
}

/// `Hom_T(A, B)`: module maps of the underlying modules commuting with the
/// `e11` and `e12` actions. Returns generators and their orders.
pub fn hom_t(a: &TModuleRep, b: &TModuleRep) -> (Vec<ExactMatrix>, Vec<BigInt>) {
    let ring = a.ring().clone();
    let hg = hom_group(&a.underlying, &b.underlying);
    let na = a.underlying.normal_form();
    let nb = b.underlying.normal_form();
    let (rows, cols) = (nb.divisors.len(), na.divisors.len());
    let phi_cols: Vec<Vec<Scalar>> = hg
        .gens
        .iter()
        .map(|f| {
            let mut v = Vec::new();
            for (ra, rb) in [(&a.e11, &b.e11), (&a.e12, &b.e12)] {
                let d = f.mul(ra).sub(&rb.mul(f));
                v.extend(nb.to_diag.mul(&d).mul(&na.from_diag).to_vec());
            }
            v
        })
        .collect();
    let phi = ExactMatrix::from_columns(&ring, 2 * rows * cols, &phi_cols);
    let orders_out: Vec<BigInt> = (0..2)
        .flat_map(|_| (0..rows).flat_map(|j| std::iter::repeat(nb.divisors[j].clone()).take(cols)))
        .collect();
    let dec = kernel_decomposition(&ring, &hg.orders, &phi, &orders_out);
    let gens = (0..dec.len())
        .map(|t| {
            let c = dec.generators.col(t);
            let mut m = ExactMatrix::zeros(&ring, b.underlying.ngens(), a.underlying.ngens());
            for (g, x) in hg.gens.iter().zip(&c) {
                m = m.add(&g.scale(x));
            }
            m
        })
        .collect();
    (gens, dec.orders)
}

pub fn hom_t_order(a: &TModuleRep, b: &TModuleRep) -> Option<BigInt> {
    let ring = a.ring();
    let (_, orders) = hom_t(a, b);
    let mut n = BigInt::from(1);
    for o in &orders {
        n *= ring.cyclic_order(o)?;
    }
    Some(n)
}

/// Outcome of the element-wise checks on `T` over a finite base ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealReport {
    pub ring_order: u64,
    pub t_order: u64,
    /// Whether every product pair was examined (otherwise a seeded sample).
    pub exhaustive: bool,
    pub i_squared_zero: bool,
    pub quotient_is_product: bool,
    /// Elements `t` with `I t = 0` and `1 - t ∈ I`; the ideal is a direct summand iff nonzero.
    pub splitting_elements: usize,
}

impl IdealReport {
    pub fn passed(&self) -> bool {
        self.i_squared_zero && self.quotient_is_product && self.splitting_elements == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring_order": self.ring_order,
            "t_order": self.t_order,
            "exhaustive": self.exhaustive,
            "i_squared_zero": self.i_squared_zero,
            "quotient_is_product": self.quotient_is_product,
            "splitting_elements": self.splitting_elements,
            "passed": self.passed(),
        })
    }
}

type T3 = (u64, u64, u64);

fn t_mul(x: T3, y: T3, n: u64) -> T3 {
    // [[a, b], [0, c]] [[a', b'], [0, c']] = [[aa', ab' + bc'], [0, cc']]
    ((x.0 * y.0) % n, (x.0 * y.1 + x.1 * y.2) % n, (x.2 * y.2) % n)
}

/// Checks over a finite base ring that `I = R e12` squares to zero, that
/// `T/I ≅ R × R` via `(a, b, c) -> (a, c)`, and that no `t` splits `I`
/// (`I t = 0` with `1 - t ∈ I`). Product checks are exhaustive up to
/// 2^24 pairs and use `sample` seeded pairs beyond that.
pub fn check_ideal_lemmas(ring: &Ring, sample: usize) -> Result<IdealReport> {
    let n = ring
        .modulus_u64()
        .filter(|&n| n <= 1 << 16)
        .ok_or_else(|| Error::PreconditionViolated(format!("{ring} is not a small finite ring")))?;
    let elems: Vec<T3> = (0..n).flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c)))).collect();
    let t_order = n * n * n;
    let i_squared_zero = (0..n).all(|b| (0..n).all(|b2| t_mul((0, b, 0), (0, b2, 0), n) == (0, 0, 0)));
    let proj = |x: T3| (x.0, x.2);
    let hom_ok = |x: T3, y: T3| {
        let (pa, pc) = (proj(x), proj(y));
        proj(t_mul(x, y, n)) == ((pa.0 * pc.0) % n, (pa.1 * pc.1) % n)
    };
    let exhaustive = t_order.checked_mul(t_order).is_some_and(|p| p <= 1 << 24);
    let multiplicative = if exhaustive {
        elems.iter().all(|&x| elems.iter().all(|&y| hom_ok(x, y)))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        (0..sample).all(|_| {
            let x = elems[rng.gen_range(0..elems.len())];
            let y = elems[rng.gen_range(0..elems.len())];
            hom_ok(x, y)
        })
    };
    // Additivity and unit preservation are immediate for a coordinate projection;
    // kernel is {(0, b, 0)} = I and every (a, c) is hit by (a, 0, c).
    let kernel_is_i = elems.iter().filter(|&&x| proj(x) == (0, 0)).all(|&x| x.0 == 0 && x.2 == 0);
    let quotient_is_product = multiplicative && kernel_is_i && proj((1, 0, 1)) == (1, 1);
    let splitting_elements = elems
        .iter()
        .filter(|&&t| {
            let annihilates = (0..n).all(|b| t_mul((0, b, 0), t, n) == (0, 0, 0));
            let one_minus = ((1 + n - t.0) % n, (n - t.1) % n, (1 + n - t.2) % n);
            annihilates && one_minus.0 == 0 && one_minus.2 == 0
        })
        .count();
    Ok(IdealReport { ring_order: n, t_order, exhaustive, i_squared_zero, quotient_is_product, splitting_elements })
}
