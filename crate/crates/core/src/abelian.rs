//! Finitely generated abelian groups (modules over the base ring) written as
//! direct sums of cyclic pieces `R/(d)`, with explicit generators.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::linalg::solve_linear;
use crate::matrix::ExactMatrix;
use crate::module::FPModule;
use crate::ring::{Ring, Scalar};

/// A module given as `⊕ R/(orders[j])`, where summand `j` is generated by
/// column `j` of `generators` (a vector in some ambient coordinate space).
/// Coefficients of column `j` are meaningful modulo `orders[j]`; order 0 (or
/// `p^k` over `Z/p^k`) means free.
#[derive(Clone, Debug)]
pub struct CyclicDecomposition {
    pub ring: Ring,
    pub generators: ExactMatrix,
    pub orders: Vec<BigInt>,
}

impl CyclicDecomposition {
    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    /// Number of elements, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        let mut n = BigInt::one();
        for d in &self.orders {
            n *= self.ring.cyclic_order(d)?;
        }
        Some(n)
    }

    /// Number of admissible coefficient values per generator when finite and small.
    pub fn coefficient_ranges(&self) -> Option<Vec<u64>> {
        self.orders.iter().map(|d| self.ring.cyclic_order(d).and_then(|n| n.to_u64())).collect()
    }

    /// The element `sum_j c_j * generators[:, j]`.
    pub fn element(&self, coeffs: &[Scalar]) -> Vec<Scalar> {
        self.generators.mul_vec(coeffs)
    }
}

fn divisor_diag(ring: &Ring, orders: &[BigInt]) -> ExactMatrix {
    let d: Vec<Scalar> = orders.iter().map(|o| ring.from_int(o)).collect();
    ExactMatrix::diagonal(ring, &d)
}

/// Cyclic decomposition of the subgroup of `⊕ R/(orders)` spanned by the columns of `gens`.
pub fn span_decomposition(ring: &Ring, orders: &[BigInt], gens: &ExactMatrix) -> CyclicDecomposition {
    let (n, s) = gens.shape();
    assert_eq!(n, orders.len());
    let big = gens.hstack(&divisor_diag(ring, orders));
    let sol = solve_linear(&big, &vec![ring.zero(); n]);
    let rels: Vec<Vec<Scalar>> = sol
        .homogeneous
        .iter()
        .map(|h| h[..s].to_vec())
        .filter(|h| h.iter().any(|x| !x.is_zero()))
        .collect();
    let pres = FPModule::new(ring, s, ExactMatrix::from_columns(ring, s, &rels)).expect("shape");
    let nf = pres.normal_form();
    let mut generators = gens.mul(&nf.from_diag);
    for j in 0..generators.cols() {
        for (i, o) in orders.iter().enumerate() {
            let v = ring.reduce_mod_divisor(generators.get(i, j), o);
            generators.set_canonical(i, j, v);
        }
    }
    CyclicDecomposition { ring: ring.clone(), generators, orders: nf.divisors.clone() }
}

/// Cyclic decomposition of `{c in ⊕ R/(orders_in) : phi c = 0 in ⊕ R/(orders_out)}`.
/// `phi` must be well defined on the quotient.
pub fn kernel_decomposition(
    ring: &Ring,
    orders_in: &[BigInt],
    phi: &ExactMatrix,
    orders_out: &[BigInt],
) -> CyclicDecomposition {
    let (m, n) = phi.shape();
    assert_eq!(n, orders_in.len());
    assert_eq!(m, orders_out.len());
    let big = phi.hstack(&divisor_diag(ring, orders_out));
    let sol = solve_linear(&big, &vec![ring.zero(); m]);
    let gens: Vec<Vec<Scalar>> = sol.homogeneous.iter().map(|h| h[..n].to_vec()).collect();
    let g = ExactMatrix::from_columns(ring, n, &gens);
    span_decomposition(ring, orders_in, &g)
}
