//! Row reduction, kernels, determinants, Smith normal form and linear solving.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::ring::{Ring, Scalar};

#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: ExactMatrix,
    pub rank: usize,
    /// Invertible matrix with `transform * A = reduced`.
    pub transform: ExactMatrix,
    pub pivots: Vec<usize>,
}

fn require_field(ring: &Ring) -> Result<()> {
    if ring.is_field() {
        Ok(())
    } else {
        Err(Error::NonFieldRing(ring.to_string()))
    }
}

pub fn rref(a: &ExactMatrix) -> Result<Rref> {
    let ring = a.ring().clone();
    require_field(&ring)?;
    let (m, n) = a.shape();
    let mut r = a.clone();
    let mut t = ExactMatrix::identity(&ring, m);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        let Some(p) = (row..m).find(|&i| !r.get(i, col).is_zero()) else {
            continue;
        };
        r.swap_rows(row, p);
        t.swap_rows(row, p);
        let inv = ring.inv(r.get(row, col)).expect("nonzero field element");
        r.scale_row(row, &inv);
        t.scale_row(row, &inv);
        for i in 0..m {
            if i != row && !r.get(i, col).is_zero() {
                let c = ring.neg(r.get(i, col));
                r.add_row_multiple(i, row, &c);
                t.add_row_multiple(i, row, &c);
            }
        }
        pivots.push(col);
        row += 1;
    }
    Ok(Rref { reduced: r, rank: row, transform: t, pivots })
}

pub fn rank(a: &ExactMatrix) -> Result<usize> {
    Ok(rref(a)?.rank)
}

/// Basis of `{v : A v = 0}` over a field, one vector per free column.
pub fn nullspace(a: &ExactMatrix) -> Result<Vec<Vec<Scalar>>> {
    let ring = a.ring().clone();
    let rr = rref(a)?;
    let n = a.cols();
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; n];
    for &p in &rr.pivots {
        is_pivot[p] = true;
    }
    for f in (0..n).filter(|&j| !is_pivot[j]) {
        let mut v = vec![ring.zero(); n];
        v[f] = ring.one();
        for (i, &p) in rr.pivots.iter().enumerate() {
            v[p] = ring.neg(rr.reduced.get(i, f));
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Determinant. Integer-like rings use fraction-free elimination over Z on
/// representatives and reduce at the end.
pub fn determinant(a: &ExactMatrix) -> Result<Scalar> {
    if !a.is_square() {
        return Err(Error::NonSquare { rows: a.rows(), cols: a.cols() });
    }
    let ring = a.ring();
    let n = a.rows();
    if n == 0 {
        return Ok(ring.one());
    }
    if let Ring::Rational = ring {
        let mut m: Vec<Vec<Scalar>> = (0..n).map(|i| a.row(i)).collect();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
                return Ok(Scalar::zero());
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det *= &m[c][c];
            for i in c + 1..n {
                if m[i][c].is_zero() {
                    continue;
                }
                let f = &m[i][c] / &m[c][c];
                for j in c..n {
                    let v = &m[c][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        return Ok(det);
    }
    // Bareiss over Z.
    let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| a.row(i).iter().map(|x| x.numer().clone()).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Ok(ring.zero());
            };
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    Ok(ring.from_int(&(sign * &m[n - 1][n - 1])))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: ExactMatrix,
    pub d: ExactMatrix,
    pub v: ExactMatrix,
    /// One entry per diagonal position `0..min(rows, cols)`, in canonical form.
    pub elementary_divisors: Vec<BigInt>,
}

fn smith_quotient(ring: &Ring, a: &Scalar, b: &Scalar) -> Scalar {
    if let Some(q) = ring.div_exact(a, b) {
        return q;
    }
    match ring {
        Ring::Integer => Scalar::from_integer(a.numer().div_floor(b.numer())),
        _ => unreachable!("pivot of minimal valuation divides every entry"),
    }
}

/// Smith normal form `U A V = D` with deterministic pivoting.
///
/// The pivot is the nonzero entry of minimal absolute value (Z) or minimal
/// p-valuation (Z/p^k), ties broken by lowest `(row, col)`. Over fields the
/// first nonzero entry is used and the result is the rank normal form.
pub fn smith_normal_form(a: &ExactMatrix) -> SmithDecomposition {
    let ring = a.ring().clone();
    let (m, n) = a.shape();
    let mut d = a.clone();
    let mut u = ExactMatrix::identity(&ring, m);
    let mut v = ExactMatrix::identity(&ring, n);
    let steps = m.min(n);
    'outer: for t in 0..steps {
        loop {
            let mut best: Option<(BigInt, usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = d.get(i, j);
                    if x.is_zero() {
                        continue;
                    }
                    let key = ring.pivot_key(x);
                    if best.as_ref().map_or(true, |(k, _, _)| key < *k) {
                        best = Some((key, i, j));
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                break 'outer;
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = ring.neg(&smith_quotient(&ring, d.get(i, t), &pivot));
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = ring.neg(&smith_quotient(&ring, d.get(t, j), &pivot));
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| ring.div_exact(d.get(i, j), &pivot).is_none())
            });
            if let Some(i) = bad {
                let one = ring.one();
                d.add_row_multiple(t, i, &one);
                u.add_row_multiple(t, i, &one);
                continue;
            }
            break;
        }
        let (_, uinv) = ring.normalize_associate(d.get(t, t));
        d.scale_row(t, &uinv);
        u.scale_row(t, &uinv);
    }
    let elementary_divisors = (0..steps).map(|i| ring.canonical_divisor(d.get(i, i))).collect();
    SmithDecomposition { u, d, v, elementary_divisors }
}

/// Result of [`solve_linear`].
#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub particular: Option<Vec<Scalar>>,
    /// Generators of the solution module of `A x = 0`.
    pub homogeneous: Vec<Vec<Scalar>>,
}

/// Solves `A x = b` exactly over any supported ring.
pub fn solve_linear(a: &ExactMatrix, b: &[Scalar]) -> LinearSolution {
    let ring = a.ring().clone();
    let (m, n) = a.shape();
    assert_eq!(b.len(), m, "right-hand side length");
    if ring.is_field() {
        let rr = rref(a).expect("field");
        let c = rr.transform.mul_vec(b);
        let consistent = c[rr.rank..].iter().all(Zero::is_zero);
        let particular = consistent.then(|| {
            let mut x = vec![ring.zero(); n];
            for (i, &p) in rr.pivots.iter().enumerate() {
                x[p] = c[i].clone();
            }
            x
        });
        return LinearSolution { particular, homogeneous: nullspace(a).expect("field") };
    }
    let s = smith_normal_form(a);
    let c = s.u.mul_vec(b);
    let steps = m.min(n);
    let mut y = vec![ring.zero(); n];
    let mut gens = Vec::new();
    let mut ok = c[steps..].iter().all(Zero::is_zero);
    for i in 0..steps {
        let di = s.d.get(i, i);
        if di.is_zero() {
            ok &= c[i].is_zero();
            let mut e = vec![ring.zero(); n];
            e[i] = ring.one();
            gens.push(e);
            continue;
        }
        match ring.div_exact(&c[i], di) {
            Some(q) => y[i] = q,
            None => ok = false,
        }
        if let Ring::Residue { p, k } = ring {
            let e = ring.valuation(di);
            if e > 0 {
                let mut g = vec![ring.zero(); n];
                g[i] = ring.from_int(&BigInt::from(p).pow(k - e));
                gens.push(g);
            }
        }
    }
    for j in steps..n {
        let mut e = vec![ring.zero(); n];
        e[j] = ring.one();
        gens.push(e);
    }
    LinearSolution {
        particular: ok.then(|| s.v.mul_vec(&y)),
        homogeneous: gens.iter().map(|g| s.v.mul_vec(g)).collect(),
    }
}

/// Inverse of a square matrix when its determinant is a unit.
pub fn inverse(a: &ExactMatrix) -> Result<Option<ExactMatrix>> {
    if !a.is_square() {
        return Err(Error::NonSquare { rows: a.rows(), cols: a.cols() });
    }
    let ring = a.ring().clone();
    if ring.is_field() {
        let rr = rref(a)?;
        return Ok((rr.rank == a.rows()).then_some(rr.transform));
    }
    let s = smith_normal_form(a);
    let n = a.rows();
    let mut dinv = ExactMatrix::zeros(&ring, n, n);
    for i in 0..n {
        match ring.inv(s.d.get(i, i)) {
            Some(x) => dinv.set_canonical(i, i, x),
            None => return Ok(None),
        }
    }
    Ok(Some(s.v.mul(&dinv).mul(&s.u)))
}

pub fn is_invertible(a: &ExactMatrix) -> Result<bool> {
    Ok(inverse(a)?.is_some())
}

/// Whether the divisor list is a divisibility chain `d_1 | d_2 | ...` (zero last).
pub fn is_divisor_chain(ring: &Ring, divs: &[BigInt]) -> bool {
    divs.windows(2).all(|w| {
        let (a, b) = (&w[0], &w[1]);
        match ring {
            Ring::Residue { .. } => a <= b,
            _ => {
                if a.is_zero() {
                    b.is_zero()
                } else {
                    (b % a).is_zero() && (b.is_zero() || b.abs() >= a.abs())
                }
            }
        }
    })
}
