//! Dense matrices over a [`Ring`], stored row-major with canonical entries.

use std::fmt;

use num_traits::Zero;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ring::{Ring, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    /// Builds a matrix, coercing every entry into the ring.
    pub fn new(ring: &Ring, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let data = data.iter().map(|x| ring.coerce(x)).collect::<Result<Vec<_>>>()?;
        Ok(ExactMatrix { ring: ring.clone(), rows, cols, data })
    }

    /// Entries already canonical for `ring`.
    pub(crate) fn from_canonical(ring: &Ring, rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        ExactMatrix { ring: ring.clone(), rows, cols, data }
    }

    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Self {
        ExactMatrix { ring: ring.clone(), rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = ring.one();
        }
        m
    }

    pub fn from_i64(ring: &Ring, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let data = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged rows");
                row.iter().map(|&v| ring.from_i64(v))
            })
            .collect();
        ExactMatrix { ring: ring.clone(), rows: r, cols: c, data }
    }

    /// `rows x cols` matrix from an i64 slice in row-major order.
    pub fn from_vec_i64(ring: &Ring, rows: usize, cols: usize, vals: &[i64]) -> Self {
        assert_eq!(vals.len(), rows * cols);
        let data = vals.iter().map(|&v| ring.from_i64(v)).collect();
        ExactMatrix { ring: ring.clone(), rows, cols, data }
    }

    pub fn column(ring: &Ring, v: &[Scalar]) -> Self {
        ExactMatrix { ring: ring.clone(), rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn diagonal(ring: &Ring, d: &[Scalar]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(ring, n, n);
        for (i, x) in d.iter().enumerate() {
            m.data[i * n + i] = x.clone();
        }
        m
    }

    pub fn from_columns(ring: &Ring, rows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(ring, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        let v = self.ring.coerce(&v).expect("entry not representable in ring");
        self.data[i * self.cols + j] = v;
    }

    pub(crate) fn set_canonical(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        *x == self.ring.one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let r = &self.ring;
        let mut out = Self::zeros(r, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = r.add(&out.data[idx], &r.mul(a, b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        let r = &self.ring;
        (0..self.rows)
            .map(|i| {
                let mut acc = r.zero();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc = r.add(&acc, &r.mul(a, x));
                    }
                }
                acc
            })
            .collect()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect();
        ExactMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| self.ring.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| self.ring.sub(a, b))
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(|a| self.ring.neg(a)).collect();
        ExactMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let data = self.data.iter().map(|a| self.ring.mul(a, c)).collect();
        ExactMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
            data.extend_from_slice(&other.data[i * other.cols..(i + 1) * other.cols]);
        }
        ExactMatrix { ring: self.ring.clone(), rows: self.rows, cols, data }
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        ExactMatrix { ring: self.ring.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        let mut m = Self::zeros(&self.ring, self.rows + other.rows, self.cols + other.cols);
        m.paste(0, 0, self);
        m.paste(self.rows, self.cols, other);
        m
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j).clone();
            }
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(&self.ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = self.get(r0 + i, c0 + j).clone();
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
        }
        ExactMatrix { ring: self.ring.clone(), rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(&self.ring, self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                m.data[i * idx.len() + jj] = self.get(i, j).clone();
            }
        }
        m
    }

    /// Flattens row-major into a vector.
    pub fn to_vec(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += c * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.get(src, j);
            if s.is_zero() {
                continue;
            }
            let v = self.ring.add(self.get(dst, j), &self.ring.mul(c, s));
            self.data[dst * self.cols + j] = v;
        }
    }

    /// col[dst] += c * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.get(i, src);
            if s.is_zero() {
                continue;
            }
            let v = self.ring.add(self.get(i, dst), &self.ring.mul(c, s));
            self.data[i * self.cols + dst] = v;
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &Scalar) {
        for j in 0..self.cols {
            let v = self.ring.mul(self.get(i, j), c);
            self.data[i * self.cols + j] = v;
        }
    }

    pub fn scale_col(&mut self, j: usize, c: &Scalar) {
        for i in 0..self.rows {
            let v = self.ring.mul(self.get(i, j), c);
            self.data[i * self.cols + j] = v;
        }
    }

    /// JSON array of row arrays with entries as strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| {
                    Value::Array(
                        (0..self.cols)
                            .map(|j| Value::String(self.ring.format_elem(self.get(i, j))))
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    /// Parses an array of row arrays. Entries may be JSON numbers or strings.
    /// `shape` fixes the expected dimensions (needed when there are no rows).
    pub fn from_json(ring: &Ring, v: &Value, shape: Option<(usize, usize)>) -> Result<Self> {
        let rows = v.as_array().ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
        let mut data = Vec::new();
        let mut ncols = None;
        for row in rows {
            let row = row.as_array().ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
            match ncols {
                None => ncols = Some(row.len()),
                Some(c) if c != row.len() => return Err(Error::Parse("ragged matrix rows".into())),
                _ => {}
            }
            for x in row {
                data.push(parse_scalar(ring, x)?);
            }
        }
        let (r, c) = match (shape, ncols) {
            (Some((r, c)), _) => (r, c),
            (None, Some(c)) => (rows.len(), c),
            (None, None) => (0, 0),
        };
        if rows.len() != r || (r > 0 && ncols != Some(c)) {
            return Err(Error::Parse(format!(
                "matrix has shape {}x{}, expected {r}x{c}",
                rows.len(),
                ncols.unwrap_or(0)
            )));
        }
        Ok(ExactMatrix { ring: ring.clone(), rows: r, cols: c, data })
    }
}

pub fn parse_scalar(ring: &Ring, x: &Value) -> Result<Scalar> {
    match x {
        Value::String(s) => ring.parse_elem(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(ring.from_i64(i))
            } else {
                ring.parse_elem(&n.to_string())
            }
        }
        _ => Err(Error::Parse(format!("matrix entry must be a number or string, got {x}"))),
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.ring.format_elem(self.get(i, j)))?;
            }
        }
        write!(f, "]")
    }
}
