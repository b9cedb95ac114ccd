//! Dense matrices over GF(q) and the echelon machinery everything else is
//! built on.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

/// Reduced row-echelon form of a matrix together with its rank and pivot
/// columns. Zero rows trail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_vec(field: &FieldSpec, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        for &a in &data {
            field.check(a)?;
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    /// Builds a matrix from row vectors; `cols` fixes the width when there are no rows.
    pub fn from_rows(field: &FieldSpec, cols: usize, rows: &[Vec<Elem>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::ShapeMismatch(format!("row of length {} in width {cols}", r.len())));
            }
            data.extend_from_slice(r);
        }
        Self::from_vec(field, rows.len(), cols, data)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        debug_assert!(self.field.contains(v));
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    fn same_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!("stacking widths {} and {}", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut m = self.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| m.data[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    m.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(m.data[r * cols + c]).expect("pivot is nonzero");
            for j in c..cols {
                m.data[r * cols + j] = f.mul(m.data[r * cols + j], inv);
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = m.data[i * cols + c];
                if factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                for j in c..cols {
                    let v = m.data[r * cols + j];
                    if v != 0 {
                        m.data[i * cols + j] = f.add(m.data[i * cols + j], f.mul(neg, v));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, rank: r, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// The nonzero rows of the reduced echelon form: the canonical basis of
    /// the row space.
    pub fn row_basis(&self) -> Matrix {
        let Rref { matrix, rank, .. } = self.rref();
        matrix.take_rows(rank)
    }

    fn take_rows(mut self, k: usize) -> Matrix {
        self.data.truncate(k * self.cols);
        self.rows = k;
        self
    }

    /// Canonical basis of the right null space `{v : M v^t = 0}`.
    pub fn kernel(&self) -> Matrix {
        let f = &self.field;
        let Rref { matrix: r, rank, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(f, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out.data[k * self.cols + fc] = 1;
            for (i, &pc) in pivots.iter().enumerate().take(rank) {
                out.data[k * self.cols + pc] = f.neg(r.get(i, fc));
            }
        }
        out.row_basis()
    }

    /// `Trace(A B^t)`, i.e. the entrywise dot product.
    pub fn trace_product(&self, other: &Matrix) -> Result<Elem> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} against {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(dot(&self.field, &self.data, &other.data))
    }

    /// Canonical basis of the sum of the two row spaces.
    pub fn rowspace_sum(&self, other: &Matrix) -> Result<Matrix> {
        Ok(self.stack(other)?.row_basis())
    }

    /// Canonical basis of the intersection of the two row spaces, via the
    /// Zassenhaus block system `[X X; Y 0]`.
    pub fn rowspace_intersect(&self, other: &Matrix) -> Result<Matrix> {
        self.same_field(other)?;
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "intersecting widths {} and {}",
                self.cols, other.cols
            )));
        }
        let n = self.cols;
        let mut block = Matrix::zeros(&self.field, self.rows + other.rows, 2 * n);
        for i in 0..self.rows {
            for j in 0..n {
                let v = self.get(i, j);
                block.data[i * 2 * n + j] = v;
                block.data[i * 2 * n + n + j] = v;
            }
        }
        for i in 0..other.rows {
            let bi = self.rows + i;
            for j in 0..n {
                block.data[bi * 2 * n + j] = other.get(i, j);
            }
        }
        let Rref { matrix: r, rank, .. } = block.rref();
        let rows: Vec<Vec<Elem>> = (0..rank)
            .map(|i| r.row(i))
            .filter(|row| row[..n].iter().all(|&a| a == 0))
            .map(|row| row[n..].to_vec())
            .collect();
        Ok(Matrix::from_rows(&self.field, n, &rows)?.row_basis())
    }

    /// Whether `v` lies in the row space.
    pub fn spans(&self, v: &[Elem]) -> bool {
        let r = self.rank();
        let single = Matrix { field: self.field.clone(), rows: 1, cols: self.cols, data: v.to_vec() };
        self.stack(&single).map(|s| s.rank() == r).unwrap_or(false)
    }
}

pub fn dot(field: &FieldSpec, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u32, e: u32) -> FieldSpec {
        FieldSpec::new(p, e).unwrap()
    }

    fn m(f: &FieldSpec, rows: &[&[Elem]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(f, cols, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rref_examples() {
        let f = gf(2, 1);
        let id = Matrix::identity(&f, 3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);
        let z = Matrix::zeros(&f, 2, 3);
        assert_eq!(z.rref().rank, 0);
        assert_eq!(z.rref().matrix, z);
        let a = m(&f, &[&[1, 1], &[1, 1]]);
        let r = a.rref();
        assert_eq!(r.matrix, m(&f, &[&[1, 1], &[0, 0]]));
        assert_eq!((r.rank, r.pivots), (1, vec![0]));
    }

    #[test]
    fn kernel_examples() {
        let f = gf(2, 1);
        assert_eq!(Matrix::identity(&f, 3).kernel().rows(), 0);
        assert_eq!(Matrix::zeros(&f, 2, 3).kernel(), Matrix::identity(&f, 3));
        assert_eq!(m(&f, &[&[1, 1]]).kernel(), m(&f, &[&[1, 1]]));
    }

    #[test]
    fn trace_product_examples() {
        let f2 = gf(2, 1);
        let a = m(&f2, &[&[1, 1], &[0, 1]]);
        assert_eq!(a.trace_product(&Matrix::zeros(&f2, 2, 2)).unwrap(), 0);
        let i2 = Matrix::identity(&f2, 2);
        assert_eq!(i2.trace_product(&i2).unwrap(), 0);
        let f3 = gf(3, 1);
        assert_eq!(m(&f3, &[&[1, 2]]).trace_product(&m(&f3, &[&[2, 2]])).unwrap(), 0);
        assert!(i2.trace_product(&Matrix::zeros(&f2, 1, 2)).is_err());
        // Trace(A B^t) computed literally
        let b = m(&f2, &[&[1, 0], &[1, 1]]);
        let prod = a.mul(&b.transpose()).unwrap();
        let tr = (0..2).fold(0, |acc, i| f2.add(acc, prod.get(i, i)));
        assert_eq!(a.trace_product(&b).unwrap(), tr);
    }

    #[test]
    fn sum_and_intersection_examples() {
        let f = gf(2, 1);
        let x = m(&f, &[&[1, 0]]);
        let y = m(&f, &[&[0, 1]]);
        assert_eq!(x.rowspace_sum(&x).unwrap(), x);
        assert_eq!(x.rowspace_sum(&y).unwrap(), Matrix::identity(&f, 2));
        assert_eq!(x.rowspace_intersect(&y).unwrap().rows(), 0);
        let a = m(&f, &[&[1, 0, 0], &[0, 1, 0]]);
        let b = m(&f, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(a.rowspace_intersect(&b).unwrap(), m(&f, &[&[0, 1, 0]]));
        assert!(a.rowspace_sum(&x).is_err());
    }

    #[test]
    fn spans_membership() {
        let f = gf(3, 1);
        let a = m(&f, &[&[1, 2, 0], &[0, 1, 1]]);
        assert!(a.spans(&[1, 0, 1]));
        assert!(!a.spans(&[0, 0, 1]));
    }

    fn arb_matrix(p: u32, e: u32) -> impl Strategy<Value = Matrix> {
        let q = p.pow(e);
        (0usize..5, 1usize..6).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(0..q, r * c)
                .prop_map(move |data| Matrix::from_vec(&gf(p, e), r, c, data).unwrap())
        })
    }

    fn arb_any_field_matrix() -> impl Strategy<Value = Matrix> {
        prop_oneof![arb_matrix(2, 1), arb_matrix(3, 1), arb_matrix(2, 2), arb_matrix(5, 1)]
    }

    proptest! {
        #[test]
        fn rref_is_idempotent_and_row_order_invariant(a in arb_any_field_matrix(), seed in any::<u64>()) {
            let r = a.rref();
            prop_assert_eq!(&r.matrix.rref().matrix, &r.matrix);
            let mut rows = a.row_vecs();
            let k = rows.len();
            if k > 1 {
                rows.rotate_left((seed as usize) % k);
                rows.swap(0, k - 1);
            }
            let b = Matrix::from_rows(a.field(), a.cols(), &rows).unwrap();
            prop_assert_eq!(b.rref().matrix, r.matrix);
        }

        #[test]
        fn rank_nullity(a in arb_any_field_matrix()) {
            let k = a.kernel();
            prop_assert_eq!(a.rank() + k.rows(), a.cols());
            for i in 0..k.rows() {
                let v = k.row(i);
                for j in 0..a.rows() {
                    prop_assert_eq!(dot(a.field(), a.row(j), v), 0);
                }
            }
            prop_assert_eq!(&k.rref().matrix.take_rows(k.rows()), &k);
        }

        #[test]
        fn modular_law(pair in (1usize..6).prop_flat_map(|c| {
            let f = gf(3, 1);
            let g = move |r: usize| proptest::collection::vec(0u32..3, r * c)
                .prop_map({ let f = f.clone(); move |d| Matrix::from_vec(&f, r, c, d).unwrap() });
            (0usize..4, 0usize..4).prop_flat_map(move |(r1, r2)| (g(r1), g(r2)))
        })) {
            let (x, y) = pair;
            let s = x.rowspace_sum(&y).unwrap();
            let i = x.rowspace_intersect(&y).unwrap();
            prop_assert_eq!(s.rows() + i.rows(), x.rank() + y.rank());
            for r in 0..i.rows() {
                prop_assert!(x.spans(i.row(r)) && y.spans(i.row(r)));
            }
        }
    }
}
