//! Subspaces of `E = F_q^n` in canonical form and the full lattice of them.
//!
//! A subspace is stored as its reduced row-echelon basis, so equality of
//! subspaces is equality of bases. The lattice lists every subspace exactly
//! once, ordered by dimension and then lexicographically by the row-major
//! entries of the canonical basis; that order fixes table indices.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::matrix::Matrix;

/// Default cap on the number of lattice members.
pub const DEFAULT_MAX_MEMBERS: u64 = 1_000_000;

/// Point sets are kept as bitsets only while `q^n` stays below this.
const MAX_POINT_BITS: u64 = 1 << 12;

#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    basis: Matrix,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "span{:?}", self.basis.row_vecs())
    }
}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.basis.cols().hash(state);
        self.basis.data().hash(state);
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.dim(), self.basis.data()).cmp(&(other.dim(), other.basis.data()))
    }
}

impl Subspace {
    /// Row space of `m`.
    pub fn from_matrix(m: &Matrix) -> Self {
        Subspace { basis: m.row_basis() }
    }

    pub fn span(field: &FieldSpec, n: usize, vectors: &[Vec<Elem>]) -> Result<Self> {
        Ok(Self::from_matrix(&Matrix::from_rows(field, n, vectors)?))
    }

    pub fn zero(field: &FieldSpec, n: usize) -> Self {
        Subspace { basis: Matrix::zeros(field, 0, n) }
    }

    pub fn full(field: &FieldSpec, n: usize) -> Self {
        Subspace { basis: Matrix::identity(field, n) }
    }

    /// `span{e_i}` for the standard basis vector with a one in position `i`.
    pub fn axis(field: &FieldSpec, n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Self::span(field, n, &[v]).expect("width matches")
    }

    pub fn field(&self) -> &FieldSpec {
        self.basis.field()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical (reduced echelon) basis.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        if self.ambient() != other.ambient() {
            return Err(Error::ShapeMismatch(format!(
                "subspaces of F_q^{} and F_q^{}",
                self.ambient(),
                other.ambient()
            )));
        }
        Ok(())
    }

    /// Orthogonal complement for the standard dot product.
    pub fn orthogonal_complement(&self) -> Subspace {
        Subspace { basis: self.basis.kernel() }
    }

    /// Whether `self ⊆ other`.
    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        if self.dim() > other.dim() {
            return Ok(false);
        }
        Ok((0..self.dim()).all(|i| other.basis.spans(self.basis.row(i))))
    }

    pub fn contains_vector(&self, v: &[Elem]) -> bool {
        v.len() == self.ambient() && self.basis.spans(v)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Subspace { basis: self.basis.rowspace_sum(&other.basis)? })
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        Ok(Subspace { basis: self.basis.rowspace_intersect(&other.basis)? })
    }

    /// All `q^dim` vectors of the subspace.
    pub fn vectors(&self) -> Vec<Vec<Elem>> {
        let f = self.field();
        let (k, n, q) = (self.dim(), self.ambient(), f.q());
        let mut out = vec![vec![0; n]];
        for i in 0..k {
            let row = self.basis.row(i);
            let mut next = Vec::with_capacity(out.len() * q as usize);
            for c in 0..q {
                for v in &out {
                    next.push(v.iter().zip(row).map(|(&a, &b)| f.add(a, f.mul(c, b))).collect());
                }
            }
            out = next;
        }
        out
    }
}

/// Number of k-dimensional subspaces of `F_q^n`; `None` on u128 overflow.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    // row[j] holds [i choose j]_q while i sweeps 0..=n
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            let qj = (q as u128).checked_pow(j as u32)?;
            row[j] = row[j - 1].checked_add(qj.checked_mul(row[j])?)?;
        }
    }
    Some(row[k])
}

/// Total number of subspaces of `F_q^n`; `None` on overflow.
pub fn subspace_count(n: usize, q: u64) -> Option<u128> {
    (0..=n).try_fold(0u128, |acc, k| acc.checked_add(gaussian_binomial(n, k, q)?))
}

/// Every subspace of `F_q^n` with index, complement and lattice operations.
pub struct SubspaceLattice {
    field: FieldSpec,
    n: usize,
    max_members: u64,
    members: Vec<Subspace>,
    index: HashMap<Vec<Elem>, usize>,
    complement: Vec<usize>,
    dim_start: Vec<usize>,
    /// Row-major bitsets over the `q^n` points, `words` u64 per member.
    points: Option<Vec<u64>>,
    words: usize,
}

impl std::fmt::Debug for SubspaceLattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SubspaceLattice({:?}, n={}, {} members)", self.field, self.n, self.members.len())
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// All reduced echelon k×n matrices with the given pivot columns.
fn echelon_forms(field: &FieldSpec, n: usize, pivots: &[usize]) -> Vec<Vec<Elem>> {
    let k = pivots.len();
    let free: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| ((pivots[i] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
        .collect();
    let q = field.q() as usize;
    let total = q.pow(free.len() as u32);
    let mut out = Vec::with_capacity(total);
    let mut base = vec![0; k * n];
    for (i, &p) in pivots.iter().enumerate() {
        base[i * n + p] = 1;
    }
    for mut code in 0..total {
        let mut m = base.clone();
        for &(i, c) in &free {
            m[i * n + c] = (code % q) as Elem;
            code /= q;
        }
        out.push(m);
    }
    out
}

impl SubspaceLattice {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Dimension of the ambient space.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_members(&self) -> u64 {
        self.max_members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &Subspace {
        &self.members[i]
    }

    pub fn dim(&self, i: usize) -> usize {
        self.members[i].dim()
    }

    pub fn zero_index(&self) -> usize {
        0
    }

    pub fn full_index(&self) -> usize {
        self.members.len() - 1
    }

    /// Index range of the members of dimension `k`.
    pub fn of_dim(&self, k: usize) -> std::ops::Range<usize> {
        self.dim_start[k]..self.dim_start[k + 1]
    }

    pub fn index_of(&self, x: &Subspace) -> Result<usize> {
        if x.field() != &self.field || x.ambient() != self.n {
            return Err(Error::NotInLattice);
        }
        self.index.get(x.basis().data()).copied().ok_or(Error::NotInLattice)
    }

    pub fn complement(&self, i: usize) -> usize {
        self.complement[i]
    }

    fn point_set(&self, i: usize) -> Option<&[u64]> {
        self.points.as_ref().map(|p| &p[i * self.words..(i + 1) * self.words])
    }

    /// Whether member `i` is contained in member `j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        if self.dim(i) > self.dim(j) {
            return false;
        }
        match (self.point_set(i), self.point_set(j)) {
            (Some(a), Some(b)) => a.iter().zip(b).all(|(x, y)| x & !y == 0),
            _ => self.members[i].is_subspace_of(&self.members[j]).expect("same ambient"),
        }
    }

    /// Index of `X_i + X_j`.
    pub fn join(&self, i: usize, j: usize) -> usize {
        if self.leq(i, j) {
            return j;
        }
        if self.leq(j, i) {
            return i;
        }
        let s = self.members[i].sum(&self.members[j]).expect("same ambient");
        self.index[s.basis().data()]
    }

    /// Index of `X_i ∩ X_j`, as the complement of `X_i^⊥ + X_j^⊥`.
    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.complement[self.join(self.complement[i], self.complement[j])]
    }
}

/// Enumerates every subspace of `F_q^n`, refusing when the total count
/// exceeds `max_members`.
pub fn enumerate_subspaces(field: &FieldSpec, n: usize, max_members: u64) -> Result<Arc<SubspaceLattice>> {
    let q = field.q() as u64;
    let needed = subspace_count(n, q).unwrap_or(u128::MAX);
    if needed > max_members as u128 {
        return Err(Error::LatticeTooLarge { needed, limit: max_members });
    }

    let mut members = Vec::with_capacity(needed as usize);
    let mut dim_start = Vec::with_capacity(n + 2);
    for k in 0..=n {
        dim_start.push(members.len());
        let mut layer: Vec<Vec<Elem>> = combinations(n, k)
            .par_iter()
            .flat_map_iter(|pivots| echelon_forms(field, n, pivots))
            .collect();
        layer.par_sort_unstable();
        debug_assert_eq!(layer.len() as u128, gaussian_binomial(n, k, q).unwrap());
        for data in layer {
            let basis = Matrix::from_vec(field, k, n, data).expect("entries in range");
            members.push(Subspace { basis });
        }
    }
    dim_start.push(members.len());

    let index: HashMap<Vec<Elem>, usize> =
        members.iter().enumerate().map(|(i, s)| (s.basis().data().to_vec(), i)).collect();
    let complement: Vec<usize> = members
        .par_iter()
        .map(|s| index[s.orthogonal_complement().basis().data()])
        .collect();

    let npoints = q.checked_pow(n as u32).filter(|&v| v <= MAX_POINT_BITS);
    let (points, words) = match npoints {
        Some(np) => {
            let words = (np as usize).div_ceil(64).max(1);
            let sets: Vec<Vec<u64>> = members
                .par_iter()
                .map(|s| {
                    let mut bits = vec![0u64; words];
                    for v in s.vectors() {
                        let idx = v.iter().rev().fold(0usize, |acc, &a| acc * q as usize + a as usize);
                        bits[idx / 64] |= 1 << (idx % 64);
                    }
                    bits
                })
                .collect();
            (Some(sets.concat()), words)
        }
        None => (None, 0),
    };

    Ok(Arc::new(SubspaceLattice {
        field: field.clone(),
        n,
        max_members,
        members,
        index,
        complement,
        dim_start,
        points,
        words,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> FieldSpec {
        FieldSpec::new(p, 1).unwrap()
    }

    #[test]
    fn small_counts() {
        let f = gf(2);
        assert_eq!(enumerate_subspaces(&f, 1, DEFAULT_MAX_MEMBERS).unwrap().len(), 2);
        let l2 = enumerate_subspaces(&f, 2, DEFAULT_MAX_MEMBERS).unwrap();
        assert_eq!(l2.len(), 5);
        assert_eq!(l2.of_dim(1).len(), 3);
        let l4 = enumerate_subspaces(&f, 4, DEFAULT_MAX_MEMBERS).unwrap();
        let per_dim: Vec<usize> = (0..=4).map(|k| l4.of_dim(k).len()).collect();
        assert_eq!(per_dim, vec![1, 15, 35, 15, 1]);
    }

    #[test]
    fn gaussian_binomial_values() {
        assert_eq!(gaussian_binomial(2, 1, 2), Some(3));
        for n in 0..6 {
            assert_eq!(gaussian_binomial(n, 0, 3), Some(1));
            assert_eq!(gaussian_binomial(n, n, 3), Some(1));
        }
        assert_eq!(gaussian_binomial(4, 2, 2), Some(35));
        assert_eq!(gaussian_binomial(3, 5, 2), Some(0));
        assert_eq!(gaussian_binomial(200, 100, 2), None);
    }

    #[test]
    fn guard_reports_needed_count() {
        let err = enumerate_subspaces(&gf(2), 4, 66).unwrap_err();
        assert_eq!(err, Error::LatticeTooLarge { needed: 67, limit: 66 });
    }

    #[test]
    fn complement_examples() {
        let f = gf(2);
        let zero = Subspace::zero(&f, 2);
        assert_eq!(zero.orthogonal_complement(), Subspace::full(&f, 2));
        let diag = Subspace::span(&f, 2, &[vec![1, 1]]).unwrap();
        assert_eq!(diag.orthogonal_complement(), diag);
        let e1 = Subspace::axis(&f, 3, 0);
        let expected = Subspace::span(&f, 3, &[vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(e1.orthogonal_complement(), expected);
    }

    #[test]
    fn containment_examples() {
        let f = gf(2);
        let zero = Subspace::zero(&f, 3);
        let y = Subspace::span(&f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert!(zero.is_subspace_of(&y).unwrap());
        assert!(!Subspace::full(&f, 3).is_subspace_of(&y).unwrap());
        assert!(Subspace::axis(&f, 3, 0).is_subspace_of(&y).unwrap());
        assert!(Subspace::axis(&f, 3, 0).is_subspace_of(&Subspace::zero(&f, 2)).is_err());
    }

    #[test]
    fn lattice_structure() {
        for &(p, n) in &[(2, 3), (2, 4), (3, 3)] {
            let lat = enumerate_subspaces(&gf(p), n, DEFAULT_MAX_MEMBERS).unwrap();
            assert_eq!(lat.complement(lat.zero_index()), lat.full_index());
            for i in 0..lat.len() {
                let c = lat.complement(i);
                assert_eq!(lat.complement(c), i);
                assert_eq!(lat.dim(i) + lat.dim(c), n);
                assert_eq!(lat.index_of(lat.member(i)).unwrap(), i);
            }
            for i in 0..lat.len() {
                for j in 0..lat.len() {
                    let (x, y) = (lat.member(i), lat.member(j));
                    assert_eq!(lat.leq(i, j), x.is_subspace_of(y).unwrap());
                    assert_eq!(lat.member(lat.join(i, j)), &x.sum(y).unwrap());
                    assert_eq!(lat.member(lat.meet(i, j)), &x.intersection(y).unwrap());
                    assert_eq!(lat.dim(lat.join(i, j)) + lat.dim(lat.meet(i, j)), x.dim() + y.dim());
                }
            }
        }
    }

    #[test]
    fn ordering_is_stable() {
        let a = enumerate_subspaces(&gf(3), 3, DEFAULT_MAX_MEMBERS).unwrap();
        let b = enumerate_subspaces(&gf(3), 3, DEFAULT_MAX_MEMBERS).unwrap();
        assert_eq!(a.members(), b.members());
        assert!(a.members().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn vectors_enumerate_whole_subspace() {
        let f = FieldSpec::new(2, 2).unwrap();
        let x = Subspace::span(&f, 3, &[vec![1, 2, 0], vec![0, 1, 3]]).unwrap();
        let vs = x.vectors();
        assert_eq!(vs.len(), 16);
        assert!(vs.iter().all(|v| x.contains_vector(v)));
    }
}
