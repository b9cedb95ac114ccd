//! Delsarte rank-metric codes: `F_q`-linear spaces of `m × n` matrices.
//!
//! Codewords are stored vectorized in row-major order, so the trace form
//! `Trace(A B^t)` is the ordinary dot product on `F_q^{mn}` and the trace
//! dual is a kernel computation.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::lattice::{enumerate_subspaces, Subspace, SubspaceLattice, DEFAULT_MAX_MEMBERS};
use crate::matrix::{dot, Matrix};
use crate::polymatroid::PolymatroidTable;
use crate::weights::{generalized_weights, weights_from_conullity, WeightProfile};

/// Default cap on `q^K` for codeword enumeration.
pub const DEFAULT_MAX_CODEWORDS: u64 = 1 << 20;

#[derive(Clone, PartialEq, Eq)]
pub struct DelsarteCode {
    field: FieldSpec,
    m: usize,
    n: usize,
    canonical: Matrix,
}

impl std::fmt::Debug for DelsarteCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DelsarteCode[GF({}) {}x{} K={}]{:?}", self.field.q(), self.m, self.n, self.dim(), self.canonical)
    }
}

pub fn vectorize(m: &Matrix) -> Vec<Elem> {
    m.data().to_vec()
}

pub fn devectorize(field: &FieldSpec, m: usize, n: usize, v: &[Elem]) -> Result<Matrix> {
    Matrix::from_vec(field, m, n, v.to_vec())
}

impl DelsarteCode {
    /// The code spanned by `generators`, which must be independent.
    pub fn new(field: &FieldSpec, m: usize, n: usize, generators: &[Matrix]) -> Result<Self> {
        let code = Self::span(field, m, n, generators)?;
        if code.dim() != generators.len() {
            return Err(Error::DependentGenerators);
        }
        Ok(code)
    }

    /// The code spanned by `generators`, dependent or not.
    pub fn span(field: &FieldSpec, m: usize, n: usize, generators: &[Matrix]) -> Result<Self> {
        let mut rows = Vec::with_capacity(generators.len());
        for g in generators {
            if g.field() != field {
                return Err(Error::FieldMismatch);
            }
            if g.rows() != m || g.cols() != n {
                return Err(Error::ShapeMismatch(format!("{}x{} generator in a {m}x{n} code", g.rows(), g.cols())));
            }
            rows.push(vectorize(g));
        }
        Self::from_vectors(field, m, n, &rows)
    }

    /// The code spanned by vectorized codewords.
    pub fn from_vectors(field: &FieldSpec, m: usize, n: usize, vectors: &[Vec<Elem>]) -> Result<Self> {
        let stacked = Matrix::from_rows(field, m * n, vectors)?;
        Ok(Self::from_matrix(m, n, &stacked))
    }

    fn from_matrix(m: usize, n: usize, rows: &Matrix) -> Self {
        DelsarteCode { field: rows.field().clone(), m, n, canonical: rows.row_basis() }
    }

    pub fn zero(field: &FieldSpec, m: usize, n: usize) -> Self {
        Self::from_matrix(m, n, &Matrix::zeros(field, 0, m * n))
    }

    /// All of `F_q^{m×n}`.
    pub fn full(field: &FieldSpec, m: usize, n: usize) -> Self {
        Self::from_matrix(m, n, &Matrix::identity(field, m * n))
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.canonical.rows()
    }

    /// Reduced echelon basis of the vectorized code, `K × mn`.
    pub fn canonical(&self) -> &Matrix {
        &self.canonical
    }

    /// The canonical basis as `m × n` matrices.
    pub fn generators(&self) -> Vec<Matrix> {
        (0..self.dim())
            .map(|i| devectorize(&self.field, self.m, self.n, self.canonical.row(i)).expect("row width is mn"))
            .collect()
    }

    pub fn contains(&self, word: &Matrix) -> bool {
        word.rows() == self.m && word.cols() == self.n && self.canonical.spans(word.data())
    }

    fn same_ambient(&self, other: &DelsarteCode) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if (self.m, self.n) != (other.m, other.n) {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} code against {}x{} code",
                self.m, self.n, other.m, other.n
            )));
        }
        Ok(())
    }

    fn check_row_space(&self, x: &Subspace) -> Result<()> {
        if x.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        if x.ambient() != self.n {
            return Err(Error::ShapeMismatch(format!("subspace of F^{} for a code with n = {}", x.ambient(), self.n)));
        }
        Ok(())
    }

    pub fn is_subcode_of(&self, other: &DelsarteCode) -> Result<bool> {
        self.same_ambient(other)?;
        Ok((0..self.dim()).all(|i| other.canonical.spans(self.canonical.row(i))))
    }

    pub fn sum(&self, other: &DelsarteCode) -> Result<DelsarteCode> {
        self.same_ambient(other)?;
        Ok(Self::from_matrix(self.m, self.n, &self.canonical.rowspace_sum(&other.canonical)?))
    }

    pub fn intersection(&self, other: &DelsarteCode) -> Result<DelsarteCode> {
        self.same_ambient(other)?;
        Ok(Self::from_matrix(self.m, self.n, &self.canonical.rowspace_intersect(&other.canonical)?))
    }

    /// `C(X) = C ∩ 𝕄(X)`, by intersecting the vectorized spaces.
    pub fn subcode(&self, x: &Subspace) -> Result<DelsarteCode> {
        self.check_row_space(x)?;
        self.intersection(&support_space(x, self.m))
    }

    /// Rank of the map `C → F_q^{m × dim Y}`, `M ↦ M Y^t`, for a basis `Y`.
    /// Its kernel is `C(Y^⊥)`.
    fn rank_against(&self, y: &Matrix) -> usize {
        let (m, n, k) = (self.m, self.n, self.dim());
        let mut a = Matrix::zeros(&self.field, m * y.rows(), k);
        for c in 0..k {
            let g = self.canonical.row(c);
            for i in 0..m {
                for (t, yrow) in (0..y.rows()).map(|t| (t, y.row(t))) {
                    a.set(i * y.rows() + t, c, dot(&self.field, &g[i * n..(i + 1) * n], yrow));
                }
            }
        }
        a.rank()
    }

    /// `dim C(X)`, as the null space of the constraints imposed by `X^⊥`.
    pub fn subcode_dim(&self, x: &Subspace) -> Result<usize> {
        self.check_row_space(x)?;
        Ok(self.dim() - self.rank_against(x.orthogonal_complement().basis()))
    }

    /// `ρ_C(X) = K − dim C(X^⊥)`.
    pub fn rho(&self, x: &Subspace) -> Result<usize> {
        self.check_row_space(x)?;
        Ok(self.rank_against(x.basis()))
    }

    fn check_lattice(&self, lattice: &SubspaceLattice) -> Result<()> {
        if lattice.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        if lattice.n() != self.n {
            return Err(Error::ShapeMismatch(format!("lattice of F^{} for a code with n = {}", lattice.n(), self.n)));
        }
        Ok(())
    }

    /// `P(C)`: the table of `ρ_C` over the lattice.
    pub fn to_polymatroid(&self, lattice: &Arc<SubspaceLattice>) -> Result<PolymatroidTable> {
        self.check_lattice(lattice)?;
        Ok(PolymatroidTable::from_fn(lattice.clone(), self.m, |i| self.rank_against(lattice.member(i).basis()) as i64))
    }

    /// `dim C(X)` for every lattice member, through explicit subcodes.
    pub fn subcode_dims(&self, lattice: &SubspaceLattice) -> Result<Vec<usize>> {
        self.check_lattice(lattice)?;
        Ok((0..lattice.len())
            .into_par_iter()
            .map(|i| self.subcode(lattice.member(i)).expect("ambient checked").dim())
            .collect())
    }

    /// Trace dual `C^⊥`.
    pub fn trace_dual(&self) -> DelsarteCode {
        Self::from_matrix(self.m, self.n, &self.canonical.kernel())
    }

    /// `C^T`, an `n × m` code.
    pub fn transpose_code(&self) -> DelsarteCode {
        let rows: Vec<Vec<Elem>> = self.generators().iter().map(|g| vectorize(&g.transpose())).collect();
        Self::from_vectors(&self.field, self.n, self.m, &rows).expect("widths match")
    }
}

/// `𝕄(X)`: all `m × n` matrices whose rows lie in `X`.
pub fn support_space(x: &Subspace, m: usize) -> DelsarteCode {
    let n = x.ambient();
    let mut rows = Vec::with_capacity(m * x.dim());
    for i in 0..m {
        for b in x.basis().row_vecs() {
            let mut v = vec![0; m * n];
            v[i * n..(i + 1) * n].copy_from_slice(&b);
            rows.push(v);
        }
    }
    DelsarteCode::from_vectors(x.field(), m, n, &rows).expect("widths match")
}

/// `d_r(C)` on a given lattice. Computed by a direct scan of `dim C(X)` and
/// again through `P(C)`; the two must agree.
pub fn code_weights_on(code: &DelsarteCode, lattice: &Arc<SubspaceLattice>) -> Result<WeightProfile> {
    if code.dim() == 0 {
        return Err(Error::EmptyCode);
    }
    let dims: Vec<i64> = code.subcode_dims(lattice)?.into_iter().map(|c| c as i64).collect();
    let direct = weights_from_conullity(lattice, &dims, code.dim())?;
    let via_table = generalized_weights(&code.to_polymatroid(lattice)?)?;
    assert_eq!(direct, via_table, "subcode scan and polymatroid conullity disagree on {code:?}");
    Ok(direct)
}

pub fn code_weights(code: &DelsarteCode) -> Result<WeightProfile> {
    code_weights_on(code, &enumerate_subspaces(code.field(), code.n(), DEFAULT_MAX_MEMBERS)?)
}

/// Anticode weights `a_r(C)`.
///
/// For `m > n` they equal `d_r(P(C))`, for `m < n` they are the weights of
/// the `(q,n)`-polymatroid `P(C^T)`, and for `m = n` they are the pointwise
/// minimum of both. Witness indices refer to the lattice the winning value
/// was computed on.
pub fn anticode_weights(code: &DelsarteCode, max_members: u64) -> Result<WeightProfile> {
    if code.dim() == 0 {
        return Err(Error::EmptyCode);
    }
    let (m, n) = (code.m(), code.n());
    let transposed = || -> Result<WeightProfile> {
        let lat = enumerate_subspaces(code.field(), m, max_members)?;
        code_weights_on(&code.transpose_code(), &lat)
    };
    if m < n {
        return transposed();
    }
    let lat = enumerate_subspaces(code.field(), n, max_members)?;
    let d = code_weights_on(code, &lat)?;
    if m > n {
        return Ok(d);
    }
    let t = code_weights_on(&code.transpose_code(), &lat)?;
    let mut out = d.clone();
    for r in 0..out.d.len() {
        if t.d[r] < out.d[r] {
            out.d[r] = t.d[r];
            out.witnesses[r] = t.witnesses[r];
        }
    }
    Ok(out)
}

/// `ρ(X) = min(ρ_C(X), ρ_{C^T}(X))` for a square code.
pub fn demisquare(code: &DelsarteCode, lattice: &Arc<SubspaceLattice>) -> Result<PolymatroidTable> {
    if code.m() != code.n() {
        return Err(Error::NotSquare { m: code.m(), n: code.n() });
    }
    let a = code.to_polymatroid(lattice)?;
    let b = code.transpose_code().to_polymatroid(lattice)?;
    let values = a.values().iter().zip(b.values()).map(|(&x, &y)| x.min(y)).collect();
    PolymatroidTable::new(lattice.clone(), code.m(), values)
}

/// Gabidulin code spanned by `a·x^{q^i}`, `i < k`, evaluated at
/// `1, α, …, α^{n−1}` in `GF(q^m)` and expanded over the polynomial basis.
/// Only prime `q` is supported.
pub fn gabidulin(q: u32, m: usize, n: usize, k: usize) -> Result<DelsarteCode> {
    if !(1 <= k && k <= n && n <= m) {
        return Err(Error::InvalidParameters(format!("Gabidulin code needs 1 <= k <= n <= m, got k={k} n={n} m={m}")));
    }
    let base = FieldSpec::prime(q)?;
    let ext = FieldSpec::new(q, m as u32)?;
    let basis: Vec<Elem> = (0..m)
        .map(|t| {
            let mut digits = vec![0; m];
            digits[t] = 1;
            ext.from_digits(&digits)
        })
        .collect();
    let mut words = Vec::with_capacity(m * k);
    for i in 0..k {
        let frob = (q as u64).pow(i as u32);
        for &a in &basis {
            let mut word = vec![0; m * n];
            for (j, &point) in basis.iter().take(n).enumerate() {
                let value = ext.mul(a, ext.pow(point, frob));
                for (row, digit) in ext.digits(value).into_iter().enumerate() {
                    word[row * n + j] = digit;
                }
            }
            words.push(word);
        }
    }
    let code = DelsarteCode::from_vectors(&base, m, n, &words)?;
    if code.dim() != m * k {
        return Err(Error::DependentGenerators);
    }
    Ok(code)
}

/// Smallest rank of a nonzero codeword, by enumerating all `q^K − 1` of them.
pub fn min_rank_distance(code: &DelsarteCode, max_codewords: u64) -> Result<usize> {
    let k = code.dim();
    if k == 0 {
        return Err(Error::EmptyCode);
    }
    let q = code.field().q() as u128;
    let needed = q.checked_pow(k as u32).unwrap_or(u128::MAX);
    if needed > max_codewords as u128 {
        return Err(Error::CodewordGuard { needed, limit: max_codewords });
    }
    let f = code.field();
    let width = code.m() * code.n();
    let best = (1..needed as u64)
        .into_par_iter()
        .map(|index| {
            let mut word = vec![0; width];
            let mut t = index;
            for r in 0..k {
                let c = (t % q as u64) as Elem;
                t /= q as u64;
                if c == 0 {
                    continue;
                }
                for (w, &g) in word.iter_mut().zip(code.canonical().row(r)) {
                    *w = f.add(*w, f.mul(c, g));
                }
            }
            devectorize(f, code.m(), code.n(), &word).expect("width is mn").rank()
        })
        .min()
        .expect("at least one nonzero codeword");
    Ok(best)
}

/// Whether `C` meets the Singleton-like bound `d = n − K/m + 1`.
pub fn is_mrd(code: &DelsarteCode, max_codewords: u64) -> Result<bool> {
    let (m, n, k) = (code.m(), code.n(), code.dim());
    if m < n || k == 0 || k % m != 0 {
        return Err(Error::InvalidParameters(format!("MRD test needs m >= n and m | K, got m={m} n={n} K={k}")));
    }
    Ok(min_rank_distance(code, max_codewords)? == n - k / m + 1)
}

/// A uniformly random `k`-dimensional code, by rejection sampling of
/// generator tuples.
pub fn random_code<R: Rng + ?Sized>(field: &FieldSpec, m: usize, n: usize, k: usize, rng: &mut R) -> Result<DelsarteCode> {
    if k > m * n {
        return Err(Error::InvalidParameters(format!("dimension {k} exceeds mn = {}", m * n)));
    }
    loop {
        let rows: Vec<Vec<Elem>> = (0..k).map(|_| (0..m * n).map(|_| rng.gen_range(0..field.q())).collect()).collect();
        let code = DelsarteCode::from_vectors(field, m, n, &rows)?;
        if code.dim() == k {
            return Ok(code);
        }
    }
}

/// A square code with `a_r(C) < d_r(C)` for some `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnticodeGap {
    pub code: DelsarteCode,
    pub r: usize,
    pub a: usize,
    pub d: usize,
}

/// Scans every nonzero code in `F_q^{n×n}` (all subspaces of `F_q^{n²}`) in
/// lattice order for one whose anticode weights drop below its generalized
/// weights.
pub fn find_anticode_gap(field: &FieldSpec, n: usize, max_members: u64) -> Result<Option<AnticodeGap>> {
    let codes = enumerate_subspaces(field, n * n, max_members)?;
    let lattice = enumerate_subspaces(field, n, max_members)?;
    for x in codes.members().iter().skip(1) {
        let code = DelsarteCode::from_matrix(n, n, x.basis());
        let d = code_weights_on(&code, &lattice)?;
        let t = code_weights_on(&code.transpose_code(), &lattice)?;
        if let Some(r) = (0..d.k).find(|&r| t.d[r] < d.d[r]) {
            return Ok(Some(AnticodeGap { code, r: r + 1, a: t.d[r], d: d.d[r] }));
        }
    }
    Ok(None)
}
