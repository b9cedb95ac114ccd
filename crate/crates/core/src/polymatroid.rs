//! Rank functions on the subspace lattice: (q,m)-polymatroids and
//! (q,m)-demi-polymatroids stored as complete tables.
//!
//! Values are kept as `i64` so that arbitrary (possibly invalid) tables can
//! be loaded and checked; the bound axiom R1 is what forces them into
//! `[0, m·dim X]`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{Subspace, SubspaceLattice};

/// Default cap on lattice size for the quadratic axiom scans.
pub const DEFAULT_MAX_PAIR_MEMBERS: usize = 3000;

#[derive(Clone)]
pub struct PolymatroidTable {
    lattice: Arc<SubspaceLattice>,
    m: usize,
    values: Vec<i64>,
}

impl std::fmt::Debug for PolymatroidTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PolymatroidTable(m={}, {:?})", self.m, self.values)
    }
}

impl PartialEq for PolymatroidTable {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
            && self.values == other.values
            && self.lattice.field() == other.lattice.field()
            && self.lattice.n() == other.lattice.n()
    }
}

impl Eq for PolymatroidTable {}

/// A failed axiom instance, in lattice indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// R1: `0 <= ρ(X) <= m dim X` fails at `x`.
    Bound { x: usize, value: i64, bound: i64 },
    /// R2: `x ⊆ y` but `ρ(x) > ρ(y)`.
    Monotone { x: usize, y: usize },
    /// R3: `ρ(x + y) + ρ(x ∩ y) > ρ(x) + ρ(y)`.
    Submodular { x: usize, y: usize },
    /// R4: the dual function breaks R1 or R2.
    Dual(Box<Violation>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Polymatroid,
    DemiPolymatroid,
    Neither,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Polymatroid => "POLYMATROID",
            Verdict::DemiPolymatroid => "DEMI_POLYMATROID",
            Verdict::Neither => "NEITHER",
        })
    }
}

/// Outcome of the axiom scans; `None` means the axiom holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub r1: Option<Violation>,
    pub r2: Option<Violation>,
    pub r3: Option<Violation>,
    pub r4: Option<Violation>,
    pub verdict: Verdict,
}

impl PolymatroidTable {
    pub fn new(lattice: Arc<SubspaceLattice>, m: usize, values: Vec<i64>) -> Result<Self> {
        if values.len() != lattice.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a lattice of {} subspaces",
                values.len(),
                lattice.len()
            )));
        }
        if m == 0 {
            return Err(Error::InvalidParameters("m must be at least 1".into()));
        }
        Ok(PolymatroidTable { lattice, m, values })
    }

    /// Evaluates `f` on every lattice index.
    pub fn from_fn<F>(lattice: Arc<SubspaceLattice>, m: usize, f: F) -> Self
    where
        F: Fn(usize) -> i64 + Sync,
    {
        let values = (0..lattice.len()).into_par_iter().map(&f).collect();
        PolymatroidTable { lattice, m, values }
    }

    /// `U(r, n)`: `ρ(X) = m·min(dim X, r)`.
    pub fn uniform(lattice: Arc<SubspaceLattice>, r: usize, m: usize) -> Result<Self> {
        if r > lattice.n() {
            return Err(Error::InvalidParameters(format!("U({r},{}) needs r <= n", lattice.n())));
        }
        if m == 0 {
            return Err(Error::InvalidParameters("m must be at least 1".into()));
        }
        let lat = lattice.clone();
        Ok(Self::from_fn(lattice, m, move |i| (m * lat.dim(i).min(r)) as i64))
    }

    pub fn lattice(&self) -> &Arc<SubspaceLattice> {
        &self.lattice
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.lattice.n()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, i: usize) -> i64 {
        self.values[i]
    }

    pub fn rho(&self, x: &Subspace) -> Result<i64> {
        Ok(self.values[self.lattice.index_of(x)?])
    }

    /// `ρ(E)`.
    pub fn rank(&self) -> i64 {
        self.values[self.lattice.full_index()]
    }

    /// `ν(X) = m·dim X − ρ(X)` at lattice index `i`.
    pub fn nullity_at(&self, i: usize) -> i64 {
        (self.m * self.lattice.dim(i)) as i64 - self.values[i]
    }

    /// `ν*(X) = ρ(E) − ρ(X^⊥)` at lattice index `i`.
    pub fn conullity_at(&self, i: usize) -> i64 {
        self.rank() - self.values[self.lattice.complement(i)]
    }

    pub fn nullity(&self, x: &Subspace) -> Result<i64> {
        Ok(self.nullity_at(self.lattice.index_of(x)?))
    }

    pub fn conullity(&self, x: &Subspace) -> Result<i64> {
        Ok(self.conullity_at(self.lattice.index_of(x)?))
    }

    pub fn nullity_table(&self) -> Self {
        let values = (0..self.values.len()).map(|i| self.nullity_at(i)).collect();
        PolymatroidTable { lattice: self.lattice.clone(), m: self.m, values }
    }

    pub fn conullity_table(&self) -> Self {
        let values = (0..self.values.len()).map(|i| self.conullity_at(i)).collect();
        PolymatroidTable { lattice: self.lattice.clone(), m: self.m, values }
    }

    /// `ρ*(X) = ρ(X^⊥) + m·dim X − ρ(E)`.
    pub fn dual(&self) -> Self {
        let rank = self.rank();
        let values = (0..self.values.len())
            .map(|i| self.values[self.lattice.complement(i)] + (self.m * self.lattice.dim(i)) as i64 - rank)
            .collect();
        PolymatroidTable { lattice: self.lattice.clone(), m: self.m, values }
    }

    /// First index (in lattice order) where the two tables differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        self.values.iter().zip(&other.values).position(|(a, b)| a != b)
    }

    fn check_bounds(&self) -> Option<Violation> {
        (0..self.values.len()).find_map(|x| {
            let value = self.values[x];
            let bound = (self.m * self.lattice.dim(x)) as i64;
            (value < 0 || value > bound).then_some(Violation::Bound { x, value, bound })
        })
    }

    fn check_monotone(&self) -> Option<Violation> {
        let lat = &self.lattice;
        (0..lat.len()).into_par_iter().find_map_first(|x| {
            (0..lat.len())
                .find(|&y| self.values[x] > self.values[y] && lat.leq(x, y))
                .map(|y| Violation::Monotone { x, y })
        })
    }

    fn check_submodular(&self) -> Option<Violation> {
        let lat = &self.lattice;
        let v = &self.values;
        (0..lat.len()).into_par_iter().find_map_first(|x| {
            ((x + 1)..lat.len())
                .find(|&y| v[lat.join(x, y)] + v[lat.meet(x, y)] > v[x] + v[y])
                .map(|y| Violation::Submodular { x, y })
        })
    }

    /// Scans R1 over all subspaces, R2 over all nested pairs, R3 over all
    /// pairs and R4 by re-running R1/R2 on the dual. Counterexamples are the
    /// first in lattice order.
    pub fn check_axioms(&self, max_pair_members: usize) -> Result<AxiomReport> {
        if self.lattice.len() > max_pair_members {
            return Err(Error::PairScanTooLarge { members: self.lattice.len(), limit: max_pair_members });
        }
        let r1 = self.check_bounds();
        let r2 = self.check_monotone();
        let r3 = self.check_submodular();
        let dual = self.dual();
        let r4 = dual
            .check_bounds()
            .or_else(|| dual.check_monotone())
            .map(|v| Violation::Dual(Box::new(v)));
        let verdict = match (r1.is_none() && r2.is_none(), r3.is_none(), r4.is_none()) {
            (true, true, _) => Verdict::Polymatroid,
            (true, false, true) => Verdict::DemiPolymatroid,
            _ => Verdict::Neither,
        };
        Ok(AxiomReport { r1, r2, r3, r4, verdict })
    }
}

/// `ρ = Σ ρ_{C_i}` for block codes `C_1..C_m ⊆ F_q^n`, with
/// `ρ_{C_i}(X) = dim C_i − dim(C_i ∩ X^⊥)`.
pub fn sum_polymatroid(lattice: Arc<SubspaceLattice>, blocks: &[Subspace]) -> Result<PolymatroidTable> {
    if blocks.is_empty() {
        return Err(Error::InvalidParameters("at least one block code is needed".into()));
    }
    let idx: Vec<usize> = blocks.iter().map(|c| lattice.index_of(c)).collect::<Result<_>>()?;
    let lat = lattice.clone();
    Ok(PolymatroidTable::from_fn(lattice, blocks.len(), move |x| {
        let xp = lat.complement(x);
        idx.iter().map(|&c| (lat.dim(c) - lat.dim(lat.meet(c, xp))) as i64).sum()
    }))
}

fn check_weights(v: &[Subspace], weights: &[usize], m: usize) -> Result<()> {
    if v.len() != weights.len() || v.is_empty() {
        return Err(Error::InvalidParameters(format!(
            "{} subspaces but {} weights",
            v.len(),
            weights.len()
        )));
    }
    if weights.contains(&0) {
        return Err(Error::InvalidParameters("weights must be positive".into()));
    }
    let got: usize = weights.iter().sum();
    if got != m {
        return Err(Error::WeightSumMismatch { expected: m, got });
    }
    Ok(())
}

/// `ρ(J) = Σ m_i dim(V_i ∩ J)`, a demi-polymatroid that is in general not
/// submodular.
pub fn intersection_demipolymatroid(
    lattice: Arc<SubspaceLattice>,
    v: &[Subspace],
    weights: &[usize],
    m: usize,
) -> Result<PolymatroidTable> {
    check_weights(v, weights, m)?;
    let idx: Vec<usize> = v.iter().map(|s| lattice.index_of(s)).collect::<Result<_>>()?;
    let w = weights.to_vec();
    let lat = lattice.clone();
    Ok(PolymatroidTable::from_fn(lattice, m, move |j| {
        idx.iter().zip(&w).map(|(&vi, &mi)| (mi * lat.dim(lat.meet(vi, j))) as i64).sum()
    }))
}

/// Closed form of the dual of [`intersection_demipolymatroid`]:
/// `ρ*(J) = Σ m_i dim(V_i^⊥ ∩ J)`.
pub fn intersection_demipolymatroid_dual(
    lattice: Arc<SubspaceLattice>,
    v: &[Subspace],
    weights: &[usize],
    m: usize,
) -> Result<PolymatroidTable> {
    let perp: Vec<Subspace> = v.iter().map(Subspace::orthogonal_complement).collect();
    intersection_demipolymatroid(lattice, &perp, weights, m)
}
