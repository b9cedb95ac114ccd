//! Generalized weights, h-profiles and the m-fold Wei duality checks.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lattice::SubspaceLattice;
use crate::polymatroid::PolymatroidTable;

/// Generalized weights `d_1..d_K`, each with the first lattice member (in
/// lattice order) that attains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightProfile {
    pub k: usize,
    pub d: Vec<usize>,
    pub witnesses: Vec<usize>,
}

impl WeightProfile {
    pub fn is_nondecreasing(&self) -> bool {
        self.d.windows(2).all(|w| w[0] <= w[1])
    }

    /// First `r` (1-based) with `d_r >= d_{r+m}`, if any.
    pub fn gap_violation(&self, m: usize) -> Option<usize> {
        (0..self.d.len().saturating_sub(m)).find(|&i| self.d[i] >= self.d[i + m]).map(|i| i + 1)
    }

    /// `d_r` with 1-based `r`.
    pub fn get(&self, r: usize) -> usize {
        self.d[r - 1]
    }
}

/// Weights `d_1..d_k` from conullity values listed in lattice order.
pub(crate) fn weights_from_conullity(lattice: &SubspaceLattice, conullity: &[i64], k: usize) -> Result<WeightProfile> {
    let mut d = Vec::with_capacity(k);
    let mut witnesses = Vec::with_capacity(k);
    // members are sorted by dimension, so the first member reaching a
    // conullity value attains the minimum dimension for it
    for (i, &c) in conullity.iter().enumerate() {
        if d.len() == k {
            break;
        }
        while (d.len() as i64) < c.min(k as i64) {
            d.push(lattice.dim(i));
            witnesses.push(i);
        }
    }
    if d.len() < k {
        return Err(Error::WeightsUndefined { r: d.len() + 1 });
    }
    Ok(WeightProfile { k, d, witnesses })
}

/// Weight scan that tolerates rank 0 (empty profile).
pub(crate) fn weights_of(table: &PolymatroidTable) -> Result<WeightProfile> {
    let rank = table.rank();
    if rank < 0 {
        return Err(Error::InvalidParameters(format!("negative rank {rank}")));
    }
    let lat = table.lattice();
    let conullity: Vec<i64> = (0..lat.len()).map(|i| table.conullity_at(i)).collect();
    weights_from_conullity(lat, &conullity, rank as usize)
}

/// `d_r = min{ dim X : ν*(X) >= r }` for `r = 1..K`.
pub fn generalized_weights(table: &PolymatroidTable) -> Result<WeightProfile> {
    if table.rank() == 0 {
        return Err(Error::EmptyStructure);
    }
    weights_of(table)
}

/// `h(x)` and `h*(x)`: the largest nullity and conullity over
/// `x`-dimensional subspaces, `x = 0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HProfile {
    pub h: Vec<i64>,
    pub hstar: Vec<i64>,
}

impl HProfile {
    /// First `x` where `h*(x) = h(n−x) − m(n−x) + K` fails.
    pub fn identity_violation(&self, m: usize, k: i64) -> Option<usize> {
        let n = self.h.len() - 1;
        (0..=n).find(|&x| self.hstar[x] != self.h[n - x] - (m * (n - x)) as i64 + k)
    }

    /// First `x >= 1` where `0 <= h*(x) − h*(x−1) <= m` fails.
    pub fn increment_violation(&self, m: usize) -> Option<usize> {
        (1..self.hstar.len()).find(|&x| {
            let step = self.hstar[x] - self.hstar[x - 1];
            step < 0 || step > m as i64
        })
    }

    /// Dimensions that occur as generalized weights: `x` with `h*(x−1) < h*(x)`.
    pub fn weight_dimensions(&self) -> Vec<usize> {
        (1..self.hstar.len()).filter(|&x| self.hstar[x - 1] < self.hstar[x]).collect()
    }
}

pub fn h_profiles(table: &PolymatroidTable) -> HProfile {
    let lat = table.lattice();
    let n = lat.n();
    let max_over = |x: usize, f: &dyn Fn(usize) -> i64| lat.of_dim(x).map(f).max().expect("every dimension is populated");
    HProfile {
        h: (0..=n).map(|x| max_over(x, &|i| table.nullity_at(i))).collect(),
        hstar: (0..=n).map(|x| max_over(x, &|i| table.conullity_at(i))).collect(),
    }
}

/// Per-residue comparison `W_s(P*)` against `W̄_{s +m K}(P)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueReport {
    pub s: usize,
    /// `s + K` reduced into `0..m`.
    pub shifted: usize,
    pub dual_weights: BTreeSet<usize>,
    pub reflected_weights: BTreeSet<usize>,
    pub partition_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeiReport {
    pub n: usize,
    pub m: usize,
    pub rank: usize,
    pub dual_rank: usize,
    pub weights: WeightProfile,
    pub dual_weights: WeightProfile,
    pub residues: Vec<ResidueReport>,
    /// First `(s, r)` with `r ≡ s + K (mod m)` and `d_s(P*) = n + 1 − d_r(P)`.
    pub partialwei_violation: Option<(usize, usize)>,
    pub gap_violation: Option<usize>,
    pub dual_gap_violation: Option<usize>,
}

impl WeiReport {
    pub fn partition_ok(&self) -> bool {
        self.residues.iter().all(|r| r.partition_ok)
    }

    pub fn partialwei_ok(&self) -> bool {
        self.partialwei_violation.is_none()
    }

    pub fn monotone_gaps_ok(&self) -> bool {
        self.gap_violation.is_none() && self.dual_gap_violation.is_none()
    }

    pub fn all_ok(&self) -> bool {
        self.partition_ok() && self.partialwei_ok() && self.monotone_gaps_ok()
    }
}

fn residue_set(w: &WeightProfile, m: usize, s: usize, map: impl Fn(usize) -> usize) -> BTreeSet<usize> {
    w.d.iter().enumerate().filter(|(i, _)| (i + 1) % m == s).map(|(_, &d)| map(d)).collect()
}

/// Weights of `P` and `P*` and every m-fold Wei duality check between them.
pub fn wei_duality_report(table: &PolymatroidTable) -> Result<WeiReport> {
    let (n, m) = (table.n(), table.m());
    let dual = table.dual();
    let weights = weights_of(table)?;
    let dual_weights = weights_of(&dual)?;
    let (k, kd) = (weights.k, dual_weights.k);
    if k == 0 && kd == 0 {
        return Err(Error::EmptyStructure);
    }

    let residues = (0..m)
        .map(|s| {
            let shifted = (s + k) % m;
            let dual_set = residue_set(&dual_weights, m, s, |d| d);
            let reflected = residue_set(&weights, m, shifted, |d| n + 1 - d);
            let union: BTreeSet<usize> = dual_set.union(&reflected).copied().collect();
            let partition_ok = dual_set.is_disjoint(&reflected) && union == (1..=n).collect();
            ResidueReport { s, shifted, dual_weights: dual_set, reflected_weights: reflected, partition_ok }
        })
        .collect();

    let partialwei_violation = (1..=kd).find_map(|s| {
        (1..=k)
            .filter(|&r| (r as i64 - k as i64 - s as i64).rem_euclid(m as i64) == 0)
            .find(|&r| dual_weights.get(s) == n + 1 - weights.get(r))
            .map(|r| (s, r))
    });

    Ok(WeiReport {
        n,
        m,
        rank: k,
        dual_rank: kd,
        gap_violation: weights.gap_violation(m),
        dual_gap_violation: dual_weights.gap_violation(m),
        weights,
        dual_weights,
        residues,
        partialwei_violation,
    })
}
