//! Flags `C_1 ⊇ C_2 ⊇ … ⊇ C_s` of Delsarte codes and their alternating-sum
//! demi-polymatroids.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use crate::delsarte::DelsarteCode;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::lattice::{Subspace, SubspaceLattice};
use crate::matrix::Matrix;
use crate::polymatroid::PolymatroidTable;
use crate::weights::{generalized_weights, weights_from_conullity, WeightProfile};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    codes: Vec<DelsarteCode>,
}

fn sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl Flag {
    /// Validates nesting; repeated codes are allowed.
    pub fn new(codes: Vec<DelsarteCode>) -> Result<Self> {
        let Some(first) = codes.first() else {
            return Err(Error::InvalidParameters("a flag needs at least one code".into()));
        };
        for (i, c) in codes.iter().enumerate().skip(1) {
            if c.field() != first.field() {
                return Err(Error::FieldMismatch);
            }
            if !c.is_subcode_of(&codes[i - 1])? {
                return Err(Error::NestingViolation { index: i + 1 });
            }
        }
        Ok(Flag { codes })
    }

    pub fn codes(&self) -> &[DelsarteCode] {
        &self.codes
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn m(&self) -> usize {
        self.codes[0].m()
    }

    pub fn n(&self) -> usize {
        self.codes[0].n()
    }

    /// `K = Σ (−1)^{i+1} dim C_i`.
    pub fn rank(&self) -> i64 {
        self.codes.iter().enumerate().map(|(i, c)| sign(i) * c.dim() as i64).sum()
    }

    /// `𝖥^⊥ = (C_s^⊥, …, C_1^⊥)`.
    pub fn dual(&self) -> Flag {
        Flag { codes: self.codes.iter().rev().map(DelsarteCode::trace_dual).collect() }
    }

    /// The odd-length flag with a zero code appended when `s` is even.
    /// Unlike [`normalize_flag`] this does not demand strictness.
    pub fn padded(&self) -> Flag {
        let mut codes = self.codes.clone();
        if codes.len().is_multiple_of(2) {
            let c = &codes[0];
            codes.push(DelsarteCode::zero(c.field(), c.m(), c.n()));
        }
        Flag { codes }
    }
}

/// A strictly decreasing flag of odd length; only the last code may be zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedFlag(Flag);

impl NormalizedFlag {
    pub fn flag(&self) -> &Flag {
        &self.0
    }

    pub fn into_flag(self) -> Flag {
        self.0
    }
}

pub fn normalize_flag(flag: &Flag) -> Result<NormalizedFlag> {
    let codes = flag.codes();
    if let Some(i) = (1..codes.len()).find(|&i| codes[i].dim() == codes[i - 1].dim()) {
        return Err(Error::NotStrict { index: i + 1 });
    }
    if codes.len().is_multiple_of(2) && codes[codes.len() - 1].dim() == 0 {
        return Err(Error::EvenFlagEndsInZero);
    }
    Ok(NormalizedFlag(flag.padded()))
}

/// A random flag with strictly decreasing dimensions `dims`: the codes are
/// spans of prefixes of one uniformly random independent tuple.
pub fn random_flag<R: Rng + ?Sized>(field: &FieldSpec, m: usize, n: usize, dims: &[usize], rng: &mut R) -> Result<Flag> {
    if dims.is_empty() || dims[0] > m * n {
        return Err(Error::InvalidParameters(format!("flag dimensions {dims:?} do not fit mn = {}", m * n)));
    }
    if let Some(i) = (1..dims.len()).find(|&i| dims[i] >= dims[i - 1]) {
        return Err(Error::NotStrict { index: i + 1 });
    }
    let mut tuple: Vec<Vec<Elem>> = Vec::with_capacity(dims[0]);
    while tuple.len() < dims[0] {
        let v: Vec<Elem> = (0..m * n).map(|_| rng.gen_range(0..field.q())).collect();
        tuple.push(v);
        if Matrix::from_rows(field, m * n, &tuple)?.rank() < tuple.len() {
            tuple.pop();
        }
    }
    let codes = dims.iter().map(|&d| DelsarteCode::from_vectors(field, m, n, &tuple[..d])).collect::<Result<_>>()?;
    Flag::new(codes)
}

/// `ρ_𝖥(X) = Σ (−1)^{i+1} ρ_{C_i}(X)`.
pub fn flag_polymatroid(flag: &Flag, lattice: &Arc<SubspaceLattice>) -> Result<PolymatroidTable> {
    let tables = flag.codes().iter().map(|c| c.to_polymatroid(lattice)).collect::<Result<Vec<_>>>()?;
    let values = (0..lattice.len())
        .map(|x| tables.iter().enumerate().map(|(i, t)| sign(i) * t.value(x)).sum())
        .collect();
    PolymatroidTable::new(lattice.clone(), flag.m(), values)
}

/// `ν*_𝖥(X) = Σ (−1)^{i+1} dim C_i(X)`, from explicit subcodes.
pub fn flag_conullity(flag: &Flag, x: &Subspace) -> Result<i64> {
    let mut total = 0;
    for (i, c) in flag.codes().iter().enumerate() {
        total += sign(i) * c.subcode(x)?.dim() as i64;
    }
    assert!(total >= 0, "negative flag conullity {total} for {x:?}");
    Ok(total)
}

/// `ν*_𝖥` over the whole lattice.
pub fn flag_conullity_table(flag: &Flag, lattice: &SubspaceLattice) -> Result<Vec<i64>> {
    lattice.members().par_iter().map(|x| flag_conullity(flag, x)).collect()
}

/// `d_r(𝖥) = min{ dim X : ν*_𝖥(X) >= r }`, scanned from subcode dimensions.
pub fn flag_weights(flag: &Flag, lattice: &Arc<SubspaceLattice>) -> Result<WeightProfile> {
    let k = flag.rank();
    if k <= 0 {
        return Err(Error::EmptyStructure);
    }
    weights_from_conullity(lattice, &flag_conullity_table(flag, lattice)?, k as usize)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagDualityReport {
    pub s: usize,
    /// First lattice index where `ρ_{𝖥^⊥}` differs from `ρ_𝖥*` (odd `s`) or
    /// from `ν*_𝖥` (even `s`).
    pub mismatch: Option<usize>,
    /// First lattice index where `P(𝖦)* ≠ P(𝖦^⊥)` for the padded flag `𝖦`.
    pub padded_mismatch: Option<usize>,
}

impl FlagDualityReport {
    pub fn holds(&self) -> bool {
        self.mismatch.is_none() && self.padded_mismatch.is_none()
    }
}

pub fn verify_flag_duality(flag: &Flag, lattice: &Arc<SubspaceLattice>) -> Result<FlagDualityReport> {
    let table = flag_polymatroid(flag, lattice)?;
    let dual_table = flag_polymatroid(&flag.dual(), lattice)?;
    let expected = if flag.len() % 2 == 1 { table.dual() } else { table.conullity_table() };
    let padded = flag.padded();
    let padded_dual = flag_polymatroid(&padded.dual(), lattice)?;
    Ok(FlagDualityReport {
        s: flag.len(),
        mismatch: dual_table.first_difference(&expected),
        padded_mismatch: padded_dual.first_difference(&flag_polymatroid(&padded, lattice)?.dual()),
    })
}

/// Relative weights of `C_2 ⊂ C_1` and their duals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeWeights {
    pub d: WeightProfile,
    pub d_perp: WeightProfile,
}

/// `d_r` of the flag `(C_1, C_2)` and `d_r^⊥` from
/// `dim 𝕄(X) − dim C_2^⊥(X) + dim C_1^⊥(X)`. Both are also checked against
/// the weights of `P(𝖥)` and `P(𝖥)*`.
pub fn relative_weights(c1: &DelsarteCode, c2: &DelsarteCode, lattice: &Arc<SubspaceLattice>) -> Result<RelativeWeights> {
    let flag = Flag::new(vec![c1.clone(), c2.clone()])?;
    if c1.dim() == c2.dim() {
        return Err(Error::NotStrict { index: 2 });
    }
    let full = DelsarteCode::full(c1.field(), c1.m(), c1.n());
    let dual_side = Flag::new(vec![full, c2.trace_dual(), c1.trace_dual()])?;
    let d = flag_weights(&flag, lattice)?;
    let d_perp = flag_weights(&dual_side, lattice)?;
    let table = flag_polymatroid(&flag, lattice)?;
    assert_eq!(d, generalized_weights(&table)?, "flag conullity scan disagrees with the table");
    assert_eq!(d_perp, generalized_weights(&table.dual())?, "dual relative weights disagree with P(F)*");
    Ok(RelativeWeights { d, d_perp })
}
