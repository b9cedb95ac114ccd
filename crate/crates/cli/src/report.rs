//! Weight reports and their JSON / text renderings.

use std::fmt::Write as _;
use std::sync::Arc;

use qpoly::delsarte::{anticode_weights, code_weights_on};
use qpoly::flags::{flag_polymatroid, flag_weights};
use qpoly::polymatroid::DEFAULT_MAX_PAIR_MEMBERS;
use qpoly::weights::WeiReport;
use qpoly::{
    generalized_weights, h_profiles, wei_duality_report, AxiomReport, Error, PolymatroidTable, SubspaceLattice,
    Violation, WeightProfile,
};
use serde::Serialize;

use crate::format::{matrix_rows, Input, Rows};
use crate::Failure;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct InputEcho {
    pub kind: &'static str,
    pub q: u32,
    pub p: u32,
    pub e: u32,
    pub m: usize,
    pub n: usize,
    pub length: usize,
    pub labels: Vec<Option<String>>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ViolationEcho {
    Bound { x: Rows, value: i64, bound: i64 },
    Monotone { x: Rows, y: Rows, rho_x: i64, rho_y: i64 },
    Submodular { x: Rows, y: Rows, rho_x: i64, rho_y: i64, rho_sum: i64, rho_meet: i64 },
    Dual { violation: Box<ViolationEcho> },
}

impl ViolationEcho {
    pub fn new(table: &PolymatroidTable, v: &Violation) -> Self {
        let lat = table.lattice();
        let basis = |i: usize| matrix_rows(lat.member(i).basis());
        match *v {
            Violation::Bound { x, value, bound } => ViolationEcho::Bound { x: basis(x), value, bound },
            Violation::Monotone { x, y } => {
                ViolationEcho::Monotone { x: basis(x), y: basis(y), rho_x: table.value(x), rho_y: table.value(y) }
            }
            Violation::Submodular { x, y } => ViolationEcho::Submodular {
                x: basis(x),
                y: basis(y),
                rho_x: table.value(x),
                rho_y: table.value(y),
                rho_sum: table.value(lat.join(x, y)),
                rho_meet: table.value(lat.meet(x, y)),
            },
            Violation::Dual(ref inner) => {
                ViolationEcho::Dual { violation: Box::new(ViolationEcho::new(&table.dual(), inner)) }
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomEcho {
    /// `POLYMATROID`, `DEMI_POLYMATROID`, `NEITHER`, or `SKIPPED` when the
    /// lattice is too large for the pair scans.
    pub verdict: String,
    pub r1: Option<ViolationEcho>,
    pub r2: Option<ViolationEcho>,
    pub r3: Option<ViolationEcho>,
    pub r4: Option<ViolationEcho>,
}

impl AxiomEcho {
    pub fn new(table: &PolymatroidTable, report: &AxiomReport) -> Self {
        let echo = |v: &Option<Violation>| v.as_ref().map(|v| ViolationEcho::new(table, v));
        AxiomEcho {
            verdict: report.verdict.to_string(),
            r1: echo(&report.r1),
            r2: echo(&report.r2),
            r3: echo(&report.r3),
            r4: echo(&report.r4),
        }
    }

    pub fn scan(table: &PolymatroidTable) -> Result<Self, Failure> {
        match table.check_axioms(DEFAULT_MAX_PAIR_MEMBERS) {
            Ok(report) => Ok(Self::new(table, &report)),
            Err(Error::PairScanTooLarge { .. }) => {
                Ok(AxiomEcho { verdict: "SKIPPED".into(), r1: None, r2: None, r3: None, r4: None })
            }
            Err(e) => Err(e.into()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidueEcho {
    pub s: usize,
    pub shifted: usize,
    pub dual_weights: Vec<usize>,
    pub reflected_weights: Vec<usize>,
    pub partition_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeiEcho {
    pub residues: Vec<ResidueEcho>,
    pub partition_ok: bool,
    pub partialwei_ok: bool,
    pub monotone_gaps_ok: bool,
}

impl WeiEcho {
    pub fn new(w: &WeiReport) -> Self {
        WeiEcho {
            residues: w
                .residues
                .iter()
                .map(|r| ResidueEcho {
                    s: r.s,
                    shifted: r.shifted,
                    dual_weights: r.dual_weights.iter().copied().collect(),
                    reflected_weights: r.reflected_weights.iter().copied().collect(),
                    partition_ok: r.partition_ok,
                })
                .collect(),
            partition_ok: w.partition_ok(),
            partialwei_ok: w.partialwei_ok(),
            monotone_gaps_ok: w.monotone_gaps_ok(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub input: InputEcho,
    pub k: i64,
    pub weights: Vec<usize>,
    pub dual_weights: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_weights: Option<Vec<usize>>,
    pub h: Vec<i64>,
    pub hstar: Vec<i64>,
    pub axioms: AxiomEcho,
    pub wei: WeiEcho,
    /// Canonical basis of the first lattice member attaining each `d_r`.
    pub witnesses: Vec<Rows>,
}

pub fn echo_input(input: &Input) -> InputEcho {
    let (kind, field, m, n, length, labels) = match input {
        Input::Code { code, label } => ("code", code.field(), code.m(), code.n(), 1, vec![label.clone()]),
        Input::Flag { flag, labels } => {
            ("flag", flag.codes()[0].field(), flag.m(), flag.n(), flag.len(), labels.clone())
        }
        Input::Table { table, label } => {
            ("table", table.lattice().field(), table.m(), table.n(), 1, vec![label.clone()])
        }
    };
    InputEcho { kind, q: field.q(), p: field.p(), e: field.e(), m, n, length, labels }
}

/// The table `P` of the input and its weights.
pub fn table_and_weights(
    input: &Input,
    lattice: &Arc<SubspaceLattice>,
) -> Result<(PolymatroidTable, WeightProfile), Failure> {
    Ok(match input {
        Input::Code { code, .. } => (code.to_polymatroid(lattice)?, code_weights_on(code, lattice)?),
        Input::Flag { flag, .. } => (flag_polymatroid(flag, lattice)?, flag_weights(flag, lattice)?),
        Input::Table { table, .. } => (table.clone(), generalized_weights(table)?),
    })
}

pub fn build_report(input: &Input, anticode: bool, max_lattice: u64) -> Result<ReportDocument, Failure> {
    let lattice = input.lattice(max_lattice)?;
    let (table, weights) = table_and_weights(input, &lattice)?;
    let a_weights = match (anticode, input) {
        (false, _) => None,
        (true, Input::Code { code, .. }) => Some(anticode_weights(code, max_lattice)?.d),
        (true, _) => return Err(Failure::input("--anticode applies to single codes only")),
    };
    let wei = wei_duality_report(&table)?;
    let hp = h_profiles(&table);
    Ok(ReportDocument {
        schema_version: SCHEMA_VERSION,
        input: echo_input(input),
        k: table.rank(),
        witnesses: weights.witnesses.iter().map(|&i| matrix_rows(lattice.member(i).basis())).collect(),
        weights: weights.d,
        dual_weights: wei.dual_weights.d.clone(),
        a_weights,
        h: hp.h,
        hstar: hp.hstar,
        axioms: AxiomEcho::scan(&table)?,
        wei: WeiEcho::new(&wei),
    })
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

pub fn render_text(r: &ReportDocument) -> String {
    let mut out = String::new();
    let i = &r.input;
    let _ = writeln!(out, "input: {} over GF({}), {}x{}, length {}", i.kind, i.q, i.m, i.n, i.length);
    let _ = writeln!(out, "K: {}", r.k);
    let _ = writeln!(out, "weights: {}", join(&r.weights));
    let _ = writeln!(out, "dual_weights: {}", join(&r.dual_weights));
    if let Some(a) = &r.a_weights {
        let _ = writeln!(out, "a_weights: {}", join(a));
    }
    let _ = writeln!(out, "h: {}", join(&r.h));
    let _ = writeln!(out, "hstar: {}", join(&r.hstar));
    let _ = writeln!(out, "axioms: {}", r.axioms.verdict);
    for res in &r.wei.residues {
        let _ = writeln!(
            out,
            "residue {}: W_{}(P*) = {:?}, Wbar_{}(P) = {:?}, partition {}",
            res.s,
            res.s,
            res.dual_weights,
            res.shifted,
            res.reflected_weights,
            if res.partition_ok { "ok" } else { "FAILED" }
        );
    }
    let _ = writeln!(out, "partialwei: {}", if r.wei.partialwei_ok { "ok" } else { "FAILED" });
    let _ = writeln!(out, "gaps: {}", if r.wei.monotone_gaps_ok { "ok" } else { "FAILED" });
    for (k, w) in r.witnesses.iter().enumerate() {
        let _ = writeln!(out, "witness d_{}: {:?}", k + 1, w);
    }
    out
}
