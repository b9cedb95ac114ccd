//! Theorem checks on a single input or on a seeded random population.

use std::collections::HashMap;
use std::sync::Arc;

use qpoly::delsarte::random_code;
use qpoly::flags::{flag_polymatroid, random_flag, verify_flag_duality};
use qpoly::polymatroid::DEFAULT_MAX_PAIR_MEMBERS;
use qpoly::{
    enumerate_subspaces, h_profiles, wei_duality_report, FieldSpec, Flag, PolymatroidTable,
    SubspaceLattice, Verdict,
};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::format::{CodeRecord, Input, Record, TableRecord};
use crate::report::{echo_input, AxiomEcho, InputEcho, WeiEcho, SCHEMA_VERSION};
use crate::Failure;

#[derive(Clone, Copy, Debug)]
pub struct Checks {
    pub axioms: bool,
    pub wei: bool,
    pub flag_duality: bool,
}

impl Checks {
    /// No explicit selection means every check.
    pub fn or_all(self) -> Self {
        if self.axioms || self.wei || self.flag_duality {
            self
        } else {
            Checks { axioms: true, wei: true, flag_duality: true }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub subject: String,
    pub property: &'static str,
    pub holds: bool,
    pub detail: Value,
    /// The offending input, as file records, when the check fails.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<Record>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    pub passed: bool,
    pub checks: Vec<Outcome>,
    pub skipped: Vec<String>,
}

/// What the rank table must satisfy: codes give polymatroids, flags and
/// loaded tables at least demi-polymatroids.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Expect {
    Polymatroid,
    Demi,
}

fn axioms_outcome(subject: &str, table: &PolymatroidTable, expect: Expect) -> Result<Outcome, Failure> {
    let report = table.check_axioms(DEFAULT_MAX_PAIR_MEMBERS)?;
    let holds = match expect {
        Expect::Polymatroid => report.verdict == Verdict::Polymatroid,
        Expect::Demi => report.verdict != Verdict::Neither,
    };
    Ok(Outcome {
        subject: subject.into(),
        property: "axioms",
        holds,
        detail: serde_json::to_value(AxiomEcho::new(table, &report)).expect("serializable"),
        certificate: None,
    })
}

fn wei_outcome(subject: &str, table: &PolymatroidTable) -> Outcome {
    let (holds, detail) = match wei_duality_report(table) {
        Ok(w) => {
            let hp = h_profiles(table);
            let identity = hp.identity_violation(table.m(), table.rank());
            let increments = hp.increment_violation(table.m());
            let holds = w.all_ok() && identity.is_none() && increments.is_none();
            (
                holds,
                json!({
                    "weights": w.weights.d,
                    "dual_weights": w.dual_weights.d,
                    "wei": WeiEcho::new(&w),
                    "partialwei_violation": w.partialwei_violation,
                    "h_identity_violation_at": identity,
                    "h_increment_violation_at": increments,
                }),
            )
        }
        Err(e) => (false, json!({ "error": e.to_string() })),
    };
    Outcome { subject: subject.into(), property: "wei", holds, detail, certificate: None }
}

fn duality_outcome(subject: &str, flag: &Flag, lattice: &Arc<SubspaceLattice>) -> Result<Outcome, Failure> {
    let r = verify_flag_duality(flag, lattice)?;
    let at = |i: Option<usize>| i.map(|i| lattice.member(i).basis().row_vecs());
    Ok(Outcome {
        subject: subject.into(),
        property: "flag_duality",
        holds: r.holds(),
        detail: json!({ "s": r.s, "mismatch_at": at(r.mismatch), "padded_mismatch_at": at(r.padded_mismatch) }),
        certificate: None,
    })
}

fn flag_records(flag: &Flag) -> Vec<Record> {
    flag.codes().iter().map(|c| Record::Code(CodeRecord::from_code(c, None))).collect()
}

fn check_flag(
    subject: &str,
    flag: &Flag,
    lattice: &Arc<SubspaceLattice>,
    checks: Checks,
    out: &mut Vec<Outcome>,
) -> Result<(), Failure> {
    let table = flag_polymatroid(flag, lattice)?;
    let expect = if flag.len() == 1 { Expect::Polymatroid } else { Expect::Demi };
    let start = out.len();
    if checks.axioms {
        out.push(axioms_outcome(subject, &table, expect)?);
    }
    if checks.wei {
        out.push(wei_outcome(subject, &table));
    }
    if checks.flag_duality {
        out.push(duality_outcome(subject, flag, lattice)?);
    }
    for o in &mut out[start..] {
        if !o.holds {
            o.certificate = Some(flag_records(flag));
        }
    }
    Ok(())
}

pub fn verify_input(input: &Input, checks: Checks, max_lattice: u64) -> Result<VerifyReport, Failure> {
    let checks = checks.or_all();
    let lattice = input.lattice(max_lattice)?;
    let mut out = Vec::new();
    let mut skipped = Vec::new();
    match input {
        Input::Code { code, .. } => check_flag("input", &Flag::new(vec![code.clone()])?, &lattice, checks, &mut out)?,
        Input::Flag { flag, .. } => check_flag("input", flag, &lattice, checks, &mut out)?,
        Input::Table { table, label } => {
            if checks.axioms {
                out.push(axioms_outcome("input", table, Expect::Demi)?);
            }
            if checks.wei {
                out.push(wei_outcome("input", table));
            }
            if checks.flag_duality {
                skipped.push("flag_duality: a rank table carries no flag".into());
            }
            for o in &mut out {
                if !o.holds {
                    o.certificate = Some(vec![Record::Table(TableRecord::from_table(table, label.clone()))]);
                }
            }
        }
    }
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        input: Some(echo_input(input)),
        seed: None,
        trials: None,
        passed: out.iter().all(|o| o.holds),
        checks: out,
        skipped,
    })
}

const SHAPES: [(usize, usize); 5] = [(2, 2), (3, 2), (2, 3), (3, 3), (4, 2)];

/// A strictly decreasing flag of `len` codes, the last possibly zero.
fn random_chain(field: &FieldSpec, m: usize, n: usize, len: usize, rng: &mut ChaCha8Rng) -> Result<Flag, Failure> {
    let top = rng.gen_range(len..m * n);
    let mut dims = sample(rng, top, len - 1).into_vec();
    dims.push(top);
    dims.sort_unstable_by(|a, b| b.cmp(a));
    Ok(random_flag(field, m, n, &dims, rng)?)
}

/// Random codes over GF(2) plus a length-2 or length-3 flag every other trial.
pub fn verify_random(seed: u64, trials: usize, checks: Checks, max_lattice: u64) -> Result<VerifyReport, Failure> {
    let checks = checks.or_all();
    let field = FieldSpec::prime(2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lattices: HashMap<usize, Arc<SubspaceLattice>> = HashMap::new();
    let mut out = Vec::new();
    for t in 0..trials {
        let (m, n) = SHAPES[rng.gen_range(0..SHAPES.len())];
        let lattice = match lattices.get(&n) {
            Some(l) => l.clone(),
            None => {
                let l = enumerate_subspaces(&field, n, max_lattice)?;
                lattices.insert(n, l.clone());
                l
            }
        };
        let k = rng.gen_range(1..m * n);
        let code = random_code(&field, m, n, k, &mut rng)?;
        let subject = format!("trial {t}: code {m}x{n} K={k}");
        check_flag(&subject, &Flag::new(vec![code])?, &lattice, checks, &mut out)?;
        if t % 2 == 1 {
            let len = 2 + (t / 2) % 2;
            let flag = random_chain(&field, m, n, len, &mut rng)?;
            let dims: Vec<String> = flag.codes().iter().map(|c| c.dim().to_string()).collect();
            let subject = format!("trial {t}: flag {m}x{n} dims {}", dims.join(">"));
            check_flag(&subject, &flag, &lattice, checks, &mut out)?;
        }
    }
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        input: None,
        seed: Some(seed),
        trials: Some(trials),
        passed: out.iter().all(|o| o.holds),
        checks: out,
        skipped: Vec::new(),
    })
}

pub fn render_text(r: &VerifyReport) -> String {
    let mut s = String::new();
    for o in &r.checks {
        s += &format!("{} {} {}\n", if o.holds { "ok  " } else { "FAIL" }, o.property, o.subject);
        if o.holds && o.property == "axioms" {
            s += &format!("     verdict {}\n", o.detail["verdict"].as_str().unwrap_or("?"));
            if !o.detail["r3"].is_null() {
                s += &format!("     R3 counterexample {}\n", o.detail["r3"]);
            }
        }
        if !o.holds {
            s += &format!("     {}\n", o.detail);
        }
    }
    for k in &r.skipped {
        s += &format!("skip {k}\n");
    }
    s += if r.passed { "all checks passed\n" } else { "property violated\n" };
    s
}
