//! On-disk records. A file holds one JSON object per line: a single `code`
//! line, several `code` lines forming a flag (outermost first), or a single
//! `table` line.
//!
//! Field elements are the integers `0..q` whose base-p digits are the
//! coefficients over the lexicographically smallest monic irreducible
//! modulus of degree `e`, lowest degree first. Matrices are lists of rows.

use std::sync::Arc;

use qpoly::lattice::enumerate_subspaces;
use qpoly::{DelsarteCode, Elem, FieldSpec, Flag, Matrix, PolymatroidTable, Subspace, SubspaceLattice};
use serde::{Deserialize, Serialize};

use crate::Failure;

pub type Rows = Vec<Vec<Elem>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Record {
    Code(CodeRecord),
    Table(TableRecord),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeRecord {
    pub q: u32,
    pub p: u32,
    pub e: u32,
    pub m: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub generators: Vec<Rows>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRecord {
    pub q: u32,
    pub p: u32,
    pub e: u32,
    pub n: usize,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub entries: Vec<TableEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub basis: Rows,
    pub value: i64,
}

pub enum Input {
    Code { code: DelsarteCode, label: Option<String> },
    Flag { flag: Flag, labels: Vec<Option<String>> },
    Table { table: PolymatroidTable, label: Option<String> },
}

pub fn matrix_rows(m: &Matrix) -> Rows {
    m.row_vecs()
}

/// The field of order `q`, split into its prime and degree.
pub fn field_of_order(q: u32) -> Result<FieldSpec, Failure> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).ok_or_else(|| Failure::input(format!("q: {q} is not a prime power")))?;
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(Failure::input(format!("q: {q} is not a prime power")));
    }
    Ok(FieldSpec::new(p, e)?)
}

fn field_of(q: u32, p: u32, e: u32) -> Result<FieldSpec, Failure> {
    let f = FieldSpec::new(p, e).map_err(|err| Failure::from(err).context("p, e"))?;
    if f.q() != q {
        return Err(Failure::input(format!("q: {q} does not equal p^e = {}", f.q())));
    }
    Ok(f)
}

fn to_matrix(field: &FieldSpec, rows: &Rows, height: Option<usize>, width: usize, path: &str) -> Result<Matrix, Failure> {
    if let Some(h) = height {
        if rows.len() != h {
            return Err(Failure::input(format!("{path}: expected {h} rows, found {}", rows.len())));
        }
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(Failure::input(format!("{path}[{r}]: expected {width} entries, found {}", row.len())));
        }
        if let Some((c, v)) = row.iter().enumerate().find(|(_, &v)| !field.contains(v)) {
            return Err(Failure::input(format!("{path}[{r}][{c}]: {v} is not an element of GF({})", field.q())));
        }
    }
    Ok(Matrix::from_rows(field, width, rows)?)
}

impl CodeRecord {
    pub fn from_code(code: &DelsarteCode, label: Option<String>) -> Self {
        let f = code.field();
        CodeRecord {
            q: f.q(),
            p: f.p(),
            e: f.e(),
            m: code.m(),
            n: code.n(),
            label,
            generators: code.generators().iter().map(matrix_rows).collect(),
        }
    }

    pub fn to_code(&self) -> Result<DelsarteCode, Failure> {
        let f = field_of(self.q, self.p, self.e)?;
        if self.generators.len() > self.m * self.n {
            return Err(Failure::input(format!(
                "generators: {} matrices exceed mn = {}",
                self.generators.len(),
                self.m * self.n
            )));
        }
        let gens = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| to_matrix(&f, g, Some(self.m), self.n, &format!("generators[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        DelsarteCode::new(&f, self.m, self.n, &gens).map_err(|e| Failure::from(e).context("generators"))
    }
}

impl TableRecord {
    pub fn from_table(table: &PolymatroidTable, label: Option<String>) -> Self {
        let lat = table.lattice();
        let f = lat.field();
        TableRecord {
            q: f.q(),
            p: f.p(),
            e: f.e(),
            n: lat.n(),
            m: table.m(),
            label,
            entries: lat
                .members()
                .iter()
                .zip(table.values())
                .map(|(x, &value)| TableEntry { basis: matrix_rows(x.basis()), value })
                .collect(),
        }
    }

    pub fn to_table(&self, max_lattice: u64) -> Result<PolymatroidTable, Failure> {
        let f = field_of(self.q, self.p, self.e)?;
        let lat = enumerate_subspaces(&f, self.n, max_lattice)?;
        let mut values = vec![None; lat.len()];
        for (i, entry) in self.entries.iter().enumerate() {
            let path = format!("entries[{i}].basis");
            let x = Subspace::from_matrix(&to_matrix(&f, &entry.basis, None, self.n, &path)?);
            let idx = lat.index_of(&x)?;
            if values[idx].replace(entry.value).is_some() {
                return Err(Failure::input(format!("{path}: subspace listed twice")));
            }
        }
        if let Some(i) = values.iter().position(Option::is_none) {
            return Err(Failure::input(format!(
                "entries: no value for the subspace spanned by {:?}",
                lat.member(i).basis().row_vecs()
            )));
        }
        Ok(PolymatroidTable::new(lat, self.m, values.into_iter().map(Option::unwrap).collect())?)
    }
}

pub fn serialize_records(records: &[Record]) -> String {
    records.iter().map(|r| serde_json::to_string(r).expect("records serialize") + "\n").collect()
}

pub fn parse_records(text: &str) -> Result<Vec<Record>, Failure> {
    let records = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Failure::input(format!("line {}: {e}", i + 1))))
        .collect::<Result<Vec<Record>, _>>()?;
    if records.is_empty() {
        return Err(Failure::input("input holds no records"));
    }
    Ok(records)
}

pub fn parse_input(text: &str, max_lattice: u64) -> Result<Input, Failure> {
    let records = parse_records(text)?;
    if let [Record::Table(t)] = records.as_slice() {
        return Ok(Input::Table { table: t.to_table(max_lattice)?, label: t.label.clone() });
    }
    let mut codes = Vec::with_capacity(records.len());
    let mut labels = Vec::with_capacity(records.len());
    for (i, r) in records.iter().enumerate() {
        let Record::Code(c) = r else {
            return Err(Failure::input(format!("line {}: a table must be the only record in its file", i + 1)));
        };
        let code = c.to_code().map_err(|e| e.context(&format!("line {}", i + 1)))?;
        if let Some(first) = codes.first() {
            let first: &DelsarteCode = first;
            if code.field() != first.field() || (code.m(), code.n()) != (first.m(), first.n()) {
                return Err(Failure::input(format!("line {}: field or shape differs from line 1", i + 1)));
            }
        }
        codes.push(code);
        labels.push(c.label.clone());
    }
    if codes.len() == 1 {
        return Ok(Input::Code { code: codes.pop().unwrap(), label: labels.pop().unwrap() });
    }
    Ok(Input::Flag { flag: Flag::new(codes)?, labels })
}

impl Input {
    pub fn lattice(&self, max_lattice: u64) -> Result<Arc<SubspaceLattice>, Failure> {
        match self {
            Input::Code { code, .. } => Ok(enumerate_subspaces(code.field(), code.n(), max_lattice)?),
            Input::Flag { flag, .. } => Ok(enumerate_subspaces(flag.codes()[0].field(), flag.n(), max_lattice)?),
            Input::Table { table, .. } => Ok(table.lattice().clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qpoly::delsarte::gabidulin;

    #[test]
    fn code_lines_round_trip() {
        let code = gabidulin(2, 3, 2, 1).unwrap();
        let text = serialize_records(&[Record::Code(CodeRecord::from_code(&code, Some("gab".into())))]);
        assert_eq!(text.lines().count(), 1);
        let Input::Code { code: back, label } = parse_input(&text, 100).unwrap() else { panic!("expected a code") };
        assert_eq!(back, code);
        assert_eq!(label.as_deref(), Some("gab"));
        assert_eq!(serialize_records(&parse_records(&text).unwrap()), text);
    }

    #[test]
    fn bad_entries_name_their_position() {
        let text = r#"{"kind":"code","q":2,"p":2,"e":1,"m":1,"n":2,"generators":[[[1,2]]]}"#;
        let err = parse_input(text, 100).err().unwrap();
        assert_eq!(err.code, 2);
        assert!(err.message.contains("generators[0][0][1]"), "{}", err.message);
        let text = r#"{"kind":"code","q":4,"p":2,"e":1,"m":1,"n":2,"generators":[]}"#;
        assert!(parse_input(text, 100).err().unwrap().message.starts_with("line 1: q:"));
    }

    #[test]
    fn prime_powers_split() {
        let f = field_of_order(9).unwrap();
        assert_eq!((f.p(), f.e()), (3, 2));
        assert!(field_of_order(12).is_err());
        assert!(field_of_order(1).is_err());
    }
}
