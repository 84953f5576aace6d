use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

pub(crate) const TABLE1: &str = include_str!("../../data/table1.csv");
pub(crate) const TABLE2: &str = include_str!("../../data/table2.csv");
pub(crate) const TABLE3: &str = include_str!("../../data/table3.csv");

/// How a computed value is compared with its reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TolKind {
    /// `|x − ref| ≤ tol`
    Abs,
    /// `|x − ref| ≤ tol·|ref|`
    Rel,
    /// `x < ref`; the tolerance value is unused.
    Below,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerance {
    pub column: String,
    pub kind: TolKind,
    pub value: f64,
}

impl Tolerance {
    pub fn new(column: &str, kind: TolKind, value: f64) -> Self {
        Tolerance {
            column: column.to_string(),
            kind,
            value,
        }
    }

    pub fn accepts(&self, computed: f64, reference: f64) -> bool {
        let dev = (computed - reference).abs();
        match self.kind {
            TolKind::Abs => dev <= self.value,
            TolKind::Rel => dev <= self.value * reference.abs(),
            TolKind::Below => computed < reference,
        }
    }
}

/// A reference table: numeric columns plus per-column tolerances read from
/// `# tol,<column>,abs|rel,<value>` comment lines.
#[derive(Debug, Clone)]
pub struct RefTable {
    pub tolerances: Vec<Tolerance>,
    columns: HashMap<String, usize>,
    rows: Vec<Vec<f64>>,
}

impl RefTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut tolerances = Vec::new();
        for line in text.lines().filter_map(|l| l.strip_prefix("# tol,")) {
            let parts: Vec<&str> = line.split(',').map(str::trim).collect();
            if parts.len() != 3 || parts[0] == "<column>" {
                continue;
            }
            let kind = match parts[1] {
                "abs" => TolKind::Abs,
                "rel" => TolKind::Rel,
                other => return Err(Error::Data(format!("unknown tolerance kind {other:?}"))),
            };
            let value = parts[2]
                .parse()
                .map_err(|e| Error::Data(format!("tolerance {line:?}: {e}")))?;
            tolerances.push(Tolerance::new(parts[0], kind, value));
        }
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| Error::Data(e.to_string()))?
            .clone();
        let columns = headers
            .iter()
            .enumerate()
            .map(|(i, h)| (h.to_string(), i))
            .collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Data(e.to_string()))?;
            let row = record
                .iter()
                .map(|f| {
                    f.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Data(format!("field {f:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Ok(RefTable {
            tolerances,
            columns,
            rows,
        })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, row: usize, column: &str) -> Result<f64> {
        let &i = self
            .columns
            .get(column)
            .ok_or_else(|| Error::Data(format!("no column {column:?}")))?;
        Ok(self.rows[row][i])
    }

    pub fn tolerance(&self, column: &str) -> Result<Tolerance> {
        self.tolerances
            .iter()
            .find(|t| t.column == column)
            .cloned()
            .ok_or_else(|| Error::Data(format!("no tolerance for column {column:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_tables_parse() {
        let t1 = RefTable::parse(TABLE1).unwrap();
        let t2 = RefTable::parse(TABLE2).unwrap();
        let t3 = RefTable::parse(TABLE3).unwrap();
        assert_eq!((t1.len(), t2.len(), t3.len()), (4, 12, 15));
        assert_eq!(t2.get(11, "sqrt_q").unwrap(), 0.80540692);
        assert_eq!(t3.get(0, "mu").unwrap(), 0.18854e-7);
        assert_eq!(t3.tolerance("mu_hat").unwrap().value, 5e-4);
        assert_eq!(t1.tolerances.len(), 3);
    }

    #[test]
    fn tolerance_kinds() {
        assert!(Tolerance::new("x", TolKind::Abs, 0.1).accepts(1.05, 1.0));
        assert!(!Tolerance::new("x", TolKind::Rel, 1e-3).accepts(1.01, 1.0));
        assert!(Tolerance::new("x", TolKind::Below, 0.0).accepts(0.5, 1.0));
    }
}
