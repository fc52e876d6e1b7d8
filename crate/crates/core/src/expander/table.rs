use std::io::Write;

use itertools::Itertools;
use serde::Serialize;

use super::{BipartiteIncidence, ExpansionRecord};
use crate::error::{Error, Result};

/// One CSV row: `m,min_gamma,corradi_num,corradi_den,rhs21_num,rhs21_den,witness`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpansionRow {
    pub m: usize,
    pub min_gamma: usize,
    pub corradi_num: Option<String>,
    pub corradi_den: Option<String>,
    pub rhs21_num: String,
    pub rhs21_den: String,
    pub witness: String,
}

impl From<&ExpansionRecord> for ExpansionRow {
    fn from(r: &ExpansionRecord) -> Self {
        ExpansionRow {
            m: r.m,
            min_gamma: r.min_gamma,
            corradi_num: r.corradi.as_ref().map(|c| c.numer().to_string()),
            corradi_den: r.corradi.as_ref().map(|c| c.denom().to_string()),
            rhs21_num: r.rhs21.numer().to_string(),
            rhs21_den: r.rhs21.denom().to_string(),
            witness: r.witness.iter().join(";"),
        }
    }
}

/// Exact expansion records for every m in `1..=|A|` that fits the budget.
/// Sizes over budget are skipped, not fatal.
pub fn expansion_table(g: &BipartiteIncidence, budget: u128) -> Result<Vec<ExpansionRecord>> {
    let mut out = Vec::new();
    for m in 1..=g.atoms().len() {
        match g.min_vertex_expansion(m, budget) {
            Ok(r) => out.push(r),
            Err(Error::Capacity { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

pub fn write_expansion_csv<W: Write>(records: &[ExpansionRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(ExpansionRow::from(r)).map_err(|e| Error::Parse(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(())
}
