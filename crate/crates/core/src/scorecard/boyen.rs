//! Per-phase cost tables priced with fitted unit costs for one curve
//! family.
//!
//! The calibration files carry both the fitted prices and the published
//! cells; a table reproduces when every cell matches its target exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

use super::cost::{cost_eval, parse_decimal, CostExpr, CostTerm, UnitCosts};
use super::data::{csv_records, key_values, DataSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Supersingular curves.
    Ss,
    Mnt,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Ss => "SS",
            Family::Mnt => "MNT",
        }
    }

    fn file(self) -> &'static str {
        match self {
            Family::Ss => "boyen_ss.cal",
            Family::Mnt => "boyen_mnt.cal",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        match s.to_ascii_lowercase().as_str() {
            "ss" => Ok(Family::Ss),
            "mnt" => Ok(Family::Mnt),
            _ => Err(Error::Unknown {
                kind: "curve family",
                name: s.into(),
            }),
        }
    }
}

pub const PHASES: [&str; 3] = ["extract", "encrypt", "decrypt"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Calibration {
    pub family: String,
    pub security: u32,
    pub costs: UnitCosts,
    /// `(scheme, phase or "sum")` to the published cell.
    pub targets: BTreeMap<(String, String), BigRational>,
}

impl Calibration {
    pub fn parse(text: &str) -> Result<Calibration> {
        let mut family = None;
        let mut security = None;
        let mut prices = BTreeMap::new();
        let mut targets = BTreeMap::new();
        for (line, k, v) in key_values(text)? {
            let perr = |msg: String| Error::Parse { line, msg };
            if k == "family" {
                family = Some(v);
            } else if k == "security" {
                security = Some(
                    v.parse::<u32>()
                        .map_err(|_| perr(format!("bad security level `{v}`")))?,
                );
            } else if let Some(term) = k.strip_prefix("price.") {
                let t: CostTerm = term.parse().map_err(|_| perr(format!("unknown cost term `{term}`")))?;
                let p = parse_decimal(&v).map_err(|e| perr(e.to_string()))?;
                if prices.insert(t, p).is_some() {
                    return Err(perr(format!("price for `{term}` given twice")));
                }
            } else if let Some(rest) = k.strip_prefix("target.") {
                let (scheme, phase) = rest
                    .split_once('.')
                    .ok_or_else(|| perr(format!("target key `{k}` needs scheme.phase")))?;
                let p = parse_decimal(&v).map_err(|e| perr(e.to_string()))?;
                targets.insert((scheme.to_string(), phase.to_string()), p);
            } else {
                return Err(perr(format!("unknown key `{k}`")));
            }
        }
        Ok(Calibration {
            family: family.ok_or_else(|| Error::MissingElement("family".into()))?,
            security: security.ok_or_else(|| Error::MissingElement("security".into()))?,
            costs: UnitCosts::from_prices(prices),
            targets,
        })
    }
}

/// `(scheme, phase)` to expression.
pub fn parse_exprs(text: &str) -> Result<Vec<(String, String, CostExpr)>> {
    let (header, rows) = csv_records(text)?;
    if header != ["scheme", "phase", "expr"] {
        return Err(Error::Parse {
            line: 1,
            msg: "expected header scheme,phase,expr".into(),
        });
    }
    rows.into_iter()
        .map(|(line, r)| {
            if r.len() != 3 {
                return Err(Error::Parse {
                    line,
                    msg: "expected 3 cells".into(),
                });
            }
            let e = r[2].parse().map_err(|e: Error| Error::Parse {
                line,
                msg: e.to_string(),
            })?;
            Ok((r[0].clone(), r[1].clone(), e))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoyenTable {
    pub family: Family,
    pub security: u32,
    pub schemes: Vec<String>,
    /// Rows extract, encrypt, decrypt, sum; one cell per scheme.
    pub cells: Vec<Vec<BigRational>>,
    pub targets: Vec<Vec<Option<BigRational>>>,
}

impl BoyenTable {
    pub fn row_labels() -> [&'static str; 4] {
        ["extract", "encrypt", "decrypt", "sum"]
    }

    pub fn cell(&self, scheme: &str, row: &str) -> Option<&BigRational> {
        let c = self.schemes.iter().position(|s| s == scheme)?;
        let r = Self::row_labels().iter().position(|l| *l == row)?;
        Some(&self.cells[r][c])
    }

    /// Every cell equals its published target, and every target exists.
    pub fn reproduces(&self) -> bool {
        self.cells
            .iter()
            .zip(&self.targets)
            .all(|(cs, ts)| cs.iter().zip(ts).all(|(c, t)| t.as_ref() == Some(c)))
    }
}

pub fn boyen_table(data: &DataSet, family: Family) -> Result<BoyenTable> {
    let cal = Calibration::parse(data.text(family.file())?)?;
    if !cal.family.eq_ignore_ascii_case(family.name()) {
        return Err(Error::Malformed(format!(
            "{} holds family {}",
            family.file(),
            cal.family
        )));
    }
    let exprs = parse_exprs(data.text("boyen_exprs.csv")?)?;
    let mut schemes: Vec<String> = Vec::new();
    for (s, _, _) in &exprs {
        if !schemes.contains(s) {
            schemes.push(s.clone());
        }
    }
    let mut cells = vec![vec![BigRational::zero(); schemes.len()]; 4];
    for (ci, s) in schemes.iter().enumerate() {
        for (ri, phase) in PHASES.iter().enumerate() {
            let e = exprs
                .iter()
                .find(|(es, ep, _)| es == s && ep == phase)
                .map(|(_, _, e)| e)
                .ok_or_else(|| Error::MissingElement(format!("expression for {s} {phase}")))?;
            let v = cost_eval(e, &cal.costs)?;
            cells[3][ci] += &v;
            cells[ri][ci] = v;
        }
    }
    let targets = BoyenTable::row_labels()
        .iter()
        .map(|row| {
            schemes
                .iter()
                .map(|s| cal.targets.get(&(s.clone(), row.to_string())).cloned())
                .collect()
        })
        .collect();
    Ok(BoyenTable {
        family,
        security: cal.security,
        schemes,
        cells,
        targets,
    })
}
