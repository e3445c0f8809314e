//! Symbolic operation rows checked against measured ledgers.
//!
//! Pairings, ratio pairings, scalar multiplications, `G_T`
//! exponentiations, inversions, divisions and map-to-point calls must
//! match exactly. Multiplications (`G_T` and `Z_q` together) get a slack
//! of [`MUL_SLACK`]: the rows skip incidental products. Additions are not
//! compared at all.

use std::fmt;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::ledger::{Counts, Op, OpLedger, Phase};

use super::cost::{CostExpr, CostTerm};
use super::data::{csv_records, DataSet};

pub const MUL_SLACK: u64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Category {
    Pairing,
    Ratio,
    ScalarMul,
    Exp,
    Inv,
    Div,
    MapToPoint,
    Mul,
}

impl Category {
    pub const ALL: [Category; 8] = [
        Category::Pairing,
        Category::Ratio,
        Category::ScalarMul,
        Category::Exp,
        Category::Inv,
        Category::Div,
        Category::MapToPoint,
        Category::Mul,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::Pairing => "pairing",
            Category::Ratio => "ratio",
            Category::ScalarMul => "scalarmul",
            Category::Exp => "exp",
            Category::Inv => "inv",
            Category::Div => "div",
            Category::MapToPoint => "maptopoint",
            Category::Mul => "mul",
        }
    }

    pub fn slack(self) -> u64 {
        match self {
            Category::Mul => MUL_SLACK,
            _ => 0,
        }
    }

    /// Category a symbolic term is counted under; `None` for terms the
    /// comparison ignores.
    pub fn of_term(t: CostTerm) -> Option<Category> {
        Some(match t {
            CostTerm::Pairing => Category::Pairing,
            CostTerm::RatioPairing => Category::Ratio,
            CostTerm::ScalarMul => Category::ScalarMul,
            CostTerm::ExpGt => Category::Exp,
            CostTerm::InvZq | CostTerm::InvGt => Category::Inv,
            CostTerm::DivGt => Category::Div,
            CostTerm::MapToPoint => Category::MapToPoint,
            CostTerm::MulGt | CostTerm::MulZq => Category::Mul,
            _ => return None,
        })
    }

    /// Measured count from a top-level ledger view.
    pub fn measured(self, c: &Counts) -> u64 {
        match self {
            Category::Pairing => c.get(Op::Pairing),
            Category::Ratio => c.get(Op::RatioPairing),
            Category::ScalarMul => c.get(Op::ScalarMul),
            Category::Exp => c.get(Op::GtExp),
            Category::Inv => c.get(Op::ZInv) + c.get(Op::GtInv),
            Category::Div => c.get(Op::GtDiv),
            Category::MapToPoint => c.get(Op::MapToPoint),
            Category::Mul => c.get(Op::GtMul) + c.get(Op::ZMul),
        }
    }
}

impl std::str::FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Category> {
        Category::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "count category",
                name: s.into(),
            })
    }
}

fn parse_phase(s: &str) -> Option<Phase> {
    Phase::ALL.into_iter().find(|p| p.name() == s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpRow {
    /// Which published table the row comes from.
    pub source: String,
    pub scheme: String,
    pub phase: Phase,
    pub expr: CostExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjustment {
    pub scheme: String,
    pub phase: Phase,
    pub category: Category,
    pub delta: i64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectations {
    pub rows: Vec<OpRow>,
    pub adjustments: Vec<Adjustment>,
}

impl Expectations {
    pub fn load(data: &DataSet) -> Result<Expectations> {
        Expectations::parse(data.text("opcounts.csv")?, data.text("opcount_adjust.csv")?)
    }

    pub fn parse(rows_csv: &str, adjust_csv: &str) -> Result<Expectations> {
        let bad = |line: usize, msg: String| Error::Parse { line, msg };
        let (_, recs) = csv_records(rows_csv)?;
        let mut rows = Vec::new();
        for (line, r) in recs {
            if r.len() != 4 {
                return Err(bad(line, "expected source,scheme,phase,expr".into()));
            }
            rows.push(OpRow {
                source: r[0].clone(),
                scheme: r[1].clone(),
                phase: parse_phase(&r[2]).ok_or_else(|| bad(line, format!("unknown phase `{}`", r[2])))?,
                expr: r[3].parse().map_err(|e: Error| bad(line, e.to_string()))?,
            });
        }
        let (_, recs) = csv_records(adjust_csv)?;
        let mut adjustments = Vec::new();
        for (line, r) in recs {
            if r.len() != 5 {
                return Err(bad(line, "expected scheme,phase,category,delta,reason".into()));
            }
            adjustments.push(Adjustment {
                scheme: r[0].clone(),
                phase: parse_phase(&r[1]).ok_or_else(|| bad(line, format!("unknown phase `{}`", r[1])))?,
                category: r[2].parse().map_err(|e: Error| bad(line, e.to_string()))?,
                delta: r[3].parse().map_err(|_| bad(line, format!("bad delta `{}`", r[3])))?,
                reason: r[4].clone(),
            });
        }
        Ok(Expectations { rows, adjustments })
    }

    pub fn row(&self, scheme: &str, phase: Phase) -> Option<&OpRow> {
        self.rows.iter().find(|r| r.scheme == scheme && r.phase == phase)
    }

    pub fn schemes(&self, source: &str) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for r in self.rows.iter().filter(|r| r.source == source) {
            if !out.contains(&r.scheme.as_str()) {
                out.push(&r.scheme);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryCheck {
    pub category: Category,
    pub symbolic: i64,
    pub adjustment: i64,
    pub measured: u64,
}

impl CategoryCheck {
    pub fn expected(&self) -> i64 {
        self.symbolic + self.adjustment
    }

    pub fn delta(&self) -> i64 {
        self.measured as i64 - self.expected()
    }

    pub fn ok(&self) -> bool {
        self.delta().unsigned_abs() <= self.category.slack()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub scheme: String,
    pub phase: Phase,
    pub checks: Vec<CategoryCheck>,
    /// Reasons for every adjustment applied.
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn is_match(&self) -> bool {
        self.checks.iter().all(CategoryCheck::ok)
    }

    pub fn mismatches(&self) -> Vec<&CategoryCheck> {
        self.checks.iter().filter(|c| !c.ok()).collect()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: ", self.scheme, self.phase)?;
        if self.is_match() {
            return f.write_str("match");
        }
        f.write_str("mismatch")?;
        for c in self.mismatches() {
            write!(
                f,
                " {} expected {} measured {} (delta {:+})",
                c.category.name(),
                c.expected(),
                c.measured,
                c.delta()
            )?;
        }
        Ok(())
    }
}

/// Compare one phase's ledger difference with its symbolic row.
pub fn opcount_verify(exp: &Expectations, scheme: &str, phase: Phase, ledger: &OpLedger) -> Result<VerifyReport> {
    let row = exp.row(scheme, phase).ok_or_else(|| Error::Unknown {
        kind: "scheme/phase row",
        name: format!("{scheme} {phase}"),
    })?;
    let mut notes = Vec::new();
    let checks = Category::ALL
        .iter()
        .map(|&cat| {
            let symbolic: i64 = row
                .expr
                .terms()
                .filter(|(t, _)| Category::of_term(*t) == Some(cat))
                .map(|(_, c)| c.to_integer().to_i64().unwrap_or(i64::MAX))
                .sum();
            let mut adjustment = 0;
            for a in exp
                .adjustments
                .iter()
                .filter(|a| a.scheme == scheme && a.phase == phase && a.category == cat)
            {
                adjustment += a.delta;
                notes.push(format!("{} {:+}: {}", cat.name(), a.delta, a.reason));
            }
            CategoryCheck {
                category: cat,
                symbolic,
                adjustment,
                measured: cat.measured(&ledger.top),
            }
        })
        .collect();
    Ok(VerifyReport {
        scheme: scheme.to_string(),
        phase,
        checks,
        notes,
    })
}
