//! Rendering of the classification and comparison tables, each with a
//! pass flag against the pinned cells.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ledger::{Op, Phase};

use super::boyen::{boyen_table, BoyenTable, Family};
use super::cost::format_decimal;
use super::data::{csv_records, DataSet};
use super::measure::Measured;
use super::opcount::{opcount_verify, Category, Expectations};
use super::rank::{class_matrix, dense_classes, property_rank, rank_aggregate, Property, RankFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TableId {
    Table1,
    Table4,
    Table5,
    Final,
    Properties,
    Table6,
    BoyenSs,
    BoyenMnt,
    HibeCompare,
    FsCompare,
}

impl TableId {
    pub const ALL: [TableId; 10] = [
        TableId::Table1,
        TableId::Table4,
        TableId::Table5,
        TableId::Final,
        TableId::Properties,
        TableId::Table6,
        TableId::BoyenSs,
        TableId::BoyenMnt,
        TableId::HibeCompare,
        TableId::FsCompare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TableId::Table1 => "table1",
            TableId::Table4 => "table4",
            TableId::Table5 => "table5",
            TableId::Final => "final",
            TableId::Properties => "properties",
            TableId::Table6 => "table6",
            TableId::BoyenSs => "boyen-ss",
            TableId::BoyenMnt => "boyen-mnt",
            TableId::HibeCompare => "hibe-compare",
            TableId::FsCompare => "fs-compare",
        }
    }

    fn title(self) -> &'static str {
        match self {
            TableId::Table1 => "Security classification",
            TableId::Table4 => "Operation counts, benchmark schemes",
            TableId::Table5 => "Efficiency classification",
            TableId::Final => "Final classification",
            TableId::Properties => "Additional properties",
            TableId::Table6 => "Operation counts, one-pairing IBE",
            TableId::BoyenSs => "Unit-cost comparison, SS @ 80-bit",
            TableId::BoyenMnt => "Unit-cost comparison, MNT @ 80-bit",
            TableId::HibeCompare => "Hierarchical schemes per level k",
            TableId::FsCompare => "Forward-secure HIBE, asymptotic costs",
        }
    }

    /// Whether rendering needs [`Measured`] ledgers.
    pub fn needs_measurements(self) -> bool {
        matches!(self, TableId::Table4 | TableId::Table6 | TableId::HibeCompare)
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<TableId> {
        TableId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "table",
                name: s.into(),
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rendered {
    pub id: TableId,
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// `None` when the table has nothing to check.
    pub pass: Option<bool>,
    pub notes: Vec<String>,
}

impl Rendered {
    fn status(&self) -> &'static str {
        match self.pass {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "n/a",
        }
    }

    pub fn to_text(&self) -> String {
        let cols = self.header.len();
        let mut widths = vec![0usize; cols];
        for r in std::iter::once(&self.header).chain(&self.rows) {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |r: &[String]| {
            let cells: Vec<String> = r
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                .collect();
            cells.join("  ").trim_end().to_string()
        };
        let mut out = format!("== {} ({}) ==\n", self.title, self.id);
        out.push_str(&line(&self.header));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out.push_str(&format!("status: {}\n", self.status()));
        out
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        let mut out = format!("# {}: {}\n", self.id, self.title);
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells"));
        out.push_str(&format!("# status: {}\n", self.status()));
        out
    }
}

fn strs<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn as_i64(v: &[u32]) -> Vec<i64> {
    v.iter().map(|&c| i64::from(c)).collect()
}

fn labelled<T: ToString>(label: &str, v: &[T]) -> Vec<String> {
    std::iter::once(label.to_string())
        .chain(v.iter().map(ToString::to_string))
        .collect()
}

fn header(first: &str, schemes: &[String]) -> Vec<String> {
    std::iter::once(first.to_string())
        .chain(schemes.iter().cloned())
        .collect()
}

fn check_pin(notes: &mut Vec<String>, file: &RankFile, label: &str, got: &[i64]) -> Result<bool> {
    let want = file.pin(label)?;
    if want != got {
        notes.push(format!("{label}: expected {want:?}, got {got:?}"));
        return Ok(false);
    }
    Ok(true)
}

fn rank_table(id: TableId, data: &DataSet, file: &str) -> Result<Rendered> {
    let f = RankFile::parse(data.text(file)?)?;
    let (sums, classes) = rank_aggregate(&f.matrix)?;
    let mut rows: Vec<Vec<String>> = f.matrix.rows.iter().map(|(l, v)| labelled(l, v)).collect();
    rows.push(labelled("sum", &sums));
    rows.push(labelled("class", &classes));
    let mut notes = Vec::new();
    let pass = check_pin(&mut notes, &f, "sum", &sums)? & check_pin(&mut notes, &f, "class", &as_i64(&classes))?;
    Ok(Rendered {
        id,
        title: id.title().into(),
        header: header("criterion", &f.matrix.schemes),
        rows,
        pass: Some(pass),
        notes,
    })
}

/// Schemes, security classes, efficiency classes, merged sums, merged classes.
pub type FinalClasses = (Vec<String>, Vec<u32>, Vec<u32>, Vec<i64>, Vec<u32>);

/// Classes of the security and efficiency tables, and their merge.
pub fn final_classes(data: &DataSet) -> Result<FinalClasses> {
    let t1 = RankFile::parse(data.text("table1.csv")?)?;
    let t5 = RankFile::parse(data.text("table5.csv")?)?;
    if t1.matrix.schemes != t5.matrix.schemes {
        return Err(Error::Malformed("table1 and table5 list different schemes".into()));
    }
    let (_, c1) = rank_aggregate(&t1.matrix)?;
    let (_, c5) = rank_aggregate(&t5.matrix)?;
    let merged = class_matrix(&t1.matrix.schemes, &[("table1_class", &c1), ("table5_class", &c5)]);
    let (sums, classes) = rank_aggregate(&merged)?;
    Ok((t1.matrix.schemes.clone(), c1, c5, sums, classes))
}

fn final_table(data: &DataSet) -> Result<Rendered> {
    let pins = RankFile::parse(data.text("final.csv")?)?;
    let (schemes, c1, c5, sums, classes) = final_classes(data)?;
    let mut notes = Vec::new();
    let mut pass = check_pin(&mut notes, &pins, "table1_class", &as_i64(&c1))?;
    pass &= check_pin(&mut notes, &pins, "table5_class", &as_i64(&c5))?;
    pass &= check_pin(&mut notes, &pins, "sum", &sums)?;
    pass &= check_pin(&mut notes, &pins, "class", &as_i64(&classes))?;
    Ok(Rendered {
        id: TableId::Final,
        title: TableId::Final.title().into(),
        header: header("criterion", &schemes),
        rows: vec![
            labelled("table1 class", &c1),
            labelled("table5 class", &c5),
            labelled("sum", &sums),
            labelled("final class", &classes),
        ],
        pass: Some(pass),
        notes,
    })
}

fn properties_table(data: &DataSet) -> Result<Rendered> {
    let pins = RankFile::parse(data.text("properties.csv")?)?;
    let t5 = RankFile::parse(data.text("table5.csv")?)?;
    let m = property_rank(&t5.matrix, &Property::ALL)?;
    let (sums, classes) = rank_aggregate(&m)?;
    let (_, _, _, _, final_class) = final_classes(data)?;
    let specific_sum: Vec<i64> = final_class
        .iter()
        .zip(&classes)
        .map(|(a, b)| i64::from(a + b))
        .collect();
    let specific = dense_classes(&specific_sum);
    let mut notes = Vec::new();
    let mut pass = true;
    let mut rows = Vec::new();
    for (label, row) in &m.rows {
        pass &= check_pin(&mut notes, &pins, label, row)?;
        rows.push(labelled(label, row));
    }
    pass &= check_pin(&mut notes, &pins, "sum", &sums)?;
    pass &= check_pin(&mut notes, &pins, "class", &as_i64(&classes))?;
    pass &= check_pin(&mut notes, &pins, "specific", &as_i64(&specific))?;
    rows.push(labelled("sum", &sums));
    rows.push(labelled("class", &classes));
    rows.push(labelled("specific", &specific));
    Ok(Rendered {
        id: TableId::Properties,
        title: TableId::Properties.title().into(),
        header: header("criterion", &m.schemes),
        rows,
        pass: Some(pass),
        notes,
    })
}

fn measured_cell(checks: &[super::opcount::CategoryCheck]) -> String {
    let parts: Vec<String> = checks
        .iter()
        .filter(|c| c.measured > 0)
        .map(|c| format!("{}*{}", c.measured, c.category.name()))
        .collect();
    if parts.is_empty() {
        "-".into()
    } else {
        parts.join(" + ")
    }
}

fn opcount_table(id: TableId, source: &str, data: &DataSet, measured: &Measured) -> Result<Rendered> {
    let exp = Expectations::load(data)?;
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    let mut pass = true;
    for scheme in exp.schemes(source) {
        for phase in Phase::ALL {
            let ledger = measured
                .ledger(scheme, phase)
                .ok_or_else(|| Error::MissingElement(format!("measurement for {scheme} {phase}")))?;
            let rep = opcount_verify(&exp, scheme, phase, ledger)?;
            let row = exp.row(scheme, phase).expect("verify found it");
            pass &= rep.is_match();
            for n in &rep.notes {
                notes.push(format!("{scheme} {phase} {n}"));
            }
            if !rep.is_match() {
                notes.push(rep.to_string());
            }
            rows.push(vec![
                scheme.to_string(),
                phase.name().to_string(),
                row.expr.to_string(),
                measured_cell(&rep.checks),
                if rep.is_match() { "match" } else { "MISMATCH" }.to_string(),
            ]);
        }
    }
    Ok(Rendered {
        id,
        title: id.title().into(),
        header: strs(&["scheme", "phase", "symbolic", "measured", "verify"]),
        rows,
        pass: Some(pass),
        notes,
    })
}

fn boyen_rendered(id: TableId, t: &BoyenTable) -> Rendered {
    let rows = BoyenTable::row_labels()
        .iter()
        .zip(&t.cells)
        .map(|(l, cells)| labelled(l, &cells.iter().map(format_decimal).collect::<Vec<_>>()))
        .collect();
    let mut notes = Vec::new();
    for (ri, l) in BoyenTable::row_labels().iter().enumerate() {
        for (ci, s) in t.schemes.iter().enumerate() {
            let got = &t.cells[ri][ci];
            match &t.targets[ri][ci] {
                Some(want) if want == got => {}
                Some(want) => notes.push(format!(
                    "{s} {l}: expected {}, got {}",
                    format_decimal(want),
                    format_decimal(got)
                )),
                None => notes.push(format!("{s} {l}: no published target")),
            }
        }
    }
    Rendered {
        id,
        title: id.title().into(),
        header: header("phase", &t.schemes),
        rows,
        pass: Some(t.reproduces()),
        notes,
    }
}

fn published(data: &DataSet, file: &str) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let (header, recs) = csv_records(data.text(file)?)?;
    let mut rows = Vec::new();
    for (line, r) in recs {
        if r.len() != header.len() {
            return Err(Error::Parse {
                line,
                msg: format!("expected {} cells", header.len()),
            });
        }
        rows.push(r);
    }
    Ok((header, rows))
}

fn hibe_table(data: &DataSet, measured: Option<&Measured>) -> Result<Rendered> {
    let (header, mut rows) = published(data, "hibe_compare.csv")?;
    let mut notes = Vec::new();
    let mut pass = None;
    if let Some(m) = measured {
        let mut ok = true;
        for lvl in &m.hibe {
            let k = lvl.level as u64;
            let (x, e, d) = (&lvl.extract_user.top, &lvl.encrypt.top, &lvl.decrypt.top);
            ok &= x.get(Op::ScalarMul) == 2 && x.get(Op::Pairing) == 0;
            ok &= e.get(Op::GtExp) == k + 2 && e.get(Op::ScalarMul) == 2;
            ok &= d.get(Op::Pairing) == 2 && lvl.arity == 3;
            rows.push(vec![
                format!("Our measured k={k}"),
                format!("{} Exp_G1", x.get(Op::ScalarMul)),
                format!("{} Exp_GT + {} Exp_G1", e.get(Op::GtExp), e.get(Op::ScalarMul)),
                format!(
                    "{} pairing + {} Mul_GT + {} Div_GT + {} Exp_G1",
                    d.get(Op::Pairing),
                    d.get(Op::GtMul),
                    d.get(Op::GtDiv),
                    d.get(Op::ScalarMul)
                ),
            ]);
        }
        notes.push("decryption ships the correction term with the key, so it needs no Exp_G1".into());
        notes.push("ciphertexts carry 3 elements at every level".into());
        pass = Some(ok);
    }
    Ok(Rendered {
        id: TableId::HibeCompare,
        title: TableId::HibeCompare.title().into(),
        header,
        rows,
        pass,
        notes,
    })
}

/// Render one table. Tables that compare against ledgers need
/// `measured`; the others ignore it.
pub fn render(id: TableId, data: &DataSet, measured: Option<&Measured>) -> Result<Rendered> {
    let need = || measured.ok_or_else(|| Error::Config(format!("table {id} needs measured ledgers")));
    match id {
        TableId::Table1 => rank_table(id, data, "table1.csv"),
        TableId::Table5 => rank_table(id, data, "table5.csv"),
        TableId::Final => final_table(data),
        TableId::Properties => properties_table(data),
        TableId::Table4 => opcount_table(id, "table4", data, need()?),
        TableId::Table6 => opcount_table(id, "table6", data, need()?),
        TableId::BoyenSs => Ok(boyen_rendered(id, &boyen_table(data, Family::Ss)?)),
        TableId::BoyenMnt => Ok(boyen_rendered(id, &boyen_table(data, Family::Mnt)?)),
        TableId::HibeCompare => hibe_table(data, measured),
        TableId::FsCompare => {
            let (header, rows) = published(data, "fs_compare.csv")?;
            Ok(Rendered {
                id,
                title: id.title().into(),
                header,
                rows,
                pass: None,
                notes: Vec::new(),
            })
        }
    }
}

/// Categories a table-4 style row distinguishes, for documentation.
pub fn compared_categories() -> Vec<(&'static str, u64)> {
    Category::ALL.iter().map(|c| (c.name(), c.slack())).collect()
}
