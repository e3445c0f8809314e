//! Rank aggregation: column sums, then dense classes where tied sums
//! share the better class.

use crate::error::{Error, Result};

use super::data::csv_records;

/// Criteria rows by scheme columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankMatrix {
    pub schemes: Vec<String>,
    pub rows: Vec<(String, Vec<i64>)>,
}

/// A matrix file: criterion rows plus pinned rows (`=label`) holding the
/// published values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankFile {
    pub matrix: RankMatrix,
    pub pins: Vec<(String, Vec<i64>)>,
}

impl RankFile {
    pub fn parse(text: &str) -> Result<RankFile> {
        let (header, records) = csv_records(text)?;
        if header.len() < 2 {
            return Err(Error::Parse {
                line: 1,
                msg: "header needs a criterion column and at least one scheme".into(),
            });
        }
        let schemes: Vec<String> = header[1..].to_vec();
        let mut rows = Vec::new();
        let mut pins = Vec::new();
        for (line, rec) in records {
            if rec.len() != header.len() {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {} cells, found {}", header.len(), rec.len()),
                });
            }
            let values = rec[1..]
                .iter()
                .map(|c| {
                    c.parse::<i64>().map_err(|_| Error::Parse {
                        line,
                        msg: format!("not an integer: `{c}`"),
                    })
                })
                .collect::<Result<Vec<i64>>>()?;
            match rec[0].strip_prefix('=') {
                Some(label) => pins.push((label.to_string(), values)),
                None => rows.push((rec[0].clone(), values)),
            }
        }
        Ok(RankFile {
            matrix: RankMatrix { schemes, rows },
            pins,
        })
    }

    pub fn pin(&self, label: &str) -> Result<&[i64]> {
        self.pins
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| v.as_slice())
            .ok_or_else(|| Error::MissingElement(format!("pinned row `{label}`")))
    }
}

impl RankMatrix {
    pub fn row(&self, label: &str) -> Result<&[i64]> {
        self.rows
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| v.as_slice())
            .ok_or_else(|| Error::MissingElement(format!("criterion `{label}`")))
    }
}

/// Dense classes, 1 for the smallest value.
pub fn dense_classes(values: &[i64]) -> Vec<u32> {
    let mut distinct: Vec<i64> = values.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    values
        .iter()
        .map(|v| distinct.binary_search(v).expect("value is present") as u32 + 1)
        .collect()
}

/// Column sums and their classes.
pub fn rank_aggregate(m: &RankMatrix) -> Result<(Vec<i64>, Vec<u32>)> {
    if m.rows.is_empty() || m.schemes.is_empty() {
        return Err(Error::Malformed("rank matrix is empty".into()));
    }
    let mut sums = vec![0i64; m.schemes.len()];
    for (label, row) in &m.rows {
        if row.len() != m.schemes.len() {
            return Err(Error::MissingElement(format!("cell in row `{label}`")));
        }
        for (s, v) in sums.iter_mut().zip(row) {
            *s += v;
        }
    }
    let classes = dense_classes(&sums);
    Ok((sums, classes))
}

/// Matrix whose rows are the given class vectors, for merging tables.
pub fn class_matrix(schemes: &[String], rows: &[(&str, &[u32])]) -> RankMatrix {
    RankMatrix {
        schemes: schemes.to_vec(),
        rows: rows
            .iter()
            .map(|(l, r)| (l.to_string(), r.iter().map(|&c| i64::from(c)).collect()))
            .collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Property {
    /// Needs a cheap Encrypt.
    MultiRecipient,
    /// Needs a cheap Extract.
    Threshold,
    /// Needs Extract and Encrypt both cheap; ranked on their sum.
    Hierarchical,
}

impl Property {
    pub const ALL: [Property; 3] = [Property::MultiRecipient, Property::Threshold, Property::Hierarchical];

    pub fn name(self) -> &'static str {
        match self {
            Property::MultiRecipient => "multi_recipient",
            Property::Threshold => "threshold",
            Property::Hierarchical => "hierarchical",
        }
    }
}

/// Property rows from the per-phase efficiency ranks.
pub fn property_rank(efficiency: &RankMatrix, criteria: &[Property]) -> Result<RankMatrix> {
    let extract = efficiency.row("extract")?;
    let encrypt = efficiency.row("encrypt")?;
    let rows = criteria
        .iter()
        .map(|p| {
            let row = match p {
                Property::MultiRecipient => encrypt.to_vec(),
                Property::Threshold => extract.to_vec(),
                Property::Hierarchical => {
                    let sum: Vec<i64> = extract.iter().zip(encrypt).map(|(a, b)| a + b).collect();
                    dense_classes(&sum).into_iter().map(i64::from).collect()
                }
            };
            (p.name().to_string(), row)
        })
        .collect();
    Ok(RankMatrix {
        schemes: efficiency.schemes.clone(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_share_the_better_class() {
        assert_eq!(dense_classes(&[4, 6, 9, 9, 5, 9]), vec![1, 3, 4, 4, 2, 4]);
        assert_eq!(dense_classes(&[7]), vec![1]);
    }

    #[test]
    fn short_row_is_a_parse_error() {
        let e = RankFile::parse("c,A,B\nx,1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn empty_matrix_is_refused() {
        let m = RankFile::parse("c,A,B\n").unwrap().matrix;
        assert!(rank_aggregate(&m).is_err());
    }
}
