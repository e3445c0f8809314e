use std::path::PathBuf;

use clap::Args;
use ibekit::error::Result;
use ibekit::scorecard::measure::Measured;
use ibekit::scorecard::{render, DataSet, TableId};

use crate::common::{load_curve, Outcome};
use crate::Format;

#[derive(Args, Debug)]
pub struct TablesArgs {
    /// `all`, `list`, or comma-separated table names.
    #[arg(long, default_value = "all", value_delimiter = ',')]
    pub which: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Curve for the measured tables.
    #[arg(long, default_value = "bench")]
    pub profile: String,
    /// Seed for the measured tables. Counts do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Deepest HIBE level measured.
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    /// Read data files from this directory instead of the built-in copies.
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
}

pub fn run(a: &TablesArgs) -> Result<Outcome> {
    if a.which.iter().any(|w| w == "list") {
        let text = TableId::ALL.iter().map(|t| format!("{t}\n")).collect();
        return Ok(Outcome { text, ok: true });
    }
    let ids: Vec<TableId> = if a.which.iter().any(|w| w == "all") {
        TableId::ALL.to_vec()
    } else {
        a.which.iter().map(|w| w.trim().parse()).collect::<Result<_>>()?
    };
    let data = match &a.data_dir {
        Some(d) => DataSet::from_dir(d)?,
        None => DataSet::load()?,
    };
    let measured = if ids.iter().any(|t| t.needs_measurements()) {
        Some(Measured::run(&load_curve(&a.profile)?, a.seed, a.depth)?)
    } else {
        None
    };
    let mut text = String::new();
    let mut ok = true;
    for (i, id) in ids.iter().enumerate() {
        let r = render(*id, &data, measured.as_ref())?;
        ok &= r.pass != Some(false);
        if i > 0 {
            text.push('\n');
        }
        text.push_str(&match a.format {
            Format::Table => r.to_text(),
            Format::Csv => r.to_csv(),
        });
    }
    Ok(Outcome { text, ok })
}
