use std::fmt::Write as _;
use std::time::Duration;

use clap::Args;
use ibekit::error::{Error, Result};
use ibekit::ledger::{Op, Phase};
use ibekit::scorecard::measure::{measure_benchmark, measure_our, PhaseRun, OUR_LABEL};
use ibekit::scorecard::opcount::Category;
use ibekit::scorecard::{opcount_verify, DataSet, Expectations};

use crate::common::{grid, load_curve, seeded, select, Outcome, Target};
use crate::{Format, RunOpts};

/// Whole-trial restarts allowed when extraction aborts on a small curve.
const TRIAL_RESTARTS: usize = 64;

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// `all` (the six benchmark schemes and our-ibe) or a comma-separated list.
    #[arg(long, default_value = "all")]
    pub scheme: String,
    #[command(flatten)]
    pub run: RunOpts,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub trials: u32,
    /// Only report this phase.
    #[arg(long, value_parser = parse_phase)]
    pub phase: Option<Phase>,
    /// Leave out the timing column, for reproducible output.
    #[arg(long)]
    pub no_timing: bool,
}

fn parse_phase(s: &str) -> std::result::Result<Phase, String> {
    Phase::ALL
        .into_iter()
        .find(|p| p.name() == s)
        .ok_or_else(|| format!("unknown phase `{s}`; expected setup, extract, encrypt or decrypt"))
}

fn one_trial(
    t: Target,
    curve: &std::sync::Arc<ibekit::curve::Curve>,
    rng: &mut rand_chacha::ChaCha20Rng,
) -> Result<Vec<PhaseRun>> {
    for _ in 0..TRIAL_RESTARTS {
        let r = match t {
            Target::Benchmark(id) => measure_benchmark(id, curve, rng),
            Target::OurIbe => measure_our(curve, rng),
            _ => return Err(Error::Config(format!("{} has no benchmark rows", t.name()))),
        };
        match r {
            Err(Error::ExtractAbort) => continue,
            other => return other,
        }
    }
    Err(Error::ExtractAbort)
}

fn label(t: Target) -> &'static str {
    match t {
        Target::Benchmark(id) => id.label(),
        _ => OUR_LABEL,
    }
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    xs[xs.len() / 2]
}

pub fn run(a: &BenchArgs) -> Result<Outcome> {
    let curve = load_curve(&a.run.profile)?;
    let (mut rng, seed) = seeded(a.run.seed)?;
    let exp = Expectations::load(&DataSet::load()?)?;
    let targets = if a.scheme == "all" {
        let mut t = select("all")?;
        t.retain(|t| *t != Target::OurHibe);
        t
    } else {
        select(&a.scheme)?
    };
    let phases: Vec<Phase> = match a.phase {
        Some(p) => vec![p],
        None => Phase::ALL.to_vec(),
    };

    let mut header = vec!["scheme", "phase"];
    header.extend(Category::ALL.iter().map(|c| c.name()));
    header.extend(["miller_all", "mulk_all"]);
    if !a.no_timing {
        header.push("median_us");
    }
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    let mut notes = Vec::new();
    for t in targets {
        let runs: Vec<Vec<PhaseRun>> = (0..a.trials)
            .map(|_| one_trial(t, &curve, &mut rng))
            .collect::<Result<_>>()?;
        for &phase in &phases {
            let per_trial: Vec<&PhaseRun> = runs
                .iter()
                .map(|r| r.iter().find(|p| p.phase() == phase).expect("every phase is measured"))
                .collect();
            let first = per_trial[0].ledger();
            if per_trial.iter().any(|p| p.ledger().top != first.top) {
                notes.push(format!(
                    "{} {phase}: counts vary across trials; first trial shown",
                    t.name()
                ));
            }
            let mut row = vec![t.name().to_string(), phase.name().to_string()];
            row.extend(Category::ALL.iter().map(|c| c.measured(&first.top).to_string()));
            row.push(first.all.get(Op::MillerLoop).to_string());
            row.push(first.all.get(Op::MulK).to_string());
            if !a.no_timing {
                row.push(
                    median(per_trial.iter().map(|p| p.elapsed).collect())
                        .as_micros()
                        .to_string(),
                );
            }
            rows.push(row);
            reports.push(opcount_verify(&exp, label(t), phase, first)?);
        }
    }

    let mut out = String::new();
    if a.run.format == Format::Table {
        let _ = writeln!(out, "seed: {seed}");
        let _ = writeln!(out, "profile: {}", curve.name());
    }
    out.push_str(&grid(a.run.format, &header, &rows));
    let prefix = if a.run.format == Format::Csv { "# " } else { "" };
    for n in &notes {
        let _ = writeln!(out, "{prefix}note: {n}");
    }
    let mismatches = reports.iter().filter(|r| !r.is_match()).count();
    for r in &reports {
        let _ = writeln!(out, "{prefix}verify: {r}");
        for n in &r.notes {
            let _ = writeln!(out, "{prefix}  adjusted {n}");
        }
    }
    let _ = writeln!(out, "{prefix}verify: {} rows, {mismatches} mismatches", reports.len());
    Ok(Outcome {
        text: out,
        ok: mismatches == 0,
    })
}
