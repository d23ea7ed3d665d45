//! Timing harness: median wall time of each solver per size, with a
//! checksum of the first result entry so competing methods can be compared.

use std::fs::File;
use std::io::{self, Write};
use std::time::{Duration, Instant};

use clap::{Args, ValueEnum};
use log::info;

use ruinwalk::exact::{canonical, parse_rational, to_f64};
use ruinwalk::gr1d::{self, Ruin1DProblem, StepDistribution};
use ruinwalk::gr2d::{self, Probs2D, Ruin2DProblem};

use crate::{CliError, CliResult};

const KMET_DIGITS: u32 = 9;
const KMET_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Gr1d,
    Gr2d,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Step table for the gr1d suite
    #[arg(long, default_value = r#"[[-1,"1/3"],[1,"1/3"],[2,"1/3"]]"#)]
    table: String,
    /// "pL,pU,pR,pB" for the gr2d suite; defaults to 1/4 each
    #[arg(long)]
    probs: Option<String>,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    repeats: u32,
    /// Largest M for which the dense 2D solver is also timed
    #[arg(long, default_value_t = 12)]
    dense_limit: usize,
    /// CSV destination; stdout when absent
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub family: &'static str,
    pub size: usize,
    pub wall_time: f64,
    pub checksum: String,
}

/// Median over `repeats` sequential runs; the checksum comes from the last run.
fn measure<F>(repeats: u32, mut solve: F) -> CliResult<(f64, String)>
where
    F: FnMut() -> ruinwalk::Result<String>,
{
    let mut times = Vec::with_capacity(repeats as usize);
    let mut checksum = String::new();
    for _ in 0..repeats {
        let start = Instant::now();
        checksum = solve()?;
        times.push(start.elapsed().max(Duration::from_nanos(1)));
    }
    times.sort();
    Ok((times[times.len() / 2].as_secs_f64(), checksum))
}

fn record(records: &mut Vec<BenchRecord>, family: &'static str, size: usize, timed: (f64, String)) {
    info!("{family} size {size}: {:.6}s", timed.0);
    records.push(BenchRecord { family, size, wall_time: timed.0, checksum: timed.1 });
}

pub fn run_suite(args: &BenchArgs) -> CliResult<Vec<BenchRecord>> {
    let mut records = Vec::new();
    match args.suite {
        Suite::Gr1d => {
            let dist = StepDistribution::from_json(&args.table)?;
            for &n in &args.sizes {
                let problem = Ruin1DProblem::new(n, dist.clone())?;
                let dense = measure(args.repeats, || gr1d::duration_dense(&problem).map(|p| canonical(p.get(1))))?;
                let reduced = measure(args.repeats, || gr1d::duration_reduced(&problem).map(|p| canonical(p.get(1))))?;
                if dense.1 != reduced.1 {
                    return Err(CliError::Compute(format!("checksums disagree at N = {n}: dense {} vs reduced {}", dense.1, reduced.1)));
                }
                record(&mut records, "gr1d-dense", n, dense);
                record(&mut records, "gr1d-reduced", n, reduced);
            }
        }
        Suite::Gr2d => {
            let probs = match &args.probs {
                Some(text) => Probs2D::parse(text)?,
                None => Probs2D::equal(),
            };
            for &m in &args.sizes {
                let problem = Ruin2DProblem::new(m, m, probs.clone())?;
                let reduced = measure(args.repeats, || gr2d::duration2d_reduced(&problem).map(|g| canonical(g.get(1, 1))))?;
                if m <= args.dense_limit {
                    let dense = measure(args.repeats, || gr2d::duration2d_dense(&problem).map(|g| canonical(g.get(1, 1))))?;
                    if dense.1 != reduced.1 {
                        return Err(CliError::Compute(format!(
                            "checksums disagree at M = {m}: dense {} vs reduced {}",
                            dense.1, reduced.1
                        )));
                    }
                    record(&mut records, "gr2d-dense", m, dense);
                }
                if probs.is_equal() {
                    let kmet = measure(args.repeats, || gr2d::kmet_grid(m, KMET_DIGITS).map(|g| g.get(1, 1).format(KMET_DIGITS + 3)))?;
                    let exact = to_f64(&parse_rational(&reduced.1)?);
                    let approx: f64 = kmet.1.parse().map_err(|_| CliError::Compute(format!("bad kmet checksum {}", kmet.1)))?;
                    if (exact - approx).abs() > KMET_TOLERANCE * exact.abs().max(1.0) {
                        return Err(CliError::Compute(format!("checksums disagree at M = {m}: reduced {exact} vs kmet {approx}")));
                    }
                    record(&mut records, "kmet", m, kmet);
                }
                record(&mut records, "gr2d-reduced", m, reduced);
            }
        }
    }
    Ok(records)
}

pub fn write_csv(records: &[BenchRecord], out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "family,size,wall_time_s,checksum")?;
    for r in records {
        writeln!(out, "{},{},{},{}", r.family, r.size, r.wall_time, r.checksum)?;
    }
    Ok(())
}

/// `baseline / reduced` for every size where both were timed.
pub fn speedups(records: &[BenchRecord], baseline: &str, reduced: &str) -> Vec<(usize, f64)> {
    records
        .iter()
        .filter(|r| r.family == reduced)
        .filter_map(|r| {
            let base = records.iter().find(|b| b.family == baseline && b.size == r.size)?;
            Some((r.size, base.wall_time / r.wall_time))
        })
        .collect()
}

pub fn cmd_bench(args: &BenchArgs) -> CliResult<()> {
    let records = run_suite(args)?;
    match &args.out {
        Some(path) => write_csv(&records, &mut File::create(path)?)?,
        None => write_csv(&records, &mut io::stdout().lock())?,
    }
    let pairs: &[(&str, &str)] = match args.suite {
        Suite::Gr1d => &[("gr1d-dense", "gr1d-reduced")],
        Suite::Gr2d => &[("gr2d-dense", "gr2d-reduced"), ("kmet", "gr2d-reduced")],
    };
    for (baseline, reduced) in pairs {
        for (size, ratio) in speedups(&records, baseline, reduced) {
            eprintln!("speedup {reduced} vs {baseline} at {size}: {ratio:.2}x");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(family: &'static str, size: usize, wall_time: f64) -> BenchRecord {
        BenchRecord { family, size, wall_time, checksum: "1".into() }
    }

    #[test]
    fn speedup_pairs_by_size() {
        let records = [rec("gr1d-dense", 10, 2.0), rec("gr1d-reduced", 10, 0.5), rec("gr1d-reduced", 20, 1.0)];
        assert_eq!(speedups(&records, "gr1d-dense", "gr1d-reduced"), vec![(10, 4.0)]);
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_csv(&[rec("kmet", 3, 0.25)], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "family,size,wall_time_s,checksum\nkmet,3,0.25,1\n");
    }

    #[test]
    fn small_suites_agree() {
        let args =
            BenchArgs { suite: Suite::Gr2d, sizes: vec![4], table: String::new(), probs: None, repeats: 1, dense_limit: 12, out: None };
        let records = run_suite(&args).unwrap();
        let families: Vec<_> = records.iter().map(|r| r.family).collect();
        assert_eq!(families, ["gr2d-dense", "kmet", "gr2d-reduced"]);
        assert!(records.iter().all(|r| r.wall_time > 0.0));
    }
}
