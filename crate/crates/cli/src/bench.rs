use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use platoon_core::instance::{load_instance, Instance};

use crate::commands::{solve_instance, BenchArgs, Method};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Deserialize)]
pub struct ManifestRow {
    pub instance: PathBuf,
    pub method: String,
    pub time_limit_s: f64,
}

pub const HEADER: [&str; 8] = ["net", "V", "Q", "TU", "method", "gap", "cpu_s", "sav"];

/// One CSV row. Failed runs keep the instance columns and leave the
/// numbers empty.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub net: String,
    #[serde(rename = "V")]
    pub v: Option<usize>,
    #[serde(rename = "Q")]
    pub q: Option<String>,
    #[serde(rename = "TU")]
    pub tu: Option<f64>,
    pub method: String,
    pub gap: Option<f64>,
    pub cpu_s: Option<f64>,
    pub sav: Option<f64>,
}

fn parse_method(name: &str) -> Result<Method> {
    <Method as clap::ValueEnum>::from_str(name, true).map_err(|_| CliError::Usage(format!("unknown method `{name}`")))
}

fn run_row(row: &ManifestRow, gamma: f64) -> BenchRow {
    let net = row.instance.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let mut out =
        BenchRow { net: net.clone(), v: None, q: None, tu: None, method: row.method.clone(), gap: None, cpu_s: None, sav: None };
    let result = (|| -> Result<_> {
        let method = parse_method(&row.method)?;
        let limit = Duration::try_from_secs_f64(row.time_limit_s)
            .map_err(|_| CliError::Usage(format!("invalid time limit {}", row.time_limit_s)))?;
        let inst: Instance<f64> = load_instance(&row.instance)?;
        out.v = Some(inst.num_vehicles());
        out.q = Some(inst.q.to_string());
        out.tu = Some(inst.time_unit);
        solve_instance(&net, &inst, method, limit, gamma, false)
    })();
    match result {
        Ok(r) => {
            out.gap = Some(r.relative_gap);
            out.cpu_s = Some(r.wall_s);
            out.sav = Some(r.saving);
        }
        Err(e) => log::warn!("{} {}: {e}", row.instance.display(), row.method),
    }
    out
}

/// Runs every manifest row, `jobs` at a time, and returns rows in manifest
/// order.
pub fn run_manifest(rows: &[ManifestRow], jobs: usize, gamma: f64) -> Vec<BenchRow> {
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<BenchRow>>> = Mutex::new(vec![None; rows.len()]);
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, rows.len().max(1)) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(row) = rows.get(k) else { break };
                let r = run_row(row, gamma);
                results.lock().expect("no worker panicked")[k] = Some(r);
            });
        }
    });
    results.into_inner().expect("no worker panicked").into_iter().map(|r| r.expect("every row ran")).collect()
}

pub fn cmd_bench(a: &BenchArgs) -> Result<()> {
    if a.jobs == 0 {
        return Err(CliError::Usage("--jobs must be positive".into()));
    }
    let base = a.manifest.parent().map(PathBuf::from).unwrap_or_default();
    let mut rows: Vec<ManifestRow> =
        csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(&a.manifest)?.deserialize().collect::<Result<_, _>>()?;
    for r in &mut rows {
        if r.instance.is_relative() {
            r.instance = base.join(&r.instance);
        }
    }
    log::info!("bench {}: {} rows, jobs={}, gamma={}", a.manifest.display(), rows.len(), a.jobs, a.gamma);
    let results = run_manifest(&rows, a.jobs, a.gamma);
    let sink: Box<dyn std::io::Write> = match &a.out {
        Some(p) => Box::new(std::fs::File::create(p)?),
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(sink);
    w.write_record(HEADER)?;
    for r in results {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
