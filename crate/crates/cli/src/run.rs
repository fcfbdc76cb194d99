//! Executes a `RunConfig` and renders its report lines.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sperner_core::coloring::VertexColoring;
use sperner_core::solver::{find_solutions, SolveError};
use sperner_core::sweep::{conjecture_sweep, SweepError, SweepLog};
use sperner_core::verify::proof_map_suite;
use sperner_core::winding::{boundary_winding, WindingError};
use sperner_core::{ColoringSpec, PartitionComplex, SizeVector};

use crate::config::{Params, RunConfig};
use crate::Failure;

/// Report lines after the two header lines, plus a one-line human summary.
pub struct Report {
    pub records: Vec<String>,
    pub summary: String,
    /// Set when the run completed but must exit nonzero.
    pub failure: Option<Failure>,
}

fn line<T: Serialize>(key: &str, value: T) -> String {
    serde_json::to_string(&json!({ key: value })).expect("records serialize")
}

pub fn timestamp_line() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    line("timestamp_unix", secs)
}

pub fn header_line(config: &RunConfig) -> String {
    line("run_config", config)
}

/// Parses the run config from a header line.
pub fn parse_header(text: &str) -> Option<RunConfig> {
    let value: Value = serde_json::from_str(text).ok()?;
    serde_json::from_value(value.get("run_config")?.clone()).ok()
}

fn complex(n: usize, r: u32) -> Result<PartitionComplex, Failure> {
    PartitionComplex::build(n, r).map_err(|e| Failure::Usage(e.to_string()))
}

fn colorings(k: &PartitionComplex, specs: &[ColoringSpec]) -> Result<Vec<VertexColoring>, Failure> {
    specs
        .iter()
        .map(|s| s.coloring(k).map_err(|e| Failure::Usage(e.to_string())))
        .collect()
}

fn build(n: usize, r: u32) -> Result<Report, Failure> {
    let k = complex(n, r)?;
    let summary = json!({
        "n": n,
        "r": r,
        "vertices": k.complex().vertices().len(),
        "facets": k.facets().len(),
        "faces": k.complex().len(),
    });
    Ok(Report {
        records: vec![line("complex", k.to_document()), line("summary", &summary)],
        summary: summary.to_string(),
        failure: None,
    })
}

fn solve(
    n: usize,
    r: u32,
    m: &SizeVector,
    specs: &[ColoringSpec],
    mode: sperner_core::solver::SearchMode,
) -> Result<Report, Failure> {
    let k = complex(n, r)?;
    let cs = colorings(&k, specs)?;
    let mut records: Vec<String> = specs
        .iter()
        .zip(&cs)
        .enumerate()
        .map(|(index, (spec, c))| {
            line("coloring", json!({ "index": index + 1, "spec": spec, "colors": c.to_document().assignment }))
        })
        .collect();
    let search = match find_solutions(&k, &cs, m, mode) {
        Ok(search) => search,
        Err(SolveError::NoSolution(bundle)) => {
            let bundle = bundle.with_schemes(specs);
            records.push(line("theorem_violation", &bundle));
            return Ok(Report {
                records,
                summary: "no face satisfies the size condition; reproduction bundle written".into(),
                failure: Some(Failure::NoSolution("theorem violation".into())),
            });
        }
        Err(e) => return Err(Failure::Usage(e.to_string())),
    };
    records.extend(search.reports.iter().map(|r| line("solution", r)));
    let mut shapes = std::collections::BTreeMap::<String, usize>::new();
    for r in search.full_reports() {
        let shape = serde_json::to_value(r.tree_shape).expect("shapes serialize");
        *shapes.entry(shape.as_str().unwrap_or_default().to_string()).or_default() += 1;
    }
    let summary = json!({
        "theorem_instance": search.theorem_instance,
        "facets_scanned": search.facets_scanned,
        "size_solution_facets": search.size_solution_facets,
        "full_solution_facets": search.full_solution_facets,
        "minimal_faces": search.reports.len(),
        "connected_exists": search.connected_exists,
        "full_solution_shapes": shapes,
    });
    records.push(line("summary", &summary));
    Ok(Report { records, summary: summary.to_string(), failure: None })
}

struct MapsParams<'a> {
    samples: u64,
    seed: u64,
    n: usize,
    r: u32,
    m: &'a SizeVector,
    schemes: &'a [ColoringSpec],
}

fn verify_maps(p: MapsParams<'_>, trace: Option<(&Path, &[String])>) -> Result<Report, Failure> {
    let checks = proof_map_suite(p.samples, p.seed);
    let mut records: Vec<String> = checks.iter().map(|c| line("property", c)).collect();
    let mut failed: Vec<String> =
        checks.iter().filter(|c| !c.pass).map(|c| c.property.clone()).collect();

    let k = complex(p.n, p.r)?;
    let cs = colorings(&k, p.schemes)?;
    let winding = match boundary_winding(&k, &cs, p.m) {
        Ok(report) => {
            if report.winding != 1 || report.refined_winding != report.winding {
                failed.push("boundary winding".into());
            }
            if let Some((path, header)) = trace {
                let mut text = header.join("\n");
                for point in &report.trace {
                    text.push('\n');
                    text.push_str(&serde_json::to_string(point).expect("trace serializes"));
                }
                text.push('\n');
                fs::write(path, text).map_err(Failure::Io)?;
            }
            json!({
                "winding": report.winding,
                "refined_winding": report.refined_winding,
                "depth": report.depth,
                "boundary_edges": report.boundary_edges,
                "max_step": report.max_step,
                "trace_points": report.trace.len(),
            })
        }
        Err(WindingError::BoundarySolutionFound(face)) => {
            log::info!("boundary face is a size solution; winding not defined");
            json!({ "boundary_solution": face })
        }
        Err(e @ (WindingError::NotTriangle(_) | WindingError::BadSizes(_))) => {
            log::info!("winding check skipped: {e}");
            json!({ "skipped": e.to_string() })
        }
        Err(e) => {
            failed.push("boundary winding".into());
            json!({ "error": e.to_string() })
        }
    };
    records.push(line("winding", &winding));

    let summary = json!({
        "properties": checks.len(),
        "failed": failed,
        "roundtrip_worst": checks[0].worst,
        "winding": winding.get("winding"),
    });
    records.push(line("summary", &summary));
    let failure = (!failed.is_empty())
        .then(|| Failure::Property(format!("failed: {}", failed.join(", "))));
    Ok(Report { records, summary: summary.to_string(), failure })
}

/// Where the sweep log lives: `out`, or a scratch file echoed to stdout.
fn sweep(
    config: &RunConfig,
    grid: &sperner_core::sweep::SweepGrid,
    header: &[String],
    out: Option<&Path>,
) -> Result<Report, Failure> {
    let scratch = out.is_none().then(|| {
        std::env::temp_dir().join(format!("sperner-lab-sweep-{}.jsonl", std::process::id()))
    });
    let path: PathBuf = out.map(Path::to_path_buf).or(scratch.clone()).expect("one of the two");
    if let Some(s) = &scratch {
        let _ = fs::remove_file(s);
    }

    if path.exists() && fs::metadata(&path).map_err(Failure::Io)?.len() > 0 {
        let text = fs::read_to_string(&path).map_err(Failure::Io)?;
        let recorded = text.lines().nth(1).and_then(parse_header);
        match recorded {
            Some(r) if r.params == config.params => log::info!("resuming {}", path.display()),
            _ => {
                return Err(Failure::Usage(format!(
                    "{} holds a different run; choose another --out",
                    path.display()
                )))
            }
        }
    } else {
        fs::write(&path, format!("{}\n", header.join("\n"))).map_err(Failure::Io)?;
    }

    let mut log = SweepLog::open(&path).map_err(Failure::Io)?;
    let result = conjecture_sweep(grid, config.jobs, Some(&mut log));
    let records = match &scratch {
        Some(s) => {
            let text = fs::read_to_string(s).map_err(Failure::Io)?;
            let _ = fs::remove_file(s);
            text.lines().skip(header.len()).map(str::to_string).collect()
        }
        None => Vec::new(),
    };
    match result {
        Ok(summary) => {
            let text = json!({
                "instances": summary.instances,
                "resumed": summary.resumed,
                "evaluated": summary.evaluated,
                "without_full_solution": summary.without_full_solution,
                "candidates": summary.candidates.len(),
            });
            for c in &summary.candidates {
                log::warn!("candidate: {}", serde_json::to_string(c).expect("records serialize"));
            }
            Ok(Report { records, summary: text.to_string(), failure: None })
        }
        Err(SweepError::Solve(SolveError::NoSolution(bundle))) => Ok(Report {
            records,
            summary: line("theorem_violation", &bundle),
            failure: Some(Failure::NoSolution("theorem violation".into())),
        }),
        Err(SweepError::Io(e)) => Err(Failure::Io(e)),
        Err(e) => Err(Failure::Usage(e.to_string())),
    }
}

/// Destinations that may differ from the ones recorded in the config.
pub struct Targets {
    pub out: Option<PathBuf>,
    pub trace: Option<PathBuf>,
}

/// Runs `config` with the given header lines and writes the report.
/// Returns the full report text when it went to a file or stdout.
pub fn execute(config: &RunConfig, header: &[String], targets: &Targets) -> Result<(String, Option<Failure>), Failure> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let report = pool.install(|| match &config.params {
        Params::Build { n, r } => build(*n, *r),
        Params::Solve { n, r, m, schemes, mode } => solve(*n, *r, m, schemes, *mode),
        Params::VerifyMaps { samples, seed, n, r, m, schemes, .. } => verify_maps(
            MapsParams { samples: *samples, seed: *seed, n: *n, r: *r, m, schemes },
            targets.trace.as_deref().map(|t| (t, header)),
        ),
        Params::Sweep { grid } => sweep(config, grid, header, targets.out.as_deref()),
    })?;

    let text = match (&config.params, &targets.out) {
        (Params::Sweep { .. }, Some(out)) => fs::read_to_string(out).map_err(Failure::Io)?,
        _ => {
            let mut text = header.join("\n");
            for r in &report.records {
                text.push('\n');
                text.push_str(r);
            }
            text.push('\n');
            text
        }
    };
    match &targets.out {
        Some(out) => {
            if !matches!(config.params, Params::Sweep { .. }) {
                fs::write(out, &text).map_err(Failure::Io)?;
            }
            println!("{}", report.summary);
        }
        None => {
            std::io::stdout().write_all(text.as_bytes()).map_err(Failure::Io)?;
            eprintln!("{}", report.summary);
        }
    }
    Ok((text, report.failure))
}
