//! The pipeline steps behind each subcommand. Every step reads and writes
//! files in the run's output directory, so steps can be rerun separately.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use polyvem_core::datasets::Generator;
use polyvem_core::indicator::quality_report;
use polyvem_core::mesh::validate;
use polyvem_core::metrics::{aggregate_all, mesh_metrics, MetricId};
use polyvem_core::perf::{analyze, ground_truth, log_log_slope, AnalysisOptions};
use polyvem_core::stats::{correlation_study, CorrelationMatrix, HIGH_CORRELATION, LOW_CORRELATION};
use polyvem_core::Mesh;

use crate::config::RunConfig;
use crate::polymesh;
use crate::svg::{Plot, Scale, Series};
use crate::table::{self, fmt_f64, Table};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    /// Invalid mesh, missing input or bad configuration.
    #[error("{0}")]
    Validation(String),
    /// Assembly or linear solve failed.
    #[error("{0}")]
    Solver(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

fn core_error(context: String, e: polyvem_core::Error) -> CliError {
    use polyvem_core::Error as E;
    let msg = format!("{context}: {e}");
    match e {
        E::ElementConditioning { .. } | E::NotPositiveDefinite { .. } | E::NoConvergence { .. } | E::Undefined(_) | E::Dimension { .. } => {
            CliError::Solver(msg)
        }
        _ => CliError::Validation(msg),
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub const METRICS_ELEMENTS: &str = "metrics_elements.csv";
pub const METRICS_SUMMARY: &str = "metrics_summary.csv";
pub const SOLVE: &str = "solve.csv";
pub const INDICATOR: &str = "indicator.csv";
pub const SUMMARY: &str = "summary.md";

pub fn correlation_file(k: usize) -> String {
    format!("correlation_k{k}.csv")
}

/// `<dataset>_<level>.poly`; `:` in parametric ids becomes `-`.
pub fn mesh_file(out: &Path, g: Generator, level: usize) -> PathBuf {
    out.join(format!("{}_{level}.poly", g.to_string().replace(':', "-")))
}

/// The command line that produces the inputs of a later step.
fn producer(cfg: &RunConfig, command: &str) -> String {
    let datasets: Vec<String> = cfg.datasets.iter().map(Generator::to_string).collect();
    let mut s = format!(
        "polyvem {command} --dataset {} --levels {}..{} --out {}",
        datasets.join(","),
        cfg.levels.0,
        cfg.levels.1,
        cfg.out.display()
    );
    if command == "solve" {
        let ks: Vec<String> = cfg.ks.iter().map(usize::to_string).collect();
        let _ = write!(s, " --k {} --stab {}", ks.join(","), cfg.stabilization);
    }
    s
}

fn runs(cfg: &RunConfig) -> impl Iterator<Item = (Generator, usize)> + '_ {
    cfg.datasets.iter().flat_map(move |&g| cfg.level_range().map(move |n| (g, n)))
}

fn prepare_out(cfg: &RunConfig) -> Result<(), CliError> {
    fs::create_dir_all(&cfg.out).map_err(|e| io_error(&cfg.out, e))?;
    let path = cfg.out.join(format!("{}.cfg", cfg.command));
    fs::write(&path, cfg.dump()).map_err(|e| io_error(&path, e))
}

fn check_valid(mesh: &Mesh, what: &str) -> Result<(), CliError> {
    let violations = validate(mesh);
    match violations.first() {
        None => Ok(()),
        Some(v) => Err(CliError::Validation(format!(
            "{what}: invalid mesh ({} violation(s), first: {v:?})",
            violations.len()
        ))),
    }
}

fn load_mesh(cfg: &RunConfig, g: Generator, level: usize) -> Result<Mesh, CliError> {
    let path = mesh_file(&cfg.out, g, level);
    if !path.exists() {
        return Err(CliError::Validation(format!(
            "missing mesh {}; run `{}` first",
            path.display(),
            producer(cfg, "generate")
        )));
    }
    let mesh = polymesh::load(&path, level).map_err(|e| CliError::Validation(e.to_string()))?;
    check_valid(&mesh, &path.display().to_string())?;
    Ok(mesh)
}

pub fn generate(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    prepare_out(cfg)?;
    let mut written = Vec::new();
    for (g, n) in runs(cfg) {
        let mesh = g.generate(n, cfg.seed).map_err(|e| core_error(format!("{g} level {n}"), e))?;
        check_valid(&mesh, &format!("{g} level {n}"))?;
        let path = mesh_file(&cfg.out, g, n);
        polymesh::save(&mesh, &path).map_err(|e| CliError::Io(e.to_string()))?;
        written.push(path);
    }
    Ok(written)
}

pub fn metrics(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    prepare_out(cfg)?;
    let mut header = vec!["dataset", "level", "element"];
    header.extend(MetricId::ALL.map(MetricId::name));
    let (mut elements, mut summary) = (Vec::new(), Vec::new());
    for (g, n) in runs(cfg) {
        let mesh = load_mesh(cfg, g, n)?;
        let per = mesh_metrics(&mesh).map_err(|e| core_error(format!("{g} level {n}"), e))?;
        for (e, m) in per.iter().enumerate() {
            let mut row = vec![g.to_string(), n.to_string(), e.to_string()];
            row.extend(MetricId::ALL.map(|id| fmt_f64(m.get(id))));
            elements.push(row);
        }
        for mm in aggregate_all(&per).map_err(|e| core_error(format!("{g} level {n}"), e))? {
            summary.push(vec![
                g.to_string(),
                n.to_string(),
                mm.metric.name().to_string(),
                mm.aggregation.name().to_string(),
                fmt_f64(mm.value),
            ]);
        }
    }
    let (pe, ps) = (cfg.out.join(METRICS_ELEMENTS), cfg.out.join(METRICS_SUMMARY));
    table::write(&pe, &header, &elements)?;
    table::write(&ps, &["dataset", "level", "metric", "aggregation", "value"], &summary)?;
    Ok(vec![pe, ps])
}

pub const SOLVE_HEADER: [&str; 19] = [
    "dataset",
    "level",
    "k",
    "stabilization",
    "dofs",
    "h_max",
    "h_av",
    "P1",
    "P2",
    "P3",
    "P4",
    "P5",
    "P6",
    "P7",
    "P8",
    "log10_cond_g",
    "log10_cond_h",
    "log10_pi_nabla_discrepancy",
    "log10_pi0_discrepancy",
];

pub fn solve(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    prepare_out(cfg)?;
    let problem = ground_truth(cfg.test);
    let opts = AnalysisOptions {
        conditioning: !cfg.quick,
        diagnostics: !cfg.quick,
    };
    let mut rows = Vec::new();
    for (g, n) in runs(cfg) {
        let mesh = load_mesh(cfg, g, n)?;
        for &k in &cfg.ks {
            if !(1..=3).contains(&k) {
                return Err(CliError::Validation(format!("k = {k} is not in 1..=3")));
            }
            let r = analyze(&mesh, cfg.vem(k), &problem, opts).map_err(|e| core_error(format!("{g} level {n}, k = {k}"), e))?;
            let d = &r.diagnostics;
            // Diagnostics are reported as log10, like the condition numbers.
            let diag = if cfg.quick {
                [f64::NAN; 4]
            } else {
                [d.max_cond_g, d.max_cond_h, d.max_pi_nabla_discrepancy, d.max_pi0_discrepancy].map(f64::log10)
            };
            let mut row = vec![
                g.to_string(),
                n.to_string(),
                k.to_string(),
                cfg.stabilization.to_string(),
                r.dof_count.to_string(),
                fmt_f64(r.h_max),
                fmt_f64(r.h_av),
            ];
            row.extend(r.indexes().map(fmt_f64));
            row.extend(diag.map(fmt_f64));
            rows.push(row);
        }
    }
    let path = cfg.out.join(SOLVE);
    table::write(&path, &SOLVE_HEADER, &rows)?;
    Ok(vec![path])
}

pub fn indicator(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    prepare_out(cfg)?;
    let mut rows = Vec::new();
    for (g, n) in runs(cfg) {
        let mesh = load_mesh(cfg, g, n)?;
        let q = quality_report(&mesh).map_err(|e| core_error(format!("{g} level {n}"), e))?;
        let mut row = vec![g.to_string(), n.to_string()];
        row.extend(q.means().map(fmt_f64));
        row.push(fmt_f64(q.rho));
        rows.push(row);
    }
    let path = cfg.out.join(INDICATOR);
    table::write(&path, &["dataset", "level", "rho1", "rho2", "rho3", "rho4", "rho"], &rows)?;
    Ok(vec![path])
}

type RunKey = (String, usize);

/// Aggregated metrics keyed by run, each as `METRIC_aggregation -> value`.
fn read_metric_summary(cfg: &RunConfig) -> Result<BTreeMap<RunKey, BTreeMap<String, f64>>, CliError> {
    let t = Table::read(&cfg.out.join(METRICS_SUMMARY), &producer(cfg, "metrics"))?;
    let [d, l, m, a, v] = ["dataset", "level", "metric", "aggregation", "value"].map(|c| t.column(c));
    let (d, l, m, a, v) = (d?, l?, m?, a?, v?);
    let mut out: BTreeMap<RunKey, BTreeMap<String, f64>> = BTreeMap::new();
    for row in &t.rows {
        let key = (t.str(row, d).to_string(), t.usize(row, l)?);
        out.entry(key)
            .or_default()
            .insert(format!("{}_{}", t.str(row, m), t.str(row, a)), t.f64(row, v)?);
    }
    Ok(out)
}

/// One solve row: run, k, P1..P8 and the remaining numeric columns by name.
#[derive(Debug, Clone)]
struct SolveRow {
    run: RunKey,
    k: usize,
    values: BTreeMap<String, f64>,
}

fn read_solve(cfg: &RunConfig) -> Result<Vec<SolveRow>, CliError> {
    let t = Table::read(&cfg.out.join(SOLVE), &producer(cfg, "solve"))?;
    let cols: Vec<usize> = SOLVE_HEADER.iter().map(|c| t.column(c)).collect::<Result<_, _>>()?;
    let wanted: Vec<String> = cfg.datasets.iter().map(Generator::to_string).collect();
    let mut out = Vec::new();
    for row in &t.rows {
        let dataset = t.str(row, cols[0]).to_string();
        let level = t.usize(row, cols[1])?;
        let k = t.usize(row, cols[2])?;
        let stab = t.str(row, cols[3]);
        if !wanted.contains(&dataset) || !cfg.level_range().contains(&level) || !cfg.ks.contains(&k) || stab != cfg.stabilization.name() {
            continue;
        }
        let mut values = BTreeMap::new();
        for (name, &c) in SOLVE_HEADER.iter().zip(&cols).skip(4) {
            values.insert(name.to_string(), t.f64(row, c)?);
        }
        out.push(SolveRow {
            run: (dataset, level),
            k,
            values,
        });
    }
    if out.is_empty() {
        return Err(CliError::Validation(format!(
            "{} has no rows for this selection; run `{}` first",
            t.path,
            producer(cfg, "solve")
        )));
    }
    Ok(out)
}

const INDEX_NAMES: [&str; 8] = ["P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8"];

fn correlation_for(cfg: &RunConfig, k: usize, solve: &[SolveRow], metrics: &BTreeMap<RunKey, BTreeMap<String, f64>>) -> Result<CorrelationMatrix, CliError> {
    let rows: Vec<&SolveRow> = solve.iter().filter(|r| r.k == k).collect();
    let mut metric_names: Vec<String> = Vec::new();
    for r in &rows {
        let m = metrics.get(&r.run).ok_or_else(|| {
            CliError::Validation(format!(
                "no metrics for {} level {}; run `{}` first",
                r.run.0,
                r.run.1,
                producer(cfg, "metrics")
            ))
        })?;
        if metric_names.is_empty() {
            metric_names = m.keys().cloned().collect();
        }
    }
    let series_rows: Vec<(String, Vec<f64>)> = metric_names
        .iter()
        .map(|name| (name.clone(), rows.iter().map(|r| metrics[&r.run].get(name).copied().unwrap_or(f64::NAN)).collect()))
        .collect();
    let columns: Vec<(String, Vec<f64>)> = INDEX_NAMES
        .iter()
        .map(|p| (p.to_string(), rows.iter().map(|r| r.values[*p]).collect()))
        .collect();
    correlation_study(&series_rows, &columns).map_err(|e| CliError::Validation(format!("correlation for k = {k}: {e}")))
}

pub fn correlate(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    prepare_out(cfg)?;
    let metrics = read_metric_summary(cfg)?;
    let solve = read_solve(cfg)?;
    let mut written = Vec::new();
    for &k in &cfg.ks {
        let m = correlation_for(cfg, k, &solve, &metrics)?;
        let mut header = vec!["metric"];
        header.extend(m.columns.iter().map(String::as_str));
        let rows: Vec<Vec<String>> = m
            .rows
            .iter()
            .zip(&m.values)
            .map(|(name, vals)| {
                let mut row = vec![name.clone()];
                row.extend(vals.iter().map(|v| v.map(fmt_f64).unwrap_or_default()));
                row
            })
            .collect();
        let path = cfg.out.join(correlation_file(k));
        table::write(&path, &header, &rows)?;
        written.push(path);
    }
    Ok(written)
}

fn read_correlation(path: &Path) -> Result<Option<CorrelationMatrix>, CliError> {
    if !path.exists() {
        return Ok(None);
    }
    let t = Table::read(path, "polyvem correlate")?;
    let values = t
        .rows
        .iter()
        .map(|r| r[1..].iter().map(|v| v.parse().ok()).collect())
        .collect();
    Ok(Some(CorrelationMatrix {
        rows: t.rows.iter().map(|r| r[0].clone()).collect(),
        columns: t.header[1..].to_vec(),
        values,
    }))
}

fn write_file(path: PathBuf, text: &str, written: &mut Vec<PathBuf>) -> Result<(), CliError> {
    fs::write(&path, text).map_err(|e| io_error(&path, e))?;
    written.push(path);
    Ok(())
}

fn slope_cell(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |s| format!("{s:.3}"))
}

pub fn report(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    prepare_out(cfg)?;
    let svg = cfg.formats.iter().any(|f| f == "svg");
    let csv = cfg.formats.iter().any(|f| f == "csv");
    if let Some(f) = cfg.formats.iter().find(|f| *f != "svg" && *f != "csv") {
        return Err(CliError::Validation(format!("unknown format '{f}' (csv, svg)")));
    }
    let solve = read_solve(cfg)?;
    let ind = Table::read(&cfg.out.join(INDICATOR), &producer(cfg, "indicator"))?;
    let mut written = Vec::new();
    let mut md = String::from("# Run summary\n\n");
    let _ = writeln!(
        md,
        "Test `{}`, stabilization `{}`, levels {}..{}, k = {:?}.\n",
        cfg.test.name(),
        cfg.stabilization,
        cfg.levels.0,
        cfg.levels.1,
        cfg.ks
    );

    // Convergence: one plot per dataset and order, slopes fitted against h_av.
    md.push_str("## Convergence slopes (least squares in log-log, against h_av)\n\n| dataset | k | P1 slope | P3 slope | finest P1 |\n|---|---|---|---|---|\n");
    let mut slope_rows = Vec::new();
    for g in &cfg.datasets {
        let name = g.to_string();
        for &k in &cfg.ks {
            let mut pts: Vec<&SolveRow> = solve.iter().filter(|r| r.run.0 == name && r.k == k).collect();
            if pts.is_empty() {
                continue;
            }
            pts.sort_by_key(|r| r.run.1);
            let h: Vec<f64> = pts.iter().map(|r| r.values["h_av"]).collect();
            let p1: Vec<f64> = pts.iter().map(|r| r.values["P1"]).collect();
            let p3: Vec<f64> = pts.iter().map(|r| r.values["P3"]).collect();
            let fit = |y: &[f64]| if pts.len() > 1 { log_log_slope(&h, y).ok() } else { None };
            let (s1, s3) = (fit(&p1), fit(&p3));
            let _ = writeln!(md, "| {name} | {k} | {} | {} | {:.3e} |", slope_cell(s1), slope_cell(s3), p1[p1.len() - 1]);
            slope_rows.push(vec![
                name.clone(),
                k.to_string(),
                s1.map(fmt_f64).unwrap_or_default(),
                s3.map(fmt_f64).unwrap_or_default(),
            ]);
            if svg && pts.len() > 1 {
                let plot = Plot {
                    title: format!("{name}, k = {k}"),
                    x_label: "h_av".into(),
                    y_label: "relative error".into(),
                    x_scale: Scale::Log,
                    y_scale: Scale::Log,
                    series: vec![
                        Series {
                            label: "P1 (energy)".into(),
                            points: h.iter().copied().zip(p1.iter().copied()).collect(),
                            line: true,
                        },
                        Series {
                            label: "P3 (L2)".into(),
                            points: h.iter().copied().zip(p3.iter().copied()).collect(),
                            line: true,
                        },
                    ],
                    slopes: vec![k as f64, k as f64 + 1.0],
                };
                let file = format!("convergence_{}_k{k}.svg", name.replace(':', "-"));
                write_file(cfg.out.join(file), &plot.render(), &mut written)?;
            }
        }
    }
    if csv {
        let path = cfg.out.join("slopes.csv");
        table::write(&path, &["dataset", "k", "slope_P1", "slope_P3"], &slope_rows)?;
        written.push(path);
    }

    // Quality indicator per level.
    let (d, l, r) = (ind.column("dataset")?, ind.column("level")?, ind.column("rho")?);
    md.push_str("\n## Quality indicator\n\n| dataset | level | rho |\n|---|---|---|\n");
    let mut rho_series = Vec::new();
    for g in &cfg.datasets {
        let name = g.to_string();
        let mut pts = Vec::new();
        for row in ind.rows.iter().filter(|row| ind.str(row, d) == name) {
            let level = ind.usize(row, l)?;
            if cfg.level_range().contains(&level) {
                let rho = ind.f64(row, r)?;
                let _ = writeln!(md, "| {name} | {level} | {rho:.4} |");
                pts.push((level as f64, rho));
            }
        }
        if !pts.is_empty() {
            rho_series.push(Series {
                label: name,
                points: pts,
                line: true,
            });
        }
    }
    if svg && !rho_series.is_empty() {
        let plot = Plot {
            title: "Quality indicator".into(),
            x_label: "level".into(),
            y_label: "rho".into(),
            x_scale: Scale::Linear,
            y_scale: Scale::Linear,
            series: rho_series,
            slopes: vec![],
        };
        write_file(cfg.out.join("indicator.svg"), &plot.render(), &mut written)?;
    }

    // Metric vs performance scatter plots, when metrics were computed.
    if svg && cfg.out.join(METRICS_SUMMARY).exists() {
        let metrics = read_metric_summary(cfg)?;
        for &k in &cfg.ks {
            for (metric, index, x_scale) in [("NS_max", "P6", Scale::Linear), ("SR_min", "P1", Scale::Linear), ("CR_min", "P4", Scale::Log)] {
                let points: Vec<(f64, f64)> = solve
                    .iter()
                    .filter(|r| r.k == k)
                    .filter_map(|r| Some((*metrics.get(&r.run)?.get(metric)?, r.values[index])))
                    .collect();
                if points.is_empty() {
                    continue;
                }
                let plot = Plot {
                    title: format!("{metric} vs {index}, k = {k}"),
                    x_label: metric.into(),
                    y_label: index.into(),
                    x_scale,
                    y_scale: Scale::Log,
                    series: vec![Series {
                        label: format!("{} runs", points.len()),
                        points,
                        line: false,
                    }],
                    slopes: vec![],
                };
                write_file(cfg.out.join(format!("scatter_{metric}_{index}_k{k}.svg")), &plot.render(), &mut written)?;
            }
        }
    }

    // Correlation highlights, when the correlate step ran.
    for &k in &cfg.ks {
        if let Some(m) = read_correlation(&cfg.out.join(correlation_file(k)))? {
            let _ = writeln!(md, "\n## Correlations, k = {k}\n");
            let _ = writeln!(md, "Strong (|rho| > {HIGH_CORRELATION}):\n");
            let high = m.high();
            if high.is_empty() {
                md.push_str("- none\n");
            }
            for (a, b, v) in high {
                let _ = writeln!(md, "- {a} / {b}: {v:.3}");
            }
            let _ = writeln!(md, "\nNone (|rho| < {LOW_CORRELATION}):\n");
            let low = m.low();
            if low.is_empty() {
                md.push_str("- none\n");
            }
            for (a, b, v) in low {
                let _ = writeln!(md, "- {a} / {b}: {v:.3}");
            }
        }
    }
    write_file(cfg.out.join(SUMMARY), &md, &mut written)?;
    Ok(written)
}

pub fn run(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    match cfg.command.as_str() {
        "generate" => generate(cfg),
        "metrics" => metrics(cfg),
        "solve" => solve(cfg),
        "indicator" => indicator(cfg),
        "correlate" => correlate(cfg),
        "report" => report(cfg),
        other => Err(CliError::Validation(format!("unknown command '{other}'"))),
    }
}
