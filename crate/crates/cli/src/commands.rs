use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use hotstart_core::{
    coefficient_distribution, ground_state, hot_start, minimize, random_initial_angles, HamiltonianFile,
    HotStartSchedule, ObjectiveFunction, OptimizationTrace, QubitHamiltonian, Status, VqeObjective,
};
use log::info;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{ExperimentConfig, Method, OrderingChoice};
use crate::error::CliError;
use crate::pipeline::{load_problem, read_hamiltonian_file, Problem};

/// Chemical accuracy in Hartree.
pub const CHEMICAL_ACCURACY: f64 = 1.6e-3;

/// 15 significant digits.
pub fn e15(x: f64) -> String {
    format!("{x:.14e}")
}

fn run_in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::runtime(e.to_string()))?;
    Ok(pool.install(f))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

/// CSV writer whose file starts with `# key = value` lines for the config.
fn csv_with_header(
    path: &Path,
    cfg: &ExperimentConfig,
    extra: &[(&str, String)],
) -> Result<csv::Writer<BufWriter<File>>, CliError> {
    let mut w = create(path)?;
    for (k, v) in cfg
        .echo()
        .iter()
        .map(|(k, v)| (*k, v))
        .chain(extra.iter().map(|(k, v)| (*k, v)))
    {
        writeln!(w, "# {k} = {v}")?;
    }
    Ok(csv::Writer::from_writer(w))
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Stats {
    pub n: usize,
    pub median: f64,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

pub fn stats(values: &[f64]) -> Option<Stats> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    let median = if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    };
    Some(Stats {
        n,
        median,
        mean: v.iter().sum::<f64>() / n as f64,
        min: v[0],
        max: v[n - 1],
    })
}

fn exact_energy(h: &QubitHamiltonian) -> Result<f64, CliError> {
    ground_state(h)
        .map(|r| r.ground_energy)
        .map_err(|e| CliError::input(format!("exact reference unavailable: {e}")))
}

fn write_trace(path: &Path, cfg: &ExperimentConfig, seed: u64, trace: &OptimizationTrace) -> Result<(), CliError> {
    let mut w = csv_with_header(
        path,
        cfg,
        &[("run_seed", seed.to_string()), ("status", trace.status.to_string())],
    )?;
    w.write_record(["iteration", "energy_ha", "gradient_inf_norm", "calls"])?;
    for r in &trace.records {
        w.write_record([
            r.iteration.to_string(),
            e15(r.energy),
            e15(r.gradient_norm),
            r.calls.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_transform(file: &HamiltonianFile, output: Option<&Path>) -> Result<(), CliError> {
    let text = file.to_text();
    let summary = format!(
        "{} terms on {} qubits",
        file.hamiltonian.len(),
        file.hamiltonian.n_qubits()
    );
    match output {
        Some(p) => {
            let mut w = create(p)?;
            w.write_all(text.as_bytes())?;
            w.flush()?;
            println!("{summary}");
        }
        None => {
            print!("{text}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

pub fn cmd_exact(path: &Path, full_spectrum: bool, output: Option<&Path>) -> Result<(), CliError> {
    let file = read_hamiltonian_file(path)?;
    let r = ground_state(&file.hamiltonian).map_err(|e| CliError::input(e.to_string()))?;
    let mut record = json!({
        "input": path.display().to_string(),
        "energy_ha": r.ground_energy,
        "n_qubits": file.hamiltonian.n_qubits(),
        "n_terms": file.hamiltonian.len(),
        "residual": r.residual,
    });
    if full_spectrum {
        record["spectrum_ha"] = json!(r.full_spectrum);
    }
    emit_json(&record, output)
}

fn emit_json(record: &serde_json::Value, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(p) => write_json(p, record),
        None => {
            println!("{}", serde_json::to_string_pretty(record)?);
            Ok(())
        }
    }
}

pub fn cmd_spectrum(path: &Path, reference: Option<f64>, output: Option<&Path>) -> Result<(), CliError> {
    let file = read_hamiltonian_file(path)?;
    let h = &file.hamiltonian;
    let reference = match reference {
        Some(e) => Some(e),
        None if h.is_empty() => None,
        None => Some(exact_energy(h)?),
    };
    let mut out: Box<dyn Write> = match output {
        Some(p) => Box::new(create(p)?),
        None => Box::new(std::io::stdout().lock()),
    };
    writeln!(out, "# input = {}", path.display())?;
    if let Some(e) = reference {
        writeln!(out, "# fci_energy_ha = {}", e15(e))?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["rank", "abs_coeff", "class"])?;
    for (rank, (c, class)) in coefficient_distribution(h).into_iter().enumerate() {
        w.write_record([
            rank.to_string(),
            e15(c),
            class.map_or(String::new(), |c| c.name().to_string()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
struct VqeRow {
    seed: u64,
    final_energy_ha: f64,
    error_ha: f64,
    iterations: usize,
    calls: usize,
    status: Status,
}

fn summary_json(
    cfg: &ExperimentConfig,
    problem: &Problem,
    exact: f64,
    rows: serde_json::Value,
    errors: &[f64],
) -> serde_json::Value {
    json!({
        "config": cfg.echo_json(),
        "n_qubits": problem.hamiltonian.n_qubits(),
        "n_terms": problem.hamiltonian.len(),
        "n_electrons": problem.n_electrons,
        "exact_energy_ha": exact,
        "rows": rows,
        "error_stats_ha": stats(errors),
    })
}

pub fn cmd_vqe(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let problem = load_problem(cfg)?;
    let exact = exact_energy(&problem.hamiltonian)?;
    let circuit = problem.circuit(cfg.depth, cfg.entangler)?;
    fs::create_dir_all(&cfg.output)?;
    let rows: Vec<VqeRow> = run_in_pool(cfg.jobs, || {
        cfg.seeds
            .par_iter()
            .map(|&seed| {
                let f = VqeObjective::new(&circuit, &problem.hamiltonian, cfg.optimizer.gradient)
                    .map_err(|e| CliError::input(e.to_string()))?;
                let theta0 = random_initial_angles(circuit.parameter_count(), seed);
                let r = minimize(&f, &theta0, &cfg.optimizer).map_err(|e| CliError::runtime(e.to_string()))?;
                write_trace(&cfg.output.join(format!("vqe_seed{seed}.csv")), cfg, seed, &r.trace)?;
                info!("seed {seed}: error {:.3e}", r.energy - exact);
                Ok(VqeRow {
                    seed,
                    final_energy_ha: r.energy,
                    error_ha: r.energy - exact,
                    iterations: r.trace.iterations(),
                    calls: f.evaluations(),
                    status: r.trace.status,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()
    })??;
    let errors: Vec<f64> = rows.iter().map(|r| r.error_ha).collect();
    let summary = summary_json(cfg, &problem, exact, serde_json::to_value(&rows)?, &errors);
    write_json(&cfg.output.join("vqe_summary.json"), &summary)?;
    print_stats("vqe", &errors);
    Ok(())
}

fn print_stats(label: &str, errors: &[f64]) {
    if let Some(s) = stats(errors) {
        println!(
            "{label}: {} runs, error median {} min {} mean {} Ha",
            s.n,
            e15(s.median),
            e15(s.min),
            e15(s.mean)
        );
    }
}

#[derive(Debug, Clone, Serialize)]
struct HotStartRow {
    seed: u64,
    ordering: String,
    stages: usize,
    final_energy_ha: f64,
    error_ha: f64,
    calls: usize,
    final_status: Status,
}

pub fn cmd_hotstart(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let problem = load_problem(cfg)?;
    let exact = exact_energy(&problem.hamiltonian)?;
    let circuit = problem.circuit(cfg.depth, cfg.entangler)?;
    fs::create_dir_all(&cfg.output)?;
    let rows: Vec<HotStartRow> = run_in_pool(cfg.jobs, || {
        cfg.seeds
            .par_iter()
            .map(|&seed| {
                let ordering = cfg.ordering.resolve(seed);
                let schedule = HotStartSchedule::build(&problem.hamiltonian, ordering, cfg.batching, cfg.carry_hessian)
                    .map_err(|e| CliError::input(e.to_string()))?;
                let theta0 = random_initial_angles(circuit.parameter_count(), seed);
                let r = hot_start(&problem.hamiltonian, &circuit, &schedule, &theta0, &cfg.optimizer)
                    .map_err(|e| CliError::runtime(e.to_string()))?;
                let path = cfg.output.join(format!("hotstart_seed{seed}_stages.csv"));
                let mut w = csv_with_header(
                    &path,
                    cfg,
                    &[
                        ("run_seed", seed.to_string()),
                        ("resolved_ordering", ordering.to_string()),
                    ],
                )?;
                w.write_record([
                    "stage",
                    "prefix_size",
                    "energy_on_prefix",
                    "energy_on_full",
                    "calls",
                    "status",
                ])?;
                for s in &r.stages {
                    w.write_record([
                        s.stage.to_string(),
                        s.prefix_size.to_string(),
                        e15(s.energy_prefix),
                        e15(s.energy_full),
                        s.calls.to_string(),
                        s.status.to_string(),
                    ])?;
                }
                w.flush()?;
                info!("seed {seed}: error {:.3e}", r.final_energy - exact);
                Ok(HotStartRow {
                    seed,
                    ordering: ordering.to_string(),
                    stages: r.stages.len(),
                    final_energy_ha: r.final_energy,
                    error_ha: r.final_energy - exact,
                    calls: r.total_calls,
                    final_status: r.stages.last().map_or(Status::LineSearchFailure, |s| s.status),
                })
            })
            .collect::<Result<Vec<_>, CliError>>()
    })??;
    let errors: Vec<f64> = rows.iter().map(|r| r.error_ha).collect();
    let summary = summary_json(cfg, &problem, exact, serde_json::to_value(&rows)?, &errors);
    write_json(&cfg.output.join("hotstart_summary.json"), &summary)?;
    print_stats("hotstart", &errors);
    Ok(())
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    depth: usize,
    seed: u64,
    method: Method,
    ordering: Option<OrderingChoice>,
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub method: Method,
    pub strategy: String,
    pub depth: usize,
    pub seed: u64,
    /// `None` marks a failed cell.
    pub final_error_ha: Option<f64>,
    pub calls: usize,
    pub status: String,
}

impl BenchRow {
    pub fn series(&self) -> String {
        match self.method {
            Method::Ordinary => "ordinary".into(),
            Method::HotStart => format!("hotstart:{}", self.strategy),
        }
    }
}

fn run_cell(cfg: &ExperimentConfig, problem: &Problem, exact: f64, cell: Cell) -> BenchRow {
    let strategy = cell.ordering.map_or("-".to_string(), |o| o.label());
    let outcome = (|| -> Result<(f64, usize, String), String> {
        let circuit = problem.circuit(cell.depth, cfg.entangler).map_err(|e| e.to_string())?;
        let theta0 = random_initial_angles(circuit.parameter_count(), cell.seed);
        match (cell.method, cell.ordering) {
            (Method::Ordinary, _) => {
                let f = VqeObjective::new(&circuit, &problem.hamiltonian, cfg.optimizer.gradient)
                    .map_err(|e| e.to_string())?;
                let r = minimize(&f, &theta0, &cfg.optimizer).map_err(|e| e.to_string())?;
                Ok((r.energy, f.evaluations(), r.trace.status.to_string()))
            }
            (Method::HotStart, ordering) => {
                let ordering = ordering.expect("hotstart cells carry an ordering").resolve(cell.seed);
                let schedule = HotStartSchedule::build(&problem.hamiltonian, ordering, cfg.batching, cfg.carry_hessian)
                    .map_err(|e| e.to_string())?;
                let r = hot_start(&problem.hamiltonian, &circuit, &schedule, &theta0, &cfg.optimizer)
                    .map_err(|e| e.to_string())?;
                let status = r.stages.last().map_or("none".into(), |s| s.status.to_string());
                Ok((r.final_energy, r.total_calls, status))
            }
        }
    })();
    let (final_error_ha, calls, status) = match outcome {
        Ok((e, calls, status)) => (Some(e - exact), calls, status),
        Err(msg) => (None, 0, format!("failed: {msg}")),
    };
    BenchRow {
        method: cell.method,
        strategy,
        depth: cell.depth,
        seed: cell.seed,
        final_error_ha,
        calls,
        status,
    }
}

/// Run every (depth, seed, method, ordering) cell and write the long table
/// plus the ordering and depth aggregates. Returns the rows in cell order.
pub fn cmd_bench(cfg: &ExperimentConfig) -> Result<Vec<BenchRow>, CliError> {
    let problem = load_problem(cfg)?;
    let exact = exact_energy(&problem.hamiltonian)?;
    let mut cells = Vec::new();
    for &depth in &cfg.depths {
        for &seed in &cfg.seeds {
            for &method in &cfg.methods {
                match method {
                    Method::Ordinary => cells.push(Cell {
                        depth,
                        seed,
                        method,
                        ordering: None,
                    }),
                    Method::HotStart => cells.extend(cfg.orderings.iter().map(|&o| Cell {
                        depth,
                        seed,
                        method,
                        ordering: Some(o),
                    })),
                }
            }
        }
    }
    info!("bench: {} cells", cells.len());
    let rows: Vec<BenchRow> = run_in_pool(cfg.jobs, || {
        cells.par_iter().map(|&c| run_cell(cfg, &problem, exact, c)).collect()
    })?;
    let extra = [("exact_energy_ha", e15(exact))];

    let mut w = csv_with_header(&cfg.output.join("bench_long.csv"), cfg, &extra)?;
    w.write_record([
        "molecule",
        "method",
        "strategy",
        "depth",
        "seed",
        "final_error_ha",
        "calls",
        "status",
    ])?;
    for r in &rows {
        w.write_record([
            cfg.molecule.clone(),
            r.method.name().to_string(),
            r.strategy.clone(),
            r.depth.to_string(),
            r.seed.to_string(),
            r.final_error_ha.map_or(String::new(), e15),
            r.calls.to_string(),
            r.status.clone(),
        ])?;
    }
    w.flush()?;

    // error by ordering strategy, then error by depth
    write_aggregate(
        &cfg.output.join("bench_orderings.csv"),
        cfg,
        &extra,
        &rows,
        |r| (r.method == Method::HotStart).then(|| r.strategy.clone()),
        "strategy",
    )?;
    write_aggregate(
        &cfg.output.join("bench_depths.csv"),
        cfg,
        &extra,
        &rows,
        |r| Some(r.series()),
        "series",
    )?;
    for series in rows
        .iter()
        .map(BenchRow::series)
        .collect::<std::collections::BTreeSet<_>>()
    {
        let errors: Vec<f64> = rows
            .iter()
            .filter(|r| r.series() == series)
            .filter_map(|r| r.final_error_ha)
            .collect();
        print_stats(&series, &errors);
    }
    Ok(rows)
}

fn write_aggregate(
    path: &Path,
    cfg: &ExperimentConfig,
    extra: &[(&str, String)],
    rows: &[BenchRow],
    key: impl Fn(&BenchRow) -> Option<String>,
    key_name: &str,
) -> Result<(), CliError> {
    let mut groups: Vec<((String, usize), Vec<&BenchRow>)> = Vec::new();
    for r in rows {
        let Some(k) = key(r) else { continue };
        let k = (k, r.depth);
        match groups.iter_mut().find(|(g, _)| *g == k) {
            Some((_, v)) => v.push(r),
            None => groups.push((k, vec![r])),
        }
    }
    let mut w = csv_with_header(path, cfg, extra)?;
    w.write_record([
        key_name,
        "depth",
        "n_runs",
        "n_failed",
        "median_error_ha",
        "mean_error_ha",
        "min_error_ha",
        "max_error_ha",
        "n_chemical_accuracy",
    ])?;
    for ((k, depth), members) in groups {
        let errors: Vec<f64> = members.iter().filter_map(|r| r.final_error_ha).collect();
        let failed = members.len() - errors.len();
        let s = stats(&errors);
        let f = |x: Option<f64>| x.map_or(String::new(), e15);
        w.write_record([
            k,
            depth.to_string(),
            members.len().to_string(),
            failed.to_string(),
            f(s.map(|s| s.median)),
            f(s.map(|s| s.mean)),
            f(s.map(|s| s.min)),
            f(s.map(|s| s.max)),
            errors.iter().filter(|&&e| e <= CHEMICAL_ACCURACY).count().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
