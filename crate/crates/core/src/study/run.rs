use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use log::{info, warn};

use super::{ConfigError, StudyConfig};
use crate::analysis::{error_norms, Benchmark, ControlLaw, ConvergenceReport, ErrorNorms, Example, ReportRow, ERROR_NAMES};
use crate::assembly::{assemble, Label};
use crate::control::{ssn_solve, SsnOptions};
use crate::enrichment::EnrichmentConfig;
use crate::mesh::{build_structured_crack_mesh, build_three_quarter_disk_mesh, import_mesh, Mesh};
use crate::Error;

pub const CSV_HEADER: &str =
    "level,e_y_h1,ord_y_h1,e_y_l2,ord_y_l2,e_p_h1,ord_p_h1,e_p_l2,ord_p_l2,e_u_l2,ord_u_l2,dofs,ssn_iters";

/// Wall-clock time per phase.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Timings {
    pub mesh: Duration,
    pub assemble: Duration,
    pub ssn: Duration,
    pub errors: Duration,
}

impl Timings {
    pub fn total(&self) -> Duration {
        self.mesh + self.assemble + self.ssn + self.errors
    }
}

/// Outcome of one level.
#[derive(Debug, Clone)]
pub struct CaseReport {
    pub case: Example,
    pub level: f64,
    pub h: f64,
    pub nodes: usize,
    pub dofs: usize,
    pub theta_s: usize,
    pub theta_h: usize,
    pub norms: ErrorNorms,
    /// Relative errors in the order of [`ERROR_NAMES`].
    pub relative: [f64; 5],
    pub iterations: usize,
    pub active_lower: usize,
    pub active_upper: usize,
    pub objective: f64,
    pub timings: Timings,
}

impl CaseReport {
    pub fn row(&self) -> ReportRow {
        ReportRow {
            level: self.level,
            h: self.h,
            errors: self.relative,
            orders: [None; 5],
            dofs: self.dofs,
            nodes: self.nodes,
            ssn_iterations: self.iterations,
        }
    }
}

/// Mesh of one level: `N x N` crack meshes or disk meshes of size `1/level`,
/// unless the configuration names a mesh file.
pub fn build_level_mesh(config: &StudyConfig, level: f64) -> Result<Mesh, Error> {
    if let Some(path) = &config.mesh {
        let text = fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        return Ok(import_mesh(&text)?);
    }
    Ok(match config.case {
        Example::Unconstrained | Example::Constrained => {
            build_structured_crack_mesh(level as usize, config.is_fitted())?
        }
        Example::Disk => build_three_quarter_disk_mesh(1.0 / level)?,
    })
}

/// Abscissa of the convergence orders: `2/N`, or `1/nodes` on disk meshes.
fn order_size(config: &StudyConfig, level: f64, mesh: &Mesh) -> f64 {
    if config.mesh.is_some() {
        return mesh.mesh_size();
    }
    match config.case {
        Example::Unconstrained | Example::Constrained => 2.0 / level,
        Example::Disk => 1.0 / mesh.num_nodes() as f64,
    }
}

/// Solves one level of the configured case.
pub fn run_level(config: &StudyConfig, level: f64) -> Result<CaseReport, Error> {
    let bench = Benchmark::new(config.case);
    let mut timings = Timings::default();

    let clock = Instant::now();
    let mesh = build_level_mesh(config, level)?;
    timings.mesh = clock.elapsed();

    let clock = Instant::now();
    let enrich = EnrichmentConfig::with_method(config.method, config.r_s, config.cutoff());
    let mut problem = bench.problem(enrich);
    problem.crack_faces = config.crack_faces;
    problem.nitsche_gamma = config.gamma;
    problem.parallel = config.parallel;
    let system = assemble(&mesh, &problem)?;
    timings.assemble = clock.elapsed();

    let clock = Instant::now();
    let sol = ssn_solve(&system, &SsnOptions::default())?;
    timings.ssn = clock.elapsed();

    let clock = Instant::now();
    let law = ControlLaw { alpha: bench.alpha, lower: bench.lower_or_inf(), upper: bench.upper_or_inf() };
    let norms = error_norms(
        &system.space,
        &sol.y,
        &sol.p,
        law,
        &bench.exact,
        &problem.quadrature,
        config.parallel,
    );
    timings.errors = clock.elapsed();

    let dm = system.space.dofmap();
    let report = CaseReport {
        case: config.case,
        level,
        h: order_size(config, level, &mesh),
        nodes: mesh.num_nodes(),
        dofs: system.num_dofs(),
        theta_s: dm.theta_s().len(),
        theta_h: dm.theta_h().len(),
        norms,
        relative: norms.relative(),
        iterations: sol.iterations,
        active_lower: sol.count(Label::Lower),
        active_upper: sol.count(Label::Upper),
        objective: sol.objective.last().copied().unwrap_or(f64::NAN),
        timings,
    };
    info!(
        "{} {} level {}: dofs {}, ssn {} iterations, errors {:?}, {:.2?} total",
        config.case,
        config.method,
        level,
        report.dofs,
        report.iterations,
        report.relative,
        timings.total()
    );
    Ok(report)
}

/// Runs a configuration with exactly one level.
pub fn run_case(config: &StudyConfig) -> Result<CaseReport, Error> {
    config.validate()?;
    if config.levels.len() != 1 {
        return Err(ConfigError::Incompatible {
            key: "levels".into(),
            message: format!("a single case takes one level (got {})", config.levels.len()),
        }
        .into());
    }
    run_level(config, config.levels[0])
}

/// Runs every level in order. The CSV (if `out` is set) is rewritten after
/// each level, so a failing level leaves the finished rows followed by a
/// `# aborted` line.
pub fn run_study(config: &StudyConfig) -> Result<ConvergenceReport, Error> {
    config.validate()?;
    study_loop(config, |level| run_level(config, level))
}

fn study_loop<R>(config: &StudyConfig, mut run: R) -> Result<ConvergenceReport, Error>
where
    R: FnMut(f64) -> Result<CaseReport, Error>,
{
    let mut report = ConvergenceReport::new();
    for &level in &config.levels {
        match run(level) {
            Ok(case) => {
                report.push(case.row());
                if let Some(out) = &config.out {
                    save_csv(out, &report, None)?;
                }
            }
            Err(err) => {
                if let Some(out) = &config.out {
                    save_csv(out, &report, Some(&format!("level {level}: {err}")))?;
                }
                return Err(err);
            }
        }
    }
    if config.plots {
        if let Some(out) = &config.out {
            let dir = out.parent().map(Path::to_path_buf).unwrap_or_default();
            let stem = out.file_stem().map_or("study".to_string(), |s| s.to_string_lossy().into_owned());
            emit_plot_series(&report, &dir, &stem)?;
        } else {
            emit_plot_series(&report, Path::new("."), "study")?;
        }
    }
    Ok(report)
}

fn save_csv(path: &Path, report: &ConvergenceReport, aborted: Option<&str>) -> Result<(), Error> {
    let mut text = write_csv(report);
    if let Some(msg) = aborted {
        let _ = writeln!(text, "# aborted at {}", msg.replace('\n', " "));
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
    f.write_all(text.as_bytes())
        .and_then(|_| f.flush())
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

fn level_text(level: f64) -> String {
    if level.fract() == 0.0 && level.abs() < 1e15 {
        format!("{}", level as i64)
    } else {
        format!("{level}")
    }
}

/// CSV table of a report; orders are empty on the first row.
pub fn write_csv(report: &ConvergenceReport) -> String {
    let mut s = String::new();
    s.push_str(CSV_HEADER);
    s.push('\n');
    for row in &report.rows {
        s.push_str(&level_text(row.level));
        for k in 0..5 {
            let _ = write!(s, ",{:.6e},", row.errors[k]);
            if let Some(o) = row.orders[k] {
                let _ = write!(s, "{o:.4}");
            }
        }
        let _ = writeln!(s, ",{},{}", row.dofs, row.ssn_iterations);
    }
    s
}

/// Writes one `h  relative_error` file per norm, `<stem>_<norm>.dat` in `dir`.
/// An empty report writes nothing.
pub fn emit_plot_series(report: &ConvergenceReport, dir: &Path, stem: &str) -> Result<Vec<PathBuf>, Error> {
    if report.is_empty() {
        warn!("empty report: no plot series written");
        return Ok(Vec::new());
    }
    let mut files = Vec::new();
    for (k, name) in ERROR_NAMES.iter().enumerate() {
        let path = dir.join(format!("{stem}_{name}.dat"));
        let mut text = format!("# h relative_error_{name} (nodes in the third column)\n");
        for row in &report.rows {
            let _ = writeln!(text, "{:.10e} {:.10e} {}", row.h, row.errors[k], row.nodes);
        }
        fs::write(&path, text).map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
        files.push(path);
    }
    Ok(files)
}
