use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use xfem_control::analysis::Example;
use xfem_control::mesh::{export_mesh, import_mesh};
use xfem_control::study::{build_level_mesh, run_case, run_study, write_csv, ConfigError, StudyConfig};
use xfem_control::Error;

/// Extended finite element solver for control-constrained elliptic optimal control.
#[derive(Parser)]
#[command(name = "xfemctl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Refinement study; writes the error table as CSV.
    Study(RunArgs),
    /// One level; prints errors, iterations and timings.
    Case(RunArgs),
    /// Emit or check mesh files.
    #[command(subcommand)]
    Mesh(MeshCommand),
}

#[derive(Args)]
struct RunArgs {
    /// Configuration file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// example1, example2 or example3.
    #[arg(long)]
    case: Option<String>,
    /// cut, classic or p1.
    #[arg(long)]
    method: Option<String>,
    /// Comma separated N (crack square) or 1/h (disk).
    #[arg(long)]
    levels: Option<String>,
    #[arg(long)]
    rs: Option<String>,
    #[arg(long)]
    r0: Option<String>,
    #[arg(long)]
    r1: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write gnuplot series next to the CSV.
    #[arg(long)]
    plots: bool,
    /// nitsche, penalty or free.
    #[arg(long)]
    crack_faces: Option<String>,
    /// true, false or auto.
    #[arg(long)]
    fitted: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    /// Element-parallel assembly.
    #[arg(long)]
    parallel: bool,
    /// Mesh file replacing the generated mesh.
    #[arg(long)]
    mesh: Option<PathBuf>,
}

#[derive(Subcommand)]
enum MeshCommand {
    /// Write the mesh of a case and level.
    Emit {
        #[arg(long)]
        case: String,
        #[arg(long)]
        level: f64,
        #[arg(long)]
        fitted: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read and check a mesh file.
    Import { file: PathBuf },
}

impl RunArgs {
    fn config(&self) -> Result<StudyConfig, Error> {
        let mut cfg = StudyConfig::default();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
            cfg.apply_document(&text)?;
        }
        let text = [
            ("case", &self.case),
            ("method", &self.method),
            ("levels", &self.levels),
            ("rs", &self.rs),
            ("r0", &self.r0),
            ("r1", &self.r1),
            ("crack_faces", &self.crack_faces),
            ("fitted", &self.fitted),
            ("gamma", &self.gamma),
        ];
        for (key, value) in text {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        if let Some(out) = &self.out {
            cfg.out = Some(out.clone());
        }
        if let Some(mesh) = &self.mesh {
            cfg.mesh = Some(mesh.clone());
        }
        cfg.plots |= self.plots;
        cfg.parallel |= self.parallel;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Study(args) => {
            let cfg = args.config()?;
            let report = run_study(&cfg)?;
            if cfg.out.is_none() {
                print!("{}", write_csv(&report));
            }
        }
        Command::Case(args) => {
            let cfg = args.config()?;
            let r = run_case(&cfg)?;
            println!("case {} method {} level {}", r.case, cfg.method, r.level);
            println!("nodes {} dofs {} theta_s {} theta_h {}", r.nodes, r.dofs, r.theta_s, r.theta_h);
            for (name, e) in xfem_control::analysis::ERROR_NAMES.iter().zip(r.relative) {
                println!("e_{name} {e:.6e}");
            }
            println!("ssn_iters {} active_lower {} active_upper {}", r.iterations, r.active_lower, r.active_upper);
            println!("objective {:.10e}", r.objective);
            let t = r.timings;
            println!(
                "time_s mesh {:.3} assemble {:.3} ssn {:.3} errors {:.3}",
                t.mesh.as_secs_f64(),
                t.assemble.as_secs_f64(),
                t.ssn.as_secs_f64(),
                t.errors.as_secs_f64()
            );
        }
        Command::Mesh(MeshCommand::Emit { case, level, fitted, out }) => {
            let mut cfg = StudyConfig::default();
            cfg.case = Example::parse(&case).ok_or(ConfigError::UnknownCase { name: case })?;
            cfg.fitted = Some(fitted);
            cfg.levels = vec![level];
            cfg.validate()?;
            let text = export_mesh(&build_level_mesh(&cfg, level)?);
            match out {
                Some(path) => {
                    fs::write(&path, text).map_err(|e| Error::io(format!("writing {}", path.display()), e))?
                }
                None => print!("{text}"),
            }
        }
        Command::Mesh(MeshCommand::Import { file }) => {
            let text = fs::read_to_string(&file).map_err(|e| Error::io(format!("reading {}", file.display()), e))?;
            let mesh = import_mesh(&text)?;
            println!(
                "nodes {} triangles {} boundary_edges {} area {:.12}",
                mesh.num_nodes(),
                mesh.num_triangles(),
                mesh.boundary_edges().len(),
                mesh.total_area()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
