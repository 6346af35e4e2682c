use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use susylat::experiment::{self, Command, ExperimentConfig, Format, ModelChoice, Report};
use susylat::Error;

#[derive(Parser, Debug)]
#[command(name = "susylat", version, about = "Verification suites, n-sweeps and table reproductions")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Write the report here instead of stdout; sweeps also write `<PATH>.series.json`
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[arg(long, global = true, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,

    /// JSON object of tolerance overrides
    #[arg(long = "tol-file", global = true, value_name = "PATH")]
    tol_file: Option<PathBuf>,

    /// Single tolerance override, repeatable
    #[arg(long = "tol", global = true, value_name = "KEY=VALUE")]
    tol: Vec<String>,

    /// Worker threads; defaults to the available cores
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Seed for the random couplings
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Print the tolerance table and exit
    #[arg(long = "print-tolerances", global = true)]
    print_tolerances: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run the algebraic and cross-representation suites
    Verify {
        /// baby, I, II, III, bcs or dicke; omit for the full suite
        #[arg(long)]
        model: Option<String>,
        /// System size for --model
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        alpha: f64,
        /// Extra flow parameter checked next to the fixed grid
        #[arg(long, allow_negative_numbers = true)]
        s: Option<f64>,
    },
    /// Evaluate a metric over particle numbers and extrapolate
    Sweep {
        /// weyl_gaussian, bs_gaussian_y, bs_gaussian_z, weyl_phase, odlro, mesoscopic_variance, spectral, ceiling_pair, eta_prime or free_evolution
        #[arg(long)]
        metric: String,
        /// Comma-separated, strictly ascending, at least three values
        #[arg(long = "n-list", value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        beta: f64,
        /// Rotation strength for the Bogoliubov Gaussian probes
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        r: f64,
        /// Evolution time for free_evolution
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t: f64,
        /// ground, bogoliubov or ceiling; each metric has its own default
        #[arg(long)]
        state: Option<String>,
        /// Number of low levels compared by the spectral metric
        #[arg(long, default_value_t = 7)]
        levels: usize,
    },
    /// Lowest levels of a model Hamiltonian
    Spectrum {
        /// baby, I, II, III, bcs or dicke
        #[arg(long)]
        model: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        levels: usize,
    },
    /// One row per cell of the time-evolution and supertransformation tables
    Tables {
        /// Particle numbers for the scaling fits, at least three
        #[arg(long = "n-list", value_delimiter = ',')]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t: f64,
    },
}

fn build_config(cli: Cli) -> Result<ExperimentConfig, Error> {
    let mut cfg = match cli.command {
        Cmd::Verify { model, n, alpha, s } => {
            let mut c = ExperimentConfig::new(Command::Verify);
            c.model = model.as_deref().map(ModelChoice::parse).transpose()?;
            c.n_values = n.into_iter().collect();
            c.alpha = alpha;
            c.s = s;
            c
        }
        Cmd::Sweep {
            metric,
            n_list,
            alpha,
            beta,
            r,
            t,
            state,
            levels,
        } => {
            let mut c = ExperimentConfig::new(Command::Sweep);
            c.metric = Some(metric);
            c.n_values = n_list;
            c.alpha = alpha;
            c.beta = beta;
            c.r = r;
            c.t = t;
            c.state = state;
            c.levels = levels;
            c
        }
        Cmd::Spectrum { model, n, levels } => {
            let mut c = ExperimentConfig::new(Command::Spectrum);
            c.model = Some(ModelChoice::parse(&model)?);
            c.n_values = vec![n];
            c.levels = levels;
            c
        }
        Cmd::Tables { n_list, alpha, t } => {
            let mut c = ExperimentConfig::new(Command::Tables);
            c.n_values = n_list;
            c.alpha = alpha;
            c.t = t;
            c
        }
    };
    let g = cli.global;
    cfg.format = Format::parse(&g.format)?;
    cfg.output_path = g.out;
    cfg.seed = g.seed;
    if let Some(j) = g.jobs {
        cfg.jobs = j;
    }
    if let Some(path) = &g.tol_file {
        cfg.tolerances.merge_file(path)?;
    }
    for pair in &g.tol {
        cfg.tolerances.set_pair(pair)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn series_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".series.json");
    PathBuf::from(s)
}

fn emit(cfg: &ExperimentConfig, report: &Report, series: Option<&susylat::limits::ConvergenceSeries>) -> Result<(), Error> {
    match &cfg.output_path {
        Some(path) => {
            report.write(path, cfg.format)?;
            if let Some(s) = series {
                let body = serde_json::to_string_pretty(s).map_err(|e| Error::InvalidArgument(e.to_string()))?;
                let target = series_path(path);
                std::fs::write(&target, body + "\n").map_err(|e| Error::Config {
                    field: "out",
                    message: format!("{}: {e}", target.display()),
                })?;
            }
        }
        None => print!("{}", report.render(cfg.format)?),
    }
    Ok(())
}

fn exit_for(err: &Error) -> ExitCode {
    match err {
        Error::Config { .. } => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.global.print_tolerances {
        let mut t = susylat::experiment::Tolerances::default();
        if let Some(path) = &cli.global.tol_file {
            if let Err(e) = t.merge_file(path) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
        for (k, v) in t.entries() {
            println!("{k} = {v:e}");
        }
        return ExitCode::SUCCESS;
    }
    let cfg = match build_config(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    };
    let (report, series) = match experiment::run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    };
    if let Err(e) = emit(&cfg, &report, series.as_ref()) {
        eprintln!("error: {e}");
        return exit_for(&e);
    }
    let failed: Vec<_> = report.failures().collect();
    for r in &failed {
        let n = r.n.map(|n| format!(" n={n}")).unwrap_or_default();
        let note = r.note.as_deref().map(|s| format!(" ({s})")).unwrap_or_default();
        eprintln!("FAIL {}{n}: {:e}{note}", r.metric, r.value.re);
    }
    eprintln!("{} of {} rows passed", report.rows.len() - failed.len(), report.rows.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
