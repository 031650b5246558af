mod funcspec;
mod manifest;

use std::f64::consts::PI;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fraclap::extension::{conormal_limit, default_heights, extend, extend_by_convolution};
use fraclap::kernel_pv::{frac_laplacian_pointwise, harnack_ratio_experiment, ExteriorData, HarnackGeometry, PeriodizedKernel};
use fraclap::periodize::LatticeSumConfig;
use fraclap::regularity::{regularity_ratio_suite, RegularityCase, SuiteConfig};
use fraclap::selftest;
use fraclap::special_fn::bessel_k;
use fraclap::spectral_core::{frac_laplacian_spectral, synthesize, FracOrder, KernelConstant, TorusFunction, TorusGrid};
use fraclap::transference::{verify_transference, TransferenceConfig};
use fraclap::Error;

use funcspec::{parse_profile, parse_torus};
use manifest::RunManifest;

#[derive(Parser)]
#[command(name = "fraclap", version, about = "Fractional Laplacian on the flat torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Spectral,
    Kernel,
    Extension,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Dimension n of the torus.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Fractional order σ in (0, 1).
    #[arg(long, default_value_t = 0.5)]
    sigma: f64,
    /// Grid points per axis.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    #[arg(long, value_enum, default_value_t = Method::Spectral)]
    method: Method,
    /// Torus function spec.
    #[arg(long, default_value = "cos:1")]
    v: String,
    /// Schwartz profile spec.
    #[arg(long, default_value = "gauss:0.5")]
    phi: String,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long = "lattice-radius", default_value_t = 2)]
    lattice_radius: usize,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run manifest file (JSON).
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// (-Δ)^σ v on the grid, as CSV.
    Apply(Common),
    /// Both sides of the transference identity.
    Transfer(Common),
    /// Periodized kernel at the grid nodes.
    Kernel(Common),
    /// Extension of v at height y.
    Extend {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.1)]
        y: f64,
    },
    /// Weighted conormal derivative limit.
    Conormal(Common),
    /// Hölder ratio table for one case.
    Hoelder {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        case: u32,
        #[arg(long, default_value_t = 0.9)]
        alpha: f64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Mode cutoff M of the random family.
        #[arg(long, default_value_t = 4)]
        cutoff: usize,
        /// Derivative order of the source space in case 4.
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Interior Harnack ratios for the nonlocal Dirichlet problem.
    Harnack {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = PI / 2.0)]
        outer: f64,
        #[arg(long, default_value_t = PI / 4.0)]
        inner: f64,
        /// Degree of the squared random exterior data.
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// K_σ(z) at the given arguments.
    Bessel {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0, 2.0, 4.0, 8.0, 16.0])]
        z: Vec<f64>,
    },
    /// The acceptance suite.
    Selftest(Common),
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Input(_)
            | Error::Aliasing { .. }
            | Error::Domain(_)
            | Error::Config(_)
            | Error::Parse(_)
            | Error::Unsupported(_)
            | Error::Refused(_) => Failure::Usage(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

fn order(c: &Common) -> Result<FracOrder, Failure> {
    Ok(FracOrder::new(c.sigma)?)
}

fn record_common(m: &mut RunManifest, c: &Common) {
    m.param("n", c.n);
    m.param("sigma", c.sigma);
    m.param("grid", c.grid);
    m.param("method", format!("{:?}", c.method).to_lowercase());
    m.param("v", c.v.clone());
    m.param("phi", c.phi.clone());
    m.param("trials", c.trials);
    m.param("lattice_radius", c.lattice_radius);
}

fn sup_diff(a: &TorusFunction, b: &TorusFunction) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn apply(c: &Common, m: &mut RunManifest) -> Outcome {
    let order = order(c)?;
    let grid = TorusGrid::new(c.n, c.grid)?;
    let v = parse_torus(&c.v, c.n, c.seed)?;
    let exact = synthesize(&frac_laplacian_spectral(&v, &order), &grid)?;
    let scale = exact.max_abs().max(1.0);
    let result = match c.method {
        Method::Spectral => {
            m.budget("rounding", 1e2 * f64::EPSILON * v.l1_norm());
            exact
        }
        Method::Kernel => {
            if c.grid < 16 {
                return Err(Failure::Usage("--method kernel needs --grid >= 16".into()));
            }
            if c.n == 3 && c.grid > 32 {
                return Err(Failure::Usage("--method kernel with n = 3 is limited to --grid <= 32".into()));
            }
            let kernel = PeriodizedKernel::new(c.n, order, &LatticeSumConfig::new(c.lattice_radius, 1e-12)?)?;
            let report = frac_laplacian_pointwise(&synthesize(&v, &grid)?, &kernel)?;
            m.budget("last_correction", report.last_correction);
            m.budget("representation", report.representation_error);
            m.budget("kernel_tail", kernel.tail_bound() * kernel.constant());
            let gap = sup_diff(&report.values, &exact);
            m.check("agrees with spectral", gap <= c.tol * scale, format!("sup difference {gap:.3e}"));
            report.values
        }
        Method::Extension => {
            let lim = conormal_limit(&v, &order, &grid, &default_heights())?;
            m.budget("richardson", lim.richardson_error);
            let values = lim.limit_field.values().iter().map(|x| x / order.c_sigma()).collect();
            let field = TorusFunction::new(grid.clone(), values)?;
            let gap = sup_diff(&field, &exact);
            m.check("agrees with spectral", gap <= c.tol * scale, format!("sup difference {gap:.3e}"));
            field
        }
    };
    Ok(result.to_csv())
}

fn transfer(c: &Common, m: &mut RunManifest) -> Outcome {
    let order = order(c)?;
    let v = parse_torus(&c.v, c.n, c.seed)?;
    let phi = parse_profile(&c.phi, c.n)?;
    let cfg = TransferenceConfig { tol: c.tol, ..TransferenceConfig::default() };
    let r = verify_transference(&v, &phi, &order, &cfg)?;
    m.budget("spatial", r.budget.spatial);
    m.budget("time", r.budget.time);
    m.budget("truncation", r.budget.truncation);
    m.budget("rounding", r.budget.rounding);
    m.check("transference", r.passed, format!("residual {:.3e}, tolerance {:.3e}", r.residual, r.tolerance));
    Ok(format!("n = {}\nsigma = {:.16e}\n{r}\n", c.n, c.sigma))
}

fn kernel(c: &Common, m: &mut RunManifest) -> Outcome {
    let order = order(c)?;
    let grid = TorusGrid::new(c.n, c.grid)?;
    let cfg = LatticeSumConfig::new(c.lattice_radius, c.tol.min(1e-6))?;
    let k = PeriodizedKernel::new(c.n, order, &cfg)?;
    m.param("kernel_constant_standard", order.kernel_const(c.n));
    m.param(
        "kernel_constant_printed",
        FracOrder::with_kernel(c.sigma, KernelConstant::Printed)?.kernel_const(c.n),
    );
    m.param("lattice_radius_used", k.radius());
    let tail = k.tail_bound() * k.constant();
    m.budget("lattice_tail", tail);
    m.check("lattice tail", k.tail_bound() <= c.tol, format!("tail bound {:.3e}", k.tail_bound()));
    let mut out = format!("# n={} N={} sigma={:.16e}\n", c.n, c.grid, c.sigma);
    for flat in 0..grid.len() {
        let x = grid.node(flat);
        if x.iter().all(|&xi| xi == 0.0) {
            continue;
        }
        for xi in &x {
            write!(out, "{xi:.16e},").unwrap();
        }
        writeln!(out, "{:.16e}", k.eval(&x)?).unwrap();
    }
    Ok(out)
}

fn extend_cmd(c: &Common, y: f64, m: &mut RunManifest) -> Outcome {
    let order = order(c)?;
    let grid = TorusGrid::new(c.n, c.grid)?;
    let v = parse_torus(&c.v, c.n, c.seed)?;
    m.param("y", y);
    let field = extend(&v, &order, y, &grid)?;
    if c.n == 1 {
        let mut gap: f64 = 0.0;
        let mut quad: f64 = 0.0;
        for j in (0..c.grid).step_by((c.grid / 4).max(1)) {
            let z = grid.coordinate(j);
            let conv = extend_by_convolution(&v, &order, y, z)?;
            gap = gap.max((conv.value - field.values()[j]).abs());
            quad = quad.max(conv.error);
        }
        m.budget("convolution_quadrature", quad);
        m.check("Poisson convolution", gap <= c.tol, format!("sup difference {gap:.3e}"));
    }
    Ok(field.to_csv())
}

fn conormal(c: &Common, m: &mut RunManifest) -> Outcome {
    let order = order(c)?;
    let grid = TorusGrid::new(c.n, c.grid)?;
    let v = parse_torus(&c.v, c.n, c.seed)?;
    let lim = conormal_limit(&v, &order, &grid, &default_heights())?;
    let exact = synthesize(&frac_laplacian_spectral(&v, &order), &grid)?;
    let mut gap: f64 = 0.0;
    for (a, b) in lim.limit_field.values().iter().zip(exact.values()) {
        gap = gap.max((a / order.c_sigma() - b).abs());
    }
    m.param("c_sigma", order.c_sigma());
    m.budget("richardson", lim.richardson_error);
    let scale = exact.max_abs().max(1.0);
    m.check("limit / c_sigma equals spectral", gap <= c.tol * scale, format!("sup difference {gap:.3e}"));
    Ok(lim.limit_field.to_csv())
}

fn hoelder(c: &Common, case: u32, alpha: f64, samples: usize, cutoff: usize, k: usize, m: &mut RunManifest) -> Outcome {
    let order = order(c)?;
    let case = RegularityCase::from_number(case, k)?;
    m.param("case", format!("{case:?}"));
    m.param("alpha", alpha);
    m.param("samples", samples);
    m.param("cutoff", cutoff);
    let cfg = SuiteConfig { dim: c.n, cutoff, points: c.grid, samples, seed: c.seed };
    let r = regularity_ratio_suite(case, alpha, &order, &cfg)?;
    let mut out = String::from("index,source_norm,target_norm,ratio\n");
    for row in &r.rows {
        writeln!(out, "{},{:.16e},{:.16e},{:.16e}", row.index, row.source_norm, row.target_norm, row.ratio).unwrap();
    }
    writeln!(out, "max,,,{:.16e}", r.max_ratio).unwrap();
    m.check("finite max ratio", r.max_ratio.is_finite(), format!("{:.6e}", r.max_ratio));
    if c.n == 1 {
        let fine = regularity_ratio_suite(case, alpha, &order, &SuiteConfig { points: 2 * c.grid, ..cfg })?;
        let drift = (fine.max_ratio / r.max_ratio - 1.0).abs();
        m.budget("refinement_drift", drift);
        m.check("refinement stable", drift <= 0.2, format!("N -> 2N drift {drift:.3e}"));
    }
    Ok(out)
}

fn harnack(c: &Common, outer: f64, inner: f64, degree: usize, m: &mut RunManifest) -> Outcome {
    let order = order(c)?;
    m.param("outer", outer);
    m.param("inner", inner);
    m.param("degree", degree);
    let kernel = PeriodizedKernel::new(c.n, order, &LatticeSumConfig::new(c.lattice_radius, 1e-12)?)?;
    let geo = HarnackGeometry { outer, inner };
    let data = ExteriorData::SquaredTrig { degree };
    let r = harnack_ratio_experiment(&kernel, geo, c.grid, data, c.trials, c.seed)?;
    let mut out = String::from("trial,ratio\n");
    for (i, x) in r.ratios.iter().enumerate() {
        writeln!(out, "{i},{x:.16e}").unwrap();
    }
    writeln!(out, "max,{:.16e}", r.max_ratio).unwrap();
    m.check("positive on the compact set", r.violations.is_empty(), format!("{} violations", r.violations.len()));
    m.check("finite max ratio", r.max_ratio.is_finite(), format!("{:.6e}", r.max_ratio));
    if c.n == 1 {
        let fine = harnack_ratio_experiment(&kernel, geo, 2 * c.grid, data, c.trials, c.seed)?;
        let drift = (fine.max_ratio / r.max_ratio - 1.0).abs();
        m.budget("refinement_drift", drift);
        m.check("refinement stable", drift <= 0.2, format!("N -> 2N drift {drift:.3e}"));
    }
    Ok(out)
}

fn bessel(c: &Common, zs: &[f64], m: &mut RunManifest) -> Outcome {
    m.param("z", zs.to_vec());
    let mut out = String::from("z,value,error_estimate,asymptotic_ratio,method\n");
    let mut worst: f64 = 0.0;
    for &z in zs {
        let b = bessel_k(c.sigma, z)?;
        let ratio = b.value * (2.0 * z / PI).sqrt() * z.exp();
        worst = worst.max(b.error_estimate / b.value.abs());
        writeln!(out, "{z:.16e},{:.16e},{:.16e},{ratio:.16e},{:?}", b.value, b.error_estimate, b.method).unwrap();
    }
    m.budget("relative_error", worst);
    m.check("relative error", worst <= c.tol, format!("max relative error estimate {worst:.3e}"));
    Ok(out)
}

fn selftest_cmd(c: &Common, m: &mut RunManifest) -> Outcome {
    let mut out = String::new();
    for r in selftest::run_all(c.seed) {
        writeln!(out, "{r}").unwrap();
        m.budget(&format!("criterion_{}_seconds", r.id), r.elapsed.as_secs_f64());
        m.check(&format!("criterion {}: {}", r.id, r.name), r.passed, r.detail.clone());
    }
    Ok(out)
}

fn emit(path: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("FRACLAP_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn run(args: impl IntoIterator<Item = OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    configure_threads();
    let start = Instant::now();
    let (name, common) = match &cli.command {
        Command::Apply(c) => ("apply", c),
        Command::Transfer(c) => ("transfer", c),
        Command::Kernel(c) => ("kernel", c),
        Command::Extend { common, .. } => ("extend", common),
        Command::Conormal(c) => ("conormal", c),
        Command::Hoelder { common, .. } => ("hoelder", common),
        Command::Harnack { common, .. } => ("harnack", common),
        Command::Bessel { common, .. } => ("bessel", common),
        Command::Selftest(c) => ("selftest", c),
    };
    if !(common.tol > 0.0 && common.tol.is_finite()) {
        eprintln!("error: --tol must be positive, got {}", common.tol);
        return 2;
    }
    let mut m = RunManifest::new(name, common.seed, common.tol);
    record_common(&mut m, common);
    let outcome = match &cli.command {
        Command::Apply(c) => apply(c, &mut m),
        Command::Transfer(c) => transfer(c, &mut m),
        Command::Kernel(c) => kernel(c, &mut m),
        Command::Extend { common, y } => extend_cmd(common, *y, &mut m),
        Command::Conormal(c) => conormal(c, &mut m),
        Command::Hoelder { common, case, alpha, samples, cutoff, k } => {
            hoelder(common, *case, *alpha, *samples, *cutoff, *k, &mut m)
        }
        Command::Harnack { common, outer, inner, degree } => harnack(common, *outer, *inner, *degree, &mut m),
        Command::Bessel { common, z } => bessel(common, z, &mut m),
        Command::Selftest(c) => selftest_cmd(c, &mut m),
    };
    let code = match outcome {
        Ok(text) => {
            if let Err(e) = emit(&common.out, &text) {
                eprintln!("error: cannot write output: {e}");
                return 2;
            }
            if m.all_passed() {
                0
            } else {
                for c in m.checks.iter().filter(|c| !c.passed) {
                    eprintln!("check failed: {}: {}", c.name, c.detail);
                }
                1
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            m.check("run", false, msg);
            2
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            m.check("run", false, msg);
            1
        }
    };
    m.wall_clock_seconds = start.elapsed().as_secs_f64();
    if let Some(path) = &common.manifest {
        let json = serde_json::to_string_pretty(&m).expect("manifest serializes");
        if let Err(e) = fs::write(path, json + "\n") {
            eprintln!("error: cannot write manifest: {e}");
            return 2;
        }
    }
    code
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    std::process::exit(run(std::env::args_os()));
}
