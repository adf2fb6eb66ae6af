use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sopkit::christoffel::{perturb_sop, write_perturbed};
use sopkit::classical_op::OpSystem;
use sopkit::ensemble::Support;
use sopkit::kernels::{
    s_hermite_limit, s_hermite_series, s_laguerre_limit, s_laguerre_series, GridMeta, KernelGrid, PreKernel,
};
use sopkit::sampler::{sample_matrix_ginibre, sample_mcmc_with, DensityField, DensityGrid, McmcOptions, SampleSet};
use sopkit::skew::{fmt_f64, sop_from_gram, sop_from_recurrence, write_system, MomentSource, SkewIntegrator, SkewSystem};
use sopkit::special::truncation_radius;
use sopkit::verify::{self, Suite};
use sopkit::{Complex64, EnsembleSpec, Error, Result};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sopkit", version, about = "Skew-orthogonal polynomials and Pfaffian kernels of symplectic ensembles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
enum Command {
    /// Skew-orthogonal polynomials and skew-norms.
    Sop(SopArgs),
    /// Limiting or finite-N pre-kernel on a grid.
    Kernel(KernelArgs),
    /// One-point density R_{N,1} on a grid.
    Density(DensityArgs),
    /// Eigenvalue configurations from the matrix model or Metropolis chains.
    Sample(SampleArgs),
    /// Numerical invariant suites.
    Verify(VerifyArgs),
    /// Christoffel perturbation by |z − m|².
    Perturb(PerturbArgs),
}

#[derive(Args, Serialize, Clone)]
struct EnsembleArgs {
    /// ginibre, mittag-leffler, truncated, gegenbauer, chebyshev-ellipse, elliptic, chiral, product-ginibre
    #[arg(long)]
    ensemble: String,
    #[arg(long, allow_negative_numbers = true)]
    tau: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    nu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Number of Ginibre factors of product-ginibre
    #[arg(long)]
    factors: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Route {
    Recurrence,
    Gram,
}

#[derive(Args, Serialize)]
struct SopArgs {
    #[command(flatten)]
    #[serde(flatten)]
    ensemble: EnsembleArgs,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    n: usize,
    #[arg(long, value_enum, default_value = "recurrence")]
    method: Route,
    /// Quadrature tolerance of the Gram route
    #[arg(long, default_value_t = 1e-13)]
    tol: f64,
    #[arg(long, default_value = ".")]
    #[serde(skip)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Limit {
    Hermite,
    Laguerre,
}

#[derive(Args, Serialize)]
struct KernelArgs {
    /// Limiting kernel near the origin; without it the pre-kernel of --ensemble is used
    #[arg(long, value_enum, conflicts_with = "ensemble")]
    limit: Option<Limit>,
    #[arg(long, allow_negative_numbers = true)]
    tau: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    nu: Option<f64>,
    /// Ensemble id for the finite-N pre-kernel; its parameters as for `sop`
    #[arg(long)]
    ensemble: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    #[arg(long)]
    factors: Option<u32>,
    /// Truncation N: the series of the limiting kernel, or the size of the ensemble system
    #[arg(long = "N")]
    #[serde(rename = "N")]
    n: Option<usize>,
    #[arg(long, default_value = "21x21")]
    grid: String,
    /// Half-width of the square [−L, L]²
    #[arg(long, default_value_t = 2.0)]
    extent: f64,
    /// Second argument `re,im`; the default u = z̄ gives the diagonal
    #[arg(long, allow_negative_numbers = true)]
    u: Option<String>,
    #[arg(long, default_value = ".")]
    #[serde(skip)]
    output: PathBuf,
}

#[derive(Args, Serialize)]
struct DensityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    ensemble: EnsembleArgs,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    n: usize,
    #[arg(long, default_value = "100x100")]
    grid: String,
    /// Half-width of the square grid; by default it covers the support
    #[arg(long)]
    extent: Option<f64>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value = ".")]
    #[serde(skip)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SampleMethod {
    Matrix,
    Mcmc,
}

#[derive(Args, Serialize)]
struct SampleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    ensemble: EnsembleArgs,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    n: usize,
    #[arg(long, value_enum, default_value = "mcmc")]
    method: SampleMethod,
    /// Matrix draws, or recorded sweeps per chain for mcmc
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 1000)]
    burn_in: usize,
    #[arg(long, default_value_t = 1)]
    chains: usize,
    #[arg(long, default_value_t = 1)]
    thin: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = ".")]
    #[serde(skip)]
    output: PathBuf,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    /// all, or a comma-separated list of special, skew, kernels, christoffel, sampler
    #[arg(long, default_value = "all", value_delimiter = ',')]
    suite: Vec<String>,
    #[arg(long, default_value = ".")]
    #[serde(skip)]
    output: PathBuf,
}

#[derive(Args, Serialize)]
struct PerturbArgs {
    #[command(flatten)]
    #[serde(flatten)]
    ensemble: EnsembleArgs,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    n: usize,
    /// Real perturbation point
    #[arg(long, allow_negative_numbers = true)]
    m: f64,
    #[arg(long, default_value = ".")]
    #[serde(skip)]
    output: PathBuf,
}

impl EnsembleArgs {
    fn spec(&self) -> Result<EnsembleSpec> {
        let id = self.ensemble.as_str();
        let given = [
            ("tau", self.tau.is_some()),
            ("nu", self.nu.is_some()),
            ("alpha", self.alpha.is_some()),
            ("a", self.a.is_some()),
            ("b", self.b.is_some()),
            ("lambda", self.lambda.is_some()),
            ("c", self.c.is_some()),
            ("factors", self.factors.is_some()),
        ];
        let uses: &[&str] = match id {
            "ginibre" => &[],
            "mittag-leffler" => &["lambda", "c"],
            "truncated" => &["alpha"],
            "gegenbauer" => &["alpha", "a", "b"],
            "chebyshev-ellipse" => &["a", "b"],
            "elliptic" => &["tau"],
            "chiral" => &["tau", "nu"],
            "product-ginibre" => &["factors", "c"],
            _ => return Err(Error::InvalidParameter(format!("unknown ensemble {id:?}"))),
        };
        if let Some((flag, _)) = given.iter().find(|(f, set)| *set && !uses.contains(f)) {
            return Err(Error::InvalidParameter(format!("--{flag} does not apply to {id}")));
        }
        let need = |v: Option<f64>, flag: &str| {
            v.ok_or_else(|| Error::InvalidParameter(format!("{id} needs --{flag}")))
        };
        let tau = || {
            let t = need(self.tau, "tau")?;
            if !(0.0..1.0).contains(&t) {
                return Err(Error::InvalidParameter(format!("τ must satisfy 0 ≤ τ < 1 (τ = {t})")));
            }
            Ok(t)
        };
        let spec = match id {
            "ginibre" => EnsembleSpec::Ginibre,
            "mittag-leffler" => EnsembleSpec::MittagLeffler { lambda: need(self.lambda, "lambda")?, c: self.c.unwrap_or(0.0) },
            "truncated" => EnsembleSpec::Truncated { alpha: need(self.alpha, "alpha")? },
            "gegenbauer" => EnsembleSpec::Gegenbauer { alpha: need(self.alpha, "alpha")?, a: need(self.a, "a")?, b: need(self.b, "b")? },
            "chebyshev-ellipse" => EnsembleSpec::ChebyshevEllipse { a: need(self.a, "a")?, b: need(self.b, "b")? },
            "elliptic" => EnsembleSpec::elliptic_tau(tau()?),
            "chiral" => EnsembleSpec::chiral_tau(tau()?, need(self.nu, "nu")?),
            _ => EnsembleSpec::ProductGinibre { m: self.factors.unwrap_or(1), c: self.c.unwrap_or(0.0) },
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidParameter(format!("grid must look like 21x21, got {s:?}"));
    let (a, b) = s.split_once('x').ok_or_else(bad)?;
    let (nx, ny) = (a.parse::<usize>().map_err(|_| bad())?, b.parse::<usize>().map_err(|_| bad())?);
    if nx == 0 || ny == 0 || nx * ny > 4_000_000 {
        return Err(bad());
    }
    Ok((nx, ny))
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::InvalidParameter(format!("complex number must look like 0.3,-0.4, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let z = Complex64::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(bad());
    }
    Ok(z)
}

fn positive_n(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    Ok(n)
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), bytes)?;
    Ok(())
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| Error::Io(e.to_string()))
}

#[derive(Serialize)]
struct RunMeta<'a> {
    schema_version: &'static str,
    sopkit_version: &'static str,
    #[serde(flatten)]
    command: &'a Command,
    outputs: Vec<&'static str>,
}

fn system(spec: &EnsembleSpec, n: usize) -> Result<SkewSystem> {
    let ops = OpSystem::for_ensemble(spec, 2 * n + 2)?;
    sop_from_recurrence(&ops, spec, n)
}

fn cmd_sop(a: &SopArgs) -> Result<Vec<&'static str>> {
    let spec = a.ensemble.spec()?;
    let n = positive_n(a.n)?;
    let sys = match a.method {
        Route::Recurrence => system(&spec, n)?,
        Route::Gram => sop_from_gram(&spec, n, MomentSource::Quadrature { tol: a.tol })?,
    };
    println!("k\tr_k");
    for (k, r) in sys.r.iter().enumerate() {
        println!("{k}\t{}", fmt_f64(*r));
    }
    write(&a.output, "sop.json", (write_system(&sys)? + "\n").as_bytes())?;
    Ok(vec!["sop.json"])
}

fn cmd_kernel(a: &KernelArgs) -> Result<Vec<&'static str>> {
    let (nx, ny) = parse_grid(&a.grid)?;
    if !(a.extent > 0.0 && a.extent.is_finite()) {
        return Err(Error::InvalidParameter(format!("extent must be positive, got {}", a.extent)));
    }
    let u = a.u.as_deref().map(parse_complex).transpose()?;
    let l = a.extent;
    let mut points = KernelGrid::square(nx, ny, (-l, l), (-l, l), Complex64::new(0.0, 0.0));
    for p in &mut points {
        p.1 = u.unwrap_or(p.0.conj());
    }
    let grid = match (a.limit, &a.ensemble) {
        (Some(limit), None) => {
            let tau = a.tau.ok_or_else(|| Error::InvalidParameter("--limit needs --tau".into()))?;
            if !(0.0..1.0).contains(&tau) {
                return Err(Error::InvalidParameter(format!("τ must satisfy 0 ≤ τ < 1 (τ = {tau})")));
            }
            let n = a.n.map(positive_n).transpose()?;
            let stray = [a.alpha, a.a, a.b, a.lambda, a.c].iter().any(Option::is_some) || a.factors.is_some();
            if stray {
                return Err(Error::InvalidParameter("--limit takes only --tau, --nu and --N".into()));
            }
            match limit {
                Limit::Hermite => {
                    if a.nu.is_some() {
                        return Err(Error::InvalidParameter("--nu does not apply to the hermite kernel".into()));
                    }
                    let meta = GridMeta { ensemble: "hermite".into(), tau, nu: None, n };
                    KernelGrid::evaluate(points, meta, |z, u| match n {
                        Some(n) => s_hermite_series(tau, z, u, n),
                        None => s_hermite_limit(tau, z, u),
                    })?
                }
                Limit::Laguerre => {
                    let nu = a.nu.ok_or_else(|| Error::InvalidParameter("the laguerre kernel needs --nu".into()))?;
                    if !(nu > -1.0) {
                        return Err(Error::InvalidParameter(format!("ν must exceed −1 (ν = {nu})")));
                    }
                    let meta = GridMeta { ensemble: "laguerre".into(), tau, nu: Some(nu), n };
                    KernelGrid::evaluate(points, meta, |z, u| match n {
                        Some(n) => s_laguerre_series(tau, nu, z, u, n),
                        None => s_laguerre_limit(tau, nu, z, u),
                    })?
                }
            }
        }
        (None, Some(id)) => {
            let ens = EnsembleArgs {
                ensemble: id.clone(),
                tau: a.tau,
                nu: a.nu,
                alpha: a.alpha,
                a: a.a,
                b: a.b,
                lambda: a.lambda,
                c: a.c,
                factors: a.factors,
            };
            let spec = ens.spec()?;
            let n = positive_n(a.n.ok_or_else(|| Error::InvalidParameter("--ensemble needs --N".into()))?)?;
            let sys = system(&spec, n)?;
            let pk = PreKernel::full(&sys);
            let meta = GridMeta { ensemble: spec.id().into(), tau: a.tau.unwrap_or(0.0), nu: a.nu, n: Some(n) };
            KernelGrid::evaluate(points, meta, |z, u| Ok(pk.eval(z, u)))?
        }
        _ => return Err(Error::InvalidParameter("give exactly one of --limit and --ensemble".into())),
    };
    let mut csv = Vec::new();
    grid.write_csv(&mut csv)?;
    write(&a.output, "kernel.csv", &csv)?;
    write(&a.output, "kernel.json", (grid.meta_json()? + "\n").as_bytes())?;
    println!("{} points written", grid.len());
    Ok(vec!["kernel.csv", "kernel.json"])
}

#[derive(Serialize)]
struct DensitySummary {
    ensemble: EnsembleSpec,
    #[serde(rename = "N")]
    n: usize,
    quadrature_integral: f64,
    grid_integral: f64,
}

fn cmd_density(a: &DensityArgs) -> Result<Vec<&'static str>> {
    let spec = a.ensemble.spec()?;
    let n = positive_n(a.n)?;
    let (nx, ny) = parse_grid(&a.grid)?;
    let sys = system(&spec, n)?;
    let pk = PreKernel::full(&sys);
    let r1 = |z: Complex64| ((z.conj() - z) * pk.eval(z, z.conj())).re * spec.weight(z);
    let integ = SkewIntegrator::for_degree(&spec, 4 * n, a.tol)?;
    // the rule carries the weight
    let quadrature_integral = integ.rule.integrate_real(|z| ((z.conj() - z) * pk.eval(z, z.conj())).re);
    let (x, y) = match (a.extent, spec.support()) {
        (Some(l), _) if l > 0.0 && l.is_finite() => ((-l, l), (-l, l)),
        (Some(l), _) => return Err(Error::InvalidParameter(format!("extent must be positive, got {l}"))),
        (None, Support::Ellipse { a, b }) => ((-a, a), (-b, b)),
        (None, Support::Contour { .. }) => {
            return Err(Error::Unsupported("the arc-length density of a contour ensemble has no planar grid".into()))
        }
        (None, Support::Plane) => {
            let r = truncation_radius(&spec, 4 * n, 1e-12);
            ((-r, r), (-r, r))
        }
    };
    let grid = DensityGrid { x, y, nx, ny };
    let mut values = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            values.push(r1(grid.center(i, j)));
        }
    }
    let field = DensityField { grid, values };
    let mut csv = Vec::new();
    field.write_csv(&mut csv)?;
    write(&a.output, "density.csv", &csv)?;
    let summary = DensitySummary { ensemble: spec, n, quadrature_integral, grid_integral: field.integral() };
    write(&a.output, "density.json", json(&summary)?.as_bytes())?;
    println!("quadrature integral {}", fmt_f64(quadrature_integral));
    println!("grid integral {}", fmt_f64(summary.grid_integral));
    Ok(vec!["density.csv", "density.json"])
}

fn cmd_sample(a: &SampleArgs) -> Result<Vec<&'static str>> {
    let spec = a.ensemble.spec()?;
    let n = positive_n(a.n)?;
    let set: SampleSet = match a.method {
        SampleMethod::Matrix => {
            if spec != EnsembleSpec::Ginibre {
                return Err(Error::Unsupported(format!("the matrix sampler covers ginibre only, not {}", spec.id())));
            }
            sample_matrix_ginibre(n, a.count, a.seed)?
        }
        SampleMethod::Mcmc => {
            let opts = McmcOptions { chains: a.chains, thin: a.thin, start: None };
            sample_mcmc_with(&spec, n, a.count, a.burn_in, a.seed, &opts)?
        }
    };
    let mut csv = Vec::new();
    set.write_csv(&mut csv)?;
    write(&a.output, "samples.csv", &csv)?;
    write(&a.output, "samples.json", (set.meta_json()? + "\n").as_bytes())?;
    println!("{} configurations of {} points", set.len(), set.n());
    if let Some(rate) = set.acceptance {
        println!("acceptance {rate:.4}");
    }
    Ok(vec!["samples.csv", "samples.json"])
}

/// Errors are usage errors; failing checks are reported through the returned flag.
fn cmd_verify(a: &VerifyArgs) -> Result<(Vec<&'static str>, bool)> {
    let suites: Vec<Suite> = if a.suite.iter().any(|s| s == "all") {
        Suite::ALL.to_vec()
    } else {
        a.suite.iter().map(|s| s.parse()).collect::<Result<_>>()?
    };
    let report = verify::run(&suites);
    for c in &report.checks {
        println!("{}", c.line());
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    println!("{} checks, {failed} failed", report.checks.len());
    write(&a.output, "report.json", json(&report)?.as_bytes())?;
    Ok((vec!["report.json"], report.passed))
}

fn cmd_perturb(a: &PerturbArgs) -> Result<Vec<&'static str>> {
    let spec = a.ensemble.spec()?;
    if a.n < 2 {
        return Err(Error::InvalidParameter("perturbation needs N ≥ 2".into()));
    }
    if !a.m.is_finite() {
        return Err(Error::InvalidParameter(format!("m must be finite, got {}", a.m)));
    }
    let sys = system(&spec, a.n)?;
    let p = perturb_sop(&sys, a.m, &[])?;
    println!("k\tr1_k");
    for (k, r) in p.r1.iter().enumerate() {
        println!("{k}\t{}", fmt_f64(*r));
    }
    write(&a.output, "perturbed.json", (write_perturbed(&p)? + "\n").as_bytes())?;
    Ok(vec!["perturbed.json"])
}

fn output_dir(c: &Command) -> &Path {
    match c {
        Command::Sop(a) => &a.output,
        Command::Kernel(a) => &a.output,
        Command::Density(a) => &a.output,
        Command::Sample(a) => &a.output,
        Command::Verify(a) => &a.output,
        Command::Perturb(a) => &a.output,
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let (outputs, passed) = match &cli.command {
        Command::Sop(a) => (cmd_sop(a)?, true),
        Command::Kernel(a) => (cmd_kernel(a)?, true),
        Command::Density(a) => (cmd_density(a)?, true),
        Command::Sample(a) => (cmd_sample(a)?, true),
        Command::Verify(a) => cmd_verify(a)?,
        Command::Perturb(a) => (cmd_perturb(a)?, true),
    };
    let meta = RunMeta {
        schema_version: sopkit::skew::SCHEMA_VERSION,
        sopkit_version: env!("CARGO_PKG_VERSION"),
        command: &cli.command,
        outputs,
    };
    write(output_dir(&cli.command), "run.json", json(&meta)?.as_bytes())?;
    Ok(passed)
}

fn threads() -> Result<()> {
    let Ok(v) = std::env::var("SOPKIT_THREADS") else { return Ok(()) };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidParameter(format!("SOPKIT_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Error::Io(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match threads().and_then(|_| run(&cli)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 3 })
        }
    }
}
