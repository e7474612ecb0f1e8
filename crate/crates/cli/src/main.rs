//! `gpbf`: bilateral filtering, accuracy comparison, kernel-error sweeps and
//! timing for 8-bit grayscale PGM images.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gpbf::bench::{kernel_error_sweep, run_bench, write_csv, BenchConfig};
use gpbf::bilateral::{methods, Centering, FilterConfig};
use gpbf::metrics::compare_interior;
use gpbf::pgm::{read_pgm_file, write_pgm_file};
use gpbf::range_kernel::{kernels, RangeKernel, RangeParams};
use gpbf::spatial::{backends, Boundary, SpatialParams};
use gpbf::IntensityRange;

#[derive(Parser)]
#[command(
    name = "gpbf",
    version,
    about = "Constant-time bilateral filtering for grayscale images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Filter a PGM image.
    Filter(FilterArgs),
    /// Compare two PGM images and print their error statistics.
    Compare(CompareArgs),
    /// Sweep the range-kernel approximation error over translations.
    KernelError(KernelErrorArgs),
    /// Time filters over a list of spatial widths and write a CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Gpf,
    Taylor,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Gpf => "gpf",
            Method::Taylor => "taylor",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    Direct,
    Recursive,
}

impl Backend {
    fn name(self) -> &'static str {
        match self {
            Backend::Direct => "direct",
            Backend::Recursive => "recursive",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryArg {
    Replicate,
    Reflect,
    Zero,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Replicate => Boundary::Replicate,
            BoundaryArg::Reflect => Boundary::Reflect,
            BoundaryArg::Zero => Boundary::Zero,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Gp,
    Taylor,
    Both,
}

#[derive(Args)]
struct FilterArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, value_enum)]
    method: Method,
    #[arg(long, value_parser = positive, allow_negative_numbers = true)]
    sigma_s: f64,
    #[arg(long, value_parser = positive, allow_negative_numbers = true)]
    sigma_r: f64,
    #[arg(long, default_value_t = RangeParams::DEFAULT_DEGREE)]
    degree: usize,
    #[arg(long, value_enum, default_value = "recursive")]
    backend: Backend,
    /// Window radius W; defaults to ceil(3 * sigma_s).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    window: Option<u32>,
    #[arg(long, value_enum, default_value = "replicate")]
    boundary: BoundaryArg,
    /// Do not subtract the mean intensity before filtering.
    #[arg(long, conflicts_with = "midpoint_centering")]
    no_centering: bool,
    /// Centre on 127.5 instead of the image mean.
    #[arg(long)]
    midpoint_centering: bool,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    threads: u32,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long = "ref")]
    reference: PathBuf,
    #[arg(long)]
    test: PathBuf,
    #[arg(long, default_value_t = 0)]
    exclude_border: usize,
}

#[derive(Args)]
struct KernelErrorArgs {
    #[arg(long, value_parser = positive, allow_negative_numbers = true)]
    sigma_r: f64,
    #[arg(long, default_value_t = RangeParams::DEFAULT_DEGREE)]
    degree: usize,
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    tau_list: Vec<f64>,
    /// Closed intensity interval LO:HI.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    range: IntensityRange,
    #[arg(long, value_parser = positive, allow_negative_numbers = true)]
    step: f64,
    #[arg(long, value_enum)]
    which: Which,
    #[arg(long)]
    csv: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    method: Vec<Method>,
    #[arg(long, value_delimiter = ',', required = true, value_parser = positive, allow_negative_numbers = true)]
    sigma_s_list: Vec<f64>,
    #[arg(long, value_parser = positive, allow_negative_numbers = true)]
    sigma_r: f64,
    #[arg(long, default_value_t = RangeParams::DEFAULT_DEGREE)]
    degree: usize,
    #[arg(long, value_enum, default_value = "recursive")]
    backend: Backend,
    #[arg(long, value_enum, default_value = "replicate")]
    boundary: BoundaryArg,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    repeats: u32,
    #[arg(long, default_value_t = 1)]
    warmup: u32,
    #[arg(long)]
    csv: PathBuf,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    threads: u32,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive, got {s}"))
    }
}

fn parse_range(s: &str) -> Result<IntensityRange, String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got '{s}'"))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound '{lo}'"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound '{hi}'"))?;
    IntensityRange::new(lo, hi).map_err(|e| e.to_string())
}

/// Rewrites library parameter errors in terms of the flag that set them.
fn flag_error(err: gpbf::Error) -> anyhow::Error {
    match &err {
        gpbf::Error::InvalidParameter { name, reason } => {
            anyhow!("--{}: {reason}", name.replace('_', "-"))
        }
        gpbf::Error::UnknownStrategy { kind, .. } => {
            let flag = if *kind == "spatial backend" {
                "--backend"
            } else {
                "--method"
            };
            anyhow!("{flag}: {err}")
        }
        _ => anyhow!(err),
    }
}

fn cmd_filter(args: FilterArgs) -> Result<()> {
    let img =
        read_pgm_file(&args.input).with_context(|| format!("--input {}", args.input.display()))?;
    let mut spatial = SpatialParams::new(args.sigma_s)
        .map_err(flag_error)?
        .with_boundary(args.boundary.into());
    if let Some(w) = args.window {
        spatial = spatial.with_window_radius(w as usize).map_err(flag_error)?;
    }
    let range = RangeParams::new(args.sigma_r, args.degree).map_err(flag_error)?;
    let centering = if args.no_centering {
        Centering::Off
    } else if args.midpoint_centering {
        Centering::Midpoint(IntensityRange::EIGHT_BIT)
    } else {
        Centering::Mean
    };
    let backend = backends().get(args.backend.name()).map_err(flag_error)?;
    let cfg = FilterConfig::new(spatial, range)
        .with_backend(backend)
        .with_centering(centering);
    let method = methods().get(args.method.name()).map_err(flag_error)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads as usize)
        .build()?;
    let out = pool
        .install(|| method.apply(&img, &cfg))
        .map_err(flag_error)?;
    if out.fallback_pixels > 0 {
        eprintln!(
            "warning: {} pixel(s) kept their input value (range approximation broke down)",
            out.fallback_pixels
        );
    }
    write_pgm_file(&args.output, &out.image)
        .with_context(|| format!("--output {}", args.output.display()))?;
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<()> {
    let a = read_pgm_file(&args.reference)
        .with_context(|| format!("--ref {}", args.reference.display()))?;
    let b = read_pgm_file(&args.test).with_context(|| format!("--test {}", args.test.display()))?;
    let r = compare_interior(&a, &b, args.exclude_border).map_err(flag_error)?;
    println!(
        "mse={:?} mse_db={:?} max_abs={:?} pixels={}",
        r.mse, r.mse_db, r.max_abs, r.pixels
    );
    Ok(())
}

fn cmd_kernel_error(args: KernelErrorArgs) -> Result<()> {
    let params = RangeParams::new(args.sigma_r, args.degree).map_err(flag_error)?;
    let registry = kernels();
    let names: &[&str] = match args.which {
        Which::Gp => &["gp"],
        Which::Taylor => &["taylor"],
        Which::Both => &["gp", "taylor"],
    };
    let selected = names
        .iter()
        .map(|n| registry.get(n))
        .collect::<gpbf::Result<Vec<Arc<dyn RangeKernel>>>>()
        .map_err(flag_error)?;
    let rows = kernel_error_sweep(&params, &args.tau_list, &args.range, args.step, &selected)
        .map_err(flag_error)?;
    let file = File::create(&args.csv).with_context(|| format!("--csv {}", args.csv.display()))?;
    write_csv(&rows, BufWriter::new(file)).map_err(flag_error)?;
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let img =
        read_pgm_file(&args.input).with_context(|| format!("--input {}", args.input.display()))?;
    let cfg = BenchConfig {
        methods: args.method.iter().map(|m| m.name().to_string()).collect(),
        sigma_s: args.sigma_s_list,
        sigma_r: args.sigma_r,
        degree: args.degree,
        backend: args.backend.name().to_string(),
        boundary: args.boundary.into(),
        repeats: args.repeats as usize,
        warmup: args.warmup as usize,
        threads: args.threads as usize,
    };
    let records = run_bench(&img, &cfg).map_err(|e| match e {
        gpbf::Error::InvalidParameter {
            name: "sigma_s",
            reason,
        } => {
            anyhow!("--sigma-s-list: {reason}")
        }
        other => flag_error(other),
    })?;
    let file = File::create(&args.csv).with_context(|| format!("--csv {}", args.csv.display()))?;
    write_csv(&records, BufWriter::new(file)).map_err(flag_error)?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Filter(a) => cmd_filter(a),
        Command::Compare(a) => cmd_compare(a),
        Command::KernelError(a) => cmd_kernel_error(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            eprintln!(
                "{}",
                rendered
                    .lines()
                    .next()
                    .unwrap_or("error: invalid arguments")
            );
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = format!("{e:#}");
            eprintln!("error: {}", msg.replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
