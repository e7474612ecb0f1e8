//! Timing harness and kernel-error sweeps, with their CSV schemas.

use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::bilateral::{methods, FilterConfig};
use crate::error::{Error, Result};
use crate::image::{Image, IntensityRange};
use crate::range_kernel::{sup_error, RangeKernel, RangeParams};
use crate::spatial::{backends, Boundary, SpatialParams};

/// One timed configuration. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub method: String,
    pub backend: String,
    pub sigma_s: f64,
    pub sigma_r: f64,
    pub degree: usize,
    pub pixels: usize,
    pub repeats: usize,
    pub median_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub methods: Vec<String>,
    pub sigma_s: Vec<f64>,
    pub sigma_r: f64,
    pub degree: usize,
    pub backend: String,
    pub boundary: Boundary,
    pub repeats: usize,
    pub warmup: usize,
    pub threads: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            methods: vec!["gpf".into()],
            sigma_s: vec![2.0, 3.0, 4.0, 5.0, 10.0, 15.0],
            sigma_r: 30.0,
            degree: RangeParams::DEFAULT_DEGREE,
            backend: "recursive".into(),
            boundary: Boundary::Replicate,
            repeats: 5,
            warmup: 1,
            threads: 1,
        }
    }
}

/// Times every `(method, sigma_s)` pair on `img`, in that nesting order.
///
/// Only the filter call is timed. Warmup runs are discarded and the median
/// of `repeats` runs is reported.
pub fn run_bench(img: &Image, cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    if cfg.repeats == 0 {
        return Err(Error::param("repeats", "must be at least 1"));
    }
    if cfg.threads == 0 {
        return Err(Error::param("threads", "must be at least 1"));
    }
    if cfg.methods.is_empty() {
        return Err(Error::param("method", "list is empty"));
    }
    if cfg.sigma_s.is_empty() {
        return Err(Error::param("sigma_s", "list is empty"));
    }
    let registry = methods();
    let filters = cfg
        .methods
        .iter()
        .map(|m| registry.get(m))
        .collect::<Result<Vec<_>>>()?;
    let backend = backends().get(&cfg.backend)?;
    let range = RangeParams::new(cfg.sigma_r, cfg.degree)?;
    let configs = cfg
        .sigma_s
        .iter()
        .map(|&s| {
            let spatial = SpatialParams::new(s)?.with_boundary(cfg.boundary);
            Ok(FilterConfig::new(spatial, range).with_backend(Arc::clone(&backend)))
        })
        .collect::<Result<Vec<_>>>()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()?;
    pool.install(|| {
        let mut records = Vec::with_capacity(filters.len() * configs.len());
        for filter in &filters {
            for fc in &configs {
                for _ in 0..cfg.warmup {
                    filter.apply(img, fc)?;
                }
                let mut times = Vec::with_capacity(cfg.repeats);
                for _ in 0..cfg.repeats {
                    let start = Instant::now();
                    let out = filter.apply(img, fc)?;
                    times.push(start.elapsed().as_secs_f64());
                    std::hint::black_box(out);
                }
                records.push(BenchRecord {
                    method: filter.name().to_string(),
                    backend: backend.name().to_string(),
                    sigma_s: fc.spatial.sigma_s(),
                    sigma_r: cfg.sigma_r,
                    degree: cfg.degree,
                    pixels: img.len(),
                    repeats: cfg.repeats,
                    median_seconds: median(&mut times).max(f64::MIN_POSITIVE),
                });
            }
        }
        Ok(records)
    })
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Writes a header row and one row per record.
pub fn write_csv<T: Serialize>(rows: &[T], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Maximum approximation error of one kernel at one translation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelErrorRow {
    pub tau: f64,
    pub approx: String,
    pub sup_error: f64,
}

/// [`sup_error`] for every `(tau, kernel)` pair, `tau` outermost.
pub fn kernel_error_sweep(
    params: &RangeParams,
    taus: &[f64],
    range: &IntensityRange,
    step: f64,
    kernels: &[Arc<dyn RangeKernel>],
) -> Result<Vec<KernelErrorRow>> {
    if taus.is_empty() {
        return Err(Error::param("tau_list", "must not be empty"));
    }
    let mut rows = Vec::with_capacity(taus.len() * kernels.len());
    for &tau in taus {
        for k in kernels {
            rows.push(KernelErrorRow {
                tau,
                approx: k.name().to_string(),
                sup_error: sup_error(params, tau, range, step, k.as_ref())?,
            });
        }
    }
    Ok(rows)
}
