//! Command-line front end.
//!
//! Every subcommand first renders its outputs in memory and only then writes
//! them, so repeated runs can be compared byte for byte without touching disk.
//! Flags take precedence over `SEMITORIC_*` environment variables, which take
//! precedence over the defaults shown in `--help`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::DEFAULT_CURVE_SAMPLES;
use crate::error::{Error, Result};
use crate::hopf::HopfParams;
use crate::models::{jc_linearization_poly, jc_reduced_critical_values, jc_spectrum_sample, PolyG};
use crate::spectrum::{
    assemble_hopf_diagram, boundary, rasterize, write_boundary_csv, write_cloud_csv, write_critical_csv,
    write_curve_csv, write_diagram_json, write_raster_csv,
};
use crate::symplin::{classify, eigen_closed, quartic_coeffs, QuarticCoeffs};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "semitoric", version, about = "Critical values of integrable systems near a Hamiltonian Hopf bifurcation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify an equilibrium from λ⁴ + bλ² + a or from (ω̃, α̃, γ, δ).
    Classify(ClassifyArgs),
    /// Sample the critical-value curve of the normal form.
    HopfCurve(HopfCurveArgs),
    /// Linearisation type of the spin-oscillator pole across a range of γ.
    JcScan(JcScanArgs),
    /// Reduced critical values and a sampled image of the spin-oscillator.
    JcSpectrum(JcSpectrumArgs),
    /// Run the built-in checks.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["a", "params"]))]
pub struct ClassifyArgs {
    #[arg(long, allow_negative_numbers = true, requires = "b")]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "a")]
    pub b: Option<f64>,
    /// Quadratic part ω̃J₁ + α̃J₂ + γK₁ + δK₂.
    #[arg(long, num_args = 4, allow_negative_numbers = true, value_names = ["OMEGA_T", "ALPHA_T", "GAMMA", "DELTA"])]
    pub params: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
pub struct HopfCurveArgs {
    #[arg(long, env = "SEMITORIC_OMEGA", default_value_t = 1.0, allow_negative_numbers = true)]
    pub omega: f64,
    #[arg(long, env = "SEMITORIC_SIGMA", default_value_t = 1.0, allow_negative_numbers = true)]
    pub sigma: f64,
    #[arg(long, env = "SEMITORIC_NU", default_value_t = 0.5, allow_negative_numbers = true)]
    pub nu: f64,
    #[arg(long = "D", env = "SEMITORIC_D", default_value_t = -2.0, allow_negative_numbers = true)]
    pub d: f64,
    #[arg(long, env = "SEMITORIC_SAMPLES", default_value_t = DEFAULT_CURVE_SAMPLES)]
    pub samples: usize,
    /// Directory receiving curve.csv and diagram.json.
    #[arg(long, env = "SEMITORIC_OUT")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct JcScanArgs {
    #[arg(long, env = "SEMITORIC_GAMMA_MIN", default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma_min: f64,
    #[arg(long, env = "SEMITORIC_GAMMA_MAX", default_value_t = 1.0, allow_negative_numbers = true)]
    pub gamma_max: f64,
    #[arg(long, env = "SEMITORIC_STEPS", default_value_t = 101)]
    pub steps: usize,
    /// Directory receiving scan.csv.
    #[arg(long, env = "SEMITORIC_OUT")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct JcSpectrumArgs {
    #[arg(long, env = "SEMITORIC_GAMMA", default_value_t = 0.8, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long, env = "SEMITORIC_J_MIN", default_value_t = -1.0, allow_negative_numbers = true)]
    pub j_min: f64,
    #[arg(long, env = "SEMITORIC_J_MAX", default_value_t = 3.0, allow_negative_numbers = true)]
    pub j_max: f64,
    #[arg(long, env = "SEMITORIC_J_STEPS", default_value_t = 201)]
    pub j_steps: usize,
    #[arg(long, env = "SEMITORIC_SAMPLES", default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, env = "SEMITORIC_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Also write raster.csv with NJ × NH occupancy counts.
    #[arg(long, num_args = 2, value_names = ["NJ", "NH"])]
    pub raster: Option<Vec<usize>>,
    /// Also write boundary.csv with this many J bins.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Directory receiving critical.csv and cloud.csv.
    #[arg(long, env = "SEMITORIC_OUT")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Multiply every numerical tolerance.
    #[arg(long, env = "SEMITORIC_TOLERANCE_SCALE", default_value_t = 1.0)]
    pub tolerance_scale: f64,
}

/// A rendered output file.
pub type Rendered = Vec<(String, Vec<u8>)>;

fn fmt_complex(z: &Complex64) -> String {
    if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub fn render_classify(q: QuarticCoeffs) -> String {
    let eig = eigen_closed(q).sorted();
    let mut s = String::new();
    let _ = writeln!(s, "(a,b)=({},{}) {}", q.a, q.b, classify(q));
    let _ = writeln!(s, "eigenvalues: {}", eig.iter().map(fmt_complex).collect::<Vec<_>>().join(", "));
    s
}

pub fn render_hopf_curve(params: &HopfParams, samples: usize) -> Result<Rendered> {
    let d = assemble_hopf_diagram(params, samples)?;
    let mut curve = Vec::new();
    write_curve_csv(&mut curve, &d.unique_samples())?;
    let mut json = Vec::new();
    write_diagram_json(&mut json, &d)?;
    Ok(vec![("curve.csv".into(), curve), ("diagram.json".into(), json)])
}

#[derive(Serialize)]
struct ScanRow {
    gamma: f64,
    a: f64,
    b: f64,
    #[serde(rename = "type")]
    kind: String,
    re1: f64,
    im1: f64,
    re2: f64,
    im2: f64,
    re3: f64,
    im3: f64,
    re4: f64,
    im4: f64,
}

pub fn render_jc_scan(gamma_min: f64, gamma_max: f64, steps: usize) -> Result<Rendered> {
    if steps < 2 {
        return Err(Error::InvalidParams("scan needs at least 2 steps".into()));
    }
    if !(gamma_min.is_finite() && gamma_max.is_finite()) || gamma_max < gamma_min {
        return Err(Error::InvalidParams("γ range must be finite and increasing".into()));
    }
    let mut wr = csv::Writer::from_writer(Vec::new());
    for i in 0..steps {
        let gamma = gamma_min + (gamma_max - gamma_min) * i as f64 / (steps - 1) as f64;
        let lin = jc_linearization_poly(&PolyG::new(gamma)?);
        let e = eigen_closed(lin.coeffs).sorted();
        wr.serialize(ScanRow {
            gamma,
            a: lin.coeffs.a,
            b: lin.coeffs.b,
            kind: lin.kind.to_string(),
            re1: e[0].re,
            im1: e[0].im,
            re2: e[1].re,
            im2: e[1].im,
            re3: e[2].re,
            im3: e[2].im,
            re4: e[3].re,
            im4: e[3].im,
        })?;
    }
    let bytes = wr.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(vec![("scan.csv".into(), bytes)])
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRequest {
    pub gamma: f64,
    pub j_min: f64,
    pub j_max: f64,
    pub j_steps: usize,
    pub samples: usize,
    pub seed: u64,
    pub raster: Option<(usize, usize)>,
    pub bins: Option<usize>,
}

pub fn render_jc_spectrum(req: &SpectrumRequest) -> Result<Rendered> {
    let g = PolyG::new(req.gamma)?;
    if !(req.j_min >= -1.0 && req.j_max > req.j_min && req.j_max.is_finite()) {
        return Err(Error::InvalidParams(format!("need −1 ≤ j-min < j-max, got [{}, {}]", req.j_min, req.j_max)));
    }
    if req.j_steps == 0 || req.samples == 0 {
        return Err(Error::InvalidParams("j-steps and samples must be positive".into()));
    }
    let js: Vec<f64> = if req.j_steps == 1 {
        vec![req.j_min]
    } else {
        (0..req.j_steps)
            .map(|i| req.j_min + (req.j_max - req.j_min) * i as f64 / (req.j_steps - 1) as f64)
            .collect()
    };
    let per_j: Vec<_> = js.par_iter().map(|&j| jc_reduced_critical_values(&g, j)).collect::<Result<_>>()?;
    let rows: Vec<_> = per_j.into_iter().flatten().collect();
    let cloud = jc_spectrum_sample(&g, req.samples, req.j_max, req.seed)?;

    let mut out = Vec::new();
    let mut buf = Vec::new();
    write_critical_csv(&mut buf, &rows)?;
    out.push(("critical.csv".to_string(), buf));
    let mut buf = Vec::new();
    write_cloud_csv(&mut buf, &cloud)?;
    out.push(("cloud.csv".to_string(), buf));
    if let Some((nj, nh)) = req.raster {
        let mut buf = Vec::new();
        write_raster_csv(&mut buf, &rasterize(&cloud, nj, nh)?)?;
        out.push(("raster.csv".to_string(), buf));
    }
    if let Some(bins) = req.bins {
        let mut buf = Vec::new();
        write_boundary_csv(&mut buf, &boundary(&cloud, bins)?)?;
        out.push(("boundary.csv".to_string(), buf));
    }
    Ok(out)
}

fn write_all(dir: &Path, files: &Rendered) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, bytes) in files {
        let path = dir.join(name);
        std::fs::write(&path, bytes)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Csv(_) | Error::Json(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

fn execute(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Classify(a) => {
            let q = match (a.a, a.b, a.params) {
                (Some(a), Some(b), None) => QuarticCoeffs::new(a, b)?,
                (None, None, Some(p)) => {
                    if !p.iter().all(|v| v.is_finite()) {
                        return Err(Error::InvalidParams("parameters must be finite".into()));
                    }
                    quartic_coeffs(p[0], p[1], p[2], p[3])
                }
                _ => return Err(Error::InvalidParams("give either --a and --b, or --params".into())),
            };
            print!("{}", render_classify(q));
        }
        Command::HopfCurve(a) => {
            let params = HopfParams::new(a.omega, a.sigma, a.nu, a.d)?;
            write_all(&a.out, &render_hopf_curve(&params, a.samples)?)?;
        }
        Command::JcScan(a) => write_all(&a.out, &render_jc_scan(a.gamma_min, a.gamma_max, a.steps)?)?,
        Command::JcSpectrum(a) => {
            let req = SpectrumRequest {
                gamma: a.gamma,
                j_min: a.j_min,
                j_max: a.j_max,
                j_steps: a.j_steps,
                samples: a.samples,
                seed: a.seed,
                raster: a.raster.map(|v| (v[0], v[1])),
                bins: a.bins,
            };
            write_all(&a.out, &render_jc_spectrum(&req)?)?;
        }
        Command::Verify(a) => {
            if !(a.tolerance_scale > 0.0) {
                return Err(Error::InvalidParams("tolerance scale must be positive".into()));
            }
            let results = verify::run_all(a.tolerance_scale);
            if a.json {
                println!("{}", serde_json::to_string_pretty(&results)?);
            } else {
                for r in &results {
                    println!("{r}");
                }
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            if !a.json {
                println!("{} of {} checks passed", results.len() - failed, results.len());
            }
            return Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED });
        }
    }
    Ok(EXIT_OK)
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
