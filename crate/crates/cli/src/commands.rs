//! Subcommand implementations.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Serialize;
use vinegauge::eta::{eta_cvine, eta_dvine, eta_dvine_ilog_closed, eta_mixed_trivariate, eta_numeric, parse_index_set};
use vinegauge::gauge::{boundary_mesh, gauge_project};
use vinegauge::simulate::{sample_vine, scale_cloud, CloudMetadata};
use vinegauge::verify::{run_suite, Suite, VerifyOptions};
use vinegauge::{Error, EtaMethod, Family, Result, Structure, VineSpec};

use crate::model::{read_spec, Model, ModelArgs};
use crate::Failure;

/// Largest accepted deviation of `g` from 1 at an emitted boundary point.
const CONTOUR_CHECK_TOL: f64 = 1e-10;

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Analytic result where one exists, numerical minimisation otherwise.
    Auto,
    /// Analytic result only; fails when none is available.
    Closed,
    /// Numerical minimisation of the gauge.
    Numeric,
}

#[derive(Debug, Args)]
pub struct EtaArgs {
    #[command(flatten)]
    model: ModelArgs,

    /// Index set as digits (`13`) or comma-separated 1-based indices. Defaults to every coordinate.
    #[arg(long)]
    set: Option<String>,

    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
}

#[derive(Serialize)]
struct EtaOutput {
    eta: f64,
    argmin: Vec<f64>,
    method: &'static str,
}

/// The analytic value of `η` for this model and set, if one is known.
fn analytic(model: &Model, set: &[usize]) -> Result<Option<EtaOutput>> {
    let full = set.len() == model.dim();
    let spec = match model {
        Model::Builtin { eta, .. } => {
            return Ok(Some(EtaOutput {
                eta: *eta,
                argmin: vec![1.0, 1.0],
                method: EtaMethod::ClosedForm.as_str(),
            }))
        }
        Model::Spec(s) => s,
    };
    let r = match (spec.dim(), spec.structure()) {
        (2, _) => {
            let pc = spec.edges()[0].1;
            let eta = if pc.family == Family::Ev && !pc.measure.is_independence() {
                1.0
            } else {
                1.0 / pc.measure.stdf(1.0, 1.0)
            };
            return Ok(Some(EtaOutput {
                eta,
                argmin: vec![1.0, 1.0],
                method: EtaMethod::ClosedForm.as_str(),
            }));
        }
        (3, Structure::Trivariate | Structure::Dvine) => eta_mixed_trivariate(spec, set)?,
        (_, Structure::Cvine) if full => eta_cvine(spec)?,
        (_, Structure::Dvine) if full => eta_dvine(spec)?,
        _ => return Ok(None),
    };
    Ok((r.method != EtaMethod::NumericMin).then(|| EtaOutput {
        eta: r.eta,
        argmin: r.argmin,
        method: r.method.as_str(),
    }))
}

pub fn eta(a: &EtaArgs) -> std::result::Result<(), Failure> {
    let model = a.model.load()?;
    let d = model.dim();
    let set = match &a.set {
        Some(s) => parse_index_set(s, d)?,
        None => (0..d).collect(),
    };
    if set.len() < 2 {
        return Err(Error::Domain("η needs an index set with at least two elements".into()).into());
    }
    let numeric = || -> Result<EtaOutput> {
        let r = eta_numeric(&model.gauge()?, &set)?;
        Ok(EtaOutput {
            eta: r.eta,
            argmin: r.argmin,
            method: r.method.as_str(),
        })
    };
    let out = match a.method {
        Method::Numeric => numeric()?,
        Method::Closed => analytic(&model, &set)?
            .ok_or_else(|| Error::Domain("no analytic result for this model and index set".into()))?,
        Method::Auto => match analytic(&model, &set)? {
            Some(o) => o,
            None => numeric()?,
        },
    };
    println!("{}", serde_json::to_string(&out).expect("plain numbers serialise"));
    Ok(())
}

#[derive(Debug, Args)]
pub struct ContourArgs {
    #[command(flatten)]
    model: ModelArgs,

    /// Coordinates to keep, as for `eta --set`. Fewer than all uses the marginal gauge.
    #[arg(long)]
    dims: Option<String>,

    /// Lattice points per edge of the direction simplex.
    #[arg(long, default_value_t = 21)]
    resolution: usize,
}

pub fn contour(a: &ContourArgs) -> std::result::Result<(), Failure> {
    let model = a.model.load()?;
    let d = model.dim();
    let keep = match &a.dims {
        Some(s) => parse_index_set(s, d)?,
        None => (0..d).collect(),
    };
    let full = model.gauge()?;
    let g = if keep.len() < d { gauge_project(&full, &keep)? } else { full };
    let rows = boundary_mesh(&g, a.resolution)?;
    if let Some(bad) = rows.iter().find(|r| (r.check - 1.0).abs() > CONTOUR_CHECK_TOL) {
        return Err(Error::Numeric(format!("g = {} at boundary point {:?}", bad.check, bad.boundary)).into());
    }

    let mut w = csv::Writer::from_writer(io::stdout().lock());
    let header = keep
        .iter()
        .map(|i| format!("w{}", i + 1))
        .chain(keep.iter().map(|i| format!("x{}", i + 1)))
        .chain(["g".to_string()]);
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        let fields = r.direction.iter().chain(&r.boundary).chain([&r.check]).map(|&x| num(x));
        w.write_record(fields).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Vine specification JSON file (`-` reads standard input).
    spec: String,

    /// Number of rows.
    #[arg(long)]
    n: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Divide every coordinate by `ln n`.
    #[arg(long)]
    scale: bool,

    /// Output file; `.bin` selects the binary format, anything else CSV.
    /// Metadata goes to `<out>.meta.json`. CSV on standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn sidecar(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

pub fn simulate(a: &SimulateArgs) -> std::result::Result<(), Failure> {
    let spec: VineSpec = read_spec(&a.spec)?;
    let mut cloud = sample_vine(&spec, a.n, a.seed)?;
    if a.scale {
        cloud = scale_cloud(&cloud)?;
    }
    let Some(out) = &a.out else {
        let mut w = BufWriter::new(io::stdout().lock());
        cloud.write_csv(&mut w)?;
        w.flush()?;
        return Ok(());
    };
    let open = |p: &Path| File::create(p).map(BufWriter::new).map_err(|e| Error::Io(format!("{}: {e}", p.display())));
    let mut w = open(out)?;
    if out.extension().is_some_and(|e| e == "bin") {
        cloud.write_binary(&mut w)?;
    } else {
        cloud.write_csv(&mut w)?;
    }
    w.flush()?;
    let mut m = open(&sidecar(out))?;
    serde_json::to_writer_pretty(&mut m, &CloudMetadata::new(&spec, &cloud)).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(m)?;
    m.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    /// Analytic cross-checks only.
    Quick,
    /// Adds Monte Carlo checks.
    Full,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::Quick)]
    suite: SuiteArg,

    /// Perturb a reference constant to exercise the failure path.
    #[arg(long, hide = true)]
    corrupt: bool,
}

pub fn verify(a: &VerifyArgs) -> std::result::Result<(), Failure> {
    let suite = match a.suite {
        SuiteArg::Quick => Suite::Quick,
        SuiteArg::Full => Suite::Full,
    };
    let results = run_suite(VerifyOptions {
        suite,
        corrupt: a.corrupt,
    });
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record(["check", "status", "seconds", "detail"]).map_err(csv_err)?;
    for r in &results {
        let status = if r.passed { "pass" } else { "fail" };
        w.write_record([r.name.as_str(), status, &format!("{:.3}", r.seconds), &r.detail])
            .map_err(csv_err)?;
    }
    w.flush()?;
    match results.iter().filter(|r| !r.passed).count() {
        0 => Ok(()),
        n => Err(Failure::Verification(n)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// `η_D` of equal-α inverted logistic D-vines against the dimension.
    Fig6,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long, value_enum, default_value_t = Figure::Fig6)]
    figure: Figure,

    /// Comma-separated α values, one column each.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.3,0.5,0.7,0.9")]
    alphas: Vec<f64>,

    /// Largest dimension; rows run from 2.
    #[arg(long, default_value_t = 10)]
    dmax: usize,
}

pub fn table(a: &TableArgs) -> std::result::Result<(), Failure> {
    let Figure::Fig6 = a.figure;
    if a.dmax < 2 {
        return Err(Error::Domain(format!("--dmax must be at least 2, got {}", a.dmax)).into());
    }
    let columns: Vec<Vec<f64>> = a
        .alphas
        .iter()
        .map(|&alpha| (2..=a.dmax).map(|d| eta_dvine_ilog_closed(alpha, d)).collect())
        .collect::<Result<_>>()?;

    let mut w = csv::Writer::from_writer(io::stdout().lock());
    let header = ["d".to_string()].into_iter().chain(a.alphas.iter().map(|x| format!("alpha={x}")));
    w.write_record(header).map_err(csv_err)?;
    for (row, d) in (2..=a.dmax).enumerate() {
        let fields = [d.to_string()].into_iter().chain(columns.iter().map(|c| num(c[row])));
        w.write_record(fields).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Failure {
    Failure::Model(Error::Io(e.to_string()))
}
