mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use output::{csv_bytes, emit, json_bytes, Format};
use vaismanlab::brieskorn::{self, BrieskornRecord, BrieskornTuple};
use vaismanlab::curvature::{expected, PointCurvature};
use vaismanlab::flow;
use vaismanlab::ghlimit;
use vaismanlab::models::{phase_rotation, HermitianModel, ModelKind};
use vaismanlab::report::{self, VerifyOptions};
use vaismanlab::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "vaismanlab", version)]
#[command(about = "Curvature identities, Chern-Ricci flow and collapse diagnostics for Vaisman metrics")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Model descriptor: hopf:N or lens:M:L
    #[arg(long, global = true, default_value = "hopf:3")]
    model: String,

    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Tolerance for the AD identities
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,

    #[arg(long, global = true)]
    csv: bool,

    /// Write the output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Suspension parameter c > 1
    #[arg(long, global = true, default_value_t = std::f64::consts::E)]
    c: f64,

    /// Deck unitary diag(e^{iψ}, e^{2iψ}, …)
    #[arg(long = "unitary-phase", global = true, default_value_t = 0.0)]
    unitary_phase: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Run the curvature and model identity suite at random points
    Verify {
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Curvature report of Ω_ζ at one point
    Curvature {
        #[arg(long, default_value = "0", value_parser = parse_number, allow_hyphen_values = true)]
        zeta: f64,
        /// Use a seeded random point instead of the base point
        #[arg(long)]
        random_point: bool,
    },
    /// s_C and scal against their closed forms over a ζ grid
    ScalTable {
        #[arg(long, default_value = "-0.9,-0.875,-0.5,-0.25,0,1", value_parser = parse_grid, allow_hyphen_values = true)]
        zeta: Grid,
    },
    /// Chern-Ricci flow diagnostics over a time grid
    Flow {
        /// `a:b:step` or a comma separated list
        #[arg(long, default_value = "0:0.45:0.05", value_parser = parse_grid, allow_hyphen_values = true)]
        t: Grid,
    },
    /// Distortion of the projection to the circle along the flow
    Gh {
        #[arg(long, default_value_t = 4000)]
        samples: usize,
        #[arg(long, default_value_t = 12)]
        k: usize,
        #[arg(long, default_value = "0.1,0.3,0.45", value_parser = parse_grid, allow_hyphen_values = true)]
        t: Grid,
    },
    /// Brieskorn-Pham exponent checks
    Brieskorn {
        #[command(subcommand)]
        action: BrieskornCommand,
    },
}

#[derive(Subcommand)]
enum BrieskornCommand {
    /// Verdict for one tuple, e.g. 2,2,2,3,5
    Check { tuple: String },
    /// All tuples passing the inequality
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max: u32,
    },
    /// The 28 exotic 7-sphere links
    Exotic7,
    /// Curvature thresholds for dimension n
    Profile {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Debug)]
struct Grid(Vec<f64>);

fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: f64 = p.trim().parse().map_err(|_| format!("bad number '{s}'"))?;
        let q: f64 = q.trim().parse().map_err(|_| format!("bad number '{s}'"))?;
        return Ok(p / q);
    }
    s.parse().map_err(|_| format!("bad number '{s}'"))
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("range '{s}' must be start:end:step"));
        }
        let (a, b, h) = (parse_number(parts[0])?, parse_number(parts[1])?, parse_number(parts[2])?);
        if !(h > 0.0) || b < a {
            return Err(format!("range '{s}' needs step > 0 and end >= start"));
        }
        let count = ((b - a) / h + 1e-9).floor() as usize + 1;
        return Ok(Grid((0..count).map(|i| a + h * i as f64).collect()));
    }
    let v = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(parse_number)
        .collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err("empty list".into());
    }
    Ok(Grid(v))
}

enum Failure {
    Usage(String),
    Identity,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("cannot write output: {e}"))
    }
}

struct Ctx {
    global: Global,
}

impl Ctx {
    fn format(&self, default: Format) -> Format {
        if self.global.json {
            Format::Json
        } else if self.global.csv {
            Format::Csv
        } else {
            default
        }
    }

    fn model(&self) -> Result<HermitianModel, Failure> {
        let m = HermitianModel::parse(&self.global.model)?;
        let k = match m.kind() {
            ModelKind::Hopf { n } => n,
            ModelKind::Lens { m, .. } => m,
        };
        let u = phase_rotation(k, self.global.unitary_phase);
        Ok(m.with_suspension(self.global.c, Some(u))?)
    }

    fn write(&self, bytes: Vec<u8>) -> Result<(), Failure> {
        Ok(emit(&bytes, self.global.out.as_deref())?)
    }

    fn write_rows<T: Serialize>(&self, rows: &[T], default: Format) -> Result<(), Failure> {
        let bytes = match self.format(default) {
            Format::Json => json_bytes(&rows),
            Format::Csv => csv_bytes(rows).map_err(Failure::Usage)?,
        };
        self.write(bytes)
    }
}

#[derive(Serialize)]
struct IdentityRow<'a> {
    name: &'a str,
    tag: &'a str,
    max_rel_err: f64,
    tolerance: f64,
    pass: bool,
}

fn cmd_verify(ctx: &Ctx, points: usize) -> Result<(), Failure> {
    if points == 0 {
        return Err(Failure::Usage("--points must be positive".into()));
    }
    let model = ctx.model()?;
    let mut opts = VerifyOptions {
        points,
        seed: ctx.global.seed,
        ..VerifyOptions::default()
    };
    if let Some(t) = ctx.global.tol {
        opts.ad_tol = t;
    }
    let rep = report::verify_model(&model, &opts)?;
    let bytes = match ctx.format(Format::Json) {
        Format::Json => json_bytes(&rep),
        Format::Csv => {
            let rows: Vec<IdentityRow> = rep
                .records
                .iter()
                .map(|r| IdentityRow {
                    name: &r.name,
                    tag: &r.tag,
                    max_rel_err: r.max_rel_err,
                    tolerance: r.tolerance,
                    pass: r.pass,
                })
                .collect();
            csv_bytes(&rows).map_err(Failure::Usage)?
        }
    };
    ctx.write(bytes)?;
    if rep.pass {
        Ok(())
    } else {
        for r in rep.failures() {
            eprintln!("identity {} failed: {:.3e} > {:.1e}", r.name, r.max_rel_err, r.tolerance);
        }
        Err(Failure::Identity)
    }
}

fn cmd_curvature(ctx: &Ctx, zeta: f64, random_point: bool) -> Result<(), Failure> {
    let base = ctx.model()?;
    let m = base.zeta_family(zeta)?;
    let p = if random_point {
        report::sample_points(&base, 1, ctx.global.seed).remove(0)
    } else {
        base.base_point()
    };
    let rep = PointCurvature::compute(&m, &p).report(&m);
    if ctx.format(Format::Json) == Format::Csv {
        return Err(Failure::Usage("curvature reports are JSON only".into()));
    }
    ctx.write(json_bytes(&rep))
}

#[derive(Serialize)]
struct ScalRow {
    zeta: f64,
    #[serde(rename = "s_C")]
    s_c: f64,
    s_c_formula: f64,
    scal_direct: f64,
    scal_relation: f64,
    scal_formula: f64,
    torsion_sq: f64,
    lc_ricci_norm: f64,
}

fn cmd_scal_table(ctx: &Ctx, grid: &[f64]) -> Result<(), Failure> {
    let base = ctx.model()?;
    let n = base.n();
    let p = base.base_point();
    let models = grid
        .iter()
        .map(|&z| base.zeta_family(z).map(|m| (z, m)))
        .collect::<Result<Vec<_>, _>>()?;
    use rayon::prelude::*;
    let rows: Vec<ScalRow> = models
        .par_iter()
        .map(|(z, m)| {
            let pc = PointCurvature::compute(m, &p);
            ScalRow {
                zeta: *z,
                s_c: pc.s_c,
                s_c_formula: expected::chern_scalar(n, *z),
                scal_direct: pc.scal_direct,
                scal_relation: pc.scal_relation,
                scal_formula: expected::riemann_scalar(n, *z),
                torsion_sq: pc.torsion_sq,
                lc_ricci_norm: pc.lc_ricci_norm(),
            }
        })
        .collect();
    ctx.write_rows(&rows, Format::Csv)
}

fn cmd_flow(ctx: &Ctx, grid: &[f64]) -> Result<(), Failure> {
    let model = ctx.model()?;
    let rows = flow::flow_diagnostics(&model, grid, &model.base_point())?;
    ctx.write_rows(&rows, Format::Csv)
}

fn cmd_gh(ctx: &Ctx, samples: usize, k: usize, times: &[f64]) -> Result<(), Failure> {
    let model = ctx.model()?;
    let cloud = ghlimit::sample_cloud(&model, ctx.global.c, samples, k, ctx.global.seed)?;
    let rep = ghlimit::collapse_report(&cloud, times)?;
    match ctx.format(Format::Csv) {
        Format::Csv => ctx.write(csv_bytes(&rep.rows).map_err(Failure::Usage)?)?,
        Format::Json => ctx.write(json_bytes(&rep))?,
    }
    if rep.rows.iter().all(|r| r.pass) {
        Ok(())
    } else {
        eprintln!("distortion bound violated at some times");
        Err(Failure::Identity)
    }
}

fn cmd_brieskorn(ctx: &Ctx, action: &BrieskornCommand) -> Result<(), Failure> {
    match action {
        BrieskornCommand::Check { tuple } => {
            let t: BrieskornTuple = tuple.parse()?;
            let rec = BrieskornRecord::of(&t);
            match ctx.format(Format::Json) {
                Format::Json => ctx.write(json_bytes(&rec)),
                Format::Csv => ctx.write_rows(&[flat(&rec)], Format::Csv),
            }
        }
        BrieskornCommand::Scan { n, max } => {
            let recs: Vec<BrieskornRecord> = brieskorn::scan(*n, *max)?
                .iter()
                .map(BrieskornRecord::of)
                .collect();
            match ctx.format(Format::Json) {
                Format::Json => ctx.write(json_bytes(&recs)),
                Format::Csv => ctx.write_rows(&recs.iter().map(flat).collect::<Vec<_>>(), Format::Csv),
            }
        }
        BrieskornCommand::Exotic7 => {
            let recs: Vec<BrieskornRecord> =
                brieskorn::exotic7_catalog().iter().map(|e| e.record()).collect();
            match ctx.format(Format::Json) {
                Format::Json => ctx.write(json_bytes(&recs)),
                Format::Csv => ctx.write_rows(&recs.iter().map(flat).collect::<Vec<_>>(), Format::Csv),
            }
        }
        BrieskornCommand::Profile { n } => {
            let p = brieskorn::curvature_profile(*n)?;
            match ctx.format(Format::Json) {
                Format::Json => ctx.write(json_bytes(&p)),
                Format::Csv => ctx.write_rows(&[p], Format::Csv),
            }
        }
    }
}

#[derive(Serialize)]
struct FlatRecord {
    tuple: String,
    #[serde(rename = "S")]
    s: String,
    upper: String,
    verdict: String,
    k: Option<u32>,
    c3: Option<String>,
}

fn flat(r: &BrieskornRecord) -> FlatRecord {
    FlatRecord {
        tuple: r.tuple.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","),
        s: r.s.clone(),
        upper: r.upper.clone(),
        verdict: r.verdict.to_string(),
        k: r.k,
        c3: r.c3.map(|v| v.to_string()),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("VAISMANLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Failure::Usage(format!("VAISMANLAB_THREADS='{v}' is not a positive integer")))?;
    // a second initialisation in the same process is harmless
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    let ctx = Ctx { global: cli.global };
    match &cli.command {
        Command::Verify { points } => cmd_verify(&ctx, *points),
        Command::Curvature { zeta, random_point } => cmd_curvature(&ctx, *zeta, *random_point),
        Command::ScalTable { zeta } => cmd_scal_table(&ctx, &zeta.0),
        Command::Flow { t } => cmd_flow(&ctx, &t.0),
        Command::Gh { samples, k, t } => cmd_gh(&ctx, *samples, *k, &t.0),
        Command::Brieskorn { action } => cmd_brieskorn(&ctx, action),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Identity) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
