//! darboux: generate confluent partner potentials and their bound states as
//! plottable datasets, scan the nonsingularity domain of D, report band
//! structure and run the verification suite.

mod config;
mod output;
mod verify_cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand};

use darboux::grid::GridSpec;
use darboux::models::{lame_bands, lame_potential, BlochBranch, FreeParticleSeed, LameSeed,
    Orientation};
use darboux::susy::{confluent_partner_differential, singularity_scan, ConfluentSeed,
    TransformResult};
use darboux::verify::band_edges_numeric;

use config::{resolve, BranchChoice, GridConfig, ResolvedModel, RunConfig};
use output::{resolve_output, BandsDataset, Format, PartnerDataset, ScanDataset};

#[derive(Parser)]
#[command(name = "darboux", version, about = "Confluent Darboux partner potentials")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit a partner potential dataset (x, V, Vt, psi, psi2)
    Partner(PartnerArgs),
    /// Scan a range of D values for singularities of w
    #[command(name = "scan-d")]
    ScanD(ScanArgs),
    /// Report analytic and numeric band edges of the Lame potential
    Bands(BandsArgs),
    /// Run the invariant and oracle suite
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Named parameter profile: fig1, fig3 or fig4
    #[arg(long)]
    preset: Option<String>,
    /// JSON config file (same schema as the emitted metadata block)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Model: free or lame
    #[arg(long)]
    model: Option<String>,
    /// Free-particle decay rate kappa1 (epsilon1 = -kappa1^2)
    #[arg(long, allow_negative_numbers = true)]
    kappa: Option<f64>,
    /// Lame modulus parameter, 0 < m < 1
    #[arg(long)]
    m: Option<f64>,
    /// Factorization energy epsilon1
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    /// Displacement constant D of the transformation function
    #[arg(long, allow_negative_numbers = true)]
    d: Option<f64>,
    /// Translation of the partner (free: center of the well via D)
    #[arg(long, allow_negative_numbers = true)]
    x0: Option<f64>,
    /// Bloch branch for lame: auto, beta or inverse
    #[arg(long)]
    branch: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    x_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x_max: Option<f64>,
    #[arg(long)]
    n_points: Option<usize>,
}

impl ModelArgs {
    fn layered(&self) -> Result<RunConfig> {
        let mut cfg = match &self.preset {
            Some(p) => RunConfig::preset(p)?,
            None => RunConfig::default(),
        };
        if let Some(path) = &self.config {
            cfg = cfg.merged(RunConfig::from_file(path)?);
        }
        let grid = match (self.x_min, self.x_max, self.n_points) {
            (None, None, None) => None,
            (x_min, x_max, n_points) => {
                let base = cfg.grid.unwrap_or_default();
                Some(GridConfig {
                    x_min: x_min.unwrap_or(base.x_min),
                    x_max: x_max.unwrap_or(base.x_max),
                    n_points: n_points.unwrap_or(base.n_points),
                })
            }
        };
        Ok(cfg.merged(RunConfig {
            model: self.model.clone(),
            kappa: self.kappa,
            m: self.m,
            epsilon: self.epsilon,
            d: self.d,
            x0: self.x0,
            branch: self.branch.clone(),
            grid,
        }))
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; defaults to $DARBOUX_OUT_DIR/<command>.<ext>
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Output format: csv or json
    #[arg(long, default_value = "csv")]
    format: String,
}

impl OutputArgs {
    fn format(&self) -> Result<Format> {
        match self.format.as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => bail!("unknown format '{other}' (expected csv or json)"),
        }
    }

    fn path(&self, default_stem: &str) -> Result<PathBuf> {
        let ext = match self.format.as_str() {
            "json" => "json",
            _ => "csv",
        };
        Ok(resolve_output(
            self.output.as_deref(),
            &format!("{default_stem}.{ext}"),
        ))
    }
}

#[derive(Args)]
struct PartnerArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    out: OutputArgs,
    /// Also render a minimal SVG line chart to this path
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    out: OutputArgs,
    #[arg(long, allow_negative_numbers = true)]
    d_min: f64,
    #[arg(long, allow_negative_numbers = true)]
    d_max: f64,
    #[arg(long, default_value_t = 101)]
    samples: usize,
}

#[derive(Args)]
struct BandsArgs {
    /// Lame modulus parameter, 0 < m < 1
    #[arg(long)]
    m: f64,
    #[arg(long, default_value_t = 16)]
    periods: usize,
    #[arg(long, default_value_t = 80)]
    points_per_period: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run: elliptic, free, lame or all
    #[arg(long, default_value = "all")]
    suite: String,
}

/// A seed together with the potential it solves and run metadata.
struct PreparedModel {
    seed: ConfluentSeed,
    potential: Box<dyn Fn(f64) -> f64>,
    d: f64,
    metadata: serde_json::Value,
}

fn shifted_seed(seed: ConfluentSeed, x0: f64) -> ConfluentSeed {
    if x0 == 0.0 {
        return seed;
    }
    let ConfluentSeed {
        epsilon1,
        u1,
        du1_dx,
        du1_deps,
        d2u1_dxdeps,
    } = seed;
    ConfluentSeed {
        epsilon1,
        u1: Box::new(move |x| u1(x - x0)),
        du1_dx: Box::new(move |x| du1_dx(x - x0)),
        du1_deps: Box::new(move |x| du1_deps(x - x0)),
        d2u1_dxdeps: Box::new(move |x| d2u1_dxdeps(x - x0)),
    }
}

fn prepare(model: &ResolvedModel, grid: &GridConfig) -> Result<PreparedModel> {
    let spec = GridSpec::new(grid.x_min, grid.x_max, grid.n_points)?;
    match *model {
        ResolvedModel::Free { kappa, d, x0 } => {
            let seed = FreeParticleSeed::new(kappa, Orientation::Growing)?.confluent_seed();
            Ok(PreparedModel {
                seed,
                potential: Box::new(|_| 0.0),
                d,
                metadata: serde_json::json!({
                    "model": "free",
                    "kappa": kappa,
                    "epsilon": -kappa * kappa,
                    "d": d,
                    "x0": x0,
                    "grid": { "x_min": grid.x_min, "x_max": grid.x_max, "n_points": grid.n_points },
                    "version": env!("CARGO_PKG_VERSION"),
                }),
            })
        }
        ResolvedModel::Lame {
            m,
            epsilon,
            d,
            x0,
            branch,
        } => {
            let (lame, branch_name) = pick_branch(m, epsilon, d, x0, branch, &spec)?;
            let seed = shifted_seed(lame.confluent_seed(), x0);
            Ok(PreparedModel {
                seed,
                potential: Box::new(move |x| lame_potential(m, x - x0).unwrap_or(f64::NAN)),
                d,
                metadata: serde_json::json!({
                    "model": "lame",
                    "m": m,
                    "epsilon": epsilon,
                    "d": d,
                    "x0": x0,
                    "branch": branch_name,
                    "grid": { "x_min": grid.x_min, "x_max": grid.x_max, "n_points": grid.n_points },
                    "version": env!("CARGO_PKG_VERSION"),
                }),
            })
        }
    }
}

/// For lame, `auto` tries the beta branch and falls back to its inverse when
/// the requested D is singular for the first choice.
fn pick_branch(
    m: f64,
    epsilon: f64,
    d: f64,
    x0: f64,
    branch: BranchChoice,
    spec: &GridSpec,
) -> Result<(LameSeed, &'static str)> {
    let build = |b: BlochBranch| -> Result<LameSeed> { Ok(LameSeed::new(m, epsilon, b)?) };
    match branch {
        BranchChoice::Beta => Ok((build(BlochBranch::Beta)?, "beta")),
        BranchChoice::Inverse => Ok((build(BlochBranch::InverseBeta)?, "inverse")),
        BranchChoice::Auto => {
            let first = build(BlochBranch::Beta)?;
            let trial = confluent_partner_differential(
                &shifted_seed(first.confluent_seed(), x0),
                d,
                |x| lame_potential(m, x - x0).unwrap_or(f64::NAN),
                spec,
            );
            match trial {
                Ok(_) => Ok((first, "beta")),
                Err(darboux::Error::SingularTransform { .. }) => {
                    Ok((build(BlochBranch::InverseBeta)?, "inverse"))
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn transform_on_grid(prepared: &PreparedModel, grid: &GridConfig) -> Result<TransformResult> {
    let spec = GridSpec::new(grid.x_min, grid.x_max, grid.n_points)?;
    confluent_partner_differential(&prepared.seed, prepared.d, &prepared.potential, &spec)
        .map_err(|e| anyhow!("{e}"))
}

fn cmd_partner(args: PartnerArgs) -> Result<()> {
    let run = resolve(&args.model.layered()?)?;
    let prepared = prepare(&run.model, &run.grid)?;
    let result = transform_on_grid(&prepared, &run.grid)?;
    let spec = GridSpec::new(run.grid.x_min, run.grid.x_max, run.grid.n_points)?;
    let dataset = PartnerDataset {
        x: spec.points().collect(),
        v: spec.points().map(|x| (prepared.potential)(x)).collect(),
        vt: result.partner_potential.values.clone(),
        psi: result.bound_state.values.clone(),
        psi2: result.bound_state.values.iter().map(|p| p * p).collect(),
        metadata: prepared.metadata,
    };
    let path = args.out.path("partner")?;
    dataset.write(&path, args.out.format()?)?;
    println!("wrote {}", path.display());
    if let Some(svg) = &args.svg {
        dataset.write_svg(svg)?;
        println!("wrote {}", svg.display());
    }
    Ok(())
}

fn cmd_scan_d(args: ScanArgs) -> Result<()> {
    if !(args.d_max > args.d_min) || args.samples < 2 {
        bail!(
            "empty scan range [{}, {}] with {} samples",
            args.d_min,
            args.d_max,
            args.samples
        );
    }
    let mut cfg = args.model.layered()?;
    if cfg.d.is_none() {
        cfg.d = Some(args.d_min); // resolve() wants a D; the scan supplies its own
    }
    let run = resolve(&cfg)?;
    let prepared = prepare(&run.model, &run.grid)?;
    let spec = GridSpec::new(run.grid.x_min, run.grid.x_max, run.grid.n_points)?;
    let points = singularity_scan(&prepared.seed, args.d_min, args.d_max, args.samples, &spec)?;
    let mut metadata = prepared.metadata;
    metadata["scan"] = serde_json::json!({
        "d_min": args.d_min,
        "d_max": args.d_max,
        "samples": args.samples,
    });
    let dataset = ScanDataset {
        rows: points.iter().map(|p| (p.d, p.singular, p.crossing)).collect(),
        metadata,
    };
    let path = args.out.path("scan-d")?;
    dataset.write(&path, args.out.format()?)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_bands(args: BandsArgs) -> Result<()> {
    let analytic = lame_bands(args.m)?;
    let t = 2.0 * darboux::elliptic::complete_k(args.m)?;
    let numeric = band_edges_numeric(
        |x| lame_potential(args.m, x).unwrap_or(f64::NAN),
        t,
        args.periods,
        args.points_per_period,
    )?;
    let labels = ["band_min", "gap_start", "gap_end"];
    let dataset = BandsDataset {
        rows: labels
            .iter()
            .zip(analytic.band_edges.iter().zip(numeric.iter()))
            .map(|(l, (a, n))| (l.to_string(), *a, *n))
            .collect(),
        metadata: serde_json::json!({
            "model": "lame",
            "m": args.m,
            "periods": args.periods,
            "points_per_period": args.points_per_period,
            "finite_gap": [analytic.band_edges[1], analytic.band_edges[2]],
            "version": env!("CARGO_PKG_VERSION"),
        }),
    };
    let path = args.out.path("bands")?;
    dataset.write(&path, args.out.format()?)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Partner(args) => cmd_partner(args),
        Cmd::ScanD(args) => cmd_scan_d(args),
        Cmd::Bands(args) => cmd_bands(args),
        Cmd::Verify(args) => verify_cmd::run(&args.suite),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
