//! `mckay`: exact root-system and partition-function computations from the
//! command line.
//!
//! Exit codes: 0 on success, 1 on a domain error (a stability parameter on a
//! wall, a failed check), 2 on a usage error.

mod cache;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use mckay::{
    affine_positive_real_roots, bps_extract, chamber_partition_function, check_crepant,
    check_gw_pt, finite_positive_roots, framed_mckay_quiver, gw_context, gw_factors,
    imaginary_root, mckay_quiver, q_context, verify_d5_example, walls, z_dt, z_gw, z_ncdt, z_pt,
    ArrowKind, ChamberResult, DynkinLabel, PartitionKind, QuiverData, Sign, StabilityParameter,
    Vertex, WallKind,
};

#[derive(Parser)]
#[command(
    name = "mckay",
    version,
    about = "Exact partition functions for ADE McKay quivers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format. `factors` applies to the partition command only.
    #[arg(long, global = true, value_enum, default_value = "plain")]
    output: OutputMode,

    /// Directory for the result cache (default: $MCKAY_CACHE_DIR, if set).
    #[arg(long, global = true, value_name = "PATH")]
    cache_dir: Option<PathBuf>,

    /// Disable the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Json,
    Plain,
    Factors,
}

#[derive(Subcommand)]
enum Command {
    /// List positive roots: finite by default, affine real roots with --affine.
    Roots {
        /// Dynkin label, e.g. "A3", "D5", "E7".
        label: String,
        /// List affine positive real roots instead of finite ones.
        #[arg(long)]
        affine: bool,
        /// Entry-sum bound for affine roots (default: twice the entry sum of delta).
        #[arg(long, requires = "affine")]
        bound: Option<i64>,
    },
    /// Print the McKay quiver with its superpotential.
    Quiver {
        /// Dynkin label, e.g. "A3", "D5", "E7".
        label: String,
        /// Add the framing vertex and arrow.
        #[arg(long)]
        framed: bool,
    },
    /// List stability walls up to an entry-sum bound.
    Walls {
        /// Dynkin label, e.g. "A3", "D5", "E7".
        label: String,
        /// Entry-sum bound on wall normals (default: twice the entry sum of delta).
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Compute a partition function series.
    Partition {
        /// Dynkin label, e.g. "A3", "D5", "E7".
        #[arg(long)]
        label: String,
        /// One of dt+, dt-, pt+, pt-, ncdt, gw, or chamber (case-insensitive).
        #[arg(long)]
        kind: String,
        /// Truncation order.
        #[arg(long)]
        order: u32,
        /// Stability parameter for --kind chamber: comma-separated rationals,
        /// e.g. "1,-2/3,4". Forbidden for the other kinds.
        #[arg(long)]
        zeta: Option<String>,
    },
    /// Run a verifier; exit 0 on pass, 1 on failure.
    Check {
        /// Dynkin label; not needed for --which d5.
        #[arg(long)]
        label: Option<String>,
        /// Which verifier to run.
        #[arg(long, value_enum)]
        which: WhichCheck,
        /// Truncation order.
        #[arg(long)]
        order: u32,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum WhichCheck {
    GwPt,
    Crepant,
    D5,
    Bps,
}

enum Failure {
    /// Exit code 1: the computation itself cannot proceed or a check failed.
    Domain(String),
    /// Exit code 2: the request is malformed.
    Usage(String),
}

type CmdResult = Result<(), Failure>;

/// Writes the payload to stdout. A consumer that stopped reading (e.g.
/// `mckay roots E8 | head`) is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: failed writing to stdout: {e}");
        std::process::exit(1);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let output = cli.output;
    match cli.command {
        Command::Roots {
            label,
            affine,
            bound,
        } => cmd_roots(&label, affine, bound, output),
        Command::Quiver { label, framed } => cmd_quiver(&label, framed, output),
        Command::Walls { label, bound } => cmd_walls(&label, bound, output),
        Command::Partition {
            label,
            kind,
            order,
            zeta,
        } => {
            let cache_dir = cache::resolve_dir(cli.cache_dir, cli.no_cache);
            cmd_partition(&label, &kind, order, zeta.as_deref(), cache_dir, output)
        }
        Command::Check {
            label,
            which,
            order,
        } => cmd_check(label.as_deref(), which, order, output),
    }
}

fn domain(e: mckay::Error) -> Failure {
    Failure::Domain(e.to_string())
}

fn rendering(e: String) -> Failure {
    Failure::Domain(e)
}

fn parse_label(s: &str) -> Result<DynkinLabel, Failure> {
    s.parse().map_err(|_| {
        Failure::Usage(format!(
            "invalid label {s:?}: expected a family letter and rank, e.g. \"A3\", \"D5\", \"E7\""
        ))
    })
}

/// Only the partition command has a factor-list rendering.
fn reject_factors_output(output: OutputMode) -> CmdResult {
    if output == OutputMode::Factors {
        return Err(Failure::Usage(
            "--output factors applies to the partition command only".to_string(),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// roots
// ---------------------------------------------------------------------------

fn cmd_roots(label: &str, affine: bool, bound: Option<i64>, output: OutputMode) -> CmdResult {
    reject_factors_output(output)?;
    let l = parse_label(label)?;
    if affine {
        let bound = bound.unwrap_or_else(|| 2 * imaginary_root(l).total());
        let roots = affine_positive_real_roots(l, bound);
        match output {
            OutputMode::Plain => {
                let mut text = String::new();
                for root in &roots {
                    text.push_str(&format!("{}\n", root.vector()));
                }
                emit(&text);
            }
            OutputMode::Json => {
                let items: Vec<Value> = roots
                    .iter()
                    .map(|r| {
                        json!({
                            "vector": r.vector().entries(),
                            "m": r.m(),
                            "sign": r.sign().to_string(),
                            "beta": r.beta_finite().entries(),
                        })
                    })
                    .collect();
                let payload = json!({
                    "label": l.to_string(),
                    "affine": true,
                    "bound": bound,
                    "roots": items,
                });
                emit(&render::json_pretty(&payload));
            }
            OutputMode::Factors => unreachable!(),
        }
    } else {
        let roots = finite_positive_roots(l);
        match output {
            OutputMode::Plain => {
                let mut text = String::new();
                for root in &roots {
                    text.push_str(&format!("{root}\n"));
                }
                emit(&text);
            }
            OutputMode::Json => {
                let items: Vec<Value> = roots.iter().map(|r| json!(r.entries())).collect();
                let payload = json!({
                    "label": l.to_string(),
                    "affine": false,
                    "roots": items,
                });
                emit(&render::json_pretty(&payload));
            }
            OutputMode::Factors => unreachable!(),
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// quiver
// ---------------------------------------------------------------------------

fn vertex_text(v: &Vertex) -> String {
    match v {
        Vertex::Node(i) => i.to_string(),
        Vertex::Framing => "f".to_string(),
    }
}

fn vertex_json(v: &Vertex) -> Value {
    match v {
        Vertex::Node(i) => json!(i),
        Vertex::Framing => json!("f"),
    }
}

fn arrow_kind_text(kind: &ArrowKind) -> &'static str {
    match kind {
        ArrowKind::Edge => "edge",
        ArrowKind::Loop => "loop",
        ArrowKind::Framing => "framing",
    }
}

fn cmd_quiver(label: &str, framed: bool, output: OutputMode) -> CmdResult {
    reject_factors_output(output)?;
    let l = parse_label(label)?;
    let quiver: QuiverData = if framed {
        framed_mckay_quiver(l)
    } else {
        mckay_quiver(l)
    };
    match output {
        OutputMode::Plain => {
            let mut text = String::new();
            text.push_str(&format!("label: {}\n", quiver.label()));
            text.push_str(&format!("vertices: {}\n", quiver.node_count()));
            text.push_str(&format!("framed: {}\n", quiver.is_framed()));
            for arrow in quiver.arrows() {
                text.push_str(&format!(
                    "arrow {}: {} -> {} [{}]\n",
                    arrow.name,
                    vertex_text(&arrow.source),
                    vertex_text(&arrow.target),
                    arrow_kind_text(&arrow.kind),
                ));
            }
            for term in quiver.superpotential() {
                text.push_str(&format!(
                    "{} [{}, {}, {}]\n",
                    term.sign, term.path[0], term.path[1], term.path[2]
                ));
            }
            emit(&text);
        }
        OutputMode::Json => {
            let arrows: Vec<Value> = quiver
                .arrows()
                .iter()
                .map(|a| {
                    json!({
                        "name": a.name,
                        "source": vertex_json(&a.source),
                        "target": vertex_json(&a.target),
                        "kind": arrow_kind_text(&a.kind),
                    })
                })
                .collect();
            let superpotential: Vec<Value> = quiver
                .superpotential()
                .iter()
                .map(|t| {
                    json!({
                        "sign": t.sign.to_string(),
                        "path": t.path,
                    })
                })
                .collect();
            let payload = json!({
                "label": quiver.label().to_string(),
                "framed": quiver.is_framed(),
                "vertices": quiver.node_count(),
                "arrows": arrows,
                "superpotential": superpotential,
            });
            emit(&render::json_pretty(&payload));
        }
        OutputMode::Factors => unreachable!(),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// walls
// ---------------------------------------------------------------------------

fn cmd_walls(label: &str, bound: Option<i64>, output: OutputMode) -> CmdResult {
    reject_factors_output(output)?;
    let l = parse_label(label)?;
    let bound = bound.unwrap_or_else(|| 2 * imaginary_root(l).total());
    let list = walls(l, bound);
    match output {
        OutputMode::Plain => {
            let mut text = String::new();
            for wall in &list {
                text.push_str(&format!("{wall}\n"));
            }
            emit(&text);
        }
        OutputMode::Json => {
            let items: Vec<Value> = list
                .iter()
                .map(|w| {
                    let kind = match w.kind() {
                        WallKind::Real(root) => json!({
                            "type": "real",
                            "m": root.m(),
                            "sign": root.sign().to_string(),
                            "beta": root.beta_finite().entries(),
                        }),
                        WallKind::Imaginary => json!({ "type": "imaginary" }),
                    };
                    json!({ "normal": w.normal().entries(), "kind": kind })
                })
                .collect();
            let payload = json!({
                "label": l.to_string(),
                "bound": bound,
                "walls": items,
            });
            emit(&render::json_pretty(&payload));
        }
        OutputMode::Factors => unreachable!(),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// partition
// ---------------------------------------------------------------------------

enum KindArg {
    Fixed(PartitionKind),
    Chamber,
}

fn parse_kind(s: &str) -> Result<KindArg, Failure> {
    if s.trim().eq_ignore_ascii_case("chamber") {
        return Ok(KindArg::Chamber);
    }
    s.parse::<PartitionKind>()
        .map(KindArg::Fixed)
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn parse_rational(text: &str) -> Option<BigRational> {
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let numer: BigInt = numer.parse().ok()?;
    let denom: BigInt = denom.parse().ok()?;
    if denom == BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(numer, denom))
}

fn parse_zeta(text: &str) -> Result<Vec<BigRational>, Failure> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            parse_rational(part).ok_or_else(|| {
                Failure::Usage(format!(
                    "invalid zeta entry {part:?}: expected an integer or \"p/q\""
                ))
            })
        })
        .collect()
}

/// The full result payload. Everything any output mode needs is in here, so
/// a cached payload renders identically to a fresh one.
fn partition_payload(
    l: DynkinLabel,
    kind: &KindArg,
    kind_name: &str,
    order: u32,
    zeta: Option<&[BigRational]>,
) -> Result<Value, Failure> {
    match kind {
        KindArg::Fixed(PartitionKind::Gw) => {
            let series = z_gw(l, order).map_err(domain)?;
            let ctx = gw_context(l, order).map_err(domain)?;
            let factors: Vec<Value> = gw_factors(l, order)
                .map_err(domain)?
                .iter()
                .map(|f| f.to_json(&ctx))
                .collect();
            Ok(json!({
                "label": l.to_string(),
                "kind": kind_name,
                "order": order,
                "zeta": Value::Null,
                "assumed_dt_pt": Value::Null,
                "macmahon_exponent": 0,
                "macmahon": Value::Null,
                "series": series.to_json(),
                "factors": factors,
            }))
        }
        KindArg::Fixed(fixed) => {
            let result = match fixed {
                PartitionKind::DtPlus => z_dt(l, Sign::Plus, order),
                PartitionKind::DtMinus => z_dt(l, Sign::Minus, order),
                PartitionKind::PtPlus => z_pt(l, Sign::Plus, order),
                PartitionKind::PtMinus => z_pt(l, Sign::Minus, order),
                PartitionKind::Ncdt => z_ncdt(l, order),
                PartitionKind::Gw => unreachable!("handled above"),
            }
            .map_err(domain)?;
            chamber_payload(l, kind_name, order, Value::Null, &result)
        }
        KindArg::Chamber => {
            let zeta = zeta.expect("validated by the caller");
            let parameter = StabilityParameter::exact(zeta.to_vec());
            let result = chamber_partition_function(l, &parameter, order).map_err(domain)?;
            let zeta_json = json!(zeta.iter().map(ToString::to_string).collect::<Vec<_>>());
            chamber_payload(l, kind_name, order, zeta_json, &result)
        }
    }
}

fn chamber_payload(
    l: DynkinLabel,
    kind_name: &str,
    order: u32,
    zeta_json: Value,
    result: &ChamberResult,
) -> Result<Value, Failure> {
    let ctx = q_context(l, order).map_err(domain)?;
    let factors: Vec<Value> = result.factors.iter().map(|f| f.to_json(&ctx)).collect();
    let macmahon = if result.macmahon_exponent != 0 {
        Value::String(format!(
            "M(-q^{})^{}",
            imaginary_root(l),
            result.macmahon_exponent
        ))
    } else {
        Value::Null
    };
    Ok(json!({
        "label": l.to_string(),
        "kind": kind_name,
        "order": order,
        "zeta": zeta_json,
        "assumed_dt_pt": result.assumed_dt_pt,
        "macmahon_exponent": result.macmahon_exponent,
        "macmahon": macmahon,
        "series": result.series.to_json(),
        "factors": factors,
    }))
}

fn cmd_partition(
    label: &str,
    kind_text: &str,
    order: u32,
    zeta_text: Option<&str>,
    cache_dir: Option<PathBuf>,
    output: OutputMode,
) -> CmdResult {
    let l = parse_label(label)?;
    let kind = parse_kind(kind_text)?;
    let kind_name = match &kind {
        KindArg::Fixed(fixed) => fixed.to_string(),
        KindArg::Chamber => "chamber".to_string(),
    };

    let zeta = match (&kind, zeta_text) {
        (KindArg::Chamber, Some(text)) => Some(parse_zeta(text)?),
        (KindArg::Chamber, None) => {
            return Err(Failure::Usage(
                "--kind chamber requires --zeta".to_string(),
            ));
        }
        (KindArg::Fixed(_), Some(_)) => {
            return Err(Failure::Usage(format!(
                "--zeta only applies to --kind chamber, not {kind_name:?}"
            )));
        }
        (KindArg::Fixed(_), None) => None,
    };
    if let Some(zeta) = &zeta {
        let expected = l.rank() as usize + 1;
        if zeta.len() != expected {
            return Err(Failure::Usage(format!(
                "zeta for {l} needs {expected} entries, got {}",
                zeta.len()
            )));
        }
    }

    let config = json!({
        "label": l.to_string(),
        "kind": kind_name,
        "order": order,
        "zeta": zeta
            .as_ref()
            .map(|z| json!(z.iter().map(ToString::to_string).collect::<Vec<_>>()))
            .unwrap_or(Value::Null),
    });
    let key = cache::key(&config);

    let mut cache_hit = false;
    let payload = match &cache_dir {
        Some(dir) => match cache::load(dir, &key) {
            Some(cached) => {
                cache_hit = true;
                cached
            }
            None => {
                let fresh = partition_payload(l, &kind, &kind_name, order, zeta.as_deref())?;
                if let Err(e) = cache::store(dir, &key, &config, &fresh) {
                    eprintln!("warning: cache write failed: {e}");
                }
                fresh
            }
        },
        None => partition_payload(l, &kind, &kind_name, order, zeta.as_deref())?,
    };
    if cache_hit {
        eprintln!("cache hit: {key}");
    }

    match output {
        OutputMode::Json => emit(&render::json_pretty(&payload)),
        OutputMode::Plain => {
            let series = render::get(&payload, "series").map_err(rendering)?;
            emit(&render::series_plain(series).map_err(rendering)?);
        }
        OutputMode::Factors => {
            emit(&render::factors_plain(&payload).map_err(rendering)?);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

fn cmd_check(
    label: Option<&str>,
    which: WhichCheck,
    order: u32,
    output: OutputMode,
) -> CmdResult {
    reject_factors_output(output)?;
    let named_label = label.map(parse_label).transpose()?;
    let require_label = |name: &str| {
        named_label.ok_or_else(|| Failure::Usage(format!("--which {name} requires --label")))
    };

    let (name, label_json, pass, report) = match which {
        WhichCheck::GwPt => {
            let l = require_label("gw-pt")?;
            let report = check_gw_pt(l, order).map_err(domain)?;
            ("gw-pt", json!(l.to_string()), report.pass, report.to_json())
        }
        WhichCheck::Crepant => {
            let l = require_label("crepant")?;
            let report = check_crepant(l, order).map_err(domain)?;
            (
                "crepant",
                json!(l.to_string()),
                report.pass,
                report.to_json(),
            )
        }
        WhichCheck::D5 => {
            if let Some(l) = named_label {
                if l.to_string() != "D5" {
                    return Err(Failure::Usage(format!(
                        "--which d5 checks the D5 data; --label {l} does not apply"
                    )));
                }
            }
            let report = verify_d5_example(order).map_err(domain)?;
            ("d5", json!("D5"), report.pass(), report.to_json())
        }
        WhichCheck::Bps => {
            let l = require_label("bps")?;
            let table = bps_extract(l, order).map_err(domain)?;
            ("bps", json!(l.to_string()), table.pass(), table.to_json())
        }
    };

    let payload = json!({
        "check": name,
        "label": label_json,
        "order": order,
        "pass": pass,
        "report": report,
    });
    match output {
        OutputMode::Json => emit(&render::json_pretty(&payload)),
        OutputMode::Plain => emit(&render::flatten_plain(&payload)),
        OutputMode::Factors => unreachable!(),
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Domain(format!("{name} check failed")))
    }
}
