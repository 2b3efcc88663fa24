//! Command implementations for the `synthcycle` binary.
//!
//! Exit codes: 0 success, 2 usage or domain error, 3 corrupt input data.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use synthcycle::capacity::CapacityPoint;
use synthcycle::codec::{decode_batch, BitString, Codec, CodecConfig, EncodedBatch, Scheme};
use synthcycle::cost::{interval_of_interest, minimize_rho, minimize_with_alphabet_bound, rho_star, CostParams};
use synthcycle::counting::{brute_force_count, subsequence_count, BRUTE_FORCE_MAX_CYCLES};
use synthcycle::sweep::{Curve, OutputFormat, RhoGrid, SweepRequest, DEFAULT_CYCLES};
use synthcycle::Error;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CORRUPT: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "synthcycle", version, about = "Cycle-complexity tools for cyclic DNA synthesis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fixed-length, flexible-length or finite-C capacity
    Capacity(CapacityArgs),
    /// Distinct length-L subsequences of A_q[C]
    Count(CountArgs),
    /// Encode a file into an oligo batch (JSON)
    Encode(EncodeArgs),
    /// Decode a batch back into the original file
    Decode(DecodeArgs),
    /// Emit curve data as CSV or JSON
    Sweep(SweepArgs),
    /// Minimize synthesis cost over ρ (and q)
    Cost(CostArgs),
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long, conflicts_with = "flexible", required_unless_present = "flexible")]
    pub rho: Option<f64>,
    #[arg(long)]
    pub flexible: bool,
    /// Report log2 M_q(C, ⌊ρC⌋) / C instead of the limit
    #[arg(long, requires = "rho")]
    pub cycles: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub cycles: u64,
    #[arg(long)]
    pub length: u64,
    /// Enumerate subsequences directly (C <= 20)
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Lookup,
    Base,
    Multisize,
    Balanced,
    Window,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Scheme {
        match s {
            SchemeArg::Lookup => Scheme::Lookup,
            SchemeArg::Base => Scheme::Base,
            SchemeArg::Multisize => Scheme::Multisize,
            SchemeArg::Balanced => Scheme::Balanced,
            SchemeArg::Window => Scheme::Window,
        }
    }
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[arg(long, value_enum)]
    pub scheme: SchemeArg,
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub rho: Option<f64>,
    /// Lookup: periods of A_q per block
    #[arg(long)]
    pub d: Option<u64>,
    /// Base and multisize: oligo length
    #[arg(long)]
    pub length: Option<usize>,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long = "out")]
    pub output: PathBuf,
    /// Also write the oligos as text, one per line
    #[arg(long)]
    pub oligos: Option<PathBuf>,
    /// Write oligo text as A/C/G/T (q = 4 only)
    #[arg(long, requires = "oligos")]
    pub dna: bool,
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long = "out")]
    pub output: PathBuf,
    /// Require the batch to use this scheme
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
    /// Require the batch to use this alphabet size
    #[arg(long)]
    pub q: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveArg {
    CapVsRho,
    RateVsRho,
    RhoStar,
    CostVsRho,
    EmpiricalConvergence,
}

impl From<CurveArg> for Curve {
    fn from(c: CurveArg) -> Curve {
        match c {
            CurveArg::CapVsRho => Curve::CapVsRho,
            CurveArg::RateVsRho => Curve::RateVsRho,
            CurveArg::RhoStar => Curve::RhoStar,
            CurveArg::CostVsRho => Curve::CostVsRho,
            CurveArg::EmpiricalConvergence => Curve::EmpiricalConvergence,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub curve: CurveArg,
    /// Alphabet sizes, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    pub q: Vec<u32>,
    #[arg(long, default_value_t = 0.0)]
    pub rho_start: f64,
    #[arg(long, default_value_t = 1.0)]
    pub rho_stop: f64,
    #[arg(long, default_value_t = 0.01)]
    pub rho_step: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,
    /// Cycle counts for empirical-convergence
    #[arg(long, value_delimiter = ',')]
    pub cycles: Vec<u64>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1000)]
    pub bits: u64,
    /// Cycles per oligo for cost-vs-rho
    #[arg(long, default_value_t = 100)]
    pub oligo_cycles: u64,
    /// Write to a file instead of stdout
    #[arg(long = "out")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub bits: u64,
    #[arg(long)]
    pub cycles: u64,
    #[arg(long, conflicts_with = "max_q", required_unless_present = "max_q")]
    pub q: Option<u32>,
    #[arg(long)]
    pub max_q: Option<u32>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_corruption() => EXIT_CORRUPT,
            _ => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn write(path: &Path, data: &[u8]) -> CliResult<()> {
    fs::write(path, data).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })
}

fn emit_json(out: &mut dyn Write, v: &Value) -> CliResult<()> {
    emit(out, &format!("{}\n", serde_json::to_string_pretty(v).expect("value serializes")))
}

pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Capacity(a) => capacity(a, out),
        Command::Count(a) => count(a, out),
        Command::Encode(a) => encode(a, out),
        Command::Decode(a) => decode(a, out),
        Command::Sweep(a) => sweep(a, out),
        Command::Cost(a) => cost(a, out),
    }
}

fn capacity(a: CapacityArgs, out: &mut dyn Write) -> CliResult<()> {
    if a.q < 2 {
        return Err(CliError::Usage(format!("--q must be at least 2, got {}", a.q)));
    }
    let point = match (a.rho, a.cycles) {
        (Some(rho), Some(c)) => CapacityPoint::empirical(a.q, c, rho)?,
        (Some(rho), None) => CapacityPoint::closed_form(a.q, rho)?,
        _ => CapacityPoint::flexible(a.q)?,
    };
    let mut v = json!({ "q": point.q });
    if let Some(rho) = point.rho {
        v["rho"] = json!(rho);
    }
    if let Some(c) = a.cycles {
        v["cycles"] = json!(c);
    }
    v["cap"] = json!(point.value);
    v["kind"] = serde_json::to_value(point.kind).expect("kind serializes");
    emit_json(out, &v)
}

fn count(a: CountArgs, out: &mut dyn Write) -> CliResult<()> {
    if a.length > a.cycles {
        return Err(CliError::Usage(format!("--length {} exceeds --cycles {}", a.length, a.cycles)));
    }
    let n = if a.oracle {
        if a.cycles > BRUTE_FORCE_MAX_CYCLES {
            return Err(CliError::Usage(format!("--oracle supports --cycles <= {BRUTE_FORCE_MAX_CYCLES}")));
        }
        brute_force_count(a.q, a.cycles, a.length)?
    } else {
        subsequence_count(a.q, a.cycles, a.length)?
    };
    emit(out, &format!("{n}\n"))
}

fn encode(a: EncodeArgs, out: &mut dyn Write) -> CliResult<()> {
    let cfg = CodecConfig { scheme: a.scheme.into(), q: a.q, rho: a.rho, d: a.d, length: a.length };
    let codec = Codec::from_config(&cfg)?;
    let payload = BitString::from_bytes(&read(&a.input)?);
    let batch = codec.encode(&payload)?;
    let text = if a.pretty { batch.to_json_pretty() } else { batch.to_json() };
    write(&a.output, format!("{text}\n").as_bytes())?;
    if let Some(path) = &a.oligos {
        let mut lines = String::new();
        for o in &batch.oligos {
            lines += &if a.dna { o.to_dna()? } else { o.to_string() };
            lines.push('\n');
        }
        write(path, lines.as_bytes())?;
    }
    let profile = codec.profile();
    let mut v = serde_json::to_value(&profile).expect("profile serializes");
    v["cycles_per_bit"] = json!(profile.cycles_per_bit());
    v["payload_bits"] = json!(batch.payload_bits);
    v["oligos"] = json!(batch.oligos.len());
    v["symbols"] = json!(batch.symbol_count());
    v["program_cycles"] = json!(batch.spec.total_cycles());
    emit_json(out, &v)
}

fn decode(a: DecodeArgs, out: &mut dyn Write) -> CliResult<()> {
    let raw = read(&a.input)?;
    let text = String::from_utf8(raw).map_err(|_| Error::CorruptStream("batch is not UTF-8".into()))?;
    let batch = EncodedBatch::from_json(&text)?;
    if let Some(s) = a.scheme {
        let s: Scheme = s.into();
        if s != batch.scheme {
            return Err(CliError::Usage(format!("--scheme {s} does not match the batch scheme {}", batch.scheme)));
        }
    }
    if let Some(q) = a.q {
        if q != batch.q {
            return Err(CliError::Usage(format!("--q {q} does not match the batch alphabet {}", batch.q)));
        }
    }
    let bits = decode_batch(&batch)?;
    write(&a.output, &bits.to_bytes())?;
    emit_json(
        out,
        &json!({ "scheme": batch.scheme, "q": batch.q, "payload_bits": bits.len(), "bytes": bits.len().div_ceil(8) }),
    )
}

fn sweep(a: SweepArgs, out: &mut dyn Write) -> CliResult<()> {
    let grid = RhoGrid::new(a.rho_start, a.rho_stop, a.rho_step)?;
    let mut req = SweepRequest::new(a.curve.into(), a.q, grid);
    req.format = match a.format {
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Json => OutputFormat::Json,
    };
    req.cycles = if a.cycles.is_empty() { DEFAULT_CYCLES.to_vec() } else { a.cycles };
    req.cost = CostParams::new(a.alpha, a.beta, a.bits, a.oligo_cycles)?;
    let mut text = req.render()?;
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match a.output {
        Some(path) => write(&path, text.as_bytes()),
        None => emit(out, &text),
    }
}

fn cost(a: CostArgs, out: &mut dyn Write) -> CliResult<()> {
    let params = CostParams::new(a.alpha, a.beta, a.bits, a.cycles)?;
    let opt = match (a.q, a.max_q) {
        (Some(q), _) => minimize_rho(&params, q)?,
        (None, Some(max_q)) => minimize_with_alphabet_bound(&params, max_q)?,
        (None, None) => return Err(CliError::Usage("one of --q or --max-q is required".into())),
    };
    let (lo, hi) = interval_of_interest(opt.q)?;
    emit_json(
        out,
        &json!({
            "q": opt.q,
            "rho_opt": opt.rho,
            "cost_opt": opt.cost,
            "rho_star": rho_star(opt.q)?,
            "interval": [lo, hi],
        }),
    )
}
