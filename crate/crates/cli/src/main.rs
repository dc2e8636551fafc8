mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pkl_core::root_datum::DatumError;
use pkl_core::soergel::SoergelError;
use pkl_core::tilt::TiltError;
use pkl_core::weyl::WeylError;

/// p-canonical bases of affine Hecke algebras and tilting multiplicities.
#[derive(Parser)]
#[command(name = "pkl", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the standing assumptions on (datum, p).
    Check(Config),
    /// List elements up to --max-len with their lengths.
    Enumerate(Config),
    /// Kazhdan-Lusztig basis element b_w (or h_{y,w} with --y).
    Kl(Config),
    /// p-canonical basis element ^p b_w (or ^p h_{y,w} with --y).
    Pkl(Config),
    /// Tilting multiplicity table, parabolic when --L or --K is given.
    Tilt(Config),
    /// Inspect, verify or garbage-collect a cache file.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    Inspect(Config),
    Verify(Config),
    Gc(Config),
}

#[derive(Args, Clone, Debug)]
pub struct Config {
    /// Built-in datum: GLn, Xn-sc, Xn-adj, or products joined by 'x'.
    #[arg(long)]
    pub datum: Option<String>,
    /// Datum as a JSON document.
    #[arg(long)]
    pub datum_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub p: u64,
    #[arg(long, default_value_t = 4)]
    pub max_len: usize,
    /// Simple reflections of L, e.g. "s1" or "s1 s2".
    #[arg(long = "L", default_value = "")]
    pub l: String,
    #[arg(long = "K", default_value = "")]
    pub k: String,
    #[arg(long)]
    pub w: Option<String>,
    #[arg(long)]
    pub y: Option<String>,
    /// json, csv, text or tex.
    #[arg(long, default_value = "text")]
    pub format: String,
    /// Cache file; defaults to <PKL_CACHE_DIR or .pkl-cache>/<fingerprint>-p<p>.json.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Neither read nor write a cache.
    #[arg(long)]
    pub no_cache: bool,
    #[arg(long)]
    pub override_assumptions: bool,
    /// Translation bound for listing length-zero elements when Ω is infinite.
    #[arg(long, default_value_t = 0)]
    pub omega_bound: i64,
    /// Print counters and timing to stderr.
    #[arg(long)]
    pub stats: bool,
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug)]
pub struct Fail {
    pub code: u8,
    pub msg: String,
}

pub const ASSUMPTIONS: u8 = 1;
pub const CONFIG: u8 = 2;
pub const SOLVER: u8 = 3;
pub const FINITARY: u8 = 4;
pub const CACHE: u8 = 5;

impl Fail {
    pub fn new(code: u8, msg: impl Into<String>) -> Self {
        Fail { code, msg: msg.into() }
    }
}

impl From<DatumError> for Fail {
    fn from(e: DatumError) -> Self {
        Fail::new(CONFIG, e.to_string())
    }
}

impl From<WeylError> for Fail {
    fn from(e: WeylError) -> Self {
        match e {
            WeylError::NotFinitary(_) => Fail::new(FINITARY, e.to_string()),
            _ => Fail::new(CONFIG, e.to_string()),
        }
    }
}

impl From<SoergelError> for Fail {
    fn from(e: SoergelError) -> Self {
        match e {
            SoergelError::Cache(_) | SoergelError::RealizationMismatch => Fail::new(CACHE, e.to_string()),
            SoergelError::Weyl(w) => w.into(),
            _ => Fail::new(SOLVER, e.to_string()),
        }
    }
}

impl From<TiltError> for Fail {
    fn from(e: TiltError) -> Self {
        match e {
            TiltError::Weyl(w) => w.into(),
            TiltError::Soergel(s) => s.into(),
            TiltError::NotMinimalRep(_) | TiltError::Parse(_) => Fail::new(CONFIG, e.to_string()),
            _ => Fail::new(SOLVER, e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Check(c) => commands::check(&c),
        Cmd::Enumerate(c) => commands::enumerate(&c),
        Cmd::Kl(c) => commands::kl(&c),
        Cmd::Pkl(c) => commands::pkl(&c),
        Cmd::Tilt(c) => commands::tilt(&c),
        Cmd::Cache { action } => match action {
            CacheAction::Inspect(c) => commands::cache_inspect(&c),
            CacheAction::Verify(c) => commands::cache_verify(&c),
            CacheAction::Gc(c) => commands::cache_gc(&c),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
