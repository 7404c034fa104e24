use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "hdx", version, about = "Exact F2 expansion analysis of pure simplicial complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Serialize)]
pub struct Global {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for parallel scans (output does not depend on it).
    #[arg(long, global = true, env = "HDX_THREADS")]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Enumeration cap, e.g. 16777216 or 2^30.
    #[arg(long, global = true, value_parser = parse_cap)]
    pub cap: Option<u64>,
    /// Required to raise --cap above the default 2^24.
    #[arg(long = "i-know-this-is-exponential", global = true)]
    pub exponential_ok: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Tsv,
}

fn parse_cap(s: &str) -> Result<u64, String> {
    if let Some(e) = s.strip_prefix("2^") {
        let e: u32 = e.parse().map_err(|_| format!("bad exponent in {s:?}"))?;
        return 1u64.checked_shl(e).filter(|_| e < 64).ok_or_else(|| format!("{s} does not fit in 64 bits"));
    }
    s.parse().map_err(|_| format!("bad cap {s:?}"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Kind {
    Complete,
    CompletePartite,
    Cycle,
    ProjectiveFlag,
    LinialMeshulam,
}

/// A complex from a `.cx` file or from a generator.
#[derive(Args, Debug, Serialize)]
pub struct Source {
    /// Input `.cx` file.
    pub input: Option<PathBuf>,
    /// Generator to run instead of reading a file.
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub q: Option<u64>,
    /// Face probability for linial_meshulam, as `num/den` or a decimal.
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Vertex types; defaults to the `.types` sidecar next to the input.
    #[arg(long)]
    pub types: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct CochainArg {
    /// File listing the faces of a cochain, one per line.
    #[arg(long)]
    pub cochain: PathBuf,
    /// Dimension of the cochain; needed when the file is empty.
    #[arg(long)]
    pub k: Option<i32>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verb {
    /// Build an example complex; with --out the `.cx` (and `.types`) files
    /// are written there and the report goes to stdout.
    Generate {
        #[command(flatten)]
        src: Source,
    },
    /// Face counts, degree bounds, cohomology dimensions and typing.
    Info {
        #[command(flatten)]
        src: Source,
    },
    /// Brute-force coboundary or cocycle expansion at dimension k.
    Expansion {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        k: i32,
        #[arg(long, default_value = "coboundary")]
        mode: String,
    },
    /// Brute-force cosystole at dimension k.
    Cosystole {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        k: i32,
    },
    /// Local minimization of a cochain by link moves.
    Minimize {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        cochain: CochainArg,
    },
    /// Fat faces, ladders and degenerate faces of a cochain.
    FatProfile {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        cochain: CochainArg,
        #[arg(long)]
        eta: String,
    },
    /// Evaluate the ladder inequalities for a locally minimal cochain.
    SeepCheck {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        cochain: CochainArg,
        #[arg(long)]
        eta: String,
        /// Link expansion constant; measured from the links when omitted.
        #[arg(long)]
        beta: Option<String>,
        /// Locally minimize the cochain first.
        #[arg(long)]
        minimize: bool,
        /// Also check the degenerate-face bound, with η chosen from the
        /// links' skeleton constants unless --eta-upsilon is given.
        #[arg(long)]
        upsilon: bool,
        #[arg(long)]
        eta_upsilon: Option<String>,
    },
    /// Normalized second eigenvalues of every type-pair graph.
    Spectrum {
        #[command(flatten)]
        src: Source,
    },
    /// One-sided mixing inequality for a pair of vertex sets, or for all pairs.
    MixingCheck {
        #[command(flatten)]
        src: Source,
        /// Comma-separated vertex labels.
        #[arg(long, value_delimiter = ',')]
        set_a: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        set_b: Vec<String>,
        #[arg(long, conflicts_with_all = ["set_a", "set_b"])]
        exhaustive: bool,
    },
    /// Skeleton-expansion constant α, exact by subset scan or spectral bound.
    SkeletonAlpha {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value = "exhaustive")]
        mode: String,
    },
    /// Constants of the cosystolic expansion criterion.
    Constants {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value = "1")]
        beta: String,
        /// Bounded-degree constant Q.
        #[arg(long = "degree", default_value_t = 1)]
        degree: u64,
        /// Thickness, for the Ramanujan bound and log2 Q_(d,q).
        #[arg(long)]
        q: Option<u64>,
    },
    /// Measure the criterion's hypotheses and, when they hold, check its
    /// conclusions.
    Criterion {
        #[command(flatten)]
        src: Source,
        /// Subset cap for exact α*, e.g. 2^20.
        #[arg(long, value_parser = parse_cap)]
        alpha_cap: Option<u64>,
    },
}

impl Verb {
    pub fn name(&self) -> &'static str {
        match self {
            Verb::Generate { .. } => "generate",
            Verb::Info { .. } => "info",
            Verb::Expansion { .. } => "expansion",
            Verb::Cosystole { .. } => "cosystole",
            Verb::Minimize { .. } => "minimize",
            Verb::FatProfile { .. } => "fat-profile",
            Verb::SeepCheck { .. } => "seep-check",
            Verb::Spectrum { .. } => "spectrum",
            Verb::MixingCheck { .. } => "mixing-check",
            Verb::SkeletonAlpha { .. } => "skeleton-alpha",
            Verb::Constants { .. } => "constants",
            Verb::Criterion { .. } => "criterion",
        }
    }
}
