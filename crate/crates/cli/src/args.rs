use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "stringalg", version, about = "Workbench for string algebras and their modules")]
pub struct Cli {
    /// Coefficient field: `q` or a prime such as `7`.
    #[arg(long, global = true, env = "STRALG_FIELD", default_value = "q")]
    pub field: String,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Seed for sampled property suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Word length bound for enumerations and sweeps.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_len: Option<u64>,

    /// Prefix and middle bounds for the Ringel list, as `P,M`.
    #[arg(long, global = true, value_parser = parse_bounds)]
    pub bounds: Option<(usize, usize)>,

    /// H-partition override, e.g. `b:+1,b^-1:+1,a:-1,a^-1:-1`; unlisted
    /// letters go to H+1. Defaults to the lexicographic partition.
    #[arg(long, global = true)]
    pub partition: Option<String>,

    /// Anchor vertex for words that do not determine one (empty words).
    #[arg(long, global = true)]
    pub anchor: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

fn parse_bounds(s: &str) -> Result<(usize, usize), String> {
    let (p, m) = s.split_once(',').ok_or("expected P,M")?;
    let p: usize = p.trim().parse().map_err(|_| format!("bad prefix bound `{p}`"))?;
    let m: usize = m.trim().parse().map_err(|_| format!("bad middle bound `{m}`"))?;
    if p == 0 || m == 0 {
        return Err("bounds must be positive".into());
    }
    Ok((p, m))
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the string algebra axioms.
    Validate { file: PathBuf },
    /// Enumerate bands up to `--max-len`.
    Bands { file: PathBuf },
    /// Decide domesticity.
    Domestic { file: PathBuf },
    /// Bridge quiver of a domestic algebra.
    Bridge {
        file: PathBuf,
        /// Same as `--format dot`.
        #[arg(long)]
        dot: bool,
    },
    /// Build a string or band module.
    #[command(subcommand)]
    Module(ModuleCommand),
    /// Solution space of `(C^-1 . D)` in a module.
    Pp {
        file: PathBuf,
        #[command(flatten)]
        module: ModuleSpec,
        #[command(flatten)]
        formula: FormulaSpec,
    },
    /// Two-sided word `w(m) = u(m)^-1 . v(m)` of an element.
    WordOf {
        file: PathBuf,
        #[command(flatten)]
        module: ModuleSpec,
        #[command(flatten)]
        point: PointSpec,
    },
    /// Homogeneity test with a decomposition witness.
    Homog {
        file: PathBuf,
        #[command(flatten)]
        module: ModuleSpec,
        #[command(flatten)]
        point: PointSpec,
    },
    /// Graph-map basis of `Hom(M(u), M(v))`.
    Hom { file: PathBuf, u: String, v: String },
    #[command(subcommand)]
    Ringel(RingelCommand),
    /// Run every property suite.
    Audit {
        file: PathBuf,
        /// Random cases per sampled suite.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum ModuleCommand {
    /// `M(w)`.
    String { file: PathBuf, word: String },
    /// `M(C, lambda, k)`.
    Band {
        file: PathBuf,
        band: String,
        #[arg(long, default_value = "1")]
        lambda: String,
        #[arg(long, default_value_t = 1)]
        layers: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum RingelCommand {
    /// Descriptors of Ringel's list within `--bounds`.
    List { file: PathBuf },
    /// Finite truncation of a two-sided word.
    Truncate {
        file: PathBuf,
        word: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Whether `(C^-1 . D)` is in the pp-type of the anchor of `M_w`.
    Pp {
        file: PathBuf,
        word: String,
        #[command(flatten)]
        formula: FormulaSpec,
    },
    /// Classify the formula realized by a pointed module below `phi`.
    Classify {
        file: PathBuf,
        word: String,
        #[command(flatten)]
        module: ModuleSpec,
        #[command(flatten)]
        point: PointSpec,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct ModuleSource {
    /// String module `M(w)`.
    #[arg(long = "string")]
    pub string: Option<String>,
    /// Band module `M(C, lambda, k)`.
    #[arg(long = "band")]
    pub band: Option<String>,
    /// Module in the JSON module format.
    #[arg(long = "module-json")]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ModuleSpec {
    #[command(flatten)]
    pub source: ModuleSource,
    #[arg(long, default_value = "1")]
    pub lambda: String,
    #[arg(long, default_value_t = 1)]
    pub layers: usize,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = true)]
pub struct FormulaSpec {
    /// `C` in `(C^-1 . D)`, a word in H-1.
    #[arg(long)]
    pub left: Option<String>,
    /// `D` in `(C^-1 . D)`, a word in H+1.
    #[arg(long)]
    pub right: Option<String>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = true)]
pub struct PointSpec {
    /// Index of a standard basis vector.
    #[arg(long, conflicts_with_all = ["vertex", "coords"])]
    pub node: Option<usize>,
    /// Vertex of an element given by `--coords`.
    #[arg(long, requires = "coords")]
    pub vertex: Option<String>,
    /// Comma-separated coordinates in `e_vertex M`.
    #[arg(long, requires = "vertex")]
    pub coords: Option<String>,
}
