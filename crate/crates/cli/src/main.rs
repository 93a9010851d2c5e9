mod commands;
mod http;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Induce a type lattice from predication evidence and query it.
#[derive(Parser)]
#[command(name = "ontoforge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tag raw text, one sentence per line, with the built-in tagger.
    Tag { corpus: PathBuf },
    /// Extract predication records from a tagged (or --raw) corpus.
    Extract {
        corpus: PathBuf,
        /// Input is plain text; tag it with the built-in tagger.
        #[arg(long)]
        raw: bool,
        #[command(flatten)]
        lexicon: LexiconArg,
        #[arg(short, long, default_value = "records.jsonl")]
        out: PathBuf,
        /// Sentences no rule matched, one `SKIP<TAB>sentence` per line.
        #[arg(long, default_value = "skipped.log")]
        skip_log: PathBuf,
    },
    /// Render mask prompts for concepts, fetch or reuse transcripts, and
    /// write candidate records.
    Elicit {
        #[arg(required = true)]
        concepts: Vec<String>,
        /// Candidates requested per prompt.
        #[arg(short, long, default_value_t = 25)]
        k: usize,
        #[arg(long, default_value = "transcripts")]
        transcripts: PathBuf,
        /// Never touch the network; every prompt must already be cached.
        #[arg(long)]
        offline: bool,
        #[arg(long, default_value_t = 4)]
        max_in_flight: usize,
        /// `surface<TAB>lemma` map applied to candidates.
        #[arg(long)]
        inflections: Option<PathBuf>,
        #[arg(short, long, default_value = "elicited.jsonl")]
        out: PathBuf,
    },
    /// Turn stored transcript files for one concept and dimension into records.
    Ingest {
        #[arg(required = true)]
        transcripts: Vec<PathBuf>,
        #[arg(long)]
        concept: String,
        /// agentOf, objectOf or hasProp.
        #[arg(long)]
        dimension: String,
        #[arg(long)]
        inflections: Option<PathBuf>,
        /// Keep candidates named by at least this many transcripts.
        #[arg(long, default_value_t = 1)]
        min_vote: usize,
        #[arg(short, long, default_value = "ingested.jsonl")]
        out: PathBuf,
    },
    /// Build matrix and lattice snapshots from one or more records files.
    Build {
        #[arg(required = true)]
        records: Vec<PathBuf>,
        /// Evidence threshold: app(p, c) holds when count ≥ tau.
        #[arg(long, default_value_t = 1)]
        tau: u64,
        /// Label seeds: `label<TAB>extent|intent<TAB>item,item`.
        #[arg(long)]
        seeds: Option<PathBuf>,
        /// Largest concept or property-slot count accepted.
        #[arg(long, default_value_t = ontoforge::lattice::DEFAULT_BOUND)]
        bound: usize,
        /// Project directory receiving matrix.json and lattice.json.
        #[arg(short, long, default_value = ".")]
        dir: PathBuf,
    },
    /// Ask questions of a built project.
    Query {
        #[arg(short, long, default_value = ".")]
        dir: PathBuf,
        #[command(flatten)]
        lexicon: LexiconArg,
        #[arg(long)]
        json: bool,
        #[command(subcommand)]
        query: Query,
    },
    /// Write a lattice snapshot as DOT or JSON.
    Export {
        lattice: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        /// Output file; standard output when absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Generate a sparse random concept-level records file.
    Synth {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        records: usize,
        #[arg(long, default_value_t = 1000)]
        concepts: usize,
        #[arg(long, default_value_t = 1000)]
        properties: usize,
        #[arg(short, long, default_value = "synth.jsonl")]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum Query {
    /// Applicable properties of a concept, bucketed by primitive relation.
    Profile { concept: String },
    /// `sensible PROPERTY CONCEPT`, or `sensible PREDICATE AGENT OBJECT`.
    Sensible {
        #[arg(num_args = 2..=3, required = true)]
        args: Vec<String>,
    },
    /// Least type containing both concepts.
    Supertype { first: String, second: String },
    /// The type a property can be said of.
    Signature { property: String },
}

#[derive(Args)]
pub struct LexiconArg {
    /// Predicate lexicon TSV whose entries extend and override the seed.
    #[arg(long)]
    lexicon: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Format {
    Dot,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
