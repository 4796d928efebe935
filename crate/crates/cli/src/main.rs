//! `keyterm`: corpus preprocessing and key-term selection from the command line.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;

use keyterm_core::pipeline::{self, index_corpus, load_inputs, preprocess_corpus, StageLog};
use keyterm_core::report::{render_tables, TableFormat};
use keyterm_core::weighting::{compute_matrix, export_matrix};
use keyterm_core::wordnet::WORDNET_DIR_ENV;
use keyterm_core::{
    lexical_categories, load_wordnet, porter_stem, run_pipeline, Error, PipelineConfig, PipelineError, Scheme, Stage,
};

#[derive(Parser, Debug)]
#[command(
    name = "keyterm",
    version,
    about = "Threshold-based key-term selection for text corpora"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    opts: RunOpts,
}

/// Settings shared by every subcommand. Each one overrides the config file.
#[derive(Args, Debug, Default)]
struct RunOpts {
    /// Flat `key = value` configuration file
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "DIR")]
    corpus: Option<String>,
    /// flat, class-subdirectories or manifest-file
    #[arg(long, global = true)]
    layout: Option<String>,
    #[arg(long, global = true, value_name = "FILE")]
    stopwords: Option<String>,
    /// WordNet database directory; falls back to $WNSEARCHDIR
    #[arg(long, global = true, value_name = "DIR")]
    wordnet_dir: Option<String>,
    /// off, annotate-only or filter-nonwordnet
    #[arg(long, global = true)]
    wordnet_policy: Option<String>,
    /// Minimum tf-idf weight
    #[arg(long, global = true)]
    alpha: Option<String>,
    /// Minimum tf-df weight
    #[arg(long, global = true)]
    beta: Option<String>,
    /// Minimum tf2 weight
    #[arg(long, global = true)]
    gamma: Option<String>,
    /// max, mean or any-doc
    #[arg(long, global = true)]
    aggregation: Option<String>,
    /// e, 10 or 2
    #[arg(long, global = true)]
    log_base: Option<String>,
    #[arg(long, global = true)]
    min_count: Option<String>,
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<String>,
    /// Matrix export format: csv or triplet
    #[arg(long, global = true)]
    format: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dataset statistics only
    Stats {
        #[arg(value_name = "CORPUS")]
        path: Option<String>,
    },
    /// Term counts per document after stemming, as doc_id,term,count lines
    Preprocess {
        #[arg(value_name = "CORPUS")]
        path: Option<String>,
    },
    /// Export one weight matrix
    Weigh {
        #[arg(value_name = "CORPUS")]
        path: Option<String>,
        /// tfidf, tfdf or tf2
        #[arg(long)]
        scheme: Scheme,
    },
    /// Full run: weights, key terms, reports
    Select {
        #[arg(value_name = "CORPUS")]
        path: Option<String>,
    },
    /// Porter stems, one per line
    Stem {
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// WordNet categories for each word
    Lex {
        #[arg(required = true)]
        words: Vec<String>,
    },
}

impl Command {
    fn corpus(&self) -> Option<&str> {
        match self {
            Command::Stats { path }
            | Command::Preprocess { path }
            | Command::Weigh { path, .. }
            | Command::Select { path } => path.as_deref(),
            Command::Stem { .. } | Command::Lex { .. } => None,
        }
    }
}

/// A failure together with the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: pipeline::exit_code(&e) as u8,
            message: e.to_string(),
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure {
            code: e.exit_code() as u8,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: 2,
            message: format!("write failed: {e}"),
        }
    }
}

fn build_config(opts: &RunOpts, positional: Option<&str>) -> Result<PipelineConfig, Error> {
    let mut config = match &opts.config {
        Some(p) => PipelineConfig::from_file(p)?,
        None => PipelineConfig::default(),
    };
    let flags = [
        ("corpus", opts.corpus.as_deref().or(positional)),
        ("layout", opts.layout.as_deref()),
        ("stopwords", opts.stopwords.as_deref()),
        ("wordnet_dir", opts.wordnet_dir.as_deref()),
        ("wordnet_policy", opts.wordnet_policy.as_deref()),
        ("alpha", opts.alpha.as_deref()),
        ("beta", opts.beta.as_deref()),
        ("gamma", opts.gamma.as_deref()),
        ("aggregation", opts.aggregation.as_deref()),
        ("log_base", opts.log_base.as_deref()),
        ("min_count", opts.min_count.as_deref()),
        ("out", opts.out.as_deref()),
        ("format", opts.format.as_deref()),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            config.set(key, v)?;
        }
    }
    Ok(config)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = build_config(&cli.opts, cli.command.corpus())?;
    let stdout = io::stdout();
    let mut out = stdout.lock();

    match cli.command {
        Command::Stem { words } => {
            for w in words {
                let stem = porter_stem(&w.to_lowercase()).map_err(|e| Failure {
                    code: 2,
                    message: e.to_string(),
                })?;
                writeln!(out, "{stem}")?;
            }
        }
        Command::Lex { words } => {
            let dir = config.resolved_wordnet_dir().ok_or_else(|| Failure {
                code: 1,
                message: format!("no WordNet directory: pass --wordnet-dir or set {WORDNET_DIR_ENV}"),
            })?;
            let db = load_wordnet(&dir)?;
            for w in words {
                let w = w.to_lowercase();
                let entry = lexical_categories(&db, &w);
                if !entry.in_wordnet {
                    writeln!(out, "{w}\t-")?;
                }
                for c in &entry.categories {
                    writeln!(out, "{w}\t{c}")?;
                }
            }
        }
        Command::Stats { .. } => {
            let loaded = load_inputs(&config, &mut StageLog::default())?;
            let text = render_tables(&[], std::slice::from_ref(&loaded.stats), TableFormat::PlainText)?;
            write!(out, "{text}")?;
        }
        Command::Preprocess { .. } => {
            let mut log = StageLog::default();
            let loaded = load_inputs(&config, &mut log)?;
            let (vectors, _) = preprocess_corpus(&loaded.corpus, &loaded.stopwords, &mut log);
            let mut w = csv::Writer::from_writer(out);
            for v in &vectors {
                for (term, n) in v.counts() {
                    w.write_record([v.doc_id(), term, &n.to_string()])
                        .map_err(Error::from)?;
                }
            }
            w.flush()?;
        }
        Command::Weigh { scheme, .. } => {
            let mut log = StageLog::default();
            let indexed = index_corpus(&config, &mut log)?;
            log.enter(Stage::Weigh);
            let matrix = compute_matrix(&indexed.index, scheme, config.log_base);
            fs::create_dir_all(&config.out).map_err(|e| Failure {
                code: 2,
                message: format!("cannot create {}: {e}", config.out.display()),
            })?;
            let path = config
                .out
                .join(format!("matrix_{scheme}.{}", config.matrix_format.extension()));
            export_matrix(&matrix, None, &path, config.matrix_format)?;
            info!("{} populated cells", matrix.entry_count());
            writeln!(out, "{}", path.display())?;
        }
        Command::Select { .. } => {
            let result = run_pipeline(&config)?;
            let report = fs::read_to_string(config.out.join("report.txt"))?;
            write!(out, "{report}")?;
            writeln!(
                out,
                "joint key terms: {} of {}",
                result.joint.len(),
                result.vocabulary_size
            )?;
            info!("wrote {} files to {}", result.artifacts.len(), config.out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
