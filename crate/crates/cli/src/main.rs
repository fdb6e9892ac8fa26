use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nerc::{cmd_crossval, cmd_eval, cmd_tag, cmd_train, ReportFormat};

/// Named entity tagging with multinomial naive Bayes over tf-idf features.
#[derive(Debug, Parser)]
#[command(name = "nerc", version)]
struct Cli {
    /// Output format for reports and timings.
    #[arg(long, value_enum, global = true, default_value_t = ReportFormat::Text)]
    report_format: ReportFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train a model on a word/TAG corpus and save it.
    Train {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Additive smoothing constant.
        #[arg(long, env = "NERC_ALPHA", default_value_t = 1.0)]
        alpha: f64,
    },
    /// Tag untagged text, writing word/TAG tokens.
    Tag {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        /// Defaults to standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Score a model against a tagged test corpus.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        test: PathBuf,
    },
    /// Run k-fold cross-validation over a tagged development corpus.
    Crossval {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long, env = "NERC_ALPHA", default_value_t = 1.0)]
        alpha: f64,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let format = cli.report_format;
    match cli.command {
        Command::Train {
            corpus,
            model,
            alpha,
        } => {
            cmd_train(&corpus, &model, alpha, format, &mut out)?;
        }
        Command::Tag {
            model,
            input,
            output,
        } => cmd_tag(&model, &input, output.as_deref(), &mut out)?,
        Command::Eval { model, test } => {
            cmd_eval(&model, &test, format, &mut out)?;
        }
        Command::Crossval {
            corpus,
            folds,
            alpha,
        } => {
            cmd_crossval(&corpus, folds, alpha, format, &mut out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
