use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use tprqa::algebra::{Banks, VectorMode};
use tprqa::harness::config::{Config, DATA_DIR_ENV};
use tprqa::harness::eval::{run_eval, Source};
use tprqa::harness::generate;
use tprqa::harness::repl::run_repl;
use tprqa::harness::selftest::banks_selftest;

#[derive(Parser)]
#[command(name = "tprqa", version, about = "Tensor-product reasoner for the bAbI question categories")]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Command,
}

/// Overrides for the configuration file; unset flags keep file values.
#[derive(Args)]
struct Flags {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    dim: Option<usize>,
    #[arg(long, global = true)]
    mode: Option<VectorMode>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    score_threshold: Option<f64>,
    #[arg(long, global = true)]
    margin_ratio: Option<f64>,
    #[arg(long, global = true)]
    pair_cleanup: Option<f64>,
    #[arg(long, global = true)]
    eps_path: Option<f64>,
    #[arg(long, global = true)]
    block_tol: Option<f64>,
    #[arg(long, global = true)]
    max_path_len: Option<usize>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    grammar_lexicon: Option<PathBuf>,
    #[arg(long, global = true)]
    answer_lexicon: Option<PathBuf>,
    /// Directory holding the official qa*_{train,test}.txt files.
    #[arg(long, global = true, env = DATA_DIR_ENV)]
    data_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Answer and score a corpus; exits 1 if a category is below its floor.
    Eval {
        /// Use N generated stories per category instead of the official files.
        #[arg(long, value_name = "N")]
        generated: Option<usize>,
        /// Comma-separated categories (default: all twenty).
        #[arg(long, value_delimiter = ',')]
        categories: Vec<u8>,
        #[arg(long)]
        split: Option<String>,
        /// Report path stem; writes <stem>.json and <stem>.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write generated stories in bAbI layout plus an answer key.
    Generate {
        #[arg(long)]
        category: u8,
        #[arg(long, default_value_t = 1000)]
        stories: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Enter one story interactively.
    Repl {
        #[arg(long, default_value_t = 1)]
        task: u8,
    },
    /// Check the direction, position and pair-binder banks.
    BanksSelftest,
}

fn config(flags: &Flags) -> Result<Config> {
    let mut c = match &flags.config {
        Some(p) => Config::from_file(p)?,
        None => Config::default(),
    };
    macro_rules! set {
        ($($f:ident),*) => { $(if let Some(v) = flags.$f.clone() { c.$f = v; })* };
    }
    set!(dim, mode, seed, score_threshold, margin_ratio, pair_cleanup, eps_path, block_tol, max_path_len, threads);
    if flags.grammar_lexicon.is_some() {
        c.grammar_lexicon = flags.grammar_lexicon.clone();
    }
    if flags.answer_lexicon.is_some() {
        c.answer_lexicon = flags.answer_lexicon.clone();
    }
    if flags.data_dir.is_some() {
        c.data_dir = flags.data_dir.clone();
    }
    let c = c.with_env();
    c.validate()?;
    Ok(c)
}

fn run(cli: Cli) -> Result<bool> {
    let mut cfg = config(&cli.flags)?;
    match cli.command {
        Command::Eval { generated, categories, split, out } => {
            if let Some(s) = split {
                cfg.split = s;
            }
            let categories = if categories.is_empty() { (1..=20).collect() } else { categories };
            if let Some(bad) = categories.iter().find(|c| !(1..=20).contains(*c)) {
                bail!("category {bad} is not in 1..=20");
            }
            let source = match generated {
                Some(stories) => Source::Generated { stories },
                None => Source::Official,
            };
            let report = run_eval(&cfg, &source, &categories)?;
            for c in &report.categories {
                let mark = if c.passed { "ok  " } else { "FAIL" };
                println!(
                    "{mark} C{:<2} {:>5}/{:<5} {:.4} (floor {}; {} allowlisted)",
                    c.category,
                    c.correct,
                    c.total,
                    c.accuracy,
                    c.floor,
                    c.allowlisted.len()
                );
            }
            if let Some(stem) = out {
                let (json, csv) = report.write(&stem)?;
                println!("wrote {} and {}", json.display(), csv.display());
            }
            Ok(report.passed())
        }
        Command::Generate { category, stories, out } => {
            let generated = generate::generate(category, stories, cfg.seed)?;
            let key = generate::write_generated(&out, &generated)?;
            println!("wrote {} and {}", out.display(), key.display());
            Ok(true)
        }
        Command::Repl { task } => {
            let stdin = std::io::stdin();
            run_repl(&cfg, task, stdin.lock(), std::io::stdout())?;
            Ok(true)
        }
        Command::BanksSelftest => {
            let banks = Banks::with_default_rank(cfg.dim, cfg.seed).context("building banks")?;
            let checks = banks_selftest(&banks);
            for c in &checks {
                println!("{} {:<28} {:.3e} (bound {:.0e})", if c.passed { "ok  " } else { "FAIL" }, c.name, c.value, c.bound);
            }
            Ok(checks.iter().all(|c| c.passed))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
