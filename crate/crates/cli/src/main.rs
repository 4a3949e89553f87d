use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use storyworld::analysis::{
    composition_breakdown, concurrence, consistency_pairs, pairs_file, profile_file, split_stats,
    ScoreTable, SplitStats,
};
use storyworld::concepts::QuestionType;
use storyworld::io::{
    read_babi, read_config, read_predictions, read_score_sheet, to_config_string, write_babi,
    write_breakdown, BabiFile,
};
use storyworld::microworld::Vocabulary;
use storyworld::oracle::validate_file;
use storyworld::splits::{
    inject_file, preset, preset_names, Partition, RegimeRegistry, Split, SplitSpec,
};

#[derive(Parser)]
#[command(
    name = "storyworld",
    version,
    about = "Synthetic story and question generator"
)]
struct Cli {
    /// Seed for generation; falls back to STORYWORLD_SEED, then to the
    /// configuration's own seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a split and write <name>_{train,valid,test}.txt.
    Generate {
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        out: PathBuf,
        /// Multiply every partition size by this factor.
        #[arg(long)]
        scale: Option<f64>,
        /// Keep several questions per story instead of one. Always on for
        /// the inject regime.
        #[arg(long)]
        interleaved: bool,
    },
    /// Add every determinable question of the given types before each
    /// question of a file.
    Inject {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "where-P,where-O")]
        types: Vec<QuestionType>,
        #[arg(long)]
        out: PathBuf,
        /// Write one question per story instead of interleaving them.
        #[arg(long)]
        flatten: bool,
    },
    /// Size, mean story length and mean supporting-fact count.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Question counts (and accuracy) by supporting-fact count and
    /// support composition.
    Breakdown {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        preds: Option<PathBuf>,
    },
    /// Pearson and Kendall correlation between two score columns.
    Concurrence {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Column of --a to use when it has several.
        #[arg(long)]
        a_benchmark: Option<String>,
        #[arg(long)]
        b_benchmark: Option<String>,
    },
    /// Pair every yes-answered yes-no question with its where-P twin.
    Pairs {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-answer every question from the text; fails on the first
    /// disagreement.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Print a preset's configuration document, or list the presets.
    Config {
        #[arg(long)]
        preset: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli, &mut io::stdout().lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<Option<u64>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("STORYWORLD_SEED") {
        Ok(v) => Ok(Some(
            v.trim()
                .parse()
                .context("STORYWORLD_SEED is not an unsigned integer")?,
        )),
        Err(_) => Ok(None),
    }
}

fn load(path: &Path) -> Result<BabiFile> {
    read_babi(path).with_context(|| format!("reading {}", path.display()))
}

fn score_column(path: &Path, benchmark: Option<&str>) -> Result<ScoreTable> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let sheet = read_score_sheet(file).with_context(|| format!("reading {}", path.display()))?;
    let name = match benchmark {
        Some(b) => b.to_string(),
        None if sheet.benchmarks.len() == 1 => sheet.benchmarks[0].clone(),
        None => bail!(
            "{} has several benchmarks ({}); choose one",
            path.display(),
            sheet.benchmarks.join(", ")
        ),
    };
    sheet
        .column(&name)
        .with_context(|| format!("no benchmark {name:?} in {}", path.display()))
}

fn print_stats(out: &mut dyn Write, format: Format, rows: &[(String, SplitStats)]) -> Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "name,size,avg_length,avg_n")?;
            for (name, s) in rows {
                writeln!(out, "{name},{},{:.4},{:.4}", s.size, s.avg_length, s.avg_n)?;
            }
        }
        Format::Plain => {
            for (name, s) in rows {
                writeln!(
                    out,
                    "{name}: {} questions, mean length {:.2}, mean n {:.2}",
                    s.size, s.avg_length, s.avg_n
                )?;
            }
        }
    }
    Ok(())
}

fn generate(spec: SplitSpec, out_dir: &Path, interleaved: bool) -> Result<(Split, Vec<PathBuf>)> {
    let split = RegimeRegistry::standard().build(&spec)?;
    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let mut written = Vec::new();
    for p in Partition::ALL {
        let path = out_dir.join(Split::file_name(&split.name, p));
        let file = split.file(p);
        let file = if interleaved || split.regime == "inject" {
            file
        } else {
            file.flattened()
        };
        write_babi(&file, &path).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
    }
    Ok((split, written))
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<ExitCode> {
    let vocab = Vocabulary::default();
    match cli.command {
        Command::Generate {
            config,
            preset: preset_name,
            out: out_dir,
            scale,
            interleaved,
        } => {
            let mut spec = match (config, preset_name) {
                (Some(path), None) => {
                    read_config(&path).with_context(|| format!("reading {}", path.display()))?
                }
                (None, Some(name)) => preset(&name)?,
                _ => bail!("give exactly one of --config or --preset"),
            };
            if let Some(seed) = resolve_seed(cli.seed)? {
                spec.seed = seed;
            }
            if let Some(f) = scale {
                if f.is_nan() || f <= 0.0 {
                    bail!("--scale must be positive");
                }
                spec = spec.scaled(f);
            }
            let (split, written) = generate(spec, &out_dir, interleaved)?;
            let rows: Vec<(String, SplitStats)> = Partition::ALL
                .iter()
                .map(|&p| {
                    (
                        Split::file_name(&split.name, p),
                        split_stats(split.profiles(p)),
                    )
                })
                .collect();
            print_stats(out, cli.format, &rows)?;
            if cli.format == Format::Plain {
                for path in written {
                    writeln!(out, "wrote {}", path.display())?;
                }
            }
        }
        Command::Inject {
            input,
            types,
            out: path,
            flatten,
        } => {
            let file = load(&input)?;
            let types: BTreeSet<QuestionType> = types.into_iter().collect();
            if let Some(t) = types
                .iter()
                .find(|t| !matches!(t, QuestionType::WhereActor | QuestionType::WhereObject))
            {
                bail!("only where-P and where-O questions can be injected, not {t}");
            }
            let (injected, _) = inject_file(&file, &types, &vocab)?;
            let before = file.question_count();
            let after = injected.question_count();
            let injected = if flatten {
                injected.flattened()
            } else {
                injected
            };
            write_babi(&injected, &path).with_context(|| format!("writing {}", path.display()))?;
            writeln!(out, "{before} questions in, {after} out")?;
        }
        Command::Stats { input } => {
            let file = load(&input)?;
            let profiles = profile_file(&file, &vocab)?;
            let name = input
                .file_name()
                .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
            print_stats(out, cli.format, &[(name, split_stats(&profiles))])?;
        }
        Command::Breakdown { input, preds } => {
            let file = load(&input)?;
            let profiles = profile_file(&file, &vocab)?;
            let preds = match preds {
                Some(p) => {
                    let f = File::open(&p).with_context(|| format!("opening {}", p.display()))?;
                    Some(read_predictions(f).with_context(|| format!("reading {}", p.display()))?)
                }
                None => None,
            };
            let rows = composition_breakdown(&file, &profiles, preds.as_ref())?;
            match cli.format {
                Format::Csv => write_breakdown(&rows, &mut *out)?,
                Format::Plain => {
                    for r in rows {
                        write!(out, "n={} {}: {}", r.n, r.f_c, r.count)?;
                        if let Some(acc) = r.accuracy {
                            write!(out, " ({acc:.1}% correct)")?;
                        }
                        writeln!(out)?;
                    }
                }
            }
        }
        Command::Concurrence {
            a,
            b,
            a_benchmark,
            b_benchmark,
        } => {
            let ta = score_column(&a, a_benchmark.as_deref())?;
            let tb = score_column(&b, b_benchmark.as_deref())?;
            let r = concurrence(&ta, &tb)?;
            match cli.format {
                Format::Csv => writeln!(
                    out,
                    "a,b,pearson,kendall,n_models\n{},{},{:.6},{:.6},{}",
                    ta.benchmark, tb.benchmark, r.pearson, r.kendall, r.n_models
                )?,
                Format::Plain => writeln!(
                    out,
                    "{} vs {}: pearson {:.4}, kendall {:.4} over {} models",
                    ta.benchmark, tb.benchmark, r.pearson, r.kendall, r.n_models
                )?,
            }
        }
        Command::Pairs { input, out: path } => {
            let file = load(&input)?;
            let pairs = consistency_pairs(&file, &vocab);
            write_babi(&pairs_file(&pairs), &path)
                .with_context(|| format!("writing {}", path.display()))?;
            writeln!(out, "{} pairs", pairs.len())?;
        }
        Command::Validate { input } => {
            let file = load(&input)?;
            let report = validate_file(&file, &vocab, true);
            writeln!(out, "{report}")?;
            if !report.passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Config { preset: name } => match name {
            Some(name) => {
                let mut spec = preset(&name)?;
                if let Some(seed) = resolve_seed(cli.seed)? {
                    spec.seed = seed;
                }
                write!(out, "{}", to_config_string(&spec))?;
            }
            None => {
                for name in preset_names() {
                    writeln!(out, "{name}")?;
                }
            }
        },
    }
    Ok(ExitCode::SUCCESS)
}
