//! The `rbjoin` command line, as a library so tests can drive it in-process.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rbjoin::bench::{self, BenchRow, CSV_HEADER};
use rbjoin::oracle::{self, random_tree};
use rbjoin::props::{self, JoinFn, Level};
use rbjoin::sequence::{self, Seq};
use rbjoin::sexpr::{parse, parse_with, to_sexpr, Mode};
use rbjoin::{Color, Error, RedBlackTree};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

type Tree = RedBlackTree<i64>;

#[derive(Debug, Parser)]
#[command(
    name = "rbjoin",
    version,
    about = "Joinable red-black trees with work/span cost accounting"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print trees, one per line: a seeded random tree or a full enumeration.
    Gen(GenArgs),
    /// Check every tree (one per line) against the red-black invariants.
    Validate {
        /// Input file; standard input when omitted or `-`.
        file: Option<PathBuf>,
    },
    /// Join two trees around a middle key.
    Join {
        t1: PathBuf,
        a: i64,
        t2: PathBuf,
        #[arg(long, value_enum)]
        report: Option<Report>,
    },
    /// Parallel sum of the keys.
    Sum { file: PathBuf },
    /// Split a sorted tree around a key.
    Split { file: PathBuf, key: i64 },
    /// Insert a key into a sorted tree.
    Insert { file: PathBuf, key: i64 },
    /// Union of two sorted trees; keys present in both come from the first.
    Union { t1: PathBuf, t2: PathBuf },
    /// Cost-bound report over random trials, as CSV.
    Bench {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 10)]
        max_bh: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the property suites.
    Props {
        #[arg(long, value_enum, default_value_t = LevelArg::Exhaustive)]
        level: LevelArg,
        #[arg(long, default_value_t = 2)]
        max_bh: u32,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["size", "enumerate"])))]
pub struct GenArgs {
    #[arg(long, conflicts_with_all = ["bh", "color"])]
    size: Option<u64>,
    #[arg(long, default_value_t = 0, requires = "size")]
    seed: u64,
    #[arg(long, requires = "bh")]
    enumerate: bool,
    #[arg(long, requires = "enumerate")]
    bh: Option<u32>,
    #[arg(long, value_enum, requires = "enumerate")]
    color: Option<ColorArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Report {
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ColorArg {
    #[value(name = "R", alias = "r")]
    R,
    #[value(name = "B", alias = "b")]
    B,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LevelArg {
    Exhaustive,
    Random,
}

/// Outcome of a command that did not succeed.
enum Failure {
    Usage(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::LimitExceeded { .. } => Failure::Usage(e.to_string()),
            e => Failure::Failed(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Failed(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with_join(args, rbjoin::join, stdin, out, err)
}

/// [`run`], with `join_fn` as the join checked by `props`.
pub fn run_with_join<I, S>(
    args: I,
    join_fn: JoinFn,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, join_fn, stdin, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Failed(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn execute(
    command: Command,
    join_fn: JoinFn,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
) -> Outcome {
    match command {
        Command::Gen(args) => gen(args, out),
        Command::Validate { file } => validate(file.as_deref(), stdin, out),
        Command::Join { t1, a, t2, report } => {
            let (t1, t2) = (read_tree(&t1, stdin)?, read_tree(&t2, stdin)?);
            let joined = rbjoin::join(&t1, a, &t2)?;
            writeln!(out, "{}", to_sexpr(&joined.value))?;
            match report {
                None => writeln!(out, "{}", joined.cost)?,
                Some(Report::Csv) => {
                    let row = BenchRow::join(
                        t1.black_height(),
                        t2.black_height(),
                        t1.size(),
                        t2.size(),
                        joined.cost,
                    );
                    writeln!(out, "{CSV_HEADER}")?;
                    writeln!(out, "{}", row.csv())?;
                }
            }
            Ok(())
        }
        Command::Sum { file } => {
            let s = read_seq(&file, stdin)?;
            let summed = sequence::sum(&s)?;
            writeln!(out, "{}", summed.value)?;
            writeln!(out, "{}", summed.cost)?;
            Ok(())
        }
        Command::Split { file, key } => {
            let s = read_sorted(&file, stdin)?;
            let split = sequence::split(&s, &key)?;
            let (left, found, right) = &split.value;
            writeln!(out, "{}", to_sexpr(left.tree()))?;
            match found {
                Some(k) => writeln!(out, "found={k}")?,
                None => writeln!(out, "found=none")?,
            }
            writeln!(out, "{}", to_sexpr(right.tree()))?;
            writeln!(out, "{}", split.cost)?;
            Ok(())
        }
        Command::Insert { file, key } => {
            let s = read_sorted(&file, stdin)?;
            let inserted = sequence::insert(&s, key)?;
            writeln!(out, "{}", to_sexpr(inserted.value.tree()))?;
            writeln!(out, "{}", inserted.cost)?;
            Ok(())
        }
        Command::Union { t1, t2 } => {
            let (s1, s2) = (read_sorted(&t1, stdin)?, read_sorted(&t2, stdin)?);
            let merged = sequence::union(&s1, &s2)?;
            writeln!(out, "{}", to_sexpr(merged.value.tree()))?;
            writeln!(out, "{}", merged.cost)?;
            Ok(())
        }
        Command::Bench {
            trials,
            max_bh,
            seed,
            out: path,
        } => {
            if max_bh > 40 {
                return Err(Failure::Usage(format!("--max-bh {max_bh} is above 40")));
            }
            let rows = bench::run(trials, max_bh, seed)?;
            let csv = bench::to_csv(&rows, trials, max_bh, seed);
            match path {
                Some(path) => fs::write(path, csv)?,
                None => out.write_all(csv.as_bytes())?,
            }
            let outside = rows.iter().filter(|r| !r.within_bound).count();
            if outside > 0 {
                return Err(Failure::Failed(format!(
                    "{outside} rows exceed their bound"
                )));
            }
            Ok(())
        }
        Command::Props {
            level,
            max_bh,
            trials,
            seed,
        } => {
            let level = match level {
                LevelArg::Exhaustive => Level::Exhaustive,
                LevelArg::Random => Level::Random,
            };
            if level == Level::Random && max_bh > 40 {
                return Err(Failure::Usage(format!("--max-bh {max_bh} is above 40")));
            }
            let config = props::Config {
                level,
                max_bh,
                trials,
                seed,
            };
            writeln!(out, "# seed={seed}")?;
            writeln!(out, "# level={level:?} max_bh={max_bh} trials={trials}")?;
            match props::run_with(&config, join_fn)? {
                Ok(outcomes) => {
                    for o in outcomes {
                        writeln!(out, "{o}")?;
                    }
                    Ok(())
                }
                Err(failure) => {
                    write!(out, "{failure}")?;
                    Err(Failure::Failed(format!(
                        "property {} failed",
                        failure.property
                    )))
                }
            }
        }
    }
}

fn gen(args: GenArgs, out: &mut dyn Write) -> Outcome {
    if let Some(size) = args.size {
        writeln!(out, "{}", to_sexpr(&random_tree(size, args.seed)))?;
        return Ok(());
    }
    let bh = args.bh.expect("clap requires --bh with --enumerate");
    let color = args.color.map(|c| match c {
        ColorArg::R => Color::Red,
        ColorArg::B => Color::Black,
    });
    let mut buf = io::BufWriter::new(out);
    for t in oracle::enumerate(color, bh, |i| i as i64)? {
        writeln!(buf, "{}", to_sexpr(&t))?;
    }
    buf.flush()?;
    Ok(())
}

fn validate(file: Option<&Path>, stdin: &mut dyn Read, out: &mut dyn Write) -> Outcome {
    let text = read_input(file, stdin)?;
    let mut count = 0;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let tree = parse_with(line, Mode::Unchecked)
            .map_err(|e| Failure::Failed(format!("line {}: {e}", i + 1)))?;
        tree.validate()
            .map_err(|e| Failure::Failed(format!("line {}: {e}", i + 1)))?;
        count += 1;
    }
    writeln!(out, "ok: {count} valid tree(s)")?;
    Ok(())
}

fn read_input(file: Option<&Path>, stdin: &mut dyn Read) -> Result<String, Failure> {
    match file {
        Some(path) if path != Path::new("-") => fs::read_to_string(path)
            .map_err(|e| Failure::Failed(format!("{}: {e}", path.display()))),
        _ => {
            let mut text = String::new();
            stdin.read_to_string(&mut text)?;
            Ok(text)
        }
    }
}

fn read_tree(path: &Path, stdin: &mut dyn Read) -> Result<Tree, Failure> {
    let text = read_input(Some(path), stdin)?;
    parse(text.trim_end()).map_err(|e| Failure::Failed(format!("{}: {e}", path.display())))
}

fn read_seq(path: &Path, stdin: &mut dyn Read) -> Result<Seq<i64>, Failure> {
    Ok(Seq::from_tree(read_tree(path, stdin)?)?)
}

fn read_sorted(path: &Path, stdin: &mut dyn Read) -> Result<Seq<i64>, Failure> {
    let s = read_seq(path, stdin)?;
    if !s.is_strictly_sorted() {
        return Err(Failure::Failed(format!(
            "{}: keys are not strictly increasing",
            path.display()
        )));
    }
    Ok(s)
}
