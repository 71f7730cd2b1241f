//! Command-line front end. Exit codes: 0 success or true, 1 false or a
//! violation, 2 usage or input error, 3 state budget exceeded.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use crate::acg::{quotient_trivialize, validate_acg, Acg};
use crate::asm::{
    asm_sum, capital_trace, fsg_capitals, fsg_step_function, succeeds_on_up, verify_fairness, verify_nonneg, Asm,
    Fsg,
};
use crate::automata::{parse_dfa, to_dot, write_dfa, AutomaticRelation, Word};
use crate::bundle::{load_acg, load_asm, load_group, save_acg, save_asm, save_group};
use crate::error::{Error, Result};
use crate::fo::DEFAULT_BUDGET;
use crate::groups::{build_group, verify_group_axioms_with_budget, GroupKind};
use crate::sequences::{missing_words, SequenceSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "autocap", version, about = "Automatic supermartingales over FA-presented capital groups")]
pub struct Cli {
    /// State budget for automaton constructions.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Word length for exhaustive and bounded checks.
    #[arg(long, global = true, default_value_t = 10)]
    bound: usize,
    /// Output file or bundle directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Relation algebra on automaton files.
    #[command(subcommand)]
    Rel(RelCmd),
    /// FA-presented groups.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Automatic capital groups.
    #[command(subcommand)]
    Acg(AcgCmd),
    /// Automatic supermartingales.
    #[command(subcommand)]
    Asm(AsmCmd),
    /// Finite-state gamblers.
    #[command(subcommand)]
    Fsg(FsgCmd),
    /// Sequence generators.
    #[command(subcommand)]
    Seq(SeqCmd),
    /// Graphviz export.
    #[command(subcommand)]
    Export(ExportCmd),
}

#[derive(Debug, Subcommand)]
enum RelCmd {
    /// Built-in relation: equality, strict-prefix, ll-less, universe:<k>, empty:<k>.
    Builtin { name: String },
    /// Intersection of two relations of equal arity.
    Intersect { a: PathBuf, b: PathBuf },
    /// Union of two relations of equal arity.
    Union { a: PathBuf, b: PathBuf },
    /// Complement within valid convolutions.
    Complement { a: PathBuf },
    /// Existentially projects out one track.
    Project {
        a: PathBuf,
        #[arg(long)]
        track: usize,
    },
    /// Rewrites the automaton in canonical minimal form.
    Minimize { a: PathBuf },
    /// Exit 0 iff the relation is empty.
    Empty { a: PathBuf },
    /// Lists tuples with components up to `--bound` long.
    Enumerate { a: PathBuf },
}

#[derive(Debug, Subcommand)]
enum GroupCmd {
    /// Builds a presentation: int, separated(<nk>), madic(<m>), product(<g>,<h>).
    Build { kind: String },
    /// Checks the group laws exhaustively up to `--bound`.
    Verify { bundle: PathBuf },
}

#[derive(Debug, Subcommand)]
enum AcgCmd {
    /// Linear valuation over a group kind, e.g. `--coefs 1,1`.
    Linear {
        kind: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coefs: Vec<i64>,
    },
    /// Validates the valuation, cone and kernel up to `--bound`.
    Validate { bundle: PathBuf },
    /// Quotients by the kernel of the valuation.
    Quotient { bundle: PathBuf },
}

#[derive(Debug, Subcommand)]
enum AsmCmd {
    /// Supermartingale that dies on aligned occurrences of `word`.
    BuildForbidden { word: String },
    /// Constant capital over the integers.
    BuildConstant {
        #[arg(allow_hyphen_values = true)]
        value: i64,
    },
    /// Fairness and sign checks.
    Verify { bundle: PathBuf },
    /// Capital along a prefix of a sequence, one value per line.
    Trace { bundle: PathBuf, spec: String, len: usize },
    /// Exit 0 iff the ASM succeeds on `u v v v ...`.
    Succeeds { bundle: PathBuf, u: String, v: String },
    /// Pointwise sum of two ASMs over a common target.
    Sum { a: PathBuf, b: PathBuf },
}

#[derive(Debug, Subcommand)]
enum FsgCmd {
    /// Exact capital after every prefix of a word or sequence prefix.
    Run(FsgRun),
}

#[derive(Debug, Args)]
struct FsgRun {
    file: PathBuf,
    /// Binary word to read.
    word: Option<String>,
    /// Sequence spec to read instead of a word.
    #[arg(long, requires = "len", conflicts_with = "word")]
    seq: Option<String>,
    #[arg(long)]
    len: Option<usize>,
    /// Also iterate the automatic step function and compare.
    #[arg(long)]
    check: bool,
}

#[derive(Debug, Subcommand)]
enum SeqCmd {
    /// Prints the first `len` bits.
    Prefix { spec: String, len: usize },
    /// Exit 0 iff every word of length `l` occurs in the first `len` bits.
    Disjunctive { spec: String, l: usize, len: usize },
}

#[derive(Debug, Subcommand)]
enum ExportCmd {
    /// DOT rendering of an automaton file.
    Dot { a: PathBuf },
}

/// Parses arguments, runs, and returns the exit code. Output goes to `out`,
/// diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::BudgetExceeded { .. } => EXIT_BUDGET,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn parse_word(s: &str) -> Result<Word> {
    s.parse()
}

fn read_rel(path: &Path) -> Result<AutomaticRelation> {
    parse_dfa(&fs::read_to_string(path)?)
}

fn need_out(cli: &Cli) -> Result<&Path> {
    cli.out.as_deref().ok_or_else(|| Error::param("--out is required"))
}

/// Writes an automaton to `--out`, or to stdout when absent.
fn emit_rel(cli: &Cli, out: &mut dyn Write, rel: &AutomaticRelation) -> Result<i32> {
    let text = write_dfa(rel);
    match &cli.out {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn code(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_FALSE
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Rel(c) => rel(cli, c, out),
        Command::Group(c) => group(cli, c, out),
        Command::Acg(c) => acg(cli, c, out),
        Command::Asm(c) => asm(cli, c, out),
        Command::Fsg(FsgCmd::Run(r)) => fsg(cli, r, out),
        Command::Seq(c) => seq(c, out),
        Command::Export(ExportCmd::Dot { a }) => {
            out.write_all(to_dot(&read_rel(a)?).as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

fn builtin(name: &str) -> Result<AutomaticRelation> {
    let arity = |s: &str| s.parse::<usize>().map_err(|_| Error::param(format!("bad arity `{s}`")));
    match name.split_once(':') {
        None if name == "equality" => Ok(AutomaticRelation::equality()),
        None if name == "strict-prefix" => Ok(AutomaticRelation::strict_prefix()),
        None if name == "ll-less" => Ok(AutomaticRelation::ll_less(1)),
        Some(("universe", k)) => Ok(AutomaticRelation::universe(arity(k)?)),
        Some(("empty", k)) => Ok(AutomaticRelation::empty(arity(k)?)),
        _ => Err(Error::param(format!("unknown builtin `{name}`"))),
    }
}

fn rel(cli: &Cli, c: &RelCmd, out: &mut dyn Write) -> Result<i32> {
    let r = match c {
        RelCmd::Builtin { name } => builtin(name)?,
        RelCmd::Intersect { a, b } => read_rel(a)?.intersect(&read_rel(b)?)?,
        RelCmd::Union { a, b } => read_rel(a)?.union(&read_rel(b)?)?,
        RelCmd::Complement { a } => read_rel(a)?.complement(),
        RelCmd::Project { a, track } => read_rel(a)?.project(*track)?,
        RelCmd::Minimize { a } => read_rel(a)?,
        RelCmd::Empty { a } => {
            let empty = read_rel(a)?.is_empty();
            writeln!(out, "{}", if empty { "empty" } else { "nonempty" })?;
            return Ok(code(empty));
        }
        RelCmd::Enumerate { a } => {
            for t in read_rel(a)?.enumerate(cli.bound) {
                let cells: Vec<String> = t.iter().map(Word::to_string).collect();
                writeln!(out, "({})", cells.join(", "))?;
            }
            return Ok(EXIT_OK);
        }
    };
    emit_rel(cli, out, &r)
}

fn group(cli: &Cli, c: &GroupCmd, out: &mut dyn Write) -> Result<i32> {
    match c {
        GroupCmd::Build { kind } => {
            let g = build_group(&kind.parse::<GroupKind>()?)?;
            save_group(need_out(cli)?, &g)?;
            writeln!(out, "group {} domain={} add={} neg={}", g.kind(), g.domain().num_states(), g.add().num_states(), g.neg().num_states())?;
            Ok(EXIT_OK)
        }
        GroupCmd::Verify { bundle } => {
            let report = verify_group_axioms_with_budget(&load_group(bundle)?, cli.bound, cli.budget)?;
            write!(out, "{report}")?;
            Ok(code(report.passed()))
        }
    }
}

fn acg(cli: &Cli, c: &AcgCmd, out: &mut dyn Write) -> Result<i32> {
    match c {
        AcgCmd::Linear { kind, coefs } => {
            let a = Acg::linear(build_group(&kind.parse::<GroupKind>()?)?, coefs)?;
            save_acg(need_out(cli)?, &a)?;
            writeln!(out, "acg over {} trivial-kernel={}", a.group().kind(), a.has_trivial_kernel())?;
            Ok(EXIT_OK)
        }
        AcgCmd::Validate { bundle } => {
            let report = validate_acg(&load_acg(bundle)?, cli.bound)?;
            write!(out, "{report}")?;
            Ok(code(report.passed()))
        }
        AcgCmd::Quotient { bundle } => {
            let q = quotient_trivialize(&load_acg(bundle)?, cli.budget)?;
            save_acg(need_out(cli)?, &q)?;
            writeln!(out, "quotient domain={} trivial-kernel={}", q.group().domain().num_states(), q.has_trivial_kernel())?;
            Ok(EXIT_OK)
        }
    }
}

fn asm(cli: &Cli, c: &AsmCmd, out: &mut dyn Write) -> Result<i32> {
    match c {
        AsmCmd::BuildForbidden { word } => {
            let d = Asm::forbidden_word(&parse_word(word)?, cli.budget)?;
            save_asm(need_out(cli)?, &d)?;
            writeln!(out, "{}", d.evaluator().expect("forbidden-word evaluator"))?;
            Ok(EXIT_OK)
        }
        AsmCmd::BuildConstant { value } => {
            let acg = Acg::linear(build_group(&GroupKind::Int)?, &[1])?;
            let c = acg.group().encode_int(*value)?;
            let d = Asm::constant(acg, &c)?;
            save_asm(need_out(cli)?, &d)?;
            writeln!(out, "{}", d.evaluator().expect("constant evaluator"))?;
            Ok(EXIT_OK)
        }
        AsmCmd::Verify { bundle } => {
            let d = load_asm(bundle)?;
            let fair = verify_fairness(&d, cli.budget, cli.bound)?;
            let nonneg = verify_nonneg(&d, cli.budget, cli.bound)?;
            writeln!(out, "fairness: {fair}")?;
            writeln!(out, "nonneg: {nonneg}")?;
            Ok(code(fair.holds && nonneg.holds))
        }
        AsmCmd::Trace { bundle, spec, len } => {
            let d = load_asm(bundle)?;
            let x = spec.parse::<SequenceSpec>()?.prefix(*len)?;
            for v in capital_trace(&d, &x)? {
                writeln!(out, "{v}")?;
            }
            Ok(EXIT_OK)
        }
        AsmCmd::Succeeds { bundle, u, v } => {
            let d = load_asm(bundle)?;
            let verdict = succeeds_on_up(&d, &parse_word(u)?, &parse_word(v)?, cli.budget)?;
            writeln!(out, "{verdict}")?;
            Ok(code(verdict.succeeded))
        }
        AsmCmd::Sum { a, b } => {
            let (d1, d2) = (load_asm(a)?, load_asm(b)?);
            let (r_eq, r_lt) = crate::acg::build_compatibility(d1.acg(), d2.acg(), cli.budget)?;
            let d = asm_sum(&d1, &d2, &r_eq, &r_lt, cli.budget)?;
            save_asm(need_out(cli)?, &d)?;
            match d.evaluator() {
                Some(e) => writeln!(out, "{e}")?,
                None => writeln!(out, "asm graph-only")?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn fsg(cli: &Cli, r: &FsgRun, out: &mut dyn Write) -> Result<i32> {
    let g = Fsg::parse(&fs::read_to_string(&r.file)?)?;
    let w = match (&r.word, &r.seq, r.len) {
        (Some(w), None, _) => parse_word(w)?,
        (None, Some(s), Some(len)) => s.parse::<SequenceSpec>()?.prefix(len)?,
        _ => return Err(Error::param("give a word or --seq with --len")),
    };
    let caps = fsg_capitals(&g, &w);
    for c in &caps {
        writeln!(out, "{c}")?;
    }
    if !r.check {
        return Ok(EXIT_OK);
    }
    let step = fsg_step_function(&g, cli.budget)?;
    let auto: Vec<BigRational> = step.iterate(&w, g.initial_capital())?;
    match caps.iter().zip(&auto).position(|(a, b)| a != b) {
        None => {
            writeln!(out, "step function agrees on {} prefixes over {}", caps.len(), step.kind())?;
            Ok(EXIT_OK)
        }
        Some(i) => {
            writeln!(out, "step function disagrees at prefix length {i}: {} vs {}", caps[i], auto[i])?;
            Ok(EXIT_FALSE)
        }
    }
}

fn seq(c: &SeqCmd, out: &mut dyn Write) -> Result<i32> {
    match c {
        SeqCmd::Prefix { spec, len } => {
            let x = spec.parse::<SequenceSpec>()?.prefix(*len)?;
            let bits: String = x.bits().iter().map(|b| if *b == 0 { '0' } else { '1' }).collect();
            writeln!(out, "{bits}")?;
            Ok(EXIT_OK)
        }
        SeqCmd::Disjunctive { spec, l, len } => {
            let missing = missing_words(&spec.parse()?, *l, *len)?;
            if missing.is_empty() {
                writeln!(out, "saturated: every word of length {l} occurs in the first {len} bits")?;
            } else {
                writeln!(out, "missing {} of {} words of length {l}:", missing.len(), 1u64 << l)?;
                for w in &missing {
                    writeln!(out, "{w}")?;
                }
            }
            Ok(code(missing.is_empty()))
        }
    }
}
