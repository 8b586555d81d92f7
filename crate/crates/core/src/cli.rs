//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 verification mismatch,
//! 3 budget exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::characters::{act, break_sequence, indicator, indicator_1m, Character};
use crate::equivalence::{
    strict_classes_1m, strict_classes_bruteforce, weak_orbits_bruteforce, ClassReport, Criterion,
    Options, CSV_HEADER, DEFAULT_BUDGET,
};
use crate::error::Error;
use crate::fpseries::FpSeries;
use crate::nottingham::NottinghamElement;
use crate::verify::{run_suite, Suite, SuiteConfig, SuiteReport, DEFAULT_SEED, DEFAULT_TRIALS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "nottingham",
    version,
    about = "Characters of the Nottingham group and their equivalence classes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Partition a character type into weak or strict classes.
    Enumerate(EnumerateArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Act on a character by a Nottingham element.
    Act(ActArgs),
    /// Order of a Nottingham element in the quotient modulo t^n.
    Order(OrderArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Maximum number of action evaluations.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Allow instances with p >= 5.
    #[arg(long)]
    large: bool,
    /// Suppress progress output on stderr.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    m: u32,
    /// First break of the type (1 or 2).
    #[arg(long, default_value_t = 2)]
    b0: u32,
    #[arg(long, value_enum, default_value_t = RelationArg::Weak)]
    relation: RelationArg,
    /// Kernel condition for strict moves.
    #[arg(long, value_enum, default_value_t = CriterionArg::ModP)]
    criterion: CriterionArg,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 3)]
    p: u32,
    /// Restrict the suite to one second break.
    #[arg(long)]
    m: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Randomized trials per case arm.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ActArgs {
    /// Character JSON file.
    #[arg(long)]
    character: PathBuf,
    /// Nottingham element JSON file.
    #[arg(long)]
    element: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OrderArgs {
    /// Nottingham element JSON file.
    #[arg(long, conflicts_with_all = ["p", "coeffs"])]
    element: Option<PathBuf>,
    #[arg(long, requires = "coeffs")]
    p: Option<u32>,
    /// Series coefficients c0,c1,... (c0 = 0, c1 = 1).
    #[arg(long, value_delimiter = ',', requires = "p")]
    coeffs: Option<Vec<i64>>,
    /// Quotient precision (default: the precision of the element).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum RelationArg {
    Weak,
    Strict,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CriterionArg {
    ModP,
    ModP2,
}

/// A failure that maps to an exit code and a message on stderr.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { needed, budget } => Failure {
                code: EXIT_BUDGET,
                message: format!(
                    "{e}\nno classes computed: the run needs {needed} action evaluations; rerun with --budget {needed} or more (current {budget})"
                ),
            },
            Error::LargeInstance { .. } => Failure::usage(format!("{e}; pass --large to run it")),
            other => Failure::usage(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let outcome = match cli.command {
        Command::Enumerate(a) => cmd_enumerate(&a, stdout, stderr),
        Command::Verify(a) => cmd_verify(&a, stdout),
        Command::Act(a) => cmd_act(&a, stdout),
        Command::Order(a) => cmd_order(&a, stdout),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn with_threads<T: Send, F: FnOnce() -> std::result::Result<T, Failure> + Send>(
    threads: Option<usize>,
    f: F,
) -> std::result::Result<T, Failure> {
    match threads {
        None => f(),
        Some(0) => Err(Failure::usage("--threads must be positive")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::usage(format!("cannot start worker pool: {e}")))?;
            pool.install(f)
        }
    }
}

fn emit(
    text: &str,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> std::result::Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::usage(e.to_string())),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn options(common: &Common, progress: bool) -> Options {
    let progress = (progress && !common.quiet).then(|| {
        let f: crate::equivalence::ProgressFn =
            Arc::new(|done, total| eprintln!("progress: {done}/{total} characters"));
        f
    });
    Options {
        budget: common.budget,
        allow_large: common.large,
        progress,
    }
}

fn cmd_enumerate(a: &EnumerateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let opts = options(&a.common, true);
    let criterion = match a.criterion {
        CriterionArg::ModP => Criterion::ModP,
        CriterionArg::ModP2 => Criterion::ModP2,
    };
    let report = with_threads(a.common.threads, || {
        Ok(match (a.b0, a.relation) {
            (2, RelationArg::Weak) => weak_orbits_bruteforce(a.p, a.m, &opts)?,
            (2, RelationArg::Strict) => strict_classes_bruteforce(a.p, a.m, criterion, &opts)?,
            (1, RelationArg::Strict) => strict_classes_1m(a.p, a.m, &opts)?,
            (1, RelationArg::Weak) => {
                return Err(Failure::usage("type <1,m> supports --relation strict only"))
            }
            (b0, _) => return Err(Error::UnsupportedType(b0).into()),
        })
    })?;
    let text = match a.common.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => format!("{CSV_HEADER}\n{}\n", report.csv_row()),
        Format::Text => report_text(&report),
    };
    emit(&text, a.common.out.as_deref(), stdout)?;
    for f in &report.failures {
        let _ = writeln!(stderr, "verification failure: {f}");
    }
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    })
}

fn report_text(r: &ClassReport) -> String {
    let mut s = format!(
        "type <{},{}> at p = {}: {} characters\n",
        r.b0, r.m, r.p, r.character_count
    );
    s.push_str(&format!("weak classes: {}", r.weak_count));
    if let Some(c) = r.weak_count_closed_form {
        s.push_str(&format!(" (closed form {c})"));
    }
    s.push('\n');
    for (i, c) in r.weak_classes.iter().enumerate() {
        let ind = c
            .indicator
            .map(|x| x.to_string())
            .unwrap_or_else(|| "-".into());
        s.push_str(&format!(
            "  W{i}: size {}, indicator {ind}, representative {}\n",
            c.size, c.representative
        ));
    }
    if let Some(n) = r.strict_count {
        s.push_str(&format!(
            "strict classes: {n} (bounds {}..={})\n",
            r.weak_count,
            r.p as u64 * r.weak_count
        ));
        for (i, c) in r.strict_classes.iter().enumerate() {
            s.push_str(&format!(
                "  S{i}: size {}, in W{}, representative {}",
                c.size, c.weak_class, c.representative
            ));
            if let Some(ind) = c.indicator_1m {
                s.push_str(&format!(", indicator {:?}", ind.values()));
            }
            s.push('\n');
        }
    }
    for f in &r.failures {
        s.push_str(&format!("FAIL {f}\n"));
    }
    s
}

fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn Write) -> Outcome {
    let suite: Suite = a.suite.parse().map_err(Failure::usage)?;
    let config = SuiteConfig {
        p: a.p,
        m: a.m,
        seed: a.seed,
        trials: a.trials,
        options: options(&a.common, false),
    };
    let report = with_threads(a.common.threads, || Ok(run_suite(suite, &config)?))?;
    let text = match a.common.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&report),
        Format::Csv => suite_csv(&report),
        Format::Text => suite_text(&report),
    };
    emit(&text, a.common.out.as_deref(), stdout)?;
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    })
}

fn suite_text(r: &SuiteReport) -> String {
    let mut s = format!("suite {} at p = {}", r.suite, r.p);
    if let Some(seed) = r.seed {
        s.push_str(&format!(" (seed {seed})"));
    }
    s.push('\n');
    for c in &r.checks {
        s.push_str(&format!("{c}\n"));
    }
    let failed = r.checks.iter().filter(|c| !c.passed).count();
    s.push_str(&format!(
        "{}: {} checks, {failed} failed\n",
        if failed == 0 { "PASS" } else { "FAIL" },
        r.checks.len()
    ));
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn suite_csv(r: &SuiteReport) -> String {
    let mut s = String::from("suite,p,check,passed,detail\n");
    for c in &r.checks {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            r.suite,
            r.p,
            csv_field(&c.name),
            c.passed,
            csv_field(&c.detail)
        ));
    }
    s
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> std::result::Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct ActOutput {
    character: Character,
    #[serde(skip_serializing_if = "Option::is_none")]
    break_sequence: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    indicator: Option<serde_json::Value>,
}

fn cmd_act(a: &ActArgs, stdout: &mut dyn Write) -> Outcome {
    let chi: Character = read_json(&a.character)?;
    let u: NottinghamElement = read_json(&a.element)?;
    let image = act(&u, &chi)?;
    let bs = break_sequence(&image).ok();
    let indicator = match bs {
        Some(b) if b.b0 == 2 => indicator(&image)
            .ok()
            .map(|i| serde_json::to_value(i).expect("serializable")),
        Some(b) if b.b0 == 1 => indicator_1m(&image)
            .ok()
            .map(|i| serde_json::to_value(i).expect("serializable")),
        _ => None,
    };
    let out = ActOutput {
        character: image,
        break_sequence: bs.map(|b| b.to_string()),
        indicator,
    };
    let text = match a.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&out),
        Format::Csv => return Err(Failure::usage("act supports --format json or text")),
        Format::Text => {
            let mut s = format!("character: {}\n", out.character);
            s.push_str(&format!(
                "break sequence: {}\n",
                out.break_sequence.as_deref().unwrap_or("-")
            ));
            let ind = out
                .indicator
                .as_ref()
                .map(|v| v.to_string())
                .unwrap_or_else(|| "-".into());
            s.push_str(&format!("indicator: {ind}\n"));
            s
        }
    };
    emit(&text, a.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}

fn cmd_order(a: &OrderArgs, stdout: &mut dyn Write) -> Outcome {
    let u = match (&a.element, a.p, &a.coeffs) {
        (Some(path), _, _) => read_json::<NottinghamElement>(path)?,
        (None, Some(p), Some(coeffs)) => NottinghamElement::new(FpSeries::from_ints(p, coeffs)?)?,
        _ => {
            return Err(Failure::usage(
                "give --element FILE or both --p and --coeffs",
            ))
        }
    };
    let n = a.n.unwrap_or(u.precision());
    let order = u.order_in_quotient(n)?;
    let text = match a.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&serde_json::json!({ "p": u.p(), "n": n, "order": order })),
        Format::Csv => format!("p,n,order\n{},{n},{order}\n", u.p()),
        Format::Text => format!("{order}\n"),
    };
    emit(&text, a.out.as_deref(), stdout)?;
    Ok(EXIT_OK)
}
