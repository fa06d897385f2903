//! Command-line front end. This stays a thin layer: argument parsing,
//! output formatting and exit codes; all computation lives in the library.
//!
//! Exit codes: 0 success, 2 bad arguments or malformed input, 3 method
//! disagreement (or failed crosscheck), 4 enumeration budget exceeded,
//! 5 diagram invariant violation.

use std::io::Read as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigInt;

use chaintree::counting::{
    count_irregular, count_irregular_as_printed, count_regular, factorial, recurrence_counts,
    CountError, CountMethod, CountRow, CountSubject, CountTable,
};
use chaintree::crosscheck::{self, CrosscheckConfig};
use chaintree::diagram::{ChainProfile, ParseError, PruferSequence, RootedDiagram, Violation};
use chaintree::dot::to_dot;
use chaintree::oracle::{count_unrooted, EnumerationBudget, OracleError};
use chaintree::prufer;
use chaintree::series::solve_gf;
use num::BigRational;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_INVALID: i32 = 5;

#[derive(Parser)]
#[command(
    name = "chaintree",
    version,
    about = "Count tree-type diagrams assembled from oriented labeled chains, \
             and convert diagrams to and from their tree-code sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count diagrams for one (q, k) pair or one explicit profile
    Count(CountArgs),
    /// Print the count sequence for k = 0..=k-max at fixed q
    Table(TableArgs),
    /// Encode a diagram (canonical JSON on stdin) into its sequence
    Encode(EncodeArgs),
    /// Decode a sequence into canonical diagram JSON
    Decode(DecodeArgs),
    /// Run the cross-validation suite
    Crosscheck(CrosscheckArgs),
    /// Render a diagram (canonical JSON on stdin) as Graphviz DOT
    Dot(DotArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Closed,
    Recurrence,
    Series,
    Oracle,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Plain,
    Csv,
    Json,
}

#[derive(Args)]
struct CountArgs {
    /// Chain length of the regular family (every element has q edges)
    #[arg(long)]
    q: Option<u32>,
    /// Number of chain elements (required with --q)
    #[arg(long)]
    k: Option<u32>,
    /// Explicit chain-length profile, e.g. 1,2,3
    #[arg(long, conflicts_with = "q")]
    profile: Option<String>,
    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    method: MethodArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Plain)]
    format: FormatArg,
    /// Use the non-validated variant of the irregular-count base
    /// (profile counts only); the output is watermarked
    #[arg(long)]
    as_printed: bool,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    k_max: u32,
    #[arg(long, value_enum, default_value_t = FormatArg::Plain)]
    format: FormatArg,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Plain)]
    format: FormatArg,
}

#[derive(Args)]
struct DecodeArgs {
    /// Chain-length profile of the target diagram, e.g. 3,3,3,3,3,3
    #[arg(long)]
    profile: String,
    /// Comma-separated sequence, e.g. b2,0,b1,a1,e2 (empty for k = 1)
    sequence: Option<String>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Args)]
struct CrosscheckArgs {
    #[arg(long, default_value_t = 3)]
    q_max: u32,
    #[arg(long, default_value_t = 12)]
    k_max: u32,
    #[arg(long, default_value_t = 9)]
    sum_q_max: u32,
    /// Negative control: inject the wrong value 183 at (q=3, k=3) and
    /// require the suite to fail
    #[arg(long)]
    inject_183: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Plain)]
    format: FormatArg,
}

#[derive(Args)]
struct DotArgs {}

enum CliError {
    Usage(String),
    Disagreement(String),
    Budget(String),
    Invalid(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Disagreement(_) => EXIT_DISAGREEMENT,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Invalid(_) => EXIT_INVALID,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Disagreement(m)
            | CliError::Budget(m)
            | CliError::Invalid(m) => m,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<Violation> for CliError {
    fn from(e: Violation) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<CountError> for CliError {
    fn from(e: CountError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            OracleError::InexactDivision => CliError::Disagreement(e.to_string()),
        }
    }
}

/// Entry point used by `main`; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let budget = match budget_from_env() {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return e.code();
        }
    };
    let result = match cli.command {
        Command::Count(args) => cmd_count(args, &budget),
        Command::Table(args) => cmd_table(args),
        Command::Encode(args) => cmd_encode(args),
        Command::Decode(args) => cmd_decode(args),
        Command::Crosscheck(args) => cmd_crosscheck(args, &budget),
        Command::Dot(args) => cmd_dot(args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

/// `CHAINTREE_BUDGET` overrides the default cap on the oracle's candidate
/// space.
fn budget_from_env() -> Result<EnumerationBudget, CliError> {
    match std::env::var("CHAINTREE_BUDGET") {
        Ok(text) => text
            .parse::<u64>()
            .map(EnumerationBudget::new)
            .map_err(|_| {
                CliError::Usage(format!(
                    "CHAINTREE_BUDGET must be an unsigned integer (got {text:?})"
                ))
            }),
        Err(_) => Ok(EnumerationBudget::default()),
    }
}

/// Count via the generating-function coefficient: `h_k * k! / ((q-1)k + 1)`.
fn count_from_series(q: u32, k: u32) -> Result<BigInt, CliError> {
    let gf = solve_gf(q, k as usize)?;
    let d = gf.coeff(k as usize)
        * BigRational::new(
            factorial(k),
            BigInt::from((q as u64 - 1) * k as u64 + 1),
        );
    if !d.is_integer() {
        return Err(CliError::Disagreement(format!(
            "series coefficient at q={q} k={k} does not reduce to an integer count"
        )));
    }
    Ok(d.to_integer())
}

fn count_from_lagrange(q: u32, k: u32) -> Result<BigInt, CliError> {
    let h = chaintree::series::lagrange_gf_coeff(q, k)?;
    let d = h * BigRational::new(
        factorial(k),
        BigInt::from((q as u64 - 1) * k as u64 + 1),
    );
    if !d.is_integer() {
        return Err(CliError::Disagreement(format!(
            "inversion coefficient at q={q} k={k} does not reduce to an integer count"
        )));
    }
    Ok(d.to_integer())
}

fn print_table(table: &CountTable, format: FormatArg) {
    match format {
        FormatArg::Plain => {
            let joined: Vec<String> = table.rows.iter().map(|r| r.count.to_string()).collect();
            println!("{}", joined.join(","));
        }
        FormatArg::Csv => print!("{}", table.to_csv()),
        FormatArg::Json => print!("{}", table.to_json_lines()),
    }
}

fn finish_count(
    subject: CountSubject,
    k: u32,
    rows: Vec<(CountMethod, BigInt)>,
    format: FormatArg,
) -> Result<(), CliError> {
    let all_agree = rows.windows(2).all(|w| w[0].1 == w[1].1);
    let table = CountTable {
        subject,
        rows: rows
            .iter()
            .map(|(method, count)| CountRow {
                k,
                count: count.clone(),
                method: *method,
            })
            .collect(),
    };
    if !all_agree {
        // Disputed values still reach machine formats, but never without the
        // nonzero exit and the stderr listing.
        match format {
            FormatArg::Plain => {}
            _ => print_table(&table, format),
        }
        let listing: Vec<String> = rows
            .iter()
            .map(|(m, v)| format!("{}={v}", m.as_str()))
            .collect();
        return Err(CliError::Disagreement(format!(
            "methods disagree: {}",
            listing.join(" ")
        )));
    }
    match format {
        FormatArg::Plain => println!("{}", rows[0].1),
        _ => print_table(&table, format),
    }
    if rows.len() > 1 {
        let names: Vec<&str> = rows.iter().map(|(m, _)| m.as_str()).collect();
        eprintln!(
            "agreement: {} all give {} ({} routes)",
            names.join(" = "),
            rows[0].1,
            rows.len()
        );
    }
    Ok(())
}

fn cmd_count(args: CountArgs, budget: &EnumerationBudget) -> Result<(), CliError> {
    match (&args.q, &args.profile) {
        (Some(q), None) => count_regular_cmd(*q, args, budget),
        (None, Some(_)) => count_profile_cmd(args, budget),
        _ => Err(CliError::Usage(
            "exactly one of --q or --profile is required".into(),
        )),
    }
}

fn count_regular_cmd(
    q: u32,
    args: CountArgs,
    budget: &EnumerationBudget,
) -> Result<(), CliError> {
    let k = args
        .k
        .ok_or_else(|| CliError::Usage("--k is required with --q".into()))?;
    if args.as_printed {
        return Err(CliError::Usage(
            "--as-printed applies only to --profile counts".into(),
        ));
    }
    let oracle_value = |budget: &EnumerationBudget| -> Result<BigInt, CliError> {
        if k == 0 {
            return Err(CliError::Usage(
                "the oracle enumerates diagrams only for k >= 1".into(),
            ));
        }
        let profile = ChainProfile::regular(q, k)?;
        Ok(count_unrooted(&profile, budget)?)
    };
    let mut rows: Vec<(CountMethod, BigInt)> = Vec::new();
    match args.method {
        MethodArg::Closed => rows.push((CountMethod::ClosedForm, count_regular(q, k)?)),
        MethodArg::Recurrence => rows.push((
            CountMethod::Recurrence,
            recurrence_counts(q, k)?[k as usize].clone(),
        )),
        MethodArg::Series => rows.push((CountMethod::Series, count_from_series(q, k)?)),
        MethodArg::Oracle => rows.push((CountMethod::Oracle, oracle_value(budget)?)),
        MethodArg::All => {
            rows.push((CountMethod::ClosedForm, count_regular(q, k)?));
            rows.push((
                CountMethod::Recurrence,
                recurrence_counts(q, k)?[k as usize].clone(),
            ));
            rows.push((CountMethod::Series, count_from_series(q, k)?));
            if k >= 1 {
                rows.push((CountMethod::Lagrange, count_from_lagrange(q, k)?));
            }
            let in_budget =
                k >= 1 && budget.admits(&ChainProfile::regular(q, k)?);
            if in_budget {
                rows.push((CountMethod::Oracle, oracle_value(budget)?));
            } else {
                eprintln!(
                    "note: oracle skipped (k = 0 or candidate space beyond budget {})",
                    budget.max_states
                );
            }
        }
    }
    finish_count(CountSubject::Regular(q), k, rows, args.format)
}

fn count_profile_cmd(args: CountArgs, budget: &EnumerationBudget) -> Result<(), CliError> {
    let profile: ChainProfile = args.profile.as_deref().unwrap().parse()?;
    let k = profile.element_count() as u32;
    if let Some(explicit_k) = args.k {
        if explicit_k != k {
            return Err(CliError::Usage(format!(
                "--k {explicit_k} contradicts the {k}-element profile"
            )));
        }
    }
    let formula_row = || -> (CountMethod, BigInt) {
        if args.as_printed {
            (
                CountMethod::AsPrintedNonValidated,
                count_irregular_as_printed(&profile),
            )
        } else {
            (CountMethod::ClosedForm, count_irregular(&profile))
        }
    };
    if args.as_printed {
        eprintln!(
            "warning: --as-printed output is non-validated; it fails the enumeration cross-check"
        );
    }
    let mut rows: Vec<(CountMethod, BigInt)> = Vec::new();
    match args.method {
        MethodArg::Closed => rows.push(formula_row()),
        MethodArg::Oracle => {
            rows.push((CountMethod::Oracle, count_unrooted(&profile, budget)?))
        }
        MethodArg::All => {
            rows.push((CountMethod::ClosedForm, count_irregular(&profile)));
            if args.as_printed {
                rows.push((
                    CountMethod::AsPrintedNonValidated,
                    count_irregular_as_printed(&profile),
                ));
            }
            if budget.admits(&profile) {
                rows.push((CountMethod::Oracle, count_unrooted(&profile, budget)?));
            } else {
                eprintln!(
                    "note: oracle skipped (candidate space beyond budget {})",
                    budget.max_states
                );
            }
        }
        MethodArg::Recurrence | MethodArg::Series => {
            return Err(CliError::Usage(
                "methods recurrence/series apply to the regular family; use --q".into(),
            ))
        }
    }
    finish_count(CountSubject::Profile(profile), k, rows, args.format)
}

fn cmd_table(args: TableArgs) -> Result<(), CliError> {
    let rows = (0..=args.k_max)
        .map(|k| {
            Ok(CountRow {
                k,
                count: count_regular(args.q, k)?,
                method: CountMethod::ClosedForm,
            })
        })
        .collect::<Result<Vec<_>, CountError>>()?;
    let table = CountTable {
        subject: CountSubject::Regular(args.q),
        rows,
    };
    print_table(&table, args.format);
    if args.q == 3 && args.k_max >= 3 {
        eprintln!(
            "note: d(3,3) = 189 (sometimes misquoted as 183); confirmed by closed form, \
             recurrence, series and exhaustive enumeration"
        );
    }
    Ok(())
}

fn read_stdin() -> Result<String, CliError> {
    let mut text = String::new();
    std::io::stdin()
        .read_to_string(&mut text)
        .map_err(|e| CliError::Usage(format!("cannot read standard input: {e}")))?;
    Ok(text)
}

fn cmd_encode(args: EncodeArgs) -> Result<(), CliError> {
    let text = read_stdin()?;
    let diagram = RootedDiagram::from_json(text.trim())?;
    let sequence = prufer::encode(&diagram)?;
    match args.format {
        FormatArg::Plain => println!("{}", sequence.render()),
        FormatArg::Csv => {
            println!("token");
            for t in sequence.tokens() {
                println!("{}", t.render());
            }
        }
        FormatArg::Json => {
            let profile: Vec<String> = diagram
                .profile()
                .lengths()
                .iter()
                .map(|q| q.to_string())
                .collect();
            let tokens: Vec<String> = sequence
                .tokens()
                .iter()
                .map(|t| format!("\"{}\"", t.render()))
                .collect();
            println!(
                "{{\"profile\":[{}],\"tokens\":[{}]}}",
                profile.join(","),
                tokens.join(",")
            );
        }
    }
    Ok(())
}

fn cmd_decode(args: DecodeArgs) -> Result<(), CliError> {
    let profile: ChainProfile = args.profile.parse()?;
    let text = args.sequence.unwrap_or_default();
    let sequence = PruferSequence::parse(&text, &profile)?;
    let diagram = prufer::decode(&sequence);
    match args.format {
        FormatArg::Json => println!("{}", diagram.to_json()),
        FormatArg::Csv => {
            println!("elem,attach");
            for (i, p) in diagram.parents().iter().enumerate() {
                println!("{},{}", chaintree::diagram::color_name(i), p.render());
            }
        }
        FormatArg::Plain => {
            for (i, p) in diagram.parents().iter().enumerate() {
                println!("{} {}", chaintree::diagram::color_name(i), p.render());
            }
        }
    }
    Ok(())
}

fn cmd_dot(_args: DotArgs) -> Result<(), CliError> {
    let text = read_stdin()?;
    let diagram = RootedDiagram::from_json(text.trim())?;
    diagram.validate()?;
    print!("{}", to_dot(&diagram));
    Ok(())
}

fn csv_quote(text: &str) -> String {
    format!("\"{}\"", text.replace('"', "\"\""))
}

fn cmd_crosscheck(args: CrosscheckArgs, budget: &EnumerationBudget) -> Result<(), CliError> {
    let config = CrosscheckConfig {
        q_max: args.q_max,
        k_max: args.k_max,
        sum_q_max: args.sum_q_max,
        budget: *budget,
        inject_183: args.inject_183,
    };
    if config.q_max < 2 {
        return Err(CliError::Usage("--q-max must be at least 2".into()));
    }
    let outcomes = crosscheck::run(&config);
    let passed = outcomes.iter().filter(|o| o.passed).count();
    match args.format {
        FormatArg::Plain => {
            for o in &outcomes {
                println!(
                    "{:<20} {}  {}  [{} ms]",
                    o.name,
                    if o.passed { "PASS" } else { "FAIL" },
                    o.detail,
                    o.elapsed.as_millis()
                );
            }
            println!(
                "RESULT: {} ({passed}/{} checks)",
                if passed == outcomes.len() { "PASS" } else { "FAIL" },
                outcomes.len()
            );
        }
        FormatArg::Csv => {
            println!("check,status,elapsed_ms,detail");
            for o in &outcomes {
                println!(
                    "{},{},{},{}",
                    o.name,
                    if o.passed { "pass" } else { "fail" },
                    o.elapsed.as_millis(),
                    csv_quote(&o.detail)
                );
            }
        }
        FormatArg::Json => {
            for o in &outcomes {
                println!(
                    "{{\"check\":\"{}\",\"status\":\"{}\",\"elapsed_ms\":{},\"detail\":{}}}",
                    o.name,
                    if o.passed { "pass" } else { "fail" },
                    o.elapsed.as_millis(),
                    serde_json::to_string(&o.detail).expect("string serialization cannot fail")
                );
            }
        }
    }
    if passed == outcomes.len() {
        Ok(())
    } else {
        let failed: Vec<&str> = outcomes
            .iter()
            .filter(|o| !o.passed)
            .map(|o| o.name)
            .collect();
        Err(CliError::Disagreement(format!(
            "{} of {} checks failed: {}",
            outcomes.len() - passed,
            outcomes.len(),
            failed.join(", ")
        )))
    }
}
