//! Command-line front end: `check`, `axes`, `matrix` and `oracle`.
//!
//! Exit codes: 0 consistent (or oracle clean), 1 inconsistent (or oracle
//! mismatch), 2 input or usage error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{all_axes, brute_force_axes, check, InconsistencyReason, Verdict};
use crate::construction::{build_matrix, RowOrigin};
use crate::generate::{random_profile, DEFAULT_TIE_PROBABILITY};
use crate::parse::{parse_native, parse_preflib};
use crate::profile::{Axis, Profile};
use crate::substructure::{axis_consistent, Model, Witness};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONSISTENT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Largest candidate count the oracle harness may brute-force.
pub const ORACLE_MAX_CANDIDATES: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "weakpeak", version, about = "Single-peaked consistency for weak orders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide consistency and print one consistent axis.
    Check(CheckArgs),
    /// List consistent axes.
    Axes(AxesArgs),
    /// Print the constraint matrix.
    Matrix(InputArgs),
    /// Compare the PQ-tree pipeline against brute force on random profiles.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Native,
    Preflib,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Sp,
    Plateau,
    Exist,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Sp => Model::SinglePeaked,
            ModelArg::Plateau => Model::SinglePlateaued,
            ModelArg::Exist => Model::ExistSP,
        }
    }
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Profile file, or `-` for stdin.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "native")]
    format: Format,
    #[arg(long, value_enum, default_value = "exist")]
    model: ModelArg,
    /// Rank candidates missing from a PrefLib vote together in a final tier.
    #[arg(long)]
    complete_missing_last: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Verify this axis directly instead of searching, e.g. "b<a<c<d<e".
    #[arg(long)]
    axis: Option<String>,
}

#[derive(Debug, Args)]
struct AxesArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 1000)]
    cap: usize,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 7)]
    max_candidates: usize,
    #[arg(long, default_value_t = 6)]
    max_voters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ =
                if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut io = Io { stdin, out, err };
    let result = match cli.command {
        Command::Check(args) => cmd_check(&args, &mut io),
        Command::Axes(args) => cmd_axes(&args, &mut io),
        Command::Matrix(args) => cmd_matrix(&args, &mut io),
        Command::Oracle(args) => cmd_oracle(&args, &mut io),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(io.err, "error: {message}");
            EXIT_INPUT
        }
    }
}

type CmdResult = Result<i32, String>;

fn load(args: &InputArgs, io: &mut Io<'_>) -> Result<Profile, String> {
    let text = if args.input.as_os_str() == "-" {
        let mut buf = String::new();
        io.stdin.read_to_string(&mut buf).map_err(|e| format!("stdin: {e}"))?;
        buf
    } else {
        std::fs::read_to_string(&args.input).map_err(|e| format!("{}: {e}", args.input.display()))?
    };
    let parsed = match args.format {
        Format::Native => parse_native(&text),
        Format::Preflib => parse_preflib(&text, args.complete_missing_last),
    };
    parsed.map_err(|e| format!("{}: {e}", args.input.display()))
}

fn parse_axis(profile: &Profile, text: &str) -> Result<Axis, String> {
    let ids = text
        .split('<')
        .map(|name| {
            let name = name.trim();
            profile.id_of(name).ok_or_else(|| format!("unknown candidate `{name}` in axis"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if ids.len() != profile.num_candidates() {
        return Err(format!("axis is not a permutation of the {} candidates", profile.num_candidates()));
    }
    Axis::new(ids).map_err(|e| e.to_string())
}

fn emit_json<T: Serialize>(io: &mut Io<'_>, value: &T) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    writeln!(io.out, "{text}").map_err(|e| e.to_string())
}

fn emit(io: &mut Io<'_>, text: &str) -> Result<(), String> {
    io.out.write_all(text.as_bytes()).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
struct WitnessRecord {
    kind: String,
    vote: usize,
    candidates: Vec<String>,
}

impl WitnessRecord {
    fn new(profile: &Profile, w: &Witness) -> Self {
        WitnessRecord {
            kind: w.kind.to_string(),
            vote: w.voter + 1,
            candidates: w.candidates.iter().map(|&c| profile.name(c).to_owned()).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
struct ReasonRecord {
    kind: &'static str,
    vote: usize,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    row: Option<usize>,
}

impl ReasonRecord {
    fn new(reason: &InconsistencyReason) -> Self {
        let (kind, row) = match reason {
            InconsistencyReason::Rejected(_) => ("rejected", None),
            InconsistencyReason::NoFeasiblePermutation { row, .. } => ("no_feasible_permutation", Some(*row)),
        };
        ReasonRecord { kind, vote: reason.voter() + 1, message: reason.to_string(), row }
    }
}

/// Result document of `check`. Key order is fixed by field order.
#[derive(Debug, Serialize)]
struct OutputRecord {
    model: &'static str,
    verdict: &'static str,
    axis: Option<Vec<String>>,
    /// Decimal string; counts can exceed 64 bits.
    axis_count: Option<String>,
    reason: Option<ReasonRecord>,
    witness: Option<WitnessRecord>,
    elapsed_ms: f64,
}

impl OutputRecord {
    fn plain(&self) -> String {
        let mut s = format!("model: {}\nverdict: {}\n", self.model, self.verdict);
        if let Some(axis) = &self.axis {
            s += &format!("axis: {}\n", axis.join(" < "));
        }
        if let Some(count) = &self.axis_count {
            s += &format!("axis_count: {count}\n");
        }
        if let Some(reason) = &self.reason {
            s += &format!("reason: {}\n", reason.message);
        }
        if let Some(w) = &self.witness {
            s += &format!("witness: {} in vote {}: {}\n", w.kind, w.vote, w.candidates.join(" < "));
        }
        s += &format!("elapsed_ms: {:.3}\n", self.elapsed_ms);
        s
    }
}

fn cmd_check(args: &CheckArgs, io: &mut Io<'_>) -> CmdResult {
    let profile = load(&args.input, io)?;
    let model: Model = args.input.model.into();
    let started = Instant::now();

    let mut record = OutputRecord {
        model: model.as_str(),
        verdict: "consistent",
        axis: None,
        axis_count: None,
        reason: None,
        witness: None,
        elapsed_ms: 0.0,
    };
    if let Some(text) = &args.axis {
        let axis = parse_axis(&profile, text)?;
        record.axis = Some(profile.axis_names(&axis));
        if let Err(w) = axis_consistent(&profile, &axis, model) {
            record.verdict = "inconsistent";
            record.witness = Some(WitnessRecord::new(&profile, &w));
        }
    } else {
        match check(&profile, model).verdict {
            Verdict::Consistent { axis, axis_count } => {
                record.axis = Some(profile.axis_names(&axis));
                record.axis_count = Some(axis_count.to_string());
            }
            Verdict::Inconsistent(reason) => {
                record.verdict = "inconsistent";
                record.reason = Some(ReasonRecord::new(&reason));
            }
        }
    }
    record.elapsed_ms = started.elapsed().as_secs_f64() * 1e3;

    if args.input.json {
        emit_json(io, &record)?;
    } else {
        emit(io, &record.plain())?;
    }
    Ok(if record.verdict == "consistent" { EXIT_OK } else { EXIT_INCONSISTENT })
}

#[derive(Debug, Serialize)]
struct AxesRecord {
    model: &'static str,
    axes: Vec<Vec<String>>,
    count: String,
    reason: Option<ReasonRecord>,
}

fn cmd_axes(args: &AxesArgs, io: &mut Io<'_>) -> CmdResult {
    let profile = load(&args.input, io)?;
    let model: Model = args.input.model.into();
    let result = check(&profile, model);
    let (count, reason) = match &result.verdict {
        Verdict::Consistent { axis_count, .. } => (axis_count.to_string(), None),
        Verdict::Inconsistent(reason) => ("0".to_owned(), Some(ReasonRecord::new(reason))),
    };
    let axes: Vec<Vec<String>> =
        all_axes(&profile, model, args.cap).iter().map(|a| profile.axis_names(a)).collect();
    let record = AxesRecord { model: model.as_str(), axes, count, reason };

    if args.input.json {
        emit_json(io, &record)?;
    } else {
        let mut s = String::new();
        for axis in &record.axes {
            s += &axis.join(" < ");
            s.push('\n');
        }
        s += &format!("count: {}\n", record.count);
        if let Some(reason) = &record.reason {
            s += &format!("reason: {}\n", reason.message);
        }
        emit(io, &s)?;
    }
    Ok(if result.is_consistent() { EXIT_OK } else { EXIT_INCONSISTENT })
}

#[derive(Debug, Serialize)]
struct MatrixRecord {
    model: &'static str,
    columns: Vec<String>,
    rows: Vec<Vec<u8>>,
    origins: Vec<RowOrigin>,
    reason: Option<ReasonRecord>,
}

fn cmd_matrix(args: &InputArgs, io: &mut Io<'_>) -> CmdResult {
    let profile = load(args, io)?;
    let model: Model = args.model.into();
    let built = build_matrix(&profile, model);
    let columns: Vec<String> = profile.candidates().iter().map(|c| c.name.clone()).collect();

    match built {
        Ok(matrix) => {
            if args.json {
                let m = matrix.num_columns();
                let rows =
                    matrix.rows().iter().map(|r| (0..m).map(|c| u8::from(r.contains(c))).collect()).collect();
                let record = MatrixRecord {
                    model: model.as_str(),
                    columns,
                    rows,
                    origins: matrix.origins().to_vec(),
                    reason: None,
                };
                emit_json(io, &record)?;
            } else {
                emit(io, &matrix.dump(&profile))?;
            }
            Ok(EXIT_OK)
        }
        Err(rejection) => {
            let reason = ReasonRecord::new(&InconsistencyReason::Rejected(rejection));
            if args.json {
                let record = MatrixRecord {
                    model: model.as_str(),
                    columns,
                    rows: vec![],
                    origins: vec![],
                    reason: Some(reason),
                };
                emit_json(io, &record)?;
            } else {
                emit(io, &format!("{}\n", reason.message))?;
            }
            Ok(EXIT_INCONSISTENT)
        }
    }
}

/// Tally of one oracle run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleSummary {
    pub trials: usize,
    pub seed: u64,
    pub max_candidates: usize,
    pub max_voters: usize,
    /// Mismatch counts per model, in `Model::ALL` order.
    pub mismatches: Vec<(String, usize)>,
    pub total_mismatches: usize,
    /// Native-format text of the first mismatching profile, if any.
    pub first_mismatch: Option<String>,
}

/// The random profile for oracle trial `trial`: `m` uniform in
/// `2..=max_candidates`, `n` uniform in `1..=max_voters`, tie density 0.3.
pub fn oracle_profile(seed: u64, trial: usize, max_candidates: usize, max_voters: usize) -> Profile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let m = rng.random_range(2..=max_candidates);
    let n = rng.random_range(1..=max_voters);
    random_profile(m, n, DEFAULT_TIE_PROBABILITY, &mut rng)
}

pub fn run_oracle(trials: usize, max_candidates: usize, max_voters: usize, seed: u64) -> OracleSummary {
    let mut per_model = [0usize; 3];
    let mut first_mismatch = None;
    for trial in 0..trials {
        let profile = oracle_profile(seed, trial, max_candidates, max_voters);
        let cap = (1..=profile.num_candidates()).product();
        for (slot, model) in Model::ALL.into_iter().enumerate() {
            let fast: BTreeSet<Axis> = all_axes(&profile, model, cap).into_iter().collect();
            let slow: BTreeSet<Axis> = brute_force_axes(&profile, model)
                .expect("oracle profiles stay within the brute-force bound")
                .into_iter()
                .collect();
            if fast != slow {
                per_model[slot] += 1;
                first_mismatch.get_or_insert_with(|| format!("# trial {trial}, model {model}\n{profile}"));
            }
        }
    }
    OracleSummary {
        trials,
        seed,
        max_candidates,
        max_voters,
        mismatches: Model::ALL.iter().zip(per_model).map(|(m, n)| (m.as_str().to_owned(), n)).collect(),
        total_mismatches: per_model.iter().sum(),
        first_mismatch,
    }
}

fn cmd_oracle(args: &OracleArgs, io: &mut Io<'_>) -> CmdResult {
    if args.max_candidates > ORACLE_MAX_CANDIDATES {
        return Err(format!(
            "--max-candidates {} exceeds the brute-force bound of {ORACLE_MAX_CANDIDATES}",
            args.max_candidates
        ));
    }
    if args.max_candidates < 2 {
        return Err("--max-candidates must be at least 2".into());
    }
    if args.max_voters < 1 {
        return Err("--max-voters must be at least 1".into());
    }
    let summary = run_oracle(args.trials, args.max_candidates, args.max_voters, args.seed);
    if args.json {
        emit_json(io, &summary)?;
    } else {
        let mut s = format!(
            "trials: {}\nseed: {}\nmax_candidates: {}\nmax_voters: {}\n",
            summary.trials, summary.seed, summary.max_candidates, summary.max_voters
        );
        for (model, n) in &summary.mismatches {
            s += &format!("{model}: {n} mismatches\n");
        }
        if let Some(text) = &summary.first_mismatch {
            s += "first mismatch:\n";
            s += text;
        }
        s += &format!("{} mismatches\n", summary.total_mismatches);
        emit(io, &s)?;
    }
    Ok(if summary.total_mismatches == 0 { EXIT_OK } else { EXIT_INCONSISTENT })
}
