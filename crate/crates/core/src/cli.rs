//! Command-line front end: parses arguments, calls into the library and
//! prints one JSON report per run on stdout (summary lines go to stderr).
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 any
//! other error.

use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::attacks::{
    generalized_attack, joux_attack, trial_setup, verify_multicollision, AttackReport, MulticollisionSet,
    DEFAULT_A_TILDE, DEFAULT_VERIFY_CAP,
};
use crate::classics::{find_arithmetic_cadence, find_n_division};
use crate::error::{Error, Result};
use crate::hashsim::{birthday_search, derive_seed, CompressionOracle, HashValue, Schedule};
use crate::nesting::{find_attack_structure, verify_attack_structure, AttackCertificate};
use crate::regularity::{
    compute_n, find_structure, two_bounded_witness, verify_structure, SearchMode, StructureCertificate,
    GREEDY_DEFAULT_BUDGET,
};
use crate::words::{read_words, write_words, Word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

/// Report schema version.
pub const REPORT_VERSION: u32 = 1;
pub const SEED_ENV: &str = "QBOUNDED_SEED";

#[derive(Debug, Parser)]
#[command(name = "qbounded", version, about = "Regularities in q-bounded words and multicollision attacks")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Arithmetic cadences and n-divisions.
    #[command(subcommand)]
    Classics(ClassicsCmd),
    /// Permutation-structure certificates and N(m, q).
    #[command(subcommand)]
    Regularity(RegularityCmd),
    /// Attack-structure certificates.
    #[command(subcommand)]
    Nesting(NestingCmd),
    /// Simulated compression function experiments.
    #[command(subcommand)]
    Hashsim(HashsimCmd),
    /// Multicollision attacks.
    #[command(subcommand)]
    Attack(AttackCmd),
    /// Independent checks of saved certificates and collisions.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Debug, Subcommand)]
pub enum ClassicsCmd {
    Cadence(CadenceArgs),
    Ndiv(NdivArgs),
}

#[derive(Debug, Subcommand)]
pub enum RegularityCmd {
    Find(FindArgs),
    Witness(WitnessArgs),
    ComputeN(ComputeNArgs),
}

#[derive(Debug, Subcommand)]
pub enum NestingCmd {
    AttackStructure(AttackStructureArgs),
}

#[derive(Debug, Subcommand)]
pub enum HashsimCmd {
    Birthday(BirthdayArgs),
}

#[derive(Debug, Subcommand)]
pub enum AttackCmd {
    Joux(JouxArgs),
    Gihf(GihfArgs),
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// A structure (`A`) or attack (`B`) certificate against a word file.
    Cert(VerifyCertArgs),
    /// A collision bundle written by `attack --output`.
    Collision(VerifyCollisionArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CadenceArgs {
    /// Word file, `-` for stdin.
    pub input: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub order: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct NdivArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Exhaustive,
    Greedy,
}

#[derive(Debug, Args, Serialize)]
pub struct FindArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub q: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    pub mode: ModeArg,
    /// Node budget for greedy mode.
    #[arg(long, default_value_t = GREEDY_DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct WitnessArgs {
    #[arg(long)]
    pub m: usize,
    /// Also write the witness as a word file.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ComputeNArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub q: usize,
    /// Largest alphabet size enumerated.
    #[arg(long, default_value_t = 6)]
    pub cap: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct AttackStructureArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub q: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct BirthdayArgs {
    #[arg(long, default_value_t = 16)]
    pub n: u32,
    #[arg(long, default_value_t = 64)]
    pub m: u32,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, env = SEED_ENV)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct JouxArgs {
    #[arg(long, default_value_t = 16)]
    pub n: u32,
    #[arg(long, default_value_t = 64)]
    pub m: u32,
    #[arg(long)]
    pub r: usize,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, env = SEED_ENV)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_A_TILDE)]
    pub a_tilde: f64,
    /// Write the first trial's collision bundle here.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleArg {
    Identity,
    Mirror,
    File,
}

#[derive(Debug, Args, Serialize)]
pub struct GihfArgs {
    #[arg(long, default_value_t = 16)]
    pub n: u32,
    #[arg(long, default_value_t = 64)]
    pub m: u32,
    /// Defaults to the schedule's multiplicity bound.
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long)]
    pub r: usize,
    /// Message length in blocks; defaults to the smallest guaranteed one.
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long, value_enum, default_value_t = ScheduleArg::Mirror)]
    pub schedule: ScheduleArg,
    /// Word file for `--schedule file`: line `l` is `alpha_l`.
    #[arg(long, required_if_eq("schedule", "file"))]
    pub schedule_file: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, env = SEED_ENV)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_A_TILDE)]
    pub a_tilde: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyCertArgs {
    /// Word file; the certificate is checked against every word.
    pub input: PathBuf,
    /// JSON certificate: `{"A", "p", "splits"}` or `{"B", "p", "splits", "n", "k"}`.
    #[arg(long)]
    pub cert: PathBuf,
    /// Expected `|A|` for structure certificates (defaults to `|A|`).
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyCollisionArgs {
    pub bundle: PathBuf,
    #[arg(long)]
    pub schedule_file: Option<PathBuf>,
    /// Largest set hashed in full; bigger ones are sampled.
    #[arg(long, default_value_t = DEFAULT_VERIFY_CAP)]
    pub cap: u64,
}

/// Everything needed to re-check a collision without the attacker's state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollisionBundle {
    pub n: u32,
    pub m: u32,
    pub seed: u64,
    pub h0: HashValue,
    pub schedule: ScheduleArg,
    pub collision: MulticollisionSet,
}

struct Outcome {
    result: Value,
    summary: String,
    verified: bool,
}

impl Outcome {
    fn ok(result: Value, summary: String) -> Self {
        Outcome { result, summary, verified: true }
    }
}

/// Runs the CLI on `args`, writing the report to `out` and diagnostics to
/// `err`; returns the process exit code.
pub fn run_with<I, T, O, E>(args: I, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    O: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    let started = Instant::now();
    let (name, config) = describe(&cli.command);
    match dispatch(&cli.command) {
        Ok(outcome) => {
            let report = json!({
                "version": REPORT_VERSION,
                "command": name,
                "config": config,
                "result": outcome.result,
                "timing": { "elapsed_ms": started.elapsed().as_secs_f64() * 1e3 },
            });
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            let _ = writeln!(err, "{}", outcome.summary);
            if outcome.verified {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// [`run_with`] on the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(args, &mut io::stdout().lock(), &mut io::stderr().lock())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::LengthBelowThreshold { .. } | Error::BelowThreshold { .. } => EXIT_USAGE,
        Error::GuaranteeViolated(_) => EXIT_VERIFY_FAILED,
        _ => EXIT_ERROR,
    }
}

fn describe(cmd: &Command) -> (&'static str, Value) {
    fn cfg<T: Serialize>(t: &T) -> Value {
        serde_json::to_value(t).expect("config serializes")
    }
    match cmd {
        Command::Classics(ClassicsCmd::Cadence(a)) => ("classics cadence", cfg(a)),
        Command::Classics(ClassicsCmd::Ndiv(a)) => ("classics ndiv", cfg(a)),
        Command::Regularity(RegularityCmd::Find(a)) => ("regularity find", cfg(a)),
        Command::Regularity(RegularityCmd::Witness(a)) => ("regularity witness", cfg(a)),
        Command::Regularity(RegularityCmd::ComputeN(a)) => ("regularity compute-n", cfg(a)),
        Command::Nesting(NestingCmd::AttackStructure(a)) => ("nesting attack-structure", cfg(a)),
        Command::Hashsim(HashsimCmd::Birthday(a)) => ("hashsim birthday", cfg(a)),
        Command::Attack(AttackCmd::Joux(a)) => ("attack joux", cfg(a)),
        Command::Attack(AttackCmd::Gihf(a)) => ("attack gihf", cfg(a)),
        Command::Verify(VerifyCmd::Cert(a)) => ("verify cert", cfg(a)),
        Command::Verify(VerifyCmd::Collision(a)) => ("verify collision", cfg(a)),
    }
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Classics(ClassicsCmd::Cadence(a)) => cadence(a),
        Command::Classics(ClassicsCmd::Ndiv(a)) => ndiv(a),
        Command::Regularity(RegularityCmd::Find(a)) => find(a),
        Command::Regularity(RegularityCmd::Witness(a)) => witness(a),
        Command::Regularity(RegularityCmd::ComputeN(a)) => {
            let report = compute_n(a.m, a.q, a.cap)?;
            let summary = match report.n {
                Some(n) => format!("N({}, {}) = {n}", a.m, a.q),
                None => format!("N({}, {}) not determined up to alphabet size {}", a.m, a.q, a.cap),
            };
            Ok(Outcome::ok(to_value(&report), summary))
        }
        Command::Nesting(NestingCmd::AttackStructure(a)) => attack_structure(a),
        Command::Hashsim(HashsimCmd::Birthday(a)) => birthday(a),
        Command::Attack(AttackCmd::Joux(a)) => joux(a),
        Command::Attack(AttackCmd::Gihf(a)) => gihf(a),
        Command::Verify(VerifyCmd::Cert(a)) => verify_cert(a),
        Command::Verify(VerifyCmd::Collision(a)) => verify_collision(a),
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("result serializes")
}

fn load_words(path: &Path) -> Result<Vec<Word>> {
    if path == Path::new("-") {
        read_words(io::stdin().lock())
    } else {
        read_words(BufReader::new(File::open(path)?))
    }
}

fn natural(a: u32, b: u32) -> std::cmp::Ordering {
    a.cmp(&b)
}

fn cadence(a: &CadenceArgs) -> Result<Outcome> {
    let words = load_words(&a.input)?;
    let mut found = 0;
    let mut items = Vec::with_capacity(words.len());
    for w in &words {
        let c = find_arithmetic_cadence(w, a.order)?;
        found += usize::from(c.is_some());
        items.push(match c {
            Some(c) => json!({ "found": true, "positions": c.positions, "difference": c.difference }),
            None => json!({ "found": false }),
        });
    }
    Ok(Outcome::ok(json!({ "words": items }), format!("cadence of order {} in {found}/{} words", a.order, words.len())))
}

fn ndiv(a: &NdivArgs) -> Result<Outcome> {
    let words = load_words(&a.input)?;
    let mut found = 0;
    let mut items = Vec::with_capacity(words.len());
    for w in &words {
        let d = find_n_division(w, a.n, natural)?;
        found += usize::from(d.is_some());
        items.push(match d {
            Some(d) => json!({ "found": true, "u": d.u, "factors": d.factors, "v": d.v }),
            None => json!({ "found": false }),
        });
    }
    Ok(Outcome::ok(json!({ "words": items }), format!("{}-division in {found}/{} words", a.n, words.len())))
}

fn find(a: &FindArgs) -> Result<Outcome> {
    let words = load_words(&a.input)?;
    let mode = match a.mode {
        ModeArg::Exhaustive => SearchMode::Exhaustive,
        ModeArg::Greedy => SearchMode::Greedy { budget: a.budget },
    };
    let mut found = 0;
    let mut items = Vec::with_capacity(words.len());
    for w in &words {
        let outcome = find_structure(w, a.m, a.q, mode)?;
        found += usize::from(outcome.certificate.is_some());
        items.push(to_value(&outcome));
    }
    Ok(Outcome::ok(json!({ "words": items }), format!("certificate with |A|={} in {found}/{} words", a.m, words.len())))
}

fn witness(a: &WitnessArgs) -> Result<Outcome> {
    let w = two_bounded_witness(a.m)?;
    if let Some(path) = &a.output {
        write_words(File::create(path)?, std::slice::from_ref(&w))?;
    }
    let summary = format!("witness for m={}: length {}, {} letters", a.m, w.len(), w.alph().len());
    Ok(Outcome::ok(json!({ "word": w, "length": w.len(), "alphabet_size": w.alph().len() }), summary))
}

fn attack_structure(a: &AttackStructureArgs) -> Result<Outcome> {
    let words = load_words(&a.input)?;
    let mut certs = Vec::with_capacity(words.len());
    for w in &words {
        certs.push(find_attack_structure(w, a.n, a.k, a.q)?);
    }
    let summary = format!("attack structure found for {} words", certs.len());
    let result = if certs.len() == 1 { to_value(&certs[0]) } else { json!({ "certificates": certs }) };
    Ok(Outcome::ok(result, summary))
}

fn median(v: &mut [u64]) -> f64 {
    v.sort_unstable();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidArgument("--trials must be at least 1".into()));
    }
    Ok(())
}

fn birthday(a: &BirthdayArgs) -> Result<Outcome> {
    check_trials(a.trials)?;
    let mut trials = Vec::with_capacity(a.trials);
    let mut queries = Vec::with_capacity(a.trials);
    for i in 0..a.trials {
        let seed = derive_seed(a.seed, i as u64);
        let (mut o, h0, mut sampler) = trial_setup(a.n, a.m, seed)?;
        let found = birthday_search(&mut o, h0, a.k, &mut sampler)?;
        queries.push(found.queries);
        trials.push(
            json!({ "seed": seed, "h0": h0, "queries": found.queries, "blocks": found.blocks, "value": found.value }),
        );
    }
    let med = median(&mut queries);
    let summary = format!("{}-collision at n={}: median {med} queries over {} trials", a.k, a.n, a.trials);
    Ok(Outcome::ok(json!({ "median_queries": med, "trials": trials }), summary))
}

fn write_bundle(path: &Path, bundle: &CollisionBundle) -> Result<()> {
    serde_json::to_writer_pretty(File::create(path)?, bundle)?;
    Ok(())
}

fn trials_result(reports: &[AttackReport]) -> (Value, bool, f64) {
    let mean = reports.iter().map(|r| r.attack_queries as f64).sum::<f64>() / reports.len() as f64;
    let all_ok = reports.iter().all(|r| r.verify_ok);
    let value = json!({
        "mean_attack_queries": mean,
        "all_verified": all_ok,
        "trials": reports,
    });
    (value, all_ok, mean)
}

fn joux(a: &JouxArgs) -> Result<Outcome> {
    check_trials(a.trials)?;
    let mut reports = Vec::with_capacity(a.trials);
    for i in 0..a.trials {
        let seed = derive_seed(a.seed, i as u64);
        let (mut o, h0, mut sampler) = trial_setup(a.n, a.m, seed)?;
        let (mc, report) = joux_attack(&mut o, h0, a.r, &mut sampler, a.a_tilde)?;
        if i == 0 {
            if let Some(path) = &a.output {
                let bundle =
                    CollisionBundle { n: a.n, m: a.m, seed, h0, schedule: ScheduleArg::Identity, collision: mc };
                write_bundle(path, &bundle)?;
            }
        }
        reports.push(report);
    }
    let (result, ok, mean) = trials_result(&reports);
    let summary =
        format!("joux 2^{}-collision at n={}: {} trials, mean {mean:.1} queries, verified={ok}", a.r, a.n, a.trials);
    Ok(Outcome { result, summary, verified: ok })
}

fn load_schedule(kind: ScheduleArg, file: Option<&Path>) -> Result<Schedule> {
    match kind {
        ScheduleArg::Identity => Ok(Schedule::identity()),
        ScheduleArg::Mirror => Ok(Schedule::mirror()),
        ScheduleArg::File => {
            let path = file.ok_or_else(|| Error::InvalidArgument("--schedule file needs --schedule-file".into()))?;
            Schedule::custom(load_words(path)?)
        }
    }
}

fn gihf(a: &GihfArgs) -> Result<Outcome> {
    check_trials(a.trials)?;
    let sched = load_schedule(a.schedule, a.schedule_file.as_deref())?;
    let q = a.q.unwrap_or_else(|| sched.q_bound());
    let mut reports = Vec::with_capacity(a.trials);
    for i in 0..a.trials {
        let seed = derive_seed(a.seed, i as u64);
        let (mut o, h0, mut sampler) = trial_setup(a.n, a.m, seed)?;
        let (mc, report) = generalized_attack(&mut o, &sched, q, a.n, a.r, h0, &mut sampler, a.l, a.a_tilde)?;
        if i == 0 {
            if let Some(path) = &a.output {
                let bundle = CollisionBundle { n: a.n, m: a.m, seed, h0, schedule: a.schedule, collision: mc };
                write_bundle(path, &bundle)?;
            }
        }
        reports.push(report);
    }
    let (result, ok, mean) = trials_result(&reports);
    let bound = reports[0].bound;
    let summary = format!(
        "{} schedule 2^{}-collision at n={}, l={}: mean {mean:.1} queries (bound {bound}), verified={ok}",
        sched.name(),
        a.r,
        a.n,
        reports[0].params.l
    );
    Ok(Outcome { result, summary, verified: ok })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum AnyCertificate {
    Attack(AttackCertificate),
    Structure(StructureCertificate),
}

fn verify_cert(a: &VerifyCertArgs) -> Result<Outcome> {
    let words = load_words(&a.input)?;
    let cert: AnyCertificate = serde_json::from_reader(BufReader::new(File::open(&a.cert)?))?;
    let (kind, verdicts): (&str, Vec<bool>) = match &cert {
        AnyCertificate::Attack(c) => {
            ("attack", words.iter().map(|w| verify_attack_structure(w, c.n, c.k, c)).collect())
        }
        AnyCertificate::Structure(c) => {
            let m = a.m.unwrap_or(c.alphabet.len());
            ("structure", words.iter().map(|w| verify_structure(w, c, m)).collect())
        }
    };
    let ok = !verdicts.is_empty() && verdicts.iter().all(|&v| v);
    let summary =
        format!("{kind} certificate valid on {}/{} words", verdicts.iter().filter(|&&v| v).count(), verdicts.len());
    Ok(Outcome { result: json!({ "kind": kind, "valid": ok, "per_word": verdicts }), summary, verified: ok })
}

fn verify_collision(a: &VerifyCollisionArgs) -> Result<Outcome> {
    let bundle: CollisionBundle = serde_json::from_reader(BufReader::new(File::open(&a.bundle)?))?;
    let sched = load_schedule(bundle.schedule, a.schedule_file.as_deref())?;
    let mut oracle = CompressionOracle::new(bundle.n, bundle.m, bundle.seed)?;
    let v = verify_multicollision(&mut oracle, &sched, bundle.h0, &bundle.collision, a.cap)?;
    let summary = format!(
        "2^{}-collision: valid={} ({} messages{})",
        bundle.collision.r,
        v.ok,
        v.messages_checked,
        if v.sampled { ", sampled" } else { "" }
    );
    let ok = v.ok;
    Ok(Outcome { result: to_value(&v), summary, verified: ok })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("qbounded").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn compute_n_report() {
        let (code, out, _) = run_capture(&["regularity", "compute-n", "--m", "2", "--q", "2", "--cap", "4"]);
        assert_eq!(code, EXIT_OK);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["N"], 3);
        assert_eq!(v["result"]["exhaustive"], true);
        assert_eq!(v["command"], "regularity compute-n");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&["attack", "joux"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["nonsense"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["regularity", "compute-n", "--m", "0", "--q", "2"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["attack", "gihf", "--r", "2", "--seed", "1", "--schedule", "file"]).0, EXIT_USAGE);
    }

    #[test]
    fn joux_writes_verifiable_bundle() {
        let dir = std::env::temp_dir().join(format!("qbounded-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let bundle = dir.join("joux.json");
        let b = bundle.to_str().unwrap();
        let (code, out, _) = run_capture(&["attack", "joux", "--n", "12", "--r", "3", "--seed", "9", "--output", b]);
        assert_eq!(code, EXIT_OK);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["all_verified"], true);
        let (code, out, _) = run_capture(&["verify", "collision", b]);
        assert_eq!(code, EXIT_OK, "{out}");

        let mut tampered: CollisionBundle = serde_json::from_str(&std::fs::read_to_string(&bundle).unwrap()).unwrap();
        tampered.h0 = HashValue(tampered.h0.0 ^ 1);
        write_bundle(&bundle, &tampered).unwrap();
        assert_eq!(run_capture(&["verify", "collision", b]).0, EXIT_VERIFY_FAILED);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
