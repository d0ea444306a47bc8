//! Command-line front end.
//!
//! Every subcommand validates its parameters, runs on a rayon pool of
//! `--workers` threads and writes its outputs. With `--out DIR` (or
//! `PSLAB_OUT`) tables go to `DIR/<command>.csv`, summaries to
//! `DIR/<command>.json` and the summary is echoed on stdout. Without an
//! output directory the primary output goes to stdout.
//!
//! Exit codes: 0 success, 2 invalid input, 3 precision exhausted, 1 other.
//! Errors are reported on stderr as one JSON object.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Rational;
use serde_json::{json, Value};

use crate::arith::{parse_rational, parse_rational_list, Exponent, PrecisionPolicy};
use crate::cf::{cf_expand_checked, CfTarget};
use crate::equidist::{equid_row, equid_sample, svg_histogram, third_derivative_band, write_equid_csv, SampleParams};
use crate::error::{Error, Result};
use crate::linear::{check_equivalence, count_fit, solve_linear, solve_xyz, write_solutions_csv, LinearEq};
use crate::measure::{
    bc_statistics, bound_check_triples, dichotomy_scan, set_e, set_f, set_g, set_h_sum, IntervalSet,
    MetricalParams, ThetaRange, TripleRow,
};
use crate::primes::is_prime;
use crate::ps::{find_fs3, is_member, ps_window};
use crate::system::{solve_system_one, solve_system_two, verify_solution, DiophSystem, SolverOptions, SystemReport, Twist};

pub const OUT_ENV: &str = "PSLAB_OUT";

#[derive(Parser, Debug)]
#[command(name = "pslab", version, about = "Certified experiments with Piatetski-Shapiro sequences")]
struct Cli {
    /// Output directory (default: $PSLAB_OUT, else stdout only)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses all cores
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// JSON file whose keys override command-line flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 128)]
    start_bits: u32,
    #[arg(long, global = true, default_value_t = 4096)]
    max_bits: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Members of PS(alpha) up to a bound, as `n,m` rows
    Gen {
        #[arg(long)]
        alpha: String,
        #[arg(long, value_parser = parse_count)]
        limit: u64,
    },
    /// Whether m lies in PS(alpha)
    Member {
        #[arg(long)]
        alpha: String,
        #[arg(long, value_parser = parse_count)]
        m: u64,
    },
    /// Solutions of y = ax + b with x, y in PS(alpha)
    SolveLinear {
        #[command(flatten)]
        eq: EqArgs,
        #[arg(long, value_parser = parse_count)]
        limit: u64,
        /// Also compare against direct membership tests
        #[arg(long)]
        check_equivalence: bool,
    },
    /// Log-log slope of the solution count
    CountFit {
        #[command(flatten)]
        eq: EqArgs,
        #[arg(long, value_delimiter = ',', value_parser = parse_count, default_value = "1000,10000,100000,1000000")]
        checkpoints: Vec<u64>,
    },
    /// Solutions of a twisted approximation system
    SolveSystem {
        #[arg(long, value_enum)]
        system: SystemKind,
        #[command(flatten)]
        sys: SystemArgs,
        /// Exponent for the first system
        #[arg(long)]
        alpha: Option<String>,
        /// Rational theta for the second system
        #[arg(long)]
        theta: Option<String>,
        #[arg(long, value_parser = parse_count)]
        budget: u64,
        #[arg(long, value_parser = parse_count, default_value = "1000000")]
        scan_cutoff: u64,
    },
    /// Certified continued fraction expansion
    Cf {
        #[arg(long)]
        target: String,
        #[arg(long, value_parser = parse_count, default_value = "20")]
        terms: u64,
    },
    /// Discrepancy and Weyl sums of {gamma n^phi(m/n)}
    Equidist {
        #[arg(long)]
        a: String,
        #[arg(long, default_value = "1")]
        gamma: String,
        #[arg(long)]
        eta1: String,
        #[arg(long)]
        eta2: String,
        #[arg(long, value_delimiter = ',', value_parser = parse_count, default_value = "1000,10000,100000")]
        n: Vec<u64>,
        /// Histogram bins for the SVG of the largest n
        #[arg(long, default_value_t = 20)]
        bins: usize,
        /// Grid of n for the third-derivative band; empty skips it
        #[arg(long, value_delimiter = ',', value_parser = parse_count)]
        band_n: Vec<u64>,
    },
    /// Measure-theoretic experiments
    Measure {
        #[arg(long, value_enum)]
        kind: MeasureKind,
        #[command(flatten)]
        sys: OptSystemArgs,
        #[arg(long)]
        theta1: Option<String>,
        #[arg(long)]
        theta2: Option<String>,
        #[arg(long)]
        theta3: Option<String>,
        #[arg(long)]
        eta: Option<String>,
        /// Index for `sets`
        #[arg(long, value_parser = parse_count)]
        n: Option<u64>,
        /// Prime limit for `bc`, sum limit for `hsum`
        #[arg(long, value_parser = parse_count)]
        limit: Option<u64>,
        #[arg(long, default_value_t = 5e-5)]
        tolerance: f64,
        #[arg(long, value_delimiter = ',', value_parser = parse_count)]
        n_list: Vec<u64>,
        #[arg(long, value_delimiter = ',', value_parser = parse_count)]
        q_list: Vec<u64>,
        #[arg(long, value_delimiter = ',', value_parser = parse_count)]
        p_list: Vec<u64>,
        #[arg(long)]
        l_list: Option<String>,
        #[arg(long)]
        eta1: Option<String>,
        #[arg(long)]
        eta2: Option<String>,
    },
    /// Second-system hit counts on both sides of sqrt(a)
    Dichotomy {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        thetas: String,
        #[arg(long, value_parser = parse_count)]
        budget: u64,
        #[arg(long, value_parser = parse_count, default_value = "1000000")]
        scan_cutoff: u64,
    },
    /// Search for FS(x, x, z) = {x, 2x, z, z+x, z+2x} inside PS(alpha)
    Fs3 {
        #[arg(long)]
        alpha: String,
        #[arg(long, value_parser = parse_count)]
        bound: u64,
    },
    /// Triples x, y, z in PS(alpha) with x + y = z
    Xyz {
        #[arg(long)]
        alpha: String,
        #[arg(long, value_parser = parse_count)]
        limit: u64,
    },
}

#[derive(Args, Debug)]
struct EqArgs {
    #[arg(long)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    b: String,
    #[arg(long)]
    alpha: String,
}

#[derive(Args, Debug)]
struct SystemArgs {
    #[arg(long)]
    a: String,
    #[arg(long, default_value = "1")]
    c: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    gamma: String,
    #[arg(long, default_value = "0")]
    i_lo: String,
    #[arg(long, default_value = "1")]
    i_hi: String,
}

impl SystemArgs {
    fn build(&self) -> Result<DiophSystem> {
        DiophSystem::new(
            parse_rational(&self.a)?,
            parse_rational(&self.c)?,
            parse_rational(&self.gamma)?,
            parse_rational(&self.i_lo)?,
            parse_rational(&self.i_hi)?,
        )
    }
}

#[derive(Args, Debug)]
struct OptSystemArgs {
    #[arg(long)]
    a: Option<String>,
    #[arg(long, default_value = "1")]
    c: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    gamma: String,
    #[arg(long, default_value = "0")]
    i_lo: String,
    #[arg(long, default_value = "1")]
    i_hi: String,
}

impl OptSystemArgs {
    fn build(&self) -> Result<DiophSystem> {
        SystemArgs {
            a: required(&self.a, "a")?.to_string(),
            c: self.c.clone(),
            gamma: self.gamma.clone(),
            i_lo: self.i_lo.clone(),
            i_hi: self.i_hi.clone(),
        }
        .build()
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SystemKind {
    One,
    Two,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MeasureKind {
    Sets,
    Bc,
    Triples,
    Hsum,
}

/// Counts written as `1000000`, `1e6` or `10^6`.
fn parse_count(s: &str) -> std::result::Result<u64, String> {
    let t = s.trim().replace('_', "");
    let bad = || format!("invalid count {s:?}");
    if let Some((m, e)) = t.split_once(['e', 'E']) {
        let m: u64 = m.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        return 10u64.checked_pow(e).and_then(|p| p.checked_mul(m)).ok_or_else(bad);
    }
    if let Some((b, e)) = t.split_once('^') {
        let b: u64 = b.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        return b.checked_pow(e).ok_or_else(bad);
    }
    t.parse().map_err(|_| bad())
}

fn required<'a, T>(v: &'a Option<T>, name: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| Error::Domain(format!("missing --{name}")))
}

fn rational(v: &Option<String>, name: &str) -> Result<Rational> {
    parse_rational(required(v, name)?)
}

/// Where outputs go.
struct Sink<'a> {
    dir: Option<PathBuf>,
    stdout: &'a mut Vec<u8>,
}

impl Sink<'_> {
    fn file(&self, name: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(name))
    }

    /// Writes a table to `<name>.csv`, or to stdout without a directory.
    fn table(&mut self, name: &str, f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
        let mut buf = Vec::new();
        f(&mut buf)?;
        match self.file(&format!("{name}.csv")) {
            Some(p) => fs::write(p, buf)?,
            None => self.stdout.write_all(&buf)?,
        }
        Ok(())
    }

    /// Writes a summary to `<name>.json` and echoes it. Without a directory
    /// it is printed only when `primary` is set.
    fn summary(&mut self, name: &str, v: &Value, primary: bool) -> Result<()> {
        let text = serde_json::to_string_pretty(v)? + "\n";
        if let Some(p) = self.file(&format!("{name}.json")) {
            fs::write(p, &text)?;
            self.stdout.write_all(text.as_bytes())?;
        } else if primary {
            self.stdout.write_all(text.as_bytes())?;
        }
        Ok(())
    }

    fn extra(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        if let Some(p) = self.file(name) {
            fs::write(p, bytes)?;
        }
        Ok(())
    }
}

/// Replaces flags in `args` with the entries of the JSON object named by
/// `--config`. The key `command` supplies a missing subcommand.
fn merge_config(args: Vec<String>) -> Result<Vec<String>> {
    let mut out = Vec::with_capacity(args.len());
    let mut path = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = it.next();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            out.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(out);
    };
    let text = fs::read_to_string(&path)?;
    let cfg: Value = serde_json::from_str(&text)?;
    let Value::Object(map) = cfg else {
        return Err(Error::Parse(format!("config {path} must be a JSON object")));
    };
    if let Some(cmd) = map.get("command") {
        let cmd = cmd.as_str().ok_or_else(|| Error::Parse("command must be a string".into()))?;
        if !out.iter().skip(1).any(|a| a == cmd) {
            // subcommand flags only parse after the subcommand
            out.insert(1.min(out.len()), cmd.to_string());
        }
    }
    for (key, value) in map {
        if key == "command" {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        out = remove_flag(out, &flag);
        match value {
            Value::Bool(true) => out.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let parts: Vec<String> = items.iter().map(scalar).collect::<Result<_>>()?;
                out.push(flag);
                out.push(parts.join(","));
            }
            other => {
                out.push(flag);
                out.push(scalar(&other)?);
            }
        }
    }
    Ok(out)
}

fn scalar(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        _ => Err(Error::Parse(format!("unsupported config value {v}"))),
    }
}

fn remove_flag(args: Vec<String>, flag: &str) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut it = args.into_iter().peekable();
    let prefix = format!("{flag}=");
    while let Some(a) = it.next() {
        if a == flag {
            if it.peek().is_some_and(|n| !n.starts_with("--")) {
                it.next();
            }
        } else if !a.starts_with(&prefix) {
            out.push(a);
        }
    }
    out
}

/// Runs the command line with process stdout and stderr.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let out = std::io::stdout();
    let err = std::io::stderr();
    run_with(argv, &mut out.lock(), &mut err.lock())
}

pub fn run_with<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = argv.into_iter().map(Into::into).collect();
    let report = |stderr: &mut dyn Write, kind: &str, msg: String, code: i32| {
        let v = json!({ "error": kind, "message": msg, "exit_code": code });
        let _ = writeln!(stderr, "{v}");
        code
    };
    let args = match merge_config(args) {
        Ok(a) => a,
        Err(e) => return report(stderr, e.kind(), e.to_string(), exit_code(&e)),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            return report(stderr, "usage", e.to_string().trim().to_string(), 2);
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        // reader went away, e.g. `| head`
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => report(stderr, e.kind(), e.to_string(), exit_code(&e)),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PrecisionExhausted { .. } => 3,
        e if e.is_validation() => 2,
        _ => 1,
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    let policy = PrecisionPolicy::new(cli.start_bits, cli.max_bits, 2, 1)?;
    let dir = cli.out.clone().or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from));
    if let Some(d) = &dir {
        fs::create_dir_all(d)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.workers)
        .build()
        .map_err(|e| Error::Domain(format!("cannot start {} workers: {e}", cli.workers)))?;
    let mut buf = Vec::new();
    let res = pool.install(|| {
        let mut sink = Sink { dir, stdout: &mut buf };
        dispatch(cli.command, &policy, &mut sink)
    });
    stdout.write_all(&buf)?;
    res
}

fn dispatch(cmd: Command, policy: &PrecisionPolicy, sink: &mut Sink) -> Result<()> {
    match cmd {
        Command::Gen { alpha, limit } => {
            let alpha = Exponent::parse(&alpha)?;
            let w = ps_window(&alpha, limit)?;
            sink.table("gen", |b| w.write_csv(b))?;
            sink.summary("gen", &json!({ "alpha": alpha.to_string(), "limit": limit, "members": w.len() }), false)
        }
        Command::Member { alpha, m } => {
            let alpha = Exponent::parse(&alpha)?;
            let hit = is_member(m, &alpha)?;
            writeln!(sink.stdout, "{hit}")?;
            Ok(())
        }
        Command::SolveLinear { eq, limit, check_equivalence: check } => {
            let alpha = Exponent::parse(&eq.alpha)?;
            let e = LinearEq::parse(&eq.a, &eq.b)?;
            let sols = solve_linear(&e, &alpha, limit)?;
            sink.table("solve-linear", |b| write_solutions_csv(&sols, b))?;
            let mut summary = json!({
                "a": e.a().to_string(),
                "b": e.b().to_string(),
                "alpha": alpha.to_string(),
                "limit": limit,
                "residue": e.residue(),
                "solutions": sols.len(),
            });
            if check {
                let rep = check_equivalence(&e, &alpha, limit)?;
                summary["equivalence"] = serde_json::to_value(&rep)?;
            }
            sink.summary("solve-linear", &summary, false)
        }
        Command::CountFit { eq, checkpoints } => {
            let alpha = Exponent::parse(&eq.alpha)?;
            let e = LinearEq::parse(&eq.a, &eq.b)?;
            let fit = count_fit(&e, &alpha, &checkpoints)?;
            sink.summary("count-fit", &serde_json::to_value(&fit)?, true)
        }
        Command::SolveSystem { system, sys, alpha, theta, budget, scan_cutoff } => {
            let s = sys.build()?;
            let opts = SolverOptions { scan_cutoff, ..SolverOptions::default() };
            let (twist, rep) = match system {
                SystemKind::One => {
                    let alpha = Exponent::parse(required(&alpha, "alpha")?)?;
                    let rep = solve_system_one(&s, &alpha, budget, &opts, policy)?;
                    (Twist::Alpha(alpha), rep)
                }
                SystemKind::Two => {
                    let theta = rational(&theta, "theta")?;
                    let rep = solve_system_two(&s, &theta, budget, &opts, policy)?;
                    (Twist::Theta(theta), rep)
                }
            };
            let rejected = reverify(&s, &twist, &rep, policy)?;
            if let Some(n) = rejected.first() {
                return Err(Error::Verification(format!("n = {n} failed independent re-verification")));
            }
            sink.table("solve-system", |b| rep.write_csv(b))?;
            let summary = json!({
                "label": rep.label(),
                "solutions": rep.ns(),
                "scan_limit": rep.scan_limit,
                "candidates_tested": rep.candidates_tested,
                "candidates_accepted": rep.candidates_accepted,
                "complete": rep.complete,
                "skipped": serde_json::to_value(&rep.skipped)?,
                "convergent_twists": rep.convergent_twists,
                "reverified": rep.solutions.len(),
            });
            sink.summary("solve-system", &summary, false)
        }
        Command::Cf { target, terms } => {
            let t = CfTarget::parse(&target)?;
            let (cf, law) = cf_expand_checked(&t, terms as usize, policy)?;
            sink.table("cf", |b| {
                let mut w = csv::Writer::from_writer(b);
                w.write_record(["k", "a", "p", "q"])?;
                for (k, (a, (p, q))) in cf.quotients.iter().zip(&cf.convergents).enumerate() {
                    w.write_record([k.to_string(), a.to_string(), p.to_string(), q.to_string()])?;
                }
                w.flush()?;
                Ok(())
            })?;
            let summary = json!({
                "target": t.to_string(),
                "terms": cf.quotients.len(),
                "exact_rational": cf.exact_rational,
                "bits": cf.bits,
                "approximation_law": law,
                "determinant_identity": cf.determinant_identity_holds(),
            });
            sink.summary("cf", &summary, false)
        }
        Command::Equidist { a, gamma, eta1, eta2, n, bins, band_n } => {
            let params = SampleParams::new(
                parse_rational(&a)?,
                parse_rational(&gamma)?,
                parse_rational(&eta1)?,
                parse_rational(&eta2)?,
            )?;
            if n.is_empty() {
                return Err(Error::EmptyInput);
            }
            let mut rows = Vec::with_capacity(n.len());
            let mut last = None;
            for &k in &n {
                let s = equid_sample(&params, k, policy)?;
                rows.push(equid_row(&s)?);
                last = Some(s);
            }
            sink.table("equidist", |b| write_equid_csv(&rows, b))?;
            if let Some(s) = last {
                let svg = svg_histogram(&s.points, bins, &format!("n = {}", s.n));
                sink.extra("equidist.svg", svg.as_bytes())?;
            }
            let mut summary = json!({ "rows": serde_json::to_value(&rows)? });
            if !band_n.is_empty() {
                let t: Vec<Rational> = (1..=100).map(|i| Rational::from((2 * i - 1, 200))).collect();
                let band = third_derivative_band(&params, &band_n, &t, policy.start_bits)?;
                summary["band"] = serde_json::to_value(&band)?;
            }
            sink.summary("equidist", &summary, false)
        }
        Command::Measure {
            kind,
            sys,
            theta1,
            theta2,
            theta3,
            eta,
            n,
            limit,
            tolerance,
            n_list,
            q_list,
            p_list,
            l_list,
            eta1,
            eta2,
        } => match kind {
            MeasureKind::Sets => {
                let s = sys.build()?;
                let range = ThetaRange::new(rational(&theta1, "theta1")?, rational(&theta2, "theta2")?)?;
                let n = *required(&n, "n")?;
                let e = set_e(n, &range)?;
                let f = set_f(n, &s, &range)?;
                let g = set_g(n, &s, &range)?;
                sink.table("measure-sets", |b| {
                    let mut w = csv::Writer::from_writer(b);
                    w.write_record(["set", "lo", "hi", "lo_closed", "hi_closed"])?;
                    for (name, set) in [("E", &e), ("F", &f), ("G", &g)] {
                        write_components(&mut w, name, set)?;
                    }
                    w.flush()?;
                    Ok(())
                })?;
                let summary = json!({
                    "n": n,
                    "E": serde_json::to_value(e.summary())?,
                    "F": serde_json::to_value(f.summary())?,
                    "G": serde_json::to_value(g.summary())?,
                });
                sink.summary("measure-sets", &summary, false)
            }
            MeasureKind::Bc => {
                let s = sys.build()?;
                let (t1, t2) = (rational(&theta1, "theta1")?, rational(&theta2, "theta2")?);
                let eta = match &eta {
                    Some(v) => parse_rational(v)?,
                    None => default_eta(&t1, &t2),
                };
                let params = MetricalParams::new(s, t1, t2, eta)?;
                let rep = bc_statistics(&params, *required(&limit, "limit")?)?;
                sink.table("measure-bc", |b| {
                    let mut w = csv::Writer::from_writer(b);
                    w.write_record(["p", "measure", "normalized"])?;
                    for ((p, m), r) in rep.primes.iter().zip(&rep.measures).zip(&rep.normalized) {
                        w.write_record([p.to_string(), format!("{m:.17e}"), format!("{r:.17e}")])?;
                    }
                    w.flush()?;
                    Ok(())
                })?;
                let mut summary = serde_json::to_value(&rep)?;
                if let Value::Object(m) = &mut summary {
                    m.remove("measures");
                    m.remove("normalized");
                    m.remove("primes");
                }
                sink.summary("measure-bc", &summary, false)
            }
            MeasureKind::Triples => {
                let (e1, e2) = (rational(&eta1, "eta1")?, rational(&eta2, "eta2")?);
                let ls = parse_rational_list(required(&l_list, "l-list")?)?;
                if let Some(p) = p_list.iter().find(|&&p| !is_prime(p)) {
                    return Err(Error::Domain(format!("p = {p} is not prime")));
                }
                let mut rows = Vec::new();
                for &nn in &n_list {
                    for &q in &q_list {
                        for &p in p_list.iter().filter(|&&p| p <= q) {
                            for l in &ls {
                                rows.push(TripleRow { n: nn, q, p, l: l.clone() });
                            }
                        }
                    }
                }
                let rep = bound_check_triples(&rows, &e1, &e2)?;
                sink.table("measure-triples", |b| {
                    let mut w = csv::Writer::from_writer(b);
                    w.write_record(["N", "Q", "p", "L", "count", "primes", "main_term"])?;
                    for o in &rep.rows {
                        w.write_record([
                            o.n.to_string(),
                            o.q.to_string(),
                            o.p.to_string(),
                            o.l.to_string(),
                            o.count.to_string(),
                            o.prime_count.to_string(),
                            format!("{:.17e}", o.main_term),
                        ])?;
                    }
                    w.flush()?;
                    Ok(())
                })?;
                let summary = json!({
                    "rows": rep.rows.len(),
                    "k_unit": rep.k_unit,
                    "c_fit": rep.c_fit,
                    "k_fit": rep.k_fit,
                    "violations": rep.violations,
                });
                sink.summary("measure-triples", &summary, false)
            }
            MeasureKind::Hsum => {
                let a = parse_rational(required(&sys.a, "a")?)?;
                let c = parse_rational(&sys.c)?;
                let t3 = rational(&theta3, "theta3")?;
                let rep = set_h_sum(&a, &c, &t3, *required(&limit, "limit")?, tolerance)?;
                sink.table("measure-hsum", |b| rep.write_csv(b))?;
                let mut summary = serde_json::to_value(&rep)?;
                if let Value::Object(m) = &mut summary {
                    m.remove("rows");
                }
                sink.summary("measure-hsum", &summary, false)
            }
        },
        Command::Dichotomy { sys, thetas, budget, scan_cutoff } => {
            let s = sys.build()?;
            let grid = parse_rational_list(&thetas)?;
            let opts = SolverOptions { scan_cutoff, ..SolverOptions::default() };
            let rep = dichotomy_scan(&s, &grid, budget, &opts, policy)?;
            sink.table("dichotomy", |b| rep.write_csv(b))?;
            let summary = json!({
                "budget": rep.budget,
                "below": serde_json::to_value(&rep.below)?,
                "above": serde_json::to_value(&rep.above)?,
                "below_at_least_above": rep.below.total >= rep.above.total,
            });
            sink.summary("dichotomy", &summary, false)
        }
        Command::Fs3 { alpha, bound } => {
            let alpha = Exponent::parse(&alpha)?;
            let w = find_fs3(&alpha, bound)?;
            let verified = match &w {
                Some(w) => w.verify(&alpha)?,
                None => false,
            };
            let summary = json!({
                "alpha": alpha.to_string(),
                "bound": bound,
                "witness": w.as_ref().map(|w| json!({ "x": w.x, "z": w.z, "values": w.values() })),
                "verified": verified,
            });
            sink.summary("fs3", &summary, true)
        }
        Command::Xyz { alpha, limit } => {
            let alpha = Exponent::parse(&alpha)?;
            let triples = solve_xyz(&alpha, limit)?;
            sink.table("xyz", |b| {
                let mut w = csv::Writer::from_writer(b);
                w.write_record(["x", "y", "z"])?;
                for t in &triples {
                    w.write_record([t.x.to_string(), t.y.to_string(), t.z.to_string()])?;
                }
                w.flush()?;
                Ok(())
            })?;
            sink.summary("xyz", &json!({ "alpha": alpha.to_string(), "limit": limit, "triples": triples.len() }), false)
        }
    }
}

fn reverify(sys: &DiophSystem, twist: &Twist, rep: &SystemReport, policy: &PrecisionPolicy) -> Result<Vec<u64>> {
    use rayon::prelude::*;
    let checks: Vec<(u64, bool)> = rep
        .solutions
        .par_iter()
        .map(|s| Ok((s.n, verify_solution(sys, twist, s.n, policy)?.accepted())))
        .collect::<Result<_>>()?;
    Ok(checks.into_iter().filter(|(_, ok)| !ok).map(|(n, _)| n).collect())
}

fn default_eta(t1: &Rational, t2: &Rational) -> Rational {
    let third = Rational::from(t2 - t1) / 3u32;
    let room = Rational::from(1 - t2);
    t1.clone().min(room).min(third) / 2u32
}

fn write_components<W: Write>(w: &mut csv::Writer<W>, name: &str, set: &IntervalSet) -> Result<()> {
    for c in set.components() {
        w.write_record([
            name.to_string(),
            format!("{:.17e}", c.lo.to_f64()),
            format!("{:.17e}", c.hi.to_f64()),
            c.lo_closed.to_string(),
            c.hi_closed.to_string(),
        ])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("pslab").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn gen_prints_csv() {
        let (code, out, _) = run_capture(&["gen", "--alpha", "3/2", "--limit", "31"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "n,m");
        assert_eq!(lines.len(), 11);
        assert_eq!(lines[10], "10,31");
    }

    #[test]
    fn member_prints_boolean() {
        let (code, out, _) = run_capture(&["member", "--alpha", "3/2", "--m", "3"]);
        assert_eq!((code, out.trim()), (0, "false"));
    }

    #[test]
    fn exit_codes() {
        let (code, _, err) = run_capture(&["gen", "--alpha", "2", "--limit", "10"]);
        assert_eq!(code, 2);
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["exit_code"], 2);
        assert_eq!(run_capture(&["gen", "--alpha", "1.5", "--limit", "10"]).0, 2);
        assert_eq!(run_capture(&["bogus"]).0, 2);
        let (code, _, err) = run_capture(&["cf", "--target", "sqrt3", "--terms", "300", "--max-bits", "256"]);
        assert_eq!(code, 3, "{err}");
    }

    #[test]
    fn counts_accept_powers() {
        assert_eq!(parse_count("1e6"), Ok(1_000_000));
        assert_eq!(parse_count("10^4"), Ok(10_000));
        assert_eq!(parse_count("1_000"), Ok(1000));
        assert!(parse_count("1.5").is_err());
    }

    #[test]
    fn config_overrides_flags() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.json");
        fs::write(&cfg, r#"{"command": "gen", "alpha": "3/2", "limit": 31}"#).unwrap();
        let (code, out, err) = run_capture(&["--limit", "1000", "--config", cfg.to_str().unwrap()]);
        assert_eq!(code, 0, "{err}");
        assert_eq!(out.lines().count(), 11);
    }

    #[test]
    fn writes_into_out_dir() {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path().to_str().unwrap();
        let (code, out, _) = run_capture(&["cf", "--target", "golden", "--terms", "10", "--out", d]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["determinant_identity"], true);
        let csv = fs::read_to_string(dir.path().join("cf.csv")).unwrap();
        assert_eq!(csv.lines().count(), 11);
    }
}
