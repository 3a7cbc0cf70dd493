use clap::{Args, Parser, Subcommand, ValueEnum};
use foguel_core::analysis::{bmoa_section_test, growth_profile, h2_partial_norm, hankel_section_norms};
use foguel_core::characterize::dispatch;
use foguel_core::config::geometric_sizes;
use foguel_core::corpus::{corpus_list, corpus_run, load_corpus};
use foguel_core::intertwine::{certify, identity_suite};
use foguel_core::opmat::{half_octave_grid, xn_norm_profile, DiagPair, OffKind};
use foguel_core::symbol::{builtin, parse_symbol_source, Builtin, DerivativeMode, Part};
use foguel_core::{FoguelCase, FourierSymbol, LabConfig, LabError, Status};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_HOLDS: u8 = 0;
const EXIT_FAILS: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 10;
const EXIT_RUNTIME: u8 = 11;

const EXIT_HELP: &str = "\
Exit status:
  0   holds (or: identities within tolerance, corpus without mismatches)
  1   fails (or: residual above tolerance, corpus mismatches)
  2   inconclusive
  10  usage error (bad flag, unknown case token, unparsable symbol)
  11  runtime error (unreadable file, size too small, ...)

Environment:
  FOGUEL_LAB_THREADS  caps the worker thread count";

#[derive(Parser)]
#[command(
    name = "foguel-lab",
    version,
    about = "Decide, certify and profile similarity to a contraction for [[Y, X], [0, Z]] with shift diagonals",
    after_help = EXIT_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct Common {
    /// Largest truncation size (check: Hankel sections 16..N; certify/profile: section size).
    #[arg(long)]
    trunc: Option<usize>,
    /// Dyadic refinement depth of the quotient test.
    #[arg(long)]
    depth: Option<u32>,
    /// Tolerance of the quotient stabilization test.
    #[arg(long)]
    tol: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Clone)]
struct CaseArgs {
    /// One of t|h followed by :s,s* :s,s :s*,s :s*,s*
    #[arg(long)]
    case: String,
    /// builtin:NAME?k=v&... or file:PATH
    #[arg(long)]
    symbol: String,
}

#[derive(Subcommand)]
enum Command {
    /// Run the characterization for one case and symbol.
    Check {
        #[command(flatten)]
        case: CaseArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Build and verify an intertwiner certificate.
    Certify {
        #[command(flatten)]
        case: CaseArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Section norms of X_n, the off-diagonal block of the n-th power.
    Profile {
        #[command(flatten)]
        case: CaseArgs,
        /// Largest power.
        #[arg(long, default_value_t = 128)]
        nmax: usize,
        /// Compute every n instead of the half-octave grid.
        #[arg(long)]
        every: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Seeded random suites of the Toeplitz/Hankel product identities.
    Identities {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run the regression corpus.
    Corpus {
        /// Corpus JSON; the built-in table when absent.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Only entries whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// The Hilbert-Hankel example end to end.
    DemoHilbert {
        #[arg(long, default_value_t = 128)]
        nmax: usize,
        #[command(flatten)]
        common: Common,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        let code = match e {
            LabError::Parse(_) | LabError::UnsupportedCase(_) => EXIT_USAGE,
            _ => EXIT_RUNTIME,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_RUNTIME,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn status_code(s: Status) -> u8 {
    if s.holds() {
        EXIT_HOLDS
    } else if s.fails() {
        EXIT_FAILS
    } else {
        EXIT_INCONCLUSIVE
    }
}

fn config(c: &Common) -> LabConfig {
    let mut cfg = LabConfig::default();
    if let Some(d) = c.depth {
        cfg.quotient_depth = d;
    }
    if let Some(t) = c.tol {
        cfg.quotient_tol = t;
    }
    cfg
}

fn emit(common: &Common, text: &str) -> Result<(), Failure> {
    match &common.out {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn parse_case(a: &CaseArgs) -> Result<(FoguelCase, FourierSymbol), Failure> {
    let case: FoguelCase = a.case.parse()?;
    let sym = parse_symbol_source(&a.symbol).map_err(|e| match e {
        LabError::Io(_) | LabError::Json(_) => Failure {
            code: EXIT_RUNTIME,
            message: format!("{}: {e}", a.symbol),
        },
        other => usage(other.to_string()),
    })?;
    Ok((case, sym))
}

fn thresholds_csv(cfg: &LabConfig, s: &mut String) {
    for (k, v) in cfg.thresholds() {
        let _ = writeln!(s, "# {k}={v}");
    }
}

fn cmd_check(a: &CaseArgs, common: &Common) -> Result<u8, Failure> {
    let (case, sym) = parse_case(a)?;
    let mut cfg = config(common);
    if let Some(n) = common.trunc {
        cfg.section_sizes = geometric_sizes(16, n);
    }
    let rep = dispatch(case, &sym, &cfg);
    let text = match common.format {
        Format::Json => pretty(&rep.to_json()),
        Format::Csv => {
            let mut s = String::from("test,status\n");
            for (name, v) in &rep.trace {
                let _ = writeln!(s, "{name},{}", v.status);
            }
            let _ = writeln!(s, "overall,{}", rep.status());
            thresholds_csv(&cfg, &mut s);
            s
        }
    };
    emit(common, &text)?;
    Ok(status_code(rep.status()))
}

fn cmd_certify(a: &CaseArgs, common: &Common) -> Result<u8, Failure> {
    let (case, sym) = parse_case(a)?;
    let cfg = config(common);
    let n = common.trunc.unwrap_or(256);
    let (rep, cert) = certify(case, &sym, n, &cfg)?;
    let Some(cert) = cert else {
        let v = json!({
            "case": case,
            "status": rep.status(),
            "certificate": null,
            "reason": rep.verdict.reason,
            "thresholds": cfg.thresholds(),
        });
        emit(common, &pretty(&v))?;
        return Ok(status_code(rep.status()).max(EXIT_FAILS));
    };
    let ok = cert.max_residual() <= cfg.witness_residual && cert.qn_within_bound();
    let text = match common.format {
        Format::Json => {
            let mut v = cert.to_json();
            v["status"] = json!(rep.status());
            v["verified"] = json!(ok);
            v["thresholds"] = json!(cfg.thresholds());
            pretty(&v)
        }
        Format::Csv => {
            let mut buf = Vec::new();
            cert.a.write_csv(&mut buf)?;
            let mut s = String::from_utf8(buf).expect("csv is utf-8");
            for r in &cert.residuals {
                let _ = writeln!(s, "# residual {}={:e} margin={}", r.name, r.value, r.margin);
            }
            let _ = writeln!(s, "# section_size={n} verified={ok}");
            thresholds_csv(&cfg, &mut s);
            s
        }
    };
    emit(common, &text)?;
    Ok(if ok { EXIT_HOLDS } else { EXIT_FAILS })
}

fn cmd_profile(a: &CaseArgs, nmax: usize, every: bool, common: &Common) -> Result<u8, Failure> {
    let (case, sym) = parse_case(a)?;
    if !matches!(case.pair, DiagPair::SSstar | DiagPair::SS) {
        return Err(usage(format!("profile supports the (s,s*) and (s,s) diagonals, not {case}")));
    }
    let cfg = config(common);
    let size = common.trunc.unwrap_or(1024);
    let ns: Vec<usize> = if every {
        (1..=nmax).collect()
    } else {
        half_octave_grid(nmax)
    };
    let points = xn_norm_profile(case.pair, case.kind, &sym, size, &ns)?;
    let fpoints: Vec<(f64, f64)> = points.iter().map(|&(n, v)| (n as f64, v)).collect();
    let profile = growth_profile(&fpoints, &cfg)?;
    let code = if profile.is_bounded() {
        EXIT_HOLDS
    } else if profile.grows(&cfg) {
        EXIT_FAILS
    } else {
        EXIT_INCONCLUSIVE
    };
    let text = match common.format {
        Format::Csv => {
            let mut s = String::from("n,norm\n");
            for (n, v) in &points {
                let _ = writeln!(s, "{n},{v}");
            }
            let _ = writeln!(s, "# class={} r2={:.6}", profile.class_label(), profile.r2);
            let _ = writeln!(s, "# section_size={size}");
            thresholds_csv(&cfg, &mut s);
            s
        }
        Format::Json => pretty(&json!({
            "case": case,
            "section_size": size,
            "points": points,
            "class": profile.class,
            "r2": profile.r2,
            "tail_increase": profile.tail_increase,
            "thresholds": cfg.thresholds(),
        })),
    };
    emit(common, &text)?;
    Ok(code)
}

const IDENTITY_TOL: f64 = 1e-10;

fn cmd_identities(seed: u64, trials: usize, common: &Common) -> Result<u8, Failure> {
    let cfg = config(common);
    let n = common.trunc.unwrap_or(64);
    let rep = identity_suite(seed, trials, n, 8)?;
    let ok = rep.max_residual() <= IDENTITY_TOL;
    let text = match common.format {
        Format::Json => {
            let mut v = serde_json::to_value(&rep).expect("report serializes");
            v["max_residual"] = json!(rep.max_residual());
            v["tolerance"] = json!(IDENTITY_TOL);
            v["pass"] = json!(ok);
            v["thresholds"] = json!(cfg.thresholds());
            pretty(&v)
        }
        Format::Csv => {
            let mut s = String::from("identity,max_residual\n");
            for (k, v) in [
                ("th_id_1", rep.th_id_1),
                ("th_id_2", rep.th_id_2),
                ("tph_toeplitz", rep.tph_toeplitz),
                ("tph_hankel", rep.tph_hankel),
                ("tph_four_term", rep.tph_four_term),
            ] {
                let _ = writeln!(s, "{k},{v:e}");
            }
            let _ = writeln!(s, "# seed={seed} trials={trials} section_size={n} tolerance={IDENTITY_TOL:e}");
            thresholds_csv(&cfg, &mut s);
            s
        }
    };
    emit(common, &text)?;
    Ok(if ok { EXIT_HOLDS } else { EXIT_FAILS })
}

fn cmd_corpus(path: Option<&PathBuf>, filter: Option<&str>, common: &Common) -> Result<u8, Failure> {
    let cfg = config(common);
    let mut entries = match path {
        Some(p) => load_corpus(p)?,
        None => corpus_list(),
    };
    if let Some(f) = filter {
        entries.retain(|e| e.name.contains(f));
    }
    let summary = corpus_run(&entries, &cfg);
    let text = match common.format {
        Format::Json => pretty(&json!({
            "entries": summary.rows.len(),
            "mismatches": summary.mismatches,
            "rows": summary.rows,
            "thresholds": cfg.thresholds(),
        })),
        Format::Csv => {
            let mut s = String::from("name,case,expected,status,match\n");
            for r in &summary.rows {
                let exp = serde_json::to_value(r.expected).expect("enum serializes");
                let _ = writeln!(
                    s,
                    "{},\"{}\",{},{},{}",
                    r.name,
                    r.case,
                    exp.as_str().unwrap_or_default(),
                    r.status,
                    r.matches
                );
            }
            let _ = writeln!(s, "# mismatches={}", summary.mismatches);
            thresholds_csv(&cfg, &mut s);
            s
        }
    };
    emit(common, &text)?;
    Ok(if summary.mismatches == 0 { EXIT_HOLDS } else { EXIT_FAILS })
}

fn cmd_demo_hilbert(nmax: usize, common: &Common) -> Result<u8, Failure> {
    let cfg = config(common);
    let size = common.trunc.unwrap_or(512);
    let psi = builtin(&Builtin::Hilbert)?;
    let mut r = String::new();
    let _ = writeln!(r, "Hilbert-Hankel example");
    let _ = writeln!(r, "symbol: i e^(-it)(pi - t), c_n = 1/(n+1) for n >= 0");
    let _ = writeln!(r);

    let sizes = [2, 8, 32, 128, 512];
    let norms = hankel_section_norms(&psi, &sizes);
    let _ = writeln!(r, "Hilbert matrix section norms:");
    for (n, v) in sizes.iter().zip(&norms) {
        let _ = writeln!(r, "  N = {n:>4}: {v:.6}");
    }
    let below = norms.iter().all(|&v| v < std::f64::consts::PI);
    let increasing = norms.windows(2).all(|w| w[1] > w[0]);
    let _ = writeln!(r, "section norms < π: {below}");
    let _ = writeln!(r, "section norms increasing: {increasing}");
    let _ = writeln!(r);

    let fp = psi.riesz_project(Part::Plus).analytic_derivative(DerivativeMode::FPrime)?;
    let _ = writeln!(r, "(P+psi)' partial H2 norms:");
    for n in [10, 100, 1000, 10000] {
        let _ = writeln!(r, "  n = {n:>5}: {:.4}", h2_partial_norm(&fp, n));
    }
    let _ = writeln!(r);

    let ns = half_octave_grid(nmax);
    let points = xn_norm_profile(DiagPair::SSstar, OffKind::Hankel, &psi, size, &ns)?;
    let fpoints: Vec<(f64, f64)> = points.iter().map(|&(n, v)| (n as f64, v)).collect();
    let profile = growth_profile(&fpoints, &cfg)?;
    let _ = writeln!(r, "||X_n|| section norms (section size {size}):");
    for (n, v) in &points {
        let _ = writeln!(r, "  n = {n:>4}: {v:.4}");
    }
    let _ = writeln!(r, "X_n growth class: {} (r2 = {:.4})", profile.class_label(), profile.r2);
    let _ = writeln!(r, "X_n bounded: {}", profile.is_bounded());
    let _ = writeln!(r);

    let bmoa = bmoa_section_test(&fp, &cfg.section_sizes, &cfg)?;
    let _ = writeln!(r, "BMOA test on (P+psi)': {}", bmoa.status);
    if let Some(a) = bmoa.diagnostic("power_alpha") {
        let _ = writeln!(r, "  fitted power exponent: {a:.4}");
    }
    let rep = dispatch("h:s,s*".parse().expect("valid token"), &psi, &cfg);
    let _ = writeln!(r, "check h:s,s*: {}", rep.status());
    let rep2 = dispatch("h:s*,s".parse().expect("valid token"), &psi, &cfg);
    let _ = writeln!(r, "check h:s*,s: {}", rep2.status());
    let conclusion = rep.status().fails() && !profile.is_bounded();
    let _ = writeln!(
        r,
        "conclusion: [[S, H_psi], [0, S*]] is {}similar to a contraction",
        if conclusion { "not " } else { "possibly " }
    );

    let text = match common.format {
        Format::Json => pretty(&json!({
            "hilbert_section_norms": sizes.iter().zip(&norms).collect::<Vec<_>>(),
            "section_norms_below_pi": below,
            "section_norms_increasing": increasing,
            "xn_profile": points,
            "xn_class": profile.class,
            "bmoa_status": bmoa.status,
            "check_s_sstar": rep.status(),
            "check_sstar_s": rep2.status(),
            "report": r,
            "thresholds": cfg.thresholds(),
        })),
        Format::Csv => {
            let mut s = r;
            thresholds_csv(&cfg, &mut s);
            s
        }
    };
    emit(common, &text)?;
    Ok(EXIT_HOLDS)
}

fn init_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("FOGUEL_LAB_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| usage(format!("FOGUEL_LAB_THREADS must be a positive integer, got `{v}`")))?;
        if n == 0 {
            return Err(usage("FOGUEL_LAB_THREADS must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure {
                code: EXIT_RUNTIME,
                message: e.to_string(),
            })?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Failure> {
    init_threads()?;
    match &cli.command {
        Command::Check { case, common } => cmd_check(case, common),
        Command::Certify { case, common } => cmd_certify(case, common),
        Command::Profile {
            case,
            nmax,
            every,
            common,
        } => cmd_profile(case, *nmax, *every, common),
        Command::Identities { seed, trials, common } => cmd_identities(*seed, *trials, common),
        Command::Corpus { corpus, filter, common } => cmd_corpus(corpus.as_ref(), filter.as_deref(), common),
        Command::DemoHilbert { nmax, common } => cmd_demo_hilbert(*nmax, common),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
