//! `gsp4`: spinor L-factors of GSp(4) representations from the command line.

mod decl;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use gsp4_lfactors::export::export_tables;
use gsp4_lfactors::lfactor::{
    analyze, anisotropic_lambda_condition, caveats, has_anisotropic_bessel, l_exceptional,
    l_full_any_model, l_regular, LambdaSet,
};
use gsp4_lfactors::notation::{
    parse_character, parse_character_k, parse_gl2, parse_rep, print_character, print_character_k,
    print_factor, print_rep, Style,
};
use gsp4_lfactors::verify::{verify_tables, VerifyConfig};
use gsp4_lfactors::{
    endoscopic_packet, sk_packet, verify_packet_identity, BesselDatum, Character, CharacterK,
    Environment, EnvironmentDecl, Error, EulerFactor, Gsp4Rep, Ramification, TypeSymbol,
};

use decl::DeclFlags;

#[derive(Parser)]
#[command(
    name = "gsp4",
    version,
    about = "Spinor L-factors of GSp(4) representations"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Render text output with Greek letters.
    #[arg(long, global = true)]
    unicode: bool,
    /// Ramification of the quadratic extension K/k.
    #[arg(long, global = true, value_enum)]
    extension: Option<Extension>,
    /// Character generator: NAME[:unramified|:ramified][:order=N][:eq=EXPR].
    #[arg(long = "declare", global = true, value_name = "SPEC")]
    declare: Vec<String>,
    /// Abstract character of K^x: NAME:restriction=EXPR[:unramified|:ramified].
    #[arg(long = "declare-k", global = true, value_name = "SPEC")]
    declare_k: Vec<String>,
    /// Cuspidal GL(2) representation:
    /// NAME:central=EXPR[:waldspurger=yes|no][:jl=yes|no][:dihedral=KEXPR,KEXPR].
    #[arg(long, global = true, value_name = "SPEC")]
    cusp: Vec<String>,
    /// Opaque cuspidal GSp(4) representation:
    /// NAME:central=EXPR[:generic|:nongeneric][:bessel=yes|no].
    #[arg(long, global = true, value_name = "SPEC")]
    opaque: Vec<String>,
    /// JSON environment declaration; flags are appended to it.
    #[arg(long, global = true, value_name = "FILE")]
    input: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum Extension {
    Unramified,
    Ramified,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Full,
    Regular,
    Exceptional,
}

#[derive(Subcommand)]
enum Command {
    /// Regular, exceptional and full L-factor of an anisotropic Bessel model.
    Lfactor(Query),
    /// Poles of an L-factor after binding q and the units.
    Poles {
        #[command(flatten)]
        query: Query,
        /// Residue field cardinality.
        #[arg(long)]
        q: f64,
        /// Numeric value of a unit, e.g. sigma=1 or u_sigma=1.
        #[arg(long = "bind", value_name = "UNIT=VALUE")]
        bind: Vec<String>,
        /// Which factor to specialize.
        #[arg(long, value_enum, default_value_t = Which::Full)]
        factor: Which,
    },
    /// Cross-check every table over randomized instantiations.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instantiations per row.
        #[arg(long, default_value_t = 100)]
        instantiations: usize,
        /// Corrupt one exceptional entry (harness self-test).
        #[arg(long, hide = true, value_name = "TYPE")]
        inject_fault: Option<String>,
    },
    /// Dump all tables.
    Export,
    /// Build an endoscopic or Saito-Kurokawa packet and check its L-factor identity.
    Packet {
        #[arg(long, requires = "pi2", conflicts_with = "sk")]
        pi1: Option<String>,
        #[arg(long, requires = "pi1")]
        pi2: Option<String>,
        /// GL(2) input of a Saito-Kurokawa packet.
        #[arg(long, required_unless_present = "pi1")]
        sk: Option<String>,
        #[arg(long)]
        mu: Option<String>,
    },
}

#[derive(Args)]
struct Query {
    /// GSp(4) representation, e.g. "tau(T, nu^{-1/2} sigma)".
    #[arg(long)]
    rep: String,
    /// Character of K^x; omit for the factor of any Bessel model.
    #[arg(long)]
    lambda: Option<String>,
    /// Twisting character of k^x.
    #[arg(long)]
    mu: Option<String>,
}

enum Failure {
    Input(String),
    NoModel(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::NoModel(_) => 2,
            Failure::Verification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::NoModel(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoAnisotropicModel { .. } | Error::NoBesselModel(_) => {
                Failure::NoModel(e.to_string())
            }
            e => Failure::Input(e.to_string()),
        }
    }
}

/// What a command produced: text lines and a structured record.
struct Output {
    text: String,
    record: Value,
    /// Set when the result itself reports a failed verification.
    failure: Option<Failure>,
}

impl Output {
    fn ok(text: String, record: Value) -> Self {
        Output {
            text,
            record,
            failure: None,
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Lfactor(_) => "lfactor",
        Command::Poles { .. } => "poles",
        Command::Verify { .. } => "verify",
        Command::Export => "export",
        Command::Packet { .. } => "packet",
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    // Usage errors are input errors (exit 1); clap would use 2.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let name = command_name(&cli.command);
    let format = cli.common.format;
    let result = run(&cli);
    let failure = match result {
        Ok(out) => {
            match format {
                Format::Text => emit(&out.text),
                Format::Structured => emit(&format!(
                    "{}\n",
                    json!({ "command": name, "result": out.record })
                )),
            }
            match out.failure {
                None => return ExitCode::SUCCESS,
                Some(f) => f,
            }
        }
        Err(f) => {
            if format == Format::Structured {
                emit(&format!(
                    "{}\n",
                    json!({
                        "command": name,
                        "error": { "exit_code": f.code(), "message": f.message() },
                    })
                ));
            }
            f
        }
    };
    eprintln!("error: {}", failure.message());
    ExitCode::from(failure.code())
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let style = if cli.common.unicode {
        Style::Unicode
    } else {
        Style::Ascii
    };
    match &cli.command {
        Command::Verify {
            seed,
            instantiations,
            inject_fault,
        } => verify(*seed, *instantiations, inject_fault.as_deref()),
        Command::Export => export(),
        Command::Lfactor(q) => lfactor(&environment(&cli.common)?, q, style),
        Command::Poles {
            query,
            q,
            bind,
            factor,
        } => poles(&environment(&cli.common)?, query, *q, bind, *factor, style),
        Command::Packet { pi1, pi2, sk, mu } => {
            let env = environment(&cli.common)?;
            packet(
                &env,
                pi1.as_deref().zip(pi2.as_deref()),
                sk.as_deref(),
                mu.as_deref(),
                style,
            )
        }
    }
}

fn environment(c: &Common) -> Result<Environment, Failure> {
    let base = match &c.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let decl: EnvironmentDecl = serde_json::from_str(&text)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            Some(decl)
        }
        None => None,
    };
    let flags = DeclFlags {
        extension: c.extension.map(|e| match e {
            Extension::Unramified => Ramification::Unramified,
            Extension::Ramified => Ramification::Ramified,
        }),
        generators: c.declare.clone(),
        k_characters: c.declare_k.clone(),
        cusps: c.cusp.clone(),
        opaque: c.opaque.clone(),
    };
    let decl = flags.build(base).map_err(Failure::Input)?;
    Ok(Environment::new(decl)?)
}

struct Parsed {
    rep: Gsp4Rep,
    lambda: Option<CharacterK>,
    mu: Character,
}

fn parse_query(env: &Environment, q: &Query) -> Result<Parsed, Failure> {
    let rep = parse_rep(&q.rep, env)?;
    let lambda = match &q.lambda {
        Some(t) => Some(parse_character_k(t, env.context())?),
        None => None,
    };
    let mu = match &q.mu {
        Some(t) => parse_character(t, env.context())?,
        None => env.context().trivial(),
    };
    Ok(Parsed { rep, lambda, mu })
}

/// Fails with exit code 2 unless `Λ` gives an anisotropic model, citing the
/// condition that failed.
fn require_model(rep: &Gsp4Rep, lambda: &CharacterK) -> Result<BesselDatum, Failure> {
    let bd = BesselDatum::new(lambda.clone());
    if has_anisotropic_bessel(rep, &bd)? {
        return Ok(bd);
    }
    let omega = rep.central_character();
    let reason = if bd.restriction() != omega {
        format!(
            "Lambda restricts to {} on k^x but the central character is {omega}",
            bd.restriction()
        )
    } else {
        let cond = anisotropic_lambda_condition(rep);
        match cond.set {
            LambdaSet::None => format!("row {} admits no Lambda", cond.row),
            _ => format!("Lambda fails the condition of row {}: {cond}", cond.row),
        }
    };
    Err(Failure::NoModel(format!(
        "no anisotropic Bessel model for {rep} with Lambda = {lambda}: {reason}"
    )))
}

fn line(out: &mut String, label: &str, value: impl std::fmt::Display) {
    out.push_str(&format!("{label:<15}{value}\n"));
}

fn lfactor(env: &Environment, q: &Query, style: Style) -> Result<Output, Failure> {
    let p = parse_query(env, q)?;
    let mut text = String::new();
    line(&mut text, "type", p.rep.symbol());
    line(&mut text, "representation", print_rep(&p.rep, style));
    let Some(lambda) = &p.lambda else {
        let full = l_full_any_model(&p.rep, &p.mu)?;
        line(&mut text, "mu", print_character(&p.mu, style));
        line(&mut text, "full", print_factor(&full, style));
        let notes = caveats(&p.rep, Some(&p.mu));
        for c in &notes {
            text.push_str(&format!("{c}\n"));
        }
        let record = json!({
            "type": p.rep.symbol(),
            "representation": p.rep.to_string(),
            "mu": p.mu.to_string(),
            "full": full,
            "full_text": full.to_string(),
            "caveats": notes,
        });
        return Ok(Output::ok(text, record));
    };
    let bd = require_model(&p.rep, lambda)?;
    let report = analyze(&p.rep, &bd, &p.mu)?;
    line(&mut text, "Lambda", print_character_k(lambda, style));
    line(&mut text, "mu", print_character(&p.mu, style));
    line(&mut text, "condition", &report.condition_trace);
    line(
        &mut text,
        "regular",
        print_factor(&report.factors.regular, style),
    );
    line(
        &mut text,
        "exceptional",
        print_factor(&report.factors.exceptional, style),
    );
    line(&mut text, "full", print_factor(&report.factors.full, style));
    for c in &report.caveats {
        text.push_str(&format!("{c}\n"));
    }
    let mut record = to_value(&report);
    record["text"] = json!({
        "regular": report.factors.regular.to_string(),
        "exceptional": report.factors.exceptional.to_string(),
        "full": report.factors.full.to_string(),
    });
    Ok(Output::ok(text, record))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("records serialize")
}

fn bindings(binds: &[String]) -> Result<BTreeMap<String, f64>, Failure> {
    binds
        .iter()
        .map(|b| {
            let (k, v) = b
                .split_once('=')
                .ok_or_else(|| Failure::Input(format!("--bind expects UNIT=VALUE, got `{b}`")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Failure::Input(format!("--bind {k}: `{v}` is not a number")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn poles(
    env: &Environment,
    query: &Query,
    q: f64,
    bind: &[String],
    which: Which,
    style: Style,
) -> Result<Output, Failure> {
    let p = parse_query(env, query)?;
    let units = bindings(bind)?;
    let factor: EulerFactor = match (&p.lambda, which) {
        (None, Which::Full) => l_full_any_model(&p.rep, &p.mu)?,
        (None, _) => {
            return Err(Failure::Input(
                "--factor regular/exceptional needs --lambda".into(),
            ))
        }
        (Some(lambda), w) => {
            let bd = require_model(&p.rep, lambda)?;
            match w {
                Which::Full => {
                    l_regular(&p.rep, &bd, &p.mu)?.mul(&l_exceptional(&p.rep, &bd, &p.mu)?)
                }
                Which::Regular => l_regular(&p.rep, &bd, &p.mu)?,
                Which::Exceptional => l_exceptional(&p.rep, &bd, &p.mu)?,
            }
        }
    };
    let poles = factor.specialize(q, &units)?.poles();
    let mut text = String::new();
    line(&mut text, "type", p.rep.symbol());
    line(&mut text, "factor", print_factor(&factor, style));
    line(&mut text, "q", q);
    if poles.is_empty() {
        text.push_str("no poles\n");
    }
    for pole in &poles {
        text.push_str(&format!(
            "Re(s) = {:<12} multiplicity {}  (q^-s = {})\n",
            fmt_float(pole.re_s),
            pole.multiplicity,
            fmt_float(pole.x)
        ));
    }
    let record = json!({
        "type": p.rep.symbol(),
        "representation": p.rep.to_string(),
        "factor": factor,
        "factor_text": factor.to_string(),
        "q": q,
        "bindings": units,
        "poles": poles,
    });
    Ok(Output::ok(text, record))
}

/// Rounds away floating-point noise for display.
fn fmt_float(x: f64) -> String {
    let s = format!("{:.9}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn verify(seed: u64, instantiations: usize, fault: Option<&str>) -> Result<Output, Failure> {
    let fault = fault
        .map(|t| {
            t.parse::<TypeSymbol>()
                .map_err(|_| Failure::Input(format!("unknown type `{t}`")))
        })
        .transpose()?;
    let report = verify_tables(&VerifyConfig {
        seed,
        instantiations,
        fault,
    });
    let mut text = String::new();
    let mut checks: Vec<_> = report.results.iter().map(|r| r.check).collect();
    checks.dedup();
    for check in checks {
        let rows: Vec<_> = report.by_check(check).collect();
        let comparisons: usize = rows.iter().map(|r| r.comparisons).sum();
        text.push_str(&format!(
            "{:<24}{:>3} rows {:>7} comparisons\n",
            check.to_string(),
            rows.len(),
            comparisons
        ));
    }
    let mut failing = Vec::new();
    for r in report.results.iter().filter(|r| !r.passed()) {
        failing.push(format!("{} row {}", r.check, r.row));
        text.push_str(&format!(
            "FAIL {} row {}: {} of {} comparisons failed\n",
            r.check, r.row, r.failed, r.comparisons
        ));
        for f in &r.failures {
            text.push_str(&format!(
                "  instantiation: {}\n  {}\n",
                f.instantiation, f.detail
            ));
        }
    }
    let failure = if report.passed() {
        text.push_str(&format!(
            "all {} checks passed (seed {seed})\n",
            report.comparisons()
        ));
        None
    } else {
        text.push_str(&format!(
            "{} of {} checks failed (seed {seed})\n",
            report.failed(),
            report.comparisons()
        ));
        Some(Failure::Verification(format!(
            "verification failed: {}",
            failing.join(", ")
        )))
    };
    Ok(Output {
        text,
        record: to_value(&report),
        failure,
    })
}

fn export() -> Result<Output, Failure> {
    let tables = export_tables()?;
    let text = tables
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output::ok(text, json!({ "tables": tables })))
}

fn packet(
    env: &Environment,
    endoscopic: Option<(&str, &str)>,
    sk: Option<&str>,
    mu: Option<&str>,
    style: Style,
) -> Result<Output, Failure> {
    let packet = match (endoscopic, sk) {
        (Some((a, b)), _) => endoscopic_packet(&parse_gl2(a, env)?, &parse_gl2(b, env)?, env)?,
        (None, Some(p)) => sk_packet(&parse_gl2(p, env)?)?,
        (None, None) => return Err(Failure::Input("give --pi1 and --pi2, or --sk".into())),
    };
    let mu = match mu {
        Some(t) => parse_character(t, env.context())?,
        None => env.context().trivial(),
    };
    let report = verify_packet_identity(&packet, &mu)?;
    let mut text = String::new();
    line(&mut text, "packet", &packet.source);
    line(&mut text, "row", packet.row_label());
    line(&mut text, "mu", print_character(&mu, style));
    let members =
        std::iter::once(("plus", &report.plus)).chain(report.minus.as_ref().map(|m| ("minus", m)));
    for (sign, m) in members {
        line(&mut text, sign, print_rep(&m.rep, style));
        line(&mut text, "  L-factor", print_factor(&m.lhs, style));
        line(&mut text, "  expected", print_factor(&m.rhs, style));
    }
    let mut notes = caveats(&packet.plus, Some(&mu));
    if let Some(m) = &packet.minus {
        notes.extend(caveats(m, None));
    }
    notes.sort();
    notes.dedup();
    for c in &notes {
        text.push_str(&format!("{c}\n"));
    }
    let failure = if report.equal() {
        text.push_str("identity holds\n");
        None
    } else {
        text.push_str("identity FAILS\n");
        Some(Failure::Verification(format!(
            "packet identity fails for {}",
            packet.source
        )))
    };
    let mut record = to_value(&report);
    record["caveats"] = to_value(&notes);
    Ok(Output {
        text,
        record,
        failure,
    })
}
