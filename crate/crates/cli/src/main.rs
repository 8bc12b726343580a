//! `machmon`: simulate machines, compute their relations algebraically, and
//! run the differential verification suite.
//!
//! Exit codes: 0 success, 1 verification failure or mismatch, 2 usage or
//! parse error. Text output goes to stdout and is deterministic; elapsed
//! time is reported on stderr (or in the `timing_ms` field with `--json`).

mod report;
mod suite;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use machine_monoids::algebra::{computation_square, word_square, CnCodec};
use machine_monoids::semantics::{
    btm_oracle, btm_trace, format_word, mealy_run, nfa_hom, parse_word, transition_monoid, twoway_oracle, twoway_trace,
};
use machine_monoids::{Machine, Square};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use report::{rel_text, rel_value, square_text, square_value, RunReport};

#[derive(Parser)]
#[command(
    name = "machmon",
    version,
    about = "Relational semantics of automata and bounded Turing machines"
)]
struct Cli {
    /// Emit the run report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a machine: NFA and Mealy on --input, two-way on --input, bounded
    /// machines on --length.
    Simulate {
        machine: PathBuf,
        #[arg(long)]
        input: Option<String>,
        /// Start state label (Mealy and NFA).
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        length: Option<usize>,
        /// Also print the configuration graph.
        #[arg(long)]
        trace: bool,
    },
    /// Transition monoid of an NFA (or a Mealy machine's underlying NFA).
    Monoid {
        machine: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        bound: usize,
    },
    /// Global transition relation(s) of a word.
    Global {
        machine: PathBuf,
        word: String,
        #[arg(long, value_enum, default_value_t = Method::Algebra)]
        method: Method,
    },
    /// Computation square of a bounded machine on tapes of length n.
    Comprel {
        machine: PathBuf,
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Algebra)]
        method: Method,
    },
    /// Randomized differential check of the algebra against the oracles.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=6))]
        max_states: u64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=4))]
        max_symbols: u64,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=4))]
        max_length: u64,
        /// Use a deliberately broken vertical composition.
        #[arg(long, hide = true)]
        mutate: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Oracle,
    Algebra,
    Both,
}

/// A usage or parse error; always exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

struct Output {
    report: RunReport,
    text: String,
    ok: bool,
}

impl Output {
    fn new() -> Output {
        Output {
            report: RunReport {
                command: std::iter::once("machmon".to_string())
                    .chain(std::env::args().skip(1))
                    .collect(),
                machine_digest: None,
                results: Value::Null,
                verification: None,
                warnings: Vec::new(),
                timing_ms: 0.0,
            },
            text: String::new(),
            ok: true,
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }
}

fn load(path: &PathBuf, out: &mut Output) -> Result<Machine, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let m = Machine::from_json_str(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let digest = hex::encode(Sha256::digest(m.to_json_string().as_bytes()));
    out.line(format!("machine {} ({}), sha256 {digest}", path.display(), m.kind()));
    out.report.machine_digest = Some(digest);
    Ok(m)
}

fn required<T>(value: Option<T>, flag: &str, kind: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure(format!("{kind} machines need {flag}")))
}

fn simulate(
    out: &mut Output,
    path: &PathBuf,
    input: Option<String>,
    start: Option<String>,
    length: Option<usize>,
    trace: bool,
) -> Result<(), Failure> {
    let m = load(path, out)?;
    match &m {
        Machine::Nfa(nfa) => {
            let w = parse_word(nfa.alphabet(), &required(input, "--input", "nfa")?)?;
            let t = nfa_hom(nfa, &w)?;
            out.line(format!("t({}) = {}", format_word(nfa.alphabet(), &w), rel_text(&t)));
            let mut results = json!({ "relation": rel_value(&t) });
            if let Some(label) = start {
                let q = nfa.states().index_of(&label)?;
                let ends: Vec<String> = t.image(q).map(|p| nfa.states().label(p)).collect();
                out.line(format!("end states from {label}: {}", ends.join(" ")));
                results["end_states"] = json!(ends);
            }
            out.report.results = results;
        }
        Machine::Mealy(mealy) => {
            let w = parse_word(mealy.alphabet(), &required(input, "--input", "mealy")?)?;
            let q = mealy.states().index_of(&required(start, "--start", "mealy")?)?;
            let runs = mealy_run(mealy, &w, q)?;
            let mut results = Vec::new();
            for (o, end) in &runs {
                let (o, end) = (format_word(mealy.alphabet(), o), mealy.states().label(*end));
                out.line(format!("output {o} end {end}"));
                results.push(json!({ "output": o, "end": end }));
            }
            if runs.is_empty() {
                out.line("no run");
            }
            out.report.results = Value::Array(results);
        }
        Machine::TwoWay(tw) => {
            let w = parse_word(tw.alphabet(), &required(input, "--input", "two-way")?)?;
            let sq = twoway_oracle(tw, &w)?;
            out.text.push_str(&square_text(&sq));
            let mut results = json!({ "square": square_value(&sq) });
            if trace {
                let edges: Vec<String> = twoway_trace(tw, &w)?.iter().map(|e| e.to_string()).collect();
                edges.iter().for_each(|e| out.line(format!("  {e}")));
                results["trace"] = json!(edges);
            }
            out.report.results = results;
        }
        Machine::Btm(btm) => {
            let n = required(length, "--length", "bounded")?;
            let sq = btm_oracle(btm, n);
            out.text.push_str(&square_text(&sq));
            let mut results = json!({ "square": square_value(&sq) });
            if trace {
                let edges: Vec<String> = btm_trace(btm, n).iter().map(|e| e.to_string()).collect();
                edges.iter().for_each(|e| out.line(format!("  {e}")));
                results["trace"] = json!(edges);
            }
            out.report.results = results;
        }
    }
    Ok(())
}

fn monoid(out: &mut Output, path: &PathBuf, bound: usize) -> Result<(), Failure> {
    let nfa = match load(path, out)? {
        Machine::Nfa(m) => m,
        Machine::Mealy(m) => m.underlying_nfa(),
        other => {
            return Err(Failure(format!(
                "monoid needs an nfa or mealy machine, got {}",
                other.kind()
            )))
        }
    };
    let t = transition_monoid(&nfa, bound)?;
    let names: Vec<String> = t
        .words
        .iter()
        .map(|w| {
            if w.is_empty() {
                "λ".to_string()
            } else {
                format_word(nfa.alphabet(), w)
            }
        })
        .collect();
    out.line(format!("{} element{}", t.len(), if t.len() == 1 { "" } else { "s" }));
    for (name, e) in names.iter().zip(&t.elements) {
        out.line(format!("  {name}: {}", rel_text(e)));
    }
    let width = names.iter().map(|n| n.chars().count()).max().unwrap_or(1);
    let cell = |s: &str| format!("{s:>width$}");
    out.line(format!(
        "{} |{}",
        cell(""),
        names.iter().map(|n| format!(" {}", cell(n))).collect::<String>()
    ));
    for (i, row) in t.table.iter().enumerate() {
        let cells: String = row.iter().map(|&k| format!(" {}", cell(&names[k]))).collect();
        out.line(format!("{} |{cells}", cell(&names[i])));
    }
    out.report.results = json!({
        "elements": names.iter().zip(&t.elements).map(|(w, e)| json!({ "word": w, "relation": rel_value(e) })).collect::<Vec<_>>(),
        "table": t.table,
    });
    Ok(())
}

fn emit_squares(
    out: &mut Output,
    method: Method,
    oracle: impl Fn() -> Result<Square, Failure>,
    algebra: impl Fn() -> Result<Square, Failure>,
) -> Result<(), Failure> {
    let mut results = serde_json::Map::new();
    let mut computed = Vec::new();
    for (name, wanted, f) in [
        (
            "oracle",
            method != Method::Algebra,
            &oracle as &dyn Fn() -> Result<Square, Failure>,
        ),
        ("algebra", method != Method::Oracle, &algebra),
    ] {
        if wanted {
            let sq = f()?;
            if method == Method::Both {
                out.line(format!("{name}:"));
            }
            out.text.push_str(&square_text(&sq));
            results.insert(name.to_string(), square_value(&sq));
            computed.push(sq);
        }
    }
    if let [a, b] = computed.as_slice() {
        let same = a == b;
        out.line(if same { "MATCH" } else { "MISMATCH" });
        results.insert("match".to_string(), json!(same));
        out.ok = same;
    }
    out.report.results = Value::Object(results);
    Ok(())
}

fn global(out: &mut Output, path: &PathBuf, word: &str, method: Method) -> Result<(), Failure> {
    match load(path, out)? {
        Machine::TwoWay(tw) => {
            let w = parse_word(tw.alphabet(), word)?;
            if w.is_empty() {
                return Err(Failure("global transition relations need a non-empty word".into()));
            }
            emit_squares(
                out,
                method,
                || Ok(twoway_oracle(&tw, &w)?),
                || Ok(word_square(&tw, &w)?),
            )
        }
        Machine::Nfa(nfa) => {
            let w = parse_word(nfa.alphabet(), word)?;
            let t = nfa_hom(&nfa, &w)?;
            out.line(format!("t({}) = {}", format_word(nfa.alphabet(), &w), rel_text(&t)));
            out.report.results = json!({ "relation": rel_value(&t) });
            Ok(())
        }
        other => Err(Failure(format!(
            "global needs a two-way or nfa machine, got {}; use comprel for bounded machines",
            other.kind()
        ))),
    }
}

fn comprel(out: &mut Output, path: &PathBuf, n: usize, method: Method) -> Result<(), Failure> {
    let btm = match load(path, out)? {
        Machine::Btm(m) => m,
        other => return Err(Failure(format!("comprel needs a btm machine, got {}", other.kind()))),
    };
    let codec = CnCodec::new(btm.states().clone(), btm.alphabet().clone(), n);
    out.line(format!("carrier C_{n}: {} configurations", codec.carrier().size()));
    emit_squares(
        out,
        method,
        || Ok(btm_oracle(&btm, n)),
        || Ok(computation_square(&btm, n).square),
    )
}

fn verify(out: &mut Output, cfg: suite::SuiteConfig) {
    if cfg.trials == 0 {
        out.report.warnings.push("no trials run; the pass is vacuous".into());
        eprintln!("warning: no trials run; the pass is vacuous");
    }
    let v = suite::run(&cfg);
    out.line(format!(
        "seed {} trials {}{}",
        cfg.seed,
        cfg.trials,
        if cfg.mutate { " (mutated vcompose)" } else { "" }
    ));
    for p in &v.properties {
        let status = if p.failed == 0 { "PASS" } else { "FAIL" };
        out.line(format!(
            "{status} {}: {} passed, {} failed",
            p.property, p.passed, p.failed
        ));
    }
    out.line(format!("total: {} passed, {} failed", v.passed, v.failed));
    if let Some(ce) = &v.first_counterexample {
        out.line(format!(
            "first counterexample: trial {} (replay with --seed {} --trials 1)",
            ce.trial, ce.trial_seed
        ));
        out.line(format!("  {}: {}", ce.property, ce.detail));
        out.line(format!(
            "  subject: {}",
            serde_json::to_string(&ce.subject).expect("json value")
        ));
    }
    out.ok = v.failed == 0;
    out.report.verification = Some(v);
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut out = Output::new();
    let result = match cli.command {
        Command::Simulate {
            machine,
            input,
            start,
            length,
            trace,
        } => simulate(&mut out, &machine, input, start, length, trace),
        Command::Monoid { machine, bound } => monoid(&mut out, &machine, bound),
        Command::Global { machine, word, method } => global(&mut out, &machine, &word, method),
        Command::Comprel { machine, n, method } => comprel(&mut out, &machine, n, method),
        Command::Verify {
            seed,
            trials,
            max_states,
            max_symbols,
            max_length,
            mutate,
        } => {
            verify(
                &mut out,
                suite::SuiteConfig {
                    seed,
                    trials,
                    max_states: max_states as usize,
                    max_symbols: max_symbols as usize,
                    max_length: max_length as usize,
                    mutate,
                },
            );
            Ok(())
        }
    };
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    match result {
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Ok(()) => {
            out.report.timing_ms = elapsed;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.report).expect("report serializes")
                );
            } else {
                print!("{}", out.text);
                eprintln!("time: {elapsed:.1} ms");
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
