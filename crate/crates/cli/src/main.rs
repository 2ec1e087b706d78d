use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use exotica_core::fibration::collect_a_powers;
use exotica_core::rbd::{chain_matrix, cpq_chain, identify_cpq, CpqLabel, PlumbingChain};
use exotica_core::scenario::{run_scenario, Scenario};
use exotica_core::sw::{alexander_twist, blow_up_sw, SwFunction};
use exotica_core::word::{eval_word, Word};
use exotica_core::linalg::determinant;

#[derive(Debug, Parser)]
#[command(name = "exotica", version, about = "Exact checks for torus-fibration constructions")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether two words define the same element of SL(2, Z).
    VerifyWord { word1: String, word2: String },
    /// Move the powers of `a` in a positive word to the front.
    Collect { word: String },
    /// Print the plumbing chain of C(p, q).
    Chain { p: u64, q: u64 },
    /// Recognise a chain such as "-18 -2 -2" or "-18,-2x14" as C(p, q).
    Identify {
        #[arg(num_args = 1.., allow_hyphen_values = true)]
        chain: Vec<String>,
    },
    /// SW function of E(2) after knot surgeries with a twist knot and blow-ups.
    Sw {
        #[arg(long)]
        twist: u64,
        #[arg(long, default_value_t = 3)]
        surgeries: u32,
        #[arg(long, default_value_t = 0)]
        blowups: usize,
    },
    /// Run a scenario file.
    Run { scenario: PathBuf },
}

/// Outcome of a subcommand: pass/fail plus what to print.
struct Outcome {
    pass: bool,
    text: String,
    json: serde_json::Value,
}

enum Failure {
    Usage(String),
}

fn parse_word(s: &str) -> Result<Word, Failure> {
    s.parse().map_err(|e| Failure::Usage(format!("cannot parse word '{s}': {e}")))
}

/// Accepts whitespace or comma separated entries; `-2x14` and `-2×14` repeat.
fn parse_chain(parts: &[String]) -> Result<PlumbingChain, Failure> {
    let joined = parts.join(" ").replace(',', " ");
    let tokens: Vec<&str> = joined.split_whitespace().collect();
    let mut coefficients = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let tok = tokens[i];
        let bad = || Failure::Usage(format!("bad chain entry '{tok}'"));
        if let Some((v, k)) = tok.split_once(['x', '×']) {
            let v: i64 = v.parse().map_err(|_| bad())?;
            let k: usize = k.parse().map_err(|_| bad())?;
            coefficients.extend(std::iter::repeat_n(v, k));
        } else if let Some(k) = tokens.get(i + 1).and_then(|t| t.strip_prefix(['x', '×'])) {
            let v: i64 = tok.parse().map_err(|_| bad())?;
            let k: usize = k.parse().map_err(|_| bad())?;
            coefficients.extend(std::iter::repeat_n(v, k));
            i += 1;
        } else {
            coefficients.push(tok.parse().map_err(|_| bad())?);
        }
        i += 1;
    }
    PlumbingChain::new(coefficients).map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::VerifyWord { word1, word2 } => {
            let (u, v) = (parse_word(word1)?, parse_word(word2)?);
            let (mu, mv) = (eval_word(&u), eval_word(&v));
            let pass = mu == mv;
            Ok(Outcome {
                pass,
                text: format!(
                    "{word1} -> {mu}\n{word2} -> {mv}\n{}",
                    if pass { "equal in SL(2,Z): pass" } else { "different in SL(2,Z): fail" }
                ),
                json: json!({ "word1": u.to_compact(), "word2": v.to_compact(), "matrix1": mu, "matrix2": mv, "equivalent": pass }),
            })
        }
        Command::Collect { word } => {
            let w = parse_word(word)?;
            let f = collect_a_powers(&w).map_err(|e| Failure::Usage(e.to_string()))?;
            let types: Vec<String> = f.fiber_types().iter().map(|t| t.to_string()).collect();
            let exps: Vec<i64> = f.blocks().iter().map(|b| -b.conjugator().a_exponent()).collect();
            let mults: Vec<u64> = f.blocks().iter().map(|b| b.multiplicity()).collect();
            let pass = f.evaluate() == eval_word(&w);
            let mut text = format!("a-power: {}\n", f.a_power());
            for b in f.blocks() {
                text.push_str(&format!(
                    "  block a^{} b^{} a^{}  cycle {}\n",
                    b.conjugator().a_exponent(),
                    b.multiplicity(),
                    -b.conjugator().a_exponent(),
                    b.cycle()
                ));
            }
            text.push_str(&format!("fibers: {}\ntwists: {}", types.join(", "), f.twist_count()));
            Ok(Outcome {
                pass,
                text,
                json: json!({
                    "a_power": f.a_power(),
                    "multiplicities": mults,
                    "conjugator_exponents": exps,
                    "cycles": f.blocks().iter().map(|b| b.cycle()).collect::<Vec<_>>(),
                    "fiber_types": types,
                    "twist_count": f.twist_count(),
                    "evaluation_preserved": pass,
                }),
            })
        }
        Command::Chain { p, q } => {
            let label = CpqLabel::new(*p, *q).map_err(|e| Failure::Usage(e.to_string()))?;
            let chain = cpq_chain(label).map_err(|e| Failure::Usage(e.to_string()))?;
            let det = determinant(&chain_matrix(&chain));
            Ok(Outcome {
                pass: true,
                text: chain.to_string(),
                json: json!({ "p": p, "q": q, "chain": chain.coefficients(), "length": chain.len(), "determinant": det.to_string() }),
            })
        }
        Command::Identify { chain } => {
            let chain = parse_chain(chain)?;
            let label = identify_cpq(&chain);
            Ok(Outcome {
                pass: label.is_some(),
                text: label.map_or_else(|| format!("{chain}: not a C(p,q) chain"), |l| l.to_string()),
                json: json!({ "chain": chain.coefficients(), "p": label.map(|l| l.p()), "q": label.map(|l| l.q()) }),
            })
        }
        Command::Sw { twist, surgeries, blowups } => {
            let delta = alexander_twist(*twist).map_err(|e| Failure::Usage(e.to_string()))?;
            let mut sw = SwFunction::unit("T");
            for _ in 0..*surgeries {
                sw = sw.knot_surgery(&delta).map_err(|e| Failure::Usage(e.to_string()))?;
            }
            let sw = blow_up_sw(&sw, *blowups).map_err(|e| Failure::Usage(e.to_string()))?;
            let top = sw.top_value();
            let factors: Vec<String> = sw.factors().iter().map(|f| format!("({f})")).collect();
            let text = format!(
                "SW = {}\nbasic classes: {}\ntop value: {}",
                factors.join(" · "),
                sw.basic_class_count(),
                top.as_ref().map_or("none".into(), |v| v.to_string())
            );
            Ok(Outcome {
                pass: top.is_some(),
                text,
                json: json!({
                    "sw": sw,
                    "top_value": top.map(|v| v.to_string()),
                    "fingerprint": sw.fingerprint(),
                }),
            })
        }
        Command::Run { scenario } => {
            let text = fs::read_to_string(scenario)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", scenario.display())))?;
            let s = Scenario::from_json(&text).map_err(|e| Failure::Usage(e.to_string()))?;
            let report = run_scenario(&s).map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(Outcome {
                pass: report.passed(),
                text: report.to_text().trim_end().to_string(),
                json: serde_json::to_value(&report).expect("report is plain JSON"),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli.command) {
        Ok(out) => {
            let json = serde_json::to_string_pretty(&out.json).expect("plain JSON");
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let mut stdout = io::stdout().lock();
            let _ = writeln!(stdout, "{}", if cli.json { &json } else { &out.text });
            if let Some(path) = &cli.report {
                if let Err(e) = fs::write(path, format!("{json}\n")) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(if out.pass { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
