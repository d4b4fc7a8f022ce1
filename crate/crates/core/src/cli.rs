//! The `stanley` command-line front end.
//!
//! Every command reads a problem file (or `-` for stdin) and prints a
//! certificate. Text output of the commands that produce decompositions or
//! filtrations is itself a problem file, so it can be fed back into
//! `verify-decomp` or `pc-check`. Structured output is one JSON document that
//! also records the tool version, the options and the canonical input.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad input or usage, 3 timeout,
//! 4 internal error. Failures print a JSON diagnostic on stderr.

use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::filtrations::{
    ascend_modulo_regular, classify, descend_modulo_regular, find_pretty_clean_with_deadline,
    pretty_clean_regular_sequence, PrimeFiltration,
};
use crate::format::{format_ideal, format_problem, parse_problem, ProblemFile};
use crate::monomial::{Monomial, MonomialIdeal};
use crate::scan::{run_scan, Check, ScanConfig, ScanMode};
use crate::spectrum::{ass, depth, min_primes, CoefficientField};
use crate::stanley::{sdepth_with_deadline, StanleyDecomposition};
use crate::transforms::{
    chain_modulo_regular_with_deadline, check_theorem_main_with_deadline, lift_modulo_regular,
    restrict_drop_variable,
};

#[derive(Parser, Debug)]
#[command(
    name = "stanley",
    version,
    about = "Stanley depth, depth and pretty clean filtrations of monomial quotients"
)]
struct Cli {
    /// Coefficient field characteristic for homology: 0 or a prime.
    #[arg(long = "char", global = true, default_value_t = 0)]
    characteristic: u64,
    /// Seed for sampled inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Budget for searches, per instance under `scan`.
    #[arg(long = "timeout-ms", global = true)]
    timeout_ms: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Structured,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact Stanley depth of S/I with an optimal decomposition.
    Sdepth { input: PathBuf },
    /// Depth of S/I from Koszul homology.
    Depth { input: PathBuf },
    /// Associated primes of S/I.
    Ass { input: PathBuf },
    /// Minimal primes of S/I.
    Min { input: PathBuf },
    /// Check the `decomposition:` section against S/I.
    VerifyDecomp { input: PathBuf },
    /// Decomposition of S/I from one of S/(I,u) (computed if not given).
    Lift { input: PathBuf },
    /// Drop variable x_k from a decomposition of S/I not involving x_k.
    Restrict {
        input: PathBuf,
        /// 1-based variable index.
        #[arg(long = "var")]
        var: usize,
    },
    /// Cyclic chain from (I,u) to S and the decomposition it carries.
    Chain { input: PathBuf },
    /// Check sdepth(S/(I,u)) = sdepth(S/I) - 1.
    CheckMain { input: PathBuf },
    /// Search for a pretty clean filtration of S/I.
    PcFind { input: PathBuf },
    /// Validate and classify the `filtration:` section.
    PcCheck { input: PathBuf },
    /// Pretty clean filtration of S/(I,u) from one of S/I.
    PcDescend { input: PathBuf },
    /// Pretty clean filtration of S/I from one of S/(I,u).
    PcAscend { input: PathBuf },
    /// Pretty clean filtration of S/(u_1, ..., u_k) for the `sequence:`.
    PcRegseq { input: PathBuf },
    /// Batch-check the identities around regular monomials.
    Scan {
        #[arg(long, value_enum, default_value_t = ModeArg::RandomBox)]
        mode: ModeArg,
        #[arg(long = "n-max", default_value_t = 3)]
        n_max: usize,
        #[arg(long = "exponent-max", default_value_t = 2)]
        exponent_max: u32,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    ExhaustiveSquarefree,
    RandomBox,
}

/// What a run printed and how it ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A successful run; `ok = false` means a check failed (exit 1).
struct Certificate {
    text: String,
    result: Value,
    ok: bool,
}

enum Failure {
    Error(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

type CmdResult = std::result::Result<Certificate, Failure>;

struct Context {
    field: CoefficientField,
    deadline: Option<Instant>,
    timeout: Option<Duration>,
    seed: u64,
}

pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                diagnostic(2, "usage", &rendered, None)
            } else {
                Output {
                    code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    let field = match CoefficientField::from_characteristic(cli.characteristic) {
        Ok(f) => f,
        Err(e) => return failure_output(Failure::Error(e)),
    };
    let timeout = cli.timeout_ms.map(Duration::from_millis);
    let ctx = Context {
        field,
        deadline: timeout.map(|t| Instant::now() + t),
        timeout,
        seed: cli.seed,
    };

    let (name, input) = command_input(&cli.command);
    let problem = match input {
        Some(path) => match read_problem(path, stdin) {
            Ok(p) => Some(p),
            Err(f) => return failure_output(f),
        },
        None => None,
    };
    let outcome = match &problem {
        Some(p) => run_problem(&cli.command, p, &ctx),
        None => run_scan_command(&cli.command, &ctx),
    };
    let cert = match outcome {
        Ok(c) => c,
        Err(f) => return failure_output(f),
    };

    let stdout = match cli.format {
        OutputFormat::Text => cert.text,
        OutputFormat::Structured => {
            let doc = json!({
                "tool": "stanley",
                "version": env!("CARGO_PKG_VERSION"),
                "command": name,
                "options": {
                    "char": cli.characteristic,
                    "seed": cli.seed,
                    "timeout_ms": cli.timeout_ms,
                },
                "input": problem.as_ref().map(format_problem),
                "ok": cert.ok,
                "result": cert.result,
            });
            serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n"
        }
    };
    Output {
        code: if cert.ok { 0 } else { 1 },
        stdout,
        stderr: String::new(),
    }
}

fn command_input(cmd: &Command) -> (&'static str, Option<&PathBuf>) {
    match cmd {
        Command::Sdepth { input } => ("sdepth", Some(input)),
        Command::Depth { input } => ("depth", Some(input)),
        Command::Ass { input } => ("ass", Some(input)),
        Command::Min { input } => ("min", Some(input)),
        Command::VerifyDecomp { input } => ("verify-decomp", Some(input)),
        Command::Lift { input } => ("lift", Some(input)),
        Command::Restrict { input, .. } => ("restrict", Some(input)),
        Command::Chain { input } => ("chain", Some(input)),
        Command::CheckMain { input } => ("check-main", Some(input)),
        Command::PcFind { input } => ("pc-find", Some(input)),
        Command::PcCheck { input } => ("pc-check", Some(input)),
        Command::PcDescend { input } => ("pc-descend", Some(input)),
        Command::PcAscend { input } => ("pc-ascend", Some(input)),
        Command::PcRegseq { input } => ("pc-regseq", Some(input)),
        Command::Scan { .. } => ("scan", None),
    }
}

fn read_problem(path: &PathBuf, stdin: &mut dyn Read) -> std::result::Result<ProblemFile, Failure> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        stdin
            .read_to_string(&mut text)
            .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    }
    Ok(parse_problem(&text)?)
}

fn require_u(p: &ProblemFile) -> std::result::Result<&Monomial, Failure> {
    p.u.as_ref()
        .ok_or_else(|| Failure::Usage("this command needs a `u:` line".into()))
}

fn decomposition_of(
    p: &ProblemFile,
    ideal: &MonomialIdeal,
    ctx: &Context,
) -> std::result::Result<StanleyDecomposition, Failure> {
    match &p.decomposition {
        Some(spaces) => Ok(StanleyDecomposition::new(ideal.clone(), spaces.clone())?),
        None => Ok(sdepth_with_deadline(ideal, None, ctx.deadline)?.witness),
    }
}

fn filtration_of(
    p: &ProblemFile,
    ideal: &MonomialIdeal,
    ctx: &Context,
) -> std::result::Result<Option<PrimeFiltration>, Failure> {
    match &p.filtration {
        Some(steps) => Ok(Some(PrimeFiltration::new(ideal.clone(), steps.clone())?)),
        None => Ok(find_pretty_clean_with_deadline(ideal, ctx.deadline)?),
    }
}

fn strings<T: ToString>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    items.into_iter().map(|x| x.to_string()).collect()
}

fn decomposition_problem(d: &StanleyDecomposition) -> ProblemFile {
    ProblemFile {
        decomposition: Some(d.spaces().to_vec()),
        ..ProblemFile::new(d.ideal().clone())
    }
}

fn filtration_problem(f: &PrimeFiltration) -> ProblemFile {
    ProblemFile {
        filtration: Some(f.steps().to_vec()),
        ..ProblemFile::new(f.ideal().clone())
    }
}

fn decomposition_json(d: &StanleyDecomposition) -> Result<Value, Error> {
    Ok(json!({
        "ideal": format_ideal(d.ideal()),
        "ambient": d.ambient(),
        "sdepth": d.sdepth()?,
        "spaces": strings(d.spaces()),
        "problem": format_problem(&decomposition_problem(d)),
    }))
}

fn filtration_json(f: &PrimeFiltration) -> Result<Value, Error> {
    let report = classify(f)?;
    Ok(json!({
        "ideal": format_ideal(f.ideal()),
        "ambient": f.ambient(),
        "steps": strings(f.steps()),
        "support": strings(&report.support),
        "pretty_clean": report.pretty_clean,
        "clean": report.clean,
        "ass_equals_support": report.ass_equals_support,
        "problem": format_problem(&filtration_problem(f)),
    }))
}

fn decomposition_text(header: &str, d: &StanleyDecomposition) -> Result<String, Error> {
    Ok(format!(
        "# {header}\n# sdepth = {}\n{}",
        d.sdepth()?,
        format_problem(&decomposition_problem(d))
    ))
}

fn filtration_text(header: &str, f: &PrimeFiltration) -> Result<String, Error> {
    let report = classify(f)?;
    Ok(format!(
        "# {header}\n# pretty clean = {}, clean = {}\n{}",
        report.pretty_clean,
        report.clean,
        format_problem(&filtration_problem(f))
    ))
}

fn run_problem(cmd: &Command, p: &ProblemFile, ctx: &Context) -> CmdResult {
    let ideal = &p.ideal;
    match cmd {
        Command::Sdepth { .. } => {
            let cert = sdepth_with_deadline(ideal, None, ctx.deadline)?;
            let mut result = decomposition_json(&cert.witness)?;
            result["sdepth"] = json!(cert.value);
            result["bound"] = json!(cert.bound.to_string());
            result["partition"] = json!(cert
                .partition
                .iter()
                .map(|(a, d)| vec![a.to_string(), d.to_string()])
                .collect::<Vec<_>>());
            result["exhausted_above"] = json!(cert.exhausted_above);
            result["nodes"] = json!(cert.nodes);
            Ok(Certificate {
                text: decomposition_text(
                    &format!("optimal Stanley decomposition of S/({ideal})"),
                    &cert.witness,
                )?,
                result,
                ok: true,
            })
        }
        Command::Depth { .. } => {
            let d = depth(ideal, ctx.field)?;
            Ok(Certificate {
                text: format!("depth: {d}\n"),
                result: json!({ "depth": d, "char": ctx.field.characteristic() }),
                ok: true,
            })
        }
        Command::Ass { .. } | Command::Min { .. } => {
            let (key, primes) = if matches!(cmd, Command::Ass { .. }) {
                ("ass", ass(ideal)?)
            } else {
                ("min", min_primes(ideal)?)
            };
            let list = strings(&primes);
            Ok(Certificate {
                text: list.iter().map(|s| format!("{s}\n")).collect(),
                result: json!({ key: list }),
                ok: true,
            })
        }
        Command::VerifyDecomp { .. } => {
            let spaces = p.decomposition.clone().ok_or_else(|| {
                Failure::Usage("this command needs a `decomposition:` section".into())
            })?;
            let d = StanleyDecomposition::new(ideal.clone(), spaces)?;
            match d.verify() {
                Ok(()) => {
                    let sd = d.sdepth()?;
                    Ok(Certificate {
                        text: format!("valid\nsdepth: {sd}\n"),
                        result: json!({ "valid": true, "sdepth": sd }),
                        ok: true,
                    })
                }
                Err(v) => Ok(Certificate {
                    text: format!("invalid: {v}\n"),
                    result: json!({
                        "valid": false,
                        "violation": v.to_string(),
                        "point": v.point().to_string(),
                    }),
                    ok: false,
                }),
            }
        }
        Command::Lift { .. } => {
            let u = require_u(p)?;
            let reduced = ideal.add(std::slice::from_ref(u))?;
            let dprime = decomposition_of(p, &reduced, ctx)?;
            let lifted = lift_modulo_regular(&dprime, ideal, u)?;
            Ok(Certificate {
                text: decomposition_text(
                    &format!("decomposition of S/({ideal}) lifted from S/({reduced})"),
                    &lifted,
                )?,
                result: json!({
                    "input_sdepth": dprime.sdepth()?,
                    "lifted": decomposition_json(&lifted)?,
                }),
                ok: true,
            })
        }
        Command::Restrict { var, .. } => {
            if *var == 0 || *var > p.ambient {
                return Err(Failure::Usage(format!(
                    "--var must lie in 1..={}",
                    p.ambient
                )));
            }
            let d = decomposition_of(p, ideal, ctx)?;
            let r = restrict_drop_variable(&d, var - 1)?;
            Ok(Certificate {
                text: decomposition_text(&format!("restriction dropping x{var}"), &r)?,
                result: json!({
                    "input_sdepth": d.sdepth()?,
                    "restricted": decomposition_json(&r)?,
                }),
                ok: true,
            })
        }
        Command::Chain { .. } => {
            let u = require_u(p)?;
            let c = chain_modulo_regular_with_deadline(ideal, u, ctx.deadline)?;
            let ideals = strings(c.chain.ideals().iter().map(|i| format!("({i})")));
            let steps = strings(c.chain.steps());
            let vars: Vec<String> = c.step_vars.iter().map(|v| format!("x{}", v + 1)).collect();
            let mut text = String::from("# chain\n");
            for (i, id) in ideals.iter().enumerate() {
                text.push_str(&format!("# I_{i} = {id}\n"));
                if let (Some(s), Some(v)) = (steps.get(i), vars.get(i)) {
                    text.push_str(&format!("#   + {s} (lowers {v})\n"));
                }
            }
            text.push_str(&decomposition_text(
                &format!("source sdepth(S/({ideal})) = {}", c.source.value),
                &c.decomposition,
            )?);
            Ok(Certificate {
                text,
                result: json!({
                    "chain": ideals,
                    "steps": steps,
                    "step_vars": vars,
                    "source_sdepth": c.source.value,
                    "decomposition": decomposition_json(&c.decomposition)?,
                }),
                ok: true,
            })
        }
        Command::CheckMain { .. } => {
            let u = require_u(p)?;
            let r = check_theorem_main_with_deadline(ideal, u, ctx.deadline)?;
            Ok(Certificate {
                text: format!(
                    "sdepth(S/I) = {}\nsdepth(S/(I,u)) = {}\nidentity {}\n",
                    r.before.value,
                    r.after.value,
                    if r.holds { "holds" } else { "FAILS" }
                ),
                result: json!({
                    "sdepth_before": r.before.value,
                    "sdepth_after": r.after.value,
                    "holds": r.holds,
                    "before": decomposition_json(&r.before.witness)?,
                    "after": decomposition_json(&r.after.witness)?,
                }),
                ok: r.holds,
            })
        }
        Command::PcFind { .. } => match find_pretty_clean_with_deadline(ideal, ctx.deadline)? {
            Some(f) => Ok(Certificate {
                text: filtration_text(&format!("pretty clean filtration of S/({ideal})"), &f)?,
                result: json!({ "found": true, "filtration": filtration_json(&f)? }),
                ok: true,
            }),
            None => Ok(Certificate {
                text: format!("# no pretty clean filtration of S/({ideal}) in the search box\n"),
                result: json!({ "found": false }),
                ok: true,
            }),
        },
        Command::PcCheck { .. } => {
            let steps = p.filtration.clone().ok_or_else(|| {
                Failure::Usage("this command needs a `filtration:` section".into())
            })?;
            let f = PrimeFiltration::new(ideal.clone(), steps)?;
            match f.verify() {
                Ok(()) => {
                    let r = classify(&f)?;
                    Ok(Certificate {
                        text: format!(
                            "valid\npretty clean: {}\nclean: {}\nsupport = Ass: {}\nsupport: {}\n",
                            r.pretty_clean,
                            r.clean,
                            r.ass_equals_support,
                            strings(&r.support).join(" ")
                        ),
                        result: json!({ "valid": true, "filtration": filtration_json(&f)? }),
                        ok: true,
                    })
                }
                Err(v) => Ok(Certificate {
                    text: format!("invalid: {v}\n"),
                    result: json!({ "valid": false, "violation": v.to_string() }),
                    ok: false,
                }),
            }
        }
        Command::PcDescend { .. } => {
            let u = require_u(p)?;
            let Some(f) = filtration_of(p, ideal, ctx)? else {
                return Err(Failure::Usage(format!(
                    "S/({ideal}) has no pretty clean filtration to descend"
                )));
            };
            let down = descend_modulo_regular(&f, u)?;
            Ok(Certificate {
                text: filtration_text(&format!("descended along {u}"), &down)?,
                result: json!({ "filtration": filtration_json(&down)? }),
                ok: true,
            })
        }
        Command::PcAscend { .. } => {
            let u = require_u(p)?;
            let reduced = ideal.add(std::slice::from_ref(u))?;
            let Some(f) = filtration_of(p, &reduced, ctx)? else {
                return Err(Failure::Usage(format!(
                    "S/({reduced}) has no pretty clean filtration to ascend"
                )));
            };
            let up = ascend_modulo_regular(&f, ideal, u)?;
            Ok(Certificate {
                text: filtration_text(&format!("ascended from S/({reduced})"), &up)?,
                result: json!({ "filtration": filtration_json(&up)? }),
                ok: true,
            })
        }
        Command::PcRegseq { .. } => {
            let seq = p
                .sequence
                .as_ref()
                .ok_or_else(|| Failure::Usage("this command needs a `sequence:` line".into()))?;
            let f = pretty_clean_regular_sequence(seq, p.ambient)?;
            Ok(Certificate {
                text: filtration_text("regular sequence", &f)?,
                result: json!({ "filtration": filtration_json(&f)? }),
                ok: true,
            })
        }
        Command::Scan { .. } => unreachable!("scan reads no problem file"),
    }
}

fn run_scan_command(cmd: &Command, ctx: &Context) -> CmdResult {
    let Command::Scan {
        mode,
        n_max,
        exponent_max,
        samples,
    } = cmd
    else {
        unreachable!("only scan runs without input");
    };
    let cfg = ScanConfig {
        n_max: *n_max,
        exponent_max: *exponent_max,
        samples: *samples,
        seed: ctx.seed,
        field: ctx.field,
        mode: match mode {
            ModeArg::ExhaustiveSquarefree => ScanMode::ExhaustiveSquarefree,
            ModeArg::RandomBox => ScanMode::RandomBox,
        },
        timeout: ctx.timeout,
    };
    let report = run_scan(&cfg)?;
    let mut text = format!(
        "instances: {}\ntimeouts: {}\nerrors: {}\n",
        report.instances, report.timeouts, report.errors
    );
    for c in Check::ALL {
        let name = serde_json::to_value(c).expect("check names serialize");
        text.push_str(&format!(
            "{}: {} passed, {} failed\n",
            name.as_str().unwrap_or_default(),
            report.passed(c),
            report.failed(c)
        ));
    }
    for o in &report.counterexamples {
        text.push_str(&format!(
            "counterexample #{}: I = ({}), u = {}, failed = {:?}, error = {:?}, timed out = {}\n",
            o.index, o.ideal, o.u, o.failed, o.error, o.timed_out
        ));
    }
    let result = json!({
        "config": {
            "mode": cfg.mode,
            "n_max": cfg.n_max,
            "exponent_max": cfg.exponent_max,
            "samples": cfg.samples,
            "seed": cfg.seed,
        },
        "report": report,
    });
    Ok(Certificate {
        text,
        result,
        ok: report.clean(),
    })
}

fn failure_output(f: Failure) -> Output {
    match f {
        Failure::Usage(msg) => diagnostic(2, "usage", &msg, None),
        Failure::Error(e) => {
            let (code, kind) = match &e {
                Error::Timeout => (3, "timeout"),
                Error::Internal(_) => (4, "internal"),
                Error::Parse { .. } => (2, "parse"),
                Error::Malformed(_) => (2, "malformed"),
                Error::AmbientMismatch { .. } => (2, "ambient-mismatch"),
                Error::UnitIdeal => (2, "unit-ideal"),
                Error::ZeroIdeal => (2, "zero-ideal"),
                Error::Overflow => (2, "overflow"),
                Error::NotSplit { .. } => (2, "not-split"),
                Error::NotRegular(_) => (2, "not-regular"),
                Error::Precondition(_) => (2, "precondition"),
            };
            let position = match &e {
                Error::Parse { line, column, .. } => Some((*line, *column)),
                _ => None,
            };
            diagnostic(code, kind, &e.to_string(), position)
        }
    }
}

fn diagnostic(code: i32, kind: &str, message: &str, position: Option<(usize, usize)>) -> Output {
    let mut doc = json!({
        "tool": "stanley",
        "version": env!("CARGO_PKG_VERSION"),
        "error": kind,
        "message": message.trim_end(),
        "exit_code": code,
    });
    if let Some((line, column)) = position {
        doc["line"] = json!(line);
        doc["column"] = json!(column);
    }
    Output {
        code,
        stdout: String::new(),
        stderr: serde_json::to_string(&doc).expect("json values serialize") + "\n",
    }
}
