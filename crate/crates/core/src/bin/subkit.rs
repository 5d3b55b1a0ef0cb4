use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use subkit_core::corpus::{load_corpus, CorpusEntry};
use subkit_core::fusion::{
    bracket_subnormal, centric_radicals, hyperfocal_sides, is_saturated, FusionBase,
    SaturationVerdict, SubsystemHandle,
};
use subkit_core::group::{sylow_subgroup, Budget};
use subkit_core::report::{emit_report, CheckReport, Format};
use subkit_core::scenario::scenario_example_e1;
use subkit_core::suite::{run_suite_with, SuiteOptions, CHECKS};
use subkit_core::{Subgroup, SubkitError};

#[derive(Parser)]
#[command(
    name = "subkit",
    version,
    about = "Subnormal subgroups, fusion systems and localities of small permutation groups"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run corpus sweeps.
    Verify {
        /// Group files or directories.
        #[arg(long, num_args = 1.., required = true)]
        input: Vec<PathBuf>,
        #[arg(long)]
        prime: Option<usize>,
        /// Comma-separated check names; all checks when omitted.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        /// Write JSON lines here instead of a table on standard output.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Record per-instance milliseconds.
        #[arg(long)]
        timing: bool,
    },
    /// Bracket of the systems realized by named subnormal subgroups.
    Bracket {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        prime: usize,
        /// Subgroup label from the file, or `G` for the whole group.
        #[arg(long = "sub", required = true)]
        subs: Vec<String>,
    },
    /// Inspect F_S(G).
    Fusion {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        prime: usize,
        #[arg(long, value_enum)]
        cmd: FusionCmd,
    },
    /// The A4 x A4 scenario.
    ExampleE1 {
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FusionCmd {
    Saturation,
    Hyperfocal,
    CentricRadical,
    Print,
}

enum Failure {
    Usage(String),
    Verdict,
}

impl From<SubkitError> for Failure {
    fn from(e: SubkitError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load_one(path: &PathBuf) -> Result<CorpusEntry, Failure> {
    let mut corpus = load_corpus(std::slice::from_ref(path))?;
    match corpus.len() {
        1 => Ok(corpus.remove(0)),
        n => Err(Failure::Usage(format!(
            "expected one group file, found {n}"
        ))),
    }
}

fn named(entry: &CorpusEntry, label: &str) -> Result<Subgroup, Failure> {
    if label == "G" {
        return Ok(entry.whole());
    }
    entry.subgroup(label).cloned().ok_or_else(|| {
        Failure::Usage(format!(
            "{}: no subgroup named {label}",
            entry.path.display()
        ))
    })
}

fn gens_text(h: &Subgroup) -> Vec<String> {
    h.gen_perms().iter().map(ToString::to_string).collect()
}

fn print_json(v: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("values serialize")
    );
}

fn finish(reports: &[CheckReport], json: Option<&PathBuf>) -> Result<(), Failure> {
    let format = if json.is_some() {
        Format::Json
    } else {
        Format::Text
    };
    emit_report(reports, format, json.map(PathBuf::as_path))?;
    if reports.iter().all(CheckReport::passed) {
        Ok(())
    } else {
        Err(Failure::Verdict)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Verify {
            input,
            prime,
            checks,
            json,
            timing,
        } => {
            let checks: Vec<&str> = if checks.is_empty() {
                CHECKS.to_vec()
            } else {
                checks.iter().map(String::as_str).collect()
            };
            let corpus = load_corpus(&input)?;
            let reports = run_suite_with(&corpus, &checks, &SuiteOptions { prime, timing })?;
            finish(&reports, json.as_ref())
        }
        Cmd::Bracket { input, prime, subs } => {
            let entry = load_one(&input)?;
            let g = entry.whole();
            let s = sylow_subgroup(&g, prime);
            let base = FusionBase::new(&s, prime, &Budget::from_env())?;
            let f = base.realized(&g, base.full())?;
            let mut parts = Vec::new();
            for label in &subs {
                let h = named(&entry, label)?;
                match SubsystemHandle::realized(&f, &h) {
                    Ok(handle) => parts.push(handle),
                    Err(e @ SubkitError::NotSubnormal(_)) => {
                        eprintln!("{label}: {e}");
                        return Err(Failure::Verdict);
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            let b = bracket_subnormal(&f, &parts)?;
            let join = b.handle.realizer().expect("brackets are realized");
            print_json(&json!({
                "group": entry.name,
                "prime": prime,
                "parts": subs,
                "join": gens_text(join),
                "join_order": join.order(),
                "sylow_order": b.handle.system().over_subgroup().order(),
                "morphisms": b.handle.system().morphism_count(),
                "equals_parent": b.handle.system() == &f,
                "join_series_length": b.join_series.length(),
                "part_series_lengths": b.part_series.iter().map(|s| s.length()).collect::<Vec<_>>(),
            }));
            Ok(())
        }
        Cmd::Fusion { input, prime, cmd } => {
            let entry = load_one(&input)?;
            let g = entry.whole();
            if g.order() % prime != 0 {
                return Err(Failure::Usage(format!(
                    "{prime} does not divide |G| = {}",
                    g.order()
                )));
            }
            let s = sylow_subgroup(&g, prime);
            let base = FusionBase::new(&s, prime, &Budget::from_env())?;
            let f = base.realized(&g, base.full())?;
            match cmd {
                FusionCmd::Saturation => match is_saturated(&f) {
                    SaturationVerdict::Saturated => print_json(&json!({ "saturated": true })),
                    SaturationVerdict::NotSaturated(fail) => {
                        print_json(&json!({
                            "saturated": false,
                            "axiom": fail.axiom.name(),
                            "subgroup": gens_text(&base.subgroup(fail.subgroup)),
                        }));
                        return Err(Failure::Verdict);
                    }
                },
                FusionCmd::Hyperfocal => {
                    let r = hyperfocal_sides(&f)?;
                    print_json(&json!({
                        "group_side": gens_text(&r.group_side),
                        "fusion_side": gens_text(&r.fusion_side),
                        "order": r.fusion_side.order(),
                        "agree": r.sides_agree(),
                    }));
                    if !r.sides_agree() {
                        return Err(Failure::Verdict);
                    }
                }
                FusionCmd::CentricRadical => {
                    let list: Vec<Value> = centric_radicals(&f)
                        .iter()
                        .map(|c| json!({ "order": c.order(), "generators": gens_text(c) }))
                        .collect();
                    print_json(&Value::Array(list));
                }
                FusionCmd::Print => {
                    let rows: Vec<Value> = f
                        .summary()
                        .into_iter()
                        .map(|(order, homs, auts)| json!({ "order": order, "homs": homs, "auts": auts }))
                        .collect();
                    print_json(&json!({
                        "group": entry.name,
                        "prime": prime,
                        "sylow": gens_text(&s),
                        "sylow_order": s.order(),
                        "morphisms": f.morphism_count(),
                        "hom_sets": rows,
                    }));
                }
            }
            Ok(())
        }
        Cmd::ExampleE1 { json } => {
            let reports = scenario_example_e1()?;
            finish(&reports, json.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verdict) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
