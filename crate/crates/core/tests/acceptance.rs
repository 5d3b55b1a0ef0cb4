//! Runs the acceptance criteria and prints one line per criterion.

mod common;

use std::process::{Command, ExitCode};
use std::time::Instant;

use common::*;
use subkit_core::corpus::{shipped_corpus_dir, CorpusEntry};
use subkit_core::fusion::{is_saturated, FusionBase, FusionSystem};
use subkit_core::group::{sylow_subgroup, Budget};
use subkit_core::locality::{
    corpus_object_sets, locality_from_group, locality_fusion_and_split, DEFAULT_WORD_BOUND,
};
use subkit_core::report::{CheckReport, Status};
use subkit_core::scenario::{scenario_example_e1, ExampleE1};
use subkit_core::subnormal::normal_subgroups;
use subkit_core::suite::run_suite;
use subkit_core::Subgroup;

type Outcome = Result<String, String>;

fn sweep(corpus: &[CorpusEntry], check: &str) -> Result<Vec<CheckReport>, String> {
    let reports = run_suite(corpus, &[check]).map_err(|e| e.to_string())?;
    let bad: Vec<&CheckReport> = reports
        .iter()
        .filter(|r| r.status != Status::Pass)
        .collect();
    if let Some(r) = bad.first() {
        return Err(format!(
            "{} of {} not passing, first: {}",
            bad.len(),
            reports.len(),
            r.to_json_line()
        ));
    }
    if reports.is_empty() {
        return Err("no instances".into());
    }
    Ok(reports)
}

fn simple(corpus: &[CorpusEntry], check: &str) -> Outcome {
    sweep(corpus, check).map(|r| format!("{} instances", r.len()))
}

fn criterion_1(corpus: &[CorpusEntry]) -> Outcome {
    if let Some(e) = corpus.iter().find(|e| e.group.order() > 720) {
        return Err(format!("{} has order above 720", e.name));
    }
    let start = Instant::now();
    let n = sweep(corpus, "meierfrankenfeld")?.len();
    let secs = start.elapsed().as_secs_f64();
    if secs > 300.0 {
        return Err(format!("sweep took {secs:.1}s"));
    }
    Ok(format!("{n} pairs in {secs:.2}s"))
}

/// The three group splittings plus the locality split on S5 and A5 at p = 2,
/// with every returned `S_g = S_(n,h)` recomputed on raw permutations.
fn criterion_5(corpus: &[CorpusEntry]) -> Outcome {
    let n = sweep(corpus, "splittings")?.len();
    let s5 = corpus.iter().find(|e| e.name == "S5").ok_or("S5 missing")?;
    let a5 = sub(&s5.group, &[&[&[0, 1, 2]], &[&[1, 2, 3]], &[&[2, 3, 4]]]);
    let mut checked = 0;
    for g in [s5.whole(), a5] {
        let s = sylow_subgroup(&g, 2);
        let delta: Vec<Subgroup> = all_subgroups(&s.ambient().clone())
            .into_iter()
            .filter(|h| h.is_subgroup_of(&s))
            .collect();
        let l =
            locality_from_group(&g, &s, &delta, DEFAULT_WORD_BOUND).map_err(|e| e.to_string())?;
        let sm = members(&s);
        for nn in normal_subgroups(&g) {
            let (_, rep) =
                locality_fusion_and_split(&l, &nn.element_vec()).map_err(|e| e.to_string())?;
            if !rep.holds() {
                return Err(format!("split fails for N of order {}", nn.order()));
            }
            if rep.splits.len() != l.elements().len() {
                return Err("not every element was split".into());
            }
            for &(x, a, b) in &rep.splits {
                let amb = &s5.group;
                let ok = amb.mul(a, b) == x
                    && nn.contains(a)
                    && rep.normalizer_of_t.contains(&b)
                    && raw_restriction(&sm, &[raw(amb, x)])
                        == raw_restriction(&sm, &[raw(amb, a), raw(amb, b)]);
                if !ok {
                    return Err(format!("bad split of element {x}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{n} lemma instances, {checked} locality splits on S5/A5"
    ))
}

fn criterion_6() -> Outcome {
    let reports = scenario_example_e1().map_err(|e| e.to_string())?;
    if reports.len() != 5 {
        return Err(format!("{} claims", reports.len()));
    }
    if let Some(r) = reports.iter().find(|r| r.status != Status::Pass) {
        return Err(r.to_json_line());
    }
    let ex = ExampleE1::build().map_err(|e| e.to_string())?;
    let w = |k: usize, key: &str| reports[k - 1].witness[key].clone();
    let facts_ok = ex.s.order() == 16
        && ex.n1.order() == 48
        && ex.n2.order() == 48
        && w(2, "saturated") == false
        && w(4, "aut_meet_s_order") == 1
        && w(4, "aut_e1_t1_order") == 3
        && w(5, "join_route_equals_f") == true;
    if !facts_ok {
        return Err("scenario facts differ".into());
    }
    Ok("5 claims".into())
}

fn criterion_7(corpus: &[CorpusEntry]) -> Outcome {
    let n = sweep(corpus, "locality")?.len();
    let mut localities = 0;
    for e in corpus {
        let g = e.whole();
        for &p in &e.primes {
            let s = sylow_subgroup(&g, p);
            for (name, delta) in corpus_object_sets(&g, &s, p).map_err(|e| e.to_string())? {
                let l = locality_from_group(&g, &s, &delta, DEFAULT_WORD_BOUND)
                    .map_err(|e| e.to_string())?;
                if !l.check_axioms().passed() {
                    return Err(format!("{} p={p} {name}: axioms fail", e.name));
                }
                localities += 1;
            }
        }
    }
    Ok(format!("{n} reports, {localities} localities re-checked"))
}

fn criterion_9(corpus: &[CorpusEntry]) -> Outcome {
    let n = sweep(corpus, "saturation")?.len();
    let ex = ExampleE1::build().map_err(|e| e.to_string())?;
    let base = FusionBase::new(&ex.s, 2, &Budget::default()).map_err(|e| e.to_string())?;
    let e1 = base
        .realized(&ex.g1, base.mask_of(&ex.t1))
        .map_err(|e| e.to_string())?;
    let e2 = base
        .realized(&ex.g2, base.mask_of(&ex.t2))
        .map_err(|e| e.to_string())?;
    let join =
        FusionSystem::generate(&base, base.full(), &[&e1, &e2]).map_err(|e| e.to_string())?;
    if is_saturated(&join).is_saturated() {
        return Err("the scenario join was accepted".into());
    }
    Ok(format!(
        "{n} realized systems accepted, scenario join rejected"
    ))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for name in ["a.jsonl", "b.jsonl"] {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_subkit"))
            .arg("verify")
            .arg("--input")
            .arg(shipped_corpus_dir())
            .arg("--json")
            .arg(&out)
            .status()
            .map_err(|e| e.to_string())?;
        if status.code() != Some(0) {
            return Err(format!("verify exited with {status}"));
        }
        outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    if outputs[0] != outputs[1] {
        return Err("outputs differ".into());
    }
    Ok(format!("{} bytes identical", outputs[0].len()))
}

fn main() -> ExitCode {
    let corpus = corpus();
    let criteria: Vec<(usize, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, Box::new(|| criterion_1(&corpus))),
        (2, Box::new(|| simple(&corpus, "wielandt"))),
        (3, Box::new(|| simple(&corpus, "tgroups"))),
        (4, Box::new(|| simple(&corpus, "bracket_prop"))),
        (5, Box::new(|| criterion_5(&corpus))),
        (6, Box::new(criterion_6)),
        (7, Box::new(|| criterion_7(&corpus))),
        (8, Box::new(|| simple(&corpus, "hyperfocal"))),
        (9, Box::new(|| criterion_9(&corpus))),
        (10, Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (k, run) in criteria {
        match run() {
            Ok(note) => println!("criterion {k}: pass ({note})"),
            Err(why) => {
                failed += 1;
                println!("criterion {k}: fail ({why})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
