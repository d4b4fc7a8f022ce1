//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. All comparisons are exact.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{ass_oracle, prime_sets, raw, verify_oracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stanley_core::filtrations::{
    classify, find_pretty_clean, pretty_clean_regular_sequence, PrimeFiltration,
};
use stanley_core::scan::{
    check_instance, generate_instances, scan_instances, Check, ScanConfig, ScanInstance, ScanMode,
    ScanReport,
};
use stanley_core::spectrum::{ass, ass_by_witnesses, depth};
use stanley_core::stanley::{
    decomposition_from_filtration, sdepth, StanleyDecomposition, StanleySpace,
};
use stanley_core::transforms::{adjoin_variable, restrict_drop_variable};
use stanley_core::{CoefficientField, Monomial, MonomialIdeal};

const SEED: u64 = 20_240_601;
const RUNTIME_BUDGET: Duration = Duration::from_secs(600);

struct Gate {
    failures: usize,
}

impl Gate {
    fn report(&mut self, number: u32, pass: bool, what: &str, detail: String) {
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("criterion {number}: {verdict} — {what} ({detail})");
        if !pass {
            self.failures += 1;
        }
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ stream)
}

fn random_ideal(rng: &mut ChaCha8Rng, n_max: usize, e_max: u32) -> MonomialIdeal {
    let n = rng.gen_range(1..=n_max);
    let count = rng.gen_range(0..=4);
    let gens: Vec<Monomial> = (0..count)
        .map(|_| Monomial::new((0..n).map(|_| rng.gen_range(0..=e_max)).collect()))
        .filter(|g| !g.is_one())
        .collect();
    MonomialIdeal::normalize(gens, n).unwrap()
}

/// The sample of criteria 1 to 4 and 6.
fn identity_sample() -> Vec<ScanInstance> {
    // a superset of the n ≤ 3, u = x_{n+1} sweep, so that both sides of the
    // biconditional occur
    let exhaustive = ScanConfig {
        n_max: 4,
        exponent_max: 2,
        mode: ScanMode::ExhaustiveSquarefree,
        ..ScanConfig::default()
    };
    let random = ScanConfig {
        n_max: 3,
        exponent_max: 2,
        samples: 300,
        seed: SEED,
        mode: ScanMode::RandomBox,
        ..ScanConfig::default()
    };
    let mut all = generate_instances(&exhaustive).unwrap();
    all.extend(generate_instances(&random).unwrap());
    all
}

fn tally(report: &ScanReport, check: Check) -> String {
    format!(
        "{} passed, {} failed",
        report.passed(check),
        report.failed(check)
    )
}

fn criteria_1_2(gate: &mut Gate, report: &ScanReport, squarefree: usize, elapsed: Duration) {
    let random = report.instances - squarefree;
    let sd_ok = report.failed(Check::SdepthIdentity) == 0
        && report.passed(Check::SdepthIdentity) == report.instances
        && report.timeouts == 0
        && report.errors == 0;
    gate.report(
        1,
        sd_ok && random >= 200 && elapsed < RUNTIME_BUDGET,
        "sdepth(S/(I,u)) = sdepth(S/I) - 1",
        format!(
            "{squarefree} squarefree + {random} random instances, {}, {:.1}s",
            tally(report, Check::SdepthIdentity),
            elapsed.as_secs_f64()
        ),
    );
    gate.report(
        2,
        report.failed(Check::DepthIdentity) == 0
            && report.passed(Check::DepthIdentity) == report.instances,
        "depth(S/(I,u)) = depth(S/I) - 1",
        tally(report, Check::DepthIdentity),
    );
}

fn criterion_4(gate: &mut Gate, report: &ScanReport) {
    gate.report(
        4,
        report.failed(Check::PrettyCleanBiconditional) == 0
            && report.passed(Check::PrettyCleanBiconditional) == report.instances
            && report.failed(Check::DescendAscend) == 0
            && report.passed(Check::DescendAscend) > 0,
        "S/I pretty clean iff S/(I,u) pretty clean; descend/ascend round trips",
        format!(
            "biconditional {}; both pretty clean {}, neither {}; descend/ascend {}",
            tally(report, Check::PrettyCleanBiconditional),
            report.pretty_clean_both,
            report.pretty_clean_neither,
            tally(report, Check::DescendAscend)
        ),
    );
}

fn criterion_3(gate: &mut Gate, sample: &[ScanInstance]) {
    let mut sources: Vec<StanleyDecomposition> = Vec::new();
    for inst in sample.iter().step_by(3) {
        sources.push(sdepth(&inst.ideal, None).unwrap().witness);
        let f = find_pretty_clean(&inst.ideal).unwrap();
        if let Some(f) = f {
            sources.push(decomposition_from_filtration(&f).unwrap());
        }
    }
    let (mut adjoined, mut restricted, mut bad) = (0, 0, Vec::new());
    for d in &sources {
        let n = d.ambient();
        let sd = d.sdepth().unwrap();
        for k in 0..=n {
            let a = adjoin_variable(d, k).unwrap();
            adjoined += 1;
            if a.verify().is_err() || a.sdepth().unwrap() != sd + 1 {
                bad.push(format!("adjoin x{} to {}", k + 1, d.ideal()));
            }
        }
        for k in 0..n {
            if d.ideal().generators().iter().any(|g| g.exponent(k) > 0) {
                continue;
            }
            let r = restrict_drop_variable(d, k).unwrap();
            restricted += 1;
            if r.verify().is_err() || r.sdepth().unwrap() + 1 < sd {
                bad.push(format!("restrict x{} of {}", k + 1, d.ideal()));
            }
        }
    }
    gate.report(
        3,
        bad.is_empty() && sources.len() >= 100 && restricted >= 100,
        "adjoin adds exactly 1, restrict loses at most 1, outputs verify",
        format!(
            "{} source decompositions, {adjoined} adjoined, {restricted} restricted, {} violations{}",
            sources.len(),
            bad.len(),
            bad.first().map(|b| format!(": {b}")).unwrap_or_default()
        ),
    );
}

/// All lists of pairwise coprime monomials in `n` variables with exponents
/// in `{1, 2}`: a set partition of some subset of the variables into
/// supports, and an exponent for each variable used.
fn coprime_lists(n: usize) -> Vec<Vec<Monomial>> {
    fn partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
        let Some((&first, rest)) = items.split_first() else {
            return vec![Vec::new()];
        };
        let mut out = Vec::new();
        for p in partitions(rest) {
            for i in 0..p.len() {
                let mut q = p.clone();
                q[i].insert(0, first);
                out.push(q);
            }
            let mut q = p;
            q.insert(0, vec![first]);
            out.push(q);
        }
        out
    }
    let mut out = Vec::new();
    for subset in 0u32..1 << n {
        let vars: Vec<usize> = (0..n).filter(|&v| subset >> v & 1 == 1).collect();
        for blocks in partitions(&vars) {
            for exps in 0u32..1 << vars.len() {
                let e = |v: usize| 1 + (exps >> vars.iter().position(|&w| w == v).unwrap() & 1);
                let list = blocks
                    .iter()
                    .map(|b| {
                        let mut x = vec![0; n];
                        for &v in b {
                            x[v] = e(v);
                        }
                        Monomial::new(x)
                    })
                    .collect();
                out.push(list);
            }
        }
    }
    out
}

fn criterion_5(gate: &mut Gate, filtrations: &mut Vec<PrimeFiltration>) {
    let (mut lists, mut bad) = (0, Vec::new());
    for n in 1..=4 {
        for us in coprime_lists(n) {
            lists += 1;
            let f = pretty_clean_regular_sequence(&us, n).unwrap();
            let i = f.ideal().clone();
            let pretty = f.verify().is_ok() && classify(&f).unwrap().pretty_clean;
            let d = depth(&i, CoefficientField::Rational).unwrap();
            let sd = sdepth(&i, None).unwrap().value;
            if !pretty || sd < d || d != n - us.len() {
                bad.push(format!(
                    "({i}): pretty clean {pretty}, sdepth {sd}, depth {d}"
                ));
            }
            filtrations.push(f);
        }
    }
    gate.report(
        5,
        bad.is_empty(),
        "regular sequences: pretty clean, sdepth ≥ depth = n - k",
        format!(
            "{lists} lists in n ≤ 4, {} violations{}",
            bad.len(),
            bad.first().map(|b| format!(": {b}")).unwrap_or_default()
        ),
    );
}

fn criterion_6(gate: &mut Gate, report: &ScanReport, filtrations: &[PrimeFiltration]) {
    let mut bad = Vec::new();
    for f in filtrations {
        let r = classify(f).unwrap();
        let d = decomposition_from_filtration(f).unwrap();
        let dp = depth(f.ideal(), CoefficientField::Rational).unwrap();
        if !r.ass_equals_support
            || r.support != ass(f.ideal()).unwrap()
            || d.verify().is_err()
            || d.sdepth().unwrap() < dp
        {
            bad.push(format!("({})", f.ideal()));
        }
    }
    let ok = bad.is_empty()
        && report.failed(Check::SuppEqualsAss) == 0
        && report.failed(Check::StanleyWhenPrettyClean) == 0
        && report.passed(Check::SuppEqualsAss) > 0;
    gate.report(
        6,
        ok,
        "pretty clean filtrations: Supp = Ass, induced decomposition verifies with sdepth ≥ depth",
        format!(
            "{} regular-sequence filtrations ({} violations); scan Supp = Ass {}; sdepth ≥ depth {}",
            filtrations.len(),
            bad.len(),
            tally(report, Check::SuppEqualsAss),
            tally(report, Check::StanleyWhenPrettyClean)
        ),
    );
}

fn criterion_7(gate: &mut Gate) {
    let mut r = rng(7);
    let (mut ideals, mut ass_bad) = (0, Vec::new());
    while ideals < 600 {
        let i = random_ideal(&mut r, 4, 3);
        if i.is_unit() {
            continue;
        }
        ideals += 1;
        let primary = ass(&i).unwrap();
        if primary != ass_by_witnesses(&i).unwrap()
            || prime_sets(&primary) != ass_oracle(&raw(&i), i.ambient())
        {
            ass_bad.push(format!("({i})"));
        }
    }

    let (mut decomps, mut invalid, mut verify_bad) = (0, 0, Vec::new());
    while decomps < 300 {
        let i = random_ideal(&mut r, 3, 2);
        if i.is_unit() {
            continue;
        }
        let n = i.ambient();
        let mut spaces = sdepth(&i, None).unwrap().witness.into_spaces();
        let k = r.gen_range(0..spaces.len());
        match r.gen_range(0..4) {
            0 => {}
            1 => {
                spaces.remove(k);
            }
            2 => {
                let root = spaces[k].root().clone();
                spaces[k] = StanleySpace::new(root, 0..n).unwrap();
            }
            _ => {
                let s = spaces[k].clone();
                let root = s.root().mul(&Monomial::var(r.gen_range(0..n), n)).unwrap();
                spaces.push(StanleySpace::new(root, s.vars().iter().copied()).unwrap());
            }
        }
        let d = StanleyDecomposition::new(i.clone(), spaces).unwrap();
        decomps += 1;
        let grid = d.verify().is_ok();
        invalid += usize::from(!grid);
        if grid != d.verify_brute_force().is_ok() || grid != verify_oracle(&raw(&i), n, d.spaces())
        {
            verify_bad.push(format!("({i})"));
        }
    }
    gate.report(
        7,
        ass_bad.is_empty() && verify_bad.is_empty(),
        "Ass by decomposition = Ass by witnesses; grid verification = brute force",
        format!(
            "{ideals} ideals ({} disagreements); {decomps} decompositions, {invalid} invalid ({} disagreements)",
            ass_bad.len(),
            verify_bad.len()
        ),
    );
}

fn criterion_8(gate: &mut Gate) {
    let skew: Vec<Monomial> = [[1, 0, 1, 0], [1, 0, 0, 1], [0, 1, 1, 0], [0, 1, 0, 1]]
        .iter()
        .map(|e| Monomial::new(e.to_vec()))
        .collect();
    let i = MonomialIdeal::normalize(skew, 4).unwrap();
    let absent = find_pretty_clean(&i).unwrap().is_none();
    let wide = i.insert_var(4);
    let mut consistent = true;
    let mut seen = BTreeSet::new();
    for e in 1..=2 {
        let inst = ScanInstance {
            ideal: wide.clone(),
            u: Monomial::power(4, e, 5),
        };
        let o = check_instance(0, &inst, CoefficientField::Rational, None);
        seen.insert(o.pretty_clean);
        consistent &= o.ok()
            && o.pretty_clean == Some((false, false))
            && o.passed.contains(&Check::PrettyCleanBiconditional);
    }
    gate.report(
        8,
        absent && consistent,
        "no pretty clean filtration of (x1x3, x1x4, x2x3, x2x4), nor of its extension by u",
        format!("absent: {absent}; scan outcomes (S/I, S/(I,u)): {seen:?}"),
    );
}

fn main() -> ExitCode {
    let mut gate = Gate { failures: 0 };

    let start = Instant::now();
    let sample = identity_sample();
    let squarefree = sample.len() - 300;
    let report = scan_instances(&sample, CoefficientField::Rational, Some(RUNTIME_BUDGET));
    let elapsed = start.elapsed();
    for o in &report.counterexamples {
        println!(
            "  counterexample: I = ({}), u = {}, {:?} {:?}",
            o.ideal, o.u, o.failed, o.error
        );
    }

    criteria_1_2(&mut gate, &report, squarefree, elapsed);
    criterion_3(&mut gate, &sample);
    criterion_4(&mut gate, &report);
    let mut filtrations = Vec::new();
    criterion_5(&mut gate, &mut filtrations);
    criterion_6(&mut gate, &report, &filtrations);
    criterion_7(&mut gate);
    criterion_8(&mut gate);

    if gate.failures == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria fail", gate.failures);
        ExitCode::FAILURE
    }
}
