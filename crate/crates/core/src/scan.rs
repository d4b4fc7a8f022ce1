//! Batch checks of the identities around a regular monomial `u`.
//!
//! For each sampled pair `(I, u)` the harness checks
//! `sdepth(S/(I,u)) = sdepth(S/I) - 1`, `depth(S/(I,u)) = depth(S/I) - 1`,
//! that `S/I` is pretty clean exactly when `S/(I,u)` is, and the facts that
//! hang off every pretty clean filtration it finds. Instances are independent
//! and run in parallel; the report is sorted by instance index, so it does
//! not depend on scheduling.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filtrations::{
    ascend_modulo_regular, classify, descend_modulo_regular, find_pretty_clean_with_deadline,
    PrimeFiltration,
};
use crate::monomial::{Monomial, MonomialIdeal};
use crate::spectrum::{depth, CoefficientField};
use crate::stanley::{decomposition_from_filtration, sdepth_with_deadline};
use crate::transforms::{chain_modulo_regular_with_deadline, lift_modulo_regular};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMode {
    /// Every squarefree ideal in `n ≤ n_max` variables, embedded in `n + 1`
    /// variables with `u = x_{n+1}^e`, `e ≤ exponent_max`.
    ExhaustiveSquarefree,
    /// Seeded random ideals on at most `n_max` variables with exponents
    /// `≤ exponent_max`, and a random regular `u` on the remaining ones.
    RandomBox,
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub n_max: usize,
    pub exponent_max: u32,
    pub samples: usize,
    pub seed: u64,
    pub field: CoefficientField,
    pub mode: ScanMode,
    /// Per-instance budget; an instance over budget is reported, not fatal.
    pub timeout: Option<Duration>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            n_max: 3,
            exponent_max: 2,
            samples: 200,
            seed: 0,
            field: CoefficientField::Rational,
            mode: ScanMode::RandomBox,
            timeout: None,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_max == 0 || self.exponent_max == 0 {
            return Err(Error::Malformed(
                "n-max and exponent-max must be at least 1".into(),
            ));
        }
        if self.mode == ScanMode::ExhaustiveSquarefree && self.n_max > 4 {
            return Err(Error::Malformed(
                "exhaustive mode supports n-max ≤ 4".into(),
            ));
        }
        Ok(())
    }
}

/// One ideal with a monomial regular on it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScanInstance {
    pub ideal: MonomialIdeal,
    pub u: Monomial,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    SdepthIdentity,
    DepthIdentity,
    PrettyCleanBiconditional,
    SuppEqualsAss,
    StanleyWhenPrettyClean,
    DescendAscend,
    Constructions,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::SdepthIdentity,
        Check::DepthIdentity,
        Check::PrettyCleanBiconditional,
        Check::SuppEqualsAss,
        Check::StanleyWhenPrettyClean,
        Check::DescendAscend,
        Check::Constructions,
    ];
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceOutcome {
    pub index: usize,
    pub ideal: String,
    pub u: String,
    pub ambient: usize,
    pub sdepth: Option<(usize, usize)>,
    pub depth: Option<(usize, usize)>,
    /// Whether `S/I` and `S/(I,u)` were found pretty clean.
    pub pretty_clean: Option<(bool, bool)>,
    pub passed: Vec<Check>,
    pub failed: Vec<(Check, String)>,
    pub timed_out: bool,
    pub error: Option<String>,
}

impl InstanceOutcome {
    pub fn ok(&self) -> bool {
        self.failed.is_empty() && self.error.is_none()
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckTally {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub instances: usize,
    pub timeouts: usize,
    pub errors: usize,
    /// Instances where both `S/I` and `S/(I,u)` were found pretty clean, and
    /// where neither was.
    pub pretty_clean_both: usize,
    pub pretty_clean_neither: usize,
    pub tally: BTreeMap<Check, CheckTally>,
    /// Failing, erroring or timed-out instances, verbatim.
    pub counterexamples: Vec<InstanceOutcome>,
    pub elapsed_ms: u128,
}

impl ScanReport {
    /// No failed check and no error. Timeouts are listed but allowed.
    pub fn clean(&self) -> bool {
        self.errors == 0 && self.tally.values().all(|t| t.failed == 0)
    }

    pub fn passed(&self, check: Check) -> usize {
        self.tally.get(&check).map_or(0, |t| t.passed)
    }

    pub fn failed(&self, check: Check) -> usize {
        self.tally.get(&check).map_or(0, |t| t.failed)
    }
}

pub fn generate_instances(cfg: &ScanConfig) -> Result<Vec<ScanInstance>> {
    cfg.validate()?;
    match cfg.mode {
        ScanMode::ExhaustiveSquarefree => exhaustive_squarefree(cfg),
        ScanMode::RandomBox => random_box(cfg),
    }
}

/// All squarefree ideals (including zero) of `K[x_1..x_n]`, as ideals of
/// `K[x_1..x_n]` itself.
pub fn squarefree_ideals(n: usize) -> Vec<MonomialIdeal> {
    let subsets: Vec<u32> = (1..1u32 << n).collect();
    let mut seen = BTreeSet::new();
    for choice in 0u64..1 << subsets.len() {
        let gens = subsets
            .iter()
            .enumerate()
            .filter(|(i, _)| choice >> i & 1 == 1)
            .map(|(_, &s)| Monomial::from_vars((0..n).filter(|&v| s >> v & 1 == 1), n));
        seen.insert(MonomialIdeal::normalize(gens, n).expect("ambient is consistent"));
    }
    seen.into_iter().collect()
}

fn exhaustive_squarefree(cfg: &ScanConfig) -> Result<Vec<ScanInstance>> {
    let mut out = Vec::new();
    for n in 1..=cfg.n_max {
        for ideal in squarefree_ideals(n) {
            let ideal = ideal.insert_var(n);
            for e in 1..=cfg.exponent_max {
                out.push(ScanInstance {
                    ideal: ideal.clone(),
                    u: Monomial::power(n, e, n + 1),
                });
            }
        }
    }
    Ok(out)
}

fn random_box(cfg: &ScanConfig) -> Result<Vec<ScanInstance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(cfg.samples);
    while out.len() < cfg.samples {
        let ambient = rng.gen_range(2..=cfg.n_max + 1);
        let mut vars: Vec<usize> = (0..ambient).collect();
        vars.shuffle(&mut rng);
        let m = rng.gen_range(1..=cfg.n_max.min(ambient - 1));
        let (inner, outer) = vars.split_at(m);

        let count = rng.gen_range(0..=4);
        let gens = (0..count).map(|_| {
            let mut e = vec![0; ambient];
            for &v in inner {
                e[v] = rng.gen_range(0..=cfg.exponent_max);
            }
            Monomial::new(e)
        });
        let gens: Vec<Monomial> = gens.filter(|g| !g.is_one()).collect();
        let ideal = MonomialIdeal::normalize(gens, ambient)?;

        let mut e = vec![0; ambient];
        for &v in outer {
            if rng.gen_bool(0.5) {
                e[v] = rng.gen_range(1..=cfg.exponent_max);
            }
        }
        if e.iter().all(|&x| x == 0) {
            e[outer[rng.gen_range(0..outer.len())]] = rng.gen_range(1..=cfg.exponent_max);
        }
        out.push(ScanInstance {
            ideal,
            u: Monomial::new(e),
        });
    }
    Ok(out)
}

pub fn run_scan(cfg: &ScanConfig) -> Result<ScanReport> {
    let instances = generate_instances(cfg)?;
    Ok(scan_instances(&instances, cfg.field, cfg.timeout))
}

pub fn scan_instances(
    instances: &[ScanInstance],
    field: CoefficientField,
    timeout: Option<Duration>,
) -> ScanReport {
    let start = Instant::now();
    let mut outcomes: Vec<InstanceOutcome> = instances
        .par_iter()
        .enumerate()
        .map(|(i, inst)| check_instance(i, inst, field, timeout.map(|t| Instant::now() + t)))
        .collect();
    outcomes.sort_by_key(|o| o.index);

    let mut tally: BTreeMap<Check, CheckTally> = Check::ALL
        .iter()
        .map(|&c| (c, CheckTally::default()))
        .collect();
    let mut report = ScanReport {
        instances: outcomes.len(),
        timeouts: 0,
        errors: 0,
        pretty_clean_both: 0,
        pretty_clean_neither: 0,
        tally: BTreeMap::new(),
        counterexamples: Vec::new(),
        elapsed_ms: 0,
    };
    for o in outcomes {
        for c in &o.passed {
            tally.get_mut(c).expect("all checks tallied").passed += 1;
        }
        for (c, _) in &o.failed {
            tally.get_mut(c).expect("all checks tallied").failed += 1;
        }
        report.timeouts += usize::from(o.timed_out);
        report.errors += usize::from(o.error.is_some());
        report.pretty_clean_both += usize::from(o.pretty_clean == Some((true, true)));
        report.pretty_clean_neither += usize::from(o.pretty_clean == Some((false, false)));
        if !o.ok() || o.timed_out {
            report.counterexamples.push(o);
        }
    }
    report.tally = tally;
    report.elapsed_ms = start.elapsed().as_millis();
    report
}

/// Run every check on one instance.
pub fn check_instance(
    index: usize,
    inst: &ScanInstance,
    field: CoefficientField,
    deadline: Option<Instant>,
) -> InstanceOutcome {
    let mut out = InstanceOutcome {
        index,
        ideal: inst.ideal.to_string(),
        u: inst.u.to_string(),
        ambient: inst.ideal.ambient(),
        sdepth: None,
        depth: None,
        pretty_clean: None,
        passed: Vec::new(),
        failed: Vec::new(),
        timed_out: false,
        error: None,
    };
    match run_checks(inst, field, deadline, &mut out) {
        Ok(()) => {}
        Err(Error::Timeout) => out.timed_out = true,
        Err(e) => out.error = Some(e.to_string()),
    }
    out
}

fn record(out: &mut InstanceOutcome, check: Check, ok: bool, detail: impl FnOnce() -> String) {
    if ok {
        if !out.passed.contains(&check) {
            out.passed.push(check);
        }
    } else {
        out.passed.retain(|&c| c != check);
        out.failed.push((check, detail()));
    }
}

fn run_checks(
    inst: &ScanInstance,
    field: CoefficientField,
    deadline: Option<Instant>,
    out: &mut InstanceOutcome,
) -> Result<()> {
    let ideal = &inst.ideal;
    let u = &inst.u;
    if !ideal.is_regular(u)? {
        return Err(Error::NotRegular(u.to_string()));
    }
    let reduced = ideal.add(std::slice::from_ref(u))?;

    let before = sdepth_with_deadline(ideal, None, deadline)?;
    let after = sdepth_with_deadline(&reduced, None, deadline)?;
    out.sdepth = Some((before.value, after.value));
    record(
        out,
        Check::SdepthIdentity,
        after.value + 1 == before.value,
        || format!("sdepth {} -> {}", before.value, after.value),
    );

    let d_before = depth(ideal, field)?;
    let d_after = depth(&reduced, field)?;
    out.depth = Some((d_before, d_after));
    record(out, Check::DepthIdentity, d_after + 1 == d_before, || {
        format!("depth {d_before} -> {d_after}")
    });

    let chain = chain_modulo_regular_with_deadline(ideal, u, deadline)?;
    let lifted = lift_modulo_regular(&after.witness, ideal, u)?;
    let chain_ok = chain.decomposition.verify().is_ok()
        && chain.decomposition.sdepth()? + 1 >= before.value
        && lifted.verify().is_ok()
        && lifted.sdepth()? > after.value;
    record(out, Check::Constructions, chain_ok, || {
        "chain or lift construction out of bounds".into()
    });

    let f = find_pretty_clean_with_deadline(ideal, deadline)?;
    let g = find_pretty_clean_with_deadline(&reduced, deadline)?;
    out.pretty_clean = Some((f.is_some(), g.is_some()));
    record(
        out,
        Check::PrettyCleanBiconditional,
        f.is_some() == g.is_some(),
        || format!("pretty clean: S/I {}, S/(I,u) {}", f.is_some(), g.is_some()),
    );

    for (filtration, sd, dp) in [(&f, before.value, d_before), (&g, after.value, d_after)] {
        if let Some(filtration) = filtration {
            check_filtration(filtration, sd, dp, out)?;
        }
    }
    if let Some(f) = &f {
        let down = descend_modulo_regular(f, u)?;
        let back = ascend_modulo_regular(&down, ideal, u)?;
        let ok = classify(&down)?.pretty_clean
            && classify(&back)?.pretty_clean
            && back.support() == f.support();
        record(out, Check::DescendAscend, ok, || {
            "descend/ascend round trip".into()
        });
        check_filtration(&down, after.value, d_after, out)?;
    }
    if let Some(g) = &g {
        let up = ascend_modulo_regular(g, ideal, u)?;
        let again = descend_modulo_regular(&up, u)?;
        let ok = classify(&up)?.pretty_clean
            && classify(&again)?.pretty_clean
            && again.support() == g.support();
        record(out, Check::DescendAscend, ok, || {
            "ascend/descend round trip".into()
        });
        check_filtration(&up, before.value, d_before, out)?;
    }
    Ok(())
}

/// Supp = Ass, and the induced decomposition is valid with sdepth ≥ depth.
fn check_filtration(
    f: &PrimeFiltration,
    sdepth: usize,
    depth: usize,
    out: &mut InstanceOutcome,
) -> Result<()> {
    let report = classify(f)?;
    record(
        out,
        Check::SuppEqualsAss,
        report.pretty_clean && report.ass_equals_support,
        || format!("support differs from Ass for ({})", f.ideal()),
    );
    let d = decomposition_from_filtration(f)?;
    let sd = d.sdepth()?;
    record(
        out,
        Check::StanleyWhenPrettyClean,
        d.verify().is_ok() && sd >= depth && sdepth >= depth && sd <= sdepth,
        || format!("sdepth {sdepth} (from filtration {sd}) vs depth {depth}"),
    );
    Ok(())
}
