//! Prime filtrations of `S/I`, pretty clean and clean filtrations, and the
//! passage of pretty clean filtrations between `S/I` and `S/(I, u)` for a
//! regular monomial `u`.
//!
//! A filtration is stored as its base ideal `I = I_0` and the steps
//! `(z_j, P_j)` with `I_j = (I_{j-1}, z_j)` and `I_{j-1} : z_j = P_j`. The
//! quotient `I_j / I_{j-1}` is then `S/P_j` shifted by the exponent of `z_j`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::monomial::{check_ambient, divisors, Monomial, MonomialIdeal, MonomialPrime};
use crate::spectrum::{ass, min_primes};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FiltrationStep {
    pub step: Monomial,
    pub prime: MonomialPrime,
}

impl FiltrationStep {
    pub fn new(step: Monomial, prime: MonomialPrime) -> Self {
        FiltrationStep { step, prime }
    }
}

impl fmt::Display for FiltrationStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = self
            .prime
            .vars()
            .iter()
            .map(|v| format!("x{}", v + 1))
            .collect();
        let vars = if vars.is_empty() {
            "0".to_string()
        } else {
            vars.join(", ")
        };
        write!(f, "{} : {}", self.step, vars)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PrimeFiltration {
    ideal: MonomialIdeal,
    steps: Vec<FiltrationStep>,
}

/// The first step at which a filtration breaks.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiltrationViolation {
    /// Zero-based step index; `steps.len()` when the chain stops short of `S`.
    pub step: usize,
    pub reason: String,
}

impl fmt::Display for FiltrationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}", self.step + 1, self.reason)
    }
}

impl std::error::Error for FiltrationViolation {}

impl PrimeFiltration {
    pub fn new(ideal: MonomialIdeal, steps: Vec<FiltrationStep>) -> Result<Self> {
        for s in &steps {
            check_ambient(ideal.ambient(), s.step.ambient())?;
            check_ambient(ideal.ambient(), s.prime.ambient())?;
        }
        Ok(PrimeFiltration { ideal, steps })
    }

    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }

    pub fn steps(&self) -> &[FiltrationStep] {
        &self.steps
    }

    pub fn ambient(&self) -> usize {
        self.ideal.ambient()
    }

    /// `I_0 ⊂ I_1 ⊂ ... ⊂ I_r`.
    pub fn chain(&self) -> Result<Vec<MonomialIdeal>> {
        let mut out = vec![self.ideal.clone()];
        for s in &self.steps {
            let next = out
                .last()
                .expect("nonempty")
                .add(std::slice::from_ref(&s.step))?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn verify(&self) -> Result<(), FiltrationViolation> {
        let mut current = self.ideal.clone();
        for (j, s) in self.steps.iter().enumerate() {
            let fail = |reason: String| FiltrationViolation { step: j, reason };
            if current.has(s.step.exponents()) {
                return Err(fail(format!("{} already lies in ({current})", s.step)));
            }
            let colon = current.colon(&s.step).map_err(|e| fail(e.to_string()))?;
            if colon != s.prime.to_ideal() {
                return Err(fail(format!(
                    "({current}) : {} = ({colon}), not {}",
                    s.step, s.prime
                )));
            }
            current = current
                .add(std::slice::from_ref(&s.step))
                .map_err(|e| fail(e.to_string()))?;
        }
        if !current.is_unit() {
            return Err(FiltrationViolation {
                step: self.steps.len(),
                reason: format!("chain ends at ({current}), not S"),
            });
        }
        Ok(())
    }

    pub fn support(&self) -> BTreeSet<MonomialPrime> {
        self.steps.iter().map(|s| s.prime.clone()).collect()
    }

    /// The filtration `I_j ⊂ ... ⊂ I_r` of `S/I_j`.
    pub fn suffix(&self, j: usize) -> Result<PrimeFiltration> {
        let chain = self.chain()?;
        Ok(PrimeFiltration {
            ideal: chain[j].clone(),
            steps: self.steps[j..].to_vec(),
        })
    }
}

impl fmt::Display for PrimeFiltration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiltrationReport {
    pub support: BTreeSet<MonomialPrime>,
    pub pretty_clean: bool,
    pub clean: bool,
    pub ass_equals_support: bool,
}

/// No earlier prime is strictly contained in a later one.
pub fn is_pretty_clean_order(primes: &[MonomialPrime]) -> bool {
    primes
        .iter()
        .enumerate()
        .all(|(i, p)| primes[i + 1..].iter().all(|q| !p.is_proper_subset(q)))
}

pub fn classify(filtration: &PrimeFiltration) -> Result<FiltrationReport> {
    filtration
        .verify()
        .map_err(|v| Error::precondition(format!("invalid filtration: {v}")))?;
    let primes: Vec<MonomialPrime> = filtration.steps.iter().map(|s| s.prime.clone()).collect();
    let support = filtration.support();
    let pretty_clean = is_pretty_clean_order(&primes);
    let (clean, ass_equals_support) = if filtration.ideal.is_unit() {
        (true, true)
    } else {
        (
            support == min_primes(&filtration.ideal)?,
            support == ass(&filtration.ideal)?,
        )
    };
    if pretty_clean && !ass_equals_support {
        return Err(Error::internal(format!(
            "pretty clean filtration of ({}) with support different from Ass",
            filtration.ideal
        )));
    }
    Ok(FiltrationReport {
        support,
        pretty_clean,
        clean,
        ass_equals_support,
    })
}

/// Search for a pretty clean filtration with step monomials in the box
/// `z ≤ lcm_exponent(I) + 1`.
///
/// Completeness is only claimed inside that box. A pretty clean tail of
/// `S/J` has support `Ass(S/J)`, so a step `(z, P)` from `J` to `J' = (J, z)`
/// can be the start of one only if `Ass(S/J') ⊆ Ass(S/J)` and no prime of
/// `Ass(S/J')` strictly contains `P`; feasibility then depends on `J` alone,
/// which is what the failure memo keys on.
pub fn find_pretty_clean(ideal: &MonomialIdeal) -> Result<Option<PrimeFiltration>> {
    find_pretty_clean_with_deadline(ideal, None)
}

pub fn find_pretty_clean_with_deadline(
    ideal: &MonomialIdeal,
    deadline: Option<Instant>,
) -> Result<Option<PrimeFiltration>> {
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let bound = Monomial::new(
        ideal
            .lcm_exponent()
            .exponents()
            .iter()
            .map(|e| e + 1)
            .collect(),
    );
    let mut candidates: Vec<Monomial> = divisors(&bound).collect();
    candidates.sort_by(|a, b| b.degree().cmp(&a.degree()).then_with(|| a.cmp(b)));
    let mut search = PrettyCleanSearch {
        candidates,
        ass_cache: HashMap::new(),
        failed: HashSet::new(),
        deadline,
        nodes: 0,
    };
    let Some(steps) = search.search(ideal)? else {
        return Ok(None);
    };
    let f = PrimeFiltration::new(ideal.clone(), steps)?;
    let report = classify(&f)?;
    if !report.pretty_clean {
        return Err(Error::internal(
            "search returned a filtration that is not pretty clean",
        ));
    }
    Ok(Some(f))
}

struct PrettyCleanSearch {
    candidates: Vec<Monomial>,
    ass_cache: HashMap<MonomialIdeal, BTreeSet<MonomialPrime>>,
    failed: HashSet<MonomialIdeal>,
    deadline: Option<Instant>,
    nodes: u64,
}

impl PrettyCleanSearch {
    fn ass_of(&mut self, ideal: &MonomialIdeal) -> Result<BTreeSet<MonomialPrime>> {
        if let Some(a) = self.ass_cache.get(ideal) {
            return Ok(a.clone());
        }
        let a = ass(ideal)?;
        self.ass_cache.insert(ideal.clone(), a.clone());
        Ok(a)
    }

    fn search(&mut self, current: &MonomialIdeal) -> Result<Option<Vec<FiltrationStep>>> {
        if current.is_unit() {
            return Ok(Some(Vec::new()));
        }
        if self.failed.contains(current) {
            return Ok(None);
        }
        self.nodes += 1;
        if self.nodes % 256 == 1 && self.deadline.is_some_and(|d| Instant::now() > d) {
            return Err(Error::Timeout);
        }
        let here = self.ass_of(current)?;
        let tops: BTreeSet<MonomialPrime> = here
            .iter()
            .filter(|p| !here.iter().any(|q| p.is_proper_subset(q)))
            .cloned()
            .collect();
        let mut tried: HashSet<MonomialIdeal> = HashSet::new();
        for idx in 0..self.candidates.len() {
            let z = self.candidates[idx].clone();
            if current.has(z.exponents()) {
                continue;
            }
            let Some(prime) = current.colon(&z)?.as_prime() else {
                continue;
            };
            if !tops.contains(&prime) {
                continue;
            }
            let next = current.add(std::slice::from_ref(&z))?;
            if !tried.insert(next.clone()) {
                continue;
            }
            if !next.is_unit() {
                let after = self.ass_of(&next)?;
                if !after.is_subset(&here) || after.iter().any(|q| prime.is_proper_subset(q)) {
                    continue;
                }
            }
            if let Some(mut rest) = self.search(&next)? {
                rest.insert(0, FiltrationStep::new(z, prime));
                return Ok(Some(rest));
            }
        }
        self.failed.insert(current.clone());
        Ok(None)
    }
}

/// The clean filtration `(u) ⊂ (u / x_{i_d}) ⊂ ... ⊂ (1)` peeling one
/// variable factor of `u` at a time, highest index first.
pub fn clean_filtration_principal(u: &Monomial, ambient: usize) -> Result<PrimeFiltration> {
    check_ambient(ambient, u.ambient())?;
    if u.is_one() {
        return Err(Error::precondition("u must not be 1"));
    }
    let ideal = MonomialIdeal::normalize([u.clone()], ambient)?;
    let factors: Vec<usize> = u
        .exponents()
        .iter()
        .enumerate()
        .flat_map(|(v, &e)| std::iter::repeat_n(v, e as usize))
        .collect();
    let d = factors.len();
    let mut steps = Vec::with_capacity(d);
    for k in 1..=d {
        let mut z = vec![0u32; ambient];
        for &v in &factors[..d - k] {
            z[v] += 1;
        }
        steps.push(FiltrationStep::new(
            Monomial::new(z),
            MonomialPrime::new([factors[d - k]], ambient)?,
        ));
    }
    let f = PrimeFiltration::new(ideal.clone(), steps)?;
    if f.verify().is_ok() {
        return Ok(f);
    }
    find_pretty_clean(&ideal)?
        .ok_or_else(|| Error::internal(format!("no clean filtration found for ({u})")))
}

fn require_pretty_clean(f: &PrimeFiltration) -> Result<()> {
    if !classify(f)?.pretty_clean {
        return Err(Error::precondition("filtration is not pretty clean"));
    }
    Ok(())
}

fn require_regular(ideal: &MonomialIdeal, u: &Monomial) -> Result<()> {
    if u.is_one() {
        return Err(Error::precondition("u must not be 1"));
    }
    if !ideal.is_regular(u)? {
        return Err(Error::NotRegular(u.to_string()));
    }
    Ok(())
}

/// Pretty clean filtration of `S/(I, u)` refining `(I_j, u)` along the clean
/// filtration of `S/(u)`.
pub fn descend_modulo_regular(f: &PrimeFiltration, u: &Monomial) -> Result<PrimeFiltration> {
    let n = f.ambient();
    check_ambient(n, u.ambient())?;
    require_pretty_clean(f)?;
    require_regular(f.ideal(), u)?;
    if let Some(s) = f.steps.iter().find(|s| !s.step.is_coprime(u)) {
        return Err(Error::precondition(format!(
            "step monomial {} is not coprime to {u}",
            s.step
        )));
    }
    let principal = clean_filtration_principal(u, n)?;
    let mut steps = Vec::new();
    for s in &f.steps {
        if !s.prime.vars().iter().all(|&v| u.exponent(v) == 0) {
            return Err(Error::internal(format!(
                "{} meets the support of {u}",
                s.prime
            )));
        }
        for p in principal.steps() {
            let var = *p
                .prime
                .vars()
                .first()
                .expect("principal primes are variables");
            steps.push(FiltrationStep::new(
                s.step.mul(&p.step)?,
                s.prime.with_var(var),
            ));
        }
    }
    let out = PrimeFiltration::new(f.ideal().add(std::slice::from_ref(u))?, steps)?;
    out.verify()
        .map_err(|v| Error::internal(format!("descended filtration invalid: {v}")))?;
    if !classify(&out)?.pretty_clean {
        return Err(Error::internal("descended filtration is not pretty clean"));
    }
    Ok(out)
}

/// Pretty clean filtration of `S/I` from one of `S/(I, u)`: keep the steps
/// whose monomial lives in `S′ = K[inner]` and contract their primes.
pub fn ascend_modulo_regular(
    fprime: &PrimeFiltration,
    ideal: &MonomialIdeal,
    u: &Monomial,
) -> Result<PrimeFiltration> {
    check_ambient(ideal.ambient(), fprime.ambient())?;
    require_regular(ideal, u)?;
    let split = ideal.split(u)?;
    let reduced = ideal.add(std::slice::from_ref(u))?;
    if fprime.ideal() != &reduced {
        return Err(Error::precondition(format!(
            "filtration is of ({}), expected ({reduced})",
            fprime.ideal()
        )));
    }
    require_pretty_clean(fprime)?;
    let mut steps = Vec::new();
    let mut current = ideal.clone();
    for s in &fprime.steps {
        if !s.step.support().is_subset(&split.inner) {
            continue;
        }
        let prime = s.prime.restrict_to(&split.inner);
        if s.prime.vars().len() != prime.vars().len() + 1 {
            return Err(Error::internal(format!(
                "kept step {} has prime {} without exactly one variable of u",
                s.step, s.prime
            )));
        }
        if current.colon(&s.step)? != prime.to_ideal() {
            return Err(Error::internal(format!(
                "({current}) : {} is not the contracted prime {prime}",
                s.step
            )));
        }
        current = current.add(std::slice::from_ref(&s.step))?;
        steps.push(FiltrationStep::new(s.step.clone(), prime));
    }
    let out = PrimeFiltration::new(ideal.clone(), steps)?;
    out.verify()
        .map_err(|v| Error::internal(format!("ascended filtration invalid: {v}")))?;
    if !classify(&out)?.pretty_clean {
        return Err(Error::internal("ascended filtration is not pretty clean"));
    }
    Ok(out)
}

/// Pretty clean filtration of `S/(u_1, ..., u_k)` for pairwise coprime
/// non-unit monomials, built by repeated descent from `S/(0)`.
pub fn pretty_clean_regular_sequence(us: &[Monomial], ambient: usize) -> Result<PrimeFiltration> {
    for (i, u) in us.iter().enumerate() {
        check_ambient(ambient, u.ambient())?;
        if u.is_one() {
            return Err(Error::precondition(
                "1 cannot be part of a regular sequence",
            ));
        }
        if let Some(v) = us[..i].iter().find(|v| !v.is_coprime(u)) {
            return Err(Error::NotRegular(format!(
                "{u} shares a variable with {v}; not a regular sequence"
            )));
        }
    }
    let mut f = PrimeFiltration::new(
        MonomialIdeal::zero(ambient),
        vec![FiltrationStep::new(
            Monomial::one(ambient),
            MonomialPrime::zero(ambient),
        )],
    )?;
    for u in us {
        f = descend_modulo_regular(&f, u)?;
    }
    Ok(f)
}
