//! Surgeries on Stanley decompositions along reduction modulo a regular
//! monomial `u`.
//!
//! Adjoining and dropping a variable change the ambient: [`adjoin_variable`]
//! inserts a fresh coordinate at position `k`, [`restrict_drop_variable`]
//! deletes coordinate `k`. Every constructor re-verifies its output.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::monomial::{check_ambient, Monomial, MonomialIdeal};
use crate::stanley::{sdepth_with_deadline, SdepthCertificate, StanleyDecomposition, StanleySpace};

fn shift_up(vars: &BTreeSet<usize>, k: usize) -> BTreeSet<usize> {
    vars.iter()
        .map(|&v| if v >= k { v + 1 } else { v })
        .collect()
}

fn require_valid(d: &StanleyDecomposition, what: &str) -> Result<()> {
    d.verify()
        .map_err(|v| Error::precondition(format!("{what} is not a Stanley decomposition: {v}")))
}

fn ensure_valid(d: &StanleyDecomposition, what: &str) -> Result<()> {
    d.verify()
        .map_err(|v| Error::internal(format!("{what} fails verification: {v}")))
}

/// `⊕ u_i K[Z_i]` over `T/L` becomes `⊕ u_i K[Z_i, x_k]` over `S/LS`, where
/// `x_k` is a new variable inserted at position `k`.
pub fn adjoin_variable(d: &StanleyDecomposition, k: usize) -> Result<StanleyDecomposition> {
    if k > d.ambient() {
        return Err(Error::precondition(format!(
            "cannot insert x{} into {} variables",
            k + 1,
            d.ambient()
        )));
    }
    require_valid(d, "input")?;
    let spaces = d
        .spaces()
        .iter()
        .map(|s| {
            let mut vars = shift_up(s.vars(), k);
            vars.insert(k);
            StanleySpace::new(s.root().insert_var(k), vars)
        })
        .collect::<Result<Vec<_>>>()?;
    let out = StanleyDecomposition::new(d.ideal().insert_var(k), spaces)?;
    ensure_valid(&out, "adjoined decomposition")?;
    Ok(out)
}

/// Keep the spaces whose root avoids `x_k`, drop `x_k` from their variables
/// and delete the coordinate. Requires `I = LS` with `L` free of `x_k`.
pub fn restrict_drop_variable(d: &StanleyDecomposition, k: usize) -> Result<StanleyDecomposition> {
    if k >= d.ambient() {
        return Err(Error::precondition(format!("no variable x{}", k + 1)));
    }
    let ideal = d.ideal().remove_var(k)?;
    require_valid(d, "input")?;
    let spaces = d
        .spaces()
        .iter()
        .filter(|s| s.root().exponent(k) == 0)
        .map(|s| {
            let vars = s
                .vars()
                .iter()
                .filter(|&&v| v != k)
                .map(|&v| if v > k { v - 1 } else { v });
            StanleySpace::new(s.root().remove_var(k), vars)
        })
        .collect::<Result<Vec<_>>>()?;
    let out = StanleyDecomposition::new(ideal, spaces)?;
    ensure_valid(&out, "restricted decomposition")?;
    Ok(out)
}

/// A decomposition of `T/L` read as one of `S/(LS, x_k)`, with `x_k`
/// inserted at position `k` and in no space.
pub fn insert_killed_variable(d: &StanleyDecomposition, k: usize) -> Result<StanleyDecomposition> {
    if k > d.ambient() {
        return Err(Error::precondition(format!(
            "cannot insert x{} into {} variables",
            k + 1,
            d.ambient()
        )));
    }
    let n = d.ambient() + 1;
    let ideal = d.ideal().insert_var(k).add(&[Monomial::var(k, n)])?;
    let spaces = d
        .spaces()
        .iter()
        .map(|s| StanleySpace::new(s.root().insert_var(k), shift_up(s.vars(), k)))
        .collect::<Result<Vec<_>>>()?;
    let out = StanleyDecomposition::new(ideal, spaces)?;
    ensure_valid(&out, "decomposition with killed variable")?;
    Ok(out)
}

/// `I = I_0 ⊂ I_1 ⊂ ... ⊂ I_r = S` with `I_j = (I_{j-1}, z_j)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CyclicChain {
    ideals: Vec<MonomialIdeal>,
    steps: Vec<Monomial>,
}

impl CyclicChain {
    pub fn new(base: MonomialIdeal, steps: Vec<Monomial>) -> Result<Self> {
        let mut ideals = vec![base];
        for z in &steps {
            let prev = ideals.last().expect("nonempty");
            if prev.contains(z)? {
                return Err(Error::precondition(format!("{z} already lies in ({prev})")));
            }
            ideals.push(prev.add(std::slice::from_ref(z))?);
        }
        if !ideals.last().expect("nonempty").is_unit() {
            return Err(Error::precondition("chain does not reach S"));
        }
        Ok(CyclicChain { ideals, steps })
    }

    /// Check an explicitly given chain of ideals against its step monomials.
    pub fn from_ideals(ideals: Vec<MonomialIdeal>, steps: Vec<Monomial>) -> Result<Self> {
        if ideals.len() != steps.len() + 1 {
            return Err(Error::precondition("need one more ideal than steps"));
        }
        let built = Self::new(ideals[0].clone(), steps)?;
        if built.ideals != ideals {
            return Err(Error::precondition(
                "some quotient I_j / I_(j-1) is not generated by its step monomial",
            ));
        }
        Ok(built)
    }

    pub fn ideals(&self) -> &[MonomialIdeal] {
        &self.ideals
    }

    pub fn steps(&self) -> &[Monomial] {
        &self.steps
    }

    /// `L_j = I_{j-1} : z_j`, so that `I_j / I_{j-1} ≅ S/L_j` shifted by `z_j`.
    pub fn annihilators(&self) -> Result<Vec<MonomialIdeal>> {
        self.steps
            .iter()
            .zip(&self.ideals)
            .map(|(z, prev)| prev.colon(z))
            .collect()
    }
}

/// Glue decompositions of the cyclic quotients `S/L_j` into one of `S/I`,
/// shifting the roots of part `j` by `z_j`.
pub fn assemble_from_chain(
    chain: &CyclicChain,
    parts: &[StanleyDecomposition],
) -> Result<StanleyDecomposition> {
    if parts.len() != chain.steps.len() {
        return Err(Error::precondition(format!(
            "{} parts for {} chain steps",
            parts.len(),
            chain.steps.len()
        )));
    }
    let annihilators = chain.annihilators()?;
    let mut spaces = Vec::new();
    for (j, ((part, ann), z)) in parts
        .iter()
        .zip(&annihilators)
        .zip(&chain.steps)
        .enumerate()
    {
        if part.ideal() != ann {
            return Err(Error::precondition(format!(
                "part {} decomposes ({}), but the quotient is S/({ann})",
                j + 1,
                part.ideal()
            )));
        }
        require_valid(part, &format!("part {}", j + 1))?;
        for s in part.spaces() {
            spaces.push(StanleySpace::new(
                s.root().mul(z)?,
                s.vars().iter().copied(),
            )?);
        }
    }
    let out = StanleyDecomposition::new(chain.ideals[0].clone(), spaces)?;
    ensure_valid(&out, "assembled decomposition")?;
    Ok(out)
}

fn require_regular(ideal: &MonomialIdeal, u: &Monomial) -> Result<()> {
    check_ambient(ideal.ambient(), u.ambient())?;
    if u.is_one() {
        return Err(Error::precondition("u must not be 1"));
    }
    if !ideal.is_regular(u)? {
        return Err(Error::NotRegular(u.to_string()));
    }
    Ok(())
}

/// The chain from `(I, u)` to `S` and the decomposition of `S/(I, u)` it
/// carries, built from an optimal decomposition of `S/I`.
#[derive(Clone, Debug)]
pub struct ChainConstruction {
    pub chain: CyclicChain,
    /// The variable whose exponent drops at each step.
    pub step_vars: Vec<usize>,
    pub source: SdepthCertificate,
    pub decomposition: StanleyDecomposition,
}

pub fn chain_modulo_regular(ideal: &MonomialIdeal, u: &Monomial) -> Result<ChainConstruction> {
    chain_modulo_regular_with_deadline(ideal, u, None)
}

pub fn chain_modulo_regular_with_deadline(
    ideal: &MonomialIdeal,
    u: &Monomial,
    deadline: Option<Instant>,
) -> Result<ChainConstruction> {
    require_regular(ideal, u)?;
    ideal.split(u)?;
    let n = ideal.ambient();

    // (I, x^b) ⊂ (I, x^{b - e_k}), lowering variables in ascending order
    let mut b = u.exponents().to_vec();
    let mut steps = Vec::new();
    let mut step_vars = Vec::new();
    for k in 0..n {
        while b[k] > 0 {
            b[k] -= 1;
            steps.push(Monomial::new(b.clone()));
            step_vars.push(k);
        }
    }
    let chain = CyclicChain::new(ideal.add(std::slice::from_ref(u))?, steps)?;

    let source = sdepth_with_deadline(ideal, None, deadline)?;
    let mut per_var: BTreeMap<usize, StanleyDecomposition> = BTreeMap::new();
    for &k in &step_vars {
        if let Entry::Vacant(slot) = per_var.entry(k) {
            let restricted = restrict_drop_variable(&source.witness, k)?;
            slot.insert(insert_killed_variable(&restricted, k)?);
        }
    }
    let parts: Vec<StanleyDecomposition> = step_vars.iter().map(|k| per_var[k].clone()).collect();
    let decomposition = assemble_from_chain(&chain, &parts)?;
    if decomposition.sdepth()? + 1 < source.value {
        return Err(Error::internal(format!(
            "chain decomposition has sdepth {} < {} - 1",
            decomposition.sdepth()?,
            source.value
        )));
    }
    Ok(ChainConstruction {
        chain,
        step_vars,
        source,
        decomposition,
    })
}

/// Decomposition of `S/I` from one of `S/(I, u)`: keep the spaces rooted in
/// `S′`, and give each `Z' ∩ inner ∪ outer` as variables.
pub fn lift_modulo_regular(
    dprime: &StanleyDecomposition,
    ideal: &MonomialIdeal,
    u: &Monomial,
) -> Result<StanleyDecomposition> {
    require_regular(ideal, u)?;
    let split = ideal.split(u)?;
    let reduced = ideal.add(std::slice::from_ref(u))?;
    if dprime.ideal() != &reduced {
        return Err(Error::precondition(format!(
            "decomposition is of ({}), expected ({reduced})",
            dprime.ideal()
        )));
    }
    require_valid(dprime, "input")?;
    let mut spaces = Vec::new();
    for s in dprime.spaces() {
        if s.root().support().is_subset(&split.inner) {
            // the space meets (u) only if every variable of u is free in it
            if split.outer.is_subset(s.vars()) {
                return Err(Error::internal(format!(
                    "space {s} contains a multiple of {u}"
                )));
            }
            let vars = s
                .vars()
                .intersection(&split.inner)
                .chain(split.outer.iter())
                .copied();
            spaces.push(StanleySpace::new(s.root().clone(), vars)?);
        } else {
            let outer_part = Monomial::new(
                (0..ideal.ambient())
                    .map(|i| {
                        if split.outer.contains(&i) {
                            s.root().exponent(i)
                        } else {
                            0
                        }
                    })
                    .collect(),
            );
            if u.divides(&outer_part) {
                return Err(Error::internal(format!(
                    "dropped root {} lies in (u)",
                    s.root()
                )));
            }
        }
    }
    let out = StanleyDecomposition::new(ideal.clone(), spaces)?;
    ensure_valid(&out, "lifted decomposition")?;
    if out.sdepth()? < dprime.sdepth()? + 1 {
        return Err(Error::internal("lift did not raise the Stanley depth"));
    }
    Ok(out)
}

/// Both Stanley depths around a regular monomial.
#[derive(Clone, Debug)]
pub struct TheoremMainReport {
    pub before: SdepthCertificate,
    pub after: SdepthCertificate,
    /// `sdepth(S/(I, u)) = sdepth(S/I) - 1`.
    pub holds: bool,
}

pub fn check_theorem_main(ideal: &MonomialIdeal, u: &Monomial) -> Result<TheoremMainReport> {
    check_theorem_main_with_deadline(ideal, u, None)
}

pub fn check_theorem_main_with_deadline(
    ideal: &MonomialIdeal,
    u: &Monomial,
    deadline: Option<Instant>,
) -> Result<TheoremMainReport> {
    require_regular(ideal, u)?;
    let before = sdepth_with_deadline(ideal, None, deadline)?;
    let after = sdepth_with_deadline(&ideal.add(std::slice::from_ref(u))?, None, deadline)?;
    let holds = after.value + 1 == before.value;
    Ok(TheoremMainReport {
        before,
        after,
        holds,
    })
}
