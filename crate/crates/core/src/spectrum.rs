//! Associated primes, minimal primes and depth of `S/I`.
//!
//! `Ass(S/I)` is read off the irredundant irreducible decomposition of `I`.
//! An independent route, [`ass_by_witnesses`], collects every prime colon
//! `I : w` over the exponent box below `lcm_exponent(I)`.
//!
//! Depth is computed from multigraded Koszul homology of `x_1, ..., x_n` on
//! `S/I`. The homology `H_i(x; S/I)_a` agrees with `Tor_i(K, S/I)_a`, and the
//! Taylor resolution shows it can only be nonzero when `a` is the lcm of a set
//! of generators. Every such `a` lies below `lcm_exponent(I)`, so that box is
//! the enumeration bound.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
pub use crate::linalg::CoefficientField;
use crate::monomial::{divisors, Monomial, MonomialIdeal, MonomialPrime};

/// An irreducible monomial ideal `(x_i^{e_i} : i ∈ keys)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct IrreducibleComponent {
    ambient: usize,
    powers: BTreeMap<usize, u32>,
}

impl IrreducibleComponent {
    pub fn powers(&self) -> &BTreeMap<usize, u32> {
        &self.powers
    }

    pub fn radical(&self) -> MonomialPrime {
        MonomialPrime::new(self.powers.keys().copied(), self.ambient).expect("keys are in range")
    }

    pub fn to_ideal(&self) -> MonomialIdeal {
        MonomialIdeal::normalize(
            self.powers
                .iter()
                .map(|(&v, &e)| Monomial::power(v, e, self.ambient)),
            self.ambient,
        )
        .expect("ambient is consistent")
    }

    /// `self ⊆ other`.
    fn is_subset(&self, other: &IrreducibleComponent) -> bool {
        self.powers
            .iter()
            .all(|(v, e)| other.powers.get(v).is_some_and(|f| f <= e))
    }
}

impl fmt::Display for IrreducibleComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_ideal())
    }
}

/// Irredundant decomposition of a proper nonzero `I` into irreducible ideals.
pub fn irreducible_decomposition(ideal: &MonomialIdeal) -> Result<Vec<IrreducibleComponent>> {
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    let mut found = BTreeSet::new();
    split_generators(ideal, &mut found)?;
    let all: Vec<IrreducibleComponent> = found.into_iter().collect();
    let irredundant = all
        .iter()
        .filter(|c| !all.iter().any(|d| d != *c && d.is_subset(c)))
        .cloned()
        .collect();
    Ok(irredundant)
}

// I = (I, x_a^e) ∩ (I, m) whenever x_a^e·m is a generator with coprime parts.
fn split_generators(ideal: &MonomialIdeal, out: &mut BTreeSet<IrreducibleComponent>) -> Result<()> {
    let n = ideal.ambient();
    let mixed = ideal.generators().iter().find(|g| g.support().len() > 1);
    match mixed {
        None => {
            let powers = ideal
                .generators()
                .iter()
                .map(|g| {
                    let v = g.exponents().iter().position(|&e| e > 0).expect("not unit");
                    (v, g.exponent(v))
                })
                .collect();
            out.insert(IrreducibleComponent { ambient: n, powers });
            Ok(())
        }
        Some(g) => {
            let var = *g.support().first().expect("mixed generator");
            let pure = Monomial::power(var, g.exponent(var), n);
            let rest = g.div(&pure).expect("pure power divides its generator");
            split_generators(&ideal.add(&[pure])?, out)?;
            split_generators(&ideal.add(&[rest])?, out)
        }
    }
}

/// `Ass(S/I)`; `{(0)}` for the zero ideal.
pub fn ass(ideal: &MonomialIdeal) -> Result<BTreeSet<MonomialPrime>> {
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    if ideal.is_zero() {
        return Ok(BTreeSet::from([MonomialPrime::zero(ideal.ambient())]));
    }
    Ok(irreducible_decomposition(ideal)?
        .iter()
        .map(IrreducibleComponent::radical)
        .collect())
}

/// `Ass(S/I)` as the set of prime colons `I : w` with `w ≤ lcm_exponent(I)`.
pub fn ass_by_witnesses(ideal: &MonomialIdeal) -> Result<BTreeSet<MonomialPrime>> {
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let bound = ideal.lcm_exponent();
    let mut primes = BTreeSet::new();
    for w in divisors(&bound) {
        if ideal.has(w.exponents()) {
            continue;
        }
        if let Some(p) = ideal.colon(&w)?.as_prime() {
            primes.insert(p);
        }
    }
    Ok(primes)
}

/// Inclusion-minimal elements of `Ass(S/I)`.
pub fn min_primes(ideal: &MonomialIdeal) -> Result<BTreeSet<MonomialPrime>> {
    Ok(minimal_elements(&ass(ideal)?))
}

pub(crate) fn minimal_elements(primes: &BTreeSet<MonomialPrime>) -> BTreeSet<MonomialPrime> {
    primes
        .iter()
        .filter(|p| !primes.iter().any(|q| q.is_proper_subset(p)))
        .cloned()
        .collect()
}

/// `depth(S/I)` over the given field.
pub fn depth(ideal: &MonomialIdeal, field: CoefficientField) -> Result<usize> {
    depth_with_bound(ideal, field, &ideal.lcm_exponent())
}

/// Depth using every multidegree `a ≤ bound`. `bound` must dominate
/// `lcm_exponent(I)`.
pub fn depth_with_bound(
    ideal: &MonomialIdeal,
    field: CoefficientField,
    bound: &Monomial,
) -> Result<usize> {
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let n = ideal.ambient();
    if bound.ambient() != n || !ideal.lcm_exponent().divides(bound) {
        return Err(Error::precondition("bound must dominate lcm_exponent(I)"));
    }
    if n > 31 {
        return Err(Error::Malformed(
            "depth supports at most 31 variables".into(),
        ));
    }
    let top = divisors(bound)
        .map(|a| top_koszul_degree(ideal, field, &a))
        .max()
        .flatten()
        .expect("H_0 is nonzero in degree 0");
    Ok(n - top)
}

/// Largest `i` with `H_i(x; S/I)_a ≠ 0`, if any.
fn top_koszul_degree(
    ideal: &MonomialIdeal,
    field: CoefficientField,
    a: &Monomial,
) -> Option<usize> {
    let n = ideal.ambient();
    let exps = a.exponents();
    let supp: u32 = (0..n).filter(|&i| exps[i] > 0).fold(0, |m, i| m | 1 << i);

    // basis[i]: subsets F ⊆ supp(a) with |F| = i and x^{a - e_F} ∉ I
    let mut basis: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    let mut shifted = exps.to_vec();
    let mut subset: u32 = 0;
    loop {
        for (i, e) in shifted.iter_mut().enumerate() {
            *e = exps[i] - ((subset >> i) & 1);
        }
        if !ideal.has(&shifted) {
            basis[subset.count_ones() as usize].push(subset);
        }
        if subset == supp {
            break;
        }
        subset = (subset.wrapping_sub(supp)) & supp;
    }

    // rank[i] = rank of ∂_i : C_i → C_{i-1}
    let mut rank = vec![0usize; n + 2];
    for i in 1..=n {
        if basis[i].is_empty() || basis[i - 1].is_empty() {
            continue;
        }
        let rows: Vec<Vec<i64>> = basis[i - 1]
            .iter()
            .map(|&g| {
                basis[i]
                    .iter()
                    .map(|&f| {
                        let j = f ^ g;
                        if g & f != g || j.count_ones() != 1 {
                            return 0;
                        }
                        // sign (-1)^{#{k ∈ F : k < j}}
                        if (f & (j - 1)).count_ones() % 2 == 0 {
                            1
                        } else {
                            -1
                        }
                    })
                    .collect()
            })
            .collect();
        rank[i] = field.rank(&rows);
    }
    (0..=n)
        .rev()
        .find(|&i| basis[i].len() > rank[i] + rank[i + 1])
}
