//! Stanley spaces, Stanley decompositions of `S/I` and exact Stanley depth.
//!
//! Stanley depth is computed with the interval-partition method on the
//! characteristic poset `P = {a : 0 ≤ a ≤ g, x^a ∉ I}` for a bound
//! `g ≥ lcm_exponent(I)`. A partition of `P` into intervals `[a, d]` gives a
//! decomposition whose spaces have variable sets `Z_d = {i : d_i = g_i}`, and
//! `sdepth(S/I)` is the best achievable `min |Z_d|` over all partitions. This
//! method comes from the general literature on Stanley depth; the search here
//! is exhaustive, so the value is exact for the chosen `g`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::time::Instant;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::filtrations::PrimeFiltration;
use crate::monomial::{check_ambient, divisors, Monomial, MonomialIdeal};

/// The space `x^root · K[vars]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct StanleySpace {
    root: Monomial,
    vars: BTreeSet<usize>,
}

impl StanleySpace {
    pub fn new(root: Monomial, vars: impl IntoIterator<Item = usize>) -> Result<Self> {
        let vars: BTreeSet<usize> = vars.into_iter().collect();
        if let Some(&v) = vars.iter().find(|&&v| v >= root.ambient()) {
            return Err(Error::Malformed(format!(
                "variable x{} outside ambient {}",
                v + 1,
                root.ambient()
            )));
        }
        Ok(StanleySpace { root, vars })
    }

    pub fn root(&self) -> &Monomial {
        &self.root
    }

    pub fn vars(&self) -> &BTreeSet<usize> {
        &self.vars
    }

    pub fn dimension(&self) -> usize {
        self.vars.len()
    }

    pub fn ambient(&self) -> usize {
        self.root.ambient()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.contains_exps(m.exponents())
    }

    fn contains_exps(&self, exps: &[u32]) -> bool {
        self.root
            .exponents()
            .iter()
            .zip(exps)
            .enumerate()
            .all(|(i, (r, a))| {
                if self.vars.contains(&i) {
                    a >= r
                } else {
                    a == r
                }
            })
    }
}

impl fmt::Display for StanleySpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = self.vars.iter().map(|v| format!("x{}", v + 1)).collect();
        write!(f, "{} K[{}]", self.root, vars.join(", "))
    }
}

/// A claimed decomposition of `I^c` into Stanley spaces.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StanleyDecomposition {
    ideal: MonomialIdeal,
    spaces: Vec<StanleySpace>,
}

/// Why a decomposition fails to partition `I^c`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    /// A monomial of `I` lies in the given space.
    CoveredInIdeal { point: Monomial, space: usize },
    /// A monomial outside `I` lies in no space.
    Uncovered { point: Monomial },
    /// A monomial lies in two spaces.
    Overlap {
        point: Monomial,
        first: usize,
        second: usize,
    },
}

impl Violation {
    pub fn point(&self) -> &Monomial {
        match self {
            Violation::CoveredInIdeal { point, .. }
            | Violation::Uncovered { point }
            | Violation::Overlap { point, .. } => point,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CoveredInIdeal { point, space } => {
                write!(
                    f,
                    "{point} lies in the ideal but is covered by space {space}"
                )
            }
            Violation::Uncovered { point } => write!(f, "{point} is not covered"),
            Violation::Overlap {
                point,
                first,
                second,
            } => write!(f, "{point} is covered by spaces {first} and {second}"),
        }
    }
}

impl std::error::Error for Violation {}

impl StanleyDecomposition {
    pub fn new(ideal: MonomialIdeal, spaces: Vec<StanleySpace>) -> Result<Self> {
        for s in &spaces {
            check_ambient(ideal.ambient(), s.ambient())?;
        }
        Ok(StanleyDecomposition { ideal, spaces })
    }

    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }

    pub fn spaces(&self) -> &[StanleySpace] {
        &self.spaces
    }

    pub fn into_spaces(self) -> Vec<StanleySpace> {
        self.spaces
    }

    pub fn ambient(&self) -> usize {
        self.ideal.ambient()
    }

    /// Minimal dimension of a space. The unit ideal's empty decomposition
    /// reports the ambient dimension.
    pub fn sdepth(&self) -> Result<usize> {
        match self.spaces.iter().map(StanleySpace::dimension).min() {
            Some(d) => Ok(d),
            None if self.ideal.is_unit() => Ok(self.ambient()),
            None => Err(Error::Malformed(
                "empty decomposition of a nonzero quotient".into(),
            )),
        }
    }

    /// Check the partition property on the critical grid.
    ///
    /// Per coordinate `i` let `V_i` hold 0 and every exponent of `x_i` among
    /// generators and roots. Every membership predicate involved is of the
    /// form `a_i ≥ c` or `a_i = c` with `c ∈ V_i`, so the predicates are
    /// constant on each class represented by a point of `V_i ∪ (V_i + 1)`.
    pub fn verify(&self) -> Result<(), Violation> {
        let n = self.ambient();
        let mut values: Vec<BTreeSet<u32>> = vec![BTreeSet::from([0, 1]); n];
        let roots = self.spaces.iter().map(StanleySpace::root);
        for m in self.ideal.generators().iter().chain(roots) {
            for (i, &e) in m.exponents().iter().enumerate() {
                values[i].insert(e);
                values[i].insert(e + 1);
            }
        }
        let axes: Vec<Vec<u32>> = values
            .into_iter()
            .map(|v| v.into_iter().collect())
            .collect();
        let mut point = vec![0u32; n];
        self.check_grid(&axes, 0, &mut point)
    }

    fn check_grid(
        &self,
        axes: &[Vec<u32>],
        depth: usize,
        point: &mut Vec<u32>,
    ) -> Result<(), Violation> {
        if depth == axes.len() {
            return self.check_point(point);
        }
        for &v in &axes[depth] {
            point[depth] = v;
            self.check_grid(axes, depth + 1, point)?;
        }
        Ok(())
    }

    fn check_point(&self, exps: &[u32]) -> Result<(), Violation> {
        let point = || Monomial::new(exps.to_vec());
        let in_ideal = self.ideal.has(exps);
        let mut hit: Option<usize> = None;
        for (idx, s) in self.spaces.iter().enumerate() {
            if !s.contains_exps(exps) {
                continue;
            }
            if in_ideal {
                return Err(Violation::CoveredInIdeal {
                    point: point(),
                    space: idx,
                });
            }
            if let Some(first) = hit {
                return Err(Violation::Overlap {
                    point: point(),
                    first,
                    second: idx,
                });
            }
            hit = Some(idx);
        }
        if !in_ideal && hit.is_none() {
            return Err(Violation::Uncovered { point: point() });
        }
        Ok(())
    }

    /// Check every point of the box `[0, G + 1]`, `G` the componentwise max
    /// of all roots and generators. Slow; used to cross-check [`Self::verify`].
    pub fn verify_brute_force(&self) -> Result<(), Violation> {
        let n = self.ambient();
        let top = self
            .ideal
            .generators()
            .iter()
            .chain(self.spaces.iter().map(StanleySpace::root))
            .fold(Monomial::one(n), |acc, m| acc.lcm(m));
        let bound = Monomial::new(top.exponents().iter().map(|e| e + 1).collect());
        for p in divisors(&bound) {
            self.check_point(p.exponents())?;
        }
        Ok(())
    }
}

impl fmt::Display for StanleyDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.spaces {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Exact Stanley depth together with an optimal decomposition.
#[derive(Clone, Debug)]
pub struct SdepthCertificate {
    pub value: usize,
    pub witness: StanleyDecomposition,
    /// The box bound `g` of the characteristic poset.
    pub bound: Monomial,
    /// The intervals `[a, d]` of the optimal partition.
    pub partition: Vec<(Monomial, Monomial)>,
    /// `value + 1` was shown infeasible by exhausting the search, or is
    /// excluded by the maximal elements of the poset.
    pub exhausted_above: bool,
    /// Search nodes visited over all targets.
    pub nodes: u64,
}

/// Stanley depth of `S/I` with `g = lcm_exponent(I)` unless given.
pub fn sdepth(ideal: &MonomialIdeal, bound: Option<&Monomial>) -> Result<SdepthCertificate> {
    sdepth_with_deadline(ideal, bound, None)
}

pub fn sdepth_with_deadline(
    ideal: &MonomialIdeal,
    bound: Option<&Monomial>,
    deadline: Option<Instant>,
) -> Result<SdepthCertificate> {
    if ideal.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let lcm = ideal.lcm_exponent();
    let g = match bound {
        Some(g) => {
            check_ambient(ideal.ambient(), g.ambient())?;
            if !lcm.divides(g) {
                return Err(Error::precondition(format!(
                    "bound {g} does not dominate lcm exponent {lcm}"
                )));
            }
            g.clone()
        }
        None => lcm,
    };
    let poset = CharacteristicPoset::new(ideal, &g);
    let mut nodes = 0;
    for target in (0..=poset.upper_bound()).rev() {
        let mut search = PartitionSearch::new(&poset, target, deadline);
        let found = search.run()?;
        nodes += search.nodes;
        if let Some(intervals) = found {
            let spaces = poset.spaces(&intervals);
            let witness = StanleyDecomposition::new(ideal.clone(), spaces)?;
            witness
                .verify()
                .map_err(|v| Error::internal(format!("sdepth witness fails: {v}")))?;
            let partition = intervals
                .iter()
                .map(|&(a, d)| (poset.monomial(a), poset.monomial(d)))
                .collect();
            return Ok(SdepthCertificate {
                value: target,
                witness,
                bound: g,
                partition,
                exhausted_above: true,
                nodes,
            });
        }
    }
    Err(Error::internal("singleton partition always exists"))
}

struct CharacteristicPoset {
    bound: Monomial,
    elements: Vec<Vec<u32>>,
    /// `free[d]` = `|{i : d_i = g_i}|`
    free: Vec<usize>,
    /// Per bottom element, every interval `[a, d] ⊆ P` as (top, members).
    intervals: Vec<Vec<(usize, FixedBitSet)>>,
}

impl CharacteristicPoset {
    fn new(ideal: &MonomialIdeal, bound: &Monomial) -> Self {
        let mut elements: Vec<Vec<u32>> = divisors(bound)
            .filter(|m| !ideal.has(m.exponents()))
            .map(|m| m.exponents().to_vec())
            .collect();
        // a linear extension: every element after all elements below it
        elements.sort_by(|a, b| {
            let da: u64 = a.iter().map(|&e| e as u64).sum();
            let db: u64 = b.iter().map(|&e| e as u64).sum();
            da.cmp(&db).then_with(|| a.cmp(b))
        });
        let index: HashMap<&[u32], usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_slice(), i))
            .collect();
        let g = bound.exponents();
        let free = elements
            .iter()
            .map(|d| d.iter().zip(g).filter(|(x, y)| x == y).count())
            .collect();
        let size = elements.len();
        let intervals = elements
            .iter()
            .map(|a| {
                let mut out = Vec::new();
                let span = Monomial::new(g.iter().zip(a).map(|(g, a)| g - a).collect());
                for offset in divisors(&span) {
                    let d: Vec<u32> = a
                        .iter()
                        .zip(offset.exponents())
                        .map(|(x, y)| x + y)
                        .collect();
                    // P is a down-set of the box, so [a, d] ⊆ P iff d ∈ P
                    let Some(&top) = index.get(d.as_slice()) else {
                        continue;
                    };
                    let mut members = FixedBitSet::with_capacity(size);
                    for step in divisors(&offset) {
                        let c: Vec<u32> =
                            a.iter().zip(step.exponents()).map(|(x, y)| x + y).collect();
                        members.insert(index[c.as_slice()]);
                    }
                    out.push((top, members));
                }
                out
            })
            .collect();
        CharacteristicPoset {
            bound: bound.clone(),
            elements,
            free,
            intervals,
        }
    }

    fn len(&self) -> usize {
        self.elements.len()
    }

    fn monomial(&self, idx: usize) -> Monomial {
        Monomial::new(self.elements[idx].clone())
    }

    /// Every maximal element must top its own interval.
    fn upper_bound(&self) -> usize {
        (0..self.len())
            .filter(|&i| self.intervals[i].len() == 1)
            .map(|i| self.free[i])
            .min()
            .unwrap_or(self.bound.ambient())
    }

    fn spaces(&self, intervals: &[(usize, usize)]) -> Vec<StanleySpace> {
        let g = self.bound.exponents();
        let mut spaces = Vec::new();
        for &(a, d) in intervals {
            let (a, d) = (&self.elements[a], &self.elements[d]);
            let vars: BTreeSet<usize> = (0..g.len()).filter(|&i| d[i] == g[i]).collect();
            // roots vary over [a_i, d_i] in the coordinates outside vars
            let span = Monomial::new(
                (0..g.len())
                    .map(|i| if vars.contains(&i) { 0 } else { d[i] - a[i] })
                    .collect(),
            );
            for offset in divisors(&span) {
                let root = Monomial::new(
                    a.iter()
                        .zip(offset.exponents())
                        .map(|(x, y)| x + y)
                        .collect(),
                );
                spaces.push(StanleySpace {
                    root,
                    vars: vars.clone(),
                });
            }
        }
        spaces
    }
}

/// Decides whether `P` has a partition into intervals `[a, d]` with
/// `|Z_d| ≥ target`.
struct PartitionSearch<'p> {
    poset: &'p CharacteristicPoset,
    /// Per bottom element, admissible intervals, largest first.
    options: Vec<Vec<(usize, &'p FixedBitSet)>>,
    failed: HashSet<FixedBitSet>,
    chosen: Vec<(usize, usize)>,
    deadline: Option<Instant>,
    nodes: u64,
}

impl<'p> PartitionSearch<'p> {
    fn new(poset: &'p CharacteristicPoset, target: usize, deadline: Option<Instant>) -> Self {
        let options = poset
            .intervals
            .iter()
            .map(|list| {
                let mut opts: Vec<(usize, &FixedBitSet)> = list
                    .iter()
                    .filter(|(top, _)| poset.free[*top] >= target)
                    .map(|(top, m)| (*top, m))
                    .collect();
                opts.sort_by(|x, y| {
                    y.1.count_ones(..)
                        .cmp(&x.1.count_ones(..))
                        .then_with(|| poset.elements[x.0].cmp(&poset.elements[y.0]))
                });
                opts
            })
            .collect();
        PartitionSearch {
            poset,
            options,
            failed: HashSet::new(),
            chosen: Vec::new(),
            deadline,
            nodes: 0,
        }
    }

    fn run(&mut self) -> Result<Option<Vec<(usize, usize)>>> {
        let covered = FixedBitSet::with_capacity(self.poset.len());
        if !self.viable(&covered) {
            return Ok(None);
        }
        if self.extend(covered)? {
            Ok(Some(std::mem::take(&mut self.chosen)))
        } else {
            Ok(None)
        }
    }

    /// Each uncovered element still fits into some admissible interval.
    fn viable(&self, covered: &FixedBitSet) -> bool {
        covered
            .zeroes()
            .all(|b| self.options[b].iter().any(|(_, m)| m.is_disjoint(covered)))
    }

    fn extend(&mut self, covered: FixedBitSet) -> Result<bool> {
        // the first uncovered element in the linear extension must be the
        // bottom of its interval
        let Some(bottom) = covered.zeroes().next() else {
            return Ok(true);
        };
        self.nodes += 1;
        if self.nodes % 1024 == 1 && self.deadline.is_some_and(|d| Instant::now() > d) {
            return Err(Error::Timeout);
        }
        if self.failed.contains(&covered) {
            return Ok(false);
        }
        for i in 0..self.options[bottom].len() {
            let (top, members) = self.options[bottom][i];
            if !members.is_disjoint(&covered) {
                continue;
            }
            let mut next = covered.clone();
            next.union_with(members);
            if !self.viable(&next) {
                continue;
            }
            self.chosen.push((bottom, top));
            if self.extend(next)? {
                return Ok(true);
            }
            self.chosen.pop();
        }
        self.failed.insert(covered);
        Ok(false)
    }
}

/// One space per step: `z_j · K[complement of P_j]`.
pub fn decomposition_from_filtration(filtration: &PrimeFiltration) -> Result<StanleyDecomposition> {
    filtration
        .verify()
        .map_err(|e| Error::precondition(format!("invalid filtration: {e}")))?;
    let spaces = filtration
        .steps()
        .iter()
        .map(|s| StanleySpace {
            root: s.step.clone(),
            vars: s.prime.complement(),
        })
        .collect();
    let d = StanleyDecomposition::new(filtration.ideal().clone(), spaces)?;
    d.verify()
        .map_err(|v| Error::internal(format!("decomposition from filtration fails: {v}")))?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::normalize(gens.iter().map(|g| m(g)), n).unwrap()
    }

    fn space(root: &[u32], vars: &[usize]) -> StanleySpace {
        StanleySpace::new(m(root), vars.iter().copied()).unwrap()
    }

    #[test]
    fn sdepth_of_decompositions() {
        let i = ideal(2, &[&[1, 1]]);
        let d =
            StanleyDecomposition::new(i, vec![space(&[0, 0], &[1]), space(&[1, 0], &[0])]).unwrap();
        assert_eq!(d.sdepth().unwrap(), 1);
        let full =
            StanleyDecomposition::new(MonomialIdeal::zero(3), vec![space(&[0, 0, 0], &[0, 1, 2])])
                .unwrap();
        assert_eq!(full.sdepth().unwrap(), 3);
        let mixed =
            StanleyDecomposition::new(ideal(1, &[&[2]]), vec![space(&[0], &[]), space(&[1], &[0])])
                .unwrap();
        assert_eq!(mixed.sdepth().unwrap(), 0);
        let empty = StanleyDecomposition::new(ideal(1, &[&[1]]), vec![]).unwrap();
        assert!(matches!(empty.sdepth(), Err(Error::Malformed(_))));
        let unit = StanleyDecomposition::new(MonomialIdeal::unit(2), vec![]).unwrap();
        assert_eq!(unit.sdepth().unwrap(), 2);
    }

    #[test]
    fn verify_examples() {
        let i = ideal(2, &[&[1, 1]]);
        let good =
            StanleyDecomposition::new(i.clone(), vec![space(&[0, 0], &[1]), space(&[1, 0], &[0])])
                .unwrap();
        assert_eq!(good.verify(), Ok(()));

        let bad = StanleyDecomposition::new(i.clone(), vec![space(&[0, 0], &[0, 1])]).unwrap();
        let v = bad.verify().unwrap_err();
        assert!(matches!(v, Violation::CoveredInIdeal { .. }));
        assert_eq!(v.point(), &m(&[1, 1]));

        let short = StanleyDecomposition::new(i, vec![space(&[0, 0], &[0])]).unwrap();
        let v = short.verify().unwrap_err();
        assert_eq!(v, Violation::Uncovered { point: m(&[0, 1]) });
    }

    #[test]
    fn verify_detects_overlap() {
        let d = StanleyDecomposition::new(
            MonomialIdeal::zero(1),
            vec![space(&[0], &[0]), space(&[2], &[])],
        )
        .unwrap();
        assert!(matches!(d.verify(), Err(Violation::Overlap { .. })));
        assert!(matches!(
            d.verify_brute_force(),
            Err(Violation::Overlap { .. })
        ));
    }

    #[test]
    fn sdepth_examples() {
        let zero = sdepth(&MonomialIdeal::zero(3), None).unwrap();
        assert_eq!(zero.value, 3);
        assert_eq!(zero.witness.spaces(), &[space(&[0, 0, 0], &[0, 1, 2])]);

        assert_eq!(sdepth(&ideal(2, &[&[1, 1]]), None).unwrap().value, 1);
        let triangle = ideal(3, &[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(sdepth(&triangle, None).unwrap().value, 1);
        assert_eq!(
            sdepth(&MonomialIdeal::unit(2), None).unwrap_err(),
            Error::UnitIdeal
        );
    }

    #[test]
    fn sdepth_with_larger_bound_agrees() {
        let i = ideal(2, &[&[2, 0], &[1, 1]]);
        let a = sdepth(&i, None).unwrap();
        let b = sdepth(&i, Some(&m(&[3, 2]))).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(b.bound, m(&[3, 2]));
        assert!(sdepth(&i, Some(&m(&[1, 1]))).is_err());
    }

    #[test]
    fn sdepth_certificates_are_deterministic() {
        let i = ideal(3, &[&[1, 1, 0], &[0, 2, 1]]);
        let a = sdepth(&i, None).unwrap();
        let b = sdepth(&i, None).unwrap();
        assert_eq!(a.witness, b.witness);
        assert_eq!(a.partition, b.partition);
    }

    #[test]
    fn spaces_expand_intervals_outside_free_coordinates() {
        // I = (x1^2): poset {1, x1}, g = (2); the single interval [0, 1]
        // has Z = ∅ and yields two spaces.
        let c = sdepth(&ideal(1, &[&[2]]), None).unwrap();
        assert_eq!(c.value, 0);
        assert_eq!(c.witness.spaces().len(), 2);
    }
}
