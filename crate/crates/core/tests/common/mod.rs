//! Brute-force oracles and generators shared by the integration tests.
//!
//! The oracles work on raw exponent vectors and share no code with the
//! library beyond the types needed to compare results.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;
use stanley_core::stanley::StanleySpace;
use stanley_core::{Monomial, MonomialIdeal, MonomialPrime};

pub fn m(e: &[u32]) -> Monomial {
    Monomial::new(e.to_vec())
}

pub fn ideal(n: usize, gens: &[&[u32]]) -> MonomialIdeal {
    MonomialIdeal::normalize(gens.iter().map(|g| m(g)), n).unwrap()
}

pub fn prime(n: usize, vars: &[usize]) -> MonomialPrime {
    MonomialPrime::new(vars.iter().copied(), n).unwrap()
}

pub fn raw(i: &MonomialIdeal) -> Vec<Vec<u32>> {
    i.generators()
        .iter()
        .map(|g| g.exponents().to_vec())
        .collect()
}

pub fn le(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn in_ideal(gens: &[Vec<u32>], a: &[u32]) -> bool {
    gens.iter().any(|g| le(g, a))
}

/// All exponent vectors `0 ≤ a ≤ bound`.
pub fn box_points(bound: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &b in bound {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=b).map(move |e| {
                    let mut q = p.clone();
                    q.push(e);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn lcm(gens: &[Vec<u32>], n: usize) -> Vec<u32> {
    (0..n)
        .map(|i| gens.iter().map(|g| g[i]).max().unwrap_or(0))
        .collect()
}

fn minimal(gens: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    for g in &gens {
        if !gens.iter().any(|h| h != g && le(h, g)) && !out.contains(g) {
            out.push(g.clone());
        }
    }
    out.sort();
    out
}

/// Minimal generators of `I : x^w`.
pub fn colon(gens: &[Vec<u32>], w: &[u32]) -> Vec<Vec<u32>> {
    minimal(
        gens.iter()
            .map(|g| g.iter().zip(w).map(|(a, b)| a.saturating_sub(*b)).collect())
            .collect(),
    )
}

/// `Ass(S/I)` as the prime colons `I : w` over `w ≤ lcm`.
pub fn ass_oracle(gens: &[Vec<u32>], n: usize) -> BTreeSet<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for w in box_points(&lcm(gens, n)) {
        if in_ideal(gens, &w) {
            continue;
        }
        let c = colon(gens, &w);
        let vars: Option<BTreeSet<usize>> = c
            .iter()
            .map(|g| {
                let s: Vec<usize> = (0..n).filter(|&i| g[i] > 0).collect();
                (s.len() == 1 && g[s[0]] == 1).then(|| s[0])
            })
            .collect();
        if let Some(v) = vars {
            out.insert(v);
        }
    }
    out
}

pub fn prime_sets(ps: &BTreeSet<MonomialPrime>) -> BTreeSet<BTreeSet<usize>> {
    ps.iter().map(|p| p.vars().clone()).collect()
}

fn rank_mod(mut rows: Vec<Vec<i64>>, p: i64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c].rem_euclid(p) != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = pow_mod(rows[rank][c].rem_euclid(p), p - 2, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c].rem_euclid(p) != 0 {
                let f = rows[r][c].rem_euclid(p) * inv % p;
                let pivot_row = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: i64, mut e: i64, p: i64) -> i64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Depth of `S/I` from the Koszul complex on `x_1..x_n` over `F_32003`,
/// evaluated in every multidegree of the box `≤ lcm + 1`.
pub fn depth_oracle(gens: &[Vec<u32>], n: usize) -> usize {
    const P: i64 = 32003;
    let bound: Vec<u32> = lcm(gens, n).iter().map(|e| e + 1).collect();
    let mut top = 0;
    for a in box_points(&bound) {
        let sub = |f: &[usize]| -> Vec<u32> {
            let mut b = a.clone();
            for &j in f {
                b[j] -= 1;
            }
            b
        };
        let support: Vec<usize> = (0..n).filter(|&i| a[i] > 0).collect();
        // basis[i]: i-subsets F of supp(a) with x^{a - e_F} ∉ I
        let mut basis: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n + 2];
        for mask in 0u32..1 << support.len() {
            let f: Vec<usize> = (0..support.len())
                .filter(|&k| mask >> k & 1 == 1)
                .map(|k| support[k])
                .collect();
            if !in_ideal(gens, &sub(&f)) {
                basis[f.len()].push(f);
            }
        }
        // rank of d_i : C_i -> C_{i-1}
        let rank = |i: usize| -> usize {
            if i == 0 || basis[i].is_empty() || basis[i - 1].is_empty() {
                return 0;
            }
            let index: HashMap<&Vec<usize>, usize> = basis[i - 1]
                .iter()
                .enumerate()
                .map(|(k, f)| (f, k))
                .collect();
            let rows = basis[i]
                .iter()
                .map(|f| {
                    let mut row = vec![0i64; basis[i - 1].len()];
                    for pos in 0..f.len() {
                        let mut g = f.clone();
                        g.remove(pos);
                        if let Some(&k) = index.get(&g) {
                            row[k] = if pos % 2 == 0 { 1 } else { P - 1 };
                        }
                    }
                    row
                })
                .collect();
            rank_mod(rows, P)
        };
        for (i, b) in basis.iter().enumerate().take(n + 1) {
            if b.len() > rank(i) + rank(i + 1) {
                top = top.max(i);
            }
        }
    }
    n - top
}

/// Stanley depth from an exhaustive interval-partition DP over the
/// characteristic poset below `lcm`. Only for posets of at most 24 points.
pub fn sdepth_oracle(gens: &[Vec<u32>], n: usize) -> usize {
    let g = lcm(gens, n);
    let points: Vec<Vec<u32>> = box_points(&g)
        .into_iter()
        .filter(|a| !in_ideal(gens, a))
        .collect();
    assert!(points.len() <= 24, "poset too large for the oracle");
    // every interval [a, d] as (mask, value)
    let mut intervals: Vec<(u32, usize)> = Vec::new();
    for a in &points {
        for d in &points {
            if !le(a, d) {
                continue;
            }
            let mask = points
                .iter()
                .enumerate()
                .filter(|(_, p)| le(a, p) && le(p, d))
                .fold(0u32, |m, (i, _)| m | 1 << i);
            let value = (0..n).filter(|&i| d[i] == g[i]).count();
            intervals.push((mask, value));
        }
    }
    let full = (1u32 << points.len()) - 1;
    let mut memo: HashMap<u32, usize> = HashMap::new();
    best(full, &intervals, &mut memo)
}

fn best(mask: u32, intervals: &[(u32, usize)], memo: &mut HashMap<u32, usize>) -> usize {
    if mask == 0 {
        return usize::MAX;
    }
    if let Some(&v) = memo.get(&mask) {
        return v;
    }
    let low = mask & mask.wrapping_neg();
    let mut value = 0;
    for &(iv, v) in intervals {
        if iv & low != 0 && iv & !mask == 0 && v > value {
            value = value.max(v.min(best(mask & !iv, intervals, memo)));
        }
    }
    memo.insert(mask, value);
    value
}

/// Partition check of `I^c` over the box `[0, G + 1]`.
pub fn verify_oracle(gens: &[Vec<u32>], n: usize, spaces: &[StanleySpace]) -> bool {
    let mut g = lcm(gens, n);
    for s in spaces {
        for (i, e) in s.root().exponents().iter().enumerate() {
            g[i] = g[i].max(*e);
        }
    }
    let bound: Vec<u32> = g.iter().map(|e| e + 1).collect();
    box_points(&bound).iter().all(|a| {
        let hits = spaces
            .iter()
            .filter(|s| {
                let r = s.root().exponents();
                (0..n).all(|i| a[i] >= r[i] && (s.vars().contains(&i) || a[i] == r[i]))
            })
            .count();
        if in_ideal(gens, a) {
            hits == 0
        } else {
            hits == 1
        }
    })
}

/// Exhaustive search for a pretty clean filtration with steps in the box
/// `≤ lcm + 1`, memoised on the current ideal and the primes used so far.
pub fn pretty_clean_oracle(gens: &[Vec<u32>], n: usize) -> bool {
    let bound: Vec<u32> = lcm(gens, n).iter().map(|e| e + 1).collect();
    let candidates = box_points(&bound);
    let mut memo = HashMap::new();
    pc_search(
        minimal(gens.to_vec()),
        Vec::new(),
        n,
        &candidates,
        &mut memo,
    )
}

type PcMemo = HashMap<(Vec<Vec<u32>>, Vec<BTreeSet<usize>>), bool>;

fn pc_search(
    gens: Vec<Vec<u32>>,
    used: Vec<BTreeSet<usize>>,
    n: usize,
    candidates: &[Vec<u32>],
    memo: &mut PcMemo,
) -> bool {
    if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
        return true;
    }
    let key = (gens.clone(), used.clone());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut found = false;
    for z in candidates {
        if in_ideal(&gens, z) {
            continue;
        }
        let c = colon(&gens, z);
        let Some(p) = c
            .iter()
            .map(|g| {
                let s: Vec<usize> = (0..n).filter(|&i| g[i] > 0).collect();
                (s.len() == 1 && g[s[0]] == 1).then(|| s[0])
            })
            .collect::<Option<BTreeSet<usize>>>()
        else {
            continue;
        };
        // an earlier prime may not be strictly contained in a later one
        if used.iter().any(|q| q.is_subset(&p) && q != &p) {
            continue;
        }
        let mut next = gens.clone();
        next.push(z.clone());
        let mut used_next = used.clone();
        if !used_next.contains(&p) {
            used_next.push(p);
            used_next.sort();
        }
        if pc_search(minimal(next), used_next, n, candidates, memo) {
            found = true;
            break;
        }
    }
    memo.insert(key, found);
    found
}

/// A monomial ideal in `n ∈ [1, n_max]` variables with exponents `≤ e_max`.
pub fn ideal_strategy(
    n_max: usize,
    e_max: u32,
    gens_max: usize,
) -> impl Strategy<Value = MonomialIdeal> {
    (1..=n_max).prop_flat_map(move |n| {
        prop::collection::vec(prop::collection::vec(0..=e_max, n), 0..=gens_max).prop_map(
            move |gs| {
                let gs = gs
                    .into_iter()
                    .filter(|g| g.iter().any(|&e| e > 0))
                    .map(Monomial::new);
                MonomialIdeal::normalize(gs, n).unwrap()
            },
        )
    })
}

/// An ideal together with a monomial regular on it: `u` lives on variables
/// the generators avoid, and the ambient has at least one such variable.
pub fn regular_pair_strategy(
    n_max: usize,
    e_max: u32,
    gens_max: usize,
) -> impl Strategy<Value = (MonomialIdeal, Monomial)> {
    (1..=n_max, 1..=2usize).prop_flat_map(move |(inner, outer)| {
        let n = inner + outer;
        (
            prop::collection::vec(prop::collection::vec(0..=e_max, inner), 0..=gens_max),
            prop::collection::vec(0..=e_max, outer),
            0..outer,
        )
            .prop_map(move |(gs, mut ue, forced)| {
                if ue.iter().all(|&e| e == 0) {
                    ue[forced] = 1;
                }
                let gs = gs
                    .into_iter()
                    .filter(|g| g.iter().any(|&e| e > 0))
                    .map(|mut g| {
                        g.resize(n, 0);
                        Monomial::new(g)
                    });
                let ideal = MonomialIdeal::normalize(gs, n).unwrap();
                let mut u = vec![0; inner];
                u.extend(ue);
                (ideal, Monomial::new(u))
            })
    })
}
