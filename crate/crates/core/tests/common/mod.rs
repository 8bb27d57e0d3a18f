//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the fast paths of the library beyond reading profiles and orders.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use weakpeak::{Axis, Profile, WeakOrder};

/// Levels of `order` read along `axis`, lower is better.
pub fn levels_on(order: &WeakOrder, axis: &[usize]) -> Vec<usize> {
    let levels = order.levels();
    axis.iter().map(|&c| levels[c]).collect()
}

fn triples(n: usize) -> impl Iterator<Item = [usize; 3]> {
    (0..n).flat_map(move |i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| [i, j, k])))
}

/// Smallest position triple `i < j < k` with `i` and `k` both strictly better than `j`.
pub fn literal_v_valley(levels: &[usize]) -> Option<[usize; 3]> {
    triples(levels.len()).find(|&[i, j, k]| levels[i] < levels[j] && levels[k] < levels[j])
}

/// Smallest position triple with `x > y ~ z` or `x ~ y < z`.
pub fn literal_nonpeak_plateau(levels: &[usize]) -> Option<[usize; 3]> {
    triples(levels.len()).find(|&[i, j, k]| {
        (levels[i] < levels[j] && levels[j] == levels[k]) || (levels[i] == levels[j] && levels[k] < levels[j])
    })
}

pub fn literal_plateau(levels: &[usize]) -> Option<[usize; 2]> {
    (0..levels.len().saturating_sub(1)).find(|&i| levels[i] == levels[i + 1]).map(|i| [i, i + 1])
}

/// Strictly improving up to a unique peak, strictly worsening after it.
pub fn segment_single_peaked(levels: &[usize]) -> bool {
    let best = *levels.iter().min().unwrap();
    let peaks: Vec<usize> = (0..levels.len()).filter(|&i| levels[i] == best).collect();
    if peaks.len() != 1 {
        return false;
    }
    let p = peaks[0];
    levels[..=p].windows(2).all(|w| w[0] > w[1]) && levels[p..].windows(2).all(|w| w[0] < w[1])
}

/// The top tier forms a contiguous block, strictly improving before it and
/// strictly worsening after it.
pub fn segment_single_plateaued(levels: &[usize]) -> bool {
    let best = *levels.iter().min().unwrap();
    let top: Vec<usize> = (0..levels.len()).filter(|&i| levels[i] == best).collect();
    let (lo, hi) = (top[0], *top.last().unwrap());
    hi - lo + 1 == top.len()
        && levels[..=lo].windows(2).all(|w| w[0] > w[1])
        && levels[hi..].windows(2).all(|w| w[0] < w[1])
}

/// Some linear extension of `order` is single-peaked on `axis`.
pub fn some_extension_single_peaked(order: &WeakOrder, axis: &[usize]) -> bool {
    fn extend(tiers: &[Vec<usize>], acc: &mut Vec<usize>, axis: &[usize]) -> bool {
        let Some((tier, rest)) = tiers.split_first() else {
            let mut rank = vec![0; acc.len()];
            for (r, &c) in acc.iter().enumerate() {
                rank[c] = r;
            }
            let levels: Vec<usize> = axis.iter().map(|&c| rank[c]).collect();
            return segment_single_peaked(&levels);
        };
        let base = acc.len();
        for perm in permutations(tier) {
            acc.extend(perm);
            if extend(rest, acc, axis) {
                return true;
            }
            acc.truncate(base);
        }
        false
    }
    extend(order.tiers(), &mut Vec::new(), axis)
}

/// All orderings of `items`, plain recursion.
pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, x);
            out.push(tail);
        }
    }
    out
}

/// Every column order of `0..num_columns` in which each row is contiguous,
/// found by backtracking with per-row open/closed tracking.
pub fn c1p_orders(num_columns: usize, rows: &[Vec<usize>]) -> BTreeSet<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum State {
        Unseen,
        Open,
        Closed,
    }
    let member: Vec<Vec<bool>> = rows
        .iter()
        .map(|r| {
            let mut m = vec![false; num_columns];
            for &c in r {
                m[c] = true;
            }
            m
        })
        .collect();

    fn go(
        member: &[Vec<bool>],
        states: &mut Vec<State>,
        used: &mut Vec<bool>,
        prefix: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        let n = used.len();
        if prefix.len() == n {
            out.insert(prefix.clone());
            return;
        }
        for c in 0..n {
            if used[c] {
                continue;
            }
            let saved = states.clone();
            let mut ok = true;
            for (r, row) in member.iter().enumerate() {
                states[r] = match (row[c], states[r]) {
                    (true, State::Closed) => {
                        ok = false;
                        break;
                    }
                    (true, _) => State::Open,
                    (false, State::Open) => State::Closed,
                    (false, s) => s,
                };
            }
            if ok {
                used[c] = true;
                prefix.push(c);
                go(member, states, used, prefix, out);
                prefix.pop();
                used[c] = false;
            }
            *states = saved;
        }
    }

    let mut out = BTreeSet::new();
    go(
        &member,
        &mut vec![State::Unseen; rows.len()],
        &mut vec![false; num_columns],
        &mut Vec::new(),
        &mut out,
    );
    out
}

/// Every axis on which each vote passes the literal definition of `model`:
/// extension-based for "exist", segment-based for the other two.
pub fn definitional_axes(profile: &Profile, model: weakpeak::Model) -> BTreeSet<Axis> {
    let m = profile.num_candidates();
    let ids: Vec<usize> = (0..m).collect();
    permutations(&ids)
        .into_iter()
        .filter(|axis| {
            profile.votes().iter().all(|v| {
                let levels = levels_on(&v.order, axis);
                match model {
                    weakpeak::Model::ExistSP => some_extension_single_peaked(&v.order, axis),
                    weakpeak::Model::SinglePlateaued => segment_single_plateaued(&levels),
                    weakpeak::Model::SinglePeaked => segment_single_peaked(&levels),
                }
            })
        })
        .map(|a| Axis::new(a).unwrap())
        .collect()
}

/// A random row set over `num_columns` columns. With `planted`, every row is
/// an interval of a hidden permutation, so the matrix is feasible.
pub fn random_rows<R: Rng>(
    rng: &mut R,
    num_columns: usize,
    max_rows: usize,
    planted: bool,
) -> Vec<Vec<usize>> {
    let mut hidden: Vec<usize> = (0..num_columns).collect();
    hidden.shuffle(rng);
    let num_rows = rng.random_range(0..=max_rows);
    (0..num_rows)
        .map(|_| {
            let mut row: Vec<usize> = if planted {
                let lo = rng.random_range(0..num_columns);
                let hi = rng.random_range(lo..num_columns);
                hidden[lo..=hi].to_vec()
            } else {
                (0..num_columns).filter(|_| rng.random_bool(0.4)).collect()
            };
            row.sort_unstable();
            row
        })
        .collect()
}

/// Whether `row` is contiguous in `order`.
pub fn is_interval(order: &[usize], row: &[usize]) -> bool {
    let positions: Vec<usize> =
        order.iter().enumerate().filter(|(_, c)| row.contains(c)).map(|(i, _)| i).collect();
    positions.is_empty() || positions.last().unwrap() - positions[0] + 1 == positions.len()
}

pub fn data(name: &str) -> String {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn data_path(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub const TWO_VOTES_EXIST_MATRIX: &str = "\
a b c d e
1 0 1 0 0
1 0 1 0 0
1 1 1 0 0
1 1 1 1 1
1 0 0 0 0
1 1 0 0 0
1 1 1 0 0
1 1 1 1 1
";

pub const TWO_VOTES_PLATEAU_MATRIX: &str = "\
a b c d e
1 0 1 0 0
1 0 1 0 0
1 1 1 0 0
1 1 1 1 1
1 1 1 0 1
1 1 1 1 1
1 1 1 1 0
1 0 0 0 0
1 1 0 0 0
1 1 1 0 0
1 1 1 1 1
1 1 1 0 1
1 1 1 1 1
1 1 1 1 0
";
