//! Consistency checks, axis enumeration, the brute-force oracle, guiding
//! orders and the pairwise majority relation.

use std::collections::VecDeque;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::construction::{build_matrix, Rejection, RowOrigin};
use crate::pqtree::{PqTree, Reduction};
use crate::profile::{Axis, CandidateId, Profile, WeakOrder};
use crate::substructure::{axis_consistent, Model};

/// Largest candidate count [`brute_force_axes`] accepts by default.
pub const DEFAULT_BRUTE_FORCE_BOUND: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InconsistencyReason {
    /// A voter rules out every axis on its own.
    Rejected(Rejection),
    /// The constraint rows admit no common column order. `row` indexes the
    /// simplified matrix.
    NoFeasiblePermutation { row: usize, origin: RowOrigin },
}

impl InconsistencyReason {
    /// 0-based index of the voter blamed for the failure.
    pub fn voter(&self) -> usize {
        match self {
            InconsistencyReason::Rejected(r) => r.voter,
            InconsistencyReason::NoFeasiblePermutation { origin, .. } => origin.voter,
        }
    }
}

impl fmt::Display for InconsistencyReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InconsistencyReason::Rejected(r) => write!(f, "vote {} rejected: {}", r.voter + 1, r.reason),
            InconsistencyReason::NoFeasiblePermutation { origin, .. } => {
                write!(f, "no axis satisfies every constraint; first conflict from vote {}", origin.voter + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Consistent { axis: Axis, axis_count: BigUint },
    Inconsistent(InconsistencyReason),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyResult {
    pub model: Model,
    pub verdict: Verdict,
}

impl ConsistencyResult {
    pub fn is_consistent(&self) -> bool {
        matches!(self.verdict, Verdict::Consistent { .. })
    }
}

/// Builds the constraint matrix and reduces every row into a PQ-tree.
pub fn solve(profile: &Profile, model: Model) -> Result<PqTree, InconsistencyReason> {
    let matrix = build_matrix(profile, model).map_err(InconsistencyReason::Rejected)?.simplify_rows();
    let columns: Vec<CandidateId> = (0..profile.num_candidates()).collect();
    let mut tree = PqTree::universal(&columns).expect("profiles have at least one candidate");
    for (index, row) in matrix.rows().iter().enumerate() {
        let members: Vec<CandidateId> = row.ones().collect();
        match tree.reduce(&members).expect("rows only reference candidate columns") {
            Reduction::Feasible => {}
            Reduction::Infeasible { row } => {
                debug_assert_eq!(row, index);
                return Err(InconsistencyReason::NoFeasiblePermutation {
                    row,
                    origin: matrix.origins()[row],
                });
            }
        }
    }
    Ok(tree)
}

/// Decides whether `profile` is consistent under `model`, returning one
/// consistent axis and the number of consistent axes.
pub fn check(profile: &Profile, model: Model) -> ConsistencyResult {
    let verdict = match solve(profile, model) {
        Ok(tree) => {
            let axis = Axis::new(tree.one_frontier().expect("tree is feasible"))
                .expect("frontier is a permutation of the candidates");
            let axis_count = tree.count_frontiers().expect("tree is feasible");
            Verdict::Consistent { axis, axis_count }
        }
        Err(reason) => Verdict::Inconsistent(reason),
    };
    ConsistencyResult { model, verdict }
}

/// Up to `cap` consistent axes in the tree's enumeration order; empty when
/// the profile is inconsistent.
pub fn all_axes(profile: &Profile, model: Model, cap: usize) -> Vec<Axis> {
    match solve(profile, model) {
        Ok(tree) => tree
            .enumerate_frontiers(cap)
            .expect("tree is feasible")
            .into_iter()
            .map(|f| Axis::new(f).expect("frontier is a permutation of the candidates"))
            .collect(),
        Err(_) => Vec::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("brute force over {candidates}! axes exceeds the bound of {bound} candidates")]
pub struct TooManyCandidates {
    pub candidates: usize,
    pub bound: usize,
}

/// Every axis passing the direct substructure check, in lexicographic order
/// of candidate ids. Limited to [`DEFAULT_BRUTE_FORCE_BOUND`] candidates.
pub fn brute_force_axes(profile: &Profile, model: Model) -> Result<Vec<Axis>, TooManyCandidates> {
    brute_force_axes_bounded(profile, model, DEFAULT_BRUTE_FORCE_BOUND)
}

pub fn brute_force_axes_bounded(
    profile: &Profile,
    model: Model,
    bound: usize,
) -> Result<Vec<Axis>, TooManyCandidates> {
    let m = profile.num_candidates();
    if m > bound {
        return Err(TooManyCandidates { candidates: m, bound });
    }
    Ok((0..m)
        .permutations(m)
        .map(|p| Axis::new(p).expect("permutation"))
        .filter(|axis| axis_consistent(profile, axis, model).is_ok())
        .collect())
}

/// Builds a guiding order by repeatedly removing a candidate that some vote
/// ranks uniquely last among the remaining candidates; the smallest such id
/// is taken at each step. Returns the order most preferred first, or `None`
/// when at some step no vote has a unique last candidate.
pub fn guiding_order(profile: &Profile) -> Option<WeakOrder> {
    let m = profile.num_candidates();
    let mut remaining = vec![true; m];
    let mut removed = Vec::with_capacity(m);
    let levels: Vec<Vec<usize>> = profile.votes().iter().map(|v| v.order.levels()).collect();

    for _ in 0..m {
        let mut choice: Option<CandidateId> = None;
        for vote_levels in &levels {
            let mut worst: Option<(usize, CandidateId)> = None;
            let mut tied = false;
            for c in (0..m).filter(|&c| remaining[c]) {
                match worst {
                    Some((level, _)) if vote_levels[c] < level => {}
                    Some((level, _)) if vote_levels[c] == level => tied = true,
                    _ => {
                        worst = Some((vote_levels[c], c));
                        tied = false;
                    }
                }
            }
            if let (Some((_, c)), false) = (worst, tied) {
                choice = Some(choice.map_or(c, |best| best.min(c)));
            }
        }
        let c = choice?;
        remaining[c] = false;
        removed.push(c);
    }
    removed.reverse();
    Some(WeakOrder::total(&removed).expect("every candidate removed once"))
}

/// Pairwise strict-preference tallies, multiplicities included; voters
/// indifferent between a pair count for neither side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MajorityRelation {
    tallies: Vec<Vec<u64>>,
}

impl MajorityRelation {
    pub fn num_candidates(&self) -> usize {
        self.tallies.len()
    }

    /// Weight of voters strictly preferring `a` to `b`.
    pub fn tally(&self, a: CandidateId, b: CandidateId) -> u64 {
        self.tallies[a][b]
    }

    /// Strict majority: more weight prefers `a` to `b` than `b` to `a`.
    pub fn beats(&self, a: CandidateId, b: CandidateId) -> bool {
        self.tallies[a][b] > self.tallies[b][a]
    }

    pub fn is_acyclic(&self) -> bool {
        self.shortest_cycle().is_none()
    }

    /// A shortest cycle of the strict majority digraph, listed from its
    /// smallest candidate id along the edges (`c[0]` beats `c[1]`, ...).
    pub fn shortest_cycle(&self) -> Option<Vec<CandidateId>> {
        let m = self.num_candidates();
        let mut best: Option<Vec<CandidateId>> = None;
        for start in 0..m {
            let mut prev: Vec<Option<CandidateId>> = vec![None; m];
            let mut seen = vec![false; m];
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            let mut closing = None;
            'bfs: while let Some(u) = queue.pop_front() {
                for v in 0..m {
                    if !self.beats(u, v) {
                        continue;
                    }
                    if v == start {
                        closing = Some(u);
                        break 'bfs;
                    }
                    if !seen[v] {
                        seen[v] = true;
                        prev[v] = Some(u);
                        queue.push_back(v);
                    }
                }
            }
            if let Some(mut u) = closing {
                let mut cycle = vec![u];
                while let Some(p) = prev[u] {
                    cycle.push(p);
                    u = p;
                }
                cycle.reverse();
                if best.as_ref().is_none_or(|b| cycle.len() < b.len()) {
                    best = Some(cycle);
                }
            }
        }
        best
    }
}

pub fn majority_relation(profile: &Profile) -> MajorityRelation {
    let m = profile.num_candidates();
    let mut tallies = vec![vec![0u64; m]; m];
    for vote in profile.votes() {
        let levels = vote.order.levels();
        for a in 0..m {
            for b in 0..m {
                if levels[a] < levels[b] {
                    tallies[a][b] += vote.multiplicity;
                }
            }
        }
    }
    MajorityRelation { tallies }
}
