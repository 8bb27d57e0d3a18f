//! Forbidden substructures and direct verification of a profile against a
//! given axis.
//!
//! A vote is existentially single-peaked on an axis iff it has no v-valley,
//! single-plateaued iff it has neither a v-valley nor a nonpeak plateau, and
//! single-peaked iff it has neither a v-valley nor a plateau. Every scan here
//! works on the vote's preference levels read along the axis and runs in
//! linear time; when several witnesses exist the lexicographically smallest
//! position tuple is reported.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::profile::{Axis, CandidateId, Profile, WeakOrder};

/// Variant of single-peakedness for weak orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Model {
    /// Existentially single-peaked: some linear extension of every vote is
    /// single-peaked.
    #[serde(rename = "exist")]
    ExistSP,
    /// The top tier forms a plateau; strictly monotone on both sides of it.
    #[serde(rename = "plateau")]
    SinglePlateaued,
    /// A unique peak; strictly monotone on both sides of it.
    #[serde(rename = "sp")]
    SinglePeaked,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::ExistSP, Model::SinglePlateaued, Model::SinglePeaked];

    /// Short name used on the command line and in JSON output.
    pub fn as_str(self) -> &'static str {
        match self {
            Model::ExistSP => "exist",
            Model::SinglePlateaued => "plateau",
            Model::SinglePeaked => "sp",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exist" => Ok(Model::ExistSP),
            "plateau" => Ok(Model::SinglePlateaued),
            "sp" => Ok(Model::SinglePeaked),
            other => Err(format!("unknown model `{other}` (expected sp, plateau or exist)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubstructureKind {
    /// `a < b < c` on the axis with `a > b` and `c > b`.
    VValley,
    /// `a < b < c` on the axis with `a > b ~ c` or `a ~ b < c`.
    NonpeakPlateau,
    /// Two axis-adjacent candidates ranked indifferent.
    Plateau,
}

impl fmt::Display for SubstructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubstructureKind::VValley => "v-valley",
            SubstructureKind::NonpeakPlateau => "nonpeak plateau",
            SubstructureKind::Plateau => "plateau",
        })
    }
}

/// A forbidden pattern found in one vote. `candidates` are listed in axis order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Witness {
    pub kind: SubstructureKind,
    pub voter: usize,
    pub candidates: Vec<CandidateId>,
}

/// Preference levels read left to right along `axis` (lower is better).
fn levels_along(order: &WeakOrder, axis: &Axis) -> Vec<usize> {
    let levels = order.levels();
    axis.positions().iter().map(|&c| levels[c]).collect()
}

/// `suffix_min[i] = min(levels[i..])`, with `usize::MAX` past the end.
fn suffix_min(levels: &[usize]) -> Vec<usize> {
    let mut out = vec![usize::MAX; levels.len() + 1];
    for i in (0..levels.len()).rev() {
        out[i] = out[i + 1].min(levels[i]);
    }
    out
}

/// `next_equal[i]`: smallest `k > i` with the same level as `i`.
fn next_equal(levels: &[usize]) -> Vec<Option<usize>> {
    let mut last_seen: Vec<Option<usize>> = vec![None; levels.len()];
    let mut out = vec![None; levels.len()];
    for i in (0..levels.len()).rev() {
        out[i] = last_seen[levels[i]];
        last_seen[levels[i]] = Some(i);
    }
    out
}

/// `suffix_max[i] = max(keys[i..])` over the defined keys.
fn suffix_max(keys: &[Option<usize>]) -> Vec<Option<usize>> {
    let mut out = vec![None; keys.len() + 1];
    for i in (0..keys.len()).rev() {
        out[i] = out[i + 1].max(keys[i]);
    }
    out
}

fn witness(kind: SubstructureKind, axis: &Axis, positions: &[usize]) -> Witness {
    Witness { kind, voter: 0, candidates: positions.iter().map(|&p| axis.positions()[p]).collect() }
}

/// Lexicographically smallest v-valley position triple.
fn v_valley_positions(levels: &[usize]) -> Option<[usize; 3]> {
    let n = levels.len();
    let suf_min = suffix_min(levels);
    // j can be a valley bottom with something better to its right.
    let bottom_key: Vec<Option<usize>> =
        (0..n).map(|j| (suf_min[j + 1] < levels[j]).then_some(levels[j])).collect();
    let suf_bottom = suffix_max(&bottom_key);

    let i = (0..n).find(|&i| suf_bottom[i + 1].is_some_and(|worst| worst > levels[i]))?;
    let j = (i + 1..n).find(|&j| levels[j] > levels[i] && suf_min[j + 1] < levels[j])?;
    let k = (j + 1..n).find(|&k| levels[k] < levels[j])?;
    Some([i, j, k])
}

/// Lexicographically smallest nonpeak-plateau position triple.
fn nonpeak_plateau_positions(levels: &[usize]) -> Option<[usize; 3]> {
    let n = levels.len();
    let suf_min = suffix_min(levels);
    let next_eq = next_equal(levels);
    // `a > b ~ c`: b has an indifferent partner further right.
    let pair_key: Vec<Option<usize>> = (0..n).map(|j| next_eq[j].map(|_| levels[j])).collect();
    let suf_pair = suffix_max(&pair_key);

    let descending = |i: usize| suf_pair[i + 1].is_some_and(|worst| worst > levels[i]);
    // `a ~ b < c`: the nearest partner of a already has something better after it.
    let ascending = |i: usize| next_eq[i].is_some_and(|j| suf_min[j + 1] < levels[i]);

    let i = (0..n).find(|&i| descending(i) || ascending(i))?;
    let from_descending = if descending(i) {
        (i + 1..n)
            .find(|&j| levels[j] > levels[i] && next_eq[j].is_some())
            .map(|j| [i, j, next_eq[j].unwrap()])
    } else {
        None
    };
    let from_ascending = if ascending(i) {
        let j = next_eq[i].unwrap();
        (j + 1..n).find(|&k| levels[k] < levels[i]).map(|k| [i, j, k])
    } else {
        None
    };
    match (from_descending, from_ascending) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

fn plateau_positions(levels: &[usize]) -> Option<[usize; 2]> {
    levels.windows(2).position(|w| w[0] == w[1]).map(|i| [i, i + 1])
}

/// Finds a triple `a < b < c` on `axis` with `a` and `c` both strictly
/// preferred to `b`.
pub fn find_v_valley(order: &WeakOrder, axis: &Axis) -> Option<Witness> {
    v_valley_positions(&levels_along(order, axis)).map(|p| witness(SubstructureKind::VValley, axis, &p))
}

/// Finds a triple `a < b < c` on `axis` with `a > b ~ c` or `a ~ b < c`.
pub fn find_nonpeak_plateau(order: &WeakOrder, axis: &Axis) -> Option<Witness> {
    nonpeak_plateau_positions(&levels_along(order, axis))
        .map(|p| witness(SubstructureKind::NonpeakPlateau, axis, &p))
}

/// Finds two axis-adjacent candidates ranked indifferent.
pub fn find_plateau(order: &WeakOrder, axis: &Axis) -> Option<Witness> {
    plateau_positions(&levels_along(order, axis)).map(|p| witness(SubstructureKind::Plateau, axis, &p))
}

/// First forbidden substructure of a single vote under `model`.
pub fn vote_witness(order: &WeakOrder, axis: &Axis, model: Model) -> Option<Witness> {
    let levels = levels_along(order, axis);
    match model {
        Model::ExistSP => v_valley_positions(&levels).map(|p| witness(SubstructureKind::VValley, axis, &p)),
        Model::SinglePlateaued => {
            v_valley_positions(&levels).map(|p| witness(SubstructureKind::VValley, axis, &p)).or_else(|| {
                nonpeak_plateau_positions(&levels)
                    .map(|p| witness(SubstructureKind::NonpeakPlateau, axis, &p))
            })
        }
        Model::SinglePeaked => {
            let top = order.top_tier();
            if top.len() >= 2 {
                // No axis can split a multi-candidate top tier at a single peak.
                let pos = axis.position_of();
                let mut pair = vec![top[0], top[1]];
                pair.sort_by_key(|&c| pos[c]);
                return Some(Witness { kind: SubstructureKind::Plateau, voter: 0, candidates: pair });
            }
            v_valley_positions(&levels)
                .map(|p| witness(SubstructureKind::VValley, axis, &p))
                .or_else(|| plateau_positions(&levels).map(|p| witness(SubstructureKind::Plateau, axis, &p)))
        }
    }
}

/// Checks every vote of `profile` against `axis`; returns the first witness
/// (lowest voter index) on failure.
pub fn axis_consistent(profile: &Profile, axis: &Axis, model: Model) -> Result<(), Witness> {
    for (voter, vote) in profile.votes().iter().enumerate() {
        if let Some(mut w) = vote_witness(&vote.order, axis, model) {
            w.voter = voter;
            return Err(w);
        }
    }
    Ok(())
}
