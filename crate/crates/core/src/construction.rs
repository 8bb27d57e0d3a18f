//! 0-1 constraint matrices whose consecutive-ones column orders are exactly
//! the consistent axes of a profile.
//!
//! Each voter contributes its upper contour sets `U_t = {c : fewer than t
//! candidates strictly above c}` for `t = 1..m-1`. Single-plateaued and
//! single-peaked checks add three gadget rows for every indifferent pair
//! below the top tier, which forces the pair onto opposite sides of the
//! candidates ranked above it.

use std::collections::HashSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::profile::{Axis, CandidateId, Profile, WeakOrder};
use crate::substructure::Model;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RowKind {
    /// Upper contour set for threshold `t`.
    Base { threshold: usize },
    /// `B ∪ {b}`; `pair` is `[a, b]` with `a < b`.
    GadgetTop { pair: [CandidateId; 2] },
    /// `B ∪ {a, b}`.
    GadgetMid { pair: [CandidateId; 2] },
    /// `B ∪ {a}`.
    GadgetBottom { pair: [CandidateId; 2] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RowOrigin {
    pub voter: usize,
    #[serde(flatten)]
    pub kind: RowKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectionReason {
    /// Three or more candidates tied below the top tier.
    TripleNonpeakIndifference,
    /// More than one most preferred candidate.
    MultiplePeaks,
}

impl fmt::Display for RejectionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectionReason::TripleNonpeakIndifference => {
                "three or more candidates are tied below the top tier"
            }
            RejectionReason::MultiplePeaks => "more than one most preferred candidate",
        })
    }
}

/// A voter whose order cannot be consistent with any axis under the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Rejection {
    pub voter: usize,
    pub reason: RejectionReason,
}

/// Rows are candidate subsets; columns are candidate ids `0..m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintMatrix {
    num_columns: usize,
    rows: Vec<FixedBitSet>,
    origins: Vec<RowOrigin>,
}

impl ConstraintMatrix {
    pub fn new(num_columns: usize) -> Self {
        ConstraintMatrix { num_columns, rows: Vec::new(), origins: Vec::new() }
    }

    pub fn num_columns(&self) -> usize {
        self.num_columns
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[FixedBitSet] {
        &self.rows
    }

    pub fn origins(&self) -> &[RowOrigin] {
        &self.origins
    }

    /// Members of row `index` in increasing id order.
    pub fn row_members(&self, index: usize) -> Vec<CandidateId> {
        self.rows[index].ones().collect()
    }

    pub fn push_row(&mut self, members: impl IntoIterator<Item = CandidateId>, origin: RowOrigin) {
        let mut row = FixedBitSet::with_capacity(self.num_columns);
        for c in members {
            row.insert(c);
        }
        self.rows.push(row);
        self.origins.push(origin);
    }

    /// Index of the first row whose ones are not consecutive when the columns
    /// are arranged along `axis`, or `None` if every row is an interval.
    pub fn first_gap(&self, axis: &Axis) -> Option<usize> {
        let pos = axis.position_of();
        self.rows.iter().position(|row| !is_interval(row, &pos))
    }

    /// Drops rows that constrain nothing (empty, singleton, or all columns)
    /// and repeated rows, keeping the first occurrence and its origin.
    pub fn simplify_rows(&self) -> ConstraintMatrix {
        let mut seen: HashSet<&FixedBitSet> = HashSet::new();
        let mut out = ConstraintMatrix::new(self.num_columns);
        for (row, origin) in self.rows.iter().zip(&self.origins) {
            let size = row.count_ones(..);
            if size <= 1 || size == self.num_columns {
                continue;
            }
            if seen.insert(row) {
                out.rows.push(row.clone());
                out.origins.push(*origin);
            }
        }
        out
    }

    /// Text dump: a header of column names, then one line of space-separated
    /// 0/1 digits per row.
    pub fn dump(&self, profile: &Profile) -> String {
        let mut out = String::new();
        let header: Vec<&str> = (0..self.num_columns).map(|c| profile.name(c)).collect();
        out.push_str(&header.join(" "));
        out.push('\n');
        for row in &self.rows {
            let digits: Vec<&str> =
                (0..self.num_columns).map(|c| if row.contains(c) { "1" } else { "0" }).collect();
            out.push_str(&digits.join(" "));
            out.push('\n');
        }
        out
    }
}

fn is_interval(row: &FixedBitSet, position_of: &[usize]) -> bool {
    let mut lo = usize::MAX;
    let mut hi = 0;
    let mut count = 0;
    for c in row.ones() {
        lo = lo.min(position_of[c]);
        hi = hi.max(position_of[c]);
        count += 1;
    }
    count == 0 || hi - lo + 1 == count
}

fn check_voter(order: &WeakOrder, model: Model) -> Option<RejectionReason> {
    match model {
        Model::ExistSP => None,
        Model::SinglePlateaued => order.tiers()[1..]
            .iter()
            .any(|t| t.len() >= 3)
            .then_some(RejectionReason::TripleNonpeakIndifference),
        Model::SinglePeaked => {
            if order.top_tier().len() >= 2 {
                Some(RejectionReason::MultiplePeaks)
            } else {
                check_voter(order, Model::SinglePlateaued)
            }
        }
    }
}

/// Builds the constraint matrix of `profile` under `model`, or reports the
/// first voter that rules out every axis.
pub fn build_matrix(profile: &Profile, model: Model) -> Result<ConstraintMatrix, Rejection> {
    for (voter, vote) in profile.votes().iter().enumerate() {
        if let Some(reason) = check_voter(&vote.order, model) {
            return Err(Rejection { voter, reason });
        }
    }

    let m = profile.num_candidates();
    let mut matrix = ConstraintMatrix::new(m);
    for (voter, vote) in profile.votes().iter().enumerate() {
        let levels = vote.order.levels();
        for threshold in 1..m {
            matrix.push_row(
                (0..m).filter(|&c| levels[c] < threshold),
                RowOrigin { voter, kind: RowKind::Base { threshold } },
            );
        }
        if model == Model::ExistSP {
            continue;
        }
        for tier in &vote.order.tiers()[1..] {
            if tier.len() != 2 {
                continue;
            }
            let (a, b) = (tier[0], tier[1]);
            let pair = [a, b];
            let above = levels[a];
            let better: Vec<CandidateId> = (0..m).filter(|&c| levels[c] < above).collect();
            let with = |extra: &[CandidateId]| better.iter().chain(extra).copied().collect::<Vec<_>>();
            matrix.push_row(with(&[b]), RowOrigin { voter, kind: RowKind::GadgetTop { pair } });
            matrix.push_row(with(&[a, b]), RowOrigin { voter, kind: RowKind::GadgetMid { pair } });
            matrix.push_row(with(&[a]), RowOrigin { voter, kind: RowKind::GadgetBottom { pair } });
        }
    }
    Ok(matrix)
}
