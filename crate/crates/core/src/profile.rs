//! Candidates, weak orders, profiles and axes.
//!
//! Candidates are interned to dense ids `0..m` when a profile is built; names
//! are only kept for input and output. A [`WeakOrder`] is an ordered partition
//! of the candidate ids into indifference tiers, most preferred tier first, so
//! transitivity of indifference holds by construction.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::ProfileError;

pub type CandidateId = usize;

const FORBIDDEN_NAME_CHARS: [char; 4] = ['>', '~', ',', ':'];

/// Returns true if `name` can be written in the native profile format.
pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|ch| ch.is_whitespace() || FORBIDDEN_NAME_CHARS.contains(&ch))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Candidate {
    pub id: CandidateId,
    pub name: String,
}

/// Strength class of a weak order: total ⊂ top ⊂ weak.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderClass {
    Total,
    Top,
    Weak,
}

/// An ordered partition of the candidates into nonempty indifference tiers.
///
/// Each tier is stored sorted by candidate id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeakOrder {
    tiers: Vec<Vec<CandidateId>>,
}

impl WeakOrder {
    /// Builds a weak order over the candidates `0..num_candidates`.
    pub fn new(tiers: Vec<Vec<CandidateId>>, num_candidates: usize) -> Result<Self, ProfileError> {
        let mut seen = vec![false; num_candidates];
        let mut tiers = tiers;
        for tier in &mut tiers {
            if tier.is_empty() {
                return Err(ProfileError::EmptyTier);
            }
            for &c in tier.iter() {
                if c >= num_candidates {
                    return Err(ProfileError::UnknownCandidate(c));
                }
                if seen[c] {
                    return Err(ProfileError::RepeatedCandidate(c));
                }
                seen[c] = true;
            }
            tier.sort_unstable();
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(ProfileError::MissingCandidate(missing));
        }
        Ok(WeakOrder { tiers })
    }

    /// A total order listing `ranking` from most to least preferred.
    pub fn total(ranking: &[CandidateId]) -> Result<Self, ProfileError> {
        WeakOrder::new(ranking.iter().map(|&c| vec![c]).collect(), ranking.len())
    }

    pub fn tiers(&self) -> &[Vec<CandidateId>] {
        &self.tiers
    }

    pub fn num_candidates(&self) -> usize {
        self.tiers.iter().map(Vec::len).sum()
    }

    /// The most preferred tier.
    pub fn top_tier(&self) -> &[CandidateId] {
        &self.tiers[0]
    }

    /// For every candidate (indexed by id), the number of candidates ranked
    /// strictly above it. Candidates share a tier iff they share a level.
    pub fn levels(&self) -> Vec<usize> {
        let mut levels = vec![0; self.num_candidates()];
        let mut above = 0;
        for tier in &self.tiers {
            for &c in tier {
                levels[c] = above;
            }
            above += tier.len();
        }
        levels
    }

    /// Number of candidates ranked strictly above `candidate`.
    ///
    /// Panics if `candidate` is not ranked by this order.
    pub fn strictly_above_count(&self, candidate: CandidateId) -> usize {
        let mut above = 0;
        for tier in &self.tiers {
            if tier.binary_search(&candidate).is_ok() {
                return above;
            }
            above += tier.len();
        }
        panic!("candidate {candidate} is not ranked by this order");
    }

    /// Returns the strongest class the order belongs to.
    pub fn classify(&self) -> OrderClass {
        let last = self.tiers.len() - 1;
        if self.tiers.iter().all(|t| t.len() == 1) {
            OrderClass::Total
        } else if self.tiers[..last].iter().all(|t| t.len() == 1) {
            OrderClass::Top
        } else {
            OrderClass::Weak
        }
    }

    pub fn is_total(&self) -> bool {
        self.tiers.iter().all(|t| t.len() == 1)
    }
}

/// A weak order cast by `multiplicity` identical voters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vote {
    pub multiplicity: u64,
    pub order: WeakOrder,
}

/// A candidate set together with a multiset of weak orders over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    candidates: Vec<Candidate>,
    votes: Vec<Vote>,
}

impl Profile {
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        votes: Vec<Vote>,
    ) -> Result<Self, ProfileError> {
        let mut candidates = Vec::new();
        let mut by_name = HashMap::new();
        for (id, name) in names.into_iter().enumerate() {
            let name = name.into();
            if !is_valid_name(&name) {
                return Err(ProfileError::InvalidName(name));
            }
            if by_name.insert(name.clone(), id).is_some() {
                return Err(ProfileError::DuplicateName(name));
            }
            candidates.push(Candidate { id, name });
        }
        if candidates.is_empty() {
            return Err(ProfileError::NoCandidates);
        }
        let m = candidates.len();
        for vote in &votes {
            if vote.multiplicity == 0 {
                return Err(ProfileError::ZeroMultiplicity);
            }
            // Re-validate against this candidate set.
            WeakOrder::new(vote.order.tiers.clone(), m)?;
        }
        Ok(Profile { candidates, votes })
    }

    /// Convenience constructor from plain orders, each with multiplicity 1.
    pub fn from_orders<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        orders: Vec<WeakOrder>,
    ) -> Result<Self, ProfileError> {
        let votes = orders.into_iter().map(|order| Vote { multiplicity: 1, order }).collect();
        Profile::new(names, votes)
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn votes(&self) -> &[Vote] {
        &self.votes
    }

    pub fn name(&self, id: CandidateId) -> &str {
        &self.candidates[id].name
    }

    pub fn id_of(&self, name: &str) -> Option<CandidateId> {
        self.candidates.iter().position(|c| c.name == name)
    }

    /// Sum of all vote multiplicities.
    pub fn total_weight(&self) -> u64 {
        self.votes.iter().map(|v| v.multiplicity).sum()
    }

    /// Returns a copy of this profile with one extra vote appended.
    pub fn with_vote(&self, vote: Vote) -> Result<Self, ProfileError> {
        let mut votes = self.votes.clone();
        votes.push(vote);
        Profile::new(self.candidates.iter().map(|c| c.name.clone()), votes)
    }

    /// Renders `order` as `a ~ c > b` using candidate names.
    pub fn format_order(&self, order: &WeakOrder) -> String {
        order
            .tiers()
            .iter()
            .map(|tier| tier.iter().map(|&c| self.name(c)).collect::<Vec<_>>().join(" ~ "))
            .collect::<Vec<_>>()
            .join(" > ")
    }

    /// Renders `axis` as `a < b < c` using candidate names.
    pub fn format_axis(&self, axis: &Axis) -> String {
        axis.positions().iter().map(|&c| self.name(c)).collect::<Vec<_>>().join(" < ")
    }

    pub fn axis_names(&self, axis: &Axis) -> Vec<String> {
        axis.positions().iter().map(|&c| self.name(c).to_owned()).collect()
    }
}

/// Native text format: a `candidates:` header followed by one
/// `<multiplicity>: <tier> > <tier> ...` line per vote.
impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.candidates.iter().map(|c| c.name.as_str()).collect();
        writeln!(f, "candidates: {}", names.join(","))?;
        for vote in &self.votes {
            writeln!(f, "{}: {}", vote.multiplicity, self.format_order(&vote.order))?;
        }
        Ok(())
    }
}

/// A left-to-right arrangement of all candidates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Axis(Vec<CandidateId>);

impl Axis {
    pub fn new(positions: Vec<CandidateId>) -> Result<Self, ProfileError> {
        let m = positions.len();
        let mut seen = vec![false; m];
        for &c in &positions {
            if c >= m || seen[c] {
                return Err(ProfileError::NotAPermutation(m));
            }
            seen[c] = true;
        }
        Ok(Axis(positions))
    }

    /// The axis `0 < 1 < ... < m-1`.
    pub fn identity(num_candidates: usize) -> Self {
        Axis((0..num_candidates).collect())
    }

    pub fn positions(&self) -> &[CandidateId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Inverse permutation: `position_of()[c]` is the axis index of candidate `c`.
    pub fn position_of(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (i, &c) in self.0.iter().enumerate() {
            pos[c] = i;
        }
        pos
    }

    pub fn reversed(&self) -> Self {
        Axis(self.0.iter().rev().copied().collect())
    }

    pub fn into_inner(self) -> Vec<CandidateId> {
        self.0
    }
}
