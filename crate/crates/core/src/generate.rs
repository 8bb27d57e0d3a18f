//! Seeded random profiles for the oracle harness and scale checks.
//!
//! A random weak order is a uniformly random ranking in which every pair of
//! adjacent positions is then tied independently with probability
//! `tie_probability`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::profile::{Axis, CandidateId, Profile, Vote, WeakOrder};

/// Tie density used by the oracle harness.
pub const DEFAULT_TIE_PROBABILITY: f64 = 0.3;

/// `a, b, ..., z` for up to 26 candidates, `c0, c1, ...` beyond that.
pub fn candidate_names(num_candidates: usize) -> Vec<String> {
    if num_candidates <= 26 {
        (0..num_candidates).map(|i| char::from(b'a' + i as u8).to_string()).collect()
    } else {
        (0..num_candidates).map(|i| format!("c{i}")).collect()
    }
}

/// Groups a ranking into tiers, tying each adjacent pair with probability
/// `tie_probability`.
fn tie_adjacent<R: Rng + ?Sized>(ranking: &[CandidateId], tie_probability: f64, rng: &mut R) -> WeakOrder {
    let mut tiers: Vec<Vec<CandidateId>> = Vec::new();
    for (i, &c) in ranking.iter().enumerate() {
        if i > 0 && rng.random_bool(tie_probability) {
            tiers.last_mut().unwrap().push(c);
        } else {
            tiers.push(vec![c]);
        }
    }
    WeakOrder::new(tiers, ranking.len()).expect("a ranking partitions the candidates")
}

pub fn random_weak_order<R: Rng + ?Sized>(
    num_candidates: usize,
    tie_probability: f64,
    rng: &mut R,
) -> WeakOrder {
    let mut ranking: Vec<CandidateId> = (0..num_candidates).collect();
    ranking.shuffle(rng);
    tie_adjacent(&ranking, tie_probability, rng)
}

pub fn random_profile<R: Rng + ?Sized>(
    num_candidates: usize,
    num_votes: usize,
    tie_probability: f64,
    rng: &mut R,
) -> Profile {
    let votes = (0..num_votes)
        .map(|_| Vote { multiplicity: 1, order: random_weak_order(num_candidates, tie_probability, rng) })
        .collect();
    Profile::new(candidate_names(num_candidates), votes).expect("generated profile is valid")
}

/// A weak order that is existentially single-peaked on `axis`: a random
/// single-peaked ranking with adjacent ranks tied at random.
pub fn random_exist_sp_order<R: Rng + ?Sized>(axis: &Axis, tie_probability: f64, rng: &mut R) -> WeakOrder {
    let positions = axis.positions();
    let m = positions.len();
    let peak = rng.random_range(0..m);
    let (mut left, mut right) = (peak, peak);
    let mut ranking = vec![positions[peak]];
    while ranking.len() < m {
        let go_left = right + 1 == m || (left > 0 && rng.random_bool(0.5));
        if go_left {
            left -= 1;
            ranking.push(positions[left]);
        } else {
            right += 1;
            ranking.push(positions[right]);
        }
    }
    tie_adjacent(&ranking, tie_probability, rng)
}

/// A random profile that is existentially single-peaked on a random axis.
pub fn random_exist_sp_profile<R: Rng + ?Sized>(
    num_candidates: usize,
    num_votes: usize,
    tie_probability: f64,
    rng: &mut R,
) -> (Profile, Axis) {
    let mut positions: Vec<CandidateId> = (0..num_candidates).collect();
    positions.shuffle(rng);
    let axis = Axis::new(positions).expect("shuffled ids form a permutation");
    let votes = (0..num_votes)
        .map(|_| Vote { multiplicity: 1, order: random_exist_sp_order(&axis, tie_probability, rng) })
        .collect();
    let profile = Profile::new(candidate_names(num_candidates), votes).expect("generated profile is valid");
    (profile, axis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substructure::{axis_consistent, Model};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_profile(6, 5, 0.3, &mut ChaCha8Rng::seed_from_u64(3));
        let b = random_profile(6, 5, 0.3, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
    }

    #[test]
    fn tie_probability_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(random_weak_order(7, 0.0, &mut rng).is_total());
        assert_eq!(random_weak_order(7, 1.0, &mut rng).tiers().len(), 1);
    }

    #[test]
    fn planted_axis_is_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let (profile, axis) = random_exist_sp_profile(9, 6, 0.3, &mut rng);
            assert!(axis_consistent(&profile, &axis, Model::ExistSP).is_ok());
        }
    }

    #[test]
    fn names() {
        assert_eq!(candidate_names(3), vec!["a", "b", "c"]);
        assert_eq!(candidate_names(30)[29], "c29");
    }
}
