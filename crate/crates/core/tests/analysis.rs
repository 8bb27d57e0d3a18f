mod common;

use std::collections::BTreeSet;

use common::*;
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weakpeak::analysis::{brute_force_axes_bounded, Verdict};
use weakpeak::generate::{random_exist_sp_profile, random_profile};
use weakpeak::{
    all_axes, axis_consistent, brute_force_axes, check, guiding_order, majority_relation, parse_native, Axis,
    Model, Profile, Vote, WeakOrder,
};

fn axis_set(profile: &Profile, model: Model) -> BTreeSet<Axis> {
    all_axes(profile, model, usize::MAX).into_iter().collect()
}

fn with_multiplicities(profile: &Profile, mults: &[u64]) -> Profile {
    let votes = profile
        .votes()
        .iter()
        .zip(mults.iter().cycle())
        .map(|(v, &k)| Vote { multiplicity: k, order: v.order.clone() })
        .collect();
    Profile::new(profile.candidates().iter().map(|c| c.name.clone()), votes).unwrap()
}

fn profile_strategy() -> impl Strategy<Value = Profile> {
    (2usize..=6, 1usize..=5, any::<u64>())
        .prop_map(|(m, n, seed)| random_profile(m, n, 0.3, &mut ChaCha8Rng::seed_from_u64(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pipeline_matches_brute_force(profile in profile_strategy()) {
        for model in Model::ALL {
            let slow: BTreeSet<Axis> = brute_force_axes(&profile, model).unwrap().into_iter().collect();
            prop_assert_eq!(&axis_set(&profile, model), &slow);
            let result = check(&profile, model);
            match result.verdict {
                Verdict::Consistent { axis, axis_count } => {
                    prop_assert!(axis_consistent(&profile, &axis, model).is_ok());
                    prop_assert_eq!(axis_count, BigUint::from(slow.len()));
                    prop_assert_eq!(slow.len() % 2, 0);
                }
                Verdict::Inconsistent(_) => prop_assert!(slow.is_empty()),
            }
        }
    }

    #[test]
    fn multiplicities_do_not_change_axes(profile in profile_strategy(), mults in proptest::collection::vec(1u64..5, 1..4)) {
        let weighted = with_multiplicities(&profile, &mults);
        for model in Model::ALL {
            prop_assert_eq!(axis_set(&profile, model), axis_set(&weighted, model));
        }
    }

    #[test]
    fn reversed_axes_are_consistent_too(profile in profile_strategy()) {
        for model in Model::ALL {
            let set = axis_set(&profile, model);
            for a in &set {
                prop_assert!(set.contains(&a.reversed()));
            }
        }
    }

    #[test]
    fn axis_sets_are_nested(profile in profile_strategy()) {
        let exist = axis_set(&profile, Model::ExistSP);
        let plateau = axis_set(&profile, Model::SinglePlateaued);
        let sp = axis_set(&profile, Model::SinglePeaked);
        prop_assert!(sp.is_subset(&plateau));
        prop_assert!(plateau.is_subset(&exist));
    }

    #[test]
    fn models_coincide_on_total_orders((m, n, seed) in (2usize..=6, 1usize..=5, any::<u64>())) {
        let profile = random_profile(m, n, 0.0, &mut ChaCha8Rng::seed_from_u64(seed));
        let exist = axis_set(&profile, Model::ExistSP);
        prop_assert_eq!(&exist, &axis_set(&profile, Model::SinglePlateaued));
        prop_assert_eq!(&exist, &axis_set(&profile, Model::SinglePeaked));
    }
}

#[test]
fn literal_definitions_agree_with_the_pipeline() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..150 {
        let m = rng.random_range(2..=5);
        let n = rng.random_range(1..=4);
        let profile = random_profile(m, n, 0.4, &mut rng);
        for model in Model::ALL {
            assert_eq!(axis_set(&profile, model), definitional_axes(&profile, model), "{model}\n{profile}");
        }
    }
}

#[test]
fn planted_profiles_are_found() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..50 {
        let m = rng.random_range(2..=30);
        let (profile, axis) = random_exist_sp_profile(m, 20, 0.3, &mut rng);
        let result = check(&profile, Model::ExistSP);
        assert!(result.is_consistent());
        if m <= 8 {
            assert!(all_axes(&profile, Model::ExistSP, usize::MAX).contains(&axis));
        }
    }
}

#[test]
fn brute_force_is_bounded() {
    let profile = random_profile(9, 1, 0.3, &mut ChaCha8Rng::seed_from_u64(1));
    let err = brute_force_axes(&profile, Model::ExistSP).unwrap_err();
    assert_eq!((err.candidates, err.bound), (9, 8));
    assert!(brute_force_axes_bounded(&profile, Model::ExistSP, 9).is_ok());
}

#[test]
fn guiding_order_examples() {
    let two_votes = parse_native(&data("twovotes.prof")).unwrap();
    assert_eq!(guiding_order(&two_votes), None);

    // every vote has a unique last candidate at every step
    let p = parse_native("candidates: a,b,c,d\n1: a > b > c > d\n1: b ~ c > a > d").unwrap();
    let g = guiding_order(&p).unwrap();
    assert!(g.is_total());
    assert_eq!(g.tiers().last().unwrap(), &vec![3]);
}

#[test]
fn guiding_order_keeps_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut found = 0;
    for _ in 0..400 {
        let m = rng.random_range(2..=7);
        let n = rng.random_range(1..=6);
        let profile = random_profile(m, n, 0.3, &mut rng);
        if !check(&profile, Model::ExistSP).is_consistent() {
            continue;
        }
        if let Some(g) = guiding_order(&profile) {
            found += 1;
            let extended = profile.with_vote(Vote { multiplicity: 1, order: g }).unwrap();
            assert!(check(&extended, Model::ExistSP).is_consistent(), "{profile}");
        }
    }
    assert!(found > 0);
}

#[test]
fn majority_cycle_of_the_cyclic_profile() {
    let p = parse_native(&data("cycle.prof")).unwrap();
    assert!(axis_set(&p, Model::ExistSP).contains(&Axis::identity(3)));
    let maj = majority_relation(&p);
    let (a, b, c) = (0, 1, 2);
    assert_eq!((maj.tally(a, c), maj.tally(c, a)), (3, 2));
    assert_eq!((maj.tally(c, b), maj.tally(b, c)), (2, 1));
    assert_eq!((maj.tally(b, a), maj.tally(a, b)), (3, 2));
    assert!(!maj.is_acyclic());
    assert_eq!(maj.shortest_cycle(), Some(vec![a, c, b]));
}

#[test]
fn majority_of_total_single_peaked_profiles_is_acyclic() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    for _ in 0..100 {
        let m = rng.random_range(2..=8);
        let (profile, _) = random_exist_sp_profile(m, 5, 0.0, &mut rng);
        // odd number of strict voters: median voter theorem
        assert!(majority_relation(&profile).is_acyclic(), "{profile}");
    }
}

#[test]
fn single_candidate_profiles() {
    let p = Profile::from_orders(["a"], vec![WeakOrder::total(&[0]).unwrap()]).unwrap();
    for model in Model::ALL {
        let r = check(&p, model);
        assert!(r.is_consistent());
        assert_eq!(all_axes(&p, model, 10), vec![Axis::identity(1)]);
    }
}
