mod common;

use std::collections::BTreeSet;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weakpeak::generate::random_profile;
use weakpeak::{brute_force_axes, build_matrix, parse_native, Axis, Model, Profile, RowKind};

fn matrix_rows(profile: &Profile, model: Model) -> Option<Vec<Vec<usize>>> {
    let x = build_matrix(profile, model).ok()?;
    Some((0..x.num_rows()).map(|i| x.row_members(i)).collect())
}

fn seeded_profiles(seed: u64, count: usize, max_m: usize) -> Vec<Profile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let m = rng.random_range(2..=max_m);
            let n = rng.random_range(1..=5);
            random_profile(m, n, 0.3, &mut rng)
        })
        .collect()
}

#[test]
fn golden_example_matrices() {
    let p = parse_native(&data("twovotes.prof")).unwrap();
    assert_eq!(build_matrix(&p, Model::ExistSP).unwrap().dump(&p), TWO_VOTES_EXIST_MATRIX);
    assert_eq!(build_matrix(&p, Model::SinglePlateaued).unwrap().dump(&p), TWO_VOTES_PLATEAU_MATRIX);
    assert!(build_matrix(&p, Model::SinglePeaked).is_err());
}

#[test]
fn golden_axes_against_rows() {
    let p = parse_native(&data("twovotes.prof")).unwrap();
    let axis = |s: &str| Axis::new(s.split('<').map(|n| p.id_of(n).unwrap()).collect()).unwrap();
    let exist = build_matrix(&p, Model::ExistSP).unwrap();
    let plateau = build_matrix(&p, Model::SinglePlateaued).unwrap();
    assert_eq!(exist.first_gap(&axis("b<a<c<d<e")), None);
    assert_eq!(plateau.first_gap(&axis("e<b<a<c<d")), None);
    // d and e adjacent breaks one of the gadget rows
    let gap = plateau.first_gap(&axis("b<a<c<d<e")).unwrap();
    assert!(!matches!(plateau.origins()[gap].kind, RowKind::Base { .. }));
}

/// An axis is consistent exactly when every row of the matrix is an
/// interval along it.
#[test]
fn row_intervals_characterize_consistent_axes() {
    for profile in seeded_profiles(5, 150, 6) {
        let m = profile.num_candidates();
        for model in Model::ALL {
            let expected: BTreeSet<Axis> = brute_force_axes(&profile, model).unwrap().into_iter().collect();
            let got: BTreeSet<Axis> = match build_matrix(&profile, model) {
                Ok(x) => permutations(&(0..m).collect::<Vec<_>>())
                    .into_iter()
                    .map(|a| Axis::new(a).unwrap())
                    .filter(|a| x.first_gap(a).is_none())
                    .collect(),
                Err(_) => BTreeSet::new(),
            };
            assert_eq!(got, expected, "{model}\n{profile}");
            assert_eq!(expected, definitional_axes(&profile, model), "{model}\n{profile}");
        }
    }
}

#[test]
fn simplification_keeps_the_feasible_orders() {
    for profile in seeded_profiles(9, 120, 7) {
        let m = profile.num_candidates();
        for model in Model::ALL {
            let Ok(x) = build_matrix(&profile, model) else { continue };
            let rows = |x: &weakpeak::ConstraintMatrix| -> Vec<Vec<usize>> {
                (0..x.num_rows()).map(|i| x.row_members(i)).collect()
            };
            assert_eq!(c1p_orders(m, &rows(&x)), c1p_orders(m, &rows(&x.simplify_rows())));
        }
    }
}

#[test]
fn row_shapes() {
    for profile in seeded_profiles(13, 200, 8) {
        let m = profile.num_candidates();
        for model in Model::ALL {
            let Ok(x) = build_matrix(&profile, model) else { continue };
            let origins = x.origins();
            for i in 0..x.num_rows() {
                let members: BTreeSet<usize> = x.row_members(i).into_iter().collect();
                let vote = &profile.votes()[origins[i].voter].order;
                let levels = vote.levels();
                match origins[i].kind {
                    RowKind::Base { threshold } => {
                        assert_eq!(members, (0..m).filter(|&c| levels[c] < threshold).collect());
                        if threshold > 1 {
                            let prev: BTreeSet<usize> = x.row_members(i - 1).into_iter().collect();
                            assert!(prev.is_subset(&members));
                        }
                    }
                    RowKind::GadgetMid { pair: [a, b] } => {
                        assert_eq!(levels[a], levels[b]);
                        let expected: BTreeSet<usize> =
                            (0..m).filter(|&c| levels[c] < levels[a] || c == a || c == b).collect();
                        assert_eq!(members, expected);
                        // for a tier of two, the middle row is also a base row
                        let base = (0..x.num_rows()).any(|j| {
                            origins[j].voter == origins[i].voter
                                && matches!(origins[j].kind, RowKind::Base { .. })
                                && x.rows()[j] == x.rows()[i]
                        });
                        assert!(base || members.len() == m);
                    }
                    RowKind::GadgetTop { pair: [a, b] } | RowKind::GadgetBottom { pair: [a, b] } => {
                        assert!(a < b);
                        assert_eq!(members.contains(&a), !members.contains(&b));
                    }
                }
            }
            if model == Model::ExistSP {
                assert_eq!(x.num_rows(), profile.votes().len() * (m - 1));
            }
        }
    }
}

#[test]
fn feasible_orders_shrink_with_stronger_models() {
    for profile in seeded_profiles(17, 120, 6) {
        let m = profile.num_candidates();
        let sets: Vec<Option<BTreeSet<Vec<usize>>>> =
            Model::ALL.iter().map(|&model| matrix_rows(&profile, model).map(|r| c1p_orders(m, &r))).collect();
        let [exist, plateau, sp] = [&sets[0], &sets[1], &sets[2]];
        let exist = exist.as_ref().unwrap();
        if let Some(plateau) = plateau {
            assert!(plateau.is_subset(exist));
        }
        if let (Some(sp), Some(plateau)) = (sp, plateau) {
            assert!(sp.is_subset(plateau));
        }
        if sp.is_some() {
            assert!(plateau.is_some());
        }
    }
}
