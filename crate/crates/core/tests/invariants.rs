use proptest::prelude::*;

use gwlkit::engines::{run_test, TestKind};
use gwlkit::io::{graph_to_json, parse_graph};
use gwlkit::properties::{centroid_distance_multiset, dihedral_cos, extents};
use gwlkit::random::{self, connected_radial_graph, random_witness};
use gwlkit::so2::{stabilizer_order, so2_hash, So2Registry, StabilizerInfo};
use gwlkit::{apply_isometry, GroupSpec, NumericMode};

fn group_for(d: usize, special: bool) -> GroupSpec {
    if special {
        GroupSpec::special(d)
    } else {
        GroupSpec::orthogonal(d)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn engines_blind_to_isometries(seed in any::<u64>(), d in 2usize..=3, n in 1usize..=6, special in any::<bool>()) {
        let mut rng = random::rng(seed);
        let group = group_for(d, special);
        let g = connected_radial_graph(&mut rng, n, d, NumericMode::Exact, 2).unwrap();
        let h = apply_isometry(&g, &random_witness(&mut rng, n, group, NumericMode::Exact)).unwrap();
        for kind in [TestKind::Wl, TestKind::Gwl, TestKind::Igwl, TestKind::IgwlK(2), TestKind::IgwlK(3)] {
            let (v, trace) = run_test(kind, &g, &h, group, None).unwrap();
            prop_assert!(!v.is_distinguished());
            prop_assert!(trace.iterations.iter().all(|r| r.histogram_1 == r.histogram_2));
        }
    }

    #[test]
    fn properties_follow_isometries(seed in any::<u64>(), n in 4usize..=7) {
        let mut rng = random::rng(seed);
        let g = connected_radial_graph(&mut rng, n, 3, NumericMode::Exact, 3).unwrap();
        let w = random_witness(&mut rng, n, GroupSpec::orthogonal(3), NumericMode::Exact);
        let h = apply_isometry(&g, &w).unwrap();
        prop_assert_eq!(centroid_distance_multiset(&g).unwrap(), centroid_distance_multiset(&h).unwrap());
        let p = &w.permutation;
        if let Ok(c) = dihedral_cos(&g, 0, 1, 2, 3) {
            prop_assert_eq!(c, dihedral_cos(&h, p[0], p[1], p[2], p[3]).unwrap());
        }
        // translations and relabellings leave the box alone
        let shifted = apply_isometry(&g, &gwlkit::IsometryWitness {
            permutation: p.clone(),
            rotation: gwlkit::Matrix::identity(3, NumericMode::Exact),
            translation: w.translation.clone(),
        }).unwrap();
        prop_assert_eq!(extents(&g), extents(&shifted));
    }

    #[test]
    fn stabilizer_ignores_rotation_and_order(seed in any::<u64>(), fold in 1usize..=5, m in 1usize..=3, beta in 0.0f64..std::f64::consts::TAU) {
        let mut rng = random::rng(seed);
        let base: Vec<[f64; 2]> = random::random_points(&mut rng, m, 2, NumericMode::Float)
            .iter()
            .map(|v| { let f = v.to_f64s(); [f[0], f[1]] })
            .collect();
        let rot = |p: [f64; 2], a: f64| { let (s, c) = a.sin_cos(); [c * p[0] - s * p[1], s * p[0] + c * p[1]] };
        let x: Vec<[f64; 2]> = (0..fold)
            .flat_map(|j| base.iter().map(move |&p| rot(p, std::f64::consts::TAU * j as f64 / fold as f64)))
            .collect();
        let s = stabilizer_order(&x).unwrap();
        let mut y: Vec<[f64; 2]> = x.iter().map(|&p| rot(p, beta)).collect();
        y.reverse();
        prop_assert_eq!(s, stabilizer_order(&y).unwrap());
        match s {
            StabilizerInfo::Finite { order } => prop_assert_eq!(order as usize % fold, 0),
            StabilizerInfo::Continuous => prop_assert!(false, "nonzero points"),
        }
        let mut reg = So2Registry::new();
        prop_assert_eq!(so2_hash(&x, &mut reg).norm, so2_hash(&y, &mut reg).norm);
    }

    #[test]
    fn graph_files_round_trip(seed in any::<u64>(), d in 1usize..=3, n in 1usize..=6, float in any::<bool>()) {
        let mode = if float { NumericMode::Float } else { NumericMode::Exact };
        let g = connected_radial_graph(&mut random::rng(seed), n, d, mode, 2).unwrap();
        prop_assert_eq!(parse_graph(&graph_to_json(&g)).unwrap(), g);
    }
}
