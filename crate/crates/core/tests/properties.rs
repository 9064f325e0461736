use gwlkit::engines::run_igwl;
use gwlkit::generators::gen_kchain;
use gwlkit::properties::{centroid_distance_multiset, dihedral_cos, property_report};
use gwlkit::random::{self, random_points};
use gwlkit::{GeometricGraph, GroupSpec, Num, NumericMode, Vector};

/// Dihedral by explicit plane normals in a frame where the axis is z.
fn dihedral_by_frame(p: &[[f64; 3]; 4]) -> f64 {
    let sub = |a: [f64; 3], b: [f64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let [l, j, k, m] = *p;
    let axis = sub(j, k);
    let n = dot(axis, axis).sqrt();
    let e = [axis[0] / n, axis[1] / n, axis[2] / n];
    // components orthogonal to the axis
    let perp = |v: [f64; 3]| {
        let t = dot(v, e);
        [v[0] - t * e[0], v[1] - t * e[1], v[2] - t * e[2]]
    };
    let a = perp(sub(l, j));
    let b = perp(sub(m, k));
    dot(a, b) / (dot(a, a).sqrt() * dot(b, b).sqrt())
}

#[test]
fn dihedral_matches_frame_construction() {
    let mut rng = random::rng(21);
    for _ in 0..100 {
        let pts = random_points(&mut rng, 4, 3, NumericMode::Float);
        let g = GeometricGraph::from_positions(3, pts.clone(), &[]).unwrap();
        let raw: Vec<Vec<f64>> = pts.iter().map(Vector::to_f64s).collect();
        let arr = [0, 1, 2, 3].map(|i| [raw[i][0], raw[i][1], raw[i][2]]);
        let got = dihedral_cos(&g, 0, 1, 2, 3).unwrap().to_f64();
        let want = dihedral_by_frame(&arr);
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }
}

#[test]
fn exact_dihedral_is_signed_square() {
    let pts = [[1, 1, 0], [0, 0, 0], [1, 0, 0], [2, 1, 1]].iter().map(|p| Vector::from_ints(p)).collect();
    let g = GeometricGraph::from_positions(3, pts, &[]).unwrap();
    let exact = dihedral_cos(&g, 0, 1, 2, 3).unwrap();
    let float = dihedral_cos(&g.in_mode(NumericMode::Float), 0, 1, 2, 3).unwrap().to_f64();
    assert_eq!(exact.mode(), NumericMode::Exact);
    assert!((exact.to_f64() - float * float.abs()).abs() < 1e-12);
}

#[test]
fn chain_pair_differs_globally_not_locally() {
    let (a, b, _) = gen_kchain(2).unwrap();
    assert!(!run_igwl(&a, &b, GroupSpec::orthogonal(3), None).unwrap().0.is_distinguished());
    assert_ne!(centroid_distance_multiset(&a).unwrap(), centroid_distance_multiset(&b).unwrap());
}

#[test]
fn report_contents() {
    let (a, _, _) = gen_kchain(3).unwrap();
    let r = property_report(&a, &[]).unwrap();
    assert_eq!(r.centroid_distances_sq.len(), a.len());
    let b = r.bounding_box.unwrap();
    assert_eq!(b.extents, vec![Num::int(4), Num::int(1), Num::int(0)]);
    assert_eq!(b.volume, Some(Num::int(0)));
    let json = serde_json::to_value(property_report(&a, &[]).unwrap()).unwrap();
    assert_eq!(json["box"]["perimeter"], "20");
}
