//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Pinned tolerances: exact-mode suites compare with no tolerance at all;
//! float comparisons in criterion 8 use ε = 1e-9 relative to
//! max(1, |a|, |b|). Time limits are measured on the first pass of each suite.

use std::f64::consts::TAU;
use std::fmt::Write;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use gwlkit::engines::{RefinementTrace, run_gwl, run_igwl, run_igwl_k, run_test, run_wl, TestKind, Verdict};
use gwlkit::generators::{gen_kchain, gen_lfold, gen_onehop_identical_pair, gen_triangles_vs_hexagon};
use gwlkit::properties::{bounding_box_metrics, centroid_distance_multiset};
use gwlkit::random::{self, connected_radial_graph, fully_connected, perturbed_copy, random_witness, unit_grid_graph};
use gwlkit::so2::{equivariant_sum_demo, planar_points, run_so2_gwl, so2_hash, So2Registry};
use gwlkit::oracle::geometric_isomorphism_oracle_with_cap;
use gwlkit::{apply_isometry, geometric_isomorphism_oracle, GeometricGraph, GroupSpec, Num, NumericMode, Vector};

const EPS: f64 = 1e-9;

struct Outcome {
    pass: bool,
    detail: String,
    /// Everything the suite computed, for the determinism check.
    transcript: String,
}

fn log_run(t: &mut String, label: &str, v: &Verdict) {
    let _ = writeln!(t, "{label}: {}", serde_json::to_string(v).unwrap());
}

fn log_full(t: &mut String, label: &str, r: &(Verdict, RefinementTrace)) {
    let _ = writeln!(t, "{label}: {}", serde_json::to_string(r).unwrap());
}

/// k-chain verdict grid.
fn criterion_1() -> Outcome {
    let mut t = String::new();
    let mut failures = Vec::new();
    let start = Instant::now();
    for k in 2..=8usize {
        let (a, b, _) = gen_kchain(k).unwrap();
        let group = GroupSpec::orthogonal(3);
        let split = k / 2 + 1;
        for budget in 1..=split {
            let r = run_gwl(&a, &b, group, Some(budget)).unwrap();
            log_full(&mut t, &format!("gwl k={k} budget={budget}"), &r);
            let ok = if budget < split {
                !r.0.is_distinguished()
            } else {
                r.0 == Verdict::Distinguished { iteration: split }
            };
            if !ok {
                failures.push(format!("gwl k={k} budget={budget}: {:?}", r.0));
            }
        }
        for budget in 1..=2 * (k + 2) {
            let r = run_igwl(&a, &b, group, Some(budget)).unwrap();
            log_run(&mut t, &format!("igwl k={k} budget={budget}"), &r.0);
            if r.0.is_distinguished() {
                failures.push(format!("igwl k={k} budget={budget}"));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(5) {
        failures.push(format!("took {elapsed:?}"));
    }
    finish(failures, format!("k = 2..8, {:.2}s", elapsed.as_secs_f64()), t)
}

/// Random connected radial pairs: GWL verdict equals the oracle's.
fn criterion_2() -> Outcome {
    let mut t = String::new();
    let mut failures = Vec::new();
    let mut rng = random::rng(2002);
    let start = Instant::now();
    let mut iso_count = 0;
    for trial in 0..200 {
        let d = 2 + trial % 2;
        let group = if trial % 4 < 2 { GroupSpec::orthogonal(d) } else { GroupSpec::special(d) };
        let n = rng.gen_range(2..=5);
        let den = if trial % 3 == 0 { 1 } else { 2 };
        let g = connected_radial_graph(&mut rng, n, d, NumericMode::Exact, den).unwrap();
        let h = match trial % 3 {
            0 => apply_isometry(&g, &random_witness(&mut rng, n, GroupSpec::orthogonal(d), NumericMode::Exact)).unwrap(),
            _ => perturbed_copy(&mut rng, &g, den).unwrap(),
        };
        let (iso, _) = geometric_isomorphism_oracle(&g, &h, group).unwrap();
        iso_count += iso as usize;
        let (v, _) = run_gwl(&g, &h, group, None).unwrap();
        log_run(&mut t, &format!("pair {trial} {group} oracle={iso}"), &v);
        if v.is_distinguished() == iso {
            failures.push(format!("pair {trial} ({group}, n={n}): oracle {iso}, gwl {v:?}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        failures.push(format!("took {elapsed:?}"));
    }
    finish(
        failures,
        format!("200 pairs, {iso_count} isomorphic, {:.2}s", elapsed.as_secs_f64()),
        t,
    )
}

/// Isometric copies give identical traces.
fn criterion_3() -> Outcome {
    let mut t = String::new();
    let mut failures = Vec::new();
    let mut rng = random::rng(3003);
    for group in [GroupSpec::orthogonal(3), GroupSpec::special(3)] {
        for trial in 0..100 {
            let n = rng.gen_range(2..=7);
            let g = connected_radial_graph(&mut rng, n, 3, NumericMode::Exact, 2).unwrap();
            let w = random_witness(&mut rng, n, group, NumericMode::Exact);
            let h = apply_isometry(&g, &w).unwrap();
            let other = perturbed_copy(&mut rng, &g, 2).unwrap();
            let (v, trace) = run_gwl(&g, &h, group, None).unwrap();
            log_run(&mut t, &format!("{group} {trial}"), &v);
            let same_hist = trace.iterations.iter().all(|r| r.histogram_1 == r.histogram_2);
            // against a third graph the copy behaves like the original; colour
            // ids follow first-seen order, so compare ids-free trace shapes
            let against_g = run_gwl(&g, &other, group, None).unwrap();
            let against_h = run_gwl(&h, &other, group, None).unwrap();
            log_full(&mut t, "third", &against_g);
            if v.is_distinguished() || !same_hist || shape(&against_g) != shape(&against_h) {
                failures.push(format!("{group} trial {trial}"));
            }
        }
    }
    finish(failures, "100 per group".into(), t)
}

/// Verdict plus, per iteration, the class count and the sorted class sizes of
/// each graph.
fn shape(r: &(Verdict, RefinementTrace)) -> (Verdict, Vec<(usize, Vec<usize>, Vec<usize>)>) {
    let sizes = |h: &gwlkit::engines::Histogram| {
        let mut s: Vec<usize> = h.0.iter().map(|&(_, n)| n).collect();
        s.sort_unstable();
        s
    };
    let per_iter = r
        .1
        .iterations
        .iter()
        .map(|i| (i.class_count, sizes(&i.histogram_1), sizes(&i.histogram_2)))
        .collect();
    (r.0, per_iter)
}

/// Fully connected graphs: IGWL matches GWL.
fn criterion_4() -> Outcome {
    let mut t = String::new();
    let mut failures = Vec::new();
    let mut rng = random::rng(4004);
    let mut split = 0;
    for trial in 0..50 {
        let d = 2 + trial % 2;
        let n = rng.gen_range(2..=6);
        let group = if trial % 2 == 0 { GroupSpec::orthogonal(d) } else { GroupSpec::special(d) };
        let g = fully_connected(&mut rng, n, d, NumericMode::Exact).unwrap();
        let h = match trial % 3 {
            0 => apply_isometry(&g, &random_witness(&mut rng, n, GroupSpec::orthogonal(d), NumericMode::Exact)).unwrap(),
            1 => fully_connected(&mut rng, n, d, NumericMode::Exact).unwrap(),
            _ => {
                // move one point
                let mut pts = g.positions().to_vec();
                pts[0] = random::random_vector(&mut rng, d, NumericMode::Exact);
                GeometricGraph::from_positions(d, pts, &g.edges()).unwrap()
            }
        };
        let (vi, _) = run_igwl(&g, &h, group, None).unwrap();
        let (vg, _) = run_gwl(&g, &h, group, None).unwrap();
        split += vg.is_distinguished() as usize;
        log_run(&mut t, &format!("{trial} igwl"), &vi);
        log_run(&mut t, &format!("{trial} gwl"), &vg);
        if vi.is_distinguished() != vg.is_distinguished() {
            failures.push(format!("trial {trial}: igwl {vi:?}, gwl {vg:?}"));
        }
    }
    finish(failures, format!("50 pairs, {split} distinguished"), t)
}

/// Equal edge lengths: IGWL_(2) matches WL; the triangle pair flips at k = 3.
fn criterion_5() -> Outcome {
    let mut t = String::new();
    let mut failures = Vec::new();
    let (a, b, _) = gen_triangles_vs_hexagon().unwrap();
    let o2 = GroupSpec::orthogonal(2);
    let wl = run_wl(&a, &b, None).unwrap().0;
    let k2 = run_igwl_k(&a, &b, o2, 2, None).unwrap().0;
    let k3 = run_igwl_k(&a, &b, o2, 3, None).unwrap().0;
    log_run(&mut t, "tri-hex wl", &wl);
    log_run(&mut t, "tri-hex k2", &k2);
    log_run(&mut t, "tri-hex k3", &k3);
    if wl.is_distinguished() || k2.is_distinguished() || !k3.is_distinguished() {
        failures.push(format!("tri-hex: wl {wl:?}, k=2 {k2:?}, k=3 {k3:?}"));
    }
    let mut rng = random::rng(5005);
    let mut split = 0;
    for trial in 0..50 {
        let d = 2 + trial % 2;
        let n = rng.gen_range(3..=8);
        let g = unit_grid_graph(&mut rng, n, d).unwrap();
        let h = unit_grid_graph(&mut rng, n, d).unwrap();
        let group = GroupSpec::orthogonal(d);
        let wl = run_wl(&g, &h, None).unwrap().0;
        let k2 = run_igwl_k(&g, &h, group, 2, None).unwrap().0;
        split += wl.is_distinguished() as usize;
        log_run(&mut t, &format!("{trial} wl"), &wl);
        log_run(&mut t, &format!("{trial} k2"), &k2);
        if wl != k2 {
            failures.push(format!("grid {trial}: wl {wl:?}, k=2 {k2:?}"));
        }
    }
    finish(failures, format!("tri-hex + 50 grids, {split} WL-distinguished"), t)
}

/// Body-order hierarchy.
fn criterion_6() -> Outcome {
    let mut t = String::new();
    let mut failures = Vec::new();
    let mut rng = random::rng(6006);
    let mut counts = [0usize; 5];
    for trial in 0..100 {
        let d = 2 + trial % 2;
        let group = if trial % 4 < 2 { GroupSpec::orthogonal(d) } else { GroupSpec::special(d) };
        let n = rng.gen_range(3..=6);
        let (g, h) = if trial % 2 == 0 {
            let g = connected_radial_graph(&mut rng, n, d, NumericMode::Exact, 2).unwrap();
            let h = perturbed_copy(&mut rng, &g, 2).unwrap();
            (g, h)
        } else {
            let g = unit_grid_graph(&mut rng, n, d).unwrap();
            (g, unit_grid_graph(&mut rng, n, d).unwrap())
        };
        let kinds = [TestKind::Wl, TestKind::IgwlK(2), TestKind::IgwlK(3), TestKind::IgwlK(4), TestKind::Igwl];
        let verdicts: Vec<bool> = kinds
            .iter()
            .map(|&k| run_test(k, &g, &h, group, None).unwrap().0.is_distinguished())
            .collect();
        let _ = writeln!(t, "{trial}: {verdicts:?}");
        for (c, &v) in counts.iter_mut().zip(&verdicts) {
            *c += v as usize;
        }
        for w in 0..kinds.len() - 1 {
            if verdicts[w] && !verdicts[w + 1] {
                failures.push(format!("pair {trial}: {} distinguishes, {} does not", kinds[w], kinds[w + 1]));
            }
        }
    }
    finish(
        failures,
        format!("100 pairs, distinguished counts wl/2/3/4/igwl = {counts:?}"),
        t,
    )
}

/// Properties first-hop invariants miss.
fn criterion_7() -> Outcome {
    let mut t = String::new();
    let mut failures = Vec::new();
    let (a, b, _) = gen_onehop_identical_pair().unwrap();
    let v = run_igwl(&a, &b, GroupSpec::orthogonal(3), None).unwrap().0;
    log_run(&mut t, "igwl", &v);
    let (da, db) = (centroid_distance_multiset(&a).unwrap(), centroid_distance_multiset(&b).unwrap());
    let (ba, bb) = (bounding_box_metrics(&a).unwrap(), bounding_box_metrics(&b).unwrap());
    let _ = writeln!(t, "{}\n{}", serde_json::to_string(&(&da, &db)).unwrap(), serde_json::to_string(&(&ba, &bb)).unwrap());
    if v.is_distinguished() {
        failures.push("igwl separated the one-hop identical pair".into());
    }
    if da == db {
        failures.push("centroid distances agree".into());
    }
    if ba == bb {
        failures.push("bounding boxes agree".into());
    }
    let cloud: Vec<Vector> = [[0, 0, 0], [4, 2, 2], [1, 2, 0], [3, 0, 1]]
        .iter()
        .map(|p| Vector::from_ints(p))
        .collect();
    let m = bounding_box_metrics(&GeometricGraph::from_positions(3, cloud, &[]).unwrap()).unwrap();
    let _ = writeln!(t, "{}", serde_json::to_string(&m).unwrap());
    if (m.perimeter.clone(), m.area.clone(), m.volume.clone()) != (Num::int(32), Num::int(40), Some(Num::int(16))) {
        failures.push(format!("extents (4,2,2) gave {m:?}"));
    }
    finish(failures, "one-hop pair and (32, 40, 16)".into(), t)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EPS * a.abs().max(b.abs()).max(1.0)
}

fn rotate(p: [f64; 2], angle: f64) -> [f64; 2] {
    let (s, c) = angle.sin_cos();
    [c * p[0] - s * p[1], s * p[0] + c * p[1]]
}

/// A random planar multiset; every third one is built with a 2-, 3- or
/// 4-fold rotational symmetry.
fn random_multiset<R: Rng>(rng: &mut R) -> Vec<[f64; 2]> {
    let m = rng.gen_range(1..=4);
    let base: Vec<[f64; 2]> = (0..m).map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
    if rng.gen_bool(1.0 / 3.0) {
        let fold = rng.gen_range(2..=4);
        (0..fold)
            .flat_map(|j| base.iter().map(move |&p| rotate(p, TAU * j as f64 / fold as f64)))
            .collect()
    } else {
        base
    }
}

fn with_origin(x: &[[f64; 2]]) -> GeometricGraph {
    let mut scalars = vec![vec!["origin".to_string()]];
    let mut pts = vec![Vector::from_f64s(&[0.0, 0.0])];
    for p in x {
        scalars.push(vec!["point".to_string()]);
        pts.push(Vector::from_f64s(p));
    }
    GeometricGraph::new(2, scalars, vec![Vec::new(); pts.len()], pts, &[]).unwrap()
}

/// SO(2) encoding laws, SO(2)-GWL against GWL, and the sum demo.
fn criterion_8() -> Outcome {
    let mut t = String::new();
    let mut failures = Vec::new();
    let mut rng = random::rng(8008);
    let so2 = GroupSpec::special(2);
    let mut matched_orbits = 0;
    for sample in 0..200 {
        let mut reg = So2Registry::new();
        let x = random_multiset(&mut rng);
        let beta = rng.gen_range(0.0..TAU);
        let hx = so2_hash(&x, &mut reg);
        let rx: Vec<[f64; 2]> = x.iter().map(|&p| rotate(p, beta)).collect();
        let hr = so2_hash(&rx, &mut reg);
        let expected = rotate(hx.vector, beta * hx.frequency as f64);
        let _ = writeln!(t, "{sample}: {:?} {:?}", hx, hr);
        if !close(hx.norm, hr.norm) || !close(expected[0], hr.vector[0]) || !close(expected[1], hr.vector[1]) {
            failures.push(format!("equivariance sample {sample}: {hx:?} vs {hr:?}, beta {beta}"));
        }
        // orbit law against the oracle: a rotated copy, a reflected copy or
        // an unrelated multiset of the same size
        let y: Vec<[f64; 2]> = match sample % 3 {
            0 => x.iter().map(|&p| rotate(p, rng.gen_range(0.0..TAU))).collect(),
            1 => x.iter().map(|&p| [p[0], -p[1]]).collect(),
            _ => (0..x.len()).map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect(),
        };
        let hy = so2_hash(&y, &mut reg);
        let same_norm = close(hx.norm, hy.norm);
        let iso = geometric_isomorphism_oracle_with_cap(&with_origin(&x), &with_origin(&y), so2, 32).unwrap().0;
        matched_orbits += iso as usize;
        if same_norm != iso {
            failures.push(format!("orbit law sample {sample}: norms equal {same_norm}, oracle {iso}"));
        }
    }

    let mut agree = 0;
    for trial in 0..100 {
        let n = rng.gen_range(2..=5);
        let g = connected_radial_graph(&mut rng, n, 2, NumericMode::Exact, 2).unwrap();
        let h = match trial % 3 {
            0 => apply_isometry(&g, &random_witness(&mut rng, n, GroupSpec::orthogonal(2), NumericMode::Exact)).unwrap(),
            _ => perturbed_copy(&mut rng, &g, 2).unwrap(),
        };
        let a = run_so2_gwl(&g, &h, None).unwrap().0;
        let b = run_gwl(&g, &h, so2, None).unwrap().0;
        log_run(&mut t, &format!("so2 {trial}"), &a);
        if a.is_distinguished() == b.is_distinguished() {
            agree += 1;
        } else {
            failures.push(format!("pair {trial}: so2 {a:?}, gwl {b:?}"));
        }
    }

    for l in 2..=10usize {
        let alpha = rng.gen_range(0.0..TAU);
        let g = gen_lfold(l, alpha, l, 2).unwrap();
        let s = equivariant_sum_demo(&planar_points(&g).unwrap());
        let _ = writeln!(t, "L={l}: {s:?}");
        if !close(s[0], 0.0) || !close(s[1], 0.0) {
            failures.push(format!("sum for L = {l} is {s:?}"));
        }
    }
    finish(
        failures,
        format!("200 hash samples ({matched_orbits} same-orbit), {agree}/100 verdicts agree, L = 2..10"),
        t,
    )
}

fn finish(failures: Vec<String>, summary: String, transcript: String) -> Outcome {
    let pass = failures.is_empty();
    let detail = if pass {
        summary
    } else {
        let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
        format!("{summary}; {} failure(s): {}", failures.len(), shown.join("; "))
    };
    Outcome {
        pass,
        detail,
        transcript,
    }
}

type Suite = (&'static str, fn() -> Outcome);

const SUITES: [Suite; 8] = [
    ("k-chains: GWL splits at floor(k/2)+1, IGWL never", criterion_1),
    ("GWL agrees with the isomorphism oracle on 200 radial pairs", criterion_2),
    ("isometric copies give identical traces", criterion_3),
    ("fully connected: IGWL verdict equals GWL verdict", criterion_4),
    ("equal edge lengths: IGWL_(2) equals WL; triangles/hexagon flips at k = 3", criterion_5),
    ("body-order hierarchy is monotone", criterion_6),
    ("one-hop identical pair: IGWL blind, global properties differ; (32, 40, 16)", criterion_7),
    ("SO(2) hash laws, SO(2)-GWL equals GWL, symmetric sums vanish", criterion_8),
];

fn main() -> ExitCode {
    let mut all_pass = true;
    let mut transcripts = Vec::new();
    for (i, (name, suite)) in SUITES.iter().enumerate() {
        let out = suite();
        all_pass &= out.pass;
        println!(
            "criterion {} [{}] {name} ({})",
            i + 1,
            if out.pass { "PASS" } else { "FAIL" },
            out.detail
        );
        transcripts.push(out.transcript);
    }
    let repeat: Vec<String> = SUITES.iter().map(|(_, suite)| suite().transcript).collect();
    let differing: Vec<usize> = (0..SUITES.len()).filter(|&i| transcripts[i] != repeat[i]).map(|i| i + 1).collect();
    let bytes: usize = transcripts.iter().map(String::len).sum();
    let pass = differing.is_empty();
    all_pass &= pass;
    println!(
        "criterion 9 [{}] determinism: suites 1-8 bit-identical across two runs ({})",
        if pass { "PASS" } else { "FAIL" },
        if pass {
            format!("{bytes} transcript bytes compared")
        } else {
            format!("suites {differing:?} differ")
        }
    );
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
