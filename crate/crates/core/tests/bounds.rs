use std::collections::BTreeSet;
use std::f64::consts::{PI, SQRT_2};

use minfill::bounds::{
    bound_for, enumerate_face_configs, global_bound, merge_sides, reference_bounds, BoundsError, CaseTag,
    ExclusionReason, FaceConfig, MergeRule,
};
use minfill::hypgeom::regular_polygon_perimeter;
use minfill::numeric::acosh;

fn l0() -> f64 {
    6.0 * acosh(3.5)
}

fn octagons() -> f64 {
    8.0 * acosh(1.0 + SQRT_2)
}

/// Every multiset of `f` even sizes `>= 4` summing to `4(f + 2)`, built by
/// plain recursion over non-decreasing sequences.
fn brute_force(f: usize) -> BTreeSet<Vec<u32>> {
    fn go(left: usize, remaining: u32, min: u32, acc: &mut Vec<u32>, out: &mut BTreeSet<Vec<u32>>) {
        if left == 0 {
            if remaining == 0 {
                out.insert(acc.clone());
            }
            return;
        }
        let mut s = min;
        while s * left as u32 <= remaining {
            acc.push(s);
            go(left - 1, remaining - s, s, acc, out);
            acc.pop();
            s += 2;
        }
    }
    let mut out = BTreeSet::new();
    go(f, 4 * (f as u32 + 2), 4, &mut Vec::new(), &mut out);
    out
}

fn cfg(s: &[u32]) -> FaceConfig {
    FaceConfig::new(s.to_vec()).unwrap()
}

#[test]
fn enumerator_matches_brute_force() {
    let all = enumerate_face_configs(8);
    for f in 1..=8 {
        let ours: BTreeSet<Vec<u32>> = all.iter().filter(|c| c.f == f).map(|c| c.sizes.clone()).collect();
        assert_eq!(ours, brute_force(f), "f = {f}");
    }
}

#[test]
fn configs_satisfy_counting_rules() {
    for c in enumerate_face_configs(10) {
        assert_eq!(c.sizes.iter().sum::<u32>() as usize, 4 * (c.f + 2));
        let excess: u32 = c.sizes.iter().map(|s| 4 * (s / 4 - 1) + s % 4).sum();
        assert_eq!(excess, 8, "{c}");
        assert!(c.sizes.iter().all(|s| s % 2 == 0 && *s >= 4));
    }
}

#[test]
fn single_face_scan() {
    // Σ = 12 forces one 12-gon; it needs only 3 intersections
    let one = enumerate_face_configs(1);
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].sizes, vec![12]);
    assert_eq!(one[0].case_tag, CaseTag::OneK3);
    assert_eq!(one[0].intersections(), 3);
}

#[test]
fn two_face_configs() {
    let two: Vec<Vec<u32>> = enumerate_face_configs(2).into_iter().filter(|c| c.f == 2).map(|c| c.sizes).collect();
    assert_eq!(two, vec![vec![4, 12], vec![6, 10], vec![8, 8]]);
    assert!(enumerate_face_configs(4).iter().any(|c| c.sizes == vec![6, 6, 6, 6]));
}

#[test]
fn four_k_face_or_exception() {
    for c in enumerate_face_configs(10) {
        let has_4k = c.sizes.iter().any(|s| s % 4 == 0 && *s <= 12);
        let exception = c.sizes == vec![6, 6, 6, 6] || c.sizes == vec![6, 10];
        assert!(has_4k || exception, "{c}");
        assert!(!(has_4k && exception));
    }
}

#[test]
fn merge_outputs_sum_to_sixteen() {
    for c in enumerate_face_configs(10).into_iter().filter(|c| c.f >= 2) {
        for i in c.fixable_faces() {
            let (p, q) = merge_sides(&c, i).unwrap();
            assert_eq!(p + q, 16, "{c} fixing {i}");
            assert!(p >= 4 && q >= 4);
            assert_eq!(p, c.sizes[i]);
        }
    }
    let c = cfg(&[4, 4, 6, 6, 8]);
    // 28 sides, drop the fixed 8-gon, three gluings remove 4 each
    assert_eq!(merge_sides(&c, 4).unwrap(), (8, 28 - 8 - 4 * 3));
    assert!(matches!(merge_sides(&cfg(&[6, 6, 6, 6]), 0), Err(BoundsError::NotApplicable(_))));
}

#[test]
fn certificate_examples() {
    let hex = bound_for(&cfg(&[6, 6, 6, 6]), false).unwrap();
    assert_eq!(hex.rule_applied, MergeRule::HexagonPairing);
    assert!((hex.bound - octagons()).abs() < 1e-9);
    assert!((hex.bound - 12.228567).abs() < 1e-6);

    let ft = bound_for(&cfg(&[4, 12]), false).unwrap();
    assert_eq!(ft.merged_pair, (4, 12));
    assert!((ft.bound - 11.5490838).abs() < 1e-5);

    let ee = bound_for(&cfg(&[8, 8]), false).unwrap();
    assert_eq!(ee.merged_pair, (8, 8));
    assert!((ee.bound - 12.228567).abs() < 1e-6);

    let tw = bound_for(&cfg(&[4, 4, 12]), false).unwrap();
    assert!((tw.bound - l0()).abs() < 1e-9);
}

#[test]
fn area_splits() {
    let refs = reference_bounds().unwrap();
    for c in enumerate_face_configs(10) {
        let Ok(cert) = bound_for(&c, false) else { continue };
        assert!((cert.area_split[0] + cert.area_split[1] - 4.0 * PI).abs() < 1e-12);
        if cert.merged_pair == (4, 12) {
            // the square is the regular quadrilateral with angle θ*, so its
            // perimeter is 4l with cosh l = 3/2
            let per = regular_polygon_perimeter(4, cert.area_split[0]).unwrap();
            assert!((per - 4.0 * acosh(1.5)).abs() < 1e-7);
            assert!((refs.theta_412 - 0.2f64.acos()).abs() < 1e-6);
        }
    }
}

#[test]
fn global_bound_is_l0() {
    let g = global_bound(10).unwrap();
    assert!((g.length - l0()).abs() < 1e-9);
    assert_eq!(g.argmin.sizes, vec![4, 12]);
    for c in &g.certificates {
        assert!(c.bound >= l0() - 1e-9, "{}", c.config);
    }
    assert!(l0() < octagons());
    let excluded: Vec<(Vec<u32>, ExclusionReason)> =
        g.excluded.iter().map(|e| (e.config.sizes.clone(), e.reason)).collect();
    assert_eq!(
        excluded,
        vec![
            (vec![12], ExclusionReason::TooFewIntersections),
            (vec![6, 10], ExclusionReason::TopologicallyExcluded),
        ]
    );
}

#[test]
fn global_bound_small_f_max() {
    let g = global_bound(2).unwrap();
    let sizes: Vec<Vec<u32>> = g.certificates.iter().map(|c| c.config.sizes.clone()).collect();
    assert_eq!(sizes, vec![vec![4, 12], vec![8, 8]]);
    assert!((g.length - l0()).abs() < 1e-9);
    assert!(matches!(global_bound(1), Err(BoundsError::FMaxTooSmall(1))));
}

#[test]
fn separating_pairs_give_two_octagons() {
    for c in enumerate_face_configs(6).into_iter().filter(|c| c.f >= 2) {
        let cert = bound_for(&c, true).unwrap();
        assert_eq!(cert.rule_applied, MergeRule::SeparatingForest);
        assert_eq!(cert.merged_pair, (8, 8));
        assert!(cert.bound > l0());
    }
}

#[test]
fn certificates_serialize() {
    let cert = bound_for(&cfg(&[4, 12]), false).unwrap();
    let v = serde_json::to_value(&cert).unwrap();
    assert_eq!(v["case_tag"], "one-k3");
    assert_eq!(v["rule_applied"], "spread-tree-merge");
    assert_eq!(v["merged_pair"], serde_json::json!([4, 12]));
    assert_eq!(v["bound"], serde_json::json!(11.5490838014));
}
