use std::collections::{BTreeMap, HashMap, HashSet};

use minfill::enumeration::{
    self, candidates, canonical_key, classify_orbits, enumerate_with, reference_case, FaceType,
    FillingConfiguration, SymmetryGroup,
};
use minfill::fatgraph::{standard_labels, Curve, DartLabel, Direction};
use minfill::Permutation;
use proptest::prelude::*;

fn labels() -> Vec<DartLabel> {
    standard_labels(4, 4)
}

/// Dart permutation induced by a label map on the standard layout.
fn relabel(f: impl Fn(DartLabel) -> DartLabel) -> Permutation {
    let l = labels();
    Permutation::from_images(l.iter().map(|&x| l.iter().position(|&y| y == f(x)).unwrap()).collect()).unwrap()
}

fn shift(curve: Curve) -> Permutation {
    relabel(|d| if d.curve == curve { DartLabel { arc: d.arc % 4 + 1, ..d } } else { d })
}

fn reversal(curve: Curve) -> Permutation {
    relabel(|d| {
        if d.curve != curve {
            return d;
        }
        let arc = (6 - d.arc) % 4 + 1;
        let direction = match d.direction {
            Direction::Forward => Direction::Inverse,
            Direction::Inverse => Direction::Forward,
        };
        DartLabel { arc, direction, ..d }
    })
}

fn swap() -> Permutation {
    relabel(|d| DartLabel {
        curve: match d.curve {
            Curve::Alpha => Curve::Beta,
            Curve::Beta => Curve::Alpha,
        },
        ..d
    })
}

/// Orbit count of the surviving rotation systems under the given generators.
///
/// Each survivor's full orbit is explored by flood fill on σ₀ alone; the
/// orbit may leave the candidate normal form, so survivors are grouped by
/// which of them the orbit reaches.
fn oracle_orbit_count(survivors: &[Permutation], gens: &[Permutation], mirror: bool) -> usize {
    let index: HashMap<&Permutation, usize> = survivors.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut seen = vec![false; survivors.len()];
    let mut orbits = 0;
    for start in 0..survivors.len() {
        if seen[start] {
            continue;
        }
        orbits += 1;
        let mut visited: HashSet<Permutation> = HashSet::from([survivors[start].clone()]);
        let mut stack = vec![survivors[start].clone()];
        while let Some(s) = stack.pop() {
            if let Some(&k) = index.get(&s) {
                seen[k] = true;
            }
            let mut images: Vec<Permutation> = gens.iter().map(|g| s.conjugate_by(g)).collect();
            if mirror {
                images.push(s.inverse());
            }
            for t in images {
                if visited.insert(t.clone()) {
                    stack.push(t);
                }
            }
        }
    }
    orbits
}

fn survivors() -> Vec<FillingConfiguration> {
    enumerate_with(&SymmetryGroup::default(), 1).configurations
}

#[test]
fn raw_face_size_tally() {
    let mut tally: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let all = candidates();
    assert_eq!(all.len(), 96);
    for g in &all {
        *tally.entry(g.boundary_cycles().unwrap().face_sizes).or_default() += 1;
    }
    let expected: BTreeMap<Vec<usize>, usize> = [
        (vec![2, 2, 4, 8], 32),
        (vec![2, 14], 32),
        (vec![2, 2, 6, 6], 8),
        (vec![4, 12], 8),
        (vec![8, 8], 8),
        (vec![4, 4, 4, 4], 4),
        (vec![2, 2, 2, 2, 4, 4], 4),
    ]
    .into_iter()
    .collect();
    assert_eq!(tally, expected);
}

#[test]
fn survivors_split_evenly() {
    let s = survivors();
    assert_eq!(s.len(), 16);
    let four_twelve = s.iter().filter(|c| c.type_tag == FaceType::FourTwelve).count();
    let eight_eight = s.iter().filter(|c| c.type_tag == FaceType::EightEight).count();
    assert_eq!((four_twelve, eight_eight), (8, 8));
    for c in &s {
        assert_eq!(c.graph.genus().unwrap(), 2);
        assert_eq!(enumeration::intersection_number(c), 4);
    }
}

#[test]
fn class_counts_match_flood_fill_oracle() {
    let s: Vec<Permutation> = survivors().iter().map(|c| c.graph.sigma0().clone()).collect();
    let sa = shift(Curve::Alpha);
    let sb = shift(Curve::Beta);
    let ra = reversal(Curve::Alpha);
    let rb = reversal(Curve::Beta);
    let sw = swap();
    let cases: Vec<(SymmetryGroup, Vec<Permutation>, usize)> = vec![
        (SymmetryGroup::default(), vec![sa.clone(), sb.clone(), ra.clone(), rb.clone(), sw.clone()], 2),
        (
            SymmetryGroup { swap_curves: false, ..SymmetryGroup::default() },
            vec![sa.clone(), sb.clone(), ra.clone(), rb.clone()],
            3,
        ),
        (SymmetryGroup::shifts_only(), vec![sa.clone(), sb.clone()], 4),
        (SymmetryGroup { mirror: true, ..SymmetryGroup::default() }, vec![sa, sb, ra, rb, sw], 2),
        (SymmetryGroup::trivial(), vec![], 16),
    ];
    for (group, gens, expected) in cases {
        let run = enumerate_with(&group, 3);
        let report = classify_orbits(&run.configurations);
        let oracle = oracle_orbit_count(&s, &gens, group.mirror);
        assert_eq!(oracle, expected, "oracle for {group:?}");
        assert_eq!(report.classes.len(), expected, "classes for {group:?}");
        assert_eq!(report.raw_count, 16);
        let members: usize = report.classes.iter().map(|c| c.members).sum();
        assert_eq!(members, 16);
    }
}

#[test]
fn default_classes_are_one_per_type() {
    let report = classify_orbits(&survivors());
    let mut types: Vec<String> = report.classes.iter().map(|c| c.type_tag.to_string()).collect();
    types.sort();
    assert_eq!(types, ["{4,12}", "{8,8}"]);
    for c in &report.classes {
        assert_eq!(c.members, 8);
        assert_eq!(report.orbit_id(&c.canonical_key), report.classes.iter().position(|d| d.canonical_key == c.canonical_key));
    }
}

#[test]
fn group_orders() {
    assert_eq!(SymmetryGroup::trivial().order(), 1);
    assert_eq!(SymmetryGroup::shifts_only().order(), 16);
    assert_eq!(SymmetryGroup::default().order(), 128);
    assert_eq!(SymmetryGroup { mirror: true, ..SymmetryGroup::default() }.order(), 256);
}

#[test]
fn relabelings_commute_with_edge_involution() {
    let s1 = minfill::fatgraph::xor_involution(16);
    for g in SymmetryGroup::default().relabelings() {
        assert_eq!(g.compose(&s1), s1.compose(&g));
    }
}

#[test]
fn reference_cases_all_survive() {
    let raw: HashSet<Permutation> = survivors().iter().map(|c| c.graph.sigma0().clone()).collect();
    let group = SymmetryGroup::default();
    let expected_types = [
        FaceType::EightEight,
        FaceType::FourTwelve,
        FaceType::EightEight,
        FaceType::EightEight,
        FaceType::EightEight,
        FaceType::FourTwelve,
        FaceType::FourTwelve,
        FaceType::FourTwelve,
    ];
    for (k, ty) in (1..=8).zip(expected_types) {
        let g = reference_case(k);
        assert!(raw.contains(g.sigma0()), "case {k} not among survivors");
        let c = FillingConfiguration::new(g, &group).unwrap();
        assert_eq!(c.type_tag, ty, "case {k}");
    }
}

#[test]
fn shifting_case_two_gives_case_eight() {
    let shifted = reference_case(2).renamed(&shift(Curve::Alpha).compose(&shift(Curve::Beta)));
    let want = reference_case(8).boundary_cycles().unwrap().word_strings();
    assert_eq!(shifted.boundary_cycles().unwrap().word_strings(), want);
}

#[test]
fn no_six_ten_anywhere() {
    for g in candidates() {
        assert_ne!(g.boundary_cycles().unwrap().face_sizes, vec![6, 10]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_key_is_invariant(idx in 0usize..16, g_idx in 0usize..128) {
        let group = SymmetryGroup::default();
        let s = survivors();
        let c = &s[idx];
        let g = &group.relabelings()[g_idx];
        let moved = c.graph.renamed(g);
        prop_assert_eq!(canonical_key(&moved, &group), c.canonical_key.clone());
    }
}
