//! Exhaustive enumeration of genus-two minimal filling pairs as fat graphs.
//!
//! A minimal filling pair on the genus-two surface meets in four points, so
//! `α ∪ β` is a 4-valent fat graph with four vertices and eight edges in which
//! both curves are standard cycles. We fix the labeling convention
//!
//! * vertices `v1..v4`, arc `αᵢ` runs from `vᵢ` to `vᵢ₊₁` (indices mod 4);
//! * `β₁` starts at `v1` and β visits the four vertices in one of the six
//!   cyclic orders that start at `v1`;
//! * each vertex rotation is `(αᵢ, X, αᵢ₋₁⁻¹, Y)` where `{X, Y}` is the pair of
//!   β darts at that vertex, in one of two interleavings.
//!
//! That gives `6 · 2⁴ = 96` candidate rotation systems. Candidates whose
//! thickening does not have exactly two disk faces, or has a bigon face, are
//! discarded; the survivors are classified by face sizes and grouped into
//! classes under relabeling.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::fatgraph::{
    format_cycle, BoundaryDecomposition, Curve, DartLabel, Direction, FatGraph,
};
use crate::perm::Permutation;

/// Arcs per curve for a genus-two minimal filling pair.
pub const ARCS: u32 = 4;
/// Darts of the fat graph `α ∪ β`.
pub const DARTS: usize = 4 * ARCS as usize;

/// The cyclic β vertex orders starting at `v1`, in lexicographic order.
const BETA_ORDERS: [[u32; 4]; 6] = [
    [1, 2, 3, 4],
    [1, 2, 4, 3],
    [1, 3, 2, 4],
    [1, 3, 4, 2],
    [1, 4, 2, 3],
    [1, 4, 3, 2],
];

/// Rotation systems of the eight configurations worked out by hand in the
/// classification, in the text format of [`crate::fatgraph::parse_fat_graph`].
pub const REFERENCE_CASES: [&str; 8] = [
    include_str!("../data/case1.fg"),
    include_str!("../data/case2.fg"),
    include_str!("../data/case3.fg"),
    include_str!("../data/case4.fg"),
    include_str!("../data/case5.fg"),
    include_str!("../data/case6.fg"),
    include_str!("../data/case7.fg"),
    include_str!("../data/case8.fg"),
];

/// Parsed reference case `k` (1-based).
pub fn reference_case(k: usize) -> FatGraph {
    REFERENCE_CASES[k - 1]
        .parse()
        .expect("bundled reference case parses")
}

/// Face-size multiset of a two-face configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FaceType {
    FourTwelve,
    SixTen,
    EightEight,
}

impl FaceType {
    pub fn from_sizes(sizes: [usize; 2]) -> Option<FaceType> {
        match sizes {
            [4, 12] => Some(FaceType::FourTwelve),
            [6, 10] => Some(FaceType::SixTen),
            [8, 8] => Some(FaceType::EightEight),
            _ => None,
        }
    }
}

impl fmt::Display for FaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FaceType::FourTwelve => "{4,12}",
            FaceType::SixTen => "{6,10}",
            FaceType::EightEight => "{8,8}",
        })
    }
}

impl Serialize for FaceType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Relabelings under which two configurations count as the same filling pair.
///
/// Each flag switches one generator of the group on or off. The default is
/// the orientation-preserving group generated by index shifts on each curve,
/// direction reversal of each curve, and exchanging the two curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SymmetryGroup {
    pub shift_alpha: bool,
    pub shift_beta: bool,
    pub reverse_curves: bool,
    pub swap_curves: bool,
    /// Also identify a configuration with its mirror image (`σ₀ ↦ σ₀⁻¹`).
    pub mirror: bool,
}

impl Default for SymmetryGroup {
    fn default() -> Self {
        SymmetryGroup {
            shift_alpha: true,
            shift_beta: true,
            reverse_curves: true,
            swap_curves: true,
            mirror: false,
        }
    }
}

impl SymmetryGroup {
    pub fn trivial() -> Self {
        SymmetryGroup {
            shift_alpha: false,
            shift_beta: false,
            reverse_curves: false,
            swap_curves: false,
            mirror: false,
        }
    }

    /// Index shifts only.
    pub fn shifts_only() -> Self {
        SymmetryGroup {
            shift_alpha: true,
            shift_beta: true,
            ..Self::trivial()
        }
    }

    fn generators(&self) -> Vec<fn(DartLabel) -> DartLabel> {
        let mut gens: Vec<fn(DartLabel) -> DartLabel> = Vec::new();
        if self.shift_alpha {
            gens.push(|l| shift(l, Curve::Alpha));
        }
        if self.shift_beta {
            gens.push(|l| shift(l, Curve::Beta));
        }
        if self.reverse_curves {
            gens.push(|l| reverse(l, Curve::Alpha));
            gens.push(|l| reverse(l, Curve::Beta));
        }
        if self.swap_curves {
            gens.push(|l| DartLabel {
                curve: l.curve.other(),
                ..l
            });
        }
        gens
    }

    /// All dart relabelings in the group (without the mirror), as
    /// permutations of the standard 16-dart layout.
    pub fn relabelings(&self) -> Vec<Permutation> {
        let labels = crate::fatgraph::standard_labels(ARCS, ARCS);
        let index = |l: DartLabel| labels.iter().position(|m| *m == l).expect("label in layout");
        let gens: Vec<Permutation> = self
            .generators()
            .into_iter()
            .map(|f| Permutation::from_images(labels.iter().map(|&l| index(f(l))).collect()).expect("generator is a bijection"))
            .collect();
        let id = Permutation::identity(labels.len());
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut elements = vec![id];
        let mut frontier = elements.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for g in &frontier {
                for h in &gens {
                    let gh = h.compose(g);
                    if seen.insert(gh.clone()) {
                        next.push(gh);
                    }
                }
            }
            elements.extend(next.iter().cloned());
            frontier = next;
        }
        elements
    }

    /// Group order, counting the mirror when enabled.
    pub fn order(&self) -> usize {
        self.relabelings().len() * if self.mirror { 2 } else { 1 }
    }
}

fn shift(l: DartLabel, curve: Curve) -> DartLabel {
    if l.curve != curve {
        return l;
    }
    DartLabel {
        arc: l.arc % ARCS + 1,
        ..l
    }
}

/// Traverse `curve` backwards: arc `i` becomes arc `2 - i (mod n)` with the
/// direction flipped. Arc 1 stays arc 1.
fn reverse(l: DartLabel, curve: Curve) -> DartLabel {
    if l.curve != curve {
        return l;
    }
    DartLabel {
        arc: (ARCS + 1 - l.arc) % ARCS + 1,
        direction: l.direction.flip(),
        ..l
    }
}

/// Why a candidate rotation system is not a minimal filling pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rejection {
    WrongDartLayout,
    Invalid(String),
    NotFourValent,
    NotAlternating,
    NotStandard(Curve),
    FaceCount(usize),
    OddFace(usize),
    Bigon,
    Genus(u32),
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::WrongDartLayout => write!(f, "not two curves of {ARCS} arcs each"),
            Rejection::Invalid(v) => write!(f, "invalid fat graph: {v}"),
            Rejection::NotFourValent => write!(f, "not four 4-valent vertices"),
            Rejection::NotAlternating => write!(f, "rotation does not alternate alpha and beta"),
            Rejection::NotStandard(c) => write!(f, "{c:?} is not a standard cycle"),
            Rejection::FaceCount(n) => write!(f, "{n} faces instead of 2"),
            Rejection::OddFace(n) => write!(f, "face of odd size {n}"),
            Rejection::Bigon => write!(f, "bigon face"),
            Rejection::Genus(g) => write!(f, "genus {g} instead of 2"),
        }
    }
}

/// A validated minimal filling pair on the genus-two surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FillingConfiguration {
    pub graph: FatGraph,
    pub boundary: BoundaryDecomposition,
    /// Sizes of the two faces, ascending. Always sums to 16.
    pub face_sizes: [usize; 2],
    pub type_tag: FaceType,
    pub canonical_key: String,
}

impl FillingConfiguration {
    /// Checks every requirement on `graph` and computes its canonical key
    /// under `group`.
    pub fn new(graph: FatGraph, group: &SymmetryGroup) -> Result<Self, Rejection> {
        if graph.labels() != crate::fatgraph::standard_labels(ARCS, ARCS).as_slice() {
            return Err(Rejection::WrongDartLayout);
        }
        graph
            .validate()
            .map_err(|v| Rejection::Invalid(v.to_string()))?;
        let rotations = graph.vertices();
        if rotations.len() != ARCS as usize || rotations.iter().any(|r| r.len() != 4) {
            return Err(Rejection::NotFourValent);
        }
        let s0 = graph.sigma0();
        if (0..graph.n_darts()).any(|d| graph.label(d).curve == graph.label(s0.apply(d)).curve) {
            return Err(Rejection::NotAlternating);
        }
        for curve in [Curve::Alpha, Curve::Beta] {
            if !is_standard_cycle(&graph, curve) {
                return Err(Rejection::NotStandard(curve));
            }
        }
        let boundary = graph.boundary_cycles().map_err(|e| Rejection::Invalid(e.to_string()))?;
        if let Some(&odd) = boundary.face_sizes.iter().find(|&&s| s % 2 == 1) {
            return Err(Rejection::OddFace(odd));
        }
        if boundary.len() != 2 {
            return Err(Rejection::FaceCount(boundary.len()));
        }
        if boundary.face_sizes.contains(&2) {
            return Err(Rejection::Bigon);
        }
        let genus = graph.genus().map_err(|e| Rejection::Invalid(e.to_string()))?;
        if genus != 2 {
            return Err(Rejection::Genus(genus));
        }
        let face_sizes = [boundary.face_sizes[0], boundary.face_sizes[1]];
        let type_tag = FaceType::from_sizes(face_sizes)
            .expect("two even faces of size >= 4 summing to 16");
        let canonical_key = canonical_key(&graph, group);
        Ok(FillingConfiguration {
            graph,
            boundary,
            face_sizes,
            type_tag,
            canonical_key,
        })
    }
}

/// Consecutive arcs of `curve` sit opposite each other in the rotation at
/// their common vertex: `σ₀²(cᵢ₊₁) = cᵢ⁻¹`.
fn is_standard_cycle(graph: &FatGraph, curve: Curve) -> bool {
    let s0 = graph.sigma0();
    (1..=ARCS).all(|i| {
        let next = DartLabel::new(curve, i % ARCS + 1, Direction::Forward);
        let back = DartLabel::new(curve, i, Direction::Inverse);
        match (graph.dart(next), graph.dart(back)) {
            (Some(n), Some(b)) => s0.apply(s0.apply(n)) == b,
            _ => false,
        }
    })
}

/// Number of intersection points of α and β, i.e. the vertex count.
pub fn intersection_number(c: &FillingConfiguration) -> usize {
    c.graph.vertex_count()
}

type FaceKey = Vec<(usize, Vec<DartLabel>)>;

fn face_key(b: &BoundaryDecomposition) -> FaceKey {
    let mut faces: FaceKey = b.words.iter().map(|w| (w.len(), w.clone())).collect();
    faces.sort();
    faces
}

/// Least boundary-word list over the orbit of `graph` under `group`.
///
/// Faces are sorted by size and then lexicographically, each word rotated to
/// its least label. The result is serialized as concatenated cycles, e.g.
/// `(a1 b3 A3 B1)(A1 B4 …)`.
pub fn canonical_key(graph: &FatGraph, group: &SymmetryGroup) -> String {
    let mut best: Option<FaceKey> = None;
    for g in group.relabelings() {
        let renamed = graph.renamed(&g);
        let mirrored = group.mirror.then(|| renamed.mirrored());
        for h in std::iter::once(renamed).chain(mirrored) {
            let Ok(b) = h.boundary_cycles() else { continue };
            let key = face_key(&b);
            if best.as_ref().is_none_or(|cur| key < *cur) {
                best = Some(key);
            }
        }
    }
    best.unwrap_or_default()
        .iter()
        .map(|(_, w)| format_cycle(w))
        .collect()
}

/// Rotation system for candidate `(order, interleaving)`, `order < 6`,
/// `interleaving < 16`. Bit `v-1` of `interleaving` selects whether the
/// outgoing β dart directly follows `αᵥ` in the rotation at `vᵥ`.
pub fn candidate(order: usize, interleaving: u32) -> FatGraph {
    let labels = crate::fatgraph::standard_labels(ARCS, ARCS);
    let id = |l: DartLabel| labels.iter().position(|m| *m == l).expect("label in layout");
    let visit = BETA_ORDERS[order];
    let prev = |i: u32| (i + ARCS - 2) % ARCS + 1;
    let rotations: Vec<[usize; 4]> = (1..=ARCS)
        .map(|v| {
            let j = visit.iter().position(|&u| u == v).expect("every vertex visited") as u32 + 1;
            let a_out = id(DartLabel::alpha(v));
            let a_in = id(DartLabel::alpha(prev(v)).inv());
            let b_out = id(DartLabel::beta(j));
            let b_in = id(DartLabel::beta(prev(j)).inv());
            if interleaving >> (v - 1) & 1 == 1 {
                [a_out, b_out, a_in, b_in]
            } else {
                [a_out, b_in, a_in, b_out]
            }
        })
        .collect();
    let sigma0 = Permutation::from_cycles(DARTS, &rotations).expect("rotations partition the darts");
    FatGraph::standard(ARCS, ARCS, sigma0)
}

/// All 96 candidate rotation systems in enumeration order.
pub fn candidates() -> Vec<FatGraph> {
    (0..BETA_ORDERS.len())
        .flat_map(|o| (0..16).map(move |b| candidate(o, b)))
        .collect()
}

/// Outcome of scanning the candidate space.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub candidates: usize,
    pub rejected: BTreeMap<String, usize>,
    pub configurations: Vec<FillingConfiguration>,
}

/// Surviving configurations under the default symmetry group.
pub fn enumerate_raw() -> Vec<FillingConfiguration> {
    enumerate_with(&SymmetryGroup::default(), 1).configurations
}

/// Scans every candidate, optionally on `jobs` threads. The output order is
/// the candidate order regardless of `jobs`.
pub fn enumerate_with(group: &SymmetryGroup, jobs: usize) -> Enumeration {
    let all = candidates();
    let total = all.len();
    let jobs = jobs.clamp(1, total);
    let chunk = total.div_ceil(jobs);
    let mut results: Vec<(usize, Result<FillingConfiguration, Rejection>)> =
        std::thread::scope(|scope| {
            let handles: Vec<_> = all
                .chunks(chunk)
                .enumerate()
                .map(|(k, part)| {
                    scope.spawn(move || {
                        part.iter()
                            .enumerate()
                            .map(|(i, g)| (k * chunk + i, FillingConfiguration::new(g.clone(), group)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("enumeration worker panicked"))
                .collect()
        });
    results.sort_by_key(|(i, _)| *i);

    let mut rejected = BTreeMap::new();
    let mut configurations = Vec::new();
    for (_, r) in results {
        match r {
            Ok(c) => configurations.push(c),
            Err(why) => *rejected.entry(why.to_string()).or_insert(0) += 1,
        }
    }
    Enumeration {
        candidates: total,
        rejected,
        configurations,
    }
}

/// One class of configurations sharing a canonical key.
#[derive(Debug, Clone)]
pub struct OrbitClass {
    pub canonical_key: String,
    pub representative: FillingConfiguration,
    pub members: usize,
    pub type_tag: FaceType,
}

#[derive(Debug, Clone, Default)]
pub struct OrbitReport {
    pub raw_count: usize,
    pub classes: Vec<OrbitClass>,
}

/// Groups configurations by canonical key. Classes are ordered by key; the
/// representative is the first member in input order.
pub fn classify_orbits(cs: &[FillingConfiguration]) -> OrbitReport {
    let mut classes: BTreeMap<&str, OrbitClass> = BTreeMap::new();
    for c in cs {
        classes
            .entry(c.canonical_key.as_str())
            .and_modify(|k| k.members += 1)
            .or_insert_with(|| OrbitClass {
                canonical_key: c.canonical_key.clone(),
                representative: c.clone(),
                members: 1,
                type_tag: c.type_tag,
            });
    }
    OrbitReport {
        raw_count: cs.len(),
        classes: classes.into_values().collect(),
    }
}

impl OrbitReport {
    /// Class index of a canonical key.
    pub fn orbit_id(&self, key: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.canonical_key == key)
    }
}
