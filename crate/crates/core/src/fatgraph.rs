//! Permutation model of a fat graph (ribbon graph).
//!
//! A fat graph is a dart set with two permutations: `sigma1`, the
//! fixed-point-free involution pairing each dart with its reverse, and
//! `sigma0`, whose cycles are the counterclockwise rotations of outgoing darts
//! around each vertex. Boundary components of the thickened graph are the
//! cycles of `d ↦ sigma0(sigma1(d))`.
//!
//! Darts carry labels `(curve, arc, direction)` so that the union of two
//! curves `α ∪ β` can be written the usual way: `a3` is the arc `α₃`
//! traversed forward, `B2` is `β₂⁻¹`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Curve {
    Alpha,
    Beta,
}

impl Curve {
    pub fn other(self) -> Curve {
        match self {
            Curve::Alpha => Curve::Beta,
            Curve::Beta => Curve::Alpha,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Inverse,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Inverse,
            Direction::Inverse => Direction::Forward,
        }
    }
}

/// Label of a dart: which curve, which arc of that curve (1-based), and in
/// which direction the arc is traversed.
///
/// Labels order by curve, then arc, then direction, so `a1 < A1 < a2 < … < b1`.
/// This is the order used to rotate boundary words into canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DartLabel {
    pub curve: Curve,
    pub arc: u32,
    pub direction: Direction,
}

impl DartLabel {
    pub fn new(curve: Curve, arc: u32, direction: Direction) -> Self {
        DartLabel {
            curve,
            arc,
            direction,
        }
    }

    pub fn alpha(arc: u32) -> Self {
        Self::new(Curve::Alpha, arc, Direction::Forward)
    }

    pub fn beta(arc: u32) -> Self {
        Self::new(Curve::Beta, arc, Direction::Forward)
    }

    pub fn inv(self) -> Self {
        DartLabel {
            direction: self.direction.flip(),
            ..self
        }
    }
}

impl fmt::Display for DartLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match (self.curve, self.direction) {
            (Curve::Alpha, Direction::Forward) => 'a',
            (Curve::Alpha, Direction::Inverse) => 'A',
            (Curve::Beta, Direction::Forward) => 'b',
            (Curve::Beta, Direction::Inverse) => 'B',
        };
        write!(f, "{c}{}", self.arc)
    }
}

impl FromStr for DartLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let (curve, direction) = match chars.next() {
            Some('a') => (Curve::Alpha, Direction::Forward),
            Some('A') => (Curve::Alpha, Direction::Inverse),
            Some('b') => (Curve::Beta, Direction::Forward),
            Some('B') => (Curve::Beta, Direction::Inverse),
            _ => return Err(format!("bad dart `{s}`: expected a, A, b or B followed by an arc index")),
        };
        let arc: u32 = chars
            .as_str()
            .parse()
            .map_err(|_| format!("bad arc index in dart `{s}`"))?;
        if arc == 0 {
            return Err(format!("arc indices start at 1, got `{s}`"));
        }
        Ok(DartLabel::new(curve, arc, direction))
    }
}

impl Serialize for DartLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DartLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which fat-graph invariant failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    EmptyOrOddDartCount,
    LengthMismatch,
    Sigma0NotPermutation,
    Sigma1NotPermutation,
    Sigma1HasFixedPoint,
    Sigma1NotInvolution,
    DuplicateLabel,
    PartnerLabelMismatch,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::EmptyOrOddDartCount => "dart count must be even and positive",
            ViolationKind::LengthMismatch => "sigma0, sigma1 and labels disagree on the dart count",
            ViolationKind::Sigma0NotPermutation => "sigma0 is not a permutation",
            ViolationKind::Sigma1NotPermutation => "sigma1 is not a permutation",
            ViolationKind::Sigma1HasFixedPoint => "sigma1 not fixed-point-free",
            ViolationKind::Sigma1NotInvolution => "sigma1 not an involution",
            ViolationKind::DuplicateLabel => "dart labels are not unique",
            ViolationKind::PartnerLabelMismatch => "sigma1 does not pair a dart with its reverse",
        };
        f.write_str(s)
    }
}

/// First violated invariant together with the offending dart ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub darts: Vec<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if !self.darts.is_empty() {
            write!(f, " (darts {:?})", self.darts)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FatGraphError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid fat graph: {0}")]
    Invalid(Violation),
    #[error("not connected")]
    NotConnected,
    #[error("Euler characteristic {0} is odd")]
    OddEulerCharacteristic(i64),
}

/// A fat graph `Γ = (E, σ₁, σ₀)` on darts `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FatGraph {
    sigma0: Permutation,
    sigma1: Permutation,
    labels: Vec<DartLabel>,
}

/// Cycles of `σ₀∘σ₁`, one per boundary component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryDecomposition {
    /// Dart ids of each cycle, rotated to start at the least label and
    /// ordered by that first label.
    pub cycles: Vec<Vec<usize>>,
    /// The same cycles as label words.
    pub words: Vec<Vec<DartLabel>>,
    /// Cycle lengths in ascending order.
    pub face_sizes: Vec<usize>,
}

impl BoundaryDecomposition {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Words rendered as `(a1 B2 A2 b3)`.
    pub fn word_strings(&self) -> Vec<String> {
        self.words.iter().map(|w| format_cycle(w)).collect()
    }
}

pub fn format_cycle(word: &[DartLabel]) -> String {
    let inner: Vec<String> = word.iter().map(ToString::to_string).collect();
    format!("({})", inner.join(" "))
}

/// Parses a product of cyclic words such as `(a1 B2 A2)(b1 a3)`.
///
/// Labels may repeat; no permutation structure is assumed.
pub fn parse_cycle_words(text: &str) -> Result<Vec<Vec<DartLabel>>, String> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| format!("expected `(` at `{rest}`"))?;
        let close = body.find(')').ok_or("unclosed `(`")?;
        let word = body[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<DartLabel>, _>>()?;
        out.push(word);
        rest = body[close + 1..].trim_start();
    }
    Ok(out)
}

/// Rotates each word to start at its least label and sorts the words, the
/// same normal form [`FatGraph::boundary_cycles`] produces.
pub fn canonical_words(words: &[Vec<DartLabel>]) -> Vec<String> {
    let mut out: Vec<Vec<DartLabel>> = words
        .iter()
        .map(|w| {
            let mut w = w.clone();
            if let Some(k) = (0..w.len()).min_by_key(|&k| w[k]) {
                w.rotate_left(k);
            }
            w
        })
        .collect();
    out.sort();
    out.iter().map(|w| format_cycle(w)).collect()
}

/// Default dart layout: arc `i` of α owns darts `2(i-1)` (forward) and
/// `2(i-1)+1` (inverse); β arcs follow the α arcs. Under this layout
/// `σ₁(d) = d ^ 1` and dart id order agrees with label order.
pub fn standard_labels(alpha_arcs: u32, beta_arcs: u32) -> Vec<DartLabel> {
    let mut out = Vec::with_capacity(2 * (alpha_arcs + beta_arcs) as usize);
    for (curve, count) in [(Curve::Alpha, alpha_arcs), (Curve::Beta, beta_arcs)] {
        for arc in 1..=count {
            out.push(DartLabel::new(curve, arc, Direction::Forward));
            out.push(DartLabel::new(curve, arc, Direction::Inverse));
        }
    }
    out
}

/// `d ↦ d ^ 1` on `n` darts.
pub fn xor_involution(n: usize) -> Permutation {
    Permutation::from_images_unchecked((0..n).map(|d| d ^ 1).collect())
}

impl FatGraph {
    /// Fat graph with the standard dart layout and `σ₁(d) = d ^ 1`.
    ///
    /// Panics if `sigma0` has the wrong degree.
    pub fn standard(alpha_arcs: u32, beta_arcs: u32, sigma0: Permutation) -> Self {
        let labels = standard_labels(alpha_arcs, beta_arcs);
        assert_eq!(labels.len(), sigma0.degree(), "sigma0 degree does not match arc count");
        FatGraph {
            sigma1: xor_involution(labels.len()),
            sigma0,
            labels,
        }
    }

    /// Assembles a fat graph from raw parts without checking anything.
    /// Use [`FatGraph::validate`] to inspect the result.
    pub fn from_parts(sigma0: Permutation, sigma1: Permutation, labels: Vec<DartLabel>) -> Self {
        FatGraph {
            sigma0,
            sigma1,
            labels,
        }
    }

    /// Builds a fat graph from vertex rotations written in labels, using the
    /// standard layout. Every dart of arcs `1..=max` of each curve that occurs
    /// must appear exactly once.
    pub fn from_label_cycles(rotations: &[Vec<DartLabel>]) -> Result<Self, FatGraphError> {
        let mut max_arc = BTreeMap::new();
        for l in rotations.iter().flatten() {
            let e = max_arc.entry(l.curve).or_insert(0);
            *e = (*e).max(l.arc);
        }
        let na = max_arc.get(&Curve::Alpha).copied().unwrap_or(0);
        let nb = max_arc.get(&Curve::Beta).copied().unwrap_or(0);
        let labels = standard_labels(na, nb);
        let index: BTreeMap<DartLabel, usize> =
            labels.iter().enumerate().map(|(d, l)| (*l, d)).collect();
        let mut cycles = Vec::with_capacity(rotations.len());
        let mut seen = vec![false; labels.len()];
        for rot in rotations {
            let mut c = Vec::with_capacity(rot.len());
            for l in rot {
                let d = index[l];
                if seen[d] {
                    return Err(FatGraphError::Parse {
                        line: 0,
                        column: 0,
                        message: format!("duplicate dart {l}"),
                    });
                }
                seen[d] = true;
                c.push(d);
            }
            cycles.push(c);
        }
        if let Some(d) = seen.iter().position(|s| !s) {
            return Err(FatGraphError::Parse {
                line: 0,
                column: 0,
                message: format!("missing dart {}", labels[d]),
            });
        }
        let sigma0 = Permutation::from_cycles(labels.len(), &cycles)
            .expect("cycles checked to be disjoint and complete");
        Ok(FatGraph::standard(na, nb, sigma0))
    }

    pub fn n_darts(&self) -> usize {
        self.labels.len()
    }

    pub fn sigma0(&self) -> &Permutation {
        &self.sigma0
    }

    pub fn sigma1(&self) -> &Permutation {
        &self.sigma1
    }

    pub fn labels(&self) -> &[DartLabel] {
        &self.labels
    }

    pub fn label(&self, d: usize) -> DartLabel {
        self.labels[d]
    }

    pub fn dart(&self, label: DartLabel) -> Option<usize> {
        self.labels.iter().position(|l| *l == label)
    }

    /// Checks every fat-graph invariant and reports the first failure.
    pub fn validate(&self) -> Result<(), Violation> {
        let n = self.labels.len();
        let fail = |kind, darts| Err(Violation { kind, darts });
        if n == 0 || n % 2 == 1 {
            return fail(ViolationKind::EmptyOrOddDartCount, vec![]);
        }
        if self.sigma0.degree() != n || self.sigma1.degree() != n {
            return fail(ViolationKind::LengthMismatch, vec![]);
        }
        if !self.sigma1.is_bijection() {
            return fail(ViolationKind::Sigma1NotPermutation, vec![]);
        }
        if !self.sigma0.is_bijection() {
            return fail(ViolationKind::Sigma0NotPermutation, vec![]);
        }
        let fixed: Vec<usize> = self.sigma1.fixed_points().collect();
        if !fixed.is_empty() {
            return fail(ViolationKind::Sigma1HasFixedPoint, fixed);
        }
        let bad: Vec<usize> = (0..n)
            .filter(|&d| self.sigma1.apply(self.sigma1.apply(d)) != d)
            .collect();
        if !bad.is_empty() {
            return fail(ViolationKind::Sigma1NotInvolution, bad);
        }
        let mut first_seen = BTreeMap::new();
        for (d, l) in self.labels.iter().enumerate() {
            if let Some(&prev) = first_seen.get(l) {
                return fail(ViolationKind::DuplicateLabel, vec![prev, d]);
            }
            first_seen.insert(*l, d);
        }
        for d in 0..n {
            let p = self.sigma1.apply(d);
            if self.labels[p] != self.labels[d].inv() {
                return fail(ViolationKind::PartnerLabelMismatch, vec![d, p]);
            }
        }
        Ok(())
    }

    fn checked(&self) -> Result<(), FatGraphError> {
        self.validate().map_err(FatGraphError::Invalid)
    }

    /// The face-tracing permutation `d ↦ σ₀(σ₁(d))`.
    pub fn face_permutation(&self) -> Permutation {
        self.sigma0.compose(&self.sigma1)
    }

    /// Boundary cycles of the thickened graph.
    pub fn boundary_cycles(&self) -> Result<BoundaryDecomposition, FatGraphError> {
        self.checked()?;
        let mut cycles: Vec<Vec<usize>> = self
            .face_permutation()
            .cycles()
            .into_iter()
            .map(|c| self.rotate_to_least(c))
            .collect();
        cycles.sort_by_key(|c| self.labels[c[0]]);
        let words: Vec<Vec<DartLabel>> = cycles
            .iter()
            .map(|c| c.iter().map(|&d| self.labels[d]).collect())
            .collect();
        let mut face_sizes: Vec<usize> = cycles.iter().map(Vec::len).collect();
        face_sizes.sort_unstable();
        Ok(BoundaryDecomposition {
            cycles,
            words,
            face_sizes,
        })
    }

    fn rotate_to_least(&self, mut cycle: Vec<usize>) -> Vec<usize> {
        let start = (0..cycle.len())
            .min_by_key(|&k| self.labels[cycle[k]])
            .unwrap_or(0);
        cycle.rotate_left(start);
        cycle
    }

    /// Vertex rotations, each starting at its least label.
    pub fn vertices(&self) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = self
            .sigma0
            .cycles()
            .into_iter()
            .map(|c| self.rotate_to_least(c))
            .collect();
        v.sort_by_key(|c| self.labels[c[0]]);
        v
    }

    pub fn vertex_count(&self) -> usize {
        self.sigma0.cycle_count()
    }

    pub fn edge_count(&self) -> usize {
        self.n_darts() / 2
    }

    /// `V − E + F` of the closed surface obtained by capping every boundary
    /// component with a disk.
    pub fn euler_characteristic(&self) -> Result<i64, FatGraphError> {
        self.checked()?;
        let v = self.vertex_count() as i64;
        let e = self.edge_count() as i64;
        let f = self.face_permutation().cycle_count() as i64;
        Ok(v - e + f)
    }

    /// Whether `⟨σ₀, σ₁⟩` acts transitively on darts.
    pub fn is_connected(&self) -> bool {
        let n = self.n_darts();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(d) = stack.pop() {
            for next in [self.sigma0.apply(d), self.sigma1.apply(d)] {
                if !seen[next] {
                    seen[next] = true;
                    count += 1;
                    stack.push(next);
                }
            }
        }
        count == n
    }

    /// Genus of the capped closed surface.
    pub fn genus(&self) -> Result<u32, FatGraphError> {
        let chi = self.euler_characteristic()?;
        if !self.is_connected() {
            return Err(FatGraphError::NotConnected);
        }
        if chi % 2 != 0 {
            return Err(FatGraphError::OddEulerCharacteristic(chi));
        }
        Ok(((2 - chi) / 2) as u32)
    }

    /// Same graph under a dart relabeling `g` that commutes with pairing:
    /// `σ₀ ↦ gσ₀g⁻¹`, `σ₁ ↦ gσ₁g⁻¹`, and the label of `g(d)` is the label of `d`.
    pub fn transported(&self, g: &Permutation) -> FatGraph {
        let mut labels = self.labels.clone();
        for d in 0..self.n_darts() {
            labels[g.apply(d)] = self.labels[d];
        }
        FatGraph {
            sigma0: self.sigma0.conjugate_by(g),
            sigma1: self.sigma1.conjugate_by(g),
            labels,
        }
    }

    /// Keeps darts and labels, replaces `σ₀` by `g σ₀ g⁻¹`. When `g` maps each
    /// dart to the dart carrying its new label, this renames the arcs of the
    /// curves while keeping the dart layout.
    pub fn renamed(&self, g: &Permutation) -> FatGraph {
        FatGraph {
            sigma0: self.sigma0.conjugate_by(g),
            sigma1: self.sigma1.clone(),
            labels: self.labels.clone(),
        }
    }

    /// Orientation reversal: every vertex rotation runs clockwise.
    pub fn mirrored(&self) -> FatGraph {
        FatGraph {
            sigma0: self.sigma0.inverse(),
            sigma1: self.sigma1.clone(),
            labels: self.labels.clone(),
        }
    }
}

impl fmt::Display for FatGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "darts: {}", self.n_darts())?;
        for (k, v) in self.vertices().iter().enumerate() {
            let word: Vec<DartLabel> = v.iter().map(|&d| self.labels[d]).collect();
            writeln!(f, "v{}: {}", k + 1, format_cycle(&word))?;
        }
        Ok(())
    }
}

impl FromStr for FatGraph {
    type Err = FatGraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_fat_graph(s)
    }
}

/// Parses the line format
///
/// ```text
/// darts: 16
/// v1: (a1 B4 A4 b1)
/// v2: (a2 b3 A1 B2)
/// ```
///
/// Lowercase letters are forward darts, uppercase their inverses. Blank lines
/// and lines starting with `#` are ignored. Whitespace or commas separate darts.
pub fn parse_fat_graph(text: &str) -> Result<FatGraph, FatGraphError> {
    let perr = |line: usize, column: usize, message: String| FatGraphError::Parse {
        line,
        column,
        message,
    };
    let mut declared: Option<(usize, usize)> = None;
    let mut rotations: Vec<Vec<DartLabel>> = Vec::new();
    let mut positions: BTreeMap<DartLabel, (usize, usize)> = BTreeMap::new();

    for (lno, raw) in text.lines().enumerate() {
        let line_no = lno + 1;
        let trimmed = raw.trim_start();
        let indent = raw.len() - trimmed.len();
        let content = trimmed.trim_end();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let Some(colon) = content.find(':') else {
            return Err(perr(line_no, indent + 1, "expected `key: value`".into()));
        };
        let key = content[..colon].trim();
        let value = &content[colon + 1..];
        let value_col = indent + colon + 2;
        if key == "darts" {
            if declared.is_some() {
                return Err(perr(line_no, indent + 1, "duplicate `darts` line".into()));
            }
            let n: usize = value.trim().parse().map_err(|_| {
                perr(line_no, value_col, format!("bad dart count `{}`", value.trim()))
            })?;
            declared = Some((n, line_no));
            continue;
        }
        let open = value
            .find('(')
            .ok_or_else(|| perr(line_no, value_col, "expected `(`".into()))?;
        let close = value
            .rfind(')')
            .ok_or_else(|| perr(line_no, value_col + open, "unclosed `(`".into()))?;
        if !value[close + 1..].trim().is_empty() || !value[..open].trim().is_empty() {
            return Err(perr(line_no, value_col, "one rotation cycle per line".into()));
        }
        let body = &value[open + 1..close];
        let body_col = value_col + open + 1;
        let mut rot = Vec::new();
        let mut offset = 0;
        for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
            let col = body_col + offset;
            offset += tok.len() + 1;
            if tok.is_empty() {
                continue;
            }
            let label: DartLabel = tok.parse().map_err(|m| perr(line_no, col, m))?;
            if let Some((pl, pc)) = positions.insert(label, (line_no, col)) {
                return Err(perr(
                    line_no,
                    col,
                    format!("duplicate dart {label} (first at line {pl}, column {pc})"),
                ));
            }
            rot.push(label);
        }
        if rot.is_empty() {
            return Err(perr(line_no, body_col, "empty rotation".into()));
        }
        rotations.push(rot);
    }

    let (n, header_line) = declared.ok_or_else(|| perr(1, 1, "missing `darts: <n>` line".into()))?;
    let graph = FatGraph::from_label_cycles(&rotations).map_err(|e| match e {
        FatGraphError::Parse { message, .. } => perr(header_line, 1, message),
        other => other,
    })?;
    if graph.n_darts() != n {
        return Err(perr(
            header_line,
            1,
            format!("declared {n} darts but the rotations use {}", graph.n_darts()),
        ));
    }
    Ok(graph)
}
