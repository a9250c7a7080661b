//! Lower bounds for every face-degree configuration of a minimal filling pair.
//!
//! A minimal filling pair with `f` complementary faces meets in `f + 2` points
//! and its face sizes sum to `4(f + 2)`. Writing each size as `4k + j` with
//! `k ≥ 1` and `j ∈ {0, 2}`, the total excess over all-squares is 8, which
//! leaves four patterns. Fixing one face of size `4k` and merging the others
//! along a spanning tree of the dual graph yields two polygons with `4k` and
//! `16 − 4k` sides and total area `4π`, which reduces every case to the
//! `{4,12}` or `{8,8}` bound.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::hypgeom;
use crate::precision;
use crate::quadopt::{self, QuadError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("invalid face configuration: {0}")]
    InvalidConfig(String),
    #[error("merge rule not applicable: {0}")]
    NotApplicable(String),
    #[error("global bound needs f_max >= 2, got {0}")]
    FMaxTooSmall(usize),
    #[error(transparent)]
    Quad(#[from] QuadError),
}

/// Which excess pattern a configuration follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CaseTag {
    /// Four faces with `j = 2`, all `k = 1`, plus at least one square.
    #[serde(rename = "four-j2")]
    FourJ2,
    /// One face with `k = 2` and two with `j = 2`.
    #[serde(rename = "one-k2-two-j2")]
    OneK2TwoJ2,
    #[serde(rename = "two-k2")]
    TwoK2,
    #[serde(rename = "one-k3")]
    OneK3,
    /// Exactly four hexagons.
    #[serde(rename = "exceptional-hexagons")]
    ExceptionalHexagons,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::FourJ2 => "four-j2",
            CaseTag::OneK2TwoJ2 => "one-k2-two-j2",
            CaseTag::TwoK2 => "two-k2",
            CaseTag::OneK3 => "one-k3",
            CaseTag::ExceptionalHexagons => "exceptional-hexagons",
        })
    }
}

/// Face sizes of a filling pair, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FaceConfig {
    pub f: usize,
    pub sizes: Vec<u32>,
    pub case_tag: CaseTag,
}

impl FaceConfig {
    /// Validates the sum rule and the size decomposition, and tags the pattern.
    pub fn new(mut sizes: Vec<u32>) -> Result<Self, BoundsError> {
        let f = sizes.len();
        if f == 0 {
            return Err(BoundsError::InvalidConfig("no faces".into()));
        }
        if let Some(s) = sizes.iter().find(|&&s| s < 4 || s % 2 == 1) {
            return Err(BoundsError::InvalidConfig(format!("face size {s} is not an even number >= 4")));
        }
        let total: u32 = sizes.iter().sum();
        if total as usize != 4 * (f + 2) {
            return Err(BoundsError::InvalidConfig(format!(
                "sizes sum to {total}, expected {}",
                4 * (f + 2)
            )));
        }
        sizes.sort_unstable();
        let j2 = sizes.iter().filter(|&&s| s % 4 == 2).count();
        let extra_k: u32 = sizes.iter().map(|s| s / 4 - 1).sum();
        let k2 = sizes.iter().filter(|&&s| s / 4 == 2).count();
        let case_tag = match (j2, extra_k) {
            (4, 0) if f == 4 => CaseTag::ExceptionalHexagons,
            (4, 0) => CaseTag::FourJ2,
            (2, 1) => CaseTag::OneK2TwoJ2,
            (0, 2) if k2 == 2 => CaseTag::TwoK2,
            (0, 2) => CaseTag::OneK3,
            _ => unreachable!("sum rule forces 4 * extra_k + 2 * j2 = 8"),
        };
        Ok(FaceConfig { f, sizes, case_tag })
    }

    /// Number of intersection points, `f + 2`.
    pub fn intersections(&self) -> usize {
        self.f + 2
    }

    /// Indices of faces with size `4k`, `k ∈ {1, 2, 3}`.
    pub fn fixable_faces(&self) -> Vec<usize> {
        (0..self.f)
            .filter(|&i| self.sizes[i] % 4 == 0 && self.sizes[i] <= 12)
            .collect()
    }
}

impl fmt::Display for FaceConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.sizes.iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

fn with_squares(f: usize, head: &[u32]) -> Option<FaceConfig> {
    let n = f.checked_sub(head.len())?;
    let mut sizes = head.to_vec();
    sizes.extend(std::iter::repeat_n(4, n));
    FaceConfig::new(sizes).ok()
}

/// Every configuration with `1 ≤ f ≤ f_max`, ordered by `f` then sizes.
pub fn enumerate_face_configs(f_max: usize) -> Vec<FaceConfig> {
    let heads: [&[u32]; 5] = [&[6, 6, 6, 6], &[6, 10], &[6, 6, 8], &[8, 8], &[12]];
    let mut out = BTreeSet::new();
    for f in 1..=f_max {
        for head in heads {
            if let Some(c) = with_squares(f, head) {
                out.insert((f, c.sizes.clone(), c));
            }
        }
    }
    out.into_iter().map(|(_, _, c)| c).collect()
}

/// Side counts `(4k, 16 − 4k)` after fixing face `fixed_index` and merging
/// the other faces along a spanning tree of the dual graph.
///
/// Each of the `f − 2` tree edges glues two polygons along one arc: two raw
/// sides disappear and the two endpoints become straight vertices, so every
/// gluing removes four sides from the count.
pub fn merge_sides(config: &FaceConfig, fixed_index: usize) -> Result<(u32, u32), BoundsError> {
    let fixed = *config
        .sizes
        .get(fixed_index)
        .ok_or_else(|| BoundsError::NotApplicable(format!("no face {fixed_index} in {config}")))?;
    if fixed % 4 != 0 || !(4..=12).contains(&fixed) {
        return Err(BoundsError::NotApplicable(format!("face of size {fixed} is not a 4k-gon with k <= 3")));
    }
    if config.f < 2 {
        return Err(BoundsError::NotApplicable(format!("{config} has a single face")));
    }
    let total: u32 = config.sizes.iter().sum();
    let tree_edges = config.f as u32 - 2;
    let rest = total - fixed - 4 * tree_edges;
    Ok((fixed, rest))
}

/// How a certificate's bound was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MergeRule {
    #[serde(rename = "spread-tree-merge")]
    SpreadTreeMerge,
    #[serde(rename = "hexagon-pairing")]
    HexagonPairing,
    #[serde(rename = "separating-forest")]
    SeparatingForest,
}

impl fmt::Display for MergeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MergeRule::SpreadTreeMerge => "spread-tree-merge",
            MergeRule::HexagonPairing => "hexagon-pairing",
            MergeRule::SeparatingForest => "separating-forest",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCertificate {
    pub config: FaceConfig,
    pub case_tag: CaseTag,
    pub merged_pair: (u32, u32),
    /// Index into `config.sizes` of the face kept fixed, if any.
    pub fixed_face: Option<usize>,
    #[serde(serialize_with = "precision::ser_slice")]
    pub area_split: [f64; 2],
    #[serde(serialize_with = "precision::ser")]
    pub bound: f64,
    pub rule_applied: MergeRule,
}

/// The two-polygon bounds every certificate reduces to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceBounds {
    /// `{8,8}` length bound and its optimal angle excess.
    pub eight_eight: f64,
    pub theta_88: f64,
    /// `{4,12}` length bound and its optimal quadrilateral angle.
    pub four_twelve: f64,
    pub theta_412: f64,
}

/// Both reference bounds, computed once per process.
pub fn reference_bounds() -> Result<ReferenceBounds, BoundsError> {
    static CACHE: OnceLock<Result<ReferenceBounds, QuadError>> = OnceLock::new();
    let r = CACHE.get_or_init(|| {
        let m88 = hypgeom::minimize_f8();
        let q = quadopt::minimize_objective()?;
        Ok(ReferenceBounds {
            eight_eight: 0.5 * m88.value,
            theta_88: m88.theta,
            four_twelve: q.length(),
            theta_412: q.theta,
        })
    });
    r.clone().map_err(BoundsError::from)
}

fn pair_bound(pair: (u32, u32), refs: &ReferenceBounds) -> ([f64; 2], f64) {
    let square = 2.0 * PI - 4.0 * refs.theta_412;
    let twelve = 2.0 * PI + 4.0 * refs.theta_412;
    match pair {
        (4, 12) => ([square, twelve], refs.four_twelve),
        (12, 4) => ([twelve, square], refs.four_twelve),
        _ => {
            let (a, b) = hypgeom::OctagonPairState { theta: refs.theta_88 }.areas();
            ([a, b], refs.eight_eight)
        }
    }
}

fn two_octagons(config: &FaceConfig, rule: MergeRule, refs: &ReferenceBounds) -> BoundCertificate {
    let (area_split, bound) = pair_bound((8, 8), refs);
    BoundCertificate {
        config: config.clone(),
        case_tag: config.case_tag,
        merged_pair: (8, 8),
        fixed_face: None,
        area_split,
        bound,
        rule_applied: rule,
    }
}

/// The best bound available for `config`.
///
/// `separating` marks pairs where both curves separate; those admit a
/// spanning forest with two components and always merge into two octagons.
/// Configurations without a `4k` face other than the four hexagons, and
/// single-face configurations, are not covered by the merge rule.
pub fn bound_for(config: &FaceConfig, separating: bool) -> Result<BoundCertificate, BoundsError> {
    let refs = reference_bounds()?;
    if separating {
        return Ok(two_octagons(config, MergeRule::SeparatingForest, &refs));
    }
    if config.case_tag == CaseTag::ExceptionalHexagons {
        return Ok(two_octagons(config, MergeRule::HexagonPairing, &refs));
    }
    let mut best: Option<BoundCertificate> = None;
    for i in config.fixable_faces() {
        let pair = merge_sides(config, i)?;
        let (area_split, bound) = pair_bound(pair, &refs);
        if best.as_ref().is_none_or(|b| bound < b.bound) {
            best = Some(BoundCertificate {
                config: config.clone(),
                case_tag: config.case_tag,
                merged_pair: pair,
                fixed_face: Some(i),
                area_split,
                bound,
                rule_applied: MergeRule::SpreadTreeMerge,
            });
        }
    }
    best.ok_or_else(|| BoundsError::NotApplicable(format!("{config} has no face of size 4k with k <= 3")))
}

/// Why a configuration does not contribute to the global bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExclusionReason {
    /// Passes the counting rules but no minimal filling pair realizes it.
    TopologicallyExcluded,
    /// Fewer than four intersections, impossible for a filling pair in genus two.
    TooFewIntersections,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Exclusion {
    pub config: FaceConfig,
    pub reason: ExclusionReason,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalBound {
    #[serde(serialize_with = "precision::ser")]
    pub length: f64,
    pub argmin: FaceConfig,
    pub certificates: Vec<BoundCertificate>,
    pub excluded: Vec<Exclusion>,
}

/// Minimum of all certificate bounds over configurations with `f ≤ f_max`.
pub fn global_bound(f_max: usize) -> Result<GlobalBound, BoundsError> {
    if f_max < 2 {
        return Err(BoundsError::FMaxTooSmall(f_max));
    }
    let mut certificates = Vec::new();
    let mut excluded = Vec::new();
    for config in enumerate_face_configs(f_max) {
        if config.intersections() < 4 {
            excluded.push(Exclusion { config, reason: ExclusionReason::TooFewIntersections });
            continue;
        }
        match bound_for(&config, false) {
            Ok(c) => certificates.push(c),
            Err(BoundsError::NotApplicable(_)) => {
                excluded.push(Exclusion { config, reason: ExclusionReason::TopologicallyExcluded })
            }
            Err(e) => return Err(e),
        }
    }
    let best = certificates
        .iter()
        .min_by(|a, b| a.bound.total_cmp(&b.bound))
        .expect("f_max >= 2 always yields the {4,12} configuration");
    Ok(GlobalBound {
        length: best.bound,
        argmin: best.config.clone(),
        certificates: certificates.clone(),
        excluded,
    })
}
