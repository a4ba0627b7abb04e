//! The coarse Lipschitz embedding into the nonnegative sequence cone: a
//! family of covers at geometric scales turns into one coordinate per
//! cover member, valued by clamped distance to the member's trimmed
//! complement. Certification checks both distance bounds pair by pair and
//! exhibits, for every pair above the truncation floor, the single
//! coordinate the lower-bound argument relies on.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::{clique_cover, greedy_separable_cover};
use crate::cover::Cover;
use crate::error::{Error, Result};
use crate::ext::Extended;
use crate::par;
use crate::space::FiniteMetricSpace;
use crate::sparse::{Coord, SignedSparseSequence, SparseNonnegativeSequence};

/// Default absolute tolerance for the pairwise bound checks.
pub const DEFAULT_EMBED_TOL: f64 = 1e-9;

/// Integer power by repeated multiplication; deterministic across
/// platforms and exact whenever the result is.
pub fn pow_int(t: f64, n: i32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..n.unsigned_abs() {
        acc *= t;
    }
    if n < 0 {
        1.0 / acc
    } else {
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingConfig {
    /// Scale ratio, > 1.
    pub t: f64,
    /// Ball-shrink fraction in (0, 1) used by the lower-bound argument.
    pub eps: f64,
    /// Slack above the modulus slope, > 0.
    pub lambda: f64,
    /// Index of the base point whose trimming balls are centered here.
    pub base_point: usize,
    /// Assumed modulus slope, at least 1. Raised automatically when a
    /// built cover measures worse.
    pub c: f64,
    /// Assumed modulus offset, at least 0.
    pub d: f64,
    /// Inclusive scale range; None derives one from the distance range.
    pub scale_range: Option<(i32, i32)>,
    /// Absolute tolerance for certification.
    pub tolerance: f64,
}

impl EmbeddingConfig {
    pub fn new(t: f64, eps: f64, lambda: f64) -> Self {
        EmbeddingConfig {
            t,
            eps,
            lambda,
            base_point: 0,
            c: 1.0,
            d: 0.0,
            scale_range: None,
            tolerance: DEFAULT_EMBED_TOL,
        }
    }

    pub fn validate(&self, space: &FiniteMetricSpace) -> Result<()> {
        if !(self.t > 1.0) {
            return Err(Error::bad_params(format!("need t > 1, got {}", self.t)));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::bad_params(format!(
                "need 0 < eps < 1, got {}",
                self.eps
            )));
        }
        if !(self.lambda > 0.0) {
            return Err(Error::bad_params(format!(
                "need lambda > 0, got {}",
                self.lambda
            )));
        }
        if !(self.c >= 1.0) {
            return Err(Error::bad_params(format!("need C >= 1, got {}", self.c)));
        }
        if !(self.d >= 0.0) {
            return Err(Error::bad_params(format!("need D >= 0, got {}", self.d)));
        }
        if self.base_point >= space.len() {
            return Err(Error::bad_params(format!(
                "base point {} outside space of {} points",
                self.base_point,
                space.len()
            )));
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::bad_params("tolerance must be >= 0".into()));
        }
        if let Some((lo, hi)) = self.scale_range {
            if lo > hi {
                return Err(Error::bad_params(format!("empty scale range {lo}..{hi}")));
            }
            // Scales must stay in the admissible set t^n > D / lambda.
            if self.d > 0.0 && !(pow_int(self.t, lo) > self.d / self.lambda) {
                return Err(Error::bad_params(format!(
                    "scale {lo} violates t^n > D/lambda"
                )));
            }
        }
        Ok(())
    }
}

/// How each per-scale cover is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverBuilder {
    /// Maximal cliques of the within-scale graph; certifies for any C >= 1.
    Clique,
    /// Greedy separable covers; certifies only when C + lambda > 2.
    Greedy,
}

/// One certified scale: the cover, its scale index, and t^n.
#[derive(Debug, Clone)]
pub struct ScaleCover {
    pub n: i32,
    pub t_pow: f64,
    pub cover: Cover,
}

/// Covers at every scale of the range, each certified to have Lebesgue
/// number at least t^n and diameter at most (C + lambda) t^n.
#[derive(Debug, Clone)]
pub struct ScaleFamily {
    space: Arc<FiniteMetricSpace>,
    scales: Vec<ScaleCover>,
    pub config: EmbeddingConfig,
    /// Effective modulus slope: the configured C raised to cover the
    /// measured diameter ratios, never below 1.
    pub c_eff: f64,
    /// 2 t (C + lambda) / (1 - eps) for the effective C.
    pub k: f64,
}

fn default_scale_range(space: &FiniteMetricSpace, config: &EmbeddingConfig, c: f64) -> (i32, i32) {
    let Some(d_min) = space.min_positive_distance() else {
        return (0, 0);
    };
    let diam = space.diameter();
    let width = c + config.lambda;
    let t = config.t;
    let mut lo = (d_min / width).log(t).floor() as i32 - 1;
    while width * pow_int(t, lo) >= d_min {
        lo -= 1;
    }
    if config.d > 0.0 {
        // Truncate to the admissible set t^n > D / lambda.
        let floor_a = (config.d / config.lambda).log(t).ceil() as i32;
        let mut a_min = floor_a - 1;
        while !(pow_int(t, a_min) > config.d / config.lambda) {
            a_min += 1;
        }
        lo = lo.max(a_min);
    }
    let mut hi = (diam / width).log(t).ceil() as i32;
    while width * pow_int(t, hi) < diam {
        hi += 1;
    }
    (lo, hi.max(lo))
}

fn build_covers(
    space: &Arc<FiniteMetricSpace>,
    config: &EmbeddingConfig,
    builder: CoverBuilder,
    c: f64,
    range: (i32, i32),
) -> Result<Vec<ScaleCover>> {
    let scales: Vec<i32> = (range.0..=range.1).collect();
    let built = par::map_range(scales.len(), |k| -> Result<ScaleCover> {
        let n = scales[k];
        let t_pow = pow_int(config.t, n);
        let cover = match builder {
            CoverBuilder::Clique => clique_cover(space, t_pow)?,
            CoverBuilder::Greedy => {
                let width = c + config.lambda;
                let r = width * t_pow;
                let margin = (width / 2.0 - 1.0) * t_pow;
                if !(margin > 0.0) {
                    return Err(Error::UncertifiableScale {
                        n,
                        reason: format!("greedy builder needs C + lambda > 2, got {width}"),
                    });
                }
                let order: Vec<usize> = (0..space.len()).collect();
                greedy_separable_cover(space, r, margin / 2.0, &order)?
            }
        };
        Ok(ScaleCover { n, t_pow, cover })
    });
    built.into_iter().collect()
}

/// Build and certify the per-scale cover family for the embedding.
pub fn build_scale_family(
    space: &Arc<FiniteMetricSpace>,
    config: &EmbeddingConfig,
    builder: CoverBuilder,
) -> Result<ScaleFamily> {
    config.validate(space)?;
    let mut c = config.c.max(1.0);
    let range = config
        .scale_range
        .unwrap_or_else(|| default_scale_range(space, config, c));
    let mut scales = build_covers(space, config, builder, c, range)?;
    let measured = scales
        .iter()
        .map(|s| s.cover.diameter() / s.t_pow)
        .fold(0.0, f64::max);
    if measured > c {
        // Raise C to what the covers actually achieve and rebuild over the
        // range that slope implies.
        c = measured;
        let range = config
            .scale_range
            .unwrap_or_else(|| default_scale_range(space, config, c));
        scales = build_covers(space, config, builder, c, range)?;
    }
    for s in &scales {
        let bound = (c + config.lambda) * s.t_pow;
        if s.cover.diameter() > bound {
            return Err(Error::UncertifiableScale {
                n: s.n,
                reason: format!(
                    "cover diameter {} exceeds (C + lambda) t^n = {bound}",
                    s.cover.diameter()
                ),
            });
        }
        if !s.cover.lebesgue_at_least(s.t_pow)? {
            return Err(Error::UncertifiableScale {
                n: s.n,
                reason: format!("Lebesgue number below t^n = {}", s.t_pow),
            });
        }
    }
    let k = 2.0 * config.t * (c + config.lambda) / (1.0 - config.eps);
    Ok(ScaleFamily {
        space: space.clone(),
        scales,
        config: *config,
        c_eff: c,
        k,
    })
}

impl ScaleFamily {
    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn scales(&self) -> &[ScaleCover] {
        &self.scales
    }

    pub fn scale_range(&self) -> (i32, i32) {
        (
            self.scales.first().map(|s| s.n).unwrap_or(0),
            self.scales.last().map(|s| s.n).unwrap_or(0),
        )
    }

    /// (C + lambda) t^{n_min}: distances at or below this have no witness
    /// scale inside the truncated range.
    pub fn truncation_floor(&self) -> f64 {
        (self.c_eff + self.config.lambda) * self.scales[0].t_pow
    }

    /// The additive loss the truncated family certifies. Zero when the
    /// floor undercuts every positive distance.
    pub fn certified_l(&self) -> f64 {
        match self.space.min_positive_distance() {
            None => 0.0,
            Some(d_min) if self.truncation_floor() < d_min => 0.0,
            _ => self.truncation_floor(),
        }
    }

    /// Index of the scale n with (C+lambda) t^n < d <= (C+lambda) t^{n+1}.
    fn witness_scale(&self, d: f64) -> Option<usize> {
        let width = self.c_eff + self.config.lambda;
        let mut found = None;
        for (idx, s) in self.scales.iter().enumerate() {
            if width * s.t_pow < d {
                found = Some(idx);
            } else {
                break;
            }
        }
        let idx = found?;
        let next_pow = match self.scales.get(idx + 1) {
            Some(next) => next.t_pow,
            None => self.scales[idx].t_pow * self.config.t,
        };
        (width * next_pow >= d).then_some(idx)
    }
}

/// The embedding image: one sparse sequence per point, indexed like the
/// space.
pub type PointMap = Vec<SparseNonnegativeSequence>;

/// Per-pair witness coordinate for the lower bound: at the witness scale
/// the far point's coordinate reaches K (1 - eps) t^n / 2 while the near
/// point's vanishes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairWitness {
    pub x: usize,
    pub y: usize,
    pub distance: f64,
    pub scale: i32,
    pub member: u32,
    pub value_at_x: f64,
    pub value_at_y: f64,
    /// K (1 - eps) t^n / 2.
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct SupportStats {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    pub total_coordinates: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistortionReport {
    pub k: f64,
    pub l: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub upper_pass: bool,
    pub lower_pass: bool,
    pub pair_count: usize,
    /// max over pairs of ||f(x)-f(y)|| - K d(x,y); <= tolerance on pass.
    pub worst_upper_slack: f64,
    /// max over pairs of (d(x,y) - L) - ||f(x)-f(y)||; <= tolerance on pass.
    pub worst_lower_slack: f64,
    pub worst_upper_pair: Option<(usize, usize)>,
    pub worst_lower_pair: Option<(usize, usize)>,
    /// Empirical Lipschitz constant of the map.
    pub lipschitz: Option<f64>,
    /// Empirical Lipschitz constant of the inverse over distinct images.
    pub inverse_lipschitz: Option<f64>,
    /// Product of the two, when the map is injective.
    pub distortion: Option<f64>,
    pub non_injective: bool,
    pub support: SupportStats,
    /// Lower-bound witnesses, one per pair above the truncation floor;
    /// empty for standalone certifications.
    pub witnesses: Vec<PairWitness>,
    pub witness_pass: bool,
}

/// Check the two-sided bounds `d(x,y) - L <= ||f(x)-f(y)|| <= K d(x,y)`
/// for every pair, and measure empirical distortion.
pub fn certify_distortion(
    space: &FiniteMetricSpace,
    map: &[SparseNonnegativeSequence],
    k: f64,
    l: f64,
    tolerance: f64,
) -> Result<DistortionReport> {
    if map.len() != space.len() {
        return Err(Error::bad_params(format!(
            "map has {} images for {} points",
            map.len(),
            space.len()
        )));
    }
    let n = space.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    struct PairCheck {
        upper_slack: f64,
        lower_slack: f64,
        ratio: f64,
        inv_ratio: Option<f64>,
        collision: bool,
    }
    let checks: Vec<PairCheck> = par::map_range(pairs.len(), |p| {
        let (i, j) = pairs[p];
        let d = space.dist(i, j);
        let image = map[i].sup_distance(&map[j]);
        PairCheck {
            upper_slack: image - k * d,
            lower_slack: (d - l) - image,
            ratio: image / d,
            inv_ratio: (image > 0.0).then(|| d / image),
            collision: image == 0.0,
        }
    });
    let mut worst_upper = f64::NEG_INFINITY;
    let mut worst_lower = f64::NEG_INFINITY;
    let mut worst_upper_pair = None;
    let mut worst_lower_pair = None;
    let mut lipschitz: Option<f64> = None;
    let mut inverse: Option<f64> = None;
    let mut non_injective = false;
    for (p, c) in checks.iter().enumerate() {
        if c.upper_slack > worst_upper {
            worst_upper = c.upper_slack;
            worst_upper_pair = Some(pairs[p]);
        }
        if c.lower_slack > worst_lower {
            worst_lower = c.lower_slack;
            worst_lower_pair = Some(pairs[p]);
        }
        lipschitz = Some(lipschitz.map_or(c.ratio, |m| f64::max(m, c.ratio)));
        if let Some(r) = c.inv_ratio {
            inverse = Some(inverse.map_or(r, |m| f64::max(m, r)));
        }
        non_injective |= c.collision;
    }
    let supports: Vec<usize> = map.iter().map(|s| s.support_size()).collect();
    let support = SupportStats {
        min: supports.iter().copied().min().unwrap_or(0),
        max: supports.iter().copied().max().unwrap_or(0),
        mean: if supports.is_empty() {
            0.0
        } else {
            supports.iter().sum::<usize>() as f64 / supports.len() as f64
        },
        total_coordinates: {
            let mut coords: Vec<Coord> =
                map.iter().flat_map(|s| s.iter().map(|(c, _)| c)).collect();
            coords.sort_unstable();
            coords.dedup();
            coords.len()
        },
    };
    let upper_pass = pairs.is_empty() || worst_upper <= tolerance;
    let lower_pass = pairs.is_empty() || worst_lower <= tolerance;
    Ok(DistortionReport {
        k,
        l,
        tolerance,
        pass: upper_pass && lower_pass,
        upper_pass,
        lower_pass,
        pair_count: pairs.len(),
        worst_upper_slack: if pairs.is_empty() { 0.0 } else { worst_upper },
        worst_lower_slack: if pairs.is_empty() { 0.0 } else { worst_lower },
        worst_upper_pair,
        worst_lower_pair,
        lipschitz,
        inverse_lipschitz: inverse,
        distortion: match (non_injective, lipschitz, inverse) {
            (false, Some(a), Some(b)) => Some(a * b),
            _ => None,
        },
        non_injective,
        support,
        witnesses: Vec::new(),
        witness_pass: true,
    })
}

/// Run the theorem's construction over a certified scale family: compute
/// the coordinate map, certify both bounds, and attach the lower-bound
/// witness coordinate for every pair above the truncation floor.
pub fn embed(family: &ScaleFamily) -> Result<(PointMap, DistortionReport)> {
    let space = family.space();
    let config = &family.config;
    let n = space.len();
    let base = config.base_point;
    let k = family.k;

    // Per scale and member: trim the ball around the base point out of
    // the member, then value each point by its clamped distance to the
    // trimmed member's complement.
    let per_scale: Vec<Vec<Vec<f64>>> = par::map_range(family.scales.len(), |si| {
        let s = &family.scales[si];
        let trim_radius = (family.c_eff - 1.0 + config.lambda) * s.t_pow / 2.0;
        let cap = s.t_pow / 2.0;
        let mut columns = Vec::with_capacity(s.cover.len());
        for member in s.cover.members() {
            let mut in_trimmed = vec![false; n];
            for &x in member {
                if space.dist(base, x) >= trim_radius {
                    in_trimmed[x] = true;
                }
            }
            let complement: Vec<usize> = (0..n).filter(|&x| !in_trimmed[x]).collect();
            let column: Vec<f64> = (0..n)
                .map(|x| {
                    let to_complement = match space.dist_to_set(x, &complement) {
                        Extended::Finite(d) => d.min(cap),
                        Extended::Infinity => cap,
                    };
                    k * to_complement
                })
                .collect();
            columns.push(column);
        }
        columns
    });

    let mut map: PointMap = vec![SparseNonnegativeSequence::zero(); n];
    for (si, s) in family.scales.iter().enumerate() {
        for (tau, column) in per_scale[si].iter().enumerate() {
            let coord = Coord::Scale {
                scale: s.n,
                member: tau as u32,
            };
            for (x, &v) in column.iter().enumerate() {
                if v > 0.0 {
                    map[x].insert_positive(coord, v);
                }
            }
        }
    }

    let l = family.certified_l();
    let mut report = certify_distortion(space, &map, k, l, config.tolerance)?;

    // Witness search: for each pair beyond the floor, the member at the
    // witness scale containing the shrunken ball around the farther point.
    let floor = family.truncation_floor();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let witnesses: Vec<Option<PairWitness>> = par::map_range(pairs.len(), |p| {
        let (a, b) = pairs[p];
        let d = space.dist(a, b);
        if !(d > floor) {
            return None;
        }
        // x is the point farther from the base; either order on ties.
        let (x, y) = if space.dist(a, base) >= space.dist(b, base) {
            (a, b)
        } else {
            (b, a)
        };
        let si = family.witness_scale(d)?;
        let s = &family.scales[si];
        let ball = space.ball(x, (1.0 - config.eps) * s.t_pow / 2.0);
        let tau = s
            .cover
            .member_masks()
            .iter()
            .position(|m| ball.iter().all(|&q| m.contains(q)));
        let bound = k * (1.0 - config.eps) * s.t_pow / 2.0;
        Some(match tau {
            None => PairWitness {
                x,
                y,
                distance: d,
                scale: s.n,
                member: 0,
                value_at_x: 0.0,
                value_at_y: 0.0,
                bound,
                pass: false,
            },
            Some(tau) => {
                let coord = Coord::Scale {
                    scale: s.n,
                    member: tau as u32,
                };
                let vx = map[x].get(coord);
                let vy = map[y].get(coord);
                PairWitness {
                    x,
                    y,
                    distance: d,
                    scale: s.n,
                    member: tau as u32,
                    value_at_x: vx,
                    value_at_y: vy,
                    bound,
                    pass: vx >= bound - config.tolerance && vy == 0.0,
                }
            }
        })
    });
    // A pair above the floor with no admissible scale (possible only for
    // hand-truncated ranges) counts as a missing witness, not a skip.
    let expected = pairs
        .iter()
        .filter(|(a, b)| space.dist(*a, *b) > floor)
        .count();
    report.witnesses = witnesses.into_iter().flatten().collect();
    report.witness_pass =
        report.witnesses.len() == expected && report.witnesses.iter().all(|w| w.pass);
    report.pass = report.pass && report.witness_pass;
    // Every pair must be above the floor when the certified loss is zero.
    if l == 0.0 {
        debug_assert_eq!(expected, pairs.len());
    }
    Ok((map, report))
}

/// Fold a signed sequence into the nonnegative cone by splitting each
/// coordinate into a positive-part and negative-part coordinate. The
/// sup distance shrinks by at most a factor of 2 and never grows.
pub fn fold_to_positive(f: &SignedSparseSequence) -> SparseNonnegativeSequence {
    let mut out = SparseNonnegativeSequence::zero();
    for (xi, v) in f.iter() {
        if v > 0.0 {
            out.insert_positive(Coord::Raw(2 * xi), v);
        } else if v < 0.0 {
            out.insert_positive(Coord::Raw(2 * xi + 1), -v);
        }
    }
    out
}
