//! Finite metric spaces: validation, deterministic generators, open balls,
//! greedy skeletons, nearest-point reductions, and moduli of maps.

use std::sync::Arc;

use once_cell::sync::OnceCell;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::Extended;
use crate::tree::RootedTree;

/// Default relative tolerance for the triangle inequality check.
pub const DEFAULT_TRIANGLE_TOL: f64 = 1e-9;

/// The lp exponent of a point cloud, `p = inf` meaning the sup norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LpExponent {
    P(f64),
    #[serde(rename = "inf", with = "lp_inf")]
    Inf,
}

mod lp_inf {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("inf")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let tag = String::deserialize(d)?;
        if tag == "inf" {
            Ok(())
        } else {
            Err(D::Error::custom(format!("unknown exponent {tag:?}")))
        }
    }
}

impl LpExponent {
    fn validate(&self) -> Result<()> {
        match self {
            LpExponent::P(p) if p.is_finite() && *p >= 1.0 => Ok(()),
            LpExponent::Inf => Ok(()),
            LpExponent::P(p) => Err(Error::bad_params(format!(
                "lp exponent must satisfy p >= 1 or be \"inf\", got {p}"
            ))),
        }
    }

    /// Distance between two coordinate vectors of equal length.
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            LpExponent::Inf => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
            LpExponent::P(p) => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs().powf(*p))
                .sum::<f64>()
                .powf(1.0 / p),
        }
    }
}

/// Coordinate provenance kept when a space is built from vector points.
/// Required by cover scaling, which acts on the points themselves.
#[derive(Debug, Clone)]
pub struct PointCloud {
    pub coords: Vec<Vec<f64>>,
    pub exponent: LpExponent,
}

/// A validated finite metric space: point labels plus an n-by-n distance
/// matrix satisfying the metric axioms within tolerance.
#[derive(Debug, Clone)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<f64>,
    n: usize,
    points: Option<PointCloud>,
    distinct: OnceCell<Vec<f64>>,
}

/// Deterministic space generators. The same spec and seed always produce
/// the identical space.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpaceSpec {
    /// Symmetric uniform integer weights in `1..=max` closed under
    /// shortest paths, so the triangle inequality holds exactly.
    RandomInteger { n: usize, max: u32 },
    /// `n` uniform points in `[0, scale]^dim` under the lp metric.
    LpCloud {
        n: usize,
        dim: usize,
        p: LpExponent,
        #[serde(default = "default_scale")]
        scale: f64,
    },
    /// Shortest-path metric of a weighted tree.
    Tree {
        edges: Vec<(String, String, f64)>,
        root: String,
    },
    /// All points of the lattice `step * Z^dim` inside the lp ball of the
    /// given radius.
    GridNet {
        dim: usize,
        p: LpExponent,
        radius: f64,
        step: f64,
    },
}

fn default_scale() -> f64 {
    1.0
}

impl FiniteMetricSpace {
    /// Validate a square matrix as a metric and wrap it. Uses the default
    /// triangle tolerance.
    pub fn validate(matrix: Vec<Vec<f64>>) -> Result<Self> {
        Self::validate_with_tolerance(matrix, DEFAULT_TRIANGLE_TOL)
    }

    /// Validate with an explicit relative triangle tolerance. A triple
    /// (i,j,k) is a violation when d(i,k) exceeds d(i,j) + d(j,k) by more
    /// than `tol` times the larger side of the comparison.
    pub fn validate_with_tolerance(matrix: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::bad_params("empty distance matrix".into()));
        }
        for (row, r) in matrix.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let v = matrix[i][j];
                if !v.is_finite() {
                    return Err(Error::NonFiniteDistance { i, j });
                }
                dist[i * n + j] = v;
            }
        }
        for i in 0..n {
            if dist[i * n + i] != 0.0 {
                return Err(Error::NonzeroDiagonal {
                    i,
                    value: dist[i * n + i],
                });
            }
            for j in (i + 1)..n {
                let f = dist[i * n + j];
                let b = dist[j * n + i];
                if f != b {
                    return Err(Error::AsymmetricMatrix {
                        i,
                        j,
                        forward: f,
                        backward: b,
                    });
                }
                if f <= 0.0 {
                    return Err(Error::NegativeDistance { i, j, value: f });
                }
            }
        }
        for i in 0..n {
            for k in 0..n {
                let direct = dist[i * n + k];
                for j in 0..n {
                    let through = dist[i * n + j] + dist[j * n + k];
                    if direct - through > tol * direct.max(through) {
                        return Err(Error::TriangleViolation {
                            i,
                            j,
                            k,
                            direct,
                            through,
                        });
                    }
                }
            }
        }
        Ok(FiniteMetricSpace {
            labels: (0..n).map(|i| i.to_string()).collect(),
            dist,
            n,
            points: None,
            distinct: OnceCell::new(),
        })
    }

    /// Attach labels, one per point. Labels must be unique.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::bad_params(format!(
                "{} labels for {} points",
                labels.len(),
                self.n
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::bad_params(format!("duplicate label {l:?}")));
            }
        }
        self.labels = labels;
        Ok(self)
    }

    /// Build a space from labeled vector points under the lp metric,
    /// keeping the coordinates for later scaling.
    pub fn from_points(coords: Vec<Vec<f64>>, exponent: LpExponent) -> Result<Self> {
        exponent.validate()?;
        let n = coords.len();
        if n == 0 {
            return Err(Error::bad_params("empty point set".into()));
        }
        let dim = coords[0].len();
        if coords.iter().any(|c| c.len() != dim) {
            return Err(Error::bad_params("points have mixed dimensions".into()));
        }
        let mut matrix = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = exponent.distance(&coords[i], &coords[j]);
                matrix[i][j] = d;
                matrix[j][i] = d;
            }
        }
        let mut space = Self::validate(matrix)?;
        space.points = Some(PointCloud { coords, exponent });
        Ok(space)
    }

    /// Deterministic generation from a spec and a seed.
    pub fn generate(spec: &SpaceSpec, seed: u64) -> Result<Self> {
        match spec {
            SpaceSpec::RandomInteger { n, max } => {
                if *n == 0 || *max == 0 {
                    return Err(Error::bad_params("need n >= 1 and max >= 1".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let n = *n;
                let mut d = vec![vec![0.0_f64; n]; n];
                for i in 0..n {
                    for j in (i + 1)..n {
                        let w = rng.gen_range(1..=*max) as f64;
                        d[i][j] = w;
                        d[j][i] = w;
                    }
                }
                // Shortest-path closure keeps entries integral and makes
                // the triangle inequality exact.
                for k in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            let via = d[i][k] + d[k][j];
                            if via < d[i][j] {
                                d[i][j] = via;
                            }
                        }
                    }
                }
                Self::validate(d)
            }
            SpaceSpec::LpCloud { n, dim, p, scale } => {
                if *n == 0 || *dim == 0 || !scale.is_finite() || *scale <= 0.0 {
                    return Err(Error::bad_params(
                        "need n >= 1, dim >= 1 and a positive scale".into(),
                    ));
                }
                p.validate()?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let coords: Vec<Vec<f64>> = (0..*n)
                    .map(|_| (0..*dim).map(|_| rng.gen_range(0.0..1.0) * scale).collect())
                    .collect();
                Self::from_points(coords, *p)
            }
            SpaceSpec::Tree { edges, root } => {
                let tree = RootedTree::from_edges(edges, root)?;
                tree.to_metric_space()
            }
            SpaceSpec::GridNet {
                dim,
                p,
                radius,
                step,
            } => {
                if *dim == 0
                    || !radius.is_finite()
                    || *radius < 0.0
                    || !step.is_finite()
                    || *step <= 0.0
                {
                    return Err(Error::bad_params(
                        "need dim >= 1, radius >= 0 and a positive step".into(),
                    ));
                }
                p.validate()?;
                let reach = (radius / step).floor() as i64;
                let origin = vec![0.0; *dim];
                let mut coords = Vec::new();
                let mut current = vec![-reach; *dim];
                loop {
                    let point: Vec<f64> = current.iter().map(|z| *z as f64 * step).collect();
                    if p.distance(&point, &origin) <= *radius {
                        coords.push(point);
                    }
                    // odometer over the cube [-reach, reach]^dim
                    let mut axis = 0;
                    loop {
                        if axis == *dim {
                            return Self::from_points(coords, *p);
                        }
                        current[axis] += 1;
                        if current[axis] <= reach {
                            break;
                        }
                        current[axis] = -reach;
                        axis += 1;
                    }
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn points(&self) -> Option<&PointCloud> {
        self.points.as_ref()
    }

    /// Largest pairwise distance; 0 for a single point.
    pub fn diameter(&self) -> f64 {
        let mut d = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                d = f64::max(d, self.dist(i, j));
            }
        }
        d
    }

    /// Smallest positive distance, if the space has at least two points.
    pub fn min_positive_distance(&self) -> Option<f64> {
        self.distinct_distances().get(1).copied()
    }

    /// Sorted distinct distance values, always starting with 0.
    pub fn distinct_distances(&self) -> &[f64] {
        self.distinct.get_or_init(|| {
            let mut vals = vec![0.0];
            for i in 0..self.n {
                for j in (i + 1)..self.n {
                    vals.push(self.dist(i, j));
                }
            }
            vals.sort_by(f64::total_cmp);
            vals.dedup();
            vals
        })
    }

    /// Diameter of a point subset given by indices.
    pub fn subset_diameter(&self, subset: &[usize]) -> f64 {
        let mut d = 0.0;
        for (a, &i) in subset.iter().enumerate() {
            for &j in &subset[a + 1..] {
                d = f64::max(d, self.dist(i, j));
            }
        }
        d
    }

    /// Open ball: every point strictly closer than `r` to the center.
    pub fn ball(&self, center: usize, r: f64) -> Vec<usize> {
        (0..self.n).filter(|&j| self.dist(center, j) < r).collect()
    }

    /// Distance from a point to a nonempty index set; `Infinity` when the
    /// set is empty.
    pub fn dist_to_set(&self, from: usize, set: &[usize]) -> Extended {
        set.iter()
            .map(|&j| self.dist(from, j))
            .fold(None, |acc: Option<f64>, d| {
                Some(acc.map_or(d, |a| a.min(d)))
            })
            .map_or(Extended::Infinity, Extended::Finite)
    }

    /// Greedy maximal a-separated set over enumeration order. The result
    /// is a-separated and a-dense; the first point is always kept.
    pub fn greedy_skeleton(&self, a: f64) -> Result<Vec<usize>> {
        if !(a > 0.0) {
            return Err(Error::bad_params(format!(
                "separation radius must be positive, got {a}"
            )));
        }
        let mut kept: Vec<usize> = Vec::new();
        for p in 0..self.n {
            if kept.iter().all(|&s| self.dist(p, s) >= a) {
                kept.push(p);
            }
        }
        Ok(kept)
    }

    /// Map every point to a nearest skeleton point, breaking ties by the
    /// lowest point index.
    pub fn nearest_point_reduction(&self, skeleton: &[usize]) -> Result<Vec<usize>> {
        if skeleton.is_empty() {
            return Err(Error::bad_params("skeleton is empty".into()));
        }
        Ok((0..self.n)
            .map(|p| {
                let mut best = skeleton[0];
                let mut best_d = self.dist(p, best);
                for &s in &skeleton[1..] {
                    let d = self.dist(p, s);
                    if d < best_d || (d == best_d && s < best) {
                        best = s;
                        best_d = d;
                    }
                }
                best
            })
            .collect())
    }

    /// Multiply every distance by a positive factor, scaling any stored
    /// point coordinates along with it.
    pub fn scaled(&self, factor: f64) -> Result<Arc<FiniteMetricSpace>> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::bad_params(format!(
                "scale factor must be positive and finite, got {factor}"
            )));
        }
        let dist = self.dist.iter().map(|d| d * factor).collect();
        let points = self.points.as_ref().map(|pc| PointCloud {
            coords: pc
                .coords
                .iter()
                .map(|c| c.iter().map(|x| x * factor).collect())
                .collect(),
            exponent: pc.exponent,
        });
        Ok(Arc::new(FiniteMetricSpace {
            labels: self.labels.clone(),
            dist,
            n: self.n,
            points,
            distinct: OnceCell::new(),
        }))
    }

    /// Raw matrix rows, mostly for serialization.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.dist[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }
}

/// Separation/density radii of a skeleton. Only (a,a)-skeletons are
/// constructed by `greedy_skeleton`; the pair is kept for callers that
/// check foreign subsets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkeletonParams {
    pub separation: f64,
    pub density: f64,
}

impl SkeletonParams {
    pub fn new(separation: f64, density: f64) -> Result<Self> {
        if separation > 0.0 && density > 0.0 {
            Ok(SkeletonParams {
                separation,
                density,
            })
        } else {
            Err(Error::bad_params(
                "skeleton radii must both be positive".into(),
            ))
        }
    }

    pub fn uniform(a: f64) -> Result<Self> {
        Self::new(a, a)
    }

    /// Check whether `subset` is separation-separated and density-dense.
    pub fn admits(&self, space: &FiniteMetricSpace, subset: &[usize]) -> bool {
        let separated = subset.iter().enumerate().all(|(k, &i)| {
            subset[k + 1..]
                .iter()
                .all(|&j| space.dist(i, j) >= self.separation)
        });
        let dense = (0..space.len()).all(|p| space.dist_to_set(p, subset).at_most(self.density));
        separated && dense
    }
}

/// Moduli of continuity and compression of a map between finite spaces,
/// sampled at every realized source distance and extended to arbitrary
/// arguments by monotonicity.
#[derive(Debug, Clone)]
pub struct MapModuli {
    /// Realized source distances, ascending, starting at 0.
    args: Vec<f64>,
    /// omega(args[k]): largest image distance over pairs at source
    /// distance <= args[k].
    omega: Vec<f64>,
    /// rho(args[k]): smallest image distance over pairs at source
    /// distance >= args[k].
    rho: Vec<Extended>,
}

impl MapModuli {
    /// Compute both moduli of `f`, given as a total map from source point
    /// indices to target point indices.
    pub fn of_map(
        source: &FiniteMetricSpace,
        target: &FiniteMetricSpace,
        f: &[usize],
    ) -> Result<Self> {
        if f.len() != source.len() {
            return Err(Error::bad_params(format!(
                "map defined on {} of {} source points",
                f.len(),
                source.len()
            )));
        }
        if let Some(&bad) = f.iter().find(|&&y| y >= target.len()) {
            return Err(Error::bad_params(format!(
                "map value {bad} outside target space of {} points",
                target.len()
            )));
        }
        let args: Vec<f64> = source.distinct_distances().to_vec();
        let m = args.len();
        let mut omega = vec![0.0_f64; m];
        let mut rho = vec![Extended::Infinity; m];
        let mut rho_min = vec![f64::INFINITY; m];
        for i in 0..source.len() {
            for j in i..source.len() {
                let d = source.dist(i, j);
                let img = target.dist(f[i], f[j]);
                let k = args.partition_point(|a| *a < d);
                debug_assert!(args[k] == d);
                if img > omega[k] {
                    omega[k] = img;
                }
                if img < rho_min[k] {
                    rho_min[k] = img;
                }
            }
        }
        // omega accumulates over pairs at distance <= t, rho over >= t.
        for k in 1..m {
            omega[k] = omega[k].max(omega[k - 1]);
        }
        for k in (0..m.saturating_sub(1)).rev() {
            rho_min[k] = rho_min[k].min(rho_min[k + 1]);
        }
        for k in 0..m {
            if rho_min[k].is_finite() {
                rho[k] = Extended::Finite(rho_min[k]);
            }
        }
        Ok(MapModuli { args, omega, rho })
    }

    pub fn sample_args(&self) -> &[f64] {
        &self.args
    }

    /// omega at an arbitrary argument: value at the largest realized
    /// distance <= t (0 below every positive distance).
    pub fn omega_at(&self, t: f64) -> f64 {
        let k = self.args.partition_point(|a| *a <= t);
        if k == 0 {
            0.0
        } else {
            self.omega[k - 1]
        }
    }

    /// rho at an arbitrary argument: value at the smallest realized
    /// distance >= t; infinity beyond the largest.
    pub fn rho_at(&self, t: f64) -> Extended {
        let k = self.args.partition_point(|a| *a < t);
        if k == self.args.len() {
            Extended::Infinity
        } else {
            self.rho[k]
        }
    }

    /// sup { t : omega(t) < bound }. Infinite when omega stays below the
    /// bound at every realized distance.
    pub fn sup_arg_omega_below(&self, bound: Extended) -> Extended {
        for (k, w) in self.omega.iter().enumerate() {
            if !(Extended::Finite(*w) < bound) {
                return Extended::Finite(self.args[k]);
            }
        }
        Extended::Infinity
    }

    /// sup { t : rho(t) <= bound }. Always finite: at most the largest
    /// realized distance.
    pub fn sup_arg_rho_at_most(&self, bound: f64) -> f64 {
        let mut best = 0.0;
        for (k, r) in self.rho.iter().enumerate() {
            if r.at_most(bound) {
                best = self.args[k];
            }
        }
        best
    }
}
