//! Parametric cover builders: threshold-clique covers, greedy separable
//! covers, integer grid covers of finite- and infinite-dimensional
//! sup-norm spaces, rooted-tree covers, and the sign-pattern witness
//! families that certify the factor-2 loss of the signed sequence space.
//!
//! Finite constructions return a materialized [`Cover`]; the grid covers
//! of infinite ambient spaces expose membership, locator, and
//! multiplicity-bound queries instead.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cliques::AdjacencyGraph;
use crate::cover::Cover;
use crate::error::{Error, Result};
use crate::space::FiniteMetricSpace;
use crate::sparse::{Coord, SignedSparseSequence, SparseNonnegativeSequence};
use crate::tree::RootedTree;

/// Cover by the maximal cliques of the graph joining points strictly
/// within `radius`: Lebesgue number at least `radius`, diameter below it.
pub fn clique_cover(space: &Arc<FiniteMetricSpace>, radius: f64) -> Result<Cover> {
    if !(radius > 0.0) {
        return Err(Error::bad_params(format!(
            "clique cover radius must be positive, got {radius}"
        )));
    }
    let n = space.len();
    let graph = AdjacencyGraph::from_predicate(n, |i, j| space.dist(i, j) < radius);
    let members = graph
        .maximal_cliques()?
        .iter()
        .map(|c| c.to_indices())
        .collect();
    Cover::new(space.clone(), members, None)
}

/// Greedy separable cover: half-radius balls around the points in
/// enumeration order, each minus the small balls around all earlier
/// centers. Guarantees diameter at most `r` and Lebesgue number at least
/// `r/2 - eps`; a point belongs only to members from rounds no later than
/// the first center within `eps` of it.
///
/// Member labels record the enumeration round of each surviving member.
pub fn greedy_separable_cover(
    space: &Arc<FiniteMetricSpace>,
    r: f64,
    eps: f64,
    enumeration: &[usize],
) -> Result<Cover> {
    if !(eps > 0.0 && eps < r / 2.0) {
        return Err(Error::bad_params(format!(
            "need 0 < eps < r/2, got eps={eps}, r={r}"
        )));
    }
    let n = space.len();
    if enumeration.len() != n {
        return Err(Error::bad_params(format!(
            "enumeration has {} entries for {} points",
            enumeration.len(),
            n
        )));
    }
    let mut seen = vec![false; n];
    for &p in enumeration {
        if p >= n || seen[p] {
            return Err(Error::bad_params(
                "enumeration is not a permutation of the points".into(),
            ));
        }
        seen[p] = true;
    }
    let mut members = Vec::new();
    let mut labels = Vec::new();
    for (round, &center) in enumeration.iter().enumerate() {
        let member: Vec<usize> = (0..n)
            .filter(|&x| {
                space.dist(x, center) < r / 2.0
                    && enumeration[..round]
                        .iter()
                        .all(|&earlier| space.dist(x, earlier) >= eps)
            })
            .collect();
        if !member.is_empty() {
            members.push(member);
            labels.push(round.to_string());
        }
    }
    Cover::new(space.clone(), members, Some(labels))
}

/// Integer grid cover of the `dim`-dimensional sup-norm space with mesh
/// `1/subdiv`: cell `x` holds the points whose j-th coordinate lies in
/// `x_j/subdiv + (-1, 1 + 1/subdiv)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LinfGridCover {
    pub dim: usize,
    pub subdiv: u32,
}

impl LinfGridCover {
    pub fn new(dim: usize, subdiv: u32) -> Result<Self> {
        if dim == 0 || subdiv == 0 {
            return Err(Error::bad_params("need dim >= 1 and subdiv >= 1".into()));
        }
        Ok(LinfGridCover { dim, subdiv })
    }

    /// Every cell has diameter exactly `2 + 1/subdiv`.
    pub fn member_diameter(&self) -> f64 {
        2.0 + 1.0 / self.subdiv as f64
    }

    /// No point lies in more than `(2*subdiv + 1)^dim` cells.
    pub fn multiplicity_bound(&self) -> u128 {
        (2 * self.subdiv as u128 + 1).pow(self.dim as u32)
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len == self.dim {
            Ok(())
        } else {
            Err(Error::bad_params(format!(
                "expected {} coordinates, got {len}",
                self.dim
            )))
        }
    }

    pub fn contains(&self, point: &[f64], cell: &[i64]) -> Result<bool> {
        self.check_dim(point.len())?;
        self.check_dim(cell.len())?;
        let n = self.subdiv as f64;
        Ok(point.iter().zip(cell).all(|(f, x)| {
            let base = *x as f64 / n;
            *f > base - 1.0 && *f < base + 1.0 + 1.0 / n
        }))
    }

    /// A cell whose member contains the whole unit ball around the point.
    pub fn locate(&self, point: &[f64]) -> Result<Vec<i64>> {
        self.check_dim(point.len())?;
        let n = self.subdiv as f64;
        Ok(point.iter().map(|f| (n * f).floor() as i64).collect())
    }

    /// A cell containing a finite set of diameter below 2, located at the
    /// per-coordinate midpoint ball.
    pub fn locate_subset(&self, points: &[Vec<f64>]) -> Result<Vec<i64>> {
        if points.is_empty() {
            return Err(Error::bad_params("empty subset".into()));
        }
        for p in points {
            self.check_dim(p.len())?;
        }
        let mut center = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            let lo = points.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min);
            let hi = points
                .iter()
                .map(|p| p[j])
                .fold(f64::NEG_INFINITY, f64::max);
            if hi - lo >= 2.0 {
                return Err(Error::bad_params(format!(
                    "subset spread {} at coordinate {j} is not below 2",
                    hi - lo
                )));
            }
            center.push((hi + lo) / 2.0);
        }
        self.locate(&center)
    }

    /// All cells containing the point, enumerated coordinate-wise. Fails
    /// rather than materializing more than [`ENUMERATION_CAP`] cells.
    pub fn containing_cells(&self, point: &[f64]) -> Result<Vec<Vec<i64>>> {
        self.check_dim(point.len())?;
        let n = self.subdiv as f64;
        let mut per_coord: Vec<Vec<i64>> = Vec::with_capacity(self.dim);
        for f in point {
            // x ranges over integers with f inside the cell window; probe a
            // safely padded range with the same predicate as `contains`.
            let lo = (n * f - n - 1.0).floor() as i64 - 1;
            let hi = (n * f + n).ceil() as i64 + 1;
            per_coord.push(
                (lo..=hi)
                    .filter(|x| {
                        let base = *x as f64 / n;
                        *f > base - 1.0 && *f < base + 1.0 + 1.0 / n
                    })
                    .collect(),
            );
        }
        check_enumeration_size(per_coord.iter().map(Vec::len))?;
        let mut cells = vec![Vec::new()];
        for options in per_coord {
            let mut next = Vec::with_capacity(cells.len() * options.len());
            for cell in cells {
                for &x in &options {
                    let mut c = cell.clone();
                    c.push(x);
                    next.push(c);
                }
            }
            cells = next;
        }
        Ok(cells)
    }
}

/// Hard cap on materialized cell enumerations.
pub const ENUMERATION_CAP: usize = 1_000_000;

fn check_enumeration_size(option_counts: impl Iterator<Item = usize>) -> Result<()> {
    let mut total = 1usize;
    for count in option_counts {
        total = total.saturating_mul(count.max(1));
        if total > ENUMERATION_CAP {
            return Err(Error::EnumerationCapExceeded {
                cap: ENUMERATION_CAP,
            });
        }
    }
    Ok(())
}

/// Index of one cell of the nonnegative-cone grid cover: a finite support
/// and a nonnegative integer offset for each supported coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridCellIndex {
    pub support: BTreeSet<Coord>,
    pub offsets: BTreeMap<Coord, u64>,
}

impl GridCellIndex {
    pub fn new(support: BTreeSet<Coord>, offsets: BTreeMap<Coord, u64>) -> Result<Self> {
        if offsets.keys().ne(support.iter()) {
            return Err(Error::bad_params(
                "offsets must be defined exactly on the support".into(),
            ));
        }
        Ok(GridCellIndex { support, offsets })
    }

    pub fn offset(&self, c: Coord) -> u64 {
        self.offsets.get(&c).copied().unwrap_or(0)
    }

    /// Drop zero offsets: the cell it names is unchanged.
    pub fn canonical(&self) -> GridCellIndex {
        let offsets: BTreeMap<Coord, u64> = self
            .offsets
            .iter()
            .filter(|(_, v)| **v > 0)
            .map(|(c, v)| (*c, *v))
            .collect();
        GridCellIndex {
            support: offsets.keys().copied().collect(),
            offsets,
        }
    }
}

/// Grid cover of the nonnegative cone under the sup norm: cell `(M, x)`
/// holds the sequences whose every coordinate lies in
/// `x/subdiv + [0, 2*radius + 1/subdiv)`, with `x = 0` off the support.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct C0PlusGridCover {
    pub radius: f64,
    pub subdiv: u32,
}

impl C0PlusGridCover {
    pub fn new(radius: f64, subdiv: u32) -> Result<Self> {
        if !(radius >= 0.0) || subdiv == 0 {
            return Err(Error::bad_params("need radius >= 0 and subdiv >= 1".into()));
        }
        Ok(C0PlusGridCover { radius, subdiv })
    }

    pub fn member_diameter(&self) -> f64 {
        2.0 * self.radius + 1.0 / self.subdiv as f64
    }

    /// At most `(2*subdiv*ceil(radius) + 1)^support_size` offsets over a
    /// fixed support can contain any one sequence.
    pub fn multiplicity_bound(&self, support_size: usize) -> u128 {
        (2 * self.subdiv as u128 * self.radius.ceil() as u128 + 1).pow(support_size as u32)
    }

    fn value_in_window(&self, value: f64, offset: u64) -> bool {
        let n = self.subdiv as f64;
        let base = offset as f64 / n;
        value >= base && value < base + self.member_diameter()
    }

    pub fn contains(&self, f: &SparseNonnegativeSequence, cell: &GridCellIndex) -> bool {
        // Coordinates outside both supports sit at 0 inside [0, 2R + 1/n).
        f.iter()
            .all(|(c, v)| self.value_in_window(v, cell.offset(c)))
            && cell
                .offsets
                .iter()
                .all(|(c, x)| self.value_in_window(f.get(*c), *x))
    }

    /// The cell promised by the construction: support where the sequence
    /// reaches `1/subdiv`, offsets `max(0, floor(subdiv * (value - radius)))`.
    /// The open ball of `radius` around the sequence lies inside it.
    pub fn locate(&self, f: &SparseNonnegativeSequence) -> GridCellIndex {
        let n = self.subdiv as f64;
        let mut offsets = BTreeMap::new();
        for (c, v) in f.iter() {
            if v >= 1.0 / n {
                let raw = (n * (v - self.radius)).floor();
                offsets.insert(c, if raw > 0.0 { raw as u64 } else { 0 });
            }
        }
        GridCellIndex {
            support: offsets.keys().copied().collect(),
            offsets,
        }
    }

    /// All offset assignments over the given support whose cell contains
    /// the sequence. Fails rather than materializing more than
    /// [`ENUMERATION_CAP`] cells.
    pub fn containing_offsets(
        &self,
        f: &SparseNonnegativeSequence,
        support: &BTreeSet<Coord>,
    ) -> Result<Vec<GridCellIndex>> {
        let n = self.subdiv as f64;
        let mut per_coord: Vec<(Coord, Vec<u64>)> = Vec::new();
        for &c in support {
            let v = f.get(c);
            let lo = ((n * (v - self.member_diameter())).floor() as i64 - 1).max(0);
            let hi = (n * v).ceil() as i64 + 1;
            let options: Vec<u64> = (lo..=hi)
                .map(|x| x as u64)
                .filter(|x| self.value_in_window(v, *x))
                .collect();
            per_coord.push((c, options));
        }
        check_enumeration_size(per_coord.iter().map(|(_, o)| o.len()))?;
        let mut cells: Vec<BTreeMap<Coord, u64>> = vec![BTreeMap::new()];
        for (c, options) in per_coord {
            let mut next = Vec::with_capacity(cells.len() * options.len());
            for cell in &cells {
                for &x in &options {
                    let mut m = cell.clone();
                    m.insert(c, x);
                    next.push(m);
                }
            }
            cells = next;
        }
        Ok(cells
            .into_iter()
            .map(|offsets| GridCellIndex {
                support: support.clone(),
                offsets,
            })
            .filter(|cell| self.contains(f, cell))
            .collect())
    }
}

/// Anchor of a tree-cover member: a point of the tree at depth `m/subdiv`,
/// either the root or a point on the parent edge of `child`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeAnchor {
    Root,
    OnEdge { child: usize, m: u64 },
}

impl TreeAnchor {
    pub fn depth(&self, subdiv: u32) -> f64 {
        match self {
            TreeAnchor::Root => 0.0,
            TreeAnchor::OnEdge { m, .. } => *m as f64 / subdiv as f64,
        }
    }
}

fn tree_member(tree: &RootedTree, anchor: TreeAnchor, radius: f64, subdiv: u32) -> Vec<usize> {
    let reach = radius + 1.0 / subdiv as f64;
    let depth = anchor.depth(subdiv);
    (0..tree.len())
        .filter(|&s| {
            let on_path = match anchor {
                TreeAnchor::Root => true,
                TreeAnchor::OnEdge { child, .. } => tree.is_ancestor(child, s),
            };
            on_path && tree.depth(s) - depth < reach
        })
        .collect()
}

/// Member labels record the anchor: `root` or `m/subdiv@vertex`.
fn anchor_label(tree: &RootedTree, anchor: TreeAnchor, subdiv: u32) -> String {
    match anchor {
        TreeAnchor::Root => "root".into(),
        TreeAnchor::OnEdge { child, m } => {
            format!("{m}/{subdiv}@{}", tree.labels()[child])
        }
    }
}

/// Cover of a rooted tree's vertex set by sets hanging below anchor
/// points at depths `m/subdiv`: a vertex joins the member of an anchor on
/// its root path strictly within `radius + 1/subdiv` of it. Guarantees
/// Lebesgue number at least `radius`, diameter below `2(radius +
/// 1/subdiv)`, and multiplicity at most `subdiv * ceil(radius) + 1`.
pub fn tree_cover(tree: &RootedTree, radius: f64, subdiv: u32) -> Result<Cover> {
    if !(radius > 0.0) || subdiv == 0 {
        return Err(Error::bad_params("need radius > 0 and subdiv >= 1".into()));
    }
    let space = tree.to_metric_space_arc()?;
    let n = subdiv as f64;
    let mut anchor_count = 1u64;
    for child in 0..tree.len() {
        if let Some(parent) = tree.parent(child) {
            let lo = (n * tree.depth(parent)).floor() as u64 + 1;
            let hi = (n * tree.depth(child)).floor() as u64;
            if hi >= lo {
                anchor_count = anchor_count.saturating_add(hi - lo + 1);
            }
        }
    }
    if anchor_count > ENUMERATION_CAP as u64 {
        return Err(Error::EnumerationCapExceeded {
            cap: ENUMERATION_CAP,
        });
    }
    let mut members = Vec::new();
    let mut labels = Vec::new();
    let mut push = |anchor: TreeAnchor| {
        let member = tree_member(tree, anchor, radius, subdiv);
        if !member.is_empty() {
            members.push(member);
            labels.push(anchor_label(tree, anchor, subdiv));
        }
    };
    push(TreeAnchor::Root);
    for child in 0..tree.len() {
        let Some(parent) = tree.parent(child) else {
            continue;
        };
        let lo = (n * tree.depth(parent)).floor() as u64 + 1;
        let hi = (n * tree.depth(child)).floor() as u64;
        for m in lo..=hi {
            push(TreeAnchor::OnEdge { child, m });
        }
    }
    Cover::new(space, members, Some(labels))
}

/// The anchor the covering argument uses for a vertex subset: the last
/// common ancestor, snapped up to the nearest grid depth. Returns the
/// anchor and its member; a subset of diameter below `radius` is always
/// contained in that member.
pub fn tree_snapped_anchor_member(
    tree: &RootedTree,
    subset: &[usize],
    radius: f64,
    subdiv: u32,
) -> Result<(TreeAnchor, Vec<usize>)> {
    if !(radius > 0.0) || subdiv == 0 {
        return Err(Error::bad_params("need radius > 0 and subdiv >= 1".into()));
    }
    let lca = tree.last_common_ancestor(subset)?;
    let n = subdiv as f64;
    let m = (n * tree.depth(lca)).floor() as u64;
    let anchor = if m == 0 {
        TreeAnchor::Root
    } else {
        // Walk up from the ancestor to the edge holding depth m/subdiv.
        let mut v = lca;
        while let Some(p) = tree.parent(v) {
            if (n * tree.depth(p)).floor() as u64 >= m {
                v = p;
            } else {
                break;
            }
        }
        TreeAnchor::OnEdge { child: v, m }
    };
    Ok((anchor, tree_member(tree, anchor, radius, subdiv)))
}

/// One sign-pattern witness set: the zero sequence plus the extremal
/// element of its pattern.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessSet {
    pub signs: Vec<i8>,
    pub elements: Vec<SignedSparseSequence>,
}

/// The lower-bound witness family: one set per sign pattern over the
/// support, each containing zero, each of diameter below `r`, and any
/// two with union diameter above `d0` once `eta` is small enough.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessFamily {
    pub support: Vec<u64>,
    /// Open interval of admissible magnitudes per coordinate.
    pub interval: (f64, f64),
    pub eta: f64,
    /// Largest eta for which the cross-family guarantee holds.
    pub eta_threshold: f64,
    /// Supremal diameter of the full (infinite) family per pattern.
    pub family_diameter_sup: f64,
    pub families: Vec<WitnessSet>,
}

/// Build the witness family on `m_size` coordinates for hypothesis
/// parameters `r` (Lebesgue bound) and `d0` (cover diameter), emitting
/// extremal elements pulled in by `eta`.
pub fn c0_lower_bound_witness(m_size: usize, r: f64, d0: f64, eta: f64) -> Result<WitnessFamily> {
    if !(d0 > 0.0 && d0 < 2.0 * r) {
        return Err(Error::bad_params(format!(
            "need 0 < d0 < 2r, got d0={d0}, r={r}"
        )));
    }
    let hi = d0 / 4.0 + r / 2.0;
    let lo = d0 / 8.0 - r / 4.0;
    if !(eta > 0.0 && eta < hi) {
        return Err(Error::bad_params(format!("need 0 < eta < {hi}, got {eta}")));
    }
    if m_size == 0 || m_size > 20 {
        return Err(Error::bad_params(format!(
            "support size must be in 1..=20, got {m_size}"
        )));
    }
    let magnitude = hi - eta;
    let mut families = Vec::with_capacity(1 << m_size);
    for pattern in 0u32..(1 << m_size) {
        let signs: Vec<i8> = (0..m_size)
            .map(|tau| if pattern >> tau & 1 == 1 { 1 } else { -1 })
            .collect();
        let extremal = SignedSparseSequence::from_entries(
            signs
                .iter()
                .enumerate()
                .map(|(tau, s)| (tau as u64, *s as f64 * magnitude)),
        )?;
        families.push(WitnessSet {
            signs,
            elements: vec![SignedSparseSequence::zero(), extremal],
        });
    }
    Ok(WitnessFamily {
        support: (0..m_size as u64).collect(),
        interval: (lo, hi),
        eta,
        eta_threshold: hi - d0 / 2.0,
        family_diameter_sup: hi - lo,
        families,
    })
}

impl WitnessFamily {
    /// Largest pairwise distance among one pattern's emitted elements.
    pub fn family_diameter(&self, k: usize) -> f64 {
        let els = &self.families[k].elements;
        let mut d = 0.0;
        for (a, x) in els.iter().enumerate() {
            for y in &els[a + 1..] {
                d = f64::max(d, x.sup_distance(y));
            }
        }
        d
    }

    /// Largest pairwise distance across the union of two patterns.
    pub fn union_diameter(&self, k: usize, l: usize) -> f64 {
        let mut d = f64::max(self.family_diameter(k), self.family_diameter(l));
        for x in &self.families[k].elements {
            for y in &self.families[l].elements {
                d = f64::max(d, x.sup_distance(y));
            }
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::Extended;

    fn line(values: &[f64]) -> Arc<FiniteMetricSpace> {
        let n = values.len();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| (values[i] - values[j]).abs()).collect())
            .collect();
        Arc::new(FiniteMetricSpace::validate(matrix).unwrap())
    }

    #[test]
    fn clique_cover_examples() {
        let l = line(&[0.0, 1.0, 2.0]);
        let tiny = clique_cover(&l, 0.5).unwrap();
        assert_eq!(tiny.members(), &[vec![0], vec![1], vec![2]]);
        let c = clique_cover(&l, 1.5).unwrap();
        assert_eq!(c.members(), &[vec![0, 1], vec![1, 2]]);
        assert_eq!(c.lebesgue_number().unwrap(), Extended::Finite(2.0));
        assert_eq!(c.diameter(), 1.0);
    }

    #[test]
    fn greedy_cover_on_a_line() {
        let values: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let l = line(&values);
        let order: Vec<usize> = (0..10).collect();
        let c = greedy_separable_cover(&l, 4.0, 1.0, &order).unwrap();
        assert!(c.diameter() <= 4.0);
        assert!(c.lebesgue_number().unwrap().at_least(1.0));
        // membership rule: a point only joins rounds up to its first
        // eps-close center
        let rounds: Vec<usize> = c
            .member_labels()
            .unwrap()
            .iter()
            .map(|l| l.parse().unwrap())
            .collect();
        for x in 0..10 {
            let first = (0..10).position(|k| l.dist(x, order[k]) < 1.0).unwrap();
            for (k, mask) in c.member_masks().iter().enumerate() {
                if mask.contains(x) {
                    assert!(rounds[k] <= first, "point {x} in round {}", rounds[k]);
                }
            }
        }
    }

    #[test]
    fn greedy_cover_single_point() {
        let l = line(&[0.0]);
        let c = greedy_separable_cover(&l, 4.0, 1.0, &[0]).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.lebesgue_number().unwrap(), Extended::Infinity);
    }

    #[test]
    fn linf_grid_multiplicity_witness() {
        let g = LinfGridCover::new(1, 1).unwrap();
        let cells = g.containing_cells(&[0.5]).unwrap();
        assert_eq!(cells, vec![vec![-1], vec![0], vec![1]]);
        assert_eq!(g.multiplicity_bound(), 3);
        assert_eq!(g.member_diameter(), 3.0);
    }

    #[test]
    fn linf_grid_locator_contains_unit_ball() {
        let g = LinfGridCover::new(2, 3).unwrap();
        let f = [0.4, -1.7];
        let cell = g.locate(&f).unwrap();
        for dx in [-0.99, 0.0, 0.99] {
            for dy in [-0.99, 0.5, 0.99] {
                assert!(g.contains(&[f[0] + dx, f[1] + dy], &cell).unwrap());
            }
        }
    }

    #[test]
    fn linf_grid_subset_locator() {
        let g = LinfGridCover::new(1, 2).unwrap();
        let pts = vec![vec![0.2], vec![1.9]];
        let cell = g.locate_subset(&pts).unwrap();
        for p in &pts {
            assert!(g.contains(p, &cell).unwrap());
        }
    }

    #[test]
    fn linf_grid_subset_locator_random_sets() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let dim = rng.gen_range(1..=3);
            let grid = LinfGridCover::new(dim, rng.gen_range(1..=4)).unwrap();
            let anchor: Vec<f64> = (0..dim).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let pts: Vec<Vec<f64>> = (0..rng.gen_range(1..=6))
                .map(|_| {
                    anchor
                        .iter()
                        .map(|a| a + rng.gen_range(0.0..1.99))
                        .collect()
                })
                .collect();
            let cell = grid.locate_subset(&pts).unwrap();
            for p in &pts {
                assert!(grid.contains(p, &cell).unwrap());
            }
        }
    }

    #[test]
    fn c0_grid_empty_support() {
        let g = C0PlusGridCover::new(1.0, 2).unwrap();
        let zero = SparseNonnegativeSequence::zero();
        let cell = g.locate(&zero);
        assert!(cell.support.is_empty());
        assert!(g.contains(&zero, &cell));
        let small = SparseNonnegativeSequence::from_entries([(Coord::Raw(3), 2.4)]).unwrap();
        assert!(g.contains(&small, &cell));
        let big = SparseNonnegativeSequence::from_entries([(Coord::Raw(3), 2.5)]).unwrap();
        assert!(!g.contains(&big, &cell));
    }

    #[test]
    fn c0_grid_single_coordinate_example() {
        let g = C0PlusGridCover::new(1.0, 2).unwrap();
        let f = SparseNonnegativeSequence::from_entries([(Coord::Raw(0), 3.0)]).unwrap();
        let cell = g.locate(&f);
        assert_eq!(cell.offset(Coord::Raw(0)), 4);
        // any g in the unit ball has the coordinate in (2, 4) within 2 + [0, 2.5)
        for v in [2.001, 2.5, 3.999] {
            let h = SparseNonnegativeSequence::from_entries([(Coord::Raw(0), v)]).unwrap();
            assert!(g.contains(&h, &cell));
        }
    }

    #[test]
    fn c0_grid_containing_cells_reduce_to_locator_support() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4242);
        for _ in 0..50 {
            let grid =
                C0PlusGridCover::new([0.5, 1.0, 2.0][rng.gen_range(0..3)], rng.gen_range(1..=4))
                    .unwrap();
            let f = SparseNonnegativeSequence::from_entries(
                (0..rng.gen_range(1..=4))
                    .map(|i| (Coord::Raw(i), rng.gen_range(0..=64) as f64 / 8.0)),
            )
            .unwrap();
            let home = grid.locate(&f);
            // probe cells over a strictly larger support: any containing
            // cell must vanish off the locator support
            let mut wide = home.support.clone();
            wide.insert(Coord::Raw(50));
            wide.insert(Coord::Raw(51));
            for cell in grid.containing_offsets(&f, &wide).unwrap() {
                assert!(grid.contains(&f, &cell));
                let canon = cell.canonical();
                assert!(
                    canon.support.is_subset(&home.support),
                    "containing cell {cell:?} keeps offsets off the support"
                );
                assert_eq!(grid.contains(&f, &canon), grid.contains(&f, &cell));
            }
        }
    }

    #[test]
    fn c0_grid_canonical_absorbs_padding() {
        let g = C0PlusGridCover::new(0.5, 2).unwrap();
        let f = SparseNonnegativeSequence::from_entries([(Coord::Raw(1), 1.2)]).unwrap();
        let mut support = BTreeSet::new();
        support.insert(Coord::Raw(1));
        support.insert(Coord::Raw(9));
        let mut offsets = BTreeMap::new();
        offsets.insert(Coord::Raw(1), 1);
        offsets.insert(Coord::Raw(9), 0);
        let padded = GridCellIndex::new(support, offsets).unwrap();
        let canon = padded.canonical();
        assert_eq!(canon.support.len(), 1);
        assert_eq!(g.contains(&f, &padded), g.contains(&f, &canon));
    }

    #[test]
    fn tree_cover_star() {
        let tree = RootedTree::from_edges(
            &[
                ("r".into(), "a".into(), 1.0),
                ("r".into(), "b".into(), 1.0),
                ("r".into(), "c".into(), 1.0),
            ],
            "r",
        )
        .unwrap();
        let c = tree_cover(&tree, 1.0, 1).unwrap();
        // the root anchor reaches every leaf: depth 1 < 1 + 1
        assert!(c.members().iter().any(|m| m.len() == 4));
        assert!(c.lebesgue_number().unwrap().at_least(1.0));
    }

    #[test]
    fn tree_cover_path_multiplicity() {
        let edges: Vec<(String, String, f64)> = (0..5)
            .map(|i| (i.to_string(), (i + 1).to_string(), 1.0))
            .collect();
        let tree = RootedTree::from_edges(&edges, "0").unwrap();
        let (radius, subdiv) = (1.0_f64, 2u32);
        let c = tree_cover(&tree, radius, subdiv).unwrap();
        assert!(c.max_multiplicity() <= (subdiv as f64 * radius.ceil()) as usize + 1);
        assert!(c.diameter() <= 2.0 * (radius + 1.0 / subdiv as f64));
        assert!(c.lebesgue_number().unwrap().at_least(radius));
    }

    #[test]
    fn tree_cover_single_vertex() {
        let tree = RootedTree::from_edges(&[], "v").unwrap();
        let c = tree_cover(&tree, 2.0, 1).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.lebesgue_number().unwrap(), Extended::Infinity);
    }

    #[test]
    fn snapped_anchor_member_contains_subset() {
        let tree = RootedTree::from_edges(
            &[
                ("r".into(), "a".into(), 2.0),
                ("a".into(), "b".into(), 1.0),
                ("a".into(), "c".into(), 1.0),
            ],
            "r",
        )
        .unwrap();
        let b = tree.labels().iter().position(|l| l == "b").unwrap();
        let c = tree.labels().iter().position(|l| l == "c").unwrap();
        let (anchor, member) = tree_snapped_anchor_member(&tree, &[b, c], 2.5, 2).unwrap();
        assert!(member.contains(&b) && member.contains(&c));
        assert_eq!(anchor.depth(2), 2.0);
    }

    #[test]
    fn witness_family_arithmetic() {
        let w = c0_lower_bound_witness(1, 1.0, 1.9, 0.01).unwrap();
        assert_eq!(w.families.len(), 2);
        let ext = &w.families[0].elements[1];
        assert!((ext.sup_norm() - 0.965).abs() < 1e-12);
        let union = w.union_diameter(0, 1);
        assert!((union - 1.93).abs() < 1e-12);
        assert!(union > 1.9);
        for k in 0..2 {
            assert!(w.family_diameter(k) < 1.0);
        }
        assert!(w.interval.0 < 0.0 && w.interval.1 > 0.0);
    }

    #[test]
    fn witness_family_counts() {
        for m in 1..=4 {
            let w = c0_lower_bound_witness(m, 1.0, 1.9, 0.01).unwrap();
            assert_eq!(w.families.len(), 1 << m);
        }
        assert!(c0_lower_bound_witness(1, 1.0, 2.0, 0.01).is_err());
    }
}
