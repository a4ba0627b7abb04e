//! Covers of a finite metric space and their three invariants: diameter,
//! Lebesgue number, and point multiplicity; plus pullback, prune, and
//! scale transforms.
//!
//! The Lebesgue number is computed exactly: a subset of diameter at most v
//! is a clique of the graph joining points within v, so scanning the
//! distinct distance thresholds in ascending order and testing every
//! maximal clique for containment in a member finds the smallest diameter
//! of an uncovered set.

use std::sync::Arc;

use once_cell::sync::OnceCell;
use serde::{Deserialize, Serialize};

use crate::cliques::{AdjacencyGraph, Mask};
use crate::error::{Error, Result};
use crate::ext::Extended;
use crate::par;
use crate::space::FiniteMetricSpace;

/// A family of nonempty point subsets whose union is the whole space.
/// Members are kept as sorted index sets; duplicates collapse on
/// construction.
#[derive(Debug, Clone)]
pub struct Cover {
    space: Arc<FiniteMetricSpace>,
    members: Vec<Vec<usize>>,
    masks: Vec<Mask>,
    labels: Option<Vec<String>>,
    metrics: OnceCell<CoverMetrics>,
}

/// The three cover invariants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverMetrics {
    pub diameter: Extended,
    pub lebesgue: Extended,
    pub max_multiplicity: usize,
}

impl Cover {
    /// Validate and canonicalize a member list. Duplicate members are
    /// collapsed (the first label of a collapsed group survives), members
    /// are sorted lexicographically, and the union must cover the space.
    pub fn new(
        space: Arc<FiniteMetricSpace>,
        members: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let n = space.len();
        if let Some(ls) = &labels {
            if ls.len() != members.len() {
                return Err(Error::bad_params(format!(
                    "{} labels for {} members",
                    ls.len(),
                    members.len()
                )));
            }
        }
        let mut canon: Vec<(Vec<usize>, Option<String>)> = Vec::with_capacity(members.len());
        for (k, mut member) in members.into_iter().enumerate() {
            member.sort_unstable();
            member.dedup();
            if member.is_empty() {
                return Err(Error::bad_params(format!("member {k} is empty")));
            }
            if let Some(&bad) = member.iter().find(|&&i| i >= n) {
                return Err(Error::bad_params(format!(
                    "member {k} references point {bad} outside the space"
                )));
            }
            let label = labels.as_ref().map(|ls| ls[k].clone());
            canon.push((member, label));
        }
        canon.sort_by(|a, b| a.0.cmp(&b.0));
        canon.dedup_by(|a, b| a.0 == b.0);
        let mut union = Mask::empty(n);
        let mut masks = Vec::with_capacity(canon.len());
        for (member, _) in &canon {
            let mask = Mask::from_indices(n, member);
            for &i in member {
                union.insert(i);
            }
            masks.push(mask);
        }
        if let Some(missing) = (0..n).find(|&i| !union.contains(i)) {
            return Err(Error::NotACover { missing });
        }
        let has_labels = labels.is_some();
        let (members, labels): (Vec<_>, Vec<_>) = canon.into_iter().unzip();
        Ok(Cover {
            space,
            members,
            masks,
            labels: has_labels.then(|| labels.into_iter().map(Option::unwrap).collect()),
            metrics: OnceCell::new(),
        })
    }

    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn member_masks(&self) -> &[Mask] {
        &self.masks
    }

    pub fn member_labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Largest member diameter; 0 for an all-singleton cover.
    pub fn diameter(&self) -> f64 {
        let per_member = par::map_range(self.members.len(), |k| {
            self.space.subset_diameter(&self.members[k])
        });
        per_member.into_iter().fold(0.0, f64::max)
    }

    /// Is some member a superset of the given point set?
    pub fn covers_mask(&self, subset: &Mask) -> bool {
        self.masks.iter().any(|m| subset.is_subset_of(m))
    }

    /// Exact Lebesgue number: the smallest diameter of a subset contained
    /// in no member, or infinity when every subset is covered.
    pub fn lebesgue_number(&self) -> Result<Extended> {
        let thresholds = &self.space.distinct_distances()[1..];
        match self.first_uncovered_threshold(thresholds)? {
            Some(v) => Ok(Extended::Finite(v)),
            None => Ok(Extended::Infinity),
        }
    }

    /// Cheaper one-sided certificate: true iff the Lebesgue number is at
    /// least `bound`. Only thresholds below `bound` are scanned.
    pub fn lebesgue_at_least(&self, bound: f64) -> Result<bool> {
        let all = &self.space.distinct_distances()[1..];
        let below = &all[..all.partition_point(|v| *v < bound)];
        Ok(self.first_uncovered_threshold(below)?.is_none())
    }

    /// Scan thresholds in ascending order; report the first at which some
    /// maximal clique of the within-threshold graph escapes every member.
    fn first_uncovered_threshold(&self, thresholds: &[f64]) -> Result<Option<f64>> {
        let n = self.space.len();
        let hit = par::first_hit(thresholds.len(), |k| {
            let v = thresholds[k];
            let graph = AdjacencyGraph::from_predicate(n, |i, j| self.space.dist(i, j) <= v);
            match graph.maximal_cliques() {
                Err(e) => Some(Err(e)),
                Ok(cliques) => {
                    if cliques.iter().any(|c| !self.covers_mask(c)) {
                        Some(Ok(v))
                    } else {
                        None
                    }
                }
            }
        });
        match hit {
            Some((_, Ok(v))) => Ok(Some(v)),
            Some((_, Err(e))) => Err(e),
            None => Ok(None),
        }
    }

    /// Largest number of members any single point belongs to.
    pub fn max_multiplicity(&self) -> usize {
        (0..self.space.len())
            .map(|i| self.masks.iter().filter(|m| m.contains(i)).count())
            .max()
            .unwrap_or(0)
    }

    /// Number of members containing one point.
    pub fn multiplicity_at(&self, i: usize) -> usize {
        self.masks.iter().filter(|m| m.contains(i)).count()
    }

    /// All three invariants, computed once and cached.
    pub fn metrics(&self) -> Result<&CoverMetrics> {
        self.metrics.get_or_try_init(|| {
            Ok(CoverMetrics {
                diameter: Extended::Finite(self.diameter()),
                lebesgue: self.lebesgue_number()?,
                max_multiplicity: self.max_multiplicity(),
            })
        })
    }

    /// Pull a cover on the target space back through a point map given as
    /// `f[source index] = target index`. Members are the nonempty
    /// preimages of the target members.
    pub fn pullback(
        source: Arc<FiniteMetricSpace>,
        f: &[usize],
        target_cover: &Cover,
    ) -> Result<Cover> {
        if f.len() != source.len() {
            // An unmapped point can never be covered by a preimage.
            return Err(Error::NotACover {
                missing: f.len().min(source.len()),
            });
        }
        let target_n = target_cover.space().len();
        if let Some(bad) = (0..f.len()).find(|&i| f[i] >= target_n) {
            return Err(Error::NotACover { missing: bad });
        }
        let members: Vec<Vec<usize>> = target_cover
            .member_masks()
            .iter()
            .map(|v| {
                (0..f.len())
                    .filter(|&i| v.contains(f[i]))
                    .collect::<Vec<usize>>()
            })
            .filter(|pre| !pre.is_empty())
            .collect();
        Cover::new(source, members, None)
    }

    /// Keep only members meeting the given subset. Fails with `NotACover`
    /// when the retained family no longer covers the space.
    pub fn prune(&self, dense_subset: &[usize]) -> Result<Cover> {
        if dense_subset.is_empty() {
            return Err(Error::bad_params("dense subset is empty".into()));
        }
        let keep: Vec<usize> = (0..self.members.len())
            .filter(|&k| dense_subset.iter().any(|&i| self.masks[k].contains(i)))
            .collect();
        let members = keep.iter().map(|&k| self.members[k].clone()).collect();
        let labels = self
            .labels
            .as_ref()
            .map(|ls| keep.iter().map(|&k| ls[k].clone()).collect());
        Cover::new(self.space.clone(), members, labels)
    }

    /// Scale the underlying vector points (and hence all distances) by a
    /// positive factor, carrying the members over pointwise. Diameter and
    /// Lebesgue number scale exactly by the factor.
    pub fn scaled(&self, factor: f64) -> Result<Cover> {
        if self.space.points().is_none() {
            return Err(Error::NotVectorSpace);
        }
        let scaled_space = self.space.scaled(factor)?;
        Cover::new(scaled_space, self.members.clone(), self.labels.clone())
    }
}

/// Plain serialization form of a finite cover.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CoverFile {
    pub members: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl From<&Cover> for CoverFile {
    fn from(c: &Cover) -> Self {
        CoverFile {
            members: c.members.clone(),
            labels: c.labels.clone(),
        }
    }
}
