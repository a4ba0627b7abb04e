//! The coarse and uniform covering moduli of a finite metric space,
//! computed exactly, plus a definitional brute-force oracle for tiny
//! spaces and checkable forms of the duality, bounded-diameter, and
//! linear-type lemmas.
//!
//! On a finite space every cover is point-finite once duplicate members
//! collapse, so the defining infimum and supremum range over all covers
//! and are attained:
//!
//! * the coarse modulus at R is the largest diameter among maximal
//!   cliques of the graph joining points strictly within R (every valid
//!   cover must contain a superset of each such clique, and the clique
//!   family itself is a valid cover);
//! * the uniform modulus at r is the smallest distance exceeding r, or
//!   infinity once r reaches the diameter (the whole-space cover).

use serde::{Deserialize, Serialize};

use crate::cliques::AdjacencyGraph;
use crate::cover::Cover;
use crate::error::{Error, Result};
use crate::ext::Extended;
use crate::par;
use crate::space::FiniteMetricSpace;
use std::sync::Arc;

/// Which modulus a curve or oracle query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModulusKind {
    Coarse,
    Uniform,
}

/// Exact coarse modulus: smallest achievable cover diameter among covers
/// with Lebesgue number at least `r_lower`.
pub fn delta_coarse(space: &FiniteMetricSpace, r_lower: f64) -> Result<f64> {
    if !(r_lower >= 0.0) {
        return Err(Error::bad_params(format!(
            "coarse modulus argument must be >= 0, got {r_lower}"
        )));
    }
    let n = space.len();
    let graph = AdjacencyGraph::from_predicate(n, |i, j| space.dist(i, j) < r_lower);
    let cliques = graph.maximal_cliques()?;
    Ok(cliques
        .iter()
        .map(|c| space.subset_diameter(&c.to_indices()))
        .fold(0.0, f64::max))
}

/// Exact uniform modulus: largest achievable Lebesgue number among covers
/// of diameter at most `diam_upper`. Closed form: the smallest realized
/// distance above the bound, infinite when none exists.
pub fn delta_uniform(space: &FiniteMetricSpace, diam_upper: f64) -> Result<Extended> {
    if !(diam_upper > 0.0) {
        return Err(Error::bad_params(format!(
            "uniform modulus argument must be > 0, got {diam_upper}"
        )));
    }
    Ok(space
        .distinct_distances()
        .iter()
        .find(|d| **d > diam_upper)
        .map_or(Extended::Infinity, |d| Extended::Finite(*d)))
}

/// Second route to the uniform modulus: realize the optimal cover as the
/// maximal cliques of the within-bound graph and measure its Lebesgue
/// number. Must agree with [`delta_uniform`]; kept separate so tests can
/// compare the two.
pub fn delta_uniform_via_cover(
    space: &Arc<FiniteMetricSpace>,
    diam_upper: f64,
) -> Result<Extended> {
    if !(diam_upper > 0.0) {
        return Err(Error::bad_params(format!(
            "uniform modulus argument must be > 0, got {diam_upper}"
        )));
    }
    let n = space.len();
    let graph = AdjacencyGraph::from_predicate(n, |i, j| space.dist(i, j) <= diam_upper);
    let members = graph
        .maximal_cliques()?
        .iter()
        .map(|c| c.to_indices())
        .collect();
    Cover::new(space.clone(), members, None)?.lebesgue_number()
}

/// Definitional optimum over every family of nonempty subsets covering
/// the space. Limited to four points (32768 candidate families).
pub struct DeltaOracle {
    /// (lebesgue, diameter) for each covering family.
    families: Vec<(Extended, f64)>,
}

/// Largest space the oracle searches exhaustively.
pub const ORACLE_MAX_POINTS: usize = 4;

impl DeltaOracle {
    pub fn new(space: &FiniteMetricSpace) -> Result<Self> {
        let n = space.len();
        if n > ORACLE_MAX_POINTS {
            return Err(Error::TooLarge {
                n,
                max: ORACLE_MAX_POINTS,
            });
        }
        let full = (1u32 << n) - 1;
        let subset_count = full as usize; // nonempty subsets 1..=full
        let mut diam = vec![0.0_f64; subset_count + 1];
        let mut supersets = vec![0u32; subset_count + 1];
        for s in 1..=subset_count {
            let indices: Vec<usize> = (0..n).filter(|&i| s >> i & 1 == 1).collect();
            diam[s] = space.subset_diameter(&indices);
            let mut sup = 0u32;
            for t in 1..=subset_count {
                if s & t == s {
                    sup |= 1 << (t - 1);
                }
            }
            supersets[s] = sup;
        }
        let families = par::map_range(1usize << subset_count, |family| {
            if family == 0 {
                return None;
            }
            let mut union = 0u32;
            for s in 1..=subset_count {
                if family >> (s - 1) & 1 == 1 {
                    union |= s as u32;
                }
            }
            if union != full {
                return None;
            }
            let mut worst: Option<f64> = None;
            for s in 1..=subset_count {
                if (s as u32).count_ones() >= 2 && family as u32 & supersets[s] == 0 {
                    worst = Some(worst.map_or(diam[s], |w| w.min(diam[s])));
                }
            }
            let lebesgue = worst.map_or(Extended::Infinity, Extended::Finite);
            let mut diameter = 0.0;
            for s in 1..=subset_count {
                if family >> (s - 1) & 1 == 1 {
                    diameter = f64::max(diameter, diam[s]);
                }
            }
            Some((lebesgue, diameter))
        })
        .into_iter()
        .flatten()
        .collect();
        Ok(DeltaOracle { families })
    }

    pub fn eval(&self, kind: ModulusKind, argument: f64) -> Result<Extended> {
        match kind {
            ModulusKind::Coarse => {
                if !(argument >= 0.0) {
                    return Err(Error::bad_params(format!(
                        "coarse modulus argument must be >= 0, got {argument}"
                    )));
                }
                let best = self
                    .families
                    .iter()
                    .filter(|(l, _)| l.at_least(argument))
                    .map(|(_, d)| *d)
                    .fold(f64::INFINITY, f64::min);
                Ok(Extended::Finite(best))
            }
            ModulusKind::Uniform => {
                if !(argument > 0.0) {
                    return Err(Error::bad_params(format!(
                        "uniform modulus argument must be > 0, got {argument}"
                    )));
                }
                Ok(self
                    .families
                    .iter()
                    .filter(|(_, d)| *d <= argument)
                    .map(|(l, _)| *l)
                    .fold(Extended::Finite(0.0), |a, b| if b > a { b } else { a }))
            }
        }
    }
}

/// One-call form of the oracle.
pub fn delta_oracle(
    space: &FiniteMetricSpace,
    kind: ModulusKind,
    argument: f64,
) -> Result<Extended> {
    DeltaOracle::new(space)?.eval(kind, argument)
}

/// A sampled modulus curve. Monotonicity is asserted after evaluation,
/// never patched up.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModulusCurve {
    pub kind: ModulusKind,
    pub samples: Vec<CurveSample>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveSample {
    pub argument: f64,
    pub value: Extended,
}

/// Sample arguments that pin down a step curve exactly: midpoints between
/// consecutive distinct distances, each distance nudged one ulp to either
/// side, and one point past the diameter. All arguments are positive.
pub fn default_grid(space: &FiniteMetricSpace) -> Vec<f64> {
    let dd = space.distinct_distances();
    let mut grid = Vec::new();
    if dd.len() == 1 {
        grid.push(1.0);
        return grid;
    }
    for w in dd.windows(2) {
        grid.push((w[0] + w[1]) / 2.0);
    }
    for &d in &dd[1..] {
        grid.push(d.next_down());
        grid.push(d.next_up());
    }
    grid.push(2.0 * dd[dd.len() - 1] + 1.0);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Evaluate a modulus over an explicit grid of arguments.
pub fn modulus_curve(
    space: &FiniteMetricSpace,
    kind: ModulusKind,
    grid: &[f64],
) -> Result<ModulusCurve> {
    let mut args = grid.to_vec();
    args.sort_by(f64::total_cmp);
    args.dedup();
    let values = par::map_range(args.len(), |k| match kind {
        ModulusKind::Coarse => delta_coarse(space, args[k]).map(Extended::Finite),
        ModulusKind::Uniform => delta_uniform(space, args[k]),
    });
    let mut samples = Vec::with_capacity(args.len());
    for (a, v) in args.iter().zip(values) {
        samples.push(CurveSample {
            argument: *a,
            value: v?,
        });
    }
    for w in samples.windows(2) {
        if w[1].value < w[0].value {
            return Err(Error::MonotonicityViolation {
                argument: w[1].argument,
            });
        }
    }
    Ok(ModulusCurve { kind, samples })
}

/// Outcome of one duality check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DualityCheck {
    /// "coarse-then-uniform" or "uniform-then-coarse".
    pub side: String,
    pub argument: f64,
    pub epsilon: f64,
    pub inner: Extended,
    pub outer: Extended,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DualityReport {
    pub pass: bool,
    pub checks: Vec<DualityCheck>,
}

/// Check both duality inequalities between the moduli on a grid: the
/// uniform modulus just above a coarse value recovers at least the coarse
/// argument, and the coarse modulus just below a uniform value stays at
/// most the uniform argument.
pub fn check_duality(
    space: &FiniteMetricSpace,
    grid: &[f64],
    epsilons: &[f64],
) -> Result<DualityReport> {
    if let Some(&eps) = epsilons.iter().find(|e| !(**e > 0.0)) {
        return Err(Error::bad_params(format!(
            "epsilon values must be positive, got {eps}"
        )));
    }
    let mut checks = Vec::new();
    let diameter = space.diameter();
    for &arg in grid {
        for &eps in epsilons {
            if arg >= 0.0 {
                let dc = delta_coarse(space, arg)?;
                let outer = delta_uniform(space, dc + eps)?;
                checks.push(DualityCheck {
                    side: "coarse-then-uniform".into(),
                    argument: arg,
                    epsilon: eps,
                    inner: Extended::Finite(dc),
                    outer,
                    pass: outer.at_least(arg),
                    note: None,
                });
            }
            if arg > 0.0 {
                let du = delta_uniform(space, arg)?;
                let check = match du {
                    Extended::Infinity => DualityCheck {
                        side: "uniform-then-coarse".into(),
                        argument: arg,
                        epsilon: eps,
                        inner: du,
                        outer: Extended::Finite(diameter),
                        pass: diameter <= arg,
                        note: Some(
                            "uniform modulus infinite; reduced to diameter <= argument".into(),
                        ),
                    },
                    Extended::Finite(u) if eps < u => {
                        let dc = delta_coarse(space, u - eps)?;
                        DualityCheck {
                            side: "uniform-then-coarse".into(),
                            argument: arg,
                            epsilon: eps,
                            inner: du,
                            outer: Extended::Finite(dc),
                            pass: dc <= arg,
                            note: None,
                        }
                    }
                    Extended::Finite(_) => DualityCheck {
                        side: "uniform-then-coarse".into(),
                        argument: arg,
                        epsilon: eps,
                        inner: du,
                        outer: du,
                        pass: true,
                        note: Some("epsilon not admissible at this argument; skipped".into()),
                    },
                };
                checks.push(check);
            }
        }
    }
    Ok(DualityReport {
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SmallCReport {
    /// D / (1 - C), the diameter bound the lemma promises.
    pub threshold: f64,
    pub hypothesis_holds: bool,
    /// Whether the grid actually probes beyond the threshold.
    pub grid_extends: bool,
    pub diameter: f64,
    pub conclusion_holds: bool,
    /// False only if the hypothesis held on a grid extending past the
    /// threshold while the diameter still exceeded the bound.
    pub consistent_with_lemma: bool,
    pub hypothesis_witnesses: Vec<CurveSample>,
}

/// Check the bounded-diameter lemma: an affine bound with slope below 1
/// on the coarse modulus forces diameter at most D/(1-C).
pub fn check_small_c(
    space: &FiniteMetricSpace,
    c: f64,
    d: f64,
    grid: &[f64],
    tol: f64,
) -> Result<SmallCReport> {
    if !(0.0..1.0).contains(&c) || !(d >= 0.0) {
        return Err(Error::bad_params(format!(
            "need 0 <= C < 1 and D >= 0, got C={c}, D={d}"
        )));
    }
    let threshold = d / (1.0 - c);
    let mut witnesses = Vec::new();
    for &r in grid {
        if !(r >= 0.0) {
            continue;
        }
        let value = delta_coarse(space, r)?;
        if value > c * r + d {
            witnesses.push(CurveSample {
                argument: r,
                value: Extended::Finite(value),
            });
        }
    }
    let hypothesis_holds = witnesses.is_empty();
    let grid_extends = grid.iter().any(|r| *r > threshold);
    let diameter = space.diameter();
    let conclusion_holds = diameter <= threshold + tol;
    Ok(SmallCReport {
        threshold,
        hypothesis_holds,
        grid_extends,
        diameter,
        conclusion_holds,
        consistent_with_lemma: !(hypothesis_holds && grid_extends && !conclusion_holds),
        hypothesis_witnesses: witnesses,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearTypeReport {
    pub c: f64,
    /// Grid points where the coarse modulus exceeds C times the argument.
    pub coarse_witnesses: Vec<CurveSample>,
    /// Grid points where the uniform modulus falls below argument / C.
    pub uniform_witnesses: Vec<CurveSample>,
    pub coarse_bound_holds: bool,
    pub uniform_bound_holds: bool,
    /// The biconditional restricted to the sampled grid. Grid truth is
    /// necessary but sampled: it cannot certify the quantified statement.
    pub biconditional_on_grid: bool,
}

/// Check the linear-type equivalence on a grid: the coarse modulus stays
/// below C times the argument exactly when the uniform modulus stays
/// above the argument over C.
pub fn check_linear_type(
    space: &FiniteMetricSpace,
    c: f64,
    grid: &[f64],
) -> Result<LinearTypeReport> {
    if !(c > 0.0) {
        return Err(Error::bad_params(format!("need C > 0, got {c}")));
    }
    let mut coarse_witnesses = Vec::new();
    let mut uniform_witnesses = Vec::new();
    for &arg in grid {
        if arg >= 0.0 {
            let v = delta_coarse(space, arg)?;
            if v > c * arg {
                coarse_witnesses.push(CurveSample {
                    argument: arg,
                    value: Extended::Finite(v),
                });
            }
        }
        if arg > 0.0 {
            let v = delta_uniform(space, arg)?;
            if !v.at_least(arg / c) {
                uniform_witnesses.push(CurveSample {
                    argument: arg,
                    value: v,
                });
            }
        }
    }
    let coarse_bound_holds = coarse_witnesses.is_empty();
    let uniform_bound_holds = uniform_witnesses.is_empty();
    Ok(LinearTypeReport {
        c,
        coarse_bound_holds,
        uniform_bound_holds,
        biconditional_on_grid: coarse_bound_holds == uniform_bound_holds,
        coarse_witnesses,
        uniform_witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(values: &[f64]) -> FiniteMetricSpace {
        let n = values.len();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| (values[i] - values[j]).abs()).collect())
            .collect();
        FiniteMetricSpace::validate(matrix).unwrap()
    }

    fn equilateral(n: usize, d: f64) -> FiniteMetricSpace {
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { d }).collect())
            .collect();
        FiniteMetricSpace::validate(matrix).unwrap()
    }

    #[test]
    fn coarse_on_equilateral() {
        let eq = equilateral(3, 1.0);
        assert_eq!(delta_coarse(&eq, 1.0).unwrap(), 0.0);
        assert_eq!(delta_coarse(&eq, 1.5).unwrap(), 1.0);
        assert_eq!(delta_coarse(&eq, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn uniform_closed_form() {
        let l = line(&[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(delta_uniform(&l, 1.5).unwrap(), Extended::Finite(2.0));
        assert_eq!(delta_uniform(&l, 3.0).unwrap(), Extended::Infinity);
        assert_eq!(delta_uniform(&l, 0.5).unwrap(), Extended::Finite(1.0));
    }

    #[test]
    fn uniform_routes_agree() {
        let l = Arc::new(line(&[0.0, 1.0, 2.0, 3.0]));
        for r in [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0] {
            assert_eq!(
                delta_uniform(&l, r).unwrap(),
                delta_uniform_via_cover(&l, r).unwrap(),
                "disagreement at r={r}"
            );
        }
    }

    #[test]
    fn oracle_matches_two_point_example() {
        let two = line(&[0.0, 1.0]);
        assert_eq!(
            delta_oracle(&two, ModulusKind::Coarse, 2.0).unwrap(),
            Extended::Finite(1.0)
        );
    }

    #[test]
    fn oracle_rejects_large_spaces() {
        let l = line(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        assert!(matches!(
            DeltaOracle::new(&l),
            Err(Error::TooLarge { n: 5, max: 4 })
        ));
    }

    #[test]
    fn oracle_agrees_with_closed_forms_on_lines() {
        let l = line(&[0.0, 1.0, 3.0, 4.0]);
        let oracle = DeltaOracle::new(&l).unwrap();
        for arg in default_grid(&l) {
            assert_eq!(
                oracle.eval(ModulusKind::Coarse, arg).unwrap(),
                Extended::Finite(delta_coarse(&l, arg).unwrap()),
                "coarse mismatch at {arg}"
            );
            assert_eq!(
                oracle.eval(ModulusKind::Uniform, arg).unwrap(),
                delta_uniform(&l, arg).unwrap(),
                "uniform mismatch at {arg}"
            );
        }
    }

    #[test]
    fn curve_is_monotone_and_below_diagonal() {
        let eq = equilateral(4, 1.0);
        let grid = default_grid(&eq);
        let curve = modulus_curve(&eq, ModulusKind::Coarse, &grid).unwrap();
        for s in &curve.samples {
            let v = s.value.as_finite().unwrap();
            assert!(
                v <= s.argument,
                "coarse({}) = {} above diagonal",
                s.argument,
                v
            );
        }
        // jump at the distance value
        assert_eq!(delta_coarse(&eq, 1.0).unwrap(), 0.0);
        assert_eq!(delta_coarse(&eq, 1.0_f64.next_up()).unwrap(), 1.0);
    }

    #[test]
    fn singleton_grid_gives_single_sample() {
        let eq = equilateral(3, 1.0);
        let curve = modulus_curve(&eq, ModulusKind::Coarse, &[0.7]).unwrap();
        assert_eq!(curve.samples.len(), 1);
    }

    #[test]
    fn duality_passes_on_small_spaces() {
        let l = line(&[0.0, 1.0, 2.0, 5.0]);
        let grid = default_grid(&l);
        let report = check_duality(&l, &grid, &[0.1, 0.01]).unwrap();
        assert!(report.pass);
    }

    #[test]
    fn zero_coarse_value_means_large_uniform_everywhere() {
        // instance of the first duality inequality with a zero inner value
        let eq = equilateral(3, 1.0);
        let r_lower = 1.0;
        assert_eq!(delta_coarse(&eq, r_lower).unwrap(), 0.0);
        for eps in [1e-3, 0.1, 0.5] {
            assert!(delta_uniform(&eq, eps).unwrap().at_least(r_lower));
        }
    }

    #[test]
    fn small_c_reports() {
        let l = line(&[0.0, 10.0]);
        // C=0, D=diam: hypothesis and conclusion both hold.
        let grid = vec![1.0, 5.0, 11.0, 25.0];
        let rep = check_small_c(&l, 0.0, 10.0, &grid, 1e-9).unwrap();
        assert!(rep.hypothesis_holds && rep.conclusion_holds && rep.consistent_with_lemma);
        // diam 10 with C=0.5, D=1: hypothesis must fail somewhere.
        let grid = vec![1.0, 3.0, 9.0, 10.5, 30.0];
        let rep = check_small_c(&l, 0.5, 1.0, &grid, 1e-9).unwrap();
        assert!(!rep.hypothesis_holds);
        assert!(rep.consistent_with_lemma);
    }

    #[test]
    fn linear_type_both_sides() {
        let l = line(&[0.0, 1.0, 2.0, 3.0]);
        let grid = default_grid(&l);
        let ok = check_linear_type(&l, 1.0, &grid).unwrap();
        assert!(ok.coarse_bound_holds && ok.uniform_bound_holds && ok.biconditional_on_grid);
        let bad = check_linear_type(&l, 0.5, &grid).unwrap();
        assert!(!bad.coarse_bound_holds && !bad.uniform_bound_holds);
        assert!(bad.biconditional_on_grid);
        assert!(!bad.coarse_witnesses.is_empty() && !bad.uniform_witnesses.is_empty());
    }

    #[test]
    fn equilateral_linear_type_closed_form() {
        let eq = equilateral(3, 1.0);
        let grid = default_grid(&eq);
        let rep = check_linear_type(&eq, 1.0, &grid).unwrap();
        assert!(rep.uniform_bound_holds);
    }
}
