use serde::Serialize;
use serde_json::{json, Value};

use stone_core::catalog::{
    clique_cover, greedy_separable_cover, tree_cover, C0PlusGridCover, GridCellIndex, LinfGridCover,
};
use stone_core::cover::{Cover, CoverFile};
use stone_core::ext::Extended;
use stone_core::sparse::SparseNonnegativeSequence;

use crate::args::{CoverArgs, CoverKind, QueryKind};
use crate::io::{emit_json, load_tree, Failure};
use crate::load_space;

#[derive(Serialize)]
struct BoundCheck {
    name: String,
    bound: f64,
    actual: Extended,
    pass: bool,
}

#[derive(Serialize)]
struct FiniteCoverOutput {
    kind: String,
    params: Value,
    point_labels: Vec<String>,
    cover: CoverFile,
    diameter: f64,
    lebesgue: Extended,
    max_multiplicity: usize,
    checks: Vec<BoundCheck>,
    pass: bool,
}

fn need(opt: Option<f64>, flag: &str) -> Result<f64, Failure> {
    opt.ok_or_else(|| Failure::Parse(format!("--{flag} is required for this cover kind")))
}

fn at_most(name: &str, actual: f64, bound: f64) -> BoundCheck {
    BoundCheck {
        name: name.into(),
        bound,
        actual: Extended::Finite(actual),
        pass: actual <= bound,
    }
}

fn at_least(name: &str, actual: Extended, bound: f64) -> BoundCheck {
    BoundCheck {
        name: name.into(),
        bound,
        actual,
        pass: actual.at_least(bound),
    }
}

fn finite_output(
    kind: &str,
    params: Value,
    cover: &Cover,
    checks: Vec<BoundCheck>,
) -> Result<FiniteCoverOutput, Failure> {
    let metrics = cover.metrics()?.clone();
    let pass = checks.iter().all(|c| c.pass);
    Ok(FiniteCoverOutput {
        kind: kind.into(),
        params,
        point_labels: cover.space().labels().to_vec(),
        cover: CoverFile::from(cover),
        diameter: match metrics.diameter {
            Extended::Finite(d) => d,
            Extended::Infinity => f64::INFINITY,
        },
        lebesgue: metrics.lebesgue,
        max_multiplicity: metrics.max_multiplicity,
        checks,
        pass,
    })
}

fn parse_point_vector(text: &str) -> Result<Vec<f64>, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Parse(format!("point: {e}")))
}

fn parse_cell_vector(text: &str) -> Result<Vec<i64>, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Parse(format!("cell: {e}")))
}

fn parse_sparse_point(text: &str) -> Result<SparseNonnegativeSequence, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Parse(format!("point: {e}")))
}

fn parse_grid_cell(text: &str) -> Result<GridCellIndex, Failure> {
    let cell: GridCellIndex =
        serde_json::from_str(text).map_err(|e| Failure::Parse(format!("cell: {e}")))?;
    GridCellIndex::new(cell.support, cell.offsets).map_err(Failure::Core)
}

fn query_arg<'a>(opt: &'a Option<String>, flag: &str) -> Result<&'a str, Failure> {
    opt.as_deref()
        .ok_or_else(|| Failure::Parse(format!("--{flag} is required for this query")))
}

pub fn run(args: &CoverArgs) -> Result<i32, Failure> {
    let output = args.output.as_deref();
    match args.kind {
        CoverKind::Clique => {
            let space = load_space(&args.input)?;
            let radius = need(args.radius, "radius")?;
            let cover = clique_cover(&space, radius)?;
            let checks = vec![
                at_least("lebesgue >= radius", cover.lebesgue_number()?, radius),
                at_most("diameter <= radius", cover.diameter(), radius),
            ];
            let out = finite_output("clique", json!({ "radius": radius }), &cover, checks)?;
            emit_json(output, &out)?;
            Ok(if out.pass { 0 } else { 2 })
        }
        CoverKind::Greedy => {
            let space = load_space(&args.input)?;
            let radius = need(args.radius, "radius")?;
            let eps = need(args.eps, "eps")?;
            let order: Vec<usize> = match &args.order {
                None => (0..space.len()).collect(),
                Some(text) => text
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse()
                            .map_err(|e| Failure::Parse(format!("order entry {s:?}: {e}")))
                    })
                    .collect::<Result<_, _>>()?,
            };
            let cover = greedy_separable_cover(&space, radius, eps, &order)?;
            let checks = vec![
                at_most("diameter <= r", cover.diameter(), radius),
                at_least(
                    "lebesgue >= r/2 - eps",
                    cover.lebesgue_number()?,
                    radius / 2.0 - eps,
                ),
            ];
            let out = finite_output(
                "greedy",
                json!({ "radius": radius, "eps": eps, "order": order }),
                &cover,
                checks,
            )?;
            emit_json(output, &out)?;
            Ok(if out.pass { 0 } else { 2 })
        }
        CoverKind::Tree => {
            let tree = load_tree(&args.input)?;
            let radius = need(args.radius, "radius")?;
            let subdiv = args.subdiv.unwrap_or(1);
            let cover = tree_cover(&tree, radius, subdiv)?;
            let reach = 1.0 / subdiv as f64;
            let mult_bound = subdiv as f64 * radius.ceil() + 1.0;
            let checks = vec![
                at_least("lebesgue >= radius", cover.lebesgue_number()?, radius),
                at_most(
                    "diameter <= 2(radius + 1/subdiv)",
                    cover.diameter(),
                    2.0 * (radius + reach),
                ),
                at_most(
                    "multiplicity <= subdiv*ceil(radius) + 1",
                    cover.max_multiplicity() as f64,
                    mult_bound,
                ),
            ];
            let out = finite_output(
                "tree",
                json!({ "radius": radius, "subdiv": subdiv }),
                &cover,
                checks,
            )?;
            emit_json(output, &out)?;
            Ok(if out.pass { 0 } else { 2 })
        }
        CoverKind::LinfGrid => {
            let dim = args
                .dim
                .ok_or_else(|| Failure::Parse("--dim is required for linf-grid".into()))?;
            let subdiv = args.subdiv.unwrap_or(1);
            let grid = LinfGridCover::new(dim, subdiv)?;
            match args.query {
                None => {
                    emit_json(
                        output,
                        &json!({
                            "kind": "linf-grid",
                            "dim": dim,
                            "subdiv": subdiv,
                            "member_diameter": grid.member_diameter(),
                            "multiplicity_bound": grid.multiplicity_bound().to_string(),
                        }),
                    )?;
                    Ok(0)
                }
                Some(QueryKind::Locate) => {
                    let point = parse_point_vector(query_arg(&args.point, "point")?)?;
                    let cell = grid.locate(&point)?;
                    emit_json(output, &json!({ "cell": cell }))?;
                    Ok(0)
                }
                Some(QueryKind::Membership) => {
                    let point = parse_point_vector(query_arg(&args.point, "point")?)?;
                    let cell = parse_cell_vector(query_arg(&args.cell, "cell")?)?;
                    let contains = grid.contains(&point, &cell)?;
                    emit_json(output, &json!({ "contains": contains }))?;
                    Ok(0)
                }
                Some(QueryKind::Multiplicity) => {
                    let point = parse_point_vector(query_arg(&args.point, "point")?)?;
                    let cells = grid.containing_cells(&point)?;
                    emit_json(
                        output,
                        &json!({
                            "count": cells.len(),
                            "bound": grid.multiplicity_bound().to_string(),
                            "cells": cells,
                        }),
                    )?;
                    Ok(0)
                }
            }
        }
        CoverKind::C0Grid => {
            let radius = need(args.radius, "radius")?;
            let subdiv = args.subdiv.unwrap_or(1);
            let grid = C0PlusGridCover::new(radius, subdiv)?;
            match args.query {
                None => {
                    emit_json(
                        output,
                        &json!({
                            "kind": "c0-grid",
                            "radius": radius,
                            "subdiv": subdiv,
                            "member_diameter": grid.member_diameter(),
                        }),
                    )?;
                    Ok(0)
                }
                Some(QueryKind::Locate) => {
                    let point = parse_sparse_point(query_arg(&args.point, "point")?)?;
                    let cell = grid.locate(&point);
                    emit_json(output, &json!({ "cell": cell }))?;
                    Ok(0)
                }
                Some(QueryKind::Membership) => {
                    let point = parse_sparse_point(query_arg(&args.point, "point")?)?;
                    let cell = parse_grid_cell(query_arg(&args.cell, "cell")?)?;
                    emit_json(output, &json!({ "contains": grid.contains(&point, &cell) }))?;
                    Ok(0)
                }
                Some(QueryKind::Multiplicity) => {
                    let point = parse_sparse_point(query_arg(&args.point, "point")?)?;
                    let support = grid.locate(&point).support;
                    let cells = grid.containing_offsets(&point, &support)?;
                    emit_json(
                        output,
                        &json!({
                            "count": cells.len(),
                            "bound": grid.multiplicity_bound(support.len()).to_string(),
                            "cells": cells,
                        }),
                    )?;
                    Ok(0)
                }
            }
        }
    }
}
