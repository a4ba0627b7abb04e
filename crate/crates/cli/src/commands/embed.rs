use std::collections::BTreeMap;

use serde::Serialize;

use stone_core::embedding::{
    build_scale_family, embed, CoverBuilder, DistortionReport, EmbeddingConfig,
};

use crate::args::{EmbedArgs, EmbedCoverKind};
use crate::io::{emit_json, Failure};
use crate::load_space;

#[derive(Serialize)]
struct ConfigEcho {
    t: f64,
    eps: f64,
    lambda: f64,
    base_point: String,
    c: f64,
    c_eff: f64,
    d: f64,
    scale_range: (i32, i32),
    /// (C_eff + lambda) t^{n_min}: distances below this carry no witness
    /// scale; the certified L is zero only when it undercuts every
    /// positive distance.
    truncation_floor: f64,
    cover_kind: String,
    tolerance: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "UPPERCASE")]
struct EmbedOutput {
    k: f64,
    l: f64,
    #[serde(rename = "config")]
    config: ConfigEcho,
    #[serde(rename = "points")]
    points: BTreeMap<String, BTreeMap<String, f64>>,
    #[serde(rename = "report")]
    report: DistortionReport,
}

fn parse_scales(text: &str) -> Result<(i32, i32), Failure> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| Failure::Parse(format!("scale range {text:?}: expected n_min..n_max")))?;
    let lo = lo
        .trim()
        .parse()
        .map_err(|e| Failure::Parse(format!("scale {lo:?}: {e}")))?;
    let hi = hi
        .trim()
        .parse()
        .map_err(|e| Failure::Parse(format!("scale {hi:?}: {e}")))?;
    Ok((lo, hi))
}

pub fn run(args: &EmbedArgs) -> Result<i32, Failure> {
    let space = load_space(&args.input)?;
    let base_point = match &args.base_point {
        None => 0,
        Some(label) => space
            .label_index(label)
            .ok_or_else(|| Failure::Parse(format!("no point labeled {label:?}")))?,
    };
    let config = EmbeddingConfig {
        t: args.t,
        eps: args.eps,
        lambda: args.lambda,
        base_point,
        c: args.c,
        d: args.d,
        scale_range: args.scales.as_deref().map(parse_scales).transpose()?,
        tolerance: args.tolerance,
    };
    let builder = match args.cover_kind {
        EmbedCoverKind::Clique => CoverBuilder::Clique,
        EmbedCoverKind::Greedy => CoverBuilder::Greedy,
    };
    let family = build_scale_family(&space, &config, builder)?;
    let (map, report) = embed(&family)?;
    let points: BTreeMap<String, BTreeMap<String, f64>> = map
        .iter()
        .enumerate()
        .map(|(i, seq)| {
            let coords: BTreeMap<String, f64> =
                seq.iter().map(|(c, v)| (c.to_string(), v)).collect();
            (space.label(i).to_string(), coords)
        })
        .collect();
    let pass = report.pass;
    let out = EmbedOutput {
        k: family.k,
        l: report.l,
        config: ConfigEcho {
            t: config.t,
            eps: config.eps,
            lambda: config.lambda,
            base_point: space.label(base_point).to_string(),
            c: config.c,
            c_eff: family.c_eff,
            d: config.d,
            scale_range: family.scale_range(),
            truncation_floor: family.truncation_floor(),
            cover_kind: format!("{:?}", args.cover_kind).to_lowercase(),
            tolerance: config.tolerance,
        },
        points,
        report,
    };
    emit_json(args.output.as_deref(), &out)?;
    Ok(if pass { 0 } else { 2 })
}
