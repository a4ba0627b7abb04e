use stone_core::ext::Extended;
use stone_core::moduli::{default_grid, modulus_curve, DeltaOracle, ModulusKind};

use crate::args::{DeltaArgs, DeltaKind};
use crate::io::{fmt_f64, write_output, Failure};
use crate::load_space;

fn parse_grid(text: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| Failure::Parse(format!("grid value {s:?}: {e}")))
        })
        .collect()
}

fn csv_value(v: &Extended) -> String {
    match v {
        Extended::Finite(x) => fmt_f64(*x),
        Extended::Infinity => "inf".into(),
    }
}

pub fn run(args: &DeltaArgs) -> Result<i32, Failure> {
    let space = load_space(&args.input)?;
    let kind = match args.kind {
        DeltaKind::Coarse => ModulusKind::Coarse,
        DeltaKind::Uniform => ModulusKind::Uniform,
    };
    let grid = match &args.grid {
        Some(text) => parse_grid(text)?,
        None => default_grid(&space),
    };
    let curve = modulus_curve(&space, kind, &grid)?;
    let kind_name = match kind {
        ModulusKind::Coarse => "coarse",
        ModulusKind::Uniform => "uniform",
    };
    let mut out = String::from("kind,argument,value\n");
    for s in &curve.samples {
        out.push_str(&format!(
            "{kind_name},{},{}\n",
            fmt_f64(s.argument),
            csv_value(&s.value)
        ));
    }
    let mut mismatch = false;
    if args.oracle {
        let oracle = DeltaOracle::new(&space)?;
        for s in &curve.samples {
            let reference = oracle.eval(kind, s.argument)?;
            out.push_str(&format!(
                "{kind_name}-oracle,{},{}\n",
                fmt_f64(s.argument),
                csv_value(&reference)
            ));
            mismatch |= reference != s.value;
        }
    }
    write_output(args.output.as_deref(), &out)?;
    if mismatch {
        eprintln!("oracle cross-check failed");
        return Ok(2);
    }
    Ok(0)
}
