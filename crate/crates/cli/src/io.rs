//! Input loading, JSON and CSV emission, and the exit-code mapping.
//!
//! All floats are printed with 17 significant digits so every emitted
//! value round-trips exactly; map keys are emitted in sorted order so
//! identical runs produce byte-identical files.

use std::fmt;
use std::fs;
use std::io::Read;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use stone_core::space::{LpExponent, SpaceSpec};
use stone_core::{Error as CoreError, FiniteMetricSpace, RootedTree};

use crate::args::InputArgs;

/// CLI-level failure with the documented exit codes: 1 for IO/parse
/// problems, 2 for validation or certification failures, 3 for resource
/// caps.
#[derive(Debug)]
pub enum Failure {
    Io(String),
    Parse(String),
    Core(CoreError),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Io(_) | Failure::Parse(_) => 1,
            Failure::Core(
                CoreError::CliqueCapExceeded { .. }
                | CoreError::EnumerationCapExceeded { .. }
                | CoreError::TooLarge { .. },
            ) => 3,
            Failure::Core(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Io(m) => write!(f, "io error: {m}"),
            Failure::Parse(m) => write!(f, "parse error: {m}"),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::Core(e)
    }
}

/// A vertex label that may arrive as a JSON string or number.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum LabelValue {
    S(String),
    I(i64),
    F(f64),
}

impl LabelValue {
    fn into_string(self) -> String {
        match self {
            LabelValue::S(s) => s,
            LabelValue::I(i) => i.to_string(),
            LabelValue::F(x) => x.to_string(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct TreeInput {
    pub edges: Vec<(LabelValue, LabelValue, f64)>,
    pub root: LabelValue,
}

impl TreeInput {
    pub fn build(self) -> Result<RootedTree, Failure> {
        let edges: Vec<(String, String, f64)> = self
            .edges
            .into_iter()
            .map(|(u, v, l)| (u.into_string(), v.into_string(), l))
            .collect();
        Ok(RootedTree::from_edges(&edges, &self.root.into_string())?)
    }
}

/// The three accepted space input forms.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum SpaceInput {
    Matrix {
        #[serde(default)]
        labels: Option<Vec<String>>,
        dist: Vec<Vec<f64>>,
    },
    Points {
        points: Vec<Vec<f64>>,
        p: LpExponent,
    },
    Tree {
        tree: TreeInput,
    },
}

impl SpaceInput {
    pub fn build(self) -> Result<FiniteMetricSpace, Failure> {
        match self {
            SpaceInput::Matrix { labels, dist } => {
                let space = FiniteMetricSpace::validate(dist)?;
                Ok(match labels {
                    Some(ls) => space.with_labels(ls)?,
                    None => space,
                })
            }
            SpaceInput::Points { points, p } => Ok(FiniteMetricSpace::from_points(points, p)?),
            SpaceInput::Tree { tree } => Ok(tree.build()?.to_metric_space()?),
        }
    }
}

pub fn read_text(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))
    }
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Parse(format!("{what}: {e}")))
}

/// Load the space named by --input or --gen.
pub fn load_space(args: &InputArgs) -> Result<Arc<FiniteMetricSpace>, Failure> {
    match (&args.input, &args.gen) {
        (Some(path), None) => {
            let text = read_text(path)?;
            let input: SpaceInput = parse_json(&text, "space input")?;
            Ok(Arc::new(input.build()?))
        }
        (None, Some(spec_text)) => {
            let spec: SpaceSpec = parse_json(spec_text, "generator spec")?;
            Ok(Arc::new(FiniteMetricSpace::generate(&spec, args.seed)?))
        }
        _ => Err(Failure::Parse(
            "exactly one of --input or --gen is required".into(),
        )),
    }
}

/// Load a rooted tree; only tree-form inputs qualify.
pub fn load_tree(args: &InputArgs) -> Result<RootedTree, Failure> {
    let text = match (&args.input, &args.gen) {
        (Some(path), None) => read_text(path)?,
        (None, Some(spec)) => spec.clone(),
        _ => {
            return Err(Failure::Parse(
                "exactly one of --input or --gen is required".into(),
            ))
        }
    };
    if let Ok(SpaceInput::Tree { tree }) = parse_json::<SpaceInput>(&text, "tree input") {
        return tree.build();
    }
    if let Ok(SpaceSpec::Tree { edges, root }) = parse_json::<SpaceSpec>(&text, "tree spec") {
        return Ok(RootedTree::from_edges(&edges, &root)?);
    }
    Err(Failure::Parse(
        "tree covers need a {\"tree\": {\"edges\": ..., \"root\": ...}} input".into(),
    ))
}

/// 17-significant-digit float rendering; negative zero normalizes to zero.
pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn push_json(value: &Value, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else {
                out.push_str(&fmt_f64(n.as_f64().expect("finite float")));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string encodes"));
        }
        Value::Array(items) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                push_json(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (k, (key, item)) in map.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("string encodes"));
                out.push(':');
                push_json(item, out);
            }
            out.push('}');
        }
    }
}

/// Serialize with 17-digit floats and sorted keys.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String, Failure> {
    let v =
        serde_json::to_value(value).map_err(|e| Failure::Parse(format!("serialization: {e}")))?;
    let mut out = String::new();
    push_json(&v, &mut out);
    out.push('\n');
    Ok(out)
}

pub fn write_output(path: Option<&str>, content: &str) -> Result<(), Failure> {
    match path {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(p) => fs::write(p, content).map_err(|e| Failure::Io(format!("{p}: {e}"))),
    }
}

pub fn emit_json<T: Serialize>(path: Option<&str>, value: &T) -> Result<(), Failure> {
    write_output(path, &to_json_string(value)?)
}
