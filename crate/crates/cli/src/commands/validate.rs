use serde::Serialize;
use stone_core::Error as CoreError;

use crate::args::InputArgs;
use crate::io::{emit_json, load_space, Failure};

#[derive(Serialize)]
struct ValidDiagnostics {
    ok: bool,
    points: usize,
    diameter: f64,
    labels: Vec<String>,
}

#[derive(Serialize)]
struct InvalidDiagnostics {
    ok: bool,
    error: CoreError,
}

pub fn run(args: &InputArgs) -> Result<i32, Failure> {
    match load_space(args) {
        Ok(space) => {
            emit_json(
                None,
                &ValidDiagnostics {
                    ok: true,
                    points: space.len(),
                    diameter: space.diameter(),
                    labels: space.labels().to_vec(),
                },
            )?;
            Ok(0)
        }
        Err(Failure::Core(error)) => {
            emit_json(None, &InvalidDiagnostics { ok: false, error })?;
            Ok(2)
        }
        Err(other) => Err(other),
    }
}
