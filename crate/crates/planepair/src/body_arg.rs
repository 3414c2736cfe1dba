use std::path::Path;

use planepair_core::{BodySpec, ConvexBody3, Error as CoreError};
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::error::{CliError, Result};

/// Contents of a body file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BodyFile {
    kind: String,
    parameters: Map<String, Value>,
    #[serde(default)]
    label: Option<String>,
}

/// Parses `ball:r`, `ellipsoid:a,b,c`, `cw:r,eps,degree[,order]`, or a path to a JSON body file.
pub fn parse_body(arg: &str) -> Result<ConvexBody3> {
    let (spec, label) = if arg.ends_with(".json") || Path::new(arg).is_file() {
        read_body_file(arg)?
    } else {
        (parse_inline(arg)?, None)
    };
    let body = ConvexBody3::new(spec).map_err(|e| classify(arg, e))?;
    Ok(match label {
        Some(l) => body.with_label(l),
        None => body,
    })
}

fn classify(arg: &str, e: CoreError) -> CliError {
    match e {
        CoreError::ConvexityViolation { .. } => CliError::Convexity {
            spec: arg.into(),
            source: e,
        },
        other => invalid(arg, other.to_string()),
    }
}

fn invalid(spec: &str, reason: impl Into<String>) -> CliError {
    CliError::InvalidSpec {
        spec: spec.into(),
        reason: reason.into(),
    }
}

pub fn parse_inline(arg: &str) -> Result<BodySpec> {
    let (kind, rest) = arg
        .split_once(':')
        .ok_or_else(|| invalid(arg, "expected kind:parameters"))?;
    let nums = rest
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| invalid(arg, e.to_string()))?;
    let count = |lo: usize, hi: usize| -> Result<()> {
        if nums.len() < lo || nums.len() > hi {
            return Err(invalid(
                arg,
                format!("{kind} takes {lo}..={hi} parameters, got {}", nums.len()),
            ));
        }
        Ok(())
    };
    let index = |x: f64| -> Result<usize> {
        if x >= 0.0 && x.fract() == 0.0 {
            Ok(x as usize)
        } else {
            Err(invalid(arg, format!("{x} is not a nonnegative integer")))
        }
    };
    match kind.trim() {
        "ball" => {
            count(1, 1)?;
            Ok(BodySpec::Ball { r: nums[0] })
        }
        "ellipsoid" => {
            count(3, 3)?;
            Ok(BodySpec::Ellipsoid {
                a: nums[0],
                b: nums[1],
                c: nums[2],
            })
        }
        "cw" | "constant_width" => {
            count(3, 4)?;
            Ok(BodySpec::ConstantWidth {
                r: nums[0],
                eps: nums[1],
                degree: index(nums[2])?,
                order: nums.get(3).map(|&x| index(x)).transpose()?.unwrap_or(0),
            })
        }
        other => Err(invalid(arg, format!("unknown body kind `{other}`"))),
    }
}

fn read_body_file(path: &str) -> Result<(BodySpec, Option<String>)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let file: BodyFile = serde_json::from_str(&text).map_err(|e| invalid(path, e.to_string()))?;
    let kind = match file.kind.as_str() {
        "cw" => "constant_width".to_string(),
        "sh" => "sh_body".to_string(),
        k => k.to_string(),
    };
    let mut obj = file.parameters;
    obj.insert("kind".into(), Value::String(kind));
    let spec: BodySpec =
        serde_json::from_value(Value::Object(obj)).map_err(|e| invalid(path, e.to_string()))?;
    Ok((spec, file.label))
}
