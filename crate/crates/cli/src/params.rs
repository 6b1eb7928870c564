//! Parameter schemas and their resolution from `key=value` strings.

use crate::error::{CliError, Result};
use crate::table::{format_float, Value};
use std::collections::BTreeMap;

/// Shape of a parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamKind {
    /// A real number within `[min, max]`.
    Float { min: f64, max: f64 },
    /// An integer within `[min, max]`.
    Int { min: u64, max: u64 },
    /// Comma-separated reals, each within `[min, max]`.
    Floats { min: f64, max: f64 },
    /// Comma-separated integers, each within `[min, max]`.
    Ints { min: u64, max: u64 },
    /// One of a fixed set of words.
    Choice(&'static [&'static str]),
}

/// One entry of an experiment's parameter schema.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    pub default: &'static str,
    pub help: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
enum Resolved {
    Float(f64),
    Int(u64),
    Floats(Vec<f64>),
    Ints(Vec<u64>),
    Choice(String),
}

fn parse_float(key: &str, s: &str, min: f64, max: f64) -> Result<f64> {
    let x: f64 = s.trim().parse().map_err(|_| CliError::bad_param(key, format!("`{s}` is not a number")))?;
    if !(min..=max).contains(&x) {
        return Err(CliError::bad_param(key, format!("{x} outside [{min}, {max}]")));
    }
    Ok(x)
}

fn parse_int(key: &str, s: &str, min: u64, max: u64) -> Result<u64> {
    let x: u64 =
        s.trim().parse().map_err(|_| CliError::bad_param(key, format!("`{s}` is not a non-negative integer")))?;
    if !(min..=max).contains(&x) {
        return Err(CliError::bad_param(key, format!("{x} outside [{min}, {max}]")));
    }
    Ok(x)
}

fn list<T>(key: &str, s: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    let items: Vec<T> = s.split(',').filter(|p| !p.trim().is_empty()).map(f).collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(CliError::bad_param(key, "empty list"));
    }
    Ok(items)
}

impl ParamSpec {
    fn resolve(&self, raw: &str) -> Result<Resolved> {
        let key = self.name;
        Ok(match self.kind {
            ParamKind::Float { min, max } => Resolved::Float(parse_float(key, raw, min, max)?),
            ParamKind::Int { min, max } => Resolved::Int(parse_int(key, raw, min, max)?),
            ParamKind::Floats { min, max } => Resolved::Floats(list(key, raw, |p| parse_float(key, p, min, max))?),
            ParamKind::Ints { min, max } => Resolved::Ints(list(key, raw, |p| parse_int(key, p, min, max))?),
            ParamKind::Choice(options) => {
                let v = raw.trim();
                if !options.contains(&v) {
                    return Err(CliError::bad_param(key, format!("`{v}` is not one of {}", options.join(", "))));
                }
                Resolved::Choice(v.to_string())
            }
        })
    }
}

/// Typed parameters of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    values: Vec<(&'static str, Resolved)>,
}

impl Params {
    /// Applies `overrides` on top of the schema defaults. Unknown or repeated keys are errors.
    pub fn resolve(schema: &[ParamSpec], overrides: &[(String, String)]) -> Result<Self> {
        let mut given: BTreeMap<&str, &str> = BTreeMap::new();
        for (k, v) in overrides {
            if !schema.iter().any(|s| s.name == k) {
                let known: Vec<&str> = schema.iter().map(|s| s.name).collect();
                return Err(CliError::bad_param(k, format!("unknown; expected one of: {}", known.join(", "))));
            }
            if given.insert(k, v).is_some() {
                return Err(CliError::bad_param(k, "given more than once"));
            }
        }
        let values = schema
            .iter()
            .map(|s| Ok((s.name, s.resolve(given.get(s.name).copied().unwrap_or(s.default))?)))
            .collect::<Result<_>>()?;
        Ok(Self { values })
    }

    fn get(&self, key: &str) -> &Resolved {
        &self.values.iter().find(|(k, _)| *k == key).unwrap_or_else(|| panic!("parameter `{key}` not in schema")).1
    }

    pub fn float(&self, key: &str) -> f64 {
        match self.get(key) {
            Resolved::Float(x) => *x,
            other => panic!("parameter `{key}` is {other:?}"),
        }
    }

    pub fn int(&self, key: &str) -> u64 {
        match self.get(key) {
            Resolved::Int(x) => *x,
            other => panic!("parameter `{key}` is {other:?}"),
        }
    }

    pub fn usize(&self, key: &str) -> usize {
        self.int(key) as usize
    }

    pub fn floats(&self, key: &str) -> &[f64] {
        match self.get(key) {
            Resolved::Floats(x) => x,
            other => panic!("parameter `{key}` is {other:?}"),
        }
    }

    pub fn ints(&self, key: &str) -> &[u64] {
        match self.get(key) {
            Resolved::Ints(x) => x,
            other => panic!("parameter `{key}` is {other:?}"),
        }
    }

    pub fn choice(&self, key: &str) -> &str {
        match self.get(key) {
            Resolved::Choice(x) => x,
            other => panic!("parameter `{key}` is {other:?}"),
        }
    }

    /// Resolved values for the output metadata.
    pub fn echo(&self) -> Vec<(String, Value)> {
        let join = |v: Vec<String>| Value::Text(v.join(","));
        self.values
            .iter()
            .map(|(k, v)| {
                let value = match v {
                    Resolved::Float(x) => Value::Float(*x),
                    Resolved::Int(x) => Value::Int(*x as i64),
                    Resolved::Floats(xs) => join(xs.iter().map(|x| format_float(*x)).collect()),
                    Resolved::Ints(xs) => join(xs.iter().map(u64::to_string).collect()),
                    Resolved::Choice(s) => Value::Text(s.clone()),
                };
                (k.to_string(), value)
            })
            .collect()
    }
}

/// Splits `key=value`.
pub fn parse_assignment(s: &str) -> Result<(String, String)> {
    match s.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.to_string())),
        _ => Err(CliError::bad_param(s, "expected key=value")),
    }
}
