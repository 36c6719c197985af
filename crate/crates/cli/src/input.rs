//! Linkage files: `{"lines": [[8 numbers] x 6]}` or
//! `{"dh": {"c": [..], "b": [..], "s": [..]}}`. Entries are JSON numbers or
//! strings such as `"0.6"`, `"-3/5"` or `"1e-3"`; both parse exactly on the
//! rational backend.

use std::fs;
use std::path::Path;

use hexlink::linkage::N;
use hexlink::{DHParams, DualQuaternion, Error, Line, Linkage6R, Scalar};
use serde::Deserialize;
use serde_json::Value;

/// A problem with user input. Reported with exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct Invalid(pub String);

pub fn invalid(msg: impl Into<String>) -> anyhow::Error {
    Invalid(msg.into()).into()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkageFile {
    lines: Option<Value>,
    dh: Option<DhTable>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DhTable {
    c: Value,
    b: Value,
    s: Value,
}

#[derive(Clone, Debug)]
pub enum Input<T> {
    Lines(Linkage6R<T>),
    Dh(DHParams<T>),
}

impl<T: Scalar> Input<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Lines(_) => "lines",
            Input::Dh(_) => "dh",
        }
    }

    pub fn dh_params(&self) -> anyhow::Result<DHParams<T>> {
        match self {
            Input::Lines(l) => Ok(l.dh_params()?),
            Input::Dh(p) => Ok(p.clone()),
        }
    }
}

pub fn load<T: Scalar>(path: &Path) -> anyhow::Result<Input<T>> {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse<T: Scalar>(text: &str) -> anyhow::Result<Input<T>> {
    let file: LinkageFile = serde_json::from_str(text).map_err(|e| invalid(format!("malformed linkage file: {e}")))?;
    match (file.lines, file.dh) {
        (Some(lines), None) => parse_lines(&lines).map(Input::Lines),
        (None, Some(dh)) => parse_dh(&dh).map(Input::Dh),
        _ => Err(invalid("linkage file needs exactly one of \"lines\" and \"dh\"")),
    }
}

fn scalar<T: Scalar>(v: &Value, path: &str) -> anyhow::Result<T> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(invalid(format!("{path}: expected a number or a decimal string"))),
    };
    T::parse_decimal(&text).ok_or_else(|| invalid(format!("{path}: cannot parse '{text}' as a number")))
}

fn array<'a>(v: &'a Value, len: usize, path: &str) -> anyhow::Result<&'a Vec<Value>> {
    match v {
        Value::Array(a) if a.len() == len => Ok(a),
        Value::Array(a) => Err(invalid(format!("{path}: expected {len} entries, found {}", a.len()))),
        _ => Err(invalid(format!("{path}: expected an array of {len} entries"))),
    }
}

fn parse_lines<T: Scalar>(v: &Value) -> anyhow::Result<Linkage6R<T>> {
    let rows = array(v, N, "lines")?;
    let mut axes = Vec::with_capacity(N);
    for (i, row) in rows.iter().enumerate() {
        let path = format!("lines[{i}]");
        let entries = array(row, 8, &path)?;
        let mut coeffs = Vec::with_capacity(8);
        for (j, e) in entries.iter().enumerate() {
            coeffs.push(scalar::<T>(e, &format!("{path}[{j}]"))?);
        }
        let dq = DualQuaternion::new(coeffs.try_into().unwrap_or_else(|_| unreachable!("eight entries checked")));
        let line = Line::new(dq).map_err(|e| invalid(format!("{path} (axis {}): {e}", i + 1)))?;
        axes.push(line);
    }
    let axes: [Line<T>; N] = axes.try_into().unwrap_or_else(|_| unreachable!("six rows checked"));
    Linkage6R::new(axes).map_err(|e| invalid(e.to_string()))
}

fn parse_dh<T: Scalar>(dh: &DhTable) -> anyhow::Result<DHParams<T>> {
    let column = |v: &Value, name: &str| -> anyhow::Result<[T; N]> {
        let path = format!("dh.{name}");
        let entries = array(v, N, &path)?;
        let mut out = Vec::with_capacity(N);
        for (i, e) in entries.iter().enumerate() {
            out.push(scalar::<T>(e, &format!("{path}[{i}]"))?);
        }
        Ok(out.try_into().unwrap_or_else(|_| unreachable!("six entries checked")))
    };
    let (c, b, s) = (column(&dh.c, "c")?, column(&dh.b, "b")?, column(&dh.s, "s")?);
    for (i, ci) in c.iter().enumerate() {
        if ci.abs() > T::one() {
            return Err(invalid(format!("dh.c[{i}]: cosine {ci} outside [-1, 1]")));
        }
    }
    DHParams::new(c, b, s).map_err(|e: Error| invalid(e.to_string()))
}
