//! JSON formats for complexes, functions, merge trees, barcodes and cell
//! maps. Every reader rejects unknown fields and reports the offending field
//! as a path such as `nodes[2].value`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::barcode::{Bar, Barcode};
use crate::complex::{Cell, Complex};
use crate::corpus;
use crate::distance::Distance;
use crate::error::Error;
use crate::function::DiscreteFunction;
use crate::merge_tree::MergeTree;
use crate::morphism::CellMap;
use crate::rational::{format_rational, serde_string, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    /// Path of the offending field; empty for whole-document problems.
    pub field: String,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.field, self.message)
        }
    }
}

impl std::error::Error for InputError {}

impl InputError {
    fn at(field: impl Into<String>, err: impl fmt::Display) -> Self {
        Self {
            field: field.into(),
            message: err.to_string(),
        }
    }
}

pub type InputResult<T> = std::result::Result<T, InputError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Q(#[serde(with = "serde_string")] pub Rational);

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimplicesJson {
    maximal_simplices: Vec<Vec<String>>,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverJson {
    lower: String,
    upper: String,
    #[serde(default = "yes")]
    regular: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellsJson {
    cells: Vec<Cell>,
    covers: Vec<CoverJson>,
    #[serde(default = "yes")]
    regular: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionJson {
    values: BTreeMap<String, Q>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeJson {
    id: String,
    parent: Option<String>,
    value: Q,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeJson {
    nodes: Vec<NodeJson>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BarJson {
    id: String,
    birth: Q,
    death: Q,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BarcodeJson {
    bars: Vec<BarJson>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapJson {
    source: Value,
    target: Value,
    assignment: BTreeMap<String, String>,
}

fn typed<T: DeserializeOwned>(value: Value) -> InputResult<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let field = e.path().to_string();
        InputError::at(if field == "." { String::new() } else { field }, e.into_inner())
    })
}

fn document(text: &str) -> InputResult<Value> {
    serde_json::from_str(text).map_err(|e| InputError::at("", e))
}

pub fn complex_from_value(value: Value) -> InputResult<Complex> {
    if value.get("maximal_simplices").is_some() {
        let s: SimplicesJson = typed(value)?;
        Complex::from_maximal_simplices(&s.maximal_simplices).map_err(|e| InputError::at("maximal_simplices", e))
    } else {
        let c: CellsJson = typed(value)?;
        let covers: Vec<(String, String, bool)> = c.covers.into_iter().map(|c| (c.lower, c.upper, c.regular)).collect();
        Complex::new(c.cells, &covers, c.regular).map_err(|e| {
            let field = match e {
                Error::DuplicateCell(_) | Error::NotGraded(_) => "cells",
                _ => "covers",
            };
            InputError::at(field, e)
        })
    }
}

pub fn parse_complex(text: &str) -> InputResult<Complex> {
    complex_from_value(document(text)?)
}

/// A complex given by builtin name or by path to a JSON file.
pub fn load_complex(reference: &str) -> InputResult<Complex> {
    if let Ok(x) = corpus::builtin(reference) {
        return Ok(x);
    }
    let text = std::fs::read_to_string(reference).map_err(|e| {
        InputError::at(
            "",
            format!("`{reference}` is neither a builtin complex nor a readable file: {e}"),
        )
    })?;
    parse_complex(&text)
}

fn complex_ref(value: Value, base: &Path, field: &str) -> InputResult<Complex> {
    let nested = |e: InputError| InputError {
        field: if e.field.is_empty() {
            field.to_string()
        } else {
            format!("{field}.{}", e.field)
        },
        message: e.message,
    };
    match value {
        Value::String(name) => {
            if corpus::builtin(&name).is_ok() {
                return load_complex(&name).map_err(nested);
            }
            let path = base.join(&name);
            load_complex(&path.to_string_lossy()).map_err(nested)
        }
        other => complex_from_value(other).map_err(nested),
    }
}

pub fn parse_function(text: &str, x: &Complex) -> InputResult<DiscreteFunction> {
    let f: FunctionJson = typed(document(text)?)?;
    let map: BTreeMap<String, Rational> = f.values.into_iter().map(|(k, v)| (k, v.0)).collect();
    DiscreteFunction::from_map(x, &map).map_err(|e| {
        let field = match &e {
            Error::UnknownCell(id) => format!("values.{id}"),
            _ => "values".to_string(),
        };
        InputError::at(field, e)
    })
}

pub fn parse_tree(text: &str) -> InputResult<MergeTree> {
    let t: TreeJson = typed(document(text)?)?;
    let nodes: Vec<(String, Option<String>, Rational)> =
        t.nodes.into_iter().map(|n| (n.id, n.parent, n.value.0)).collect();
    MergeTree::from_nodes(&nodes).map_err(|e| InputError::at("nodes", e))
}

pub fn parse_barcode(text: &str) -> InputResult<Barcode> {
    let b: BarcodeJson = typed(document(text)?)?;
    Barcode::new(
        b.bars
            .into_iter()
            .map(|b| Bar {
                id: b.id,
                birth: b.birth.0,
                death: b.death.0,
            })
            .collect(),
    )
    .map_err(|e| InputError::at("bars", e))
}

/// Reads a cell map; string complex references are builtin names or paths
/// relative to `base`.
pub fn parse_map(text: &str, base: &Path) -> InputResult<CellMap> {
    let m: MapJson = typed(document(text)?)?;
    let source = complex_ref(m.source, base, "source")?;
    let target = complex_ref(m.target, base, "target")?;
    CellMap::from_map(source, target, &m.assignment).map_err(|e| InputError::at("assignment", e))
}

pub fn complex_to_json(x: &Complex) -> Value {
    let covers: Vec<CoverJson> = x
        .covers()
        .iter()
        .map(|c| CoverJson {
            lower: x.id(c.lower).to_string(),
            upper: x.id(c.upper).to_string(),
            regular: c.regular,
        })
        .collect();
    serde_json::to_value(CellsJson {
        cells: x.cells().to_vec(),
        covers,
        regular: x.is_regular(),
    })
    .expect("serializable")
}

pub fn function_to_json(x: &Complex, f: &DiscreteFunction) -> Value {
    let values: BTreeMap<String, String> = f.to_map(x).into_iter().map(|(k, v)| (k, format_rational(&v))).collect();
    json!({ "values": values })
}

pub fn tree_to_json(t: &MergeTree) -> Value {
    let nodes: Vec<Value> = t
        .nodes()
        .into_iter()
        .map(|(id, parent, value)| json!({"id": id, "parent": parent, "value": format_rational(&value)}))
        .collect();
    json!({ "nodes": nodes })
}

pub fn barcode_to_json(b: &Barcode) -> Value {
    let bars: Vec<Value> = b
        .bars()
        .iter()
        .map(|bar| json!({"id": bar.id, "birth": format_rational(&bar.birth), "death": format_rational(&bar.death)}))
        .collect();
    json!({ "bars": bars })
}

pub fn map_to_json(phi: &CellMap) -> Value {
    json!({
        "source": complex_to_json(phi.source()),
        "target": complex_to_json(phi.target()),
        "assignment": phi.assignment(),
    })
}

/// `{"terms": [...], "approx": x}` with the approximation rounded to twelve
/// decimal places.
pub fn distance_to_json(d: &Distance) -> Value {
    let terms: Vec<String> = d.terms().iter().map(format_rational).collect();
    let approx: f64 = format!("{:.12}", d.approx()).parse().expect("formatted float");
    json!({ "terms": terms, "approx": approx })
}
