//! JSON exchange format for graphs with vertex values:
//!
//! ```json
//! {"vertices": ["a", "b"], "edges": [["a", "b"]],
//!  "values": {"a": [0.0, 0.0], "b": 1.5},
//!  "boundary": ["b"]}
//! ```
//!
//! Values are `[re, im]` pairs or bare reals. `boundary` is optional and
//! lists vertices exempt from the checkers. Output is deterministic: keys
//! sorted, floats rounded to 12 significant digits.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Graph, GraphError, RealVertexFunction, VertexFunction};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueRepr {
    Real(f64),
    Complex([f64; 2]),
}

impl ValueRepr {
    pub fn to_complex(&self) -> Complex64 {
        match *self {
            Self::Real(x) => Complex64::new(x, 0.0),
            Self::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(default)]
    pub values: BTreeMap<String, ValueRepr>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary: Vec<String>,
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))
    }

    pub fn graph(&self) -> Result<Graph, GraphError> {
        let edges: Vec<(&str, &str)> = self
            .edges
            .iter()
            .map(|[a, b]| (a.as_str(), b.as_str()))
            .collect();
        Graph::from_named_edges(self.vertices.clone(), &edges)
    }

    fn boundary_mask(&self, g: &Graph) -> Result<Vec<bool>, GraphError> {
        let mut mask = vec![false; g.len()];
        for id in &self.boundary {
            let v = g
                .index_of(id)
                .ok_or_else(|| GraphError::UnknownVertex(id.clone()))?;
            mask[v] = true;
        }
        Ok(mask)
    }

    fn check_value_ids(&self, g: &Graph) -> Result<(), GraphError> {
        match self.values.keys().find(|id| g.index_of(id).is_none()) {
            Some(id) => Err(GraphError::UnknownVertex(id.clone())),
            None => Ok(()),
        }
    }

    pub fn into_function(self) -> Result<VertexFunction, GraphError> {
        let g = Arc::new(self.graph()?);
        self.check_value_ids(&g)?;
        let values = g
            .ids()
            .iter()
            .map(|id| self.values.get(id).map(ValueRepr::to_complex))
            .collect();
        let mask = self.boundary_mask(&g)?;
        VertexFunction::new(g, values)?.with_boundary(mask)
    }

    /// Rejects values with a nonzero imaginary part.
    pub fn into_real_function(self) -> Result<RealVertexFunction, GraphError> {
        let g = Arc::new(self.graph()?);
        self.check_value_ids(&g)?;
        let mut values = Vec::with_capacity(g.len());
        for id in g.ids() {
            values.push(match self.values.get(id) {
                None => None,
                Some(ValueRepr::Real(x)) => Some(*x),
                Some(ValueRepr::Complex([re, im])) if *im == 0.0 => Some(*re),
                Some(ValueRepr::Complex(_)) => {
                    return Err(GraphError::Parse(format!(
                        "vertex {id:?} carries a complex value where a real one is required"
                    )))
                }
            });
        }
        let mask = self.boundary_mask(&g)?;
        RealVertexFunction::partial(g, values)?.with_boundary(mask)
    }
}

pub fn parse_function(text: &str) -> Result<VertexFunction, GraphError> {
    GraphFile::parse(text)?.into_function()
}

pub fn parse_real_function(text: &str) -> Result<RealVertexFunction, GraphError> {
    GraphFile::parse(text)?.into_real_function()
}

/// Rounds to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

pub fn complex_json(z: Complex64) -> Value {
    json!([round_sig(z.re, 12), round_sig(z.im, 12)])
}

fn skeleton(g: &Graph, boundary: &[bool]) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("vertices".into(), json!(g.ids()));
    let edges: Vec<[&str; 2]> = g.edges().map(|(u, v)| [g.id(u), g.id(v)]).collect();
    m.insert("edges".into(), json!(edges));
    let b: Vec<&str> = (0..g.len())
        .filter(|&v| boundary[v])
        .map(|v| g.id(v))
        .collect();
    if !b.is_empty() {
        m.insert("boundary".into(), json!(b));
    }
    m
}

pub fn function_to_json(f: &VertexFunction) -> Value {
    let g = f.graph();
    let mut m = skeleton(g, f.boundary());
    let values: serde_json::Map<String, Value> = (0..g.len())
        .filter_map(|v| Some((g.id(v).to_string(), complex_json(f.value(v)?))))
        .collect();
    m.insert("values".into(), Value::Object(values));
    Value::Object(m)
}

pub fn real_function_to_json(f: &RealVertexFunction) -> Value {
    let g = f.graph();
    let mut m = skeleton(g, f.boundary());
    let values: serde_json::Map<String, Value> = (0..g.len())
        .filter_map(|v| Some((g.id(v).to_string(), json!(round_sig(f.value(v)?, 12)))))
        .collect();
    m.insert("values".into(), Value::Object(values));
    Value::Object(m)
}
