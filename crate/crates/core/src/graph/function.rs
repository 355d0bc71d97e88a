use std::sync::Arc;

use num_complex::Complex64;

use super::{Graph, GraphError};

/// Residual acceptance `|r| <= eps_abs + eps_rel * scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eps_abs: f64,
    pub eps_rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eps_abs: 1e-9,
            eps_rel: 1e-9,
        }
    }
}

impl Tolerance {
    /// Panics unless both parts are strictly positive.
    pub fn new(eps_abs: f64, eps_rel: f64) -> Self {
        assert!(
            eps_abs > 0.0 && eps_rel > 0.0,
            "tolerances must be strictly positive"
        );
        Self { eps_abs, eps_rel }
    }

    pub fn uniform(eps: f64) -> Self {
        Self::new(eps, eps)
    }

    pub fn bound(&self, scale: f64) -> f64 {
        self.eps_abs + self.eps_rel * scale
    }

    pub fn accepts(&self, residual: f64, scale: f64) -> bool {
        residual <= self.bound(scale)
    }
}

/// Oscillations `z_i - z_0` of a function at one vertex, in stored
/// neighbour order. The order is arbitrary.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillationVector {
    pub base: usize,
    pub entries: Vec<Complex64>,
}

impl OscillationVector {
    pub fn norm(&self) -> f64 {
        self.entries.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn power_sum(&self, p: u32) -> Complex64 {
        self.entries.iter().map(|d| d.powu(p)).sum()
    }

    pub fn max_modulus(&self) -> f64 {
        self.entries.iter().map(|d| d.norm()).fold(0.0, f64::max)
    }
}

/// Complex values on (part of) a finite graph.
///
/// A vertex is interior when it carries a value, is not flagged as
/// boundary, and all of its neighbours carry values. Checkers only look at
/// interior vertices; the rest are reported as unchecked.
#[derive(Debug, Clone)]
pub struct VertexFunction {
    graph: Arc<Graph>,
    values: Vec<Option<Complex64>>,
    boundary: Vec<bool>,
}

impl VertexFunction {
    pub fn new(graph: Arc<Graph>, values: Vec<Option<Complex64>>) -> Result<Self, GraphError> {
        if values.len() != graph.len() {
            return Err(GraphError::LengthMismatch {
                expected: graph.len(),
                got: values.len(),
            });
        }
        let boundary = vec![false; graph.len()];
        Ok(Self {
            graph,
            values,
            boundary,
        })
    }

    pub fn total(graph: Arc<Graph>, values: Vec<Complex64>) -> Result<Self, GraphError> {
        Self::new(graph, values.into_iter().map(Some).collect())
    }

    pub fn from_fn(graph: Arc<Graph>, f: impl Fn(usize) -> Complex64) -> Self {
        let values = (0..graph.len()).map(|v| Some(f(v))).collect();
        let boundary = vec![false; graph.len()];
        Self {
            graph,
            values,
            boundary,
        }
    }

    pub fn with_boundary(mut self, boundary: Vec<bool>) -> Result<Self, GraphError> {
        if boundary.len() != self.graph.len() {
            return Err(GraphError::LengthMismatch {
                expected: self.graph.len(),
                got: boundary.len(),
            });
        }
        self.boundary = boundary;
        Ok(self)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn value(&self, v: usize) -> Option<Complex64> {
        self.values[v]
    }

    pub fn values(&self) -> &[Option<Complex64>] {
        &self.values
    }

    pub fn boundary(&self) -> &[bool] {
        &self.boundary
    }

    pub fn is_interior(&self, v: usize) -> bool {
        !self.boundary[v]
            && self.values[v].is_some()
            && self.graph.neighbors(v).iter().all(|&u| self.values[u].is_some())
    }

    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.graph.len()).filter(|&v| self.is_interior(v))
    }

    fn interior_value(&self, v: usize) -> Result<Complex64, GraphError> {
        if !self.is_interior(v) {
            return Err(GraphError::NotInterior(self.graph.id(v).to_string()));
        }
        Ok(self.values[v].unwrap_or_default())
    }

    /// Mean of the neighbour values minus the value at `v`.
    pub fn laplacian(&self, v: usize) -> Result<Complex64, GraphError> {
        let z0 = self.interior_value(v)?;
        let ns = self.graph.neighbors(v);
        let sum: Complex64 = ns.iter().map(|&u| self.values[u].unwrap_or_default()).sum();
        Ok(sum / ns.len() as f64 - z0)
    }

    pub fn oscillation(&self, v: usize) -> Result<OscillationVector, GraphError> {
        let z0 = self.interior_value(v)?;
        let entries = self
            .graph
            .neighbors(v)
            .iter()
            .map(|&u| self.values[u].unwrap_or_default() - z0)
            .collect();
        Ok(OscillationVector { base: v, entries })
    }

    /// Largest modulus over `v` and its neighbours.
    pub fn local_scale(&self, v: usize) -> f64 {
        std::iter::once(v)
            .chain(self.graph.neighbors(v).iter().copied())
            .filter_map(|u| self.values[u])
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Pointwise image, keeping graph and boundary.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            graph: Arc::clone(&self.graph),
            values: self.values.iter().map(|z| z.map(&f)).collect(),
            boundary: self.boundary.clone(),
        }
    }

    /// Pointwise product of two functions on the same graph.
    pub fn product(&self, other: &Self) -> Self {
        assert!(Arc::ptr_eq(&self.graph, &other.graph) || *self.graph == *other.graph);
        Self {
            graph: Arc::clone(&self.graph),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| Some((*a)? * (*b)?))
                .collect(),
            boundary: self
                .boundary
                .iter()
                .zip(&other.boundary)
                .map(|(a, b)| *a || *b)
                .collect(),
        }
    }

    pub fn powu(&self, p: u32) -> Self {
        self.map(|z| z.powu(p))
    }

    /// Real and imaginary parts.
    pub fn split(&self) -> (RealVertexFunction, RealVertexFunction) {
        let re = self.values.iter().map(|z| z.map(|z| z.re)).collect();
        let im = self.values.iter().map(|z| z.map(|z| z.im)).collect();
        (
            RealVertexFunction {
                graph: Arc::clone(&self.graph),
                values: re,
                boundary: self.boundary.clone(),
            },
            RealVertexFunction {
                graph: Arc::clone(&self.graph),
                values: im,
                boundary: self.boundary.clone(),
            },
        )
    }

    /// Sup-norm distance over vertices where both carry values.
    pub fn distance(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .filter_map(|(a, b)| Some((a.as_ref()? - b.as_ref()?).norm()))
            .fold(0.0, f64::max)
    }
}

/// Real values on a finite graph; the input of the conjugate-part problem.
#[derive(Debug, Clone)]
pub struct RealVertexFunction {
    graph: Arc<Graph>,
    values: Vec<Option<f64>>,
    boundary: Vec<bool>,
}

impl RealVertexFunction {
    pub fn new(graph: Arc<Graph>, values: Vec<f64>) -> Result<Self, GraphError> {
        if values.len() != graph.len() {
            return Err(GraphError::LengthMismatch {
                expected: graph.len(),
                got: values.len(),
            });
        }
        let boundary = vec![false; graph.len()];
        Ok(Self {
            graph,
            values: values.into_iter().map(Some).collect(),
            boundary,
        })
    }

    pub fn partial(graph: Arc<Graph>, values: Vec<Option<f64>>) -> Result<Self, GraphError> {
        if values.len() != graph.len() {
            return Err(GraphError::LengthMismatch {
                expected: graph.len(),
                got: values.len(),
            });
        }
        let boundary = vec![false; graph.len()];
        Ok(Self {
            graph,
            values,
            boundary,
        })
    }

    pub fn with_boundary(mut self, boundary: Vec<bool>) -> Result<Self, GraphError> {
        if boundary.len() != self.graph.len() {
            return Err(GraphError::LengthMismatch {
                expected: self.graph.len(),
                got: boundary.len(),
            });
        }
        self.boundary = boundary;
        Ok(self)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn value(&self, v: usize) -> Option<f64> {
        self.values[v]
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn boundary(&self) -> &[bool] {
        &self.boundary
    }

    pub fn to_complex(&self) -> VertexFunction {
        VertexFunction {
            graph: Arc::clone(&self.graph),
            values: self
                .values
                .iter()
                .map(|x| x.map(|x| Complex64::new(x, 0.0)))
                .collect(),
            boundary: self.boundary.clone(),
        }
    }

    /// `self + i * imag` as a complex function.
    pub fn with_imaginary(&self, imag: &RealVertexFunction) -> VertexFunction {
        VertexFunction {
            graph: Arc::clone(&self.graph),
            values: self
                .values
                .iter()
                .zip(&imag.values)
                .map(|(a, b)| Some(Complex64::new((*a)?, (*b)?)))
                .collect(),
            boundary: self.boundary.clone(),
        }
    }

    pub fn is_interior(&self, v: usize) -> bool {
        !self.boundary[v]
            && self.values[v].is_some()
            && self.graph.neighbors(v).iter().all(|&u| self.values[u].is_some())
    }

    /// Real oscillation vector `f(s_i) - f(s)` at an interior vertex.
    pub fn gradient(&self, v: usize) -> Result<Vec<f64>, GraphError> {
        if !self.is_interior(v) {
            return Err(GraphError::NotInterior(self.graph.id(v).to_string()));
        }
        let x0 = self.values[v].unwrap_or_default();
        Ok(self
            .graph
            .neighbors(v)
            .iter()
            .map(|&u| self.values[u].unwrap_or_default() - x0)
            .collect())
    }

    pub fn sup_distance(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .filter_map(|(a, b)| Some((a.as_ref()? - b.as_ref()?).abs()))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Arc<Graph> {
        Arc::new(
            Graph::new(
                vec!["0".into(), "1".into(), "2".into()],
                &[(0, 1), (1, 2)],
            )
            .unwrap(),
        )
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn affine_on_a_line_is_harmonic() {
        let f = VertexFunction::from_fn(path3(), |v| c(v as f64, 0.0));
        assert_eq!(f.laplacian(1).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn oscillation_by_subtraction() {
        let f = VertexFunction::total(path3(), vec![c(0.0, 0.0), c(1.0, 0.0), c(4.0, 0.0)]).unwrap();
        assert_eq!(f.oscillation(1).unwrap().entries, vec![c(-1.0, 0.0), c(3.0, 0.0)]);
        let k = VertexFunction::from_fn(path3(), |_| c(2.0, -1.0));
        assert!(k.oscillation(1).unwrap().entries.iter().all(|d| *d == c(0.0, 0.0)));
    }

    #[test]
    fn leaves_of_a_path_are_interior_unless_flagged() {
        let f = VertexFunction::from_fn(path3(), |v| c(v as f64, 0.0));
        assert_eq!(f.interior().count(), 3);
        let f = f.with_boundary(vec![true, false, true]).unwrap();
        assert_eq!(f.interior().collect::<Vec<_>>(), vec![1]);
        assert_eq!(f.laplacian(0), Err(GraphError::NotInterior("0".into())));
    }

    #[test]
    fn missing_values_shrink_the_interior() {
        let f = VertexFunction::new(path3(), vec![Some(c(0.0, 0.0)), Some(c(1.0, 0.0)), None]).unwrap();
        assert_eq!(f.interior().collect::<Vec<_>>(), vec![0]);
        assert!(f.oscillation(1).is_err());
    }

    #[test]
    #[should_panic]
    fn tolerance_must_be_positive() {
        Tolerance::new(0.0, 1e-9);
    }
}
