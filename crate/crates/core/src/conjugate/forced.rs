//! Proving that no conjugate part exists by bounding edge increments.
//!
//! If `g` is a conjugate of `f` then on every edge `st` the increment
//! `g(t) − g(s)` lies in the projection interval of the constraint sphere at
//! `s`, and likewise at `t`. These bounds are tightened to a fixpoint: at a
//! vertex, once as many coordinates as the dimension of the linear slice
//! are bounded, every other coordinate is a linear function of them. A
//! vertex where even the largest point of the bounded slice is shorter than
//! `‖∇_s f‖` cannot carry `∇_s g`.

use nalgebra::{DMatrix, DVector};
use serde_json::{json, Value};

use super::sphere::{orthonormalize, projection_range};
use crate::graph::RealVertexFunction;

const MAX_ROUNDS: usize = 200;
const MAX_FREE: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct ForcedCertificate {
    pub vertex: String,
    /// `‖∇_s f‖`, the length `∇_s g` must have.
    pub norm: f64,
    /// Upper bound on `‖∇_s g‖` over all increments within the bounds.
    pub reachable: f64,
}

impl ForcedCertificate {
    pub fn to_json(&self) -> Value {
        json!({"vertex": self.vertex, "norm": self.norm, "reachable": self.reachable})
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ForcedOutcome {
    /// No conjugate part exists; each entry is a vertex where the bounds
    /// contradict the norm condition.
    Infeasible(Vec<ForcedCertificate>),
    Inconclusive,
}

struct Local {
    vertex: usize,
    norm: f64,
    /// Incident edge ids, in neighbour order.
    edges: Vec<usize>,
    /// Orthonormal basis of `{a : Σa = 0, ⟨a, δ⟩ = 0}` as columns.
    basis: DMatrix<f64>,
}

/// Bounds increments on every edge, tightens them to a fixpoint and
/// reports the vertices where no admissible `∇_s g` remains.
pub fn forced_propagation_infeasibility(f: &RealVertexFunction) -> ForcedOutcome {
    let graph = f.graph();
    let mut edge_id = std::collections::HashMap::new();
    for (i, (u, v)) in graph.edges().enumerate() {
        edge_id.insert((u.min(v), u.max(v)), i);
    }
    let mut bound = vec![f64::INFINITY; edge_id.len()];
    let mut locals = Vec::new();
    for s in (0..graph.len()).filter(|&s| f.is_interior(s)) {
        let Ok(delta) = f.gradient(s) else { continue };
        let n = delta.len();
        let norm = delta.iter().map(|x| x * x).sum::<f64>().sqrt();
        let edges: Vec<usize> = graph.neighbors(s).iter().map(|&t| edge_id[&(s.min(t), s.max(t))]).collect();
        for (k, &e) in edges.iter().enumerate() {
            if let Ok(p) = projection_range(&delta, k) {
                bound[e] = bound[e].min(p.alpha());
            }
        }
        let cons = orthonormalize([DVector::from_element(n, 1.0), DVector::from_column_slice(&delta)], &[], 1e-12);
        let cols = orthonormalize((0..n).map(|i| DVector::from_fn(n, |r, _| (r == i) as u8 as f64)), &cons, 1e-8);
        let basis = DMatrix::from_columns(&cols);
        locals.push(Local { vertex: s, norm, edges, basis });
    }

    for _ in 0..MAX_ROUNDS {
        let mut changed = false;
        for loc in &locals {
            let Some((pivot, lin)) = slice_map(loc, &bound) else { continue };
            for (k, &e) in loc.edges.iter().enumerate() {
                if pivot.contains(&k) {
                    continue;
                }
                let b: f64 = pivot.iter().enumerate().map(|(j, &pk)| lin[(k, j)].abs() * bound[loc.edges[pk]]).sum();
                if b < bound[e] * (1.0 - 1e-12) {
                    bound[e] = b;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let mut certs = Vec::new();
    for loc in &locals {
        let Some((pivot, lin)) = slice_map(loc, &bound) else { continue };
        if pivot.len() > MAX_FREE {
            continue;
        }
        let mut reach = 0.0f64;
        for corner in 0..1u64 << pivot.len() {
            let t = DVector::from_fn(pivot.len(), |j, _| {
                let b = bound[loc.edges[pivot[j]]];
                if corner >> j & 1 == 1 { b } else { -b }
            });
            reach = reach.max((&lin * t).norm());
        }
        if reach < loc.norm * (1.0 - 1e-9) - 1e-12 {
            certs.push(ForcedCertificate {
                vertex: graph.id(loc.vertex).to_string(),
                norm: loc.norm,
                reachable: reach,
            });
        }
    }
    if certs.is_empty() {
        ForcedOutcome::Inconclusive
    } else {
        ForcedOutcome::Infeasible(certs)
    }
}

/// Picks coordinates with the smallest finite bounds that determine a point
/// of the slice, and returns them with the map from their values to the
/// full vector.
fn slice_map(loc: &Local, bound: &[f64]) -> Option<(Vec<usize>, DMatrix<f64>)> {
    let m = loc.basis.ncols();
    if m == 0 {
        return Some((Vec::new(), DMatrix::zeros(loc.edges.len(), 0)));
    }
    let mut order: Vec<usize> = (0..loc.edges.len()).filter(|&k| bound[loc.edges[k]].is_finite()).collect();
    order.sort_by(|&a, &b| bound[loc.edges[a]].total_cmp(&bound[loc.edges[b]]));
    let mut pivot = Vec::with_capacity(m);
    let mut rows: Vec<DVector<f64>> = Vec::new();
    for k in order {
        if let Some(q) = orthonormalize([loc.basis.row(k).transpose()], &rows, 1e-6).pop() {
            rows.push(q);
            pivot.push(k);
            if pivot.len() == m {
                break;
            }
        }
    }
    if pivot.len() < m {
        return None;
    }
    let sub = DMatrix::from_fn(m, m, |i, j| loc.basis[(pivot[i], j)]);
    let inv = sub.try_inverse()?;
    Some((pivot, &loc.basis * inv))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::conjugate::{constant_norm_on_ball, find_conjugate, no_conjugate_fixture, random_harmonic, Completion};
    use crate::tree::TreeBall;

    #[test]
    fn fixture_is_certified_at_its_centre() {
        for radius in 2..5 {
            let (f, [a, ..]) = no_conjugate_fixture(radius).unwrap();
            match forced_propagation_infeasibility(&f) {
                ForcedOutcome::Infeasible(c) => {
                    assert_eq!(c.len(), 1);
                    assert_eq!(c[0].vertex, f.graph().id(a));
                    assert!((c[0].norm - 2f64.sqrt()).abs() < 1e-12);
                    assert!(c[0].reachable < 1e-12);
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn small_harmonic_perturbations_stay_certified() {
        let (f, [a, ..]) = no_conjugate_fixture(3).unwrap();
        let graph = Arc::clone(f.graph_arc());
        for seed in 0..20 {
            let h = random_harmonic(&graph, f.boundary(), a, seed).unwrap();
            let sup = h.values().iter().map(|x| x.unwrap().abs()).fold(0.0, f64::max);
            let values = (0..graph.len()).map(|v| f.value(v).unwrap() + 1e-3 * h.value(v).unwrap() / sup).collect();
            let p = RealVertexFunction::new(Arc::clone(&graph), values).unwrap().with_boundary(f.boundary().to_vec()).unwrap();
            assert!(matches!(forced_propagation_infeasibility(&p), ForcedOutcome::Infeasible(_)), "seed {seed}");
        }
    }

    #[test]
    fn never_certifies_functions_with_conjugates() {
        let ball = TreeBall::vertex_centred(4, 3);
        for seed in 0..20 {
            let f = constant_norm_on_ball(&ball, 1.0, Completion::Seeded(seed)).unwrap();
            assert!(find_conjugate(&f, None, Completion::Deterministic).unwrap().found().is_some());
            assert_eq!(forced_propagation_infeasibility(&f), ForcedOutcome::Inconclusive);
        }
        let c = RealVertexFunction::new(Arc::clone(ball.graph()), vec![1.5; ball.len()])
            .unwrap()
            .with_boundary(ball.boundary_mask())
            .unwrap();
        assert_eq!(forced_propagation_infeasibility(&c), ForcedOutcome::Inconclusive);
    }
}
