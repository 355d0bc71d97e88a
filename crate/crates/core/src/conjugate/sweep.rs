//! Ball-by-ball construction of a conjugate part on a tree, and generators
//! of harmonic functions to feed it.

use std::collections::VecDeque;
use std::sync::Arc;

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde_json::{json, Value};

use super::sphere::{complete_gradient, projection_range, sphere_point, Completion, Picker};
use super::ConjugateError;
use crate::graph::{is_harmonic, Graph, RealVertexFunction, Tolerance};
use crate::tree::TreeBall;

/// The sweep could not extend `g` past `vertex`: the component `a1` fixed
/// by the parent lies outside the projection `[−α, α]` there.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepFailure {
    pub vertex: String,
    pub alpha: f64,
    pub a1: f64,
}

impl SweepFailure {
    pub fn to_json(&self) -> Value {
        json!({"vertex": self.vertex, "alpha": self.alpha, "a1": self.a1})
    }
}

#[derive(Debug, Clone)]
pub enum ConjugateOutcome {
    Found(RealVertexFunction),
    SweepFailed(SweepFailure),
}

impl ConjugateOutcome {
    pub fn found(&self) -> Option<&RealVertexFunction> {
        match self {
            Self::Found(g) => Some(g),
            Self::SweepFailed(_) => None,
        }
    }
}

/// Breadth-first order and parents from `root`.
fn bfs(graph: &Graph, root: usize) -> (Vec<usize>, Vec<Option<usize>>) {
    let mut parent = vec![None; graph.len()];
    let mut seen = vec![false; graph.len()];
    let mut order = Vec::with_capacity(graph.len());
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(s) = queue.pop_front() {
        order.push(s);
        for &t in graph.neighbors(s) {
            if !seen[t] {
                seen[t] = true;
                parent[t] = Some(s);
                queue.push_back(t);
            }
        }
    }
    (order, parent)
}

/// A centre of the tree, by repeatedly stripping leaves.
pub fn tree_centre(graph: &Graph) -> usize {
    let n = graph.len();
    let mut degree: Vec<usize> = (0..n).map(|v| graph.valency(v)).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &t in graph.neighbors(v) {
                degree[t] = degree[t].saturating_sub(1);
                if degree[t] == 1 {
                    next.push(t);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    layer.into_iter().min().unwrap_or(0)
}

/// Builds `g` outward from `root` with `g(root) = 0`. At each interior
/// vertex the component of `∇g` towards the parent is already fixed and
/// the rest is completed on the constraint sphere.
///
/// Under constant gradient norm the projection ranges at both ends of an
/// edge coincide, so the sweep cannot fail. Otherwise a failure only means
/// this sweep got stuck, except on valency-3 trees where the completion is
/// forced up to a global sign.
pub fn find_conjugate(f: &RealVertexFunction, root: Option<usize>, mode: Completion) -> Result<ConjugateOutcome, ConjugateError> {
    let graph = f.graph();
    if !graph.is_tree() {
        return Err(ConjugateError::NotATree);
    }
    let rep = is_harmonic(&f.to_complex(), Tolerance::default())?;
    if !rep.verdict {
        let v = rep.at_vertex.unwrap_or(0);
        return Err(ConjugateError::NotHarmonic {
            vertex: graph.id(v).to_string(),
            residual: rep.max_residual,
        });
    }
    let root = root.unwrap_or_else(|| tree_centre(graph));
    let (order, parent) = bfs(graph, root);
    let mut picker = Picker::new(mode);
    let mut g: Vec<Option<f64>> = vec![None; graph.len()];
    for &s in &order {
        let p = parent[s];
        if !f.is_interior(s) {
            if g[s].is_none() {
                g[s] = Some(p.and_then(|p| g[p]).unwrap_or(0.0));
            }
            continue;
        }
        let delta = f.gradient(s)?;
        let nb = graph.neighbors(s);
        let fixed = match (g[s], p) {
            (Some(gs), Some(p)) => {
                let k = nb.iter().position(|&t| t == p).expect("parent is a neighbour");
                Some((k, g[p].expect("parent visited first") - gs))
            }
            _ => None,
        };
        let a = match complete_gradient(&delta, fixed, &mut picker) {
            Ok(a) => a,
            Err(_) => {
                let (k, a1) = fixed.unwrap_or((0, 0.0));
                return Ok(ConjugateOutcome::SweepFailed(SweepFailure {
                    vertex: graph.id(s).to_string(),
                    alpha: projection_range(&delta, k).map(|p| p.alpha()).unwrap_or(0.0),
                    a1,
                }));
            }
        };
        let gs = match (g[s], p) {
            (Some(gs), _) => gs,
            (None, Some(p)) => {
                let k = nb.iter().position(|&t| t == p).expect("parent is a neighbour");
                g[p].unwrap_or(0.0) - a[k]
            }
            (None, None) => 0.0,
        };
        g[s] = Some(gs);
        for (k, &t) in nb.iter().enumerate() {
            if Some(t) != p {
                g[t] = Some(gs + a[k]);
            }
        }
    }
    let values = g.into_iter().map(|x| x.unwrap_or(0.0)).collect();
    let out = RealVertexFunction::new(Arc::clone(f.graph_arc()), values)?.with_boundary(f.boundary().to_vec())?;
    Ok(ConjugateOutcome::Found(out))
}

/// Checks the three conjugate conditions at every interior vertex and
/// returns the largest violation.
pub fn conjugate_residual(f: &RealVertexFunction, g: &RealVertexFunction) -> Result<f64, ConjugateError> {
    let mut worst = 0.0f64;
    for v in (0..f.graph().len()).filter(|&v| f.is_interior(v)) {
        let df = f.gradient(v)?;
        let dg = g.gradient(v)?;
        let nf: f64 = df.iter().map(|x| x * x).sum();
        let ng: f64 = dg.iter().map(|x| x * x).sum();
        let dot: f64 = df.iter().zip(&dg).map(|(a, b)| a * b).sum();
        let sum: f64 = dg.iter().sum();
        worst = worst.max((nf - ng).abs()).max(dot.abs()).max(sum.abs());
    }
    Ok(worst)
}

fn unit(n: usize, k: usize) -> DVector<f64> {
    DVector::from_fn(n, |r, _| (r == k) as u8 as f64)
}

/// Harmonic function with `‖∇_s f‖ = norm` at every interior vertex, grown
/// from `root` with `f(root) = 0`.
pub fn constant_norm_harmonic(
    graph: &Arc<Graph>,
    boundary: &[bool],
    root: usize,
    norm: f64,
    mode: Completion,
) -> Result<RealVertexFunction, ConjugateError> {
    let mut picker = Picker::new(mode);
    grow(graph, boundary, root, |n, fixed| {
        let mut cons = vec![(DVector::from_element(n, 1.0), 0.0)];
        if let Some((k, x)) = fixed {
            cons.push((unit(n, k), x));
        }
        sphere_point(n, &cons, norm, &mut picker)
            .map(|a| a.iter().copied().collect())
            .map_err(|e| ConjugateError::Numerical(format!("{e:?}")))
    })
}

/// Harmonic function with independent Gaussian oscillations, recentred to
/// sum to zero at each interior vertex.
pub fn random_harmonic(graph: &Arc<Graph>, boundary: &[bool], root: usize, seed: u64) -> Result<RealVertexFunction, ConjugateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    grow(graph, boundary, root, |n, fixed| {
        let mut a: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let free = n - fixed.is_some() as usize;
        if let Some((k, x)) = fixed {
            a[k] = x;
        }
        let shift = a.iter().sum::<f64>() / free as f64;
        for (i, x) in a.iter_mut().enumerate() {
            if fixed.map_or(true, |(k, _)| k != i) {
                *x -= shift;
            }
        }
        Ok(a)
    })
}

/// Assigns values outward from `root`; `step(n, fixed)` returns the full
/// oscillation vector at an interior vertex of valency `n` given the one
/// towards its parent.
pub(crate) fn grow(
    graph: &Arc<Graph>,
    boundary: &[bool],
    root: usize,
    mut step: impl FnMut(usize, Option<(usize, f64)>) -> Result<Vec<f64>, ConjugateError>,
) -> Result<RealVertexFunction, ConjugateError> {
    let (order, parent) = bfs(graph, root);
    let mut f: Vec<Option<f64>> = vec![None; graph.len()];
    f[root] = Some(0.0);
    for &s in &order {
        let p = parent[s];
        let fs = f[s].unwrap_or_else(|| p.and_then(|p| f[p]).unwrap_or(0.0));
        f[s] = Some(fs);
        if boundary[s] {
            continue;
        }
        let nb = graph.neighbors(s);
        let fixed = p.map(|p| {
            let k = nb.iter().position(|&t| t == p).expect("parent is a neighbour");
            (k, f[p].expect("parent visited first") - fs)
        });
        let a = step(nb.len(), fixed)?;
        for (k, &t) in nb.iter().enumerate() {
            if Some(t) != p {
                f[t] = Some(fs + a[k]);
            }
        }
    }
    let values = f.into_iter().map(|x| x.unwrap_or(0.0)).collect();
    Ok(RealVertexFunction::new(Arc::clone(graph), values)?.with_boundary(boundary.to_vec())?)
}

/// Like [`constant_norm_harmonic`] on a vertex-centred tree ball.
pub fn constant_norm_on_ball(ball: &TreeBall, norm: f64, mode: Completion) -> Result<RealVertexFunction, ConjugateError> {
    let root = ball.centre().ok_or(ConjugateError::Precondition("ball is not vertex centred".into()))?;
    constant_norm_harmonic(ball.graph(), &ball.boundary_mask(), root, norm, mode)
}

/// A harmonic function on the valency-4 ball centred at `A` with no
/// conjugate part. `B, C, D, E` are the neighbours of `A`; `f` vanishes on
/// `A` and on the subtrees through `B` and `C`, and `f(D) = 1`,
/// `f(E) = −1`. Below `D` and `E` it is extended with gradient norm `√2`
/// using deterministic completions. Returns the function and the indices of
/// `A, B, C, D, E`.
pub fn no_conjugate_fixture(radius: usize) -> Result<(RealVertexFunction, [usize; 5]), ConjugateError> {
    if radius < 2 {
        return Err(ConjugateError::Precondition("fixture needs radius at least 2".into()));
    }
    let ball = TreeBall::vertex_centred(4, radius);
    let a = ball.centre().expect("vertex centred");
    let ch = ball.children(a);
    let [b, c, d, e] = [ch[0], ch[1], ch[2], ch[3]];
    let boundary = ball.boundary_mask();
    let graph = ball.graph();
    let norm = 2f64.sqrt();
    let mut picker = Picker::new(Completion::Deterministic);
    let mut values = vec![0.0; graph.len()];
    values[d] = 1.0;
    values[e] = -1.0;
    // vertices in storage order are depth sorted, so parents come first
    for v in 0..ball.len() {
        if boundary[v] || [a, b, c].contains(&v) {
            continue;
        }
        let p = ball.pred(v).expect("non-centre vertex");
        let mut top = v;
        while let Some(q) = ball.pred(top).filter(|&q| q != a) {
            top = q;
        }
        if top == b || top == c {
            continue;
        }
        let nb = graph.neighbors(v);
        let k = nb.iter().position(|&t| t == p).expect("parent is a neighbour");
        let n = nb.len();
        let cons = [(DVector::from_element(n, 1.0), 0.0), (unit(n, k), values[p] - values[v])];
        let osc = sphere_point(n, &cons, norm, &mut picker).map_err(|e| ConjugateError::Numerical(format!("{e:?}")))?;
        for (i, &t) in nb.iter().enumerate() {
            if t != p {
                values[t] = values[v] + osc[i];
            }
        }
    }
    let f = RealVertexFunction::new(Arc::clone(graph), values)?.with_boundary(boundary)?;
    Ok((f, [a, b, c, d, e]))
}
