//! Decision procedure for holomorphic functions on graphs of valency ≤ 3.
//!
//! At an interior vertex of valency 3 the three oscillations are
//! `e, je, j²e` in some order. Pinning one edge to `(0, 1)` (every
//! nonconstant function is similar to one with that normalisation) makes
//! all values Eisenstein integers, so consistency around cycles is checked
//! exactly. The only freedom is a binary switch at each vertex, explored by
//! backtracking with forced-move propagation.

use std::collections::VecDeque;
use std::sync::Arc;

use num_complex::Complex64;

use super::{Graph, GraphError, VertexFunction};
use crate::eisenstein::Eisenstein;

pub const DEFAULT_CYCLE_RANK_CAP: usize = 64;

#[derive(Debug, Clone)]
pub struct TrivalentOptions {
    pub cycle_rank_cap: usize,
    /// Extra vertices exempt from the holomorphy constraint. Vertices of
    /// valency below 3 are always exempt.
    pub boundary: Option<Vec<bool>>,
}

impl Default for TrivalentOptions {
    fn default() -> Self {
        Self {
            cycle_rank_cap: DEFAULT_CYCLE_RANK_CAP,
            boundary: None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Feasibility {
    /// Every switch pattern was refuted: only constants are holomorphic.
    ConstantOnly { explored: usize },
    /// A nonconstant holomorphic function with the pinned edge at `(0, 1)`.
    Witness {
        function: VertexFunction,
        exact: Vec<Eisenstein>,
        pinned: (usize, usize),
        explored: usize,
    },
}

impl Feasibility {
    pub fn is_constant_only(&self) -> bool {
        matches!(self, Self::ConstantOnly { .. })
    }
}

pub fn trivalent_feasibility(
    graph: &Arc<Graph>,
    opts: &TrivalentOptions,
) -> Result<Feasibility, GraphError> {
    let g = graph.as_ref();
    for v in 0..g.len() {
        if g.valency(v) > 3 {
            return Err(GraphError::UnsupportedValency {
                vertex: g.id(v).to_string(),
                valency: g.valency(v),
            });
        }
    }
    if g.cycle_rank() > opts.cycle_rank_cap {
        return Err(GraphError::TooLarge {
            rank: g.cycle_rank(),
            cap: opts.cycle_rank_cap,
        });
    }
    let interior: Vec<bool> = (0..g.len())
        .map(|v| {
            g.valency(v) == 3
                && !opts
                    .boundary
                    .as_ref()
                    .map_or(false, |b| b.get(v).copied().unwrap_or(false))
        })
        .collect();
    let boundary: Vec<bool> = interior.iter().map(|i| !i).collect();

    // A boundary vertex with no interior neighbour is unconstrained, so a
    // bump there is already a nonconstant holomorphic function.
    if let Some(free) = (0..g.len()).find(|&v| !interior[v] && !g.neighbors(v).iter().any(|&u| interior[u])) {
        let exact: Vec<Eisenstein> = (0..g.len())
            .map(|v| if v == free { Eisenstein::ONE } else { Eisenstein::ZERO })
            .collect();
        let function = to_function(graph, &exact, boundary)?;
        let other = g.neighbors(free).first().copied().unwrap_or(free);
        return Ok(Feasibility::Witness {
            function,
            exact,
            pinned: (other, free),
            explored: 0,
        });
    }
    ensure_interior_connected(g, &interior)?;

    let Some(p) = interior.iter().position(|&i| i) else {
        unreachable!("every vertex has an interior neighbour");
    };
    let q = g.neighbors(p)[0];
    let dist: Vec<usize> = g
        .distances_from(p)
        .into_iter()
        .map(|d| d.unwrap_or(usize::MAX))
        .collect();

    let mut values = vec![None; g.len()];
    values[p] = Some(Eisenstein::ZERO);
    values[q] = Some(Eisenstein::ONE);
    let search = Search {
        g,
        interior: &interior,
        dist: &dist,
    };
    let mut explored = 0;
    match search.solve(values, &mut explored) {
        Some(exact) => {
            let function = to_function(graph, &exact, boundary)?;
            Ok(Feasibility::Witness {
                function,
                exact,
                pinned: (p, q),
                explored,
            })
        }
        None => Ok(Feasibility::ConstantOnly { explored }),
    }
}

fn to_function(
    graph: &Arc<Graph>,
    exact: &[Eisenstein],
    boundary: Vec<bool>,
) -> Result<VertexFunction, GraphError> {
    VertexFunction::total(
        Arc::clone(graph),
        exact.iter().map(|z| z.to_complex()).collect::<Vec<Complex64>>(),
    )?
    .with_boundary(boundary)
}

fn ensure_interior_connected(g: &Graph, interior: &[bool]) -> Result<(), GraphError> {
    let Some(start) = interior.iter().position(|&i| i) else {
        return Ok(());
    };
    let mut seen = vec![false; g.len()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if interior[v] && !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    match (0..g.len()).find(|&v| interior[v] && !seen[v]) {
        Some(v) => Err(GraphError::Parse(format!(
            "interior vertices must form a connected subgraph; {:?} is separated from {:?} by boundary vertices",
            g.id(v),
            g.id(start)
        ))),
        None => Ok(()),
    }
}

struct Search<'a> {
    g: &'a Graph,
    interior: &'a [bool],
    dist: &'a [usize],
}

type Values = Vec<Option<Eisenstein>>;

enum Step {
    Changed,
    Stable,
}

impl Search<'_> {
    fn solve(&self, mut values: Values, explored: &mut usize) -> Option<Vec<Eisenstein>> {
        *explored += 1;
        loop {
            match self.propagate(&mut values)? {
                Step::Changed => continue,
                Step::Stable => break,
            }
        }
        let branch = (0..self.g.len())
            .filter(|&v| self.interior[v] && values[v].is_some())
            .filter(|&v| self.g.neighbors(v).iter().any(|&u| values[u].is_none()))
            .min_by_key(|&v| (self.dist[v], v));
        let Some(v) = branch else {
            return values.into_iter().collect();
        };
        let z = values[v]?;
        let ns = self.g.neighbors(v);
        let known = ns.iter().copied().find(|&u| values[u].is_some())?;
        let e = values[known]? - z;
        let free: Vec<usize> = ns.iter().copied().filter(|&u| values[u].is_none()).collect();
        debug_assert_eq!(free.len(), 2);
        for (a, b) in [(Eisenstein::J, Eisenstein::J2), (Eisenstein::J2, Eisenstein::J)] {
            let mut next = values.clone();
            next[free[0]] = Some(z + a * e);
            next[free[1]] = Some(z + b * e);
            if let Some(found) = self.solve(next, explored) {
                return Some(found);
            }
        }
        None
    }

    /// One sweep of forced moves. `None` signals a contradiction.
    fn propagate(&self, values: &mut Values) -> Option<Step> {
        let mut changed = false;
        for v in 0..self.g.len() {
            if !self.interior[v] {
                continue;
            }
            let Some(z) = values[v] else { continue };
            let ns = self.g.neighbors(v);
            let known: Vec<Eisenstein> = ns.iter().filter_map(|&u| values[u]).map(|w| w - z).collect();
            let Some(&e) = known.first() else { continue };
            let mut pool = if e.is_zero() {
                vec![Eisenstein::ZERO; 3]
            } else {
                vec![e, Eisenstein::J * e, Eisenstein::J2 * e]
            };
            for d in &known {
                let i = pool.iter().position(|p| p == d)?;
                pool.swap_remove(i);
            }
            let unknown: Vec<usize> = ns.iter().copied().filter(|&u| values[u].is_none()).collect();
            match unknown.len() {
                0 => {}
                1 => {
                    values[unknown[0]] = Some(z + pool[0]);
                    changed = true;
                }
                _ if e.is_zero() => {
                    for u in unknown {
                        values[u] = Some(z);
                    }
                    changed = true;
                }
                _ => {}
            }
        }
        Some(if changed { Step::Changed } else { Step::Stable })
    }
}

/// Honeycomb patch of `τ_{0,1}`: all tiling vertices within Euclidean
/// distance `radius` of the origin (the origin's connected part) form the
/// interior, and their remaining neighbours form the boundary ring.
pub fn hex_patch(radius: f64) -> (Arc<Graph>, Vec<Eisenstein>, Vec<bool>) {
    use std::collections::HashMap;

    let on_tiling = |z: &Eisenstein| z.class_mod_1_minus_j() != Some(2);
    let steps = |z: &Eisenstein| -> [Eisenstein; 3] {
        let s = if z.class_mod_1_minus_j() == Some(0) {
            [Eisenstein::ONE, Eisenstein::J, Eisenstein::J2]
        } else {
            [-Eisenstein::ONE, -Eisenstein::J, -Eisenstein::J2]
        };
        s.map(|d| *z + d)
    };
    let inside = |z: &Eisenstein| z.to_complex().norm() <= radius + 1e-9;

    let mut order = vec![Eisenstein::ZERO];
    let mut index: HashMap<Eisenstein, usize> = HashMap::from([(Eisenstein::ZERO, 0)]);
    let mut interior = vec![true];
    let mut head = 0;
    while head < order.len() {
        let z = order[head];
        head += 1;
        if !interior[index[&z]] {
            continue;
        }
        for w in steps(&z) {
            debug_assert!(on_tiling(&w));
            if !index.contains_key(&w) {
                index.insert(w, order.len());
                order.push(w);
                interior.push(inside(&w));
            }
        }
    }
    let mut edges = Vec::new();
    for (i, z) in order.iter().enumerate() {
        if !interior[i] {
            continue;
        }
        for w in steps(z) {
            let k = index[&w];
            if interior[k] && k < i {
                continue;
            }
            edges.push((i, k));
        }
    }
    let ids = order
        .iter()
        .map(|z| format!("{},{}", z.x, z.y))
        .collect::<Vec<_>>();
    let graph = Graph::new(ids, &edges).expect("honeycomb patch is a simple connected graph");
    let boundary = interior.iter().map(|i| !i).collect();
    (Arc::new(graph), order, boundary)
}
