//! Finite graphs and complex-valued vertex functions.
//!
//! Everything here is finite: infinite objects such as the trees `T_n` are
//! represented by balls, and the vertices on the rim of a ball are marked as
//! boundary so that the checkers skip them.

mod check;
mod function;
pub mod io;
mod trivalent;

pub use check::{
    is_harmonic, is_holomorphic, is_n_holomorphic, power_sum_residuals, CheckReport,
    HolomorphyReport,
};
pub use function::{OscillationVector, RealVertexFunction, Tolerance, VertexFunction};
pub use trivalent::{
    hex_patch, trivalent_feasibility, Feasibility, TrivalentOptions, DEFAULT_CYCLE_RANK_CAP,
};

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("unknown vertex id {0:?}")]
    UnknownVertex(String),
    #[error("self-loop at vertex {0:?}")]
    SelfLoop(String),
    #[error("duplicate edge {0:?} -- {1:?}")]
    DuplicateEdge(String, String),
    #[error("graph is disconnected: {0:?} is unreachable from {1:?}")]
    Disconnected(String, String),
    #[error("graph has no vertices")]
    Empty,
    #[error("vertex {0:?} is not interior (it or one of its neighbours has no value, or it is marked boundary)")]
    NotInterior(String),
    #[error("no interior vertex to check")]
    EmptyInterior,
    #[error("value vector has length {got}, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("vertex {vertex:?} has valency {valency}; only valency <= 3 is supported")]
    UnsupportedValency { vertex: String, valency: usize },
    #[error("cycle rank {rank} exceeds the cap {cap}")]
    TooLarge { rank: usize, cap: usize },
    #[error("graph is not a tree")]
    NotATree,
    #[error("malformed input: {0}")]
    Parse(String),
}

/// Undirected simple connected graph with string vertex ids.
///
/// Neighbour order is the insertion order of the edges. It carries no
/// meaning; every predicate built on top of it is permutation invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from ids and index pairs, rejecting loops, duplicate
    /// edges and disconnected input.
    pub fn new(ids: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if ids.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(id.clone()));
            }
        }
        let mut adj = vec![Vec::new(); ids.len()];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= ids.len() {
                    return Err(GraphError::UnknownVertex(format!("#{w}")));
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(ids[u].clone()));
            }
            if adj[u].contains(&v) {
                return Err(GraphError::DuplicateEdge(ids[u].clone(), ids[v].clone()));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let graph = Self { ids, index, adj };
        graph.ensure_connected()?;
        Ok(graph)
    }

    pub fn from_named_edges<S: AsRef<str>>(
        ids: Vec<String>,
        edges: &[(S, S)],
    ) -> Result<Self, GraphError> {
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.as_str(), i).is_some() {
                return Err(GraphError::DuplicateVertex(id.clone()));
            }
        }
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| GraphError::UnknownVertex(s.to_string()))
        };
        let pairs = edges
            .iter()
            .map(|(a, b)| Ok((lookup(a.as_ref())?, lookup(b.as_ref())?)))
            .collect::<Result<Vec<_>, GraphError>>()?;
        Self::new(ids, &pairs)
    }

    fn ensure_connected(&self) -> Result<(), GraphError> {
        let dist = self.distances_from(0);
        match dist.iter().position(Option::is_none) {
            Some(v) => Err(GraphError::Disconnected(
                self.ids[v].clone(),
                self.ids[0].clone(),
            )),
            None => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn valency(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_valency(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// `E - V + 1`; the number of independent cycles of a connected graph.
    pub fn cycle_rank(&self) -> usize {
        self.edge_count() + 1 - self.len()
    }

    pub fn is_tree(&self) -> bool {
        self.cycle_rank() == 0
    }

    /// Breadth-first distances from `source`.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Same graph with every neighbour list permuted by `shuffle`.
    pub fn with_neighbor_order(&self, mut shuffle: impl FnMut(&mut Vec<usize>)) -> Self {
        let mut out = self.clone();
        for ns in &mut out.adj {
            shuffle(ns);
        }
        out
    }
}
