//! Finite balls in regular trees, with vertices addressed by words.
//!
//! An edge-centred ball glues two rooted trees along the edge `O′O`: the
//! left copy hangs off `O` (`L:` is `O`, `L:ab` is `Oab`) and the right copy
//! off `O′` (`R:` is `O′`). A vertex-centred ball has a single centre `C:`.
//! Letters are `a, b, c, …`; a vertex of `T_n` has `n − 1` children, except
//! the centre of a vertex-centred ball which has `n`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
    Centre,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Address {
    pub side: Side,
    pub word: Vec<u8>,
}

impl Address {
    pub fn new(side: Side, word: Vec<u8>) -> Self {
        Self { side, word }
    }

    pub fn child(&self, letter: u8) -> Self {
        let mut word = self.word.clone();
        word.push(letter);
        Self::new(self.side, word)
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.side {
            Side::Left => 'L',
            Side::Right => 'R',
            Side::Centre => 'C',
        };
        write!(f, "{s}:")?;
        for &l in &self.word {
            write!(f, "{}", (b'a' + l) as char)?;
        }
        Ok(())
    }
}

impl FromStr for Address {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::Parse(format!("bad tree address {s:?}"));
        let (side, word) = s.split_once(':').ok_or_else(bad)?;
        let side = match side {
            "L" => Side::Left,
            "R" => Side::Right,
            "C" => Side::Centre,
            _ => return Err(bad()),
        };
        let word = word
            .bytes()
            .map(|c| if c.is_ascii_lowercase() { Ok(c - b'a') } else { Err(bad()) })
            .collect::<Result<_, _>>()?;
        Ok(Self::new(side, word))
    }
}

#[derive(Debug, Clone)]
pub struct TreeBall {
    valency: usize,
    graph: Arc<Graph>,
    addresses: Vec<Address>,
    index: HashMap<Address, usize>,
    pred: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
}

/// Vertex count of an edge-centred ball with the given side radii.
pub fn edge_centred_len(valency: usize, left: usize, right: usize) -> u128 {
    let side = |r: usize| (0..=r).map(|k| ((valency - 1) as u128).pow(k as u32)).sum::<u128>();
    side(left) + side(right)
}

/// Vertex count of a vertex-centred ball.
pub fn vertex_centred_len(valency: usize, radius: usize) -> u128 {
    1 + (0..radius)
        .map(|k| valency as u128 * ((valency - 1) as u128).pow(k as u32))
        .sum::<u128>()
}

impl TreeBall {
    /// `A_{O′O}`: the rooted tree below `O` to depth `radius`, plus `O′`.
    pub fn rooted(valency: usize, radius: usize) -> Self {
        Self::edge_centred(valency, radius, 0)
    }

    /// Ball around the edge `O′O` of the full tree.
    pub fn full(valency: usize, radius: usize) -> Self {
        Self::edge_centred(valency, radius, radius)
    }

    pub fn edge_centred(valency: usize, left: usize, right: usize) -> Self {
        assert!(valency >= 2, "valency must be at least 2");
        let mut b = Builder::default();
        let o = b.push(Address::new(Side::Left, vec![]), None, 0);
        let o1 = b.push(Address::new(Side::Right, vec![]), None, 0);
        b.pred[o] = Some(o1);
        b.pred[o1] = Some(o);
        b.edges.push((o1, o));
        b.grow(vec![(o, left), (o1, right)], |_| valency - 1);
        b.finish(valency)
    }

    pub fn vertex_centred(valency: usize, radius: usize) -> Self {
        assert!(valency >= 2, "valency must be at least 2");
        let mut b = Builder::default();
        let c = b.push(Address::new(Side::Centre, vec![]), None, 0);
        b.grow(vec![(c, radius)], |d| if d == 0 { valency } else { valency - 1 });
        b.finish(valency)
    }

    pub fn valency(&self) -> usize {
        self.valency
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.addresses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.addresses.is_empty()
    }

    pub fn address(&self, v: usize) -> &Address {
        &self.addresses[v]
    }

    pub fn index_of(&self, a: &Address) -> Option<usize> {
        self.index.get(a).copied()
    }

    /// The neighbour a vertex was reached from. The two ends of the root
    /// edge are each other's predecessor; a centre has none.
    pub fn pred(&self, v: usize) -> Option<usize> {
        self.pred[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Word length: distance to the root edge or centre.
    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    /// `(O′, O)` for edge-centred balls.
    pub fn root_edge(&self) -> Option<(usize, usize)> {
        let o = self.index_of(&Address::new(Side::Left, vec![]))?;
        let o1 = self.index_of(&Address::new(Side::Right, vec![]))?;
        Some((o1, o))
    }

    pub fn centre(&self) -> Option<usize> {
        self.index_of(&Address::new(Side::Centre, vec![]))
    }

    /// Vertices with their full set of neighbours inside the ball.
    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&v| self.graph.valency(v) == self.valency)
    }

    pub fn boundary_mask(&self) -> Vec<bool> {
        (0..self.len())
            .map(|v| self.graph.valency(v) < self.valency)
            .collect()
    }

    /// Path from the root-edge end on the same side (or the centre) to `v`.
    pub fn path_to(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while self.depth[cur] > 0 {
            cur = self.pred[cur].expect("non-root vertex has a predecessor");
            path.push(cur);
        }
        path.reverse();
        path
    }
}

#[derive(Default)]
struct Builder {
    addresses: Vec<Address>,
    pred: Vec<Option<usize>>,
    depth: Vec<usize>,
    children: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn push(&mut self, a: Address, pred: Option<usize>, depth: usize) -> usize {
        let v = self.addresses.len();
        self.addresses.push(a);
        self.pred.push(pred);
        self.depth.push(depth);
        self.children.push(Vec::new());
        if let Some(p) = pred {
            self.children[p].push(v);
            self.edges.push((p, v));
        }
        v
    }

    /// Breadth-first growth from each `(root, radius)`, interleaving the
    /// roots so that vertices come out sorted by depth.
    fn grow(&mut self, roots: Vec<(usize, usize)>, arity: impl Fn(usize) -> usize) {
        let mut frontier: Vec<(usize, usize)> = roots;
        let mut d = 0;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &(v, r) in &frontier {
                if d >= r {
                    continue;
                }
                for l in 0..arity(d) {
                    let a = self.addresses[v].child(l as u8);
                    let c = self.push(a, Some(v), d + 1);
                    next.push((c, r));
                }
            }
            frontier = next;
            d += 1;
        }
    }

    fn finish(self, valency: usize) -> TreeBall {
        let ids = self.addresses.iter().map(Address::to_string).collect();
        let graph = Graph::new(ids, &self.edges).expect("tree balls are simple and connected");
        let index = self
            .addresses
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        TreeBall {
            valency,
            graph: Arc::new(graph),
            addresses: self.addresses,
            index,
            pred: self.pred,
            children: self.children,
            depth: self.depth,
        }
    }
}
