//! Balls in the graph of triangles glued two at a vertex, and holomorphic
//! extension over them.
//!
//! A triangle is `Δ₀` or a code `(l, i)` with `l` a word over `{a, b}` and
//! `i ∈ {1, 2, 3}`. The triangle `(∅, i)` is glued to `Δ₀` at its `i`-th
//! vertex and `(cl, i)` is glued to `(l, i)` at the free vertex `X_c`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::triangle::{Branch, MarkedTriangle};
use super::Tr3Error;
use crate::graph::{Graph, VertexFunction};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriangleCode {
    /// `0` for `Δ₀`, otherwise `i`.
    pub dir: u8,
    /// Letters `0 = a`, `1 = b`, outermost first.
    pub word: Vec<u8>,
}

impl TriangleCode {
    pub fn central() -> Self {
        Self { dir: 0, word: Vec::new() }
    }

    pub fn is_central(&self) -> bool {
        self.dir == 0
    }

    /// `1` for `(∅, i)`, `0` for `Δ₀`.
    pub fn depth(&self) -> usize {
        if self.is_central() {
            0
        } else {
            self.word.len() + 1
        }
    }

    /// `(cl, i)` from `(l, i)`.
    pub fn child(&self, c: u8) -> Self {
        assert!(!self.is_central() && c < 2);
        let mut word = Vec::with_capacity(self.word.len() + 1);
        word.push(c);
        word.extend_from_slice(&self.word);
        Self { dir: self.dir, word }
    }

    pub fn parent(&self) -> Option<Self> {
        match (self.dir, self.word.split_first()) {
            (0, _) => None,
            (_, None) => Some(Self::central()),
            (d, Some((_, rest))) => Some(Self { dir: d, word: rest.to_vec() }),
        }
    }
}

impl fmt::Display for TriangleCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_central() {
            return write!(f, "D0");
        }
        write!(f, "{}:", self.dir)?;
        for &c in &self.word {
            write!(f, "{}", if c == 0 { 'a' } else { 'b' })?;
        }
        Ok(())
    }
}

impl FromStr for TriangleCode {
    type Err = Tr3Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "D0" {
            return Ok(Self::central());
        }
        let bad = || Tr3Error::Parse(format!("bad triangle code {s:?}"));
        let (d, w) = s.split_once(':').ok_or_else(bad)?;
        let dir = match d {
            "1" => 1,
            "2" => 2,
            "3" => 3,
            _ => return Err(bad()),
        };
        let word = w
            .chars()
            .map(|c| match c {
                'a' => Ok(0),
                'b' => Ok(1),
                _ => Err(bad()),
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { dir, word })
    }
}

#[derive(Debug, Clone)]
pub struct Triangle {
    pub code: TriangleCode,
    /// `[glue, X_a, X_b]`, or the three vertices of `Δ₀` in order.
    pub vertices: [usize; 3],
    pub parent: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Tr3Ball {
    radius: usize,
    graph: Arc<Graph>,
    triangles: Vec<Triangle>,
    index: HashMap<TriangleCode, usize>,
    vertex_depth: Vec<usize>,
}

impl Tr3Ball {
    /// All triangles within `radius` steps of `Δ₀`, breadth first.
    pub fn new(radius: usize) -> Self {
        let mut codes = vec![TriangleCode::central()];
        let mut frontier: Vec<TriangleCode> = (1..=3).map(|i| TriangleCode { dir: i, word: Vec::new() }).collect();
        for _ in 0..radius {
            let next = frontier.iter().flat_map(|t| [t.child(0), t.child(1)]).collect();
            codes.append(&mut frontier);
            frontier = next;
        }
        // `frontier` holds the codes whose glue vertex is on the boundary
        let mut ids = Vec::new();
        let mut vertex_of = HashMap::new();
        let mut vertex_depth = Vec::new();
        for t in codes.iter().skip(1).chain(&frontier) {
            vertex_of.insert(t.clone(), ids.len());
            ids.push(format!("v{t}"));
            vertex_depth.push(t.depth() - 1);
        }
        let mut triangles = Vec::with_capacity(codes.len());
        let mut index = HashMap::with_capacity(codes.len());
        let mut edges = Vec::new();
        for code in codes {
            let vertices = if code.is_central() {
                [1, 2, 3].map(|i| vertex_of[&TriangleCode { dir: i, word: Vec::new() }])
            } else {
                [vertex_of[&code], vertex_of[&code.child(0)], vertex_of[&code.child(1)]]
            };
            edges.extend([(vertices[0], vertices[1]), (vertices[1], vertices[2]), (vertices[2], vertices[0])]);
            let parent = code.parent().map(|p| index[&p]);
            index.insert(code.clone(), triangles.len());
            triangles.push(Triangle { code, vertices, parent });
        }
        let graph = Graph::new(ids, &edges).expect("triangle ball is a simple connected graph");
        Self {
            radius,
            graph: Arc::new(graph),
            triangles,
            index,
            vertex_depth,
        }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn triangle(&self, code: &TriangleCode) -> Option<&Triangle> {
        self.index.get(code).map(|&k| &self.triangles[k])
    }

    /// Distance in triangles from `Δ₀` to the first triangle containing `v`.
    pub fn vertex_depth(&self, v: usize) -> usize {
        self.vertex_depth[v]
    }

    /// Vertices lying on a single triangle of the ball.
    pub fn boundary_mask(&self) -> Vec<bool> {
        (0..self.graph.len()).map(|v| self.graph.valency(v) < 4).collect()
    }

    /// Number of triangles other than `Δ₀`, i.e. the number of selector bits.
    pub fn selector_len(&self) -> usize {
        self.triangles.len() - 1
    }
}

/// For each triangle `T ≠ Δ₀` a bijection `{a, b} → {M₁, M₂}`, stored as a
/// bit: `false` sends `a ↦ M₁, b ↦ M₂`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BranchSelector {
    bits: HashMap<TriangleCode, bool>,
    fallback: Option<bool>,
}

impl BranchSelector {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The same bijection on every triangle.
    pub fn constant(swap: bool) -> Self {
        Self {
            bits: HashMap::new(),
            fallback: Some(swap),
        }
    }

    pub fn set(&mut self, code: TriangleCode, swap: bool) {
        self.bits.insert(code, swap);
    }

    pub fn get(&self, code: &TriangleCode) -> Option<bool> {
        self.bits.get(code).copied().or(self.fallback)
    }

    /// Bits in the ball's triangle order, skipping `Δ₀`.
    pub fn from_bits(ball: &Tr3Ball, bits: impl IntoIterator<Item = bool>) -> Self {
        let mut s = Self::empty();
        for (t, b) in ball.triangles.iter().skip(1).zip(bits) {
            s.set(t.code.clone(), b);
        }
        s
    }

    pub fn random(ball: &Tr3Ball, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_bits(ball, (0..ball.selector_len()).map(|_| rng.gen::<bool>()))
    }

    /// Branch sent to the free vertex `X_c`.
    pub fn branch(&self, code: &TriangleCode, c: u8) -> Result<Branch, Tr3Error> {
        let swap = self.get(code).ok_or_else(|| Tr3Error::MissingSelector(code.to_string()))?;
        Ok(if (c == 1) != swap { Branch::Two } else { Branch::One })
    }
}

#[derive(Debug, Clone)]
pub struct Tr3Function {
    pub ball: Arc<Tr3Ball>,
    pub function: VertexFunction,
}

impl Tr3Function {
    pub fn value(&self, v: usize) -> Complex64 {
        self.function.value(v).unwrap_or_default()
    }

    /// `T` marked at vertex `k` of its vertex list, with `e, f` towards the
    /// next two in cyclic order.
    pub fn marked(&self, code: &TriangleCode, k: usize) -> Option<MarkedTriangle> {
        let t = self.ball.triangle(code)?;
        let z = t.vertices.map(|v| self.value(v));
        Some(MarkedTriangle::new(z[k], z[(k + 1) % 3] - z[k], z[(k + 2) % 3] - z[k]))
    }
}

/// `Δ₀` receives `(p, p + e, p + f)`; every other triangle `T`, glued to its
/// parent `P` at `O`, gets `φ(X_c) = φ(O) + u` with `u` the branch
/// `α_T(c)` of the pair solving the power-sum equations for `P` at `O`.
pub fn extend_tr3(start: &MarkedTriangle, radius: usize, selector: &BranchSelector) -> Result<Tr3Function, Tr3Error> {
    extend_tr3_on(Arc::new(Tr3Ball::new(radius)), start, selector)
}

pub fn extend_tr3_on(ball: Arc<Tr3Ball>, start: &MarkedTriangle, selector: &BranchSelector) -> Result<Tr3Function, Tr3Error> {
    let mut values = vec![Complex64::default(); ball.graph.len()];
    let d0 = &ball.triangles[0];
    for (v, z) in d0.vertices.iter().zip(start.vertices()) {
        values[*v] = z;
    }
    for t in &ball.triangles[1..] {
        let parent = &ball.triangles[t.parent.expect("non-central triangle has a parent")];
        let glue = t.vertices[0];
        let k = parent.vertices.iter().position(|&v| v == glue).expect("glue vertex on parent");
        let z = parent.vertices.map(|v| values[v]);
        let marked = MarkedTriangle::new(z[k], z[(k + 1) % 3] - z[k], z[(k + 2) % 3] - z[k]);
        for c in 0..2u8 {
            let branch = selector.branch(&t.code, c)?;
            values[t.vertices[1 + c as usize]] = marked.adjacent(branch).p;
        }
    }
    let boundary = ball.boundary_mask();
    let function = VertexFunction::total(Arc::clone(&ball.graph), values)?.with_boundary(boundary)?;
    Ok(Tr3Function { ball, function })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloudPoint {
    pub z: Complex64,
    pub depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloudMode {
    /// Every branch at every triangle, walked depth first; about `3·4^r`
    /// points.
    Exhaustive,
    Sampled { seed: u64, count: usize },
}

pub const EXHAUSTIVE_MAX_RADIUS: usize = 9;
pub const CLOUD_POINT_CAP: usize = 10_000_000;

/// Vertex values of holomorphic extensions of `start` over the ball,
/// tagged with vertex depth.
pub fn ball_image_cloud(start: &MarkedTriangle, radius: usize, mode: CloudMode) -> Result<Vec<CloudPoint>, Tr3Error> {
    let mut out: Vec<CloudPoint> = start.vertices().map(|z| CloudPoint { z, depth: 0 }).to_vec();
    match mode {
        CloudMode::Exhaustive => {
            if radius > EXHAUSTIVE_MAX_RADIUS {
                return Err(Tr3Error::TooLarge {
                    points: 3 * 4u128.pow(radius.min(60) as u32),
                    cap: 3 * 4u128.pow(EXHAUSTIVE_MAX_RADIUS as u32),
                });
            }
            let z = start.vertices();
            for k in 0..3 {
                let marked = MarkedTriangle::new(z[k], z[(k + 1) % 3] - z[k], z[(k + 2) % 3] - z[k]);
                descend(&marked, 1, radius, &mut out);
            }
        }
        CloudMode::Sampled { seed, count } => {
            let ball = Arc::new(Tr3Ball::new(radius));
            let points = count as u128 * ball.graph.len() as u128;
            if points > CLOUD_POINT_CAP as u128 {
                return Err(Tr3Error::TooLarge {
                    points,
                    cap: CLOUD_POINT_CAP as u128,
                });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            out.clear();
            for _ in 0..count {
                let sel = BranchSelector::from_bits(&ball, (0..ball.selector_len()).map(|_| rng.gen::<bool>()));
                let f = extend_tr3_on(Arc::clone(&ball), start, &sel)?;
                out.extend((0..ball.graph.len()).map(|v| CloudPoint {
                    z: f.value(v),
                    depth: ball.vertex_depth(v),
                }));
            }
        }
    }
    Ok(out)
}

/// Both branch assignments of the triangle glued to `parent` at its marked
/// vertex, then recursion into each free vertex.
fn descend(parent: &MarkedTriangle, depth: usize, radius: usize, out: &mut Vec<CloudPoint>) {
    if depth > radius {
        return;
    }
    let o = parent.p;
    for swap in [false, true] {
        let (ba, bb) = if swap { (Branch::Two, Branch::One) } else { (Branch::One, Branch::Two) };
        let xa = parent.adjacent(ba).p;
        let xb = parent.adjacent(bb).p;
        out.push(CloudPoint { z: xa, depth });
        out.push(CloudPoint { z: xb, depth });
        descend(&MarkedTriangle::new(xa, xb - xa, o - xa), depth + 1, radius, out);
        descend(&MarkedTriangle::new(xb, o - xb, xa - xb), depth + 1, radius, out);
    }
}

/// Two triangles of one random extension: `Δ₀` marked at its first vertex
/// and a random outermost triangle marked at its glue vertex.
pub fn related_pair(start: &MarkedTriangle, radius: usize, seed: u64) -> Result<(MarkedTriangle, MarkedTriangle, TriangleCode), Tr3Error> {
    let ball = Arc::new(Tr3Ball::new(radius));
    let sel = BranchSelector::random(&ball, seed);
    let f = extend_tr3_on(Arc::clone(&ball), start, &sel)?;
    let outer: Vec<&Triangle> = ball.triangles.iter().filter(|t| t.code.depth() == radius).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let t = outer[rng.gen_range(0..outer.len())];
    let a = f.marked(&TriangleCode::central(), 0).expect("central triangle");
    let b = f.marked(&t.code, 0).expect("triangle in ball");
    Ok((a, b, t.code.clone()))
}
