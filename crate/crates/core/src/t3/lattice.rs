use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::{T3Error, TreeFunction};
use crate::eisenstein::Eisenstein;

/// Vertices of the hexagonal tiling `τ_{α,β}` within a radius, in the
/// normalised coordinate `(z − α)/w` where they are Eisenstein integers.
///
/// Generated by reflecting the fundamental hexagon across its edges; the
/// result is `{x + yj : x + y ≢ 2 (mod 3)}`, the hexagon centres being the
/// missing class.
#[derive(Debug, Clone)]
pub struct HexLattice {
    pub alpha: Complex64,
    pub w: Complex64,
    pub radius: f64,
    vertices: HashSet<Eisenstein>,
    centres: HashSet<Eisenstein>,
}

fn modulus(z: Eisenstein) -> f64 {
    z.norm().to_f64().unwrap_or(f64::INFINITY).sqrt()
}

impl HexLattice {
    /// `α, α+w, α+w−jw, α+w−jw+j²w, α+w−jw+j²w−w, α+w−jw+j²w−w+jw` in
    /// normalised coordinates.
    pub fn fundamental_hexagon() -> [Eisenstein; 6] {
        let steps = [
            Eisenstein::ONE,
            -Eisenstein::J,
            Eisenstein::J2,
            -Eisenstein::ONE,
            Eisenstein::J,
        ];
        let mut out = [Eisenstein::ZERO; 6];
        for (k, s) in steps.iter().enumerate() {
            out[k + 1] = out[k] + *s;
        }
        out
    }

    pub fn new(alpha: Complex64, w: Complex64, radius: f64) -> Self {
        assert!(w.norm() > 0.0, "edge must be nonzero");
        let hexagon = Self::fundamental_hexagon();
        let centre = hexagon.iter().fold(Eisenstein::ZERO, |a, &b| a + b) / Eisenstein::int(6, 0);
        // unit offsets in angular order, so consecutive ones share an edge
        let ring = [
            Eisenstein::ONE,
            -Eisenstein::J2,
            Eisenstein::J,
            -Eisenstein::ONE,
            Eisenstein::J2,
            -Eisenstein::J,
        ];
        let mut centres = HashSet::from([centre]);
        let mut queue = VecDeque::from([centre]);
        let mut vertices = HashSet::new();
        while let Some(c) = queue.pop_front() {
            for k in 0..6 {
                let v = c + ring[k];
                if modulus(v) <= radius + 1e-9 {
                    vertices.insert(v);
                }
                let next = c + ring[k] + ring[(k + 1) % 6];
                if modulus(next) <= radius + 2.0 && centres.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        Self {
            alpha,
            w,
            radius,
            vertices,
            centres,
        }
    }

    /// `τ_{0,1}`.
    pub fn unit(radius: f64) -> Self {
        Self::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), radius)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Eisenstein> {
        self.vertices.iter()
    }

    pub fn contains_normalized(&self, z: &Eisenstein) -> bool {
        self.vertices.contains(z)
    }

    pub fn is_centre(&self, z: &Eisenstein) -> bool {
        self.centres.contains(z)
    }

    /// Membership of a point of `C`, up to `tol` in normalised units.
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        let (e, d) = Eisenstein::nearest_integer((z - self.alpha) / self.w);
        d <= tol && self.vertices.contains(&e)
    }

    pub fn to_complex(&self, z: Eisenstein) -> Complex64 {
        self.alpha + self.w * z.to_complex()
    }

    /// Unit steps from `z` to neighbouring tiling vertices.
    pub fn edges_at(&self, z: &Eisenstein) -> Vec<Eisenstein> {
        Eisenstein::units()
            .into_iter()
            .filter(|u| self.vertices.contains(&(*z + *u)))
            .collect()
    }

    /// Breadth-first graph distance from the edge `{0, 1}`; only layers
    /// that lie entirely inside the generated disc are returned.
    fn layers_from_root_edge(&self) -> Vec<Vec<Eisenstein>> {
        let mut dist: HashMap<Eisenstein, usize> = HashMap::new();
        let mut layers = vec![vec![Eisenstein::ZERO, Eisenstein::ONE]];
        dist.insert(Eisenstein::ZERO, 0);
        dist.insert(Eisenstein::ONE, 0);
        loop {
            let last = layers.last().expect("nonempty");
            // a layer is complete only if no vertex in it could have a
            // neighbour outside the disc
            if last.iter().any(|z| modulus(*z) > self.radius - 1.0) {
                layers.pop();
                return layers;
            }
            let d = layers.len();
            let mut next = Vec::new();
            for z in last {
                for u in self.edges_at(z) {
                    let y = *z + u;
                    if !dist.contains_key(&y) {
                        dist.insert(y, d);
                        next.push(y);
                    }
                }
            }
            if next.is_empty() {
                return layers;
            }
            layers.push(next);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoveringReport {
    /// (i) every value is a tiling vertex.
    pub in_lattice: bool,
    pub first_miss: Option<String>,
    /// (ii) the oscillations at each interior vertex are the three tiling
    /// edges at its image.
    pub locally_surjective: bool,
    pub locally_injective: bool,
    /// (iii) every tiling vertex within this graph distance of the edge
    /// `{0, 1}` is attained.
    pub rho: usize,
    /// Largest Euclidean radius around 0 inside which every tiling vertex is
    /// attained.
    pub rho_euclid: f64,
    pub attained: usize,
}

impl CoveringReport {
    pub fn passed(&self) -> bool {
        self.in_lattice && self.locally_surjective && self.locally_injective
    }
}

/// The similarity sending the root edge to `(0, 1)`, with exact values
/// recovered by rounding when they are within `1e-9` of `Z[j]`.
pub fn normalize(f: &TreeFunction) -> Result<TreeFunction, T3Error> {
    let (o1, o) = f.ball.root_edge().ok_or(T3Error::NotEdgeCentred)?;
    let (a, b) = (f.value(o1), f.value(o));
    if (b - a).norm() == 0.0 {
        return Err(T3Error::Constant);
    }
    let function = f.function.map(|z| (z - a) / (b - a));
    let exact = function
        .values()
        .iter()
        .map(|z| {
            let (e, d) = Eisenstein::nearest_integer(z.expect("total"));
            (d < 1e-9).then_some(e)
        })
        .collect();
    Ok(TreeFunction {
        ball: Arc::clone(&f.ball),
        function,
        exact,
    })
}

/// Exact values of a normalised function; `Err(address)` names the first
/// vertex whose value is not an Eisenstein integer.
fn exact_values(f: &TreeFunction) -> Result<Result<Vec<Eisenstein>, String>, T3Error> {
    let (o1, o) = f.ball.root_edge().ok_or(T3Error::NotEdgeCentred)?;
    let (a, b) = (f.value(o1), f.value(o));
    if (b - a).norm() == 0.0 {
        return Err(T3Error::Constant);
    }
    if a.norm() > 1e-12 || (b - 1.0).norm() > 1e-12 {
        return Err(T3Error::NotNormalized);
    }
    if let Some(e) = &f.exact {
        return Ok(Ok(e.clone()));
    }
    let mut out = Vec::with_capacity(f.ball.len());
    for v in 0..f.ball.len() {
        let (e, d) = Eisenstein::nearest_integer(f.value(v));
        if d > 1e-9 {
            return Ok(Err(f.ball.address(v).to_string()));
        }
        out.push(e);
    }
    Ok(Ok(out))
}

/// Checks that a normalised nonconstant extension is a covering of the
/// tiling near the root edge.
pub fn hex_covering_check(f: &TreeFunction, lattice: &HexLattice) -> Result<CoveringReport, T3Error> {
    let exact = match exact_values(f)? {
        Ok(e) => e,
        Err(miss) => {
            return Ok(CoveringReport {
                in_lattice: false,
                first_miss: Some(miss),
                locally_surjective: false,
                locally_injective: false,
                rho: 0,
                rho_euclid: 0.0,
                attained: 0,
            })
        }
    };
    let ball = &f.ball;
    let g = ball.graph();

    let first_miss = (0..ball.len())
        .find(|&v| !lattice.contains_normalized(&exact[v]))
        .map(|v| ball.address(v).to_string());

    let mut surjective = true;
    let mut injective = true;
    for v in ball.interior() {
        let z = exact[v];
        let mut osc: Vec<Eisenstein> = g.neighbors(v).iter().map(|&u| exact[u] - z).collect();
        let mut edges = lattice.edges_at(&z);
        osc.sort();
        edges.sort();
        surjective &= osc == edges;
        let mut ball1: Vec<Eisenstein> = g.neighbors(v).iter().map(|&u| exact[u]).collect();
        ball1.push(z);
        let n = ball1.len();
        ball1.sort();
        ball1.dedup();
        injective &= ball1.len() == n;
    }

    let image: HashSet<Eisenstein> = exact.iter().copied().collect();
    let layers = lattice.layers_from_root_edge();
    let mut rho = 0;
    for (d, layer) in layers.iter().enumerate() {
        if layer.iter().all(|z| image.contains(z)) {
            rho = d;
        } else {
            break;
        }
    }
    let rho_euclid = lattice
        .vertices()
        .filter(|z| !image.contains(z))
        .map(|z| modulus(*z))
        .fold(lattice.radius, f64::min);

    Ok(CoveringReport {
        in_lattice: first_miss.is_none(),
        first_miss,
        locally_surjective: surjective,
        locally_injective: injective,
        rho,
        rho_euclid,
        attained: image.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateReport {
    /// Distinct `(φ(S′), φ(S))` pairs at each depth.
    pub states_per_depth: Vec<usize>,
    pub in_lattice: bool,
    pub locally_surjective: bool,
    pub locally_injective: bool,
    /// Image of the ball, shared by every extension.
    pub image: HashSet<Eisenstein>,
}

impl StateReport {
    pub fn passed(&self) -> bool {
        self.in_lattice && self.locally_surjective && self.locally_injective
    }
}

/// Covering properties of *every* holomorphic extension on the full ball
/// of the given radius with `φ(O′) = 0`, `φ(O) = 1`.
///
/// The choice at `S` only decides which child receives which of the two
/// values `φ(S) − j d`, `φ(S) − j² d` (`d = φ(S) − φ(S′)`), so the values on
/// the radius-1 ball around `S` depend on the pair `(φ(S′), φ(S))` alone,
/// and the set of such pairs at each depth is the same for all extensions.
/// Closing over pairs depth by depth therefore checks all `2^interior`
/// extensions at once.
pub fn all_extensions_check(radius: usize, lattice: &HexLattice) -> StateReport {
    let mut states: HashSet<(Eisenstein, Eisenstein)> =
        HashSet::from([(Eisenstein::ZERO, Eisenstein::ONE), (Eisenstein::ONE, Eisenstein::ZERO)]);
    let mut report = StateReport {
        states_per_depth: Vec::new(),
        in_lattice: true,
        locally_surjective: true,
        locally_injective: true,
        image: HashSet::from([Eisenstein::ZERO, Eisenstein::ONE]),
    };
    for depth in 0..=radius {
        report.states_per_depth.push(states.len());
        let mut next = HashSet::new();
        for &(p, z) in &states {
            report.in_lattice &= lattice.contains_normalized(&z);
            if depth == radius {
                continue;
            }
            let d = z - p;
            let kids = [z - Eisenstein::J * d, z - Eisenstein::J2 * d];
            let mut osc = vec![p - z, kids[0] - z, kids[1] - z];
            let mut edges = lattice.edges_at(&z);
            osc.sort();
            edges.sort();
            report.locally_surjective &= osc == edges;
            let mut pts = vec![p, z, kids[0], kids[1]];
            pts.sort();
            pts.dedup();
            report.locally_injective &= pts.len() == 4;
            for k in kids {
                report.image.insert(k);
                next.insert((z, k));
            }
        }
        states = next;
    }
    report
}
