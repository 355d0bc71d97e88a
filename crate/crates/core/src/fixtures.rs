//! Small named graphs and lattice patches used by tests, the acceptance
//! suite and the CLI.

use std::sync::Arc;

use num_complex::Complex64;

use crate::graph::{Graph, VertexFunction};

fn numbered(n: usize, edges: &[(usize, usize)]) -> Arc<Graph> {
    Arc::new(Graph::new((0..n).map(|i| i.to_string()).collect(), edges).expect("fixture graph"))
}

pub fn k4() -> Arc<Graph> {
    numbered(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
}

/// The 3-cube `Q₃`; vertices are bit strings, edges flip one bit.
pub fn cube() -> Arc<Graph> {
    let mut edges = Vec::new();
    for v in 0..8usize {
        for b in 0..3 {
            let u = v ^ (1 << b);
            if v < u {
                edges.push((v, u));
            }
        }
    }
    numbered(8, &edges)
}

pub fn petersen() -> Arc<Graph> {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((i + 5, (i + 2) % 5 + 5));
    }
    numbered(10, &edges)
}

pub fn k33() -> Arc<Graph> {
    let mut edges = Vec::new();
    for a in 0..3 {
        for b in 3..6 {
            edges.push((a, b));
        }
    }
    numbered(6, &edges)
}

/// Triangular prism.
pub fn prism() -> Arc<Graph> {
    numbered(
        6,
        &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)],
    )
}

/// Square patch `[-half, half]²` of the Cayley graph of `Z²`, viewed inside
/// `C`, carrying `f(z)`. The outer ring is boundary.
pub fn z2_patch(half: i32, f: impl Fn(Complex64) -> Complex64) -> VertexFunction {
    let side = (2 * half + 1) as usize;
    let idx = |x: i32, y: i32| ((y + half) as usize) * side + (x + half) as usize;
    let mut ids = Vec::with_capacity(side * side);
    let mut pts = Vec::with_capacity(side * side);
    let mut boundary = Vec::with_capacity(side * side);
    for y in -half..=half {
        for x in -half..=half {
            ids.push(format!("{x},{y}"));
            pts.push(Complex64::new(x as f64, y as f64));
            boundary.push(x.abs() == half || y.abs() == half);
        }
    }
    let mut edges = Vec::new();
    for y in -half..=half {
        for x in -half..=half {
            if x < half {
                edges.push((idx(x, y), idx(x + 1, y)));
            }
            if y < half {
                edges.push((idx(x, y), idx(x, y + 1)));
            }
        }
    }
    let g = Arc::new(Graph::new(ids, &edges).expect("Z² patch"));
    VertexFunction::from_fn(g, |v| f(pts[v]))
        .with_boundary(boundary)
        .expect("boundary length matches")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        for (g, v, e) in [(k4(), 4, 6), (cube(), 8, 12), (petersen(), 10, 15), (k33(), 6, 9), (prism(), 6, 9)] {
            assert_eq!((g.len(), g.edge_count(), g.max_valency()), (v, e, 3));
            assert!((0..g.len()).all(|x| g.valency(x) == 3));
        }
        let z = z2_patch(2, |z| z);
        assert_eq!(z.graph().len(), 25);
        assert_eq!(z.interior().count(), 9);
    }
}
