//! The two-valued triangle map and its projective shadow.

use num_complex::Complex64;
use serde_json::{json, Value};

use super::Tr3Error;
use crate::graph::io::complex_json;
use crate::moment::{discriminant, find_roots, multiset_distance, solve_pair2};

/// `(p, e, f)`: the value at the marked vertex and the oscillations towards
/// the other two. Degenerate triangles are allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkedTriangle {
    pub p: Complex64,
    pub e: Complex64,
    pub f: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    One,
    Two,
}

impl Branch {
    pub fn other(self) -> Self {
        match self {
            Self::One => Self::Two,
            Self::Two => Self::One,
        }
    }

    pub fn from_index(k: u8) -> Option<Self> {
        match k {
            1 => Some(Self::One),
            2 => Some(Self::Two),
            _ => None,
        }
    }
}

impl MarkedTriangle {
    pub fn new(p: Complex64, e: Complex64, f: Complex64) -> Self {
        Self { p, e, f }
    }

    /// Values at the marked vertex and the two others.
    pub fn vertices(&self) -> [Complex64; 3] {
        [self.p, self.p + self.e, self.p + self.f]
    }

    /// `(u, v)` of the given branch: `u = (−(e+f) ± s)/2` with `s` the
    /// principal root of the discriminant, `+` for branch one.
    pub fn pair(&self, branch: Branch) -> (Complex64, Complex64) {
        let b = self.e + self.f;
        let s = principal_sqrt(discriminant(self.e, self.f));
        let (u, v) = ((-b + s) / 2.0, (-b - s) / 2.0);
        match branch {
            Branch::One => (u, v),
            Branch::Two => (v, u),
        }
    }

    /// The same triangle seen from the adjacent one glued at the marked
    /// vertex, marked at the vertex receiving `u`: `(p + u, −u, v − u)`.
    pub fn adjacent(&self, branch: Branch) -> Self {
        let (u, v) = self.pair(branch);
        Self::new(self.p + u, -u, v - u)
    }

    pub fn to_json(&self) -> Value {
        json!({"p": complex_json(self.p), "e": complex_json(self.e), "f": complex_json(self.f)})
    }

    pub fn from_json(v: &Value) -> Result<Self, Tr3Error> {
        let get = |k: &str| -> Result<Complex64, Tr3Error> {
            let a = v
                .get(k)
                .and_then(Value::as_array)
                .filter(|a| a.len() == 2)
                .ok_or_else(|| Tr3Error::Parse(format!("field {k:?} must be [re, im]")))?;
            let num = |x: &Value| x.as_f64().ok_or_else(|| Tr3Error::Parse(format!("field {k:?} must hold numbers")));
            Ok(Complex64::new(num(&a[0])?, num(&a[1])?))
        };
        Ok(Self::new(get("p")?, get("e")?, get("f")?))
    }
}

/// Principal root with the cut on the negative real axis approached from
/// above, so that `√−4 = 2i` whatever the sign of the zero imaginary part.
pub fn principal_sqrt(d: Complex64) -> Complex64 {
    Complex64::new(d.re, if d.im == 0.0 { 0.0 } else { d.im }).sqrt()
}

/// `M(p, e, f) = ((2p + (e+f) − s)/2, ((e+f) − s)/2, −s)` for branch one,
/// `s ↦ −s` for branch two.
#[allow(non_snake_case)]
pub fn step_M(t: &MarkedTriangle, branch: Branch) -> MarkedTriangle {
    let b = t.e + t.f;
    let mut s = principal_sqrt(discriminant(t.e, t.f));
    if branch == Branch::Two {
        s = -s;
    }
    MarkedTriangle::new((2.0 * t.p + b - s) / 2.0, (b - s) / 2.0, -s)
}

/// A point `(p, e, f; x, y, z)` of `C³ × C³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrespondencePoint {
    pub input: MarkedTriangle,
    pub output: MarkedTriangle,
}

/// `e + f − y + (−y + z)`, `e² + f² + y² + (−y + z)²`, `x − (p + y)`.
pub fn correspondence_residual(pt: &CorrespondencePoint) -> [Complex64; 3] {
    let MarkedTriangle { p, e, f } = pt.input;
    let MarkedTriangle { p: x, e: y, f: z } = pt.output;
    [
        e + f - y + (-y + z),
        e * e + f * f + y * y + (-y + z) * (-y + z),
        x - (p + y),
    ]
}

/// The same system with the third equation written `p − (x + y)`, which is
/// the one satisfied by [`MarkedTriangle::adjacent`].
pub fn correspondence_residual_adjacent(pt: &CorrespondencePoint) -> [Complex64; 3] {
    let [a, b, _] = correspondence_residual(pt);
    [a, b, pt.input.p - (pt.output.p + pt.output.e)]
}

/// `solve_pair2` applied twice returns the original pair.
pub fn involution_check(e: Complex64, f: Complex64, tol: f64) -> bool {
    let [u, v] = solve_pair2(e, f);
    let back = solve_pair2(u, v);
    let scale = e.norm().max(f.norm()).max(1.0);
    multiset_distance(&back, &[e, f]) <= tol * scale
}

/// `|D| / (|e|² + |f|²)`, zero exactly on the two singular lines.
pub fn singular_locus_distance(e: Complex64, f: Complex64) -> Result<f64, Tr3Error> {
    let n2 = e.norm_sqr() + f.norm_sqr();
    if n2 == 0.0 {
        return Err(Tr3Error::ZeroClass);
    }
    Ok(discriminant(e, f).norm() / n2)
}

/// Chart coordinates `z = e/f` of the singular classes: the roots of
/// `3z² + 2z + 3`, `(−1 ∓ 2i√2)/3`. The first is the class of
/// `(1 − i√2, 1 + i√2)`.
pub fn singular_points() -> [Complex64; 2] {
    let r = 2.0 * 2f64.sqrt() / 3.0;
    [Complex64::new(-1.0 / 3.0, -r), Complex64::new(-1.0 / 3.0, r)]
}

/// A point of `CP¹`, stored as a representative `(e, f)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformalClass {
    pub e: Complex64,
    pub f: Complex64,
}

impl ConformalClass {
    pub fn new(e: Complex64, f: Complex64) -> Result<Self, Tr3Error> {
        if e.norm_sqr() + f.norm_sqr() == 0.0 {
            return Err(Tr3Error::ZeroClass);
        }
        Ok(Self { e, f })
    }

    /// `[z : 1]`.
    pub fn from_chart(z: Complex64) -> Self {
        Self {
            e: z,
            f: Complex64::new(1.0, 0.0),
        }
    }

    pub fn chart(&self) -> Option<Complex64> {
        (self.f.norm() > 0.0).then(|| self.e / self.f)
    }

    /// Representative of unit norm.
    pub fn normalized(&self) -> Self {
        let n = (self.e.norm_sqr() + self.f.norm_sqr()).sqrt();
        Self {
            e: self.e / n,
            f: self.f / n,
        }
    }

    /// Chordal distance on `CP¹`.
    pub fn distance(&self, other: &Self) -> f64 {
        let a = self.normalized();
        let b = other.normalized();
        (a.e * b.f - a.f * b.e).norm()
    }
}

/// `[e : f] ↦ [−u : v − u]`, the conformal class of the oscillation part of
/// the branch.
pub fn projective_step(c: &ConformalClass, branch: Branch) -> ConformalClass {
    let n = c.normalized();
    let t = MarkedTriangle::new(Complex64::new(0.0, 0.0), n.e, n.f);
    let (u, v) = t.pair(branch);
    ConformalClass { e: -u, f: v - u }
}

/// `3z⁴ − z³ + 2z² − 2z + 1`: in the chart `z = e/f` its roots are the
/// points fixed by one of the two branches.
pub fn fixed_point_quartic() -> [Complex64; 5] {
    [1.0, -2.0, 2.0, -1.0, 3.0].map(|c| Complex64::new(c, 0.0))
}

fn chart_map(z: Complex64, branch: Branch) -> Option<Complex64> {
    projective_step(&ConformalClass::from_chart(z), branch).chart()
}

/// Fixed points of the correspondence in the chart `z = e/f`, each with a
/// branch fixing it. Newton iteration on the branch-symmetric
/// `D(z, 1)·(F₁(z) − z)(F₂(z) − z)`, whose poles at the singular points are
/// cleared by the discriminant factor, deflated by the roots already found, from a
/// grid of starting points; a root is kept once `|F_b(z) − z| < 1e−12`.
pub fn fixed_points() -> Vec<(Complex64, Branch)> {
    let one = Complex64::new(1.0, 0.0);
    let g = |z: Complex64| {
        Some(discriminant(z, one) * (chart_map(z, Branch::One)? - z) * (chart_map(z, Branch::Two)? - z))
    };
    let mut found: Vec<(Complex64, Branch)> = Vec::new();
    let grid = (-8..=8).flat_map(|a| (-8..=8).map(move |b| Complex64::new(a as f64 * 0.25, b as f64 * 0.25)));
    for start in grid {
        let h = |z: Complex64| {
            let d: Complex64 = found.iter().map(|(r, _)| z - r).product();
            g(z).map(|v| v / d)
        };
        let mut z = start;
        for _ in 0..80 {
            let (Some(hz), Some(hh)) = (h(z), h(z + 1e-7)) else { break };
            let step = hz / ((hh - hz) / 1e-7);
            if !step.is_finite() {
                break;
            }
            z -= step;
            if step.norm() < 1e-15 {
                break;
            }
        }
        let fixed_by = [Branch::One, Branch::Two]
            .into_iter()
            .find(|&b| chart_map(z, b).is_some_and(|w| (w - z).norm() < 1e-12));
        if let Some(b) = fixed_by {
            if !found.iter().any(|(w, _)| (w - z).norm() < 1e-6) {
                found.push((z, b));
            }
        }
    }
    found.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    found
}

/// Roots of [`fixed_point_quartic`].
pub fn fixed_point_candidates() -> Vec<Complex64> {
    let q = fixed_point_quartic();
    let monic: Vec<Complex64> = q.iter().map(|c| c / q[4]).collect();
    find_roots(&monic).expect("quartic with simple roots")
}

/// Whether continuing the root pair around a loop swaps it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monodromy {
    Identity,
    Transposition,
}

/// Circle in the chart `z = e/f`, as `steps` points (closed implicitly).
pub fn circle_loop(centre: Complex64, radius: f64, steps: usize) -> Vec<Complex64> {
    (0..steps)
        .map(|k| centre + Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / steps as f64))
        .collect()
}

/// Continues `{u, v}` along the closed loop `[z_k : 1]` by nearest
/// matching. Each step must move both roots by less than a third of their
/// separation; otherwise the matching is ambiguous and a finer loop is
/// needed.
pub fn branch_monodromy(points: &[Complex64]) -> Result<Monodromy, Tr3Error> {
    if points.len() < 3 {
        return Err(Tr3Error::Ambiguous { step: 0 });
    }
    let pair = |z: Complex64| {
        MarkedTriangle::new(Complex64::new(0.0, 0.0), z, Complex64::new(1.0, 0.0)).pair(Branch::One)
    };
    let start = pair(points[0]);
    let mut cur = start;
    for (k, &z) in points.iter().chain(std::iter::once(&points[0])).enumerate().skip(1) {
        let (a, b) = pair(z);
        let keep = (a - cur.0).norm().max((b - cur.1).norm());
        let swap = (b - cur.0).norm().max((a - cur.1).norm());
        let next = if keep <= swap { (a, b) } else { (b, a) };
        let moved = keep.min(swap);
        if moved * 3.0 >= (cur.0 - cur.1).norm() {
            return Err(Tr3Error::Ambiguous { step: k });
        }
        cur = next;
    }
    let same = (cur.0 - start.0).norm() + (cur.1 - start.1).norm();
    let crossed = (cur.0 - start.1).norm() + (cur.1 - start.0).norm();
    Ok(if same <= crossed {
        Monodromy::Identity
    } else {
        Monodromy::Transposition
    })
}
