//! The constraint sphere of a conjugate gradient at one vertex.
//!
//! For `δ = ∇_s f` with `n` entries, `∇_s g` must lie on
//! `{a : Σa_i = 0, ⟨a, δ⟩ = 0, ‖a‖ = ‖δ‖}`, an `(n−3)`-sphere when `δ ≠ 0`.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::ConjugateError;
use crate::graph::RealVertexFunction;

const REL_TOL: f64 = 1e-9;
const ABS_TOL: f64 = 1e-12;

/// Image of the constraint sphere under one coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Projection {
    /// `[−α, α]`, for `n ≥ 4`.
    Interval(f64),
    /// `{−α, α}`, for `n = 3`.
    Points(f64),
}

impl Projection {
    pub fn alpha(&self) -> f64 {
        match *self {
            Self::Interval(a) | Self::Points(a) => a,
        }
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        match *self {
            Self::Interval(a) => x.abs() <= a + tol,
            Self::Points(a) => (x.abs() - a).abs() <= tol,
        }
    }
}

/// `α = √((n−1)/n·‖δ‖² − δ_k²)`; for `‖δ‖ = 1` this is `√((n−1)/n − δ_k²)`.
/// Evaluated as `√(Σ_{i<j; i,j≠k} (δ_i − δ_j)² / n)`, which agrees when
/// `Σδ = 0`. `k` is zero-based.
pub fn projection_range(delta: &[f64], k: usize) -> Result<Projection, ConjugateError> {
    let n = delta.len();
    if n < 3 {
        return Err(ConjugateError::Precondition(format!("valency {n} is below 3")));
    }
    if k >= n {
        return Err(ConjugateError::Precondition(format!("coordinate {k} out of range for valency {n}")));
    }
    let norm2: f64 = delta.iter().map(|d| d * d).sum();
    let sum: f64 = delta.iter().sum();
    if sum.abs() > REL_TOL * norm2.sqrt() + ABS_TOL {
        return Err(ConjugateError::Precondition(format!("oscillations sum to {sum:e}, not 0")));
    }
    // equal to (n−1)/n·‖δ‖² − δ_k² when Σδ = 0, without the cancellation
    let others: Vec<f64> = delta.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &d)| d).collect();
    let mut spread = 0.0;
    for (i, a) in others.iter().enumerate() {
        for b in &others[i + 1..] {
            spread += (a - b) * (a - b);
        }
    }
    let alpha = (spread / n as f64).sqrt();
    Ok(if n == 3 {
        Projection::Points(alpha)
    } else {
        Projection::Interval(alpha)
    })
}

/// How the free part of a sphere point is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Completion {
    /// The minimum-norm point of the linear slice, pushed onto the sphere
    /// along the first standard basis vector not in the constraint span
    /// (after orthogonalisation), in its positive direction.
    #[default]
    Deterministic,
    /// Uniform on the feasible sphere.
    Seeded(u64),
}

pub(crate) enum Picker {
    Deterministic,
    Random(ChaCha8Rng),
}

impl Picker {
    pub(crate) fn new(mode: Completion) -> Self {
        match mode {
            Completion::Deterministic => Self::Deterministic,
            Completion::Seeded(seed) => Self::Random(ChaCha8Rng::seed_from_u64(seed)),
        }
    }

    fn direction(&mut self, basis: &[DVector<f64>]) -> Option<DVector<f64>> {
        let first = basis.first()?;
        match self {
            Self::Deterministic => Some(first.clone()),
            Self::Random(rng) => loop {
                let mut v = DVector::zeros(first.len());
                for b in basis {
                    let c: f64 = StandardNormal.sample(rng);
                    v += b * c;
                }
                let n = v.norm();
                if n > 1e-12 {
                    return Some(v / n);
                }
            },
        }
    }
}

/// Orthonormalises `vectors` in order, dropping those within `tol` of the
/// span of their predecessors.
pub(crate) fn orthonormalize(vectors: impl IntoIterator<Item = DVector<f64>>, base: &[DVector<f64>], tol: f64) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = base.to_vec();
    let skip = out.len();
    for mut v in vectors {
        for _ in 0..2 {
            for q in &out {
                let c = q.dot(&v);
                v -= q * c;
            }
        }
        let n = v.norm();
        if n > tol {
            out.push(v / n);
        }
    }
    out.split_off(skip)
}

/// Why a slice point could not be placed on the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum SliceError {
    /// The linear constraints contradict each other by this much.
    Inconsistent(f64),
    /// The minimum-norm slice point is outside the sphere, or inside it
    /// with no room to reach it.
    OffSphere { slice_norm: f64, radius: f64 },
}

/// A point `a` with `⟨a, c_i⟩ = t_i` for every constraint and `‖a‖ = radius`.
pub(crate) fn sphere_point(
    n: usize,
    constraints: &[(DVector<f64>, f64)],
    radius: f64,
    picker: &mut Picker,
) -> Result<DVector<f64>, SliceError> {
    let scale = radius.max(constraints.iter().map(|c| c.1.abs()).fold(0.0, f64::max));
    let tol = REL_TOL * scale + ABS_TOL;
    let mut qs: Vec<DVector<f64>> = Vec::new();
    let mut taus: Vec<f64> = Vec::new();
    for (c, t) in constraints {
        let mut r = c.clone();
        let mut target = *t;
        for (q, tau) in qs.iter().zip(&taus) {
            let k = q.dot(c);
            r -= q * k;
            target -= k * tau;
        }
        let rn = r.norm();
        if rn <= 1e-10 * c.norm().max(1e-300) {
            if target.abs() > tol {
                return Err(SliceError::Inconsistent(target.abs()));
            }
            continue;
        }
        qs.push(r / rn);
        taus.push(target / rn);
    }
    let mut b0 = DVector::zeros(n);
    for (q, tau) in qs.iter().zip(&taus) {
        b0 += q * *tau;
    }
    let slack = radius * radius - b0.norm_squared();
    let sq_tol = REL_TOL * scale * scale + ABS_TOL * ABS_TOL;
    let null = orthonormalize((0..n).map(|i| DVector::from_fn(n, |r, _| (r == i) as u8 as f64)), &qs, 1e-8);
    let off = || SliceError::OffSphere {
        slice_norm: b0.norm(),
        radius,
    };
    if slack < -sq_tol {
        return Err(off());
    }
    let w = slack.max(0.0).sqrt();
    match picker.direction(&null) {
        Some(d) => Ok(b0 + d * w),
        None if slack <= sq_tol => Ok(b0),
        None => Err(off()),
    }
}

pub(crate) fn complete_gradient(
    delta: &[f64],
    fixed: Option<(usize, f64)>,
    picker: &mut Picker,
) -> Result<Vec<f64>, SliceError> {
    let n = delta.len();
    let radius = delta.iter().map(|d| d * d).sum::<f64>().sqrt();
    let mut cons = Vec::with_capacity(3);
    if let Some((k, a1)) = fixed {
        cons.push((DVector::from_fn(n, |r, _| (r == k) as u8 as f64), a1));
    }
    cons.push((DVector::from_element(n, 1.0), 0.0));
    cons.push((DVector::from_column_slice(delta), 0.0));
    sphere_point(n, &cons, radius, picker).map(|a| a.iter().copied().collect())
}

/// Completes `∇_s g` given its component `a1` along the edge to `neighbor`.
/// The result is ordered like the neighbours of `s`.
pub fn conjugate_step(
    f: &RealVertexFunction,
    s: usize,
    neighbor: usize,
    a1: f64,
    mode: Completion,
) -> Result<Vec<f64>, ConjugateError> {
    let delta = f.gradient(s)?;
    let k = f
        .graph()
        .neighbors(s)
        .iter()
        .position(|&t| t == neighbor)
        .ok_or_else(|| ConjugateError::Precondition(format!("{} is not adjacent to {}", f.graph().id(neighbor), f.graph().id(s))))?;
    let alpha = projection_range(&delta, k)?.alpha();
    let infeasible = || ConjugateError::Infeasible {
        vertex: f.graph().id(s).to_string(),
        alpha,
        a1,
    };
    if a1.abs() > alpha + REL_TOL * alpha.max(a1.abs()) + ABS_TOL {
        return Err(infeasible());
    }
    complete_gradient(&delta, Some((k, a1)), &mut Picker::new(mode)).map_err(|_| infeasible())
}
