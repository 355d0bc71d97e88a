//! Bounded nonconstant holomorphic functions on the valency-4 tree.
//!
//! With one oscillation `δ₁ = −1` given, the other three can be taken as
//! `r₁e^{iθ}, r₁e^{−iθ}, r₂` when `2r₁cos θ + r₂ = 1` and
//! `2r₁²cos 2θ + r₂² = −1`. Solutions with `r₁, r₂ < 1` make oscillations
//! shrink geometrically along every path from the centre.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ConjugateError;
use crate::graph::VertexFunction;
use crate::tree::TreeBall;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contraction {
    pub r1: f64,
    pub r2: f64,
    pub theta: f64,
    pub residuals: [f64; 2],
}

impl Contraction {
    pub fn ratio(&self) -> f64 {
        self.r1.max(self.r2)
    }

    /// Outgoing oscillations for incoming `δ₁`.
    pub fn outgoing(&self, delta1: Complex64) -> [Complex64; 3] {
        let l = -delta1;
        [
            l * Complex64::from_polar(self.r1, self.theta),
            l * Complex64::from_polar(self.r1, -self.theta),
            l * self.r2,
        ]
    }
}

pub fn contraction_residuals(r1: f64, r2: f64, theta: f64) -> [f64; 2] {
    [
        2.0 * r1 * theta.cos() + r2 - 1.0,
        2.0 * r1 * r1 * (2.0 * theta).cos() + r2 * r2 + 1.0,
    ]
}

/// Continues the solution `(r₁, θ) = (1, π/2)` at `r₂ = 1` down to
/// `r₂ = target`, with Newton corrections in `(r₁, θ)` at every step.
pub fn solve_contraction(target: f64) -> Result<Contraction, ConjugateError> {
    if !(0.0 < target && target < 1.0) {
        return Err(ConjugateError::Precondition(format!("target r2 = {target} outside (0, 1)")));
    }
    let steps = 64;
    let (mut r1, mut theta) = (1.0f64, std::f64::consts::FRAC_PI_2);
    for k in 1..=steps {
        let r2 = 1.0 + (target - 1.0) * k as f64 / steps as f64;
        for _ in 0..50 {
            let [f1, f2] = contraction_residuals(r1, r2, theta);
            let j11 = 2.0 * theta.cos();
            let j12 = -2.0 * r1 * theta.sin();
            let j21 = 4.0 * r1 * (2.0 * theta).cos();
            let j22 = -4.0 * r1 * r1 * (2.0 * theta).sin();
            let det = j11 * j22 - j12 * j21;
            if det.abs() < 1e-14 {
                return Err(ConjugateError::Numerical("singular Jacobian during continuation".into()));
            }
            let d1 = (f1 * j22 - f2 * j12) / det;
            let d2 = (j11 * f2 - j21 * f1) / det;
            r1 -= d1;
            theta -= d2;
            if d1.abs().max(d2.abs()) < 1e-15 {
                break;
            }
        }
    }
    let residuals = contraction_residuals(r1, target, theta);
    let c = Contraction { r1, r2: target, theta, residuals };
    if residuals.iter().any(|r| r.abs() > 1e-10) || !(0.0 < r1 && r1 < 1.0) {
        return Err(ConjugateError::Numerical(format!("continuation ended at {c:?}")));
    }
    Ok(c)
}

#[derive(Debug, Clone)]
pub struct BoundedHolomorphic {
    pub ball: Arc<TreeBall>,
    pub function: VertexFunction,
    pub contraction: Contraction,
    /// Oscillation along the first edge at the centre.
    pub delta0: Complex64,
}

impl BoundedHolomorphic {
    /// Largest `|δ|` over edges leaving vertices at depth `d`.
    pub fn max_oscillation_at_depth(&self, d: usize) -> f64 {
        let mut m = 0.0f64;
        for v in 0..self.ball.len() {
            if self.ball.depth(v) != d {
                continue;
            }
            let z = self.function.value(v).unwrap_or_default();
            for &c in self.ball.children(v) {
                m = m.max((self.function.value(c).unwrap_or_default() - z).norm());
            }
        }
        m
    }

    /// `|φ(O)| + |δ₀|/(1 − r)`.
    pub fn sup_bound(&self) -> f64 {
        let o = self.ball.centre().expect("vertex centred");
        self.function.value(o).unwrap_or_default().norm() + self.delta0.norm() / (1.0 - self.contraction.ratio())
    }
}

/// The `r₂ = 1/2` member of the family, where `max(r₁, r₂) = √3/2`.
pub const DEFAULT_R2: f64 = 0.5;

/// `φ(O) = 0`, `|δ₀| = 1` in a seeded direction, and at every other vertex
/// the incoming oscillation `δ₁` is continued by [`Contraction::outgoing`].
pub fn bounded_holomorphic_t4(radius: usize, seed: u64) -> Result<BoundedHolomorphic, ConjugateError> {
    if radius == 0 {
        return Err(ConjugateError::Precondition("radius must be at least 1".into()));
    }
    let c = solve_contraction(DEFAULT_R2)?;
    let ball = Arc::new(TreeBall::vertex_centred(4, radius));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let delta0 = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    let mut values = vec![Complex64::default(); ball.len()];
    let o = ball.centre().expect("vertex centred");
    let ch = ball.children(o);
    values[ch[0]] = delta0;
    for (&t, d) in ch[1..].iter().zip(c.outgoing(delta0)) {
        values[t] = d;
    }
    for v in 0..ball.len() {
        let Some(p) = ball.pred(v) else { continue };
        let delta1 = values[p] - values[v];
        for (&t, d) in ball.children(v).iter().zip(c.outgoing(delta1)) {
            values[t] = values[v] + d;
        }
    }
    let function = VertexFunction::total(Arc::clone(ball.graph()), values)?.with_boundary(ball.boundary_mask())?;
    Ok(BoundedHolomorphic { ball, function, contraction: c, delta0 })
}
