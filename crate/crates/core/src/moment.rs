//! Power-sum systems.
//!
//! Given oscillations `δ_1..δ_k` at a vertex, find `m` more so that
//! `Σ δ^p = 0` for `p = 1..=N`. The quadratic cases have closed forms; the
//! general determined case goes through Newton's identities and a
//! simultaneous-iteration root finder.

use std::cmp::Ordering;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::{j, j2};

/// Relative distance under which two computed roots count as one root of
/// higher multiplicity.
pub const CLUSTER_TOL: f64 = 1e-6;

/// Residual tolerance for the power-sum certificate, relative to the scale
/// `max(1, |δ|)^p` of each equation.
pub const RESIDUAL_TOL: f64 = 1e-9;

const MAX_ITER: usize = 500;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MomentError {
    #[error("root finder did not converge; residuals {residuals:?}")]
    NumericalFailure { residuals: Vec<f64> },
    #[error("invalid system: {0}")]
    Invalid(String),
}

/// The two oscillations completing `e` at a tripod vertex: `{je, j²e}`.
pub fn solve_pair(e: Complex64) -> [Complex64; 2] {
    [j() * e, j2() * e]
}

/// Roots of `u² + (e+f)u + (e² + f² + ef) = 0`, so that
/// `e + f + u + v = e² + f² + u² + v² = 0`.
pub fn solve_pair2(e: Complex64, f: Complex64) -> [Complex64; 2] {
    let b = e + f;
    let c = e * e + f * f + e * f;
    let s = discriminant(e, f).sqrt();
    // pick the sign that avoids cancellation in b ± s
    let s = if (b.conj() * s).re < 0.0 { -s } else { s };
    let q = -(b + s) / 2.0;
    if q == Complex64::new(0.0, 0.0) {
        return [q, q];
    }
    [q, c / q]
}

/// `−3(e² + f²) − 2ef`; vanishes exactly when the two roots coincide.
pub fn discriminant(e: Complex64, f: Complex64) -> Complex64 {
    -3.0 * (e * e + f * f) - 2.0 * e * f
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Shape {
    Determined,
    Underdetermined,
    Overdetermined,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentSystem {
    pub given: Vec<Complex64>,
    pub unknown_count: usize,
    pub order: u32,
}

impl MomentSystem {
    pub fn new(given: Vec<Complex64>, unknown_count: usize, order: u32) -> Result<Self, MomentError> {
        if order == 0 {
            return Err(MomentError::Invalid("order must be at least 1".into()));
        }
        Ok(Self {
            given,
            unknown_count,
            order,
        })
    }

    /// `s_p = −Σ δ_i^p` over the given oscillations, `p = 1..=N`.
    pub fn targets(&self) -> Vec<Complex64> {
        (1..=self.order)
            .map(|p| -self.given.iter().map(|d| d.powu(p)).sum::<Complex64>())
            .collect()
    }

    pub fn shape(&self) -> Shape {
        match (self.order as usize).cmp(&self.unknown_count) {
            Ordering::Equal => Shape::Determined,
            Ordering::Less => Shape::Underdetermined,
            Ordering::Greater => Shape::Overdetermined,
        }
    }

    fn scale(&self) -> f64 {
        self.given.iter().map(|d| d.norm()).fold(1.0, f64::max)
    }

    /// `|Σ_given δ^p + Σ_roots u^p|` for `p = 1..=N`.
    pub fn residuals(&self, roots: &[Complex64]) -> Vec<f64> {
        (1..=self.order)
            .map(|p| {
                self.given
                    .iter()
                    .chain(roots)
                    .map(|d| d.powu(p))
                    .sum::<Complex64>()
                    .norm()
            })
            .collect()
    }

    fn certified(&self, residuals: &[f64], roots: &[Complex64]) -> bool {
        let scale = roots.iter().map(|d| d.norm()).fold(self.scale(), f64::max);
        let count = (self.given.len() + roots.len()).max(1) as f64;
        residuals
            .iter()
            .zip(1..)
            .all(|(&r, p)| r <= RESIDUAL_TOL * count * scale.powi(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolutionKind {
    UniqueUpToPermutation,
    Parametrized,
    Infeasible,
    TrivialZero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSet {
    pub kind: SolutionKind,
    /// Empty when infeasible.
    pub roots: Vec<Complex64>,
    /// Power-sum residuals of the returned roots (of the best attempt when
    /// infeasible).
    pub residuals: Vec<f64>,
}

/// How unknowns beyond the first `N` are fixed in the underdetermined case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fill {
    #[default]
    Zero,
    /// Standard complex normal draws scaled by the size of the given data.
    Seeded(u64),
}

pub fn solve_power_sums(sys: &MomentSystem) -> Result<SolutionSet, MomentError> {
    solve_power_sums_with(sys, Fill::Zero)
}

/// Determined systems are solved outright. Underdetermined ones fix the
/// last `m − N` unknowns by `fill` first. Overdetermined ones solve the
/// first `m` equations and then require the rest to hold as well.
pub fn solve_power_sums_with(sys: &MomentSystem, fill: Fill) -> Result<SolutionSet, MomentError> {
    let m = sys.unknown_count;
    let n = sys.order as usize;
    let targets = sys.targets();
    match sys.shape() {
        Shape::Determined => {
            let roots = roots_from_power_sums(&targets)?;
            finish(sys, roots, SolutionKind::UniqueUpToPermutation)
        }
        Shape::Underdetermined => {
            let extra = fill_values(sys, m - n, fill);
            let mut given = sys.given.clone();
            given.extend(&extra);
            let sub = MomentSystem::new(given, n, sys.order)?;
            let mut roots = roots_from_power_sums(&sub.targets())?;
            roots.extend(extra);
            finish(sys, roots, SolutionKind::Parametrized)
        }
        Shape::Overdetermined => {
            let roots = roots_from_power_sums(&targets[..m])?;
            let residuals = sys.residuals(&roots);
            if !sys.certified(&residuals, &roots) {
                return Ok(SolutionSet {
                    kind: SolutionKind::Infeasible,
                    roots: Vec::new(),
                    residuals,
                });
            }
            let scale = sys.scale();
            let vanish = targets
                .iter()
                .zip(1..)
                .all(|(t, p)| t.norm() <= RESIDUAL_TOL * scale.powi(p));
            let kind = if vanish {
                SolutionKind::TrivialZero
            } else {
                SolutionKind::UniqueUpToPermutation
            };
            Ok(SolutionSet {
                kind,
                roots,
                residuals,
            })
        }
    }
}

fn finish(sys: &MomentSystem, mut roots: Vec<Complex64>, kind: SolutionKind) -> Result<SolutionSet, MomentError> {
    sort_roots(&mut roots);
    let residuals = sys.residuals(&roots);
    if !sys.certified(&residuals, &roots) {
        return Err(MomentError::NumericalFailure { residuals });
    }
    Ok(SolutionSet {
        kind,
        roots,
        residuals,
    })
}

fn fill_values(sys: &MomentSystem, count: usize, fill: Fill) -> Vec<Complex64> {
    match fill {
        Fill::Zero => vec![Complex64::new(0.0, 0.0); count],
        Fill::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let scale = sys.scale();
            (0..count)
                .map(|_| {
                    let z: Complex64 = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                    z * (2.0 * scale)
                })
                .collect()
        }
    }
}

/// Elementary symmetric polynomials `e_0..e_m` from power sums `s_1..s_m`:
/// `k e_k = Σ_{i=1..k} (−1)^{i−1} e_{k−i} s_i`.
pub fn elementary_from_power_sums(s: &[Complex64]) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(1.0, 0.0)];
    for k in 1..=s.len() {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 1..=k {
            let term = e[k - i] * s[i - 1];
            acc += if i % 2 == 1 { term } else { -term };
        }
        e.push(acc / k as f64);
    }
    e
}

/// Monic polynomial (ascending coefficients) whose roots have power sums
/// `s_1..s_m`.
pub fn polynomial_from_power_sums(s: &[Complex64]) -> Vec<Complex64> {
    let e = elementary_from_power_sums(s);
    let m = s.len();
    // t^m − e1 t^{m−1} + e2 t^{m−2} − …
    (0..=m)
        .map(|deg| {
            let k = m - deg;
            if k % 2 == 0 {
                e[k]
            } else {
                -e[k]
            }
        })
        .collect()
}

fn roots_from_power_sums(s: &[Complex64]) -> Result<Vec<Complex64>, MomentError> {
    match s.len() {
        0 => Ok(Vec::new()),
        1 => Ok(vec![s[0]]),
        2 => {
            // u + v = s1, u² + v² = s2
            let sum = s[0];
            let prod = (s[0] * s[0] - s[1]) / 2.0;
            Ok(quadratic(-sum, prod).to_vec())
        }
        _ => find_roots(&polynomial_from_power_sums(s)),
    }
}

/// Roots of `t² + bt + c`, cancellation-free.
fn quadratic(b: Complex64, c: Complex64) -> [Complex64; 2] {
    let s = (b * b - 4.0 * c).sqrt();
    let s = if (b.conj() * s).re < 0.0 { -s } else { s };
    let q = -(b + s) / 2.0;
    if q == Complex64::new(0.0, 0.0) {
        return [q, q];
    }
    [q, c / q]
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots, with multiplicity, of a monic polynomial given by ascending
/// coefficients `c_0, …, c_{m−1}, 1`.
///
/// Aberth–Ehrlich iteration from points on a circle of the Fujiwara radius.
/// Roots closer than [`CLUSTER_TOL`] (relative) are merged into a cluster
/// and replaced by its centroid, which restores accuracy at multiple roots.
pub fn find_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>, MomentError> {
    let m = coeffs.len().checked_sub(1).filter(|&m| m >= 1).ok_or_else(|| {
        MomentError::Invalid("polynomial must have degree at least 1".into())
    })?;
    if (coeffs[m] - 1.0).norm() > 1e-12 {
        return Err(MomentError::Invalid("polynomial must be monic".into()));
    }
    if m == 1 {
        return Ok(vec![-coeffs[0]]);
    }

    let radius = (0..m)
        .map(|k| {
            let c = coeffs[k].norm();
            if k == 0 {
                (c / 2.0).powf(1.0 / m as f64)
            } else {
                c.powf(1.0 / (m - k) as f64)
            }
        })
        .fold(0.0, f64::max)
        * 2.0;
    if radius == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); m]);
    }
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / m as f64 + 0.4))
        .collect();

    let mut converged = false;
    for _ in 0..MAX_ITER {
        let mut biggest = 0.0_f64;
        for k in 0..m {
            let (p, dp) = horner(coeffs, z[k]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let repel: Complex64 = (0..m)
                .filter(|&i| i != k)
                .map(|i| {
                    let d = z[k] - z[i];
                    if d == Complex64::new(0.0, 0.0) {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = ratio / (1.0 - ratio * repel);
            if step.is_finite() {
                z[k] -= step;
                biggest = biggest.max(step.norm() / z[k].norm().max(radius * 1e-3));
            }
        }
        if biggest < 1e-15 {
            converged = true;
            break;
        }
    }

    let roots = cluster(coeffs, &z, radius);
    let residuals: Vec<f64> = roots.iter().map(|&r| horner(coeffs, r).0.norm()).collect();
    let ok = roots.iter().zip(&residuals).all(|(&r, &res)| {
        let size: f64 = coeffs.iter().enumerate().map(|(k, c)| c.norm() * r.norm().powi(k as i32)).sum();
        res <= 1e-9 * size.max(f64::MIN_POSITIVE)
    });
    if !ok || (!converged && roots.iter().any(|r| !r.is_finite())) {
        return Err(MomentError::NumericalFailure { residuals });
    }
    Ok(roots)
}

fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
}

fn cluster(coeffs: &[Complex64], z: &[Complex64], radius: f64) -> Vec<Complex64> {
    let m = z.len();
    let mut label: Vec<usize> = (0..m).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for a in 0..m {
        for b in a + 1..m {
            let scale = z[a].norm().max(z[b].norm()).max(radius * 1e-3);
            if (z[a] - z[b]).norm() <= CLUSTER_TOL * scale {
                let (ra, rb) = (find(&mut label, a), find(&mut label, b));
                label[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut out = z.to_vec();
    for i in 0..m {
        let r = find(&mut label, i);
        let members: Vec<usize> = (0..m).filter(|&k| find(&mut label, k) == r).collect();
        let centroid = members.iter().map(|&k| z[k]).sum::<Complex64>() / members.len() as f64;
        out[i] = if members.len() == 1 {
            centroid
        } else {
            polish_multiple(coeffs, centroid, members.len())
        };
    }
    out
}

/// A root of multiplicity `k` is a simple root of the `(k−1)`-th derivative;
/// a few Newton steps there recover full accuracy.
fn polish_multiple(coeffs: &[Complex64], start: Complex64, k: usize) -> Complex64 {
    let mut d = coeffs.to_vec();
    for _ in 1..k {
        d = derivative(&d);
    }
    let mut z = start;
    for _ in 0..8 {
        let (p, dp) = horner(&d, z);
        let step = p / dp;
        if !step.is_finite() || step.norm() > 1e-3 * z.norm().max(1.0) {
            break;
        }
        z -= step;
    }
    z
}

fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Smallest total distance over all matchings of two multisets; permutation
/// search for sizes up to 8, greedy beyond.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    if a.len() > 8 {
        let mut rest = b.to_vec();
        let mut worst = 0.0_f64;
        for x in a {
            let (i, d) = rest
                .iter()
                .enumerate()
                .map(|(i, y)| (i, (x - y).norm()))
                .min_by(|p, q| p.1.total_cmp(&q.1))
                .expect("same length");
            worst = worst.max(d);
            rest.swap_remove(i);
        }
        return worst;
    }
    fn go(a: &[Complex64], b: &mut Vec<Complex64>, acc: f64, best: &mut f64) {
        if acc >= *best {
            return;
        }
        let Some((x, tail)) = a.split_first() else {
            *best = acc;
            return;
        };
        for i in 0..b.len() {
            let y = b.swap_remove(i);
            go(tail, b, acc.max((x - y).norm()), best);
            b.push(y);
            let last = b.len() - 1;
            b.swap(i, last);
        }
    }
    let mut best = f64::INFINITY;
    go(a, &mut b.to_vec(), 0.0, &mut best);
    best
}
