use std::collections::HashMap;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::T3Error;
use crate::eisenstein::Eisenstein;
use crate::graph::VertexFunction;
use crate::moment::{solve_power_sums, MomentSystem, SolutionKind};
use crate::tree::{Address, TreeBall};
use crate::{j, j2};

pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 16;

/// Per-vertex bijections from child letters onto the outgoing multipliers,
/// stored as permutations: child `l` of `S` gets multiplier `perm[l]`.
/// On `T₃` the identity is `a ↦ −j, b ↦ −j²`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChoiceAssignment {
    entries: HashMap<Address, Vec<usize>>,
    fallback: Option<Vec<usize>>,
}

impl ChoiceAssignment {
    /// No entries at all; every lookup fails.
    pub fn empty() -> Self {
        Self::default()
    }

    /// The same permutation at every vertex.
    pub fn constant(perm: Vec<usize>) -> Self {
        Self {
            entries: HashMap::new(),
            fallback: Some(perm),
        }
    }

    /// Identity everywhere: the canonical extension.
    pub fn canonical(arity: usize) -> Self {
        Self::constant((0..arity).collect())
    }

    pub fn set(&mut self, address: Address, perm: Vec<usize>) {
        self.entries.insert(address, perm);
    }

    pub fn get(&self, address: &Address) -> Option<&[usize]> {
        self.entries
            .get(address)
            .or(self.fallback.as_ref())
            .map(Vec::as_slice)
    }

    /// One switch per interior vertex of a `T₃` ball, in ball order; `true`
    /// swaps `a` and `b`.
    pub fn from_bits(ball: &TreeBall, bits: impl IntoIterator<Item = bool>) -> Self {
        let mut out = Self::empty();
        for (v, swap) in ball.interior().zip(bits) {
            out.set(ball.address(v).clone(), if swap { vec![1, 0] } else { vec![0, 1] });
        }
        out
    }

    /// Uniformly random permutation at every interior vertex.
    pub fn random(ball: &TreeBall, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let arity = ball.valency() - 1;
        let mut out = Self::empty();
        for v in ball.interior() {
            let mut perm: Vec<usize> = (0..ball.children(v).len().max(arity)).collect();
            perm.shuffle(&mut rng);
            out.set(ball.address(v).clone(), perm);
        }
        out
    }
}

/// A function on a tree ball. `exact` carries Eisenstein values when the
/// data on the root edge are Eisenstein integers.
#[derive(Debug, Clone)]
pub struct TreeFunction {
    pub ball: Arc<TreeBall>,
    pub function: VertexFunction,
    pub exact: Option<Vec<Eisenstein>>,
}

impl TreeFunction {
    pub fn value(&self, v: usize) -> Complex64 {
        self.function.value(v).expect("tree functions are total")
    }
}

fn extend_values<T>(ball: &TreeBall, alpha: T, beta: T, mult: &[T], choices: &ChoiceAssignment) -> Result<Vec<T>, T3Error>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let (o1, o) = ball.root_edge().ok_or(T3Error::NotEdgeCentred)?;
    let mut values = vec![alpha; ball.len()];
    values[o] = beta;
    values[o1] = alpha;
    // balls are stored depth-sorted, so predecessors come first
    for v in 0..ball.len() {
        let kids = ball.children(v);
        if kids.is_empty() {
            continue;
        }
        let address = ball.address(v);
        let perm = choices
            .get(address)
            .ok_or_else(|| T3Error::MissingChoice(address.to_string()))?;
        if !is_permutation(perm, mult.len()) || kids.len() != mult.len() {
            return Err(T3Error::BadChoice {
                address: address.to_string(),
                arity: mult.len(),
            });
        }
        let p = ball.pred(v).expect("edge-centred balls have predecessors");
        let d = values[v] - values[p];
        for (l, &c) in kids.iter().enumerate() {
            values[c] = values[v] + mult[perm[l]] * d;
        }
    }
    Ok(values)
}

fn is_permutation(perm: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    perm.len() == n && perm.iter().all(|&k| k < n && !std::mem::replace(&mut seen[k], true))
}

fn exact_pair(alpha: Complex64, beta: Complex64) -> Option<(Eisenstein, Eisenstein)> {
    let (a, da) = Eisenstein::nearest_integer(alpha);
    let (b, db) = Eisenstein::nearest_integer(beta);
    (da < 1e-12 && db < 1e-12).then_some((a, b))
}

/// Extension on an edge-centred `T₃` ball with `φ(O′) = alpha`,
/// `φ(O) = beta`.
pub fn extend_on(
    ball: Arc<TreeBall>,
    alpha: Complex64,
    beta: Complex64,
    choices: &ChoiceAssignment,
) -> Result<TreeFunction, T3Error> {
    assert_eq!(ball.valency(), 3, "extend_on works on T₃; use nholo_extend otherwise");
    let values = extend_values(&ball, alpha, beta, &[-j(), -j2()], choices)?;
    let exact = match exact_pair(alpha, beta) {
        Some((a, b)) => Some(extend_values(
            &ball,
            a,
            b,
            &[-Eisenstein::J, -Eisenstein::J2],
            choices,
        )?),
        None => None,
    };
    let function = VertexFunction::total(Arc::clone(ball.graph()), values)?.with_boundary(ball.boundary_mask())?;
    Ok(TreeFunction {
        ball,
        function,
        exact,
    })
}

pub fn extend_rooted(
    alpha: Complex64,
    beta: Complex64,
    radius: usize,
    choices: &ChoiceAssignment,
) -> Result<TreeFunction, T3Error> {
    extend_on(Arc::new(TreeBall::rooted(3, radius)), alpha, beta, choices)
}

pub fn extend_full(
    alpha: Complex64,
    beta: Complex64,
    radius: usize,
    choices: &ChoiceAssignment,
) -> Result<TreeFunction, T3Error> {
    extend_on(Arc::new(TreeBall::full(3, radius)), alpha, beta, choices)
}

/// `Φ`: constant choices `a ↦ −j, b ↦ −j²` on the full tree.
pub fn canonical_phi(alpha: Complex64, beta: Complex64, radius: usize) -> TreeFunction {
    extend_full(alpha, beta, radius, &ChoiceAssignment::canonical(2)).expect("canonical choices cover every vertex")
}

/// `w + α₀w + α₁α₀w + … + (α_{n−1}⋯α₀)w`: the value at the end of a
/// geodesic of length `n` from `O` when `φ(O′) = 0`.
pub fn chain_eval<T>(w: T, alphas: &[T]) -> T
where
    T: Copy + Add<Output = T> + Mul<Output = T>,
{
    let mut term = w;
    let mut sum = w;
    for &a in alphas {
        term = a * term;
        sum = sum + term;
    }
    sum
}

/// Reads the choice assignment back off a nonconstant `T₃` extension.
pub fn choices_of(f: &TreeFunction) -> ChoiceAssignment {
    let ball = &f.ball;
    let mut out = ChoiceAssignment::empty();
    for v in ball.interior() {
        let p = ball.pred(v).expect("edge-centred");
        let d = f.value(v) - f.value(p);
        let first = f.value(ball.children(v)[0]) - f.value(v);
        let swap = (first - (-j() * d)).norm() > (first - (-j2() * d)).norm();
        out.set(ball.address(v).clone(), if swap { vec![1, 0] } else { vec![0, 1] });
    }
    out
}

/// Every extension on the rooted ball of the given radius, one per choice
/// assignment, in the order of [`ChoiceAssignment::from_bits`] over the
/// binary expansion of `0..2^interior`.
pub fn enumerate_holomorphic(
    alpha: Complex64,
    beta: Complex64,
    radius: usize,
    cap: u64,
) -> Result<Vec<(ChoiceAssignment, TreeFunction)>, T3Error> {
    let interior = (1u64 << radius.min(63)) - 1;
    if radius >= 63 || interior >= 63 || (1u64 << interior) > cap {
        return Err(T3Error::TooLarge {
            log2: interior,
            cap,
        });
    }
    let ball = Arc::new(TreeBall::rooted(3, radius));
    (0..1u64 << interior)
        .map(|mask| {
            let choices = ChoiceAssignment::from_bits(&ball, (0..interior).map(|k| mask >> k & 1 == 1));
            let f = extend_on(Arc::clone(&ball), alpha, beta, &choices)?;
            Ok((choices, f))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub enum Constrained {
    Function(TreeFunction),
    /// The power-sum system had no solution at this vertex.
    Infeasible { at: String, residuals: Vec<f64> },
}

/// Extension on the rooted `T₃` ball where each step asks the power-sum
/// solver for two oscillations making `Σδ^p = 0` for `p = 1..=order`.
pub fn constrained_extension(
    alpha: Complex64,
    beta: Complex64,
    radius: usize,
    order: u32,
) -> Result<Constrained, T3Error> {
    let ball = Arc::new(TreeBall::rooted(3, radius));
    let (o1, o) = ball.root_edge().expect("rooted balls have a root edge");
    let mut values = vec![alpha; ball.len()];
    values[o] = beta;
    values[o1] = alpha;
    for v in 0..ball.len() {
        let kids = ball.children(v);
        if kids.is_empty() {
            continue;
        }
        let p = ball.pred(v).expect("edge-centred");
        let sys = MomentSystem::new(vec![values[p] - values[v]], kids.len(), order)?;
        let sol = solve_power_sums(&sys)?;
        if sol.kind == SolutionKind::Infeasible {
            return Ok(Constrained::Infeasible {
                at: ball.address(v).to_string(),
                residuals: sol.residuals,
            });
        }
        for (&c, r) in kids.iter().zip(sol.roots) {
            values[c] = values[v] + r;
        }
    }
    let function = VertexFunction::total(Arc::clone(ball.graph()), values)?.with_boundary(ball.boundary_mask())?;
    Ok(Constrained::Function(TreeFunction {
        ball,
        function,
        exact: None,
    }))
}

/// Outgoing multipliers for `N`-holomorphic extension on `T_{N+1}`.
///
/// They complete the incoming oscillation `e = −1` to a set whose power
/// sums vanish up to order `N`, obtained from the power-sum solver and
/// ordered by the argument of `δ/e` in `[0, 2π)`. They come out as
/// `−ω^k`, `ω = e^{2πi/(N+1)}`, and for `N = 2` as `−j, −j²`.
pub fn nholo_multipliers(order: u32) -> Result<Vec<Complex64>, T3Error> {
    let minus_one = Complex64::new(-1.0, 0.0);
    let sys = MomentSystem::new(vec![minus_one], order as usize, order)?;
    let mut roots = solve_power_sums(&sys)?.roots;
    let key = |z: &Complex64| (z / minus_one).arg().rem_euclid(std::f64::consts::TAU);
    roots.sort_by(|a, b| key(a).total_cmp(&key(b)));
    Ok(roots)
}

/// `N`-holomorphic extension on the full ball of `T_{N+1}`.
pub fn nholo_extend(
    order: u32,
    alpha: Complex64,
    beta: Complex64,
    radius: usize,
    choices: &ChoiceAssignment,
) -> Result<TreeFunction, T3Error> {
    assert!(order >= 2, "order must be at least 2");
    let mult = nholo_multipliers(order)?;
    let ball = Arc::new(TreeBall::full(order as usize + 1, radius));
    let values = extend_values(&ball, alpha, beta, &mult, choices)?;
    let function = VertexFunction::total(Arc::clone(ball.graph()), values)?.with_boundary(ball.boundary_mask())?;
    Ok(TreeFunction {
        ball,
        function,
        exact: None,
    })
}

/// Values on every closed radius-1 ball around an interior vertex are
/// pairwise more than `tol` apart.
pub fn is_locally_injective(f: &VertexFunction, tol: f64) -> bool {
    let g = f.graph();
    f.interior().all(|v| {
        let mut pts: Vec<Complex64> = g.neighbors(v).iter().filter_map(|&u| f.value(u)).collect();
        pts.extend(f.value(v));
        (0..pts.len()).all(|a| (a + 1..pts.len()).all(|b| (pts[a] - pts[b]).norm() > tol))
    })
}

/// At each interior vertex of valency `n` the oscillations are
/// `e·{1, ω, …, ω^{n−1}}`, `ω = e^{2πi/n}`: equal moduli, equal angles.
pub fn is_conformal(f: &VertexFunction, tol: f64) -> bool {
    f.interior().all(|v| {
        let Ok(osc) = f.oscillation(v) else { return false };
        let n = osc.entries.len();
        let e = osc.entries[0];
        if e.norm() <= tol {
            return false;
        }
        let mut hit = vec![false; n];
        osc.entries.iter().all(|d| {
            let r = d / e;
            let k = (r.arg().rem_euclid(std::f64::consts::TAU) * n as f64 / std::f64::consts::TAU).round() as usize % n;
            let target = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64);
            (r - target).norm() <= tol && !std::mem::replace(&mut hit[k], true)
        })
    })
}

/// At every interior vertex the turn from child `a` to child `b` is
/// counter-clockwise.
pub fn orientation_preserving(f: &TreeFunction) -> bool {
    let ball = &f.ball;
    ball.interior().all(|v| {
        let kids = ball.children(v);
        let (da, db) = (f.value(kids[0]) - f.value(v), f.value(kids[1]) - f.value(v));
        (db / da).im > 0.0
    })
}
