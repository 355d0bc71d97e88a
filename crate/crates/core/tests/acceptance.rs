//! One PASS/FAIL line per acceptance criterion. Runs as a plain binary so
//! the criteria execute in order and their timings are not skewed by other
//! tests running alongside.

use std::collections::HashSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use holomorph::conjugate::{
    bounded_holomorphic_t4, constant_norm_on_ball, find_conjugate, forced_propagation_infeasibility,
    no_conjugate_fixture, projection_range, random_harmonic, solve_contraction, Completion, ConjugateOutcome,
    ForcedOutcome, DEFAULT_R2,
};
use holomorph::fixtures::{cube, k4, z2_patch};
use holomorph::graph::{
    hex_patch, is_harmonic, is_holomorphic, trivalent_feasibility, Feasibility, Graph, RealVertexFunction,
    Tolerance, TrivalentOptions, VertexFunction,
};
use holomorph::moment::{discriminant, multiset_distance, solve_pair};
use holomorph::render::{render_svg, Point, RenderSpec};
use holomorph::t3::{
    all_extensions_check, canonical_phi, chain_eval, constrained_extension, enumerate_holomorphic, extend_on,
    hex_covering_check, nholo_extend, ChoiceAssignment, Constrained, HexLattice, WalkShift, INCIDENCE,
};
use holomorph::tr3::{
    ball_image_cloud, branch_monodromy, circle_loop, involution_check, singular_points, step_M, Branch, CloudMode,
    MarkedTriangle, Monodromy,
};
use holomorph::tree::{Side, TreeBall};
use holomorph::{j, j2, Eisenstein};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rand_c(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    c(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..100_000 {
        let e = rand_c(&mut rng, 10.0);
        let [u, v] = solve_pair(e);
        // roots of u² + eu + e² by the quadratic formula
        let s = (e * e - 4.0 * e * e).sqrt();
        let oracle = [(-e + s) / 2.0, (-e - s) / 2.0];
        let scale = e.norm().max(1.0);
        ensure(multiset_distance(&[u, v], &oracle) <= 1e-10 * scale, || format!("pair mismatch at e = {e}"))?;
        ensure(multiset_distance(&[u, v], &[j() * e, j2() * e]) == 0.0, || format!("not {{je, j²e}} at {e}"))?;
        let r1 = (e + u + v).norm() / scale;
        let r2 = (e * e + u * u + v * v).norm() / (scale * scale);
        worst = worst.max(r1).max(r2);
    }
    ensure(worst <= 1e-10, || format!("residual {worst:e}"))?;
    Ok(format!("10^5 pairs, worst scaled residual {worst:.1e}"))
}

fn random_connected_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(2..=30usize);
    let mut edges = HashSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.insert((u, v));
    }
    for _ in 0..rng.gen_range(0..2 * n) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let mut edges: Vec<_> = edges.into_iter().collect();
    edges.sort();
    Graph::new((0..n).map(|i| i.to_string()).collect(), &edges).expect("simple graph")
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0usize;
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let g = Arc::new(random_connected_graph(&mut rng));
        let n = g.len();
        let mut values: Vec<Complex64> = (0..n).map(|_| rand_c(&mut rng, 2.0)).collect();
        // make φ harmonic on an independent set of vertices
        let mut blocked = vec![false; n];
        for v in 0..n {
            if !blocked[v] && rng.gen_bool(0.5) {
                let nb = g.neighbors(v);
                values[v] = nb.iter().map(|&w| values[w]).sum::<Complex64>() / nb.len() as f64;
                blocked[v] = true;
                for &w in nb {
                    blocked[w] = true;
                }
            }
        }
        let f = VertexFunction::total(Arc::clone(&g), values.clone()).map_err(|e| e.to_string())?;
        let sq = f.powu(2);
        for v in 0..n {
            let nb = g.neighbors(v);
            let nu = nb.len() as f64;
            let sum: Complex64 = nb.iter().map(|&w| values[w] - values[v]).sum();
            if sum.norm() > 1e-12 {
                continue;
            }
            checked += 1;
            let direct = nb.iter().map(|&w| values[w] * values[w]).sum::<Complex64>() / nu - values[v] * values[v];
            let mean_sq = nb.iter().map(|&w| (values[w] - values[v]).powu(2)).sum::<Complex64>() / nu;
            let lib = sq.laplacian(v).map_err(|e| e.to_string())?;
            let lib_osc = f.oscillation(v).map_err(|e| e.to_string())?.power_sum(2) / nu;
            worst = worst.max((direct - mean_sq).norm()).max((lib - lib_osc).norm()).max((lib - direct).norm());
        }
    }
    ensure(checked >= 10_000, || format!("only {checked} harmonic vertices"))?;
    ensure(worst <= 1e-10, || format!("square identity gap {worst:e}"))?;
    Ok(format!("{checked} harmonic vertices, worst gap {worst:.1e}"))
}

fn criterion_3() -> Outcome {
    for radius in 1..=4 {
        match constrained_extension(c(0.0, 0.0), c(1.0, 0.0), radius, 3).map_err(|e| e.to_string())? {
            Constrained::Infeasible { .. } => {}
            Constrained::Function(_) => return Err(format!("nonconstant (*)_3 solution at radius {radius}")),
        }
        let z = c(-0.5, 2.0);
        match constrained_extension(z, z, radius, 3).map_err(|e| e.to_string())? {
            Constrained::Function(f) => {
                ensure(f.function.values().iter().all(|v| *v == Some(z)), || "constant data gave nonconstant".into())?
            }
            Constrained::Infeasible { .. } => return Err("constant data refused".into()),
        }
        match constrained_extension(c(0.0, 0.0), c(1.0, 0.0), radius, 2).map_err(|e| e.to_string())? {
            Constrained::Function(f) => ensure(
                is_holomorphic(&f.function, Tolerance::uniform(1e-10)).map_err(|e| e.to_string())?.report.verdict,
                || "second-order solution not holomorphic".into(),
            )?,
            Constrained::Infeasible { .. } => return Err("no nonconstant (*)_2 solution".into()),
        }
    }
    let all = enumerate_holomorphic(c(0.0, 0.0), c(1.0, 0.0), 2, 1 << 16).map_err(|e| e.to_string())?;
    let distinct: HashSet<Vec<Eisenstein>> = all.iter().map(|(_, f)| f.exact.clone().expect("exact data")).collect();
    ensure(all.len() == 8 && distinct.len() == 8, || format!("{} functions, {} distinct", all.len(), distinct.len()))?;
    for (_, f) in &all {
        ensure(
            is_holomorphic(&f.function, Tolerance::uniform(1e-12)).map_err(|e| e.to_string())?.report.verdict,
            || "enumerated function not holomorphic".into(),
        )?;
    }
    Ok("(*)_3 infeasible for nonconstant data at radii 1..4; 8 distinct (*)_2 functions at radius 2".into())
}

fn criterion_4() -> Outcome {
    let lattice = HexLattice::unit(9.0);
    let all = all_extensions_check(6, &lattice);
    ensure(all.in_lattice, || "some value is off the tiling".into())?;
    ensure(all.locally_surjective, || "some star is not a tiling star".into())?;
    ensure(all.locally_injective, || "some radius-1 ball is not injective".into())?;
    ensure(all.image.iter().all(|z| lattice.contains_normalized(z)), || "image off the tiling".into())?;

    // spot-check individual extensions against the closure
    let ball = Arc::new(TreeBall::full(3, 6));
    for seed in 0..50 {
        let ch = ChoiceAssignment::random(&ball, seed);
        let f = extend_on(Arc::clone(&ball), c(0.0, 0.0), c(1.0, 0.0), &ch).map_err(|e| e.to_string())?;
        let exact = f.exact.clone().ok_or("no exact values")?;
        ensure(exact.iter().all(|z| lattice.contains_normalized(z)), || format!("seed {seed} leaves the tiling"))?;
        ensure(hex_covering_check(&f, &lattice).map_err(|e| e.to_string())?.passed(), || format!("seed {seed}"))?;
    }

    // the all-a geodesic from O: φ(O′) = 0, φ(O) = 1
    ensure(chain_eval(Eisenstein::ONE, &[-Eisenstein::J; 5]) == Eisenstein::ZERO, || "chain sum nonzero".into())?;
    let sixth: Vec<Eisenstein> = (0..6).scan(Eisenstein::ONE, |w, _| {
        let out = *w;
        *w = *w * (-Eisenstein::J);
        Some(out)
    }).collect();
    ensure(sixth.iter().fold(Eisenstein::ZERO, |a, &b| a + b) == Eisenstein::ZERO, || "roots of unity".into())?;
    let phi = canonical_phi(c(0.0, 0.0), c(1.0, 0.0), 6);
    let exact = phi.exact.clone().ok_or("no exact values")?;
    let (o1, o) = phi.ball.root_edge().ok_or("no root edge")?;
    let mut v = o;
    let mut path = vec![exact[o1], exact[o]];
    for _ in 0..5 {
        v = phi.ball.children(v)[0];
        path.push(exact[v]);
    }
    ensure(phi.ball.address(v).side != Side::Centre, || "unexpected ball shape".into())?;
    ensure(path[6] == exact[o1], || format!("all-a geodesic ends at {:?}", path[6]))?;
    let distinct: HashSet<&Eisenstein> = path[..6].iter().collect();
    ensure(distinct.len() == 6, || "hexagon vertices repeat".into())?;
    Ok(format!("all extensions at radius 6 cover exactly ({} states at depth 6)", all.states_per_depth[6]))
}

fn criterion_5() -> Outcome {
    let shift = WalkShift::from_tiling(&HexLattice::unit(6.0));
    ensure(shift.matrix == INCIDENCE, || format!("{:?}", shift.matrix))?;
    for first in 0..6 {
        for n in 0..=20u32 {
            ensure(shift.word_count(first, n) == 1 << n, || format!("count {first}, {n}"))?;
        }
        for n in [0, 1, 5, 12, 16] {
            ensure(shift.enumerate_words(first, n) == 1 << n, || format!("enumeration {first}, {n}"))?;
        }
    }
    Ok("matrix matches entry for entry; counts 2^n for n <= 20".into())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let t = MarkedTriangle::new(rand_c(&mut rng, 4.0), rand_c(&mut rng, 4.0), rand_c(&mut rng, 4.0));
        for b in [Branch::One, Branch::Two] {
            let MarkedTriangle { p: x, e: y, f: z } = step_M(&t, b);
            let (p, e, f) = (t.p, t.e, t.f);
            let u = -y + z;
            let r = [e + f - y + u, e * e + f * f + y * y + u * u, x - (p + y)];
            let scale = 1.0 + e.norm_sqr() + f.norm_sqr();
            worst = worst.max(r.iter().map(|z| z.norm()).fold(0.0, f64::max) / scale);
        }
        ensure(involution_check(t.e, t.f, 1e-9), || format!("involution fails at {t:?}"))?;
    }
    ensure(worst <= 1e-9, || format!("correspondence residual {worst:e}"))?;
    let r2 = 2f64.sqrt();
    for (e, f) in [(c(1.0, -r2), c(1.0, r2)), (c(1.0, r2), c(1.0, -r2))] {
        let d = discriminant(e, f).norm();
        ensure(d <= 1e-12, || format!("|D| = {d:e}"))?;
    }
    Ok(format!("2·10^4 steps, worst scaled residual {worst:.1e}"))
}

fn criterion_7() -> Outcome {
    let [s, n] = singular_points();
    for centre in [s, n] {
        let m = branch_monodromy(&circle_loop(centre, 0.3, 1000)).map_err(|e| e.to_string())?;
        ensure(m == Monodromy::Transposition, || format!("loop around {centre} gave {m:?}"))?;
    }
    for (centre, r) in [(c(2.0, 0.0), 0.5), (c(-1.0 / 3.0, 0.0), 0.5), (c(-3.0, 1.0), 1.0)] {
        let m = branch_monodromy(&circle_loop(centre, r, 1000)).map_err(|e| e.to_string())?;
        ensure(m == Monodromy::Identity, || format!("loop around {centre} gave {m:?}"))?;
    }
    Ok("transposition around each singular class, identity elsewhere".into())
}

fn criterion_8() -> Outcome {
    for (name, g) in [("K4", k4()), ("Q3", cube())] {
        let r = trivalent_feasibility(&g, &TrivalentOptions::default()).map_err(|e| e.to_string())?;
        ensure(r.is_constant_only(), || format!("{name} has a nonconstant witness"))?;
    }
    let (g, pos, boundary) = hex_patch(3.0);
    let Feasibility::Witness { function, pinned: (p, q), .. } =
        trivalent_feasibility(&g, &TrivalentOptions::default()).map_err(|e| e.to_string())?
    else {
        return Err("hexagonal patch has no witness".into());
    };
    let z: Vec<Complex64> = pos.iter().map(|e| e.to_complex()).collect();
    let direct = |v: usize| (z[v] - z[p]) / (z[q] - z[p]);
    let mirror = |v: usize| (z[v].conj() - z[p].conj()) / (z[q].conj() - z[p].conj());
    let gap = |m: &dyn Fn(usize) -> Complex64| {
        (0..g.len())
            .filter(|&v| !boundary[v])
            .map(|v| (function.value(v).unwrap_or_default() - m(v)).norm())
            .fold(0.0, f64::max)
    };
    let best = gap(&direct).min(gap(&mirror));
    ensure(best <= 1e-9, || format!("witness differs from the embedding by {best:e}"))?;
    Ok(format!("K4, Q3 constant only; honeycomb witness matches embedding to {best:.1e}"))
}

fn criterion_9() -> Outcome {
    let tol = Tolerance::default();
    for p in 1..=3u32 {
        let f = z2_patch(10, |z| z.powu(p));
        ensure(is_harmonic(&f, tol).map_err(|e| e.to_string())?.verdict, || format!("z^{p} not harmonic"))?;
    }
    let f = z2_patch(10, |z| z.powu(4));
    ensure(!is_harmonic(&f, tol).map_err(|e| e.to_string())?.verdict, || "z^4 passed".into())?;
    let mut count = 0;
    for v in f.interior() {
        let l = f.laplacian(v).map_err(|e| e.to_string())?;
        ensure(l == c(1.0, 0.0), || format!("Δz^4 = {l} at {}", f.graph().id(v)))?;
        count += 1;
    }
    ensure(count == 19 * 19, || format!("{count} interior vertices"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let (a, b) = (rand_c(&mut rng, 3.0), rand_c(&mut rng, 3.0));
        for g in [z2_patch(10, |z| a * z + b), z2_patch(10, |z| a * z.conj() + b)] {
            ensure(is_holomorphic(&g, tol).map_err(|e| e.to_string())?.report.verdict, || format!("a = {a}, b = {b}"))?;
        }
    }
    Ok("z, z², z³ harmonic; Δz^4 = 1 at all 361 interior vertices; affine maps holomorphic".into())
}

/// Orthonormal basis of the complement of `{1, δ}` in `R^n`.
fn slice_basis(delta: &[f64]) -> Vec<Vec<f64>> {
    let n = delta.len();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut cons = vec![vec![1.0; n], delta.to_vec()];
    cons.extend((0..n).map(|i| (0..n).map(|r| (r == i) as u8 as f64).collect()));
    for (idx, mut v) in cons.into_iter().enumerate() {
        for _ in 0..2 {
            for b in &basis {
                let d = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-8 {
            basis.push(v.iter().map(|x| x / norm).collect());
        } else {
            assert!(idx >= 2, "δ is orthogonal to 1, so both constraints are independent");
        }
    }
    basis.split_off(2)
}

/// Largest value of `sign·a_k` over the sphere of radius `‖δ‖` in the
/// slice, by random search followed by projected ascent.
fn brute_force_max(delta: &[f64], k: usize, sign: f64, rng: &mut ChaCha8Rng) -> f64 {
    let basis = slice_basis(delta);
    let radius = delta.iter().map(|x| x * x).sum::<f64>().sqrt();
    let m = basis.len();
    let coord = |t: &[f64]| sign * radius * t.iter().zip(&basis).map(|(ti, b)| ti * b[k]).sum::<f64>();
    let normalise = |t: &mut Vec<f64>| {
        let n = t.iter().map(|x| x * x).sum::<f64>().sqrt();
        t.iter_mut().for_each(|x| *x /= n);
    };
    let mut best = vec![0.0; m];
    let mut best_val = f64::NEG_INFINITY;
    for _ in 0..200 {
        let mut t: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        normalise(&mut t);
        let val = coord(&t);
        if val > best_val {
            best_val = val;
            best = t;
        }
    }
    let grad: Vec<f64> = basis.iter().map(|b| sign * b[k]).collect();
    for _ in 0..2000 {
        let mut t: Vec<f64> = best.iter().zip(&grad).map(|(x, g)| x + 0.05 * g).collect();
        normalise(&mut t);
        let val = coord(&t);
        if val >= best_val {
            best_val = val;
            best = t;
        }
    }
    best_val
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < 1000 {
        let n = 4 + done % 3;
        let mut d: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mean = d.iter().sum::<f64>() / n as f64;
        d.iter_mut().for_each(|x| *x -= mean);
        let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
        d.iter_mut().for_each(|x| *x /= norm);
        let nf = n as f64;
        let inside = (nf - 1.0) / nf - d[0] * d[0];
        if inside < 0.0 {
            continue;
        }
        let formula = inside.sqrt();
        let lib = projection_range(&d, 0).map_err(|e| e.to_string())?.alpha();
        let brute = brute_force_max(&d, 0, 1.0, &mut rng);
        let brute_min = -brute_force_max(&d, 0, -1.0, &mut rng);
        worst = worst.max((formula - brute).abs()).max((lib - formula).abs()).max((brute_min + formula).abs());
        done += 1;
    }
    ensure(worst <= 1e-3, || format!("formula and brute force differ by {worst:e}"))?;
    let s = 3f64.sqrt();
    let fig = [s / 2.0, -s / 6.0, -s / 6.0, -s / 6.0];
    let a = projection_range(&fig, 0).map_err(|e| e.to_string())?.alpha();
    ensure(a == 0.0, || format!("α = {a:e} for the fixture direction"))?;
    Ok(format!("10^3 directions, worst gap {worst:.1e}; fixture direction α = 0"))
}

fn criterion_11() -> Outcome {
    let ball = TreeBall::vertex_centred(4, 4);
    let tol = Tolerance::uniform(1e-8);
    let mut differing = 0;
    for inst in 0..100u64 {
        let f = constant_norm_on_ball(&ball, 1.0, Completion::Seeded(1000 + inst)).map_err(|e| e.to_string())?;
        let mut first: Option<RealVertexFunction> = None;
        let mut differs = false;
        for seed in 0..10u64 {
            let g = match find_conjugate(&f, None, Completion::Seeded(seed)).map_err(|e| e.to_string())? {
                ConjugateOutcome::Found(g) => g,
                ConjugateOutcome::SweepFailed(s) => return Err(format!("instance {inst}, seed {seed}: {s:?}")),
            };
            let h = f.with_imaginary(&g);
            ensure(is_holomorphic(&h, tol).map_err(|e| e.to_string())?.report.verdict, || {
                format!("f + ig not holomorphic, instance {inst} seed {seed}")
            })?;
            if let Some(g0) = &first {
                let diff: Vec<f64> = (0..ball.len()).map(|v| g.value(v).unwrap() - g0.value(v).unwrap()).collect();
                let (lo, hi) = diff.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
                differs |= hi - lo > 1e-6;
            } else {
                first = Some(g);
            }
        }
        differing += differs as usize;
    }
    ensure(differing >= 1, || "every seed gave the same conjugate up to constants".into())?;
    Ok(format!("1000 conjugates found; seeds disagree nontrivially in {differing}/100 instances"))
}

fn criterion_12() -> Outcome {
    let (f, [a, ..]) = no_conjugate_fixture(3).map_err(|e| e.to_string())?;
    let centre = f.graph().id(a).to_string();
    let certified_at_a = |outcome: ForcedOutcome| match outcome {
        ForcedOutcome::Infeasible(c) => c.iter().any(|c| c.vertex == centre),
        ForcedOutcome::Inconclusive => false,
    };
    ensure(certified_at_a(forced_propagation_infeasibility(&f)), || "fixture not certified at A".into())?;
    for seed in 0..5 {
        ensure(
            matches!(find_conjugate(&f, None, Completion::Seeded(seed)), Ok(ConjugateOutcome::SweepFailed(_))),
            || format!("sweep found a conjugate with seed {seed}"),
        )?;
    }
    let graph = Arc::clone(f.graph_arc());
    let mut certified = 0;
    for seed in 0..100 {
        let h = random_harmonic(&graph, f.boundary(), a, seed).map_err(|e| e.to_string())?;
        let sup = h.values().iter().map(|x| x.unwrap_or(0.0).abs()).fold(0.0, f64::max);
        let values = (0..graph.len()).map(|v| f.value(v).unwrap() + 1e-3 * h.value(v).unwrap() / sup).collect();
        let p = RealVertexFunction::new(Arc::clone(&graph), values)
            .and_then(|p| p.with_boundary(f.boundary().to_vec()))
            .map_err(|e| e.to_string())?;
        ensure(f.sup_distance(&p) <= 1e-3 * (1.0 + 1e-12), || "perturbation too large".into())?;
        ensure(is_harmonic(&p.to_complex(), Tolerance::default()).map_err(|e| e.to_string())?.verdict, || {
            format!("perturbation {seed} not harmonic")
        })?;
        if matches!(forced_propagation_infeasibility(&p), ForcedOutcome::Infeasible(_)) {
            certified += 1;
        }
    }
    ensure(certified == 100, || format!("{certified}/100 perturbations certified"))?;
    Ok("fixture certified at A; 100/100 perturbations of sup-norm 1e-3 certified".into())
}

fn criterion_13() -> Outcome {
    let con = solve_contraction(DEFAULT_R2).map_err(|e| e.to_string())?;
    ensure(con.r1 < 1.0 && con.r2 < 1.0, || format!("{con:?}"))?;
    ensure(con.residuals.iter().all(|r| r.abs() <= 1e-10), || format!("residuals {:?}", con.residuals))?;
    let t = DEFAULT_R2;
    let r1 = (1.0 - t + t * t).sqrt();
    let theta = ((1.0 - t) / (2.0 * r1)).acos();
    ensure((con.r1 - r1).abs() < 1e-10 && (con.theta.abs() - theta).abs() < 1e-10, || format!("{con:?}"))?;
    let r = con.ratio();
    let b = bounded_holomorphic_t4(8, 13).map_err(|e| e.to_string())?;
    let rep = is_holomorphic(&b.function, Tolerance::uniform(1e-10)).map_err(|e| e.to_string())?;
    ensure(rep.report.verdict, || format!("not holomorphic: {:?}", rep.report))?;
    let ball = &b.ball;
    let mut worst_ratio = 0.0f64;
    for v in 0..ball.len() {
        let z = b.function.value(v).unwrap();
        for &w in ball.children(v) {
            let d = ball.depth(v) as i32;
            let osc = (b.function.value(w).unwrap() - z).norm();
            worst_ratio = worst_ratio.max(osc / r.powi(d));
        }
    }
    ensure(worst_ratio <= 1.0 + 1e-9, || format!("oscillation exceeds r^d by factor {worst_ratio}"))?;
    for d in 0..8 {
        ensure(b.max_oscillation_at_depth(d) <= r.powi(d as i32) * (1.0 + 1e-9), || format!("depth {d}"))?;
    }
    Ok(format!("r1 = {:.12}, r2 = {}, r = {:.12}; radius-8 function bounded by {:.4}", con.r1, con.r2, r, b.sup_bound()))
}

fn criterion_14() -> Outcome {
    let dir = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("figures");
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let spec = RenderSpec::default();
    let tree_fig = |f: &holomorph::t3::TreeFunction| {
        let g = f.function.graph();
        let pts: Vec<Point> = (0..g.len()).map(|v| Point::new(f.value(v), f.ball.depth(v))).collect();
        let seg: Vec<_> = g.edges().map(|(u, v)| (f.value(u), f.value(v))).collect();
        (pts, seg)
    };
    let t3 = canonical_phi(c(0.0, 0.0), c(1.0, 0.0), 6);
    let nh = nholo_extend(4, c(0.0, 0.0), c(1.0, 0.0), 4, &ChoiceAssignment::canonical(4)).map_err(|e| e.to_string())?;
    let start = MarkedTriangle::new(c(0.0, 0.0), c(1.0, 0.0), Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3));
    let cloud = ball_image_cloud(&start, 5, CloudMode::Sampled { seed: 8, count: 200 }).map_err(|e| e.to_string())?;
    let tr3_pts: Vec<Point> = cloud.iter().map(|p| Point::new(p.z, p.depth)).collect();
    let figures = [
        ("t3_radius6.svg", tree_fig(&t3)),
        ("nholo4_radius4.svg", tree_fig(&nh)),
        ("tr3_radius5.svg", (tr3_pts, Vec::new())),
    ];
    for (name, (pts, seg)) in &figures {
        let svg = render_svg(pts, seg, &spec).map_err(|e| e.to_string())?;
        let doc = roxmltree::Document::parse(&svg).map_err(|e| format!("{name}: {e}"))?;
        let circles = doc.descendants().filter(|n| n.has_tag_name("circle")).count();
        ensure(circles == pts.len(), || format!("{name}: {circles} circles for {} points", pts.len()))?;
        std::fs::write(dir.join(name), &svg).map_err(|e| e.to_string())?;
    }
    // the radius-6 picture is a patch of the unit hexagonal tiling
    let lattice = HexLattice::unit(9.0);
    ensure(t3.exact.as_ref().is_some_and(|e| e.iter().all(|z| lattice.contains_normalized(z))), || {
        "tree image off the tiling".into()
    })?;
    Ok(format!("3 valid SVGs in {} (visual comparison is manual)", dir.display()))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome, u64); 14] = [
        (1, criterion_1, 1),
        (2, criterion_2, 5),
        (3, criterion_3, 10),
        (4, criterion_4, 10),
        (5, criterion_5, 1),
        (6, criterion_6, 5),
        (7, criterion_7, 5),
        (8, criterion_8, 10),
        (9, criterion_9, 5),
        (10, criterion_10, 60),
        (11, criterion_11, 60),
        (12, criterion_12, 10),
        (13, criterion_13, 10),
        (14, criterion_14, 60),
    ];
    let mut failed = 0;
    for (n, run, limit) in criteria {
        let t = Instant::now();
        let result = run();
        let elapsed = t.elapsed();
        let over = elapsed > Duration::from_secs(limit);
        let (tag, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {limit} s limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("{tag} criterion {n:>2} ({:.2} s): {detail}", elapsed.as_secs_f64());
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
