use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::path::Path;

use holomorph::conjugate::{
    conjugate_residual, constant_norm_on_ball, find_conjugate, forced_propagation_infeasibility, no_conjugate_fixture,
    Completion, ConjugateError, ConjugateOutcome, ForcedOutcome,
};
use holomorph::fixtures::z2_patch;
use holomorph::graph::io::{function_to_json, parse_function, parse_real_function, real_function_to_json, round_sig};
use holomorph::graph::{is_harmonic, is_holomorphic, is_n_holomorphic, GraphError, Tolerance, VertexFunction};
use holomorph::render::{cloud_csv, parse_cloud_csv, render_svg, Point, RenderSpec, Viewport};
use holomorph::t3::{
    canonical_phi, enumerate_holomorphic, extend_full, hex_covering_check, nholo_extend, normalize, walk_sample,
    ChoiceAssignment, HexLattice, T3Error, TreeFunction, WalkShift,
};
use holomorph::tr3::{
    ball_image_cloud, extend_tr3, BranchSelector, CloudMode, MarkedTriangle, Tr3Ball, Tr3Error, Tr3Function,
    CLOUD_POINT_CAP,
};
use holomorph::tree::{edge_centred_len, TreeBall};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::{
    CheckArgs, ColorBy, Command, ConjugateArgs, ExtendT3Args, ExtendTr3Args, FixtureArgs, FixtureName, Mode,
    NholoArgs, Outputs, Plot, Policy, RenderArgs, WalkArgs,
};

/// Largest ball, in vertices, the extension commands will build.
const VERTEX_CAP: u128 = 1 << 22;
/// Largest number of functions `extend-t3 --policy exhaustive` will list.
const ENUMERATION_CAP: u64 = 1 << 16;
/// Largest number of walk steps over all walks.
const WALK_STEP_CAP: u128 = 1 << 28;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Cap(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            Self::Input(_) => 2,
            Self::Cap(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Input(m) => write!(f, "{m}"),
            Self::Cap(m) => write!(f, "resource cap exceeded: {m}"),
        }
    }
}

fn input(e: impl fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        input(e)
    }
}

impl From<T3Error> for CliError {
    fn from(e: T3Error) -> Self {
        match e {
            T3Error::TooLarge { .. } => CliError::Cap(e.to_string()),
            e => input(e),
        }
    }
}

impl From<Tr3Error> for CliError {
    fn from(e: Tr3Error) -> Self {
        match e {
            Tr3Error::TooLarge { .. } => CliError::Cap(e.to_string()),
            e => input(e),
        }
    }
}

impl From<ConjugateError> for CliError {
    fn from(e: ConjugateError) -> Self {
        input(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// `Ok(verdict)`; `false` maps to exit code 1.
pub fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Check(a) => check(a),
        Command::ExtendT3(a) => extend_t3(a),
        Command::ExtendTr3(a) => extend_tr3_cmd(a),
        Command::Nholo(a) => nholo(a),
        Command::Conjugate(a) => conjugate(a),
        Command::Walk(a) => walk(a),
        Command::Render(a) => render(a),
        Command::Fixture(a) => fixture(a),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn emit_json(path: Option<&Path>, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v).expect("values serialise");
    text.push('\n');
    match path {
        Some(p) => write(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render_spec(p: &Plot) -> Result<RenderSpec> {
    let spec = RenderSpec {
        width: p.width,
        height: p.height,
        point_radius: p.point_radius,
        color_by: match p.color_by {
            ColorBy::Depth => holomorph::render::ColorBy::Depth,
            ColorBy::Branch => holomorph::render::ColorBy::Branch,
            ColorBy::None => holomorph::render::ColorBy::None,
        },
        viewport: match p.viewport {
            Some((min, max)) => Viewport::Rect { min, max },
            None => Viewport::Auto,
        },
    };
    spec.validate().map_err(input)?;
    Ok(spec)
}

fn write_pictures(out: &Outputs, plot: &Plot, points: &[Point], segments: &[(Complex64, Complex64)]) -> Result<()> {
    if let Some(p) = &out.svg {
        let svg = render_svg(points, segments, &render_spec(plot)?).map_err(input)?;
        write(p, &svg)?;
    }
    if let Some(p) = &out.csv {
        write(p, &cloud_csv(points))?;
    }
    Ok(())
}

fn seed_for(policy: Policy, seed: Option<u64>) -> Result<Option<u64>> {
    match (policy, seed) {
        (Policy::Seeded, None) => Err(input("--policy seeded needs --seed")),
        (Policy::Seeded, s) => Ok(s),
        _ => Ok(None),
    }
}

fn check(a: CheckArgs) -> Result<bool> {
    let f = parse_function(&read(&a.input)?)?;
    let tol = match a.tol {
        Some(t) if t > 0.0 && t.is_finite() => Tolerance::uniform(t),
        Some(t) => return Err(input(format!("tolerance must be positive, got {t}"))),
        None => Tolerance::default(),
    };
    let (report, extra) = match a.mode {
        Mode::Harmonic => (is_harmonic(&f, tol)?, None),
        Mode::Holomorphic => {
            let h = is_holomorphic(&f, tol)?;
            (h.report, Some(h.square_identity_gap))
        }
        Mode::NHolomorphic => {
            if a.order == 0 {
                return Err(input("--order must be positive"));
            }
            (is_n_holomorphic(&f, a.order, tol)?, None)
        }
    };
    let mut v = report.to_json(&f);
    v["checked"] = json!(report.checked);
    if let Some(gap) = extra {
        v["square_identity_gap"] = json!(gap);
    }
    emit_json(a.json.as_deref(), &v)?;
    Ok(report.verdict)
}

fn tree_pictures(f: &TreeFunction) -> (Vec<Point>, Vec<(Complex64, Complex64)>) {
    let g = f.function.graph();
    let points = (0..g.len()).map(|v| Point::new(f.value(v), f.ball.depth(v))).collect();
    let segments = g.edges().map(|(u, v)| (f.value(u), f.value(v))).collect();
    (points, segments)
}

fn check_tree_size(valency: usize, radius: usize) -> Result<()> {
    let n = edge_centred_len(valency, radius, radius);
    if n > VERTEX_CAP {
        return Err(CliError::Cap(format!("ball of radius {radius} has {n} vertices, cap is {VERTEX_CAP}")));
    }
    Ok(())
}

fn extend_t3(a: ExtendT3Args) -> Result<bool> {
    let seed = seed_for(a.policy, a.seed)?;
    if a.alpha == a.beta {
        return Err(input("alpha and beta must differ"));
    }
    check_tree_size(3, a.radius)?;
    if a.policy == Policy::Exhaustive {
        let all = enumerate_holomorphic(a.alpha, a.beta, a.radius, ENUMERATION_CAP)?;
        let lattice = HexLattice::unit(a.radius as f64 + 1.0);
        let mut passed = 0usize;
        let mut seen = BTreeMap::new();
        for (_, f) in &all {
            if hex_covering_check(&normalize(f)?, &lattice)?.passed() {
                passed += 1;
            }
            for v in 0..f.ball.len() {
                let z = f.value(v);
                let key = (round_sig(z.re, 9).to_bits(), round_sig(z.im, 9).to_bits());
                seen.entry(key).or_insert(Point::new(z, f.ball.depth(v)));
            }
        }
        let points: Vec<Point> = seen.into_values().collect();
        write_pictures(&a.out, &a.plot, &points, &[])?;
        emit_json(
            a.out.json.as_deref(),
            &json!({
                "policy": "exhaustive",
                "radius": a.radius,
                "functions": all.len(),
                "covering_passed": passed,
                "distinct_values": points.len(),
            }),
        )?;
        return Ok(passed == all.len());
    }
    let f = match seed {
        Some(s) => {
            let ball = TreeBall::full(3, a.radius);
            let choices = ChoiceAssignment::random(&ball, s);
            extend_full(a.alpha, a.beta, a.radius, &choices)?
        }
        None => canonical_phi(a.alpha, a.beta, a.radius),
    };
    let report = hex_covering_check(&normalize(&f)?, &HexLattice::unit(a.radius as f64 + 1.0))?;
    let (points, segments) = tree_pictures(&f);
    write_pictures(&a.out, &a.plot, &points, &segments)?;
    emit_json(
        a.out.json.as_deref(),
        &json!({
            "function": function_to_json(&f.function),
            "covering": {
                "in_lattice": report.in_lattice,
                "locally_surjective": report.locally_surjective,
                "locally_injective": report.locally_injective,
                "rho": report.rho,
                "rho_euclid": round_sig(report.rho_euclid, 12),
                "attained": report.attained,
            },
        }),
    )?;
    Ok(report.passed())
}

fn nholo(a: NholoArgs) -> Result<bool> {
    let seed = seed_for(a.policy, a.seed)?;
    if a.order < 2 {
        return Err(input("--order must be at least 2"));
    }
    if a.policy == Policy::Exhaustive {
        return Err(input("nholo supports the canonical and seeded policies only"));
    }
    check_tree_size(a.order as usize + 1, a.radius)?;
    let choices = match seed {
        Some(s) => ChoiceAssignment::random(&TreeBall::full(a.order as usize + 1, a.radius), s),
        None => ChoiceAssignment::canonical(a.order as usize),
    };
    let f = nholo_extend(a.order, a.alpha, a.beta, a.radius, &choices)?;
    let report = is_n_holomorphic(&f.function, a.order, Tolerance::new(1e-9, 1e-9))?;
    let (points, segments) = tree_pictures(&f);
    write_pictures(&a.out, &a.plot, &points, &segments)?;
    let mut check = report.to_json(&f.function);
    check["order"] = json!(a.order);
    emit_json(a.out.json.as_deref(), &json!({"function": function_to_json(&f.function), "check": check}))?;
    Ok(report.verdict)
}

fn tr3_pictures(f: &Tr3Function) -> (Vec<Point>, Vec<(Complex64, Complex64)>) {
    let g = f.function.graph();
    let points = (0..g.len()).map(|v| Point::new(f.value(v), f.ball.vertex_depth(v))).collect();
    let segments = g.edges().map(|(u, v)| (f.value(u), f.value(v))).collect();
    (points, segments)
}

fn extend_tr3_cmd(a: ExtendTr3Args) -> Result<bool> {
    let seed = seed_for(a.policy, a.seed)?;
    let start = match &a.triangle {
        Some(p) => {
            let v: Value = serde_json::from_str(&read(p)?).map_err(input)?;
            MarkedTriangle::from_json(&v)?
        }
        None => MarkedTriangle::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_3),
        ),
    };
    let cloud_mode = match (a.policy, seed) {
        (Policy::Exhaustive, _) => Some(CloudMode::Exhaustive),
        (Policy::Seeded, Some(s)) if a.samples > 1 => Some(CloudMode::Sampled { seed: s, count: a.samples }),
        _ => None,
    };
    if let Some(mode) = cloud_mode {
        if let CloudMode::Sampled { count, .. } = mode {
            let per = 3u128 << a.radius.min(100);
            if per.saturating_mul(count as u128) > CLOUD_POINT_CAP as u128 {
                return Err(CliError::Cap(format!("{count} samples at radius {} exceed the point cap", a.radius)));
            }
        }
        let cloud = ball_image_cloud(&start, a.radius, mode)?;
        let points: Vec<Point> = cloud.iter().map(|c| Point::new(c.z, c.depth)).collect();
        write_pictures(&a.out, &a.plot, &points, &[])?;
        emit_json(
            a.out.json.as_deref(),
            &json!({"start": start.to_json(), "radius": a.radius, "points": points.len()}),
        )?;
        return Ok(true);
    }
    if a.radius > 20 {
        return Err(CliError::Cap(format!("radius {} is above 20", a.radius)));
    }
    let selector = match seed {
        Some(s) => BranchSelector::random(&Tr3Ball::new(a.radius), s),
        None => BranchSelector::constant(false),
    };
    let f = extend_tr3(&start, a.radius, &selector)?;
    let report = is_holomorphic(&f.function, Tolerance::new(1e-8, 1e-8))?;
    let (points, segments) = tr3_pictures(&f);
    write_pictures(&a.out, &a.plot, &points, &segments)?;
    emit_json(
        a.out.json.as_deref(),
        &json!({
            "start": start.to_json(),
            "function": function_to_json(&f.function),
            "check": report.report.to_json(&f.function),
        }),
    )?;
    Ok(report.report.verdict)
}

fn conjugate(a: ConjugateArgs) -> Result<bool> {
    let f = parse_real_function(&read(&a.input)?)?;
    let root = match &a.root {
        Some(id) => Some(
            f.graph()
                .index_of(id)
                .ok_or_else(|| input(format!("no vertex named {id:?}")))?,
        ),
        None => None,
    };
    let mode = a.seed.map_or(Completion::Deterministic, Completion::Seeded);
    match find_conjugate(&f, root, mode)? {
        ConjugateOutcome::Found(g) => {
            let residual = conjugate_residual(&f, &g)?;
            emit_json(
                a.json.as_deref(),
                &json!({"verdict": true, "conjugate": real_function_to_json(&g), "residual": residual}),
            )?;
            Ok(true)
        }
        ConjugateOutcome::SweepFailed(failure) => {
            let certificates: Vec<Value> = match forced_propagation_infeasibility(&f) {
                ForcedOutcome::Infeasible(c) => c.iter().map(|c| c.to_json()).collect(),
                ForcedOutcome::Inconclusive => Vec::new(),
            };
            emit_json(
                a.json.as_deref(),
                &json!({
                    "verdict": false,
                    "proved_infeasible": !certificates.is_empty(),
                    "sweep_failure": failure.to_json(),
                    "certificates": certificates,
                }),
            )?;
            Ok(false)
        }
    }
}

fn walk(a: WalkArgs) -> Result<bool> {
    if a.length == 0 || a.count == 0 {
        return Err(input("--length and --count must be at least 1"));
    }
    if !(a.bin > 0.0 && a.bin.is_finite()) {
        return Err(input("--bin must be positive"));
    }
    let steps = a.length as u128 * a.count as u128;
    if steps > WALK_STEP_CAP {
        return Err(CliError::Cap(format!("{steps} steps requested, cap is {WALK_STEP_CAP}")));
    }
    let shift = WalkShift::standard();
    let many = a.count > 1;
    let mut csv = String::from(if many { "walk,step,symbol,re,im,abs\n" } else { "step,symbol,re,im,abs\n" });
    let mut histogram: BTreeMap<String, u64> = BTreeMap::new();
    let (mut final_sum, mut mean_sum, mut max_abs) = (0.0, 0.0, 0.0f64);
    let mut forbidden = 0u64;
    for k in 0..a.count {
        let w = walk_sample(&shift, a.length, a.seed.wrapping_add(k as u64));
        forbidden += w.symbols.windows(2).filter(|p| !shift.allowed(p[0], p[1])).count() as u64;
        for (i, &s) in w.symbols.iter().enumerate() {
            let z = w.position(i);
            if many {
                let _ = write!(csv, "{k},");
            }
            let _ = writeln!(
                csv,
                "{},{s},{},{},{}",
                i + 1,
                round_sig(z.re, 12),
                round_sig(z.im, 12),
                round_sig(z.norm(), 12)
            );
        }
        let end = w.position(a.length - 1);
        let cell = format!("{},{}", (end.re / a.bin).floor() as i64, (end.im / a.bin).floor() as i64);
        *histogram.entry(cell).or_default() += 1;
        final_sum += w.final_abs();
        mean_sum += w.mean_abs();
        max_abs = max_abs.max(w.max_abs());
    }
    let n = a.count as f64;
    let summary = json!({
        "walks": a.count,
        "length": a.length,
        "seed": a.seed,
        "mean_final_abs": round_sig(final_sum / n, 12),
        "mean_abs": round_sig(mean_sum / n, 12),
        "max_abs": round_sig(max_abs, 12),
        "bin": a.bin,
        "histogram": histogram,
        "forbidden_transitions": forbidden,
    });
    match &a.out.csv {
        Some(p) => {
            write(p, &csv)?;
            emit_json(a.out.json.as_deref(), &summary)?;
        }
        None => {
            print!("{csv}");
            if let Some(p) = &a.out.json {
                emit_json(Some(p), &summary)?;
            }
        }
    }
    if a.out.svg.is_some() {
        return Err(input("walk does not draw SVG; use render on the CSV"));
    }
    Ok(forbidden == 0)
}

fn function_pictures(f: &VertexFunction) -> (Vec<Point>, Vec<(Complex64, Complex64)>) {
    let g = f.graph();
    let dist = if g.is_empty() { Vec::new() } else { g.distances_from(0) };
    let points = (0..g.len())
        .filter_map(|v| Some(Point::new(f.value(v)?, dist[v].unwrap_or(0))))
        .collect();
    let segments = g
        .edges()
        .filter_map(|(u, v)| Some((f.value(u)?, f.value(v)?)))
        .collect();
    (points, segments)
}

fn render(a: RenderArgs) -> Result<bool> {
    let text = read(&a.input)?;
    let is_csv = a.input.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let (points, segments) = if is_csv {
        (parse_cloud_csv(&text).map_err(input)?, Vec::new())
    } else {
        function_pictures(&parse_function(&text)?)
    };
    let svg = render_svg(&points, &segments, &render_spec(&a.plot)?).map_err(input)?;
    write(&a.svg, &svg)?;
    Ok(true)
}

fn fixture(a: FixtureArgs) -> Result<bool> {
    let v = match a.name {
        FixtureName::NoConjugate => {
            let (f, _) = no_conjugate_fixture(a.radius)?;
            real_function_to_json(&f)
        }
        FixtureName::ConstantNorm => {
            if a.valency < 2 || a.radius == 0 {
                return Err(input("need valency at least 2 and positive radius"));
            }
            let n = holomorph::tree::vertex_centred_len(a.valency, a.radius);
            if n > VERTEX_CAP {
                return Err(CliError::Cap(format!("ball has {n} vertices")));
            }
            let ball = TreeBall::vertex_centred(a.valency, a.radius);
            real_function_to_json(&constant_norm_on_ball(&ball, 1.0, Completion::Seeded(a.seed))?)
        }
        FixtureName::ZPower => {
            if !(1..=1000).contains(&a.half) {
                return Err(input("--half must be in 1..=1000"));
            }
            function_to_json(&z2_patch(a.half, |z| z.powu(a.power)))
        }
    };
    emit_json(a.json.as_deref(), &v)?;
    Ok(true)
}
