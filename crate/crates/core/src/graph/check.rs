use num_complex::Complex64;
use serde::Serialize;

use super::{GraphError, Tolerance, VertexFunction};

/// Verdict of a checker over all interior vertices.
///
/// `max_residual` is the worst residual in mean-value normalisation (a
/// Laplacian value, not the raw sum over neighbours); "worst" is measured
/// relative to the tolerance bound at each vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub verdict: bool,
    pub max_residual: f64,
    pub at_vertex: Option<usize>,
    pub checked: usize,
    pub unchecked: usize,
}

impl CheckReport {
    pub fn to_json(&self, f: &VertexFunction) -> serde_json::Value {
        serde_json::json!({
            "verdict": self.verdict,
            "max_residual": self.max_residual,
            "at_vertex": self.at_vertex.map(|v| f.graph().id(v).to_string()),
        })
    }
}

struct Worst {
    ratio: f64,
    residual: f64,
    vertex: Option<usize>,
    ok: bool,
}

impl Worst {
    fn new() -> Self {
        Self {
            ratio: -1.0,
            residual: 0.0,
            vertex: None,
            ok: true,
        }
    }

    fn push(&mut self, v: usize, residual: f64, bound: f64) {
        let ratio = residual / bound;
        if residual > bound || !residual.is_finite() {
            self.ok = false;
        }
        if ratio > self.ratio || !residual.is_finite() {
            self.ratio = ratio;
            self.residual = residual;
            self.vertex = Some(v);
        }
    }
}

fn run(
    f: &VertexFunction,
    mut per_vertex: impl FnMut(usize, &mut Worst) -> Result<(), GraphError>,
) -> Result<CheckReport, GraphError> {
    let interior: Vec<usize> = f.interior().collect();
    if interior.is_empty() {
        return Err(GraphError::EmptyInterior);
    }
    let mut worst = Worst::new();
    for &v in &interior {
        per_vertex(v, &mut worst)?;
    }
    Ok(CheckReport {
        verdict: worst.ok,
        max_residual: worst.residual,
        at_vertex: worst.vertex,
        checked: interior.len(),
        unchecked: f.graph().len() - interior.len(),
    })
}

/// Harmonicity at every interior vertex: `|Δf(v)| <= tol`.
pub fn is_harmonic(f: &VertexFunction, tol: Tolerance) -> Result<CheckReport, GraphError> {
    run(f, |v, worst| {
        let r = f.laplacian(v)?.norm();
        worst.push(v, r, tol.bound(f.local_scale(v)));
        Ok(())
    })
}

/// Holomorphy report: the oscillation power-sum verdict plus the direct
/// `Δ(f²)` cross-check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolomorphyReport {
    pub report: CheckReport,
    /// Largest `|Δ(f²)(v) - (1/ν)Σδ²|` over interior vertices where `f` is
    /// harmonic within tolerance. Zero up to rounding.
    pub square_identity_gap: f64,
}

/// `Σδ = Σδ² = 0` at every interior vertex (mean normalisation).
pub fn is_holomorphic(f: &VertexFunction, tol: Tolerance) -> Result<HolomorphyReport, GraphError> {
    let square = f.powu(2);
    let mut gap = 0.0_f64;
    let report = run(f, |v, worst| {
        let osc = f.oscillation(v)?;
        let n = osc.entries.len() as f64;
        let scale = f.local_scale(v);
        let r1 = (osc.power_sum(1) / n).norm();
        let mean_sq = osc.power_sum(2) / n;
        let r2 = mean_sq.norm();
        worst.push(v, r1, tol.bound(scale));
        worst.push(v, r2, tol.bound(scale * scale));
        if tol.accepts(r1, scale) {
            let direct = square.laplacian(v)?;
            gap = gap.max((direct - mean_sq).norm());
        }
        Ok(())
    })?;
    Ok(HolomorphyReport {
        report,
        square_identity_gap: gap,
    })
}

/// `Δ(f^p) = 0` for `p = 1..=n` at every interior vertex, evaluated through
/// the Laplacian of the powers themselves.
pub fn is_n_holomorphic(
    f: &VertexFunction,
    n: u32,
    tol: Tolerance,
) -> Result<CheckReport, GraphError> {
    assert!(n >= 1, "order must be positive");
    let powers: Vec<VertexFunction> = (1..=n).map(|p| f.powu(p)).collect();
    run(f, |v, worst| {
        let scale = f.local_scale(v);
        for (p, fp) in (1..=n).zip(&powers) {
            let r = fp.laplacian(v)?.norm();
            worst.push(v, r, tol.bound(scale.powi(p as i32)));
        }
        Ok(())
    })
}

/// Raw power sums `Σδ^p`, `p = 1..=n`, of the oscillations at `v`.
pub fn power_sum_residuals(
    f: &VertexFunction,
    v: usize,
    n: u32,
) -> Result<Vec<Complex64>, GraphError> {
    let osc = f.oscillation(v)?;
    Ok((1..=n).map(|p| osc.power_sum(p)).collect())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fixtures::z2_patch;
    use crate::graph::Graph;

    fn star(values: [Complex64; 4]) -> VertexFunction {
        let g = Graph::new(
            vec!["c".into(), "a".into(), "b".into(), "d".into()],
            &[(0, 1), (0, 2), (0, 3)],
        )
        .unwrap();
        VertexFunction::total(Arc::new(g), values.to_vec())
            .unwrap()
            .with_boundary(vec![false, true, true, true])
            .unwrap()
    }

    #[test]
    fn tripod_roots_of_unity_are_holomorphic() {
        let j = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let f = star([Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), j, j * j]);
        assert!(f.laplacian(0).unwrap().norm() < 1e-15);
        let h = is_holomorphic(&f, Tolerance::default()).unwrap();
        assert!(h.report.verdict);
        assert_eq!(h.report.checked, 1);
        assert_eq!(h.report.unchecked, 3);
    }

    #[test]
    fn z4_laplacian_is_one() {
        let f = z2_patch(3, |z| z.powu(4));
        let origin = f.graph().index_of("0,0").unwrap();
        assert_eq!(f.laplacian(origin).unwrap(), Complex64::new(1.0, 0.0));
        let r = is_harmonic(&f, Tolerance::default()).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.max_residual, 1.0);
    }

    #[test]
    fn cubes_are_harmonic_squares_are_not_holomorphic() {
        let tol = Tolerance::default();
        for k in 1..=3 {
            assert!(is_harmonic(&z2_patch(4, |z| z.powu(k)), tol).unwrap().verdict);
        }
        let sq = z2_patch(4, |z| z * z);
        let h = is_holomorphic(&sq, tol).unwrap();
        assert!(!h.report.verdict);
        // Σδ² = 4 over four neighbours.
        assert!((h.report.max_residual - 1.0).abs() < 1e-12);
        assert!(h.square_identity_gap < 1e-9);
    }

    #[test]
    fn affine_maps_and_conjugates_are_holomorphic() {
        let tol = Tolerance::default();
        let a = Complex64::new(2.0, 1.0);
        assert!(is_holomorphic(&z2_patch(4, |z| a * z), tol).unwrap().report.verdict);
        assert!(is_holomorphic(&z2_patch(4, |z| a * z.conj() + 3.0), tol)
            .unwrap()
            .report
            .verdict);
    }

    #[test]
    fn constants_satisfy_every_order() {
        let f = z2_patch(2, |_| Complex64::new(7.0, -2.0));
        let tol = Tolerance::default();
        let h = is_harmonic(&f, tol).unwrap();
        assert!(h.verdict && h.max_residual == 0.0);
        assert!(is_n_holomorphic(&f, 9, tol).unwrap().verdict);
    }

    #[test]
    fn empty_interior_is_an_error() {
        let f = z2_patch(1, |z| z).with_boundary(vec![true; 9]).unwrap();
        assert_eq!(is_harmonic(&f, Tolerance::default()), Err(GraphError::EmptyInterior));
    }
}
