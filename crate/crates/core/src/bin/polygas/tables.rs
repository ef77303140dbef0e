use serde_json::{json, Value};

use polygas::criteria::{homogeneous_radius, scott_sokal_reference, CriterionKind, UnivariatePhi};
use polygas::models::{
    domino_family, subset_criteria_table3, ModelDescriptor, SubsetPolymerFamily, SubsetVerdicts,
    REFERENCE_TRIANGULAR_POLYNOMIAL,
};
use polygas::Error;

/// Reference values carry three or four digits.
pub const REFERENCE_TOLERANCE: f64 = 6e-4;

fn row(table: &str, name: &str, computed: f64, reference: Option<f64>) -> Value {
    let deviation = reference.map(|p| (computed - p).abs());
    json!({
        "table": table,
        "row": name,
        "computed": computed,
        "reference": reference,
        "deviation": deviation,
        "within_tolerance": deviation.map(|d| d <= REFERENCE_TOLERANCE),
    })
}

/// Largest homogeneous activity accepted by one column for some `a`.
fn subset_threshold(
    f: &SubsetPolymerFamily,
    column: fn(&SubsetVerdicts) -> bool,
) -> Result<f64, Error> {
    let n = f.n_polymers();
    let mut best: f64 = 0.0;
    for step in 1..=400 {
        let a = step as f64 * 0.005;
        let holds = |r: f64| subset_criteria_table3(f, &vec![r; n], a).map(|v| column(&v));
        if !holds(best)? {
            continue;
        }
        let (mut lo, mut hi) = (best, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if holds(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        best = lo;
    }
    Ok(best)
}

pub fn tables() -> Result<Value, Error> {
    let mut rows = Vec::new();
    let delta = 6;
    let degree = ModelDescriptor::BoundedDegree(delta);
    for (kind, reference) in [
        (CriterionKind::KoteckyPreiss, 0.0525),
        (CriterionKind::Dobrushin, 0.0566),
        (CriterionKind::ImprovedDobrushin, 0.0628),
    ] {
        let r = degree.radius(kind)?.radius;
        rows.push(row(
            "bounded-degree",
            &format!("{kind} R_6"),
            r,
            Some(reference),
        ));
    }
    rows.push(row(
        "bounded-degree",
        "scott-sokal R_6",
        scott_sokal_reference(delta)?,
        Some(0.067),
    ));

    let domino = ModelDescriptor::DominoWindow(5, 5).radius(CriterionKind::FernandezProcacci)?;
    rows.push(row("models", "domino", domino.radius, Some(0.0769)));
    let quoted = homogeneous_radius(&UnivariatePhi::Polynomial {
        coefficients: REFERENCE_TRIANGULAR_POLYNOMIAL.to_vec(),
    })?;
    rows.push(row(
        "models",
        "triangular (quoted polynomial)",
        quoted.radius,
        Some(0.078),
    ));
    let enumerated =
        ModelDescriptor::TriangularPatch(2).radius(CriterionKind::FernandezProcacci)?;
    rows.push(row(
        "models",
        "triangular (enumerated polynomial)",
        enumerated.radius,
        None,
    ));
    let complete = ModelDescriptor::CompleteGraph(delta as usize + 1)
        .radius(CriterionKind::FernandezProcacci)?;
    rows.push(row(
        "models",
        "complete K_7",
        complete.radius,
        Some(1.0 / 7.0),
    ));

    let f = domino_family(7, 7)?;
    for (name, column) in [
        (
            "kotecky-preiss",
            (|v: &SubsetVerdicts| v.kotecky_preiss) as fn(&SubsetVerdicts) -> bool,
        ),
        ("dobrushin", |v| v.dobrushin),
        ("gruber-kunz", |v| v.gruber_kunz),
    ] {
        rows.push(row(
            "subsets",
            &format!("domino 7x7 {name} threshold"),
            subset_threshold(&f, column)?,
            None,
        ));
    }
    Ok(json!({ "tolerance": REFERENCE_TOLERANCE, "rows": rows }))
}
