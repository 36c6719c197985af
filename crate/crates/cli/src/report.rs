//! Report sections, each rendered as JSON and as text.

use std::fmt::Write as _;

use hexlink::classify::{Equation, FamilyCheck, FamilyReport, GenusBound};
use hexlink::linkage::N;
use hexlink::motion::{MobilityVerdict, MobilityWitness, StopReason};
use hexlink::quadpoly::{BondConditionReport, InvariantQuadSet, QuadPolynomial, Sign};
use hexlink::{DHParams, Scalar};
use serde_json::{json, Value};

use crate::numfmt;

/// Left-aligned table with two-space gaps.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "  {}", parts.join("  ").trim_end());
    };
    line(header.to_vec(), &mut out);
    for row in rows {
        line(row.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

pub fn dh_json<T: Scalar>(p: &DHParams<T>) -> Value {
    let col = |v: &[T; N]| Value::Array(v.iter().map(numfmt::json).collect());
    json!({ "c": col(&p.c), "b": col(&p.b), "s": col(&p.s) })
}

pub fn dh_text<T: Scalar>(p: &DHParams<T>) -> String {
    let rows: Vec<Vec<String>> =
        (0..N).map(|i| vec![(i + 1).to_string(), numfmt::text(&p.c[i]), numfmt::text(&p.b[i]), numfmt::text(&p.s[i])]).collect();
    format!("DH parameters (link i joins axes i and i+1; s_i lies on axis i)\n{}", table(&["i", "c_i", "b_i", "s_i"], &rows))
}

pub fn dims_text(dims: &[usize; N]) -> String {
    let parts: Vec<String> = (0..N).map(|k| format!("l({},{},{})={}", k + 1, (k + 1) % N + 1, (k + 2) % N + 1, dims[k])).collect();
    format!("Triple coupling dimensions: {}\n", parts.join(" "))
}

fn quad_json<T: Scalar>(q: &QuadPolynomial<T>) -> Value {
    json!({
        "a1": numfmt::complex_json(&q.a1),
        "a0": numfmt::complex_json(&q.a0),
        "text": numfmt::quad_text(&q.a1, &q.a0),
    })
}

pub fn quads_json<T: Scalar>(q: &InvariantQuadSet<T>) -> Value {
    json!({
        "plus": q.plus.iter().map(quad_json).collect::<Vec<_>>(),
        "minus": q.minus.iter().map(quad_json).collect::<Vec<_>>(),
    })
}

pub fn quads_text<T: Scalar>(title: &str, q: &InvariantQuadSet<T>) -> String {
    let rows: Vec<Vec<String>> = (0..N)
        .map(|k| {
            vec![(k + 1).to_string(), numfmt::quad_text(&q.plus[k].a1, &q.plus[k].a0), numfmt::quad_text(&q.minus[k].a1, &q.minus[k].a0)]
        })
        .collect();
    format!("{title}\n{}", table(&["k", "Q_k^+", "Q_k^-"], &rows))
}

fn pair_label(pair: usize) -> String {
    format!("{}-{}", pair + 1, pair + 4)
}

pub fn bonds_json<T: Scalar>(r: &BondConditionReport<T>) -> Value {
    Value::Array(
        r.entries
            .iter()
            .map(|e| {
                json!({
                    "pair": pair_label(e.pair),
                    "sign": e.sign.to_string(),
                    "gcd_degree": e.gcd_degree,
                    "resultant": numfmt::complex_json(&e.resultant),
                    "discriminants_match": e.discriminant_match,
                })
            })
            .collect(),
    )
}

pub fn bonds_text<T: Scalar>(r: &BondConditionReport<T>) -> String {
    let rows: Vec<Vec<String>> = r
        .entries
        .iter()
        .map(|e| {
            vec![
                pair_label(e.pair),
                e.sign.to_string(),
                e.gcd_degree.to_string(),
                numfmt::complex_text(&e.resultant),
                if e.discriminant_match { "yes" } else { "no" }.to_string(),
            ]
        })
        .collect();
    format!(
        "Bond conditions (gcd of Q_k and Q_(k+3) per sign)\n{}",
        table(&["pair", "sign", "gcd", "resultant", "equal discriminants"], &rows)
    )
}

/// Connections implied by the gcd degrees, or why none are reported.
pub fn diagram_from_conditions<T: Scalar>(r: &BondConditionReport<T>, dims: &[usize; N]) -> Result<String, String> {
    if let Some(k) = dims.iter().position(|&d| d != 8) {
        return Err(format!("triple starting at axis {} has coupling dimension {}; the gcd bound needs all 8", k + 1, dims[k]));
    }
    let parts: Vec<String> = (0..3)
        .filter_map(|k| {
            let total = r.gcd_degree(k, Sign::Plus) + r.gcd_degree(k, Sign::Minus);
            (total > 0).then(|| format!("{}:{total}", pair_label(k)))
        })
        .collect();
    Ok(parts.join(","))
}

fn equation_json<T: Scalar>(e: &Equation<T>) -> Value {
    json!({
        "label": e.label,
        "lhs": numfmt::json(&e.lhs),
        "rhs": numfmt::json(&e.rhs),
        "residual": numfmt::json(&e.residual()),
        "relative_residual": numfmt::f64_json(e.relative_residual()),
        "holds": e.holds(),
    })
}

fn check_json<T: Scalar>(c: &FamilyCheck<T>) -> Value {
    json!({ "holds": c.holds, "equations": c.equations.iter().map(equation_json).collect::<Vec<_>>() })
}

pub fn genus_json(g: &GenusBound) -> Value {
    json!({ "bound": g.bound, "case": g.case.to_string() })
}

pub fn genus_text(g: &GenusBound) -> String {
    format!("Genus bound: {} ({})\n", g.bound, g.case)
}

fn mask_text(mask: u8) -> String {
    let axes: Vec<String> = (0..N).filter(|i| mask >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
    if axes.is_empty() {
        "as given".into()
    } else {
        format!("axes {} reversed", axes.join(","))
    }
}

pub fn families_json<T: Scalar>(r: &FamilyReport<T>) -> Value {
    let mut dietmaier = check_json(&r.dietmaier);
    dietmaier["orientation"] = json!(mask_text(r.dietmaier_orientation));
    json!({
        "hooke": check_json(&r.hooke),
        "hooke_geometric": check_json(&r.hooke_geometric),
        "dietmaier": dietmaier,
        "family1": check_json(&r.family1),
        "family2": check_json(&r.family2),
        "bricard_orthogonal": check_json(&r.bricard_orthogonal),
    })
}

pub fn families_text<T: Scalar>(r: &FamilyReport<T>) -> String {
    let mut out = String::from("Families\n");
    let sections: [(&str, &FamilyCheck<T>); 6] = [
        ("hooke", &r.hooke),
        ("hooke (geometric distance form)", &r.hooke_geometric),
        ("dietmaier", &r.dietmaier),
        ("family 1", &r.family1),
        ("family 2", &r.family2),
        ("bricard orthogonal", &r.bricard_orthogonal),
    ];
    for (name, check) in sections {
        let mut head = format!("{name}: {}", if check.holds { "yes" } else { "no" });
        if name == "dietmaier" {
            let which = if check.holds { "" } else { "closest orientation: " };
            head += &format!(" ({which}{})", mask_text(r.dietmaier_orientation));
        }
        let _ = writeln!(out, "  {head}");
        let rows: Vec<Vec<String>> = check
            .equations
            .iter()
            .map(|e| {
                let mut row = vec![
                    if e.holds() { "ok" } else { "--" }.to_string(),
                    e.label.clone(),
                    numfmt::text(&e.lhs),
                    numfmt::text(&e.rhs),
                    numfmt::text(&e.residual()),
                ];
                if !T::EXACT {
                    row.push(numfmt::sig12(e.relative_residual()));
                }
                row
            })
            .collect();
        let header: &[&str] =
            if T::EXACT { &["", "equation", "lhs", "rhs", "residual"] } else { &["", "equation", "lhs", "rhs", "residual", "relative"] };
        for l in table(header, &rows).lines() {
            let _ = writeln!(out, "  {l}");
        }
    }
    out
}

pub fn flags_json<T: Scalar>(r: &FamilyReport<T>) -> Value {
    let f = r.flags();
    json!({
        "hooke": f.hooke,
        "hooke_geometric": r.hooke_geometric.holds,
        "dietmaier": f.dietmaier,
        "family1": f.family1,
        "family2": f.family2,
        "bricard_orthogonal": f.bricard_orthogonal,
    })
}

pub fn stop_text(s: StopReason) -> &'static str {
    match s {
        StopReason::NoMotion => "no motion found",
        StopReason::ReturnedToStart => "returned to start",
        StopReason::StepBudget => "step budget exhausted",
        StopReason::NewtonFailure => "corrector failed",
    }
}

pub fn verdict_text(v: MobilityVerdict) -> String {
    match v {
        MobilityVerdict::NoMotionFound => "no motion found at this resolution (not a proof of rigidity)".into(),
        MobilityVerdict::MobilityOne => "mobility one".into(),
        MobilityVerdict::HigherMobility { rank } => format!("higher mobility (Jacobian rank {rank} at the start)"),
        MobilityVerdict::Inconclusive => "inconclusive".into(),
    }
}

pub fn witness_json(w: &MobilityWitness) -> Value {
    json!({
        "samples": w.samples,
        "max_residual": numfmt::f64_json(w.max_residual),
        "rank_five_fraction": numfmt::f64_json(w.rank_five_fraction),
        "start_rank": w.start_rank,
        "stop": stop_text(w.stop),
        "verdict": verdict_text(w.verdict),
    })
}

pub fn witness_text(w: &MobilityWitness) -> String {
    format!(
        "Motion witness (numerical evidence, not a proof)\n  samples {}, max residual {}, Jacobian rank 5 at {:.1}% of samples, start rank {}\n  stop: {}; verdict: {}\n",
        w.samples,
        numfmt::sig12(w.max_residual),
        100.0 * w.rank_five_fraction,
        w.start_rank,
        stop_text(w.stop),
        verdict_text(w.verdict)
    )
}
