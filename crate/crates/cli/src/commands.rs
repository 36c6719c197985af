use std::io::{self, Write};
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use hexlink::classify::coupling_dimensions_from_dh;
use hexlink::linkage::N;
use hexlink::motion::{self, witness_from_track, MobilityWitness};
use hexlink::quadpoly::{self, BondConditionReport, InvariantQuadSet, DEFAULT_SEED};
use hexlink::{assemble, genus_bound, lines_from_dh, BondDiagram, Linkage6R, Rational, Scalar, TrackerConfig};
use serde_json::{json, Value};

use crate::input::{self, invalid, Input};
use crate::report;
use crate::{AnalyzeArgs, BackendArgs, CommonArgs, CouplerDegreeArgs, QuadpolyArgs, SampleMotionArgs, SynthArgs};

const SEED_VAR: &str = "HEXLINK_SEED";

/// Elimination seed, from `HEXLINK_SEED` if set.
fn quad_seed() -> Result<u64> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| invalid(format!("{SEED_VAR}: expected an unsigned integer, got '{v}'"))),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_SEED),
        Err(e) => Err(invalid(format!("{SEED_VAR}: {e}"))),
    }
}

fn backend_name<T: Scalar>() -> &'static str {
    if T::EXACT {
        "exact"
    } else {
        "float"
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn print_json(v: &Value) -> Result<()> {
    emit(&(serde_json::to_string_pretty(v)? + "\n"))
}

fn coupling_dims<T: Scalar>(input: &Input<T>) -> [usize; N] {
    match input {
        Input::Lines(l) => l.coupling_dimensions(),
        Input::Dh(p) => coupling_dimensions_from_dh(p),
    }
}

/// Axes in some real assembly: as given, or found numerically for a DH table.
fn float_linkage<T: Scalar>(input: &Input<T>, seed: u64) -> Result<Linkage6R<f64>> {
    match input {
        Input::Lines(l) => Ok(l.to_f64()),
        Input::Dh(p) => assemble(&p.to_f64(), seed).map_err(|e| anyhow!("no real assembly found for the DH table: {e}")),
    }
}

fn tracker_config(steps: usize, tol: f64, step: f64, seed: u64) -> Result<TrackerConfig> {
    let cfg = TrackerConfig { max_steps: steps, tol, step, seed, ..TrackerConfig::default() };
    cfg.validate().map_err(|e| invalid(e.to_string()))?;
    Ok(cfg)
}

pub fn analyze(args: &AnalyzeArgs) -> Result<()> {
    if args.common.backend.float {
        analyze_with::<f64>(args)
    } else {
        analyze_with::<Rational>(args)
    }
}

fn analyze_with<T: Scalar>(args: &AnalyzeArgs) -> Result<()> {
    let cfg = if args.motion { Some(tracker_config(args.steps, 1e-11, 0.05, args.seed)?) } else { None };
    let seed = quad_seed()?;
    let input = input::load::<T>(&args.common.file)?;
    let p = input.dh_params()?;
    let dims = coupling_dims(&input);
    let quads = quadpoly::invariant_quads(&p);
    let bonds = BondConditionReport::from_quads(&quads);
    let diagram = report::diagram_from_conditions(&bonds, &dims);
    let families = hexlink::classify(&p);
    let genus = genus_bound(&dims);
    let mut warnings = families.warnings.clone();
    if dims != families.coupling_dimensions {
        warnings.push(format!(
            "coupling dimensions from the axes {:?} differ from those read off the DH table {:?}",
            dims, families.coupling_dimensions
        ));
    }
    let elimination = match &input {
        Input::Lines(l) => Some(quadpoly::crosscheck_invariant_vs_elim(l, seed)),
        Input::Dh(_) => None,
    };
    let witness: Option<Result<MobilityWitness>> = cfg.map(|cfg| {
        let l = float_linkage(&input, args.seed)?;
        Ok(motion::mobility_witness(&l, &cfg)?)
    });

    if args.common.format.json {
        let mut out = json!({
            "backend": backend_name::<T>(),
            "input": input.kind(),
            "dh": report::dh_json(&p),
            "coupling_dimensions": dims,
            "invariant_quads": report::quads_json(&quads),
            "bond_conditions": report::bonds_json(&bonds),
            "maximal_bond_diagram": match &diagram {
                Ok(d) => json!({ "diagram": d, "upper_bound": true }),
                Err(why) => json!({ "diagram": Value::Null, "reason": why }),
            },
            "flags": report::flags_json(&families),
            "families": report::families_json(&families),
            "genus": report::genus_json(&genus),
            "warnings": warnings,
        });
        if let Some(e) = &elimination {
            out["elimination_check"] = match e {
                Ok(c) => json!({ "seed": seed, "matches_closed_form": c.matches, "max_deviation": c.max_deviation }),
                Err(err) => json!({ "seed": seed, "error": err.to_string() }),
            };
        }
        if let Some(w) = &witness {
            out["motion"] = match w {
                Ok(w) => report::witness_json(w),
                Err(err) => json!({ "error": err.to_string() }),
            };
        }
        return print_json(&out);
    }

    let mut out = format!("hexlink analysis ({} backend, {} input)\n\n", backend_name::<T>(), input.kind());
    out += &report::dh_text(&p);
    out += "\n";
    out += &report::dims_text(&dims);
    out += "\n";
    out += &report::quads_text("Invariant quad polynomials", &quads);
    if let Some(e) = &elimination {
        out += &match e {
            Ok(c) if c.matches => format!("  elimination on the axes (seed {seed}) agrees with the closed form\n"),
            Ok(c) => format!("  elimination on the axes (seed {seed}) differs from the closed form by {:e}\n", c.max_deviation),
            Err(err) => format!("  elimination on the axes unavailable: {err}\n"),
        };
    }
    out += "\n";
    out += &report::bonds_text(&bonds);
    out += &match &diagram {
        Ok(d) if d.is_empty() => "  maximal bond diagram (upper bound): no connections\n".to_string(),
        Ok(d) => format!("  maximal bond diagram (upper bound): {d}\n"),
        Err(why) => format!("  no bond diagram bound: {why}\n"),
    };
    out += "\n";
    out += &report::families_text(&families);
    out += "\n";
    out += &report::genus_text(&genus);
    for w in &warnings {
        out += &format!("warning: {w}\n");
    }
    if let Some(w) = &witness {
        out += "\n";
        out += &match w {
            Ok(w) => report::witness_text(w),
            Err(err) => format!("Motion witness unavailable: {err}\n"),
        };
    }
    emit(&out)
}

pub fn classify(args: &CommonArgs) -> Result<()> {
    if args.backend.float {
        classify_with::<f64>(args)
    } else {
        classify_with::<Rational>(args)
    }
}

fn classify_with<T: Scalar>(args: &CommonArgs) -> Result<()> {
    let input = input::load::<T>(&args.file)?;
    let p = input.dh_params()?;
    let dims = coupling_dims(&input);
    let families = hexlink::classify(&p);
    let genus = genus_bound(&dims);
    if args.format.json {
        return print_json(&json!({
            "backend": backend_name::<T>(),
            "input": input.kind(),
            "coupling_dimensions": dims,
            "flags": report::flags_json(&families),
            "families": report::families_json(&families),
            "genus": report::genus_json(&genus),
            "warnings": families.warnings,
        }));
    }
    let mut out = report::dims_text(&dims);
    out += &report::families_text(&families);
    out += &report::genus_text(&genus);
    for w in &families.warnings {
        out += &format!("warning: {w}\n");
    }
    emit(&out)
}

pub fn quadpoly(args: &QuadpolyArgs) -> Result<()> {
    if args.common.backend.float {
        quadpoly_with::<f64>(args)
    } else {
        quadpoly_with::<Rational>(args)
    }
}

/// Axes for elimination: as given, an exactly closing synthesis, or (float
/// only) a numerical assembly.
fn elimination_axes<T: Scalar>(input: &Input<T>, seed: u64) -> Result<Linkage6R<T>> {
    match input {
        Input::Lines(l) => Ok(l.clone()),
        Input::Dh(p) => {
            if let Ok(syn) = lines_from_dh(p) {
                if syn.closes() {
                    return Ok(syn.linkage);
                }
            }
            if T::EXACT {
                return Err(invalid(
                    "--elim needs axes: this DH table does not close exactly with zero joint rotations (use --float or a lines file)",
                ));
            }
            let l = float_linkage(input, seed)?;
            let axes = l.axes().clone().map(|a| {
                let c = a.value().coeffs().map(T::from_f64);
                hexlink::Line::new(hexlink::DualQuaternion::new(c))
            });
            let axes: Vec<_> = axes.into_iter().collect::<hexlink::Result<_>>()?;
            Ok(Linkage6R::new(axes.try_into().unwrap_or_else(|_| unreachable!("six axes")))?)
        }
    }
}

fn quadpoly_with<T: Scalar>(args: &QuadpolyArgs) -> Result<()> {
    let seed = quad_seed()?;
    let input = input::load::<T>(&args.common.file)?;
    let p = input.dh_params()?;
    let dims = coupling_dims(&input);
    let (quads, check): (InvariantQuadSet<T>, Option<(bool, f64)>) = if args.elim {
        let l = elimination_axes(&input, args.seed)?;
        let c = quadpoly::crosscheck_invariant_vs_elim(&l, seed).context("elimination failed")?;
        (c.elimination, Some((c.matches, c.max_deviation)))
    } else {
        (quadpoly::invariant_quads(&p), None)
    };
    let bonds = BondConditionReport::from_quads(&quads);
    let diagram = report::diagram_from_conditions(&bonds, &dims);
    let source = if args.elim { "elimination" } else { "closed form" };
    if args.common.format.json {
        let mut out = json!({
            "backend": backend_name::<T>(),
            "source": source,
            "invariant_quads": report::quads_json(&quads),
            "bond_conditions": report::bonds_json(&bonds),
            "maximal_bond_diagram": diagram.as_ref().ok(),
        });
        if let Some((matches, dev)) = check {
            out["seed"] = json!(seed);
            out["matches_closed_form"] = json!(matches);
            out["max_deviation"] = json!(dev);
        }
        return print_json(&out);
    }
    let mut out = report::quads_text(&format!("Invariant quad polynomials ({source})"), &quads);
    if let Some((matches, dev)) = check {
        out += &if matches {
            format!("  agrees with the closed form (seed {seed})\n")
        } else {
            format!("  differs from the closed form by {dev:e} (seed {seed})\n")
        };
    }
    out += &report::bonds_text(&bonds);
    out += &match &diagram {
        Ok(d) if d.is_empty() => "  maximal bond diagram (upper bound): no connections\n".to_string(),
        Ok(d) => format!("  maximal bond diagram (upper bound): {d}\n"),
        Err(why) => format!("  no bond diagram bound: {why}\n"),
    };
    emit(&out)
}

/// Linkage file with one axis per row.
fn lines_file<T: Scalar>(l: &Linkage6R<T>) -> String {
    let rows: Vec<String> =
        l.axes().iter().map(|a| Value::Array(a.value().coeffs().iter().map(crate::numfmt::json).collect()).to_string()).collect();
    format!("{{\n  \"lines\": [\n    {}\n  ]\n}}\n", rows.join(",\n    "))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => emit(text),
    }
}

pub fn synth(args: &SynthArgs) -> Result<()> {
    let BackendArgs { exact, float } = args.backend;
    let text = if float {
        synth_float(&args.file, args.seed)?
    } else {
        let Input::Dh(p) = input::load::<Rational>(&args.file)? else {
            return Err(invalid("synth expects a \"dh\" table"));
        };
        match lines_from_dh(&p) {
            Ok(syn) if syn.closes() => lines_file(&syn.linkage),
            _ if exact => {
                return Err(invalid(
                    "this DH table has no exact synthesis with zero joint rotations; drop --exact to search for a numerical assembly",
                ))
            }
            _ => {
                eprintln!("note: no exact synthesis with zero joint rotations; searching for a numerical assembly");
                synth_float(&args.file, args.seed)?
            }
        }
    };
    write_output(args.out.as_deref(), &text)
}

fn synth_float(path: &Path, seed: u64) -> Result<String> {
    let Input::Dh(p) = input::load::<f64>(path)? else {
        return Err(invalid("synth expects a \"dh\" table"));
    };
    let l = assemble(&p, seed).map_err(|e| anyhow!("no real assembly found for the DH table: {e}"))?;
    Ok(lines_file(&l))
}

pub fn sample_motion(args: &SampleMotionArgs) -> Result<()> {
    let cfg = tracker_config(args.steps, args.tol, args.step_size, args.seed)?;
    let input = input::load::<f64>(&args.file)?;
    let l = float_linkage(&input, args.seed)?;
    let track = motion::track(&l, &cfg)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["step", "t1", "t2", "t3", "t4", "t5", "t6", "residual", "jac_rank"])?;
    for s in &track.samples {
        let mut row = vec![s.step.to_string()];
        row.extend(s.angles.iter().map(|a| a.to_string()));
        row.push(format!("{:e}", s.residual));
        row.push(s.jac_rank.to_string());
        w.write_record(&row)?;
    }
    let csv = String::from_utf8(w.into_inner().map_err(|e| anyhow!("csv buffer: {e}"))?)?;
    write_output(args.out.as_deref(), &csv)?;
    let witness = witness_from_track(&l, &track);
    eprintln!("{} samples, stop: {}, verdict: {}", witness.samples, report::stop_text(track.stop), report::verdict_text(witness.verdict));
    if track.samples.is_empty() {
        eprintln!("warning: no motion found at this resolution (not a proof of rigidity)");
    }
    Ok(())
}

fn parse_pair(s: &str) -> Result<(usize, usize)> {
    let bad = || invalid(format!("--pair: expected two distinct links 'i,j' in 1..6, got '{s}'"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let link = |v: &str| v.trim().parse::<usize>().ok().filter(|k| (1..=N).contains(k)).ok_or_else(bad);
    let (a, b) = (link(a)?, link(b)?);
    if a == b {
        return Err(bad());
    }
    Ok((a - 1, b - 1))
}

pub fn coupler_degree(args: &CouplerDegreeArgs) -> Result<()> {
    let diagram: BondDiagram = args.diagram.parse().map_err(|e: hexlink::Error| invalid(e.to_string()))?;
    let (i, j) = parse_pair(&args.pair)?;
    emit(&format!("{}\n", hexlink::coupler_degree(&diagram, i, j)?))
}
