//! One function per subcommand; each prints to stdout and returns the
//! process exit code. JSON output is built from sorted-key maps, so two
//! runs on the same input are byte-identical.

use std::process::ExitCode;

use bks_core::{
    born, catalog, colorable, conditional_probability, enumerate_critical, event_probability,
    hardy_run, nonlocality_report, parity_certificate, state_reduce, Census, Clash,
    ConstraintSystem, ContradictionReport, HardyOutcome, LocalEvent, Mode, ParityCertificate,
    RaySet, Scalar, State, TraceEvent,
};
use serde_json::{json, Value};

use crate::input::{ray_line, source_label};
use crate::SetSource;

const EXIT_OK: u8 = 0;
const EXIT_NO_FINDING: u8 = 2;

fn emit_json(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

fn rational_str(x: &Scalar) -> String {
    x.to_string()
}

fn ray_json(set: &RaySet, ids: &[usize]) -> Value {
    Value::Array(
        ids.iter()
            .map(|&id| Value::String(ray_line(set.ray(id))))
            .collect(),
    )
}

fn ray_tuples(set: &RaySet, ids: &[usize]) -> String {
    ids.iter()
        .map(|&id| set.ray(id).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

// ---------------------------------------------------------------- catalog

pub fn catalog_list(json: bool) -> anyhow::Result<ExitCode> {
    let entries = [catalog::ceg18(), catalog::peres24(), catalog::hardy_rays()];
    if json {
        let sets: Vec<Value> = entries
            .iter()
            .map(|e| {
                json!({
                    "key": e.key,
                    "rays": e.rays.len(),
                    "dim": e.rays.dim(),
                    "declared_bases": e.declared_bases.as_ref().map(Vec::len),
                    "notes": e.notes,
                    "fingerprint": e.rays.fingerprint(),
                })
            })
            .collect();
        emit_json(&json!({
            "ray_sets": sets,
            "states": catalog::STATE_KEYS,
        }));
    } else {
        for e in &entries {
            let declared = match &e.declared_bases {
                Some(b) => format!("{} declared bases", b.len()),
                None => "generated".to_string(),
            };
            println!(
                "{:<8} {:>2} rays  dim {}  {:<17} {}",
                e.key,
                e.rays.len(),
                e.rays.dim(),
                declared,
                e.notes
            );
        }
        println!("states: {}", catalog::STATE_KEYS.join(" "));
    }
    Ok(ExitCode::from(EXIT_OK))
}

pub fn catalog_show(key: &str) -> anyhow::Result<ExitCode> {
    let entry = catalog::ray_set(key)?;
    print!(
        "# {}: {} rays in dimension {}\n{}",
        entry.key,
        entry.rays.len(),
        entry.rays.dim(),
        entry.rays.to_text()
    );
    Ok(ExitCode::from(EXIT_OK))
}

// ------------------------------------------------------------------ graph

pub fn graph(set: &RaySet, json: bool) -> anyhow::Result<ExitCode> {
    let g = set.orthogonality_graph();
    if json {
        let edges: Vec<Value> = g.edges().into_iter().map(|(a, b)| json!([a, b])).collect();
        let degrees: Vec<usize> = (0..set.len()).map(|i| g.degree(i)).collect();
        emit_json(&json!({
            "rays": set.len(),
            "dim": set.dim(),
            "edges": edges,
            "degrees": degrees,
        }));
    } else {
        println!("{} rays, {} orthogonal pairs", set.len(), g.edge_count());
        for (id, ray) in set.iter().enumerate() {
            println!("{id:>3} {ray} degree {}", g.degree(id));
        }
    }
    Ok(ExitCode::from(EXIT_OK))
}

// ------------------------------------------------------------------ bases

pub fn bases(set: &RaySet, json: bool) -> anyhow::Result<ExitCode> {
    let bases = set.enumerate_bases();
    if json {
        let list: Vec<Value> = bases
            .iter()
            .map(|b| {
                json!({
                    "ids": b.ids(),
                    "rays": ray_json(set, b.ids()),
                })
            })
            .collect();
        emit_json(&json!({"count": bases.len(), "bases": list}));
    } else {
        println!("{} bases", bases.len());
        for (k, b) in bases.iter().enumerate() {
            println!("{k:>3}: {}", ray_tuples(set, b.ids()));
        }
    }
    Ok(ExitCode::from(EXIT_OK))
}

// ------------------------------------------------------------------ color

fn certificate_json(cs: &ConstraintSystem, cert: &ParityCertificate) -> Value {
    let coverage = cert.coverage(cs);
    let uniform = coverage
        .values()
        .next()
        .copied()
        .filter(|&c| coverage.values().all(|&v| v == c));
    json!({
        "selected_bases": cert.constraint_indices(),
        "selected_count": cert.len(),
        "rays_covered": coverage.len(),
        "coverage_uniform": uniform,
    })
}

fn certificate_text(cs: &ConstraintSystem, cert: &ParityCertificate) -> String {
    let coverage = cert.coverage(cs);
    let uniform = coverage
        .values()
        .next()
        .copied()
        .filter(|&c| coverage.values().all(|&v| v == c));
    match uniform {
        Some(c) => format!(
            "parity certificate: {} bases (odd), {} rays each covered {c}x",
            cert.len(),
            coverage.len()
        ),
        None => format!(
            "parity certificate: {} bases (odd), {} rays covered evenly",
            cert.len(),
            coverage.len()
        ),
    }
}

pub fn color(set: &RaySet, mode: Mode, json: bool) -> anyhow::Result<ExitCode> {
    let cs = ConstraintSystem::build(set, mode);
    let outcome = colorable(&cs);
    let cert = if outcome.is_colorable() {
        None
    } else {
        parity_certificate(&cs)
    };
    if json {
        let witness = outcome.witness().map(|w| {
            json!({
                "ones": w.ones(),
                "one_rays": ray_json(set, &w.ones()),
            })
        });
        emit_json(&json!({
            "verdict": if outcome.is_colorable() { "COLORABLE" } else { "UNCOLORABLE" },
            "rays": set.len(),
            "bases": cs.constraints().len(),
            "pairs": cs.pairs().len(),
            "mode": mode.to_string(),
            "witness": witness,
            "parity_certificate": cert.as_ref().map(|c| certificate_json(&cs, c)),
        }));
    } else {
        let verdict = if outcome.is_colorable() {
            "COLORABLE"
        } else {
            "UNCOLORABLE"
        };
        println!(
            "{verdict} ({} rays, {} bases, mode {mode})",
            set.len(),
            cs.constraints().len()
        );
        if let Some(w) = outcome.witness() {
            println!("witness (rays valued 1): {}", ray_tuples(set, &w.ones()));
        }
        if let Some(cert) = &cert {
            println!("{}", certificate_text(&cs, cert));
        }
    }
    Ok(ExitCode::from(EXIT_OK))
}

// ----------------------------------------------------------------- parity

pub fn parity(set: &RaySet, json: bool) -> anyhow::Result<ExitCode> {
    let cs = ConstraintSystem::build(set, Mode::BasesOnly);
    let cert = parity_certificate(&cs);
    if json {
        emit_json(&json!({
            "exists": cert.is_some(),
            "total_bases": cs.constraints().len(),
            "certificate": cert.as_ref().map(|c| certificate_json(&cs, c)),
        }));
    } else {
        match &cert {
            Some(c) => {
                println!("{}", certificate_text(&cs, c));
                println!(
                    "selected bases: {}",
                    c.constraint_indices()
                        .iter()
                        .map(|i| i.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                );
            }
            None => println!(
                "no parity certificate ({} bases admit no odd even-covering selection)",
                cs.constraints().len()
            ),
        }
    }
    Ok(ExitCode::from(if cert.is_some() {
        EXIT_OK
    } else {
        EXIT_NO_FINDING
    }))
}

// --------------------------------------------------------------- critical

fn counts_json(census: &Census) -> Value {
    Value::Array(
        census
            .counts()
            .into_iter()
            .map(|(size, count)| json!({"size": size, "count": count}))
            .collect(),
    )
}

fn counts_text(census: &Census) -> String {
    let counts = census.counts();
    if counts.is_empty() {
        return "none".to_string();
    }
    counts
        .into_iter()
        .map(|(size, count)| format!("{size} -> {count}"))
        .collect::<Vec<_>>()
        .join(", ")
}

#[allow(clippy::too_many_arguments)]
pub fn critical(
    set: &RaySet,
    source: &SetSource,
    min: usize,
    max: Option<usize>,
    mode: Option<Mode>,
    threads: Option<usize>,
    json: bool,
) -> anyhow::Result<ExitCode> {
    let max = max.unwrap_or(set.len());
    if min > max {
        anyhow::bail!("--min {min} exceeds --max {max}");
    }
    let primary_mode = mode.unwrap_or(Mode::BasesOnly);
    let run = |m: Mode| -> anyhow::Result<Census> {
        let census = match threads {
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
                pool.install(|| enumerate_critical(set, m, min, max))?
            }
            None => enumerate_critical(set, m, min, max)?,
        };
        Ok(census)
    };
    let census = run(primary_mode)?;
    // Without an explicit --mode, cross-check the other semantics and flag
    // any disagreement instead of silently choosing.
    let cross = if mode.is_none() {
        let other = run(Mode::BasesAndPairs)?;
        let agrees = other.sets() == census.sets();
        Some((other, agrees))
    } else {
        None
    };
    if json {
        let sets: Vec<Value> = census
            .sets()
            .iter()
            .map(|s| {
                json!({
                    "size": s.size(),
                    "ids": s.ids(),
                    "rays": ray_json(set, s.ids()),
                })
            })
            .collect();
        emit_json(&json!({
            "parent": {
                "source": source_label(source),
                "rays": set.len(),
                "fingerprint": set.fingerprint(),
            },
            "mode": census.mode.to_string(),
            "size_min": census.size_min,
            "size_max": census.size_max,
            "counts": counts_json(&census),
            "sets": sets,
            "cross_check": cross.as_ref().map(|(other, agrees)| json!({
                "mode": other.mode.to_string(),
                "counts": counts_json(other),
                "agrees": agrees,
            })),
        }));
    } else {
        println!(
            "census of {} ({} rays, fingerprint {}): mode {}, sizes {}..{}",
            source_label(source),
            set.len(),
            &set.fingerprint()[..16],
            census.mode,
            census.size_min,
            census.size_max
        );
        println!("counts: {}", counts_text(&census));
        if let Some((other, agrees)) = &cross {
            if *agrees {
                println!("cross-check ({}): agrees", other.mode);
            } else {
                println!(
                    "cross-check ({}): DISCREPANCY, counts {}",
                    other.mode,
                    counts_text(other)
                );
            }
        }
        println!("{} critical sets", census.sets().len());
        for s in census.sets() {
            let ids = s
                .ids()
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            println!("size {:>2}: {{{ids}}}", s.size());
        }
    }
    Ok(ExitCode::from(EXIT_OK))
}

// ----------------------------------------------------------------- reduce

pub fn reduce(set: &RaySet, state: &State, json: bool) -> anyhow::Result<ExitCode> {
    let bases = set.enumerate_bases();
    let reduced = state_reduce(set, &bases, state)?;
    let cs = reduced.to_constraint_system();
    let outcome = colorable(&cs);
    let cert = if outcome.is_colorable() {
        None
    } else {
        parity_certificate(&cs)
    };
    if json {
        let constraints: Vec<Value> = reduced
            .constraints
            .iter()
            .map(|c| {
                json!({
                    "members": c.members,
                    "rays": ray_json(set, &c.members),
                    "span_ok": c.span_ok,
                })
            })
            .collect();
        emit_json(&json!({
            "state": ray_line(state.ray()),
            "state_id": reduced.state_id,
            "removed": reduced.removed,
            "kept": reduced.kept,
            "dropped_bases": reduced.dropped_bases,
            "constraints": constraints,
            "all_spans_ok": reduced.all_spans_ok(),
            "verdict": if outcome.is_colorable() { "COLORABLE" } else { "UNCOLORABLE" },
            "parity_certificate": cert.as_ref().map(|c| certificate_json(&cs, c)),
        }));
    } else {
        let membership = match reduced.state_id {
            Some(id) => format!("in set as id {id}"),
            None => "not in set".to_string(),
        };
        println!("reduce by state {} ({membership})", state.ray());
        println!(
            "removed {} rays (state and its orthogonals): {}",
            reduced.removed.len(),
            ray_tuples(set, &reduced.removed)
        );
        println!(
            "kept {} rays: {}",
            reduced.kept.len(),
            ray_tuples(set, &reduced.kept)
        );
        println!(
            "dropped {} bases containing the state",
            reduced.dropped_bases.len()
        );
        println!(
            "{} constraints remain ({}):",
            reduced.constraints.len(),
            if reduced.all_spans_ok() {
                "all span checks pass"
            } else {
                "some span checks FAILED; flagged constraints are exclusivity-only"
            }
        );
        for c in &reduced.constraints {
            let tag = if c.span_ok { "span ok" } else { "SPAN FAILED" };
            println!("  sum{{{}}} = 1  [{tag}]", ray_tuples(set, &c.members));
        }
        let verdict = if outcome.is_colorable() {
            "COLORABLE"
        } else {
            "UNCOLORABLE"
        };
        println!("reduced system: {verdict}");
        if let Some(cert) = &cert {
            println!("{}", certificate_text(&cs, cert));
        }
    }
    Ok(ExitCode::from(EXIT_OK))
}

// ------------------------------------------------------------------ hardy

fn clash_text(set: &RaySet, cs: &ConstraintSystem, clash: &Clash) -> String {
    match clash {
        Clash::PairBothOne { a, b } => format!(
            "orthogonal pair {}, {} both valued 1",
            set.ray(*a),
            set.ray(*b)
        ),
        Clash::TwoOnesInConstraint { constraint, a, b } => format!(
            "basis {{{}}} holds two 1s: {}, {}",
            ray_tuples(set, &cs.constraints()[*constraint]),
            set.ray(*a),
            set.ray(*b)
        ),
        Clash::AllZeroConstraint { constraint } => format!(
            "basis {{{}}} has every member valued 0",
            ray_tuples(set, &cs.constraints()[*constraint])
        ),
    }
}

fn clash_json(set: &RaySet, cs: &ConstraintSystem, clash: &Clash) -> Value {
    match clash {
        Clash::PairBothOne { a, b } => json!({
            "kind": "pair_both_one",
            "ids": [a, b],
            "rays": ray_json(set, &[*a, *b]),
        }),
        Clash::TwoOnesInConstraint { constraint, a, b } => json!({
            "kind": "two_ones_in_basis",
            "basis": constraint,
            "basis_rays": ray_json(set, &cs.constraints()[*constraint]),
            "ids": [a, b],
            "rays": ray_json(set, &[*a, *b]),
        }),
        Clash::AllZeroConstraint { constraint } => json!({
            "kind": "all_zero_basis",
            "basis": constraint,
            "basis_rays": ray_json(set, &cs.constraints()[*constraint]),
        }),
    }
}

fn trace_json(set: &RaySet, cs: &ConstraintSystem, report: &ContradictionReport) -> Vec<Value> {
    report
        .trace
        .iter()
        .map(|event| match event {
            TraceEvent::Seed { id, value } => json!({
                "kind": "seed",
                "id": id,
                "ray": ray_line(set.ray(*id)),
                "value": u8::from(*value),
            }),
            TraceEvent::Forced { id, value, reason } => {
                let reason = match reason {
                    bks_core::Reason::Constraint(ci) => json!({
                        "kind": "basis",
                        "basis": ci,
                        "basis_rays": ray_json(set, &cs.constraints()[*ci]),
                    }),
                    bks_core::Reason::Pair(a, b) => json!({
                        "kind": "pair",
                        "rays": ray_json(set, &[*a, *b]),
                    }),
                };
                json!({
                    "kind": "forced",
                    "id": id,
                    "ray": ray_line(set.ray(*id)),
                    "value": u8::from(*value),
                    "reason": reason,
                })
            }
        })
        .collect()
}

pub fn hardy(
    set: &RaySet,
    pre: &State,
    post: Option<&State>,
    json: bool,
) -> anyhow::Result<ExitCode> {
    let outcome = hardy_run(set, pre, post)?;
    let cs = ConstraintSystem::build(set, Mode::BasesAndPairs);
    match outcome {
        HardyOutcome::Contradiction(report) => {
            if json {
                emit_json(&json!({
                    "outcome": "CONTRADICTION",
                    "pre": ray_line(pre.ray()),
                    "post": post.map(|p| ray_line(p.ray())),
                    "trace": trace_json(set, &cs, &report),
                    "clash": clash_json(set, &cs, &report.clash),
                }));
            } else {
                println!("CONTRADICTION");
                for event in &report.trace {
                    match event {
                        TraceEvent::Seed { id, value } => {
                            println!("  seed   v{} = {}", set.ray(*id), u8::from(*value));
                        }
                        TraceEvent::Forced { id, value, reason } => {
                            let why = match reason {
                                bks_core::Reason::Constraint(ci) => {
                                    format!("basis {{{}}}", ray_tuples(set, &cs.constraints()[*ci]))
                                }
                                bks_core::Reason::Pair(a, b) => {
                                    format!("pair {}, {}", set.ray(*a), set.ray(*b))
                                }
                            };
                            println!("  forced v{} = {} by {why}", set.ray(*id), u8::from(*value));
                        }
                    }
                }
                println!("clash: {}", clash_text(set, &cs, &report.clash));
            }
            Ok(ExitCode::from(EXIT_OK))
        }
        HardyOutcome::NoContradiction(fixpoint) => {
            if json {
                let assigned: Vec<Value> = fixpoint
                    .iter()
                    .map(|(id, v)| {
                        json!({
                            "id": id,
                            "ray": ray_line(set.ray(id)),
                            "value": u8::from(v),
                        })
                    })
                    .collect();
                emit_json(&json!({
                    "outcome": "NO_CONTRADICTION",
                    "pre": ray_line(pre.ray()),
                    "post": post.map(|p| ray_line(p.ray())),
                    "fixpoint": assigned,
                }));
            } else {
                println!(
                    "NO CONTRADICTION (propagation fixpoint assigns {} of {} rays)",
                    fixpoint.len(),
                    set.len()
                );
                for (id, v) in fixpoint.iter() {
                    println!("  v{} = {}", set.ray(id), u8::from(v));
                }
            }
            Ok(ExitCode::from(EXIT_NO_FINDING))
        }
    }
}

// ------------------------------------------------------------------- prob

pub fn prob(
    state: &State,
    ray: Option<&str>,
    event: Option<&str>,
    given: Option<&str>,
    json: bool,
) -> anyhow::Result<ExitCode> {
    let (query, probability) = match (ray, event) {
        (Some(components), None) => {
            let target = crate::input::parse_state(components)?;
            let p = born(state, target.ray())?;
            (format!("P[{}]", target.ray()), p)
        }
        (None, Some(event)) => {
            let event: LocalEvent = event.parse().map_err(anyhow::Error::msg)?;
            match given {
                Some(given) => {
                    let given: LocalEvent = given.parse().map_err(anyhow::Error::msg)?;
                    let p = conditional_probability(state, &event, &given)?;
                    (format!("P({event} | {given})"), p)
                }
                None => {
                    let p = event_probability(state, &event)?;
                    (format!("P({event})"), p)
                }
            }
        }
        _ => unreachable!("clap enforces exactly one query"),
    };
    if json {
        emit_json(&json!({
            "state": ray_line(state.ray()),
            "query": query,
            "probability": rational_str(&probability),
        }));
    } else {
        println!("{query} = {}", rational_str(&probability));
    }
    Ok(ExitCode::from(EXIT_OK))
}

// ----------------------------------------------------------------- report

pub fn report(pre: &State, post: &State, json: bool) -> anyhow::Result<ExitCode> {
    let record = nonlocality_report(pre, post)?;
    if json {
        let forced: Vec<Value> = record
            .forced
            .iter()
            .map(|f| {
                json!({
                    "particle": f.particle.to_string(),
                    "ray": ray_line(&f.ray),
                    "value": u8::from(f.value),
                })
            })
            .collect();
        emit_json(&json!({
            "pre": ray_line(pre.ray()),
            "post": ray_line(post.ray()),
            "cond_z1_minus_given_x2_plus": rational_str(&record.cond_z1_given_x2),
            "cond_z2_minus_given_x1_plus": rational_str(&record.cond_z2_given_x1),
            "joint_z1_minus_z2_minus": rational_str(&record.joint_z_minus),
            "joint_x1_plus_x2_plus": rational_str(&record.joint_x_plus),
            "nonlocality_pattern": record.is_nonlocality_pattern(),
            "forced": forced,
        }));
    } else {
        println!(
            "P(z1=-1 | x2=+1) = {}",
            rational_str(&record.cond_z1_given_x2)
        );
        println!(
            "P(z2=-1 | x1=+1) = {}",
            rational_str(&record.cond_z2_given_x1)
        );
        println!("P(z1=-1, z2=-1) = {}", rational_str(&record.joint_z_minus));
        println!("P(x1=+1, x2=+1) = {}", rational_str(&record.joint_x_plus));
        println!(
            "nonlocality pattern (1, 1, 0, >0): {}",
            if record.is_nonlocality_pattern() {
                "yes"
            } else {
                "no"
            }
        );
        println!("forced local values:");
        for f in &record.forced {
            println!(
                "  particle {}: v{} = {}",
                f.particle,
                f.ray,
                u8::from(f.value)
            );
        }
    }
    Ok(ExitCode::from(EXIT_OK))
}
