use std::fmt::Write;

use khoma::bracket::{bracket_spanning_tree_with, bracket_state_sum};
use khoma::corpus;
use khoma::diagram::{enumerate_k1, PlanarDiagram};
use khoma::expansion::{extremal_numbering, ExtremalMode, Numbering};
use khoma::homalg::homology_z;
use khoma::khovanov::{
    build_cube, check_alternating_support, check_hopf_addition, check_rank_bound, khovanov_homology,
    spanning_tree_reduction,
};
use khoma::lee::{coloring_decomposition_check, knot_degree_check, lee_homology, lee_structure};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::Failure;

#[derive(Serialize)]
struct Outcome {
    diagram: String,
    check: &'static str,
    status: &'static str,
    #[serde(skip_serializing_if = "Value::is_null")]
    diff: Value,
}

type CheckResult = Result<Option<Value>, khoma::Error>;

fn pass() -> CheckResult {
    Ok(None)
}

fn fail(v: Value) -> CheckResult {
    Ok(Some(v))
}

fn bracket(d: &PlanarDiagram) -> CheckResult {
    let expected = bracket_state_sum(d);
    let mut rng = StdRng::seed_from_u64(0x6b68);
    let n = d.crossing_count();
    let numberings = std::iter::once(Numbering::identity(n)).chain((0..10).map(|_| Numbering::random(n, &mut rng)));
    for numbering in numberings {
        let got = bracket_spanning_tree_with(d, &numbering)?;
        if got != expected {
            return fail(json!({"numbering": numbering.order(), "state_sum": expected.to_string(), "spanning_tree": got.to_string()}));
        }
    }
    pass()
}

fn euler(d: &PlanarDiagram) -> CheckResult {
    let chi = build_cube(d)?.euler_characteristic();
    let expected = bracket_state_sum(d);
    if chi == expected {
        pass()
    } else {
        fail(json!({"euler": chi.to_string(), "bracket": expected.to_string()}))
    }
}

fn thm23(d: &PlanarDiagram) -> CheckResult {
    let r = check_rank_bound(d)?;
    if r.passed() {
        pass()
    } else {
        fail(json!({"total": r.total, "bound_total": r.bound_total, "violations": r.violations}))
    }
}

fn reduction(d: &PlanarDiagram) -> CheckResult {
    let cube = build_cube(d)?;
    let expected = homology_z(&cube)?;
    let n = d.crossing_count();
    let mut rng = StdRng::seed_from_u64(0x7472);
    for numbering in std::iter::once(Numbering::identity(n)).chain((0..2).map(|_| Numbering::random(n, &mut rng))) {
        let model = spanning_tree_reduction(d, &cube, &numbering)?;
        let got = homology_z(&model.complex)?;
        if got != expected {
            return fail(json!({"numbering": numbering.order(), "reduced": got, "cube": expected}));
        }
    }
    pass()
}

fn alternating(d: &PlanarDiagram) -> CheckResult {
    let r = check_alternating_support(d)?;
    if r.passed() {
        pass()
    } else {
        fail(json!({"clauses": r.clauses.iter().filter(|c| !c.passed).collect::<Vec<_>>()}))
    }
}

fn extremal(d: &PlanarDiagram) -> CheckResult {
    for state in enumerate_k1(d) {
        for mode in [ExtremalMode::Lower, ExtremalMode::Upper] {
            if let Err(e) = extremal_numbering(d, &state, mode) {
                return fail(json!({"state": state.to_string(), "mode": format!("{mode:?}"), "error": e.to_string()}));
            }
        }
    }
    pass()
}

fn hopf(d: &PlanarDiagram) -> CheckResult {
    let r = check_hopf_addition(d)?;
    if r.passed() {
        pass()
    } else {
        fail(json!({"trials": r.trials}))
    }
}

fn lee(d: &PlanarDiagram, components: usize) -> CheckResult {
    let s = lee_structure(d);
    if !s.passed() {
        return fail(json!({"structure": s}));
    }
    let dim = lee_homology(d)?.rational.total_rank();
    let kh = khovanov_homology(d, false)?.total_rank();
    if dim != 1 << components || dim > kh {
        return fail(json!({"lee_dimension": dim, "expected": 1usize << components, "khovanov_rank": kh}));
    }
    if components == 1 {
        let r = knot_degree_check(d)?;
        if !r.passed {
            return fail(json!({"degrees": r.degrees}));
        }
    }
    pass()
}

fn colorings(d: &PlanarDiagram) -> CheckResult {
    let r = coloring_decomposition_check(d)?;
    if r.passed() {
        pass()
    } else {
        fail(json!({
            "dimensions_add_up": r.dimensions_add_up,
            "cross_entries": r.cross_entries,
            "crossed_blocks_acyclic": r.crossed_blocks_acyclic,
            "crossingless_count": r.crossingless_count,
        }))
    }
}

struct Target {
    name: String,
    diagram: PlanarDiagram,
    components: usize,
    alternating: bool,
    reduced: bool,
}

fn targets(names: &[String], all: bool) -> Result<Vec<Target>, Failure> {
    let mut out = Vec::new();
    let selected: Vec<&corpus::CorpusEntry> = if names.is_empty() {
        corpus::ENTRIES.iter().collect()
    } else {
        names
            .iter()
            .map(|n| corpus::get(n).ok_or_else(|| Failure::Input(format!("no corpus entry `{n}`"))))
            .collect::<Result<_, _>>()?
    };
    for e in selected {
        out.push(Target {
            name: e.name.to_string(),
            diagram: e.diagram(),
            components: e.components,
            alternating: e.alternating,
            reduced: e.reduced,
        });
    }
    if all {
        for (name, diagram) in corpus::connected_sums().map_err(|e| Failure::Check(e.to_string()))? {
            let sd = khoma::diagram::SmoothedDiagram::unsmoothed(&diagram);
            let mut reduced = true;
            for c in 0..diagram.crossing_count() {
                reduced &= !sd.is_splitting(c).map_err(|e| Failure::Check(e.to_string()))?;
            }
            out.push(Target {
                name,
                components: diagram.component_count(),
                alternating: diagram.is_alternating(),
                reduced,
                diagram,
            });
        }
    }
    Ok(out)
}

pub fn run(names: &[String], all: bool, max_crossings: usize, json: bool) -> Result<String, Failure> {
    let mut outcomes = Vec::new();
    for t in targets(names, all)? {
        let d = &t.diagram;
        let n = d.crossing_count();
        let connected = khoma::diagram::black_graph(d).is_ok();
        let knot = t.components == 1;
        let plan: Vec<(&'static str, bool, Box<dyn Fn() -> CheckResult + '_>)> = vec![
            ("bracket", connected, Box::new(|| bracket(d))),
            ("euler", true, Box::new(|| euler(d))),
            ("thm23", connected, Box::new(|| thm23(d))),
            ("reduction", connected, Box::new(|| reduction(d))),
            ("alternating", knot && t.alternating, Box::new(|| alternating(d))),
            ("extremal", knot && t.alternating && t.reduced, Box::new(|| extremal(d))),
            ("hopf", connected && n <= 8, Box::new(|| hopf(d))),
            ("lee", true, Box::new(|| lee(d, t.components))),
            ("colorings", n <= 6, Box::new(|| colorings(d))),
        ];
        for (check, applicable, f) in plan {
            let (status, diff) = if !applicable || n > max_crossings {
                ("SKIP", Value::Null)
            } else {
                match f() {
                    Ok(None) => ("PASS", Value::Null),
                    Ok(Some(diff)) => ("FAIL", diff),
                    Err(e) => ("FAIL", json!({ "error": e.to_string() })),
                }
            };
            outcomes.push(Outcome {
                diagram: t.name.clone(),
                check,
                status,
                diff,
            });
        }
    }
    let failures: Vec<&Outcome> = outcomes.iter().filter(|o| o.status == "FAIL").collect();
    let out = if json {
        serde_json::to_string_pretty(&outcomes).expect("outcomes serialise") + "\n"
    } else {
        let mut out = String::new();
        for o in &outcomes {
            let _ = writeln!(out, "{:<4} {:<32} {}", o.status, o.diagram, o.check);
        }
        let passed = outcomes.iter().filter(|o| o.status == "PASS").count();
        let _ = writeln!(out, "{passed} passed, {} failed, {} skipped", failures.len(), outcomes.len() - passed - failures.len());
        out
    };
    if failures.is_empty() {
        Ok(out)
    } else {
        let diff = serde_json::to_string_pretty(&failures).expect("outcomes serialise");
        Err(Failure::Check(format!("{out}{diff}\n")))
    }
}
