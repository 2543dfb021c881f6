use std::collections::BTreeMap;
use std::fmt::Write;

use khoma::bracket::{bracket_spanning_tree_with, bracket_state_sum};
use khoma::corpus;
use khoma::diagram::{black_graph, enumerate_k1, PlanarDiagram};
use khoma::expansion::{expand, module_a_ranks, Numbering};
use khoma::homalg::BigradedHomology;
use khoma::khovanov::{check_alternating_support, check_hopf_addition, check_rank_bound, khovanov_homology};
use khoma::lee::{coloring_decomposition_check, lee_homology};
use serde_json::{json, Value};

use crate::table;
use crate::{Check, Failure, Method, Ring};

fn numbering(d: &PlanarDiagram, text: Option<&str>) -> Result<Numbering, Failure> {
    let n = d.crossing_count();
    let Some(text) = text else {
        return Ok(Numbering::identity(n));
    };
    let order = text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Input(format!("numbering `{text}`: {e}")))?;
    Numbering::new(order, n).map_err(|e| Failure::Input(e.to_string()))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialise") + "\n"
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialise")
}

/// `"(i,j)" -> rank`.
fn rank_map(h: &BigradedHomology) -> Value {
    rank_pairs(&h.ranks())
}

pub fn bracket(d: &PlanarDiagram, method: Method, order: Option<&str>, json: bool) -> Result<String, Failure> {
    let numbering = numbering(d, order)?;
    let state_sum = matches!(method, Method::StateSum | Method::Both).then(|| bracket_state_sum(d));
    let tree = match method {
        Method::SpanningTree | Method::Both => Some(bracket_spanning_tree_with(d, &numbering)?),
        Method::StateSum => None,
    };
    if let (Some(a), Some(b)) = (&state_sum, &tree) {
        if a != b {
            return Err(Failure::Check(pretty(&json!({
                "check": "bracket",
                "state_sum": a.to_string(),
                "spanning_tree": b.to_string(),
            }))));
        }
    }
    if json {
        let mut v = json!({});
        if let Some(p) = &state_sum {
            v["state_sum"] = to_value(p);
        }
        if let Some(p) = &tree {
            v["spanning_tree"] = to_value(p);
        }
        return Ok(pretty(&v));
    }
    let mut out = String::new();
    if let Some(p) = &state_sum {
        let _ = writeln!(out, "state sum:     {p}");
    }
    if let Some(p) = &tree {
        let _ = writeln!(out, "spanning tree: {p}");
    }
    Ok(out)
}

pub fn trees(d: &PlanarDiagram, order: Option<&str>, json: bool) -> Result<String, Failure> {
    let numbering = numbering(d, order)?;
    let graph = black_graph(d)?;
    let k1 = enumerate_k1(d);
    let leaves = expand(d, &numbering)?;
    let ranks = module_a_ranks(d, &numbering)?;
    if json {
        return Ok(pretty(&json!({
            "black_vertices": graph.vertex_count(),
            "spanning_trees": graph.matrix_tree_count().to_string(),
            "k1": k1.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "numbering": numbering.order(),
            "leaves": to_value(&leaves),
            "module_a": Value::Object(ranks.iter().map(|((i, j), r)| (format!("({i},{j})"), json!(r))).collect()),
        })));
    }
    let mut out = String::new();
    let _ = writeln!(out, "black graph: {} vertices, {} edges", graph.vertex_count(), d.crossing_count());
    let _ = writeln!(out, "spanning trees: {}", graph.matrix_tree_count());
    let _ = writeln!(out, "single-circle states: {}", k1.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" "));
    let _ = writeln!(out, "expansion with numbering {:?}:", numbering.order());
    let _ = writeln!(out, "  {:<12} {:>3} {:>3} {:>3} {:>4}  state", "leaf", "x", "y", "w", "r");
    for l in &leaves {
        let _ = writeln!(out, "  {:<12} {:>3} {:>3} {:>3} {:>4}  {}", l.word.to_string(), l.x, l.y, l.w, l.r_d_s, l.state);
    }
    let cells: Vec<String> = ranks.iter().map(|((i, j), r)| format!("({i},{j})x{r}")).collect();
    let _ = writeln!(out, "surviving module: {}", cells.join(" "));
    Ok(out)
}

pub fn homology(d: &PlanarDiagram, ring: Ring, normalize: bool, check: Option<Check>, json: bool) -> Result<String, Failure> {
    let h = khovanov_homology(d, normalize)?;
    let mut out = String::new();
    let mut report = json!({});
    if json {
        report["homology"] = match ring {
            Ring::Z => to_value(&h),
            Ring::Q => rank_map(&h),
        };
    } else {
        out.push_str(&table::bigraded(&h, ring == Ring::Z));
    }
    let wants = |c: Check| check == Some(c) || check == Some(Check::All);
    let mut failures = Vec::new();

    if wants(Check::Thm23) {
        let r = check_rank_bound(d)?;
        let _ = writeln!(out, "thm23: {} (rank {} <= {})", verdict(r.passed()), r.total, r.bound_total);
        if !r.passed() {
            failures.push(json!({"check": "thm23", "homology": rank_pairs(&r.homology_ranks), "bound": rank_pairs(&r.bound), "violations": r.violations}));
        }
        report["thm23"] = to_value(&r);
    }
    if wants(Check::Alt) {
        let r = check_alternating_support(d)?;
        let _ = writeln!(out, "alt: {} (n1 = {}, i- = {}, i+ = {})", verdict(r.passed()), r.n1, r.i_minus, r.i_plus);
        for c in &r.clauses {
            let state = if !c.applicable { "SKIP" } else { verdict(c.passed) };
            let _ = writeln!(out, "  {:<24} {state}", c.name);
        }
        if !r.passed() {
            failures.push(json!({"check": "alt", "clauses": r.clauses.iter().filter(|c| !c.passed).collect::<Vec<_>>()}));
        }
        report["alt"] = to_value(&r);
    }
    if wants(Check::Hopf) {
        let r = check_hopf_addition(d)?;
        let _ = writeln!(out, "hopf: {} (matching chirality: {})", verdict(r.passed()), r.matching().join(", "));
        if !r.passed() {
            failures.push(json!({"check": "hopf", "trials": r.trials}));
        }
        report["hopf"] = to_value(&r);
    }
    if !failures.is_empty() {
        return Err(Failure::Check(pretty(&json!({ "failures": failures }))));
    }
    Ok(if json { pretty(&report) } else { out })
}

fn rank_pairs(m: &BTreeMap<(i32, i32), usize>) -> Value {
    Value::Object(m.iter().map(|((i, j), r)| (format!("({i},{j})"), json!(r))).collect())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn lee(d: &PlanarDiagram, ring: Ring, colorings: bool, json: bool) -> Result<String, Failure> {
    let h = lee_homology(d)?;
    let mut out = String::new();
    let mut report = json!({});
    match ring {
        Ring::Z if json => report["integral"] = to_value(&h.integral),
        Ring::Z => out.push_str(&table::graded(&h.integral, true)),
        Ring::Q if json => report["rational"] = rank_map(&h.rational),
        Ring::Q => out.push_str(&table::bigraded(&h.rational, false)),
    }
    if colorings {
        let r = coloring_decomposition_check(d)?;
        let _ = writeln!(
            out,
            "colorings: {} ({} admissible, {} crossingless, expected 2^{})",
            verdict(r.passed()),
            r.blocks.len(),
            r.crossingless_count,
            r.components
        );
        for b in r.blocks.iter().filter(|b| b.crossings == 0) {
            let _ = writeln!(out, "  {}  {}", b.coloring, b.word);
        }
        if !r.passed() {
            return Err(Failure::Check(pretty(&json!({
                "check": "colorings",
                "dimensions_add_up": r.dimensions_add_up,
                "cross_entries": r.cross_entries,
                "crossed_blocks_acyclic": r.crossed_blocks_acyclic,
                "crossingless_count": r.crossingless_count,
                "expected_crossingless": 1usize << r.components,
            }))));
        }
        report["colorings"] = to_value(&r);
    }
    Ok(if json { pretty(&report) } else { out })
}

pub fn corpus(name: Option<&str>, json: bool) -> Result<String, Failure> {
    match name {
        Some(name) => {
            let e = corpus::get(name).ok_or_else(|| Failure::Input(format!("no corpus entry `{name}`")))?;
            Ok(if json { pretty(&to_value(e)) } else { format!("{}\n", e.diagram()) })
        }
        None if json => Ok(pretty(&to_value(&corpus::ENTRIES))),
        None => {
            let mut out = String::new();
            let _ = writeln!(out, "{:<22} {:>3} {:>4} {:>5} {:>7}", "name", "n", "comp", "alt", "reduced");
            for e in corpus::ENTRIES {
                let _ = writeln!(
                    out,
                    "{:<22} {:>3} {:>4} {:>5} {:>7}",
                    e.name,
                    e.diagram().crossing_count(),
                    e.components,
                    e.alternating,
                    e.reduced
                );
            }
            Ok(out)
        }
    }
}
