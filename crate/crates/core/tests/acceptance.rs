//! Acceptance suite. Prints one PASS/FAIL line per criterion with its
//! runtime and budget, then fails if any criterion failed.
//!
//! `cargo test -p khoma --test acceptance -- --nocapture`

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use khoma::bracket::{bracket_spanning_tree_with, bracket_state_sum};
use khoma::corpus::{self, ENTRIES};
use khoma::diagram::{black_graph, enumerate_k1, PlanarDiagram, SmoothedDiagram};
use khoma::expansion::{alternating_invariants, extremal_numbering, module_a_ranks, ExtremalMode, Numbering};
use khoma::homalg::{gaussian_eliminate, homology_z, BigradedHomology, HomologyGroup};
use khoma::khovanov::{
    build_cube, check_alternating_support, check_hopf_addition, check_rank_bound, khovanov_homology,
    spanning_tree_reduction, HOPF_ADDITION_SHIFT,
};
use khoma::lee::{coloring_decomposition_check, lee_complex, lee_homology, lee_structure, LEE_A, LEE_B};
use khoma::lee::{lee_merge, lee_split};
use num_traits::Signed;
use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::SeedableRng;

struct Diagram {
    name: String,
    d: PlanarDiagram,
    components: usize,
    alternating: bool,
    reduced: bool,
}

fn is_reduced(d: &PlanarDiagram) -> bool {
    let sd = SmoothedDiagram::unsmoothed(d);
    (0..d.crossing_count()).all(|c| !sd.is_splitting(c).unwrap())
}

/// The shipped corpus plus the connected-sum family.
fn corpus_diagrams() -> Vec<Diagram> {
    let mut all: Vec<Diagram> = ENTRIES
        .iter()
        .map(|e| Diagram {
            name: e.name.to_string(),
            d: e.diagram(),
            components: e.components,
            alternating: e.alternating,
            reduced: e.reduced,
        })
        .collect();
    for (name, d) in corpus::connected_sums().unwrap() {
        all.push(Diagram {
            name,
            components: d.component_count(),
            alternating: d.is_alternating(),
            reduced: is_reduced(&d),
            d,
        });
    }
    all
}

fn connected(d: &PlanarDiagram) -> bool {
    black_graph(d).is_ok()
}

fn free(rank: usize) -> HomologyGroup {
    HomologyGroup { rank, torsion: vec![] }
}

fn criterion_1() {
    let mut rng = StdRng::seed_from_u64(1);
    for e in corpus_diagrams().iter().filter(|e| e.d.crossing_count() <= 10 && connected(&e.d)) {
        let expected = bracket_state_sum(&e.d);
        for _ in 0..10 {
            let numbering = Numbering::random(e.d.crossing_count(), &mut rng);
            assert_eq!(bracket_spanning_tree_with(&e.d, &numbering).unwrap(), expected, "{} {:?}", e.name, numbering.order());
        }
    }
}

fn criterion_2() {
    for e in corpus_diagrams() {
        assert_eq!(build_cube(&e.d).unwrap().euler_characteristic(), bracket_state_sum(&e.d), "{}", e.name);
    }
}

fn criterion_3() {
    for e in corpus_diagrams().iter().filter(|e| connected(&e.d)) {
        let r = check_rank_bound(&e.d).unwrap();
        assert!(r.passed(), "{}: {:?}", e.name, r.violations);
    }
    let r = check_rank_bound(&corpus::get("trefoil_left").unwrap().diagram()).unwrap();
    assert_eq!((r.total, r.bound_total), (4, 6));
}

fn criterion_4() {
    let mut rng = StdRng::seed_from_u64(4);
    for e in corpus_diagrams().iter().filter(|e| connected(&e.d)) {
        let n = e.d.crossing_count();
        let cube = build_cube(&e.d).unwrap();
        let expected = homology_z(&cube).unwrap();
        let numberings = [Numbering::identity(n), Numbering::random(n, &mut rng), Numbering::random(n, &mut rng)];
        for numbering in &numberings {
            let model = spanning_tree_reduction(&e.d, &cube, numbering).unwrap();
            let table: BTreeMap<(i64, i64), usize> =
                model.complex.generator_table().into_iter().map(|((i, j), k)| ((i as i64, j as i64), k)).collect();
            assert_eq!(table, module_a_ranks(&e.d, numbering).unwrap(), "{}", e.name);
            assert_eq!(homology_z(&model.complex).unwrap(), expected, "{}", e.name);
        }
    }
}

fn criterion_5() {
    let mut checked = 0;
    for e in corpus_diagrams().iter().filter(|e| e.components == 1 && e.alternating) {
        let r = check_alternating_support(&e.d).unwrap();
        assert!(r.passed(), "{}: {:?}", e.name, r.clauses);
        if e.reduced {
            assert_eq!((r.i_minus, r.i_plus), (0, e.d.crossing_count() as i32), "{}", e.name);
            assert!(r.clauses.iter().all(|c| c.applicable));
            checked += 1;
        }
    }
    assert!(checked >= 8);
}

fn criterion_6() {
    for e in corpus_diagrams().iter().filter(|e| e.components == 1 && e.alternating && e.reduced && e.d.crossing_count() > 0) {
        let inv = alternating_invariants(&e.d).unwrap();
        let (n1, n0) = (inv.n1.unwrap() as i64, inv.n0.unwrap() as i64);
        for state in enumerate_k1(&e.d) {
            let low = extremal_numbering(&e.d, &state, ExtremalMode::Lower).unwrap();
            let high = extremal_numbering(&e.d, &state, ExtremalMode::Upper).unwrap();
            assert_eq!((low.bound, high.bound), (-n1, n0));
            for (x, bound, lower) in [(&low, -n1, true), (&high, n0, false)] {
                for leaf in &x.leaves {
                    if leaf.state == state {
                        assert_eq!(leaf.w, bound);
                    } else if lower {
                        assert!(leaf.w > bound, "{} {state}", e.name);
                    } else {
                        assert!(leaf.w < bound, "{} {state}", e.name);
                    }
                }
            }
        }
    }
}

fn criterion_7() {
    let (m, n) = HOPF_ADDITION_SHIFT;
    for name in ["unknot", "trefoil_left", "figure_eight"] {
        let d = corpus::get(name).unwrap().diagram();
        let r = check_hopf_addition(&d).unwrap();
        assert!(r.trials.iter().all(|t| t.matches && t.shift == Some(HOPF_ADDITION_SHIFT)), "{name}: {:?}", r.trials);
        let h = khovanov_homology(&d, false).unwrap();
        let predicted = h.shift(-1, -2).direct_sum(&h.shift(1, 2)).shift(m, n);
        let label = d.labelled_crossings().first().map(|q| q[0]).unwrap_or(1);
        let sum = d.connected_sum(&corpus::hopf(), label, 1).unwrap();
        assert_eq!(khovanov_homology(&sum, false).unwrap(), predicted, "{name}");
    }
    let a = BigradedHomology::from_groups([((0, -1), free(1)), ((0, 1), free(1))]);
    let expected = a.shift(-1, -2).direct_sum(&a.shift(1, 2)).shift(m, n);
    for hopf in [corpus::hopf(), corpus::hopf().mirror()] {
        let ranks: BTreeMap<(i32, i32), usize> = module_a_ranks(&hopf, &Numbering::identity(2))
            .unwrap()
            .into_iter()
            .map(|((i, j), k)| ((i as i32, j as i32), k))
            .collect();
        assert_eq!(ranks, expected.ranks());
    }
}

fn criterion_8() {
    let h = lee_homology(&corpus::get("trefoil_right").unwrap().diagram()).unwrap();
    assert_eq!(h.rational.ranks(), BTreeMap::from([((0, -2), 1), ((0, 0), 1)]));
    assert_eq!(h.rational.total_rank(), 2);
    let nonzero: Vec<(i32, HomologyGroup)> = h.integral.iter().filter(|(_, g)| !g.is_zero()).map(|(&i, g)| (i, g.clone())).collect();
    assert_eq!(nonzero, vec![(0, free(2)), (3, HomologyGroup { rank: 0, torsion: vec![2, 2] })]);
}

fn criterion_9() {
    assert_eq!(lee_merge(LEE_A, LEE_A), [2, 2]);
    assert_eq!(lee_merge(LEE_B, LEE_B), [2, -2]);
    assert_eq!(lee_merge(LEE_A, LEE_B), [0, 0]);
    assert_eq!(lee_split(LEE_A), [[1, 1], [1, 1]]);
    assert_eq!(lee_split(LEE_B), [[1, -1], [-1, 1]]);
    for e in corpus_diagrams() {
        let s = lee_structure(&e.d);
        assert!(s.passed(), "{}: {s:?}", e.name);
        let dim = lee_homology(&e.d).unwrap().rational.total_rank();
        assert_eq!(dim, 1 << e.components, "{}", e.name);
        assert!(dim <= khovanov_homology(&e.d, false).unwrap().total_rank(), "{}", e.name);
    }
}

fn criterion_10() {
    for e in corpus_diagrams().iter().filter(|e| e.d.crossing_count() <= 6) {
        let r = coloring_decomposition_check(&e.d).unwrap();
        assert!(r.dimensions_add_up && r.is_block_diagonal && r.crossed_blocks_acyclic, "{}", e.name);
        assert_eq!(r.crossingless_count, 1 << e.components, "{}", e.name);
    }
}

fn criterion_11() {
    // Black smoothings are the edges of a spanning tree of the black graph.
    for e in corpus_diagrams().iter().filter(|e| connected(&e.d)) {
        let g = black_graph(&e.d).unwrap();
        for s in enumerate_k1(&e.d) {
            assert_eq!(g.black_smoothings_in(&s), g.vertex_count() - 1, "{}", e.name);
        }
    }
    // Random eliminations of unit entries leave the homology unchanged.
    let mut rng = StdRng::seed_from_u64(11);
    let mut eliminations = 0;
    for name in ["trefoil_left", "figure_eight", "hopf", "5_2", "6_1", "6_3", "trefoil_right#hopf", "8_19"] {
        let d = corpus_diagrams().into_iter().find(|e| e.name == name).unwrap().d;
        let mut c = build_cube(&d).unwrap();
        let expected = homology_z(&c).unwrap();
        for _ in 0..25 {
            let units: Vec<(usize, usize)> = c.entries().filter(|(_, _, v)| v.abs() == 1.into()).map(|(s, t, _)| (s, t)).collect();
            let Some(&(s, t)) = units.choose(&mut rng) else { break };
            c = gaussian_eliminate(&c, s, t).unwrap();
            c.check_d_squared().unwrap();
            assert_eq!(homology_z(&c).unwrap(), expected, "{name}");
            eliminations += 1;
        }
    }
    assert!(eliminations >= 100, "{eliminations}");
    // Every complex is checked for d² = 0 when it is built.
    for e in corpus_diagrams() {
        build_cube(&e.d).unwrap().check_d_squared().unwrap();
        lee_complex(&e.d).unwrap().check_d_squared().unwrap();
    }
}

#[test]
fn acceptance() {
    let criteria: [(&str, u64, fn()); 11] = [
        ("bracket: spanning tree sum = state sum", 5, criterion_1),
        ("Euler characteristic of the cube = bracket", 10, criterion_2),
        ("rank bound 2 #K1 and per-bidegree bound", 30, criterion_3),
        ("spanning tree reduction bidegrees and homology", 60, criterion_4),
        ("alternating knot support", 60, criterion_5),
        ("extremal numberings", 60, criterion_6),
        ("Hopf link addition", 60, criterion_7),
        ("Lee homology of the trefoil", 5, criterion_8),
        ("Lee differential structure and dimension 2^k", 60, criterion_9),
        ("admissible colouring decomposition", 60, criterion_10),
        ("property suites", 60, criterion_11),
    ];
    let mut failed = Vec::new();
    for (k, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f));
        let elapsed = start.elapsed();
        let within = elapsed <= Duration::from_secs(*budget);
        let ok = outcome.is_ok() && within;
        println!(
            "{} {:>2} {name} ({:.2}s, budget {budget}s)",
            if ok { "PASS" } else { "FAIL" },
            k + 1,
            elapsed.as_secs_f64()
        );
        if !ok {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
