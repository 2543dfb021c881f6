//! Randomised invariants over the built-in diagrams.

use std::collections::BTreeSet;

use khoma::bracket::{bracket_spanning_tree_with, bracket_state_sum};
use khoma::corpus::{self, CorpusEntry, ENTRIES};
use khoma::diagram::{black_graph, enumerate_k1, PlanarDiagram};
use khoma::expansion::{expand, module_a_ranks, Numbering};
use khoma::khovanov::{build_cube, khovanov_homology, spanning_tree_reduction};
use khoma::homalg::homology_z;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn connected_entries(max_crossings: usize) -> Vec<&'static CorpusEntry> {
    ENTRIES
        .iter()
        .filter(|e| {
            let d = e.diagram();
            d.crossing_count() <= max_crossings && black_graph(&d).is_ok()
        })
        .collect()
}

fn entry(max_crossings: usize) -> impl Strategy<Value = &'static CorpusEntry> {
    prop::sample::select(connected_entries(max_crossings))
}

fn numbering(d: &PlanarDiagram, seed: u64) -> Numbering {
    Numbering::random(d.crossing_count(), &mut StdRng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn leaves_are_the_single_circle_states(e in entry(10), seed in any::<u64>()) {
        let d = e.diagram();
        let numbering = numbering(&d, seed);
        let leaves = expand(&d, &numbering).unwrap();
        let states: BTreeSet<_> = leaves.iter().map(|l| l.state.clone()).collect();
        let k1 = enumerate_k1(&d);
        prop_assert_eq!(states.len(), leaves.len());
        prop_assert_eq!(states.into_iter().collect::<Vec<_>>(), k1.clone());
        prop_assert_eq!(black_graph(&d).unwrap().matrix_tree_count(), k1.len().into());
        let total: usize = module_a_ranks(&d, &numbering).unwrap().values().sum();
        prop_assert_eq!(total, 2 * k1.len());
        prop_assert_eq!(bracket_spanning_tree_with(&d, &numbering).unwrap(), bracket_state_sum(&d));
    }

    #[test]
    fn reduction_preserves_homology(e in entry(6), seed in any::<u64>()) {
        let d = e.diagram();
        let cube = build_cube(&d).unwrap();
        let model = spanning_tree_reduction(&d, &cube, &numbering(&d, seed)).unwrap();
        prop_assert_eq!(homology_z(&model.complex).unwrap(), homology_z(&cube).unwrap());
    }

    #[test]
    fn kinks_leave_normalised_homology_unchanged(e in entry(5), arc in any::<prop::sample::Index>(), positive in any::<bool>()) {
        let d = e.diagram();
        let label = d.label(arc.index(d.arc_count()));
        let kinked = d.add_kink(label, positive).unwrap();
        prop_assert_eq!(kinked.crossing_count(), d.crossing_count() + 1);
        prop_assert_eq!(khovanov_homology(&kinked, true).unwrap(), khovanov_homology(&d, true).unwrap());
    }

    #[test]
    fn renumbering_crossings_changes_nothing(e in entry(6), seed in any::<u64>()) {
        let d = e.diagram();
        let order = numbering(&d, seed).order().to_vec();
        let r = d.renumbered(&order).unwrap();
        prop_assert_eq!(bracket_state_sum(&r), bracket_state_sum(&d));
        prop_assert_eq!(khovanov_homology(&r, false).unwrap(), khovanov_homology(&d, false).unwrap());
    }

    #[test]
    fn mirror_reflects_ranks(e in entry(6)) {
        let d = e.diagram();
        let n = d.crossing_count() as i32;
        let h = khovanov_homology(&d, false).unwrap();
        let m = khovanov_homology(&d.mirror(), false).unwrap();
        let reflected: BTreeSet<_> = h.ranks().into_iter().map(|((i, j), r)| ((n - i, n - j), r)).collect();
        prop_assert_eq!(m.ranks().into_iter().collect::<BTreeSet<_>>(), reflected);
    }
}

#[test]
fn connected_sums_multiply_brackets() {
    // ⟨D₁ # D₂⟩ (q + q⁻¹) = ⟨D₁⟩⟨D₂⟩.
    let circle = khoma::laurent::LaurentPolynomial::circle();
    for (a, b) in [("trefoil_left", "figure_eight"), ("5_2", "hopf"), ("trefoil_right", "trefoil_right")] {
        let (d1, d2) = (corpus::get(a).unwrap().diagram(), corpus::get(b).unwrap().diagram());
        let sum = d1.connected_sum(&d2, 1, 1).unwrap();
        assert_eq!(&bracket_state_sum(&sum) * &circle, &bracket_state_sum(&d1) * &bracket_state_sum(&d2), "{a}#{b}");
    }
}
