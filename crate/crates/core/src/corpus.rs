//! Built-in diagrams used by the tests, the acceptance suite and the CLI.

use serde::Serialize;

use crate::diagram::{parse_pd, PlanarDiagram};
use crate::error::DiagramError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub pd: &'static str,
    pub components: usize,
    pub alternating: bool,
    /// No crossing is splitting.
    pub reduced: bool,
}

impl CorpusEntry {
    pub fn diagram(&self) -> PlanarDiagram {
        parse_pd(self.pd).expect("built-in PD codes parse")
    }
}

const fn entry(name: &'static str, pd: &'static str, components: usize, alternating: bool, reduced: bool) -> CorpusEntry {
    CorpusEntry {
        name,
        pd,
        components,
        alternating,
        reduced,
    }
}

/// All negative crossings.
pub const TREFOIL_LEFT: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
/// All positive crossings.
pub const TREFOIL_RIGHT: &str = "X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)";
pub const FIGURE_EIGHT: &str = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)";
pub const HOPF: &str = "X(4,1,3,2) X(2,3,1,4)";

pub const ENTRIES: &[CorpusEntry] = &[
    entry("unknot", "O(1)", 1, true, true),
    entry("unknot_kink_negative", "X(1,2,2,1)", 1, true, false),
    entry("unknot_kink_positive", "X(1,1,2,2)", 1, true, false),
    entry("unlink_2", "O(1) O(2)", 2, true, true),
    entry("hopf", HOPF, 2, true, true),
    entry("hopf_mirror", "X(1,3,2,4) X(3,1,4,2)", 2, true, true),
    entry("trefoil_left", TREFOIL_LEFT, 1, true, true),
    entry("trefoil_right", TREFOIL_RIGHT, 1, true, true),
    entry("figure_eight", FIGURE_EIGHT, 1, true, true),
    entry("5_1", "X(1,6,2,7) X(3,8,4,9) X(5,10,6,1) X(7,2,8,3) X(9,4,10,5)", 1, true, true),
    entry("5_2", "X(1,4,2,5) X(3,8,4,9) X(5,10,6,1) X(9,6,10,7) X(7,2,8,3)", 1, true, true),
    entry("6_1", "X(1,4,2,5) X(7,10,8,11) X(3,9,4,8) X(9,3,10,2) X(5,12,6,1) X(11,6,12,7)", 1, true, true),
    entry("6_2", "X(1,4,2,5) X(5,10,6,11) X(3,9,4,8) X(9,3,10,2) X(7,12,8,1) X(11,6,12,7)", 1, true, true),
    entry("6_3", "X(4,2,5,1) X(8,4,9,3) X(12,9,1,10) X(10,5,11,6) X(6,11,7,12) X(2,8,3,7)", 1, true, true),
    entry(
        "8_19",
        "X(4,2,5,1) X(8,4,9,3) X(9,15,10,14) X(5,13,6,12) X(13,7,14,6) X(11,1,12,16) X(15,11,16,10) X(2,8,3,7)",
        1,
        false,
        true,
    ),
];

pub fn get(name: &str) -> Option<&'static CorpusEntry> {
    ENTRIES.iter().find(|e| e.name == name)
}

pub fn hopf() -> PlanarDiagram {
    parse_pd(HOPF).expect("built-in")
}

/// Connected sums assembled from the entries above.
pub fn connected_sums() -> Result<Vec<(String, PlanarDiagram)>, DiagramError> {
    let d = |name: &str| get(name).expect("built-in").diagram();
    let pairs = [
        ("trefoil_left", "trefoil_left"),
        ("trefoil_left", "trefoil_right"),
        ("trefoil_right", "hopf"),
        ("figure_eight", "hopf"),
        ("unknot", "hopf"),
    ];
    pairs
        .iter()
        .map(|(a, b)| Ok((format!("{a}#{b}"), d(a).connected_sum(&d(b), 1, 1)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::bracket_state_sum;
    use crate::diagram::SmoothedDiagram;
    use crate::laurent::LaurentPolynomial;

    /// `(-1)^n₋ q^(n₊ - 2n₋) ⟨D⟩ / (q + q⁻¹)`, computed by long division.
    fn jones(d: &PlanarDiagram) -> LaurentPolynomial {
        let (pos, neg) = d.signed_crossing_counts().unwrap();
        let mut rest = bracket_state_sum(d).shift(if neg % 2 == 0 { 1 } else { -1 }, pos as i64 - 2 * neg as i64);
        let mut quotient = LaurentPolynomial::zero();
        while let Some(top) = rest.max_degree() {
            let c = rest.coefficient(top);
            let term = LaurentPolynomial::monomial(c, top - 1);
            rest = &rest - &(&term * &LaurentPolynomial::circle());
            quotient = quotient + term;
        }
        quotient
    }

    #[test]
    fn flags_match_the_diagrams() {
        for e in ENTRIES {
            let d = e.diagram();
            assert_eq!(d.component_count(), e.components, "{}", e.name);
            assert_eq!(d.is_alternating(), e.alternating, "{}", e.name);
            let sd = SmoothedDiagram::unsmoothed(&d);
            if sd.is_connected() {
                let splitting = (0..d.crossing_count()).any(|c| sd.is_splitting(c).unwrap());
                assert_eq!(!splitting, e.reduced, "{}", e.name);
            }
        }
    }

    #[test]
    fn torus_knot_jones_polynomial() {
        // t³ + t⁵ - t⁸ with t = q², up to mirror image.
        let j = jones(&get("8_19").unwrap().diagram());
        let expected = LaurentPolynomial::from_terms([(6, 1), (10, 1), (16, -1)]);
        let mirrored = LaurentPolynomial::from_terms([(-6, 1), (-10, 1), (-16, -1)]);
        assert!(j == expected || j == mirrored, "{j}");
        assert_eq!(jones(&get("unknot").unwrap().diagram()), LaurentPolynomial::one());
    }

    #[test]
    fn sums_are_knots_or_links() {
        let sums = connected_sums().unwrap();
        assert_eq!(sums.len(), 5);
        assert_eq!(sums[0].1.crossing_count(), 6);
        assert_eq!(sums[2].1.component_count(), 2);
    }
}
