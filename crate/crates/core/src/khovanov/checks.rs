use std::collections::BTreeMap;

use serde::Serialize;

use super::khovanov_homology;
use crate::corpus;
use crate::diagram::{black_graph, enumerate_k1, PlanarDiagram, SmoothedDiagram};
use crate::error::{DiagramError, Error};
use crate::expansion::{alternating_invariants, module_a_ranks, Numbering};
use crate::homalg::{serialize_bidegree_map, BigradedHomology, HomologyGroup};

/// Overall shift between `H(D # Hopf)` and `H(D)[-1]{-2} ⊕ H(D)[1]{2}` in
/// the unnormalised grading. Splicing in the Hopf diagram adds two crossings
/// whose surviving module sits at `(0, -2), (0, 0), (2, 2), (2, 4)` rather
/// than around the origin.
pub const HOPF_ADDITION_SHIFT: (i32, i32) = (1, 1);

#[derive(Clone, Debug, Serialize)]
pub struct RankBoundReport {
    /// Rational ranks of the homology.
    #[serde(serialize_with = "serialize_bidegree_map")]
    pub homology_ranks: BTreeMap<(i32, i32), usize>,
    /// Ranks of the surviving module of the expansion.
    #[serde(serialize_with = "serialize_bidegree_map")]
    pub bound: BTreeMap<(i32, i32), usize>,
    pub total: usize,
    /// `2 #K₁(D)`.
    pub bound_total: usize,
    /// Bidegrees where the homology exceeds the bound.
    pub violations: Vec<(i32, i32)>,
}

impl RankBoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.total <= self.bound_total
    }
}

/// Compares the rational Khovanov homology with the surviving module of the
/// spanning tree expansion, both in total and bidegree by bidegree.
pub fn check_rank_bound(diagram: &PlanarDiagram) -> Result<RankBoundReport, Error> {
    black_graph(diagram)?;
    let h = khovanov_homology(diagram, false)?;
    let bound: BTreeMap<(i32, i32), usize> = module_a_ranks(diagram, &Numbering::identity(diagram.crossing_count()))?
        .into_iter()
        .map(|((i, j), n)| ((i as i32, j as i32), n))
        .collect();
    let homology_ranks = h.ranks();
    let violations = homology_ranks
        .iter()
        .filter(|&(k, &r)| r > bound.get(k).copied().unwrap_or(0))
        .map(|(&k, _)| k)
        .collect();
    Ok(RankBoundReport {
        total: h.total_rank(),
        bound_total: 2 * enumerate_k1(diagram).len(),
        homology_ranks,
        bound,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub name: &'static str,
    /// False when the precondition of the clause does not hold.
    pub applicable: bool,
    pub passed: bool,
    pub detail: String,
}

impl Clause {
    fn new(name: &'static str, passed: bool, detail: String) -> Clause {
        Clause {
            name,
            applicable: true,
            passed,
            detail,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AlternatingSupportReport {
    pub n1: usize,
    pub crossings: usize,
    pub reduced: bool,
    pub i_minus: i32,
    pub i_plus: i32,
    pub homology: BigradedHomology,
    pub normalized: BigradedHomology,
    pub clauses: Vec<Clause>,
}

impl AlternatingSupportReport {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }
}

/// Support of the homology of an alternating knot diagram: the two lines
/// `j = 2i - n₁ ± 1`, torsion on the lower line, the extremal groups, and
/// for diagrams without splitting crossings `i₋ = 0`, `i₊ = n` with `ℤ` at
/// both ends. Gradings are unnormalised.
pub fn check_alternating_support(diagram: &PlanarDiagram) -> Result<AlternatingSupportReport, Error> {
    let inv = alternating_invariants(diagram)?;
    if !inv.is_alternating {
        return Err(DiagramError::NotAlternating.into());
    }
    let n1 = inv.n1.ok_or_else(|| DiagramError::Internal(format!("r(D,S) is not constant: {:?}", inv.n1_values)))?;
    let n = diagram.crossing_count();
    let sd = SmoothedDiagram::unsmoothed(diagram);
    let mut reduced = true;
    for c in 0..n {
        reduced &= !sd.is_splitting(c)?;
    }
    let h = khovanov_homology(diagram, false)?;
    let normalized = khovanov_homology(diagram, true)?;
    let lower = |i: i32| 2 * i - n1 as i32 - 1;
    let upper = |i: i32| 2 * i - n1 as i32 + 1;
    let support = h.primary_support();
    let (i_minus, i_plus) = (*support.first().unwrap_or(&0), *support.last().unwrap_or(&0));

    let off: Vec<(i32, i32)> = h.iter().map(|(&k, _)| k).filter(|&(i, j)| j != lower(i) && j != upper(i)).collect();
    let torsion_off: Vec<(i32, i32)> = h.torsion().into_keys().filter(|&(i, j)| j != lower(i)).collect();
    let low_group = h.get(i_minus, lower(i_minus));
    let high_group = h.get(i_plus, upper(i_plus));
    let z = HomologyGroup { rank: 1, torsion: vec![] };

    let mut clauses = vec![
        Clause::new("two_lines", off.is_empty(), format!("off-line bidegrees {off:?}")),
        Clause::new("torsion_on_lower_line", torsion_off.is_empty(), format!("torsion off the lower line {torsion_off:?}")),
        Clause::new(
            "extremal_groups",
            !low_group.is_zero() && !high_group.is_zero(),
            format!("H({i_minus},{}) = {low_group:?}, H({i_plus},{}) = {high_group:?}", lower(i_minus), upper(i_plus)),
        ),
    ];
    let mut ends = Clause::new(
        "reduced_ends",
        low_group == z && high_group == z && i_minus == 0 && i_plus == n as i32,
        format!("i- = {i_minus}, i+ = {i_plus}, n = {n}"),
    );
    let mut minimal = Clause::new(
        "crossing_number_witness",
        i_plus - i_minus == n as i32,
        format!("i+ - i- = {}, so no diagram has fewer than {n} crossings", i_plus - i_minus),
    );
    if !reduced {
        for clause in [&mut ends, &mut minimal] {
            clause.applicable = false;
            clause.passed = true;
            clause.detail = "diagram has a splitting crossing".into();
        }
    }
    clauses.extend([ends, minimal]);
    Ok(AlternatingSupportReport {
        n1,
        crossings: n,
        reduced,
        i_minus,
        i_plus,
        homology: h,
        normalized,
        clauses,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HopfTrial {
    pub chirality: &'static str,
    pub hopf: String,
    /// Overall shift taking the predicted table to the computed one, if any.
    pub shift: Option<(i32, i32)>,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HopfAdditionReport {
    pub trials: Vec<HopfTrial>,
}

impl HopfAdditionReport {
    pub fn passed(&self) -> bool {
        self.trials.iter().any(|t| t.matches)
    }

    /// Chiralities for which the predicted table matches.
    pub fn matching(&self) -> Vec<&'static str> {
        self.trials.iter().filter(|t| t.matches).map(|t| t.chirality).collect()
    }
}

/// Smallest key of a nonzero table.
fn anchor(h: &BigradedHomology) -> Option<(i32, i32)> {
    h.iter().map(|(&k, _)| k).next()
}

/// Splices both chiralities of the standard Hopf diagram into `diagram` at
/// its first arc and compares `H(D # Hopf)` with `H(D)[-1]{-2} ⊕ H(D)[1]{2}`.
pub fn check_hopf_addition(diagram: &PlanarDiagram) -> Result<HopfAdditionReport, Error> {
    let h = khovanov_homology(diagram, false)?;
    let predicted = h.shift(-1, -2).direct_sum(&h.shift(1, 2));
    let label = diagram
        .labelled_crossings()
        .first()
        .map(|q| q[0])
        .or_else(|| diagram.free_circle_labels().first().copied())
        .ok_or_else(|| DiagramError::Internal("empty diagram".into()))?;
    let standard = corpus::hopf();
    let mut trials = Vec::new();
    for (chirality, hopf) in [("standard", standard.clone()), ("mirror", standard.mirror())] {
        let sum = diagram.connected_sum(&hopf, label, 1)?;
        let computed = khovanov_homology(&sum, false)?;
        let shift = match (anchor(&computed), anchor(&predicted)) {
            (Some((a, b)), Some((c, d))) => Some((a - c, b - d)).filter(|&(m, n)| predicted.shift(m, n) == computed),
            _ => None,
        };
        trials.push(HopfTrial {
            chirality,
            hopf: hopf.to_string(),
            matches: shift == Some(HOPF_ADDITION_SHIFT),
            shift,
        });
    }
    Ok(HopfAdditionReport { trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    #[test]
    fn trefoil_bound() {
        let r = check_rank_bound(&parse_pd(corpus::TREFOIL_LEFT).unwrap()).unwrap();
        assert_eq!((r.total, r.bound_total), (4, 6));
        assert!(r.passed());
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["bound"]["(0,-3)"], 1);
        let k = check_rank_bound(&parse_pd("X(1,2,2,1)").unwrap()).unwrap();
        assert_eq!((k.total, k.bound_total), (2, 2));
    }

    #[test]
    fn alternating_support() {
        for (pd, i_plus) in [(corpus::TREFOIL_LEFT, 3), (corpus::TREFOIL_RIGHT, 3), (corpus::FIGURE_EIGHT, 4)] {
            let r = check_alternating_support(&parse_pd(pd).unwrap()).unwrap();
            assert!(r.passed(), "{:?}", r.clauses);
            assert_eq!((r.i_minus, r.i_plus), (0, i_plus));
        }
        let kink = check_alternating_support(&parse_pd("X(1,2,2,1)").unwrap()).unwrap();
        assert!(!kink.reduced && kink.passed());
        let e = check_alternating_support(&corpus::get("8_19").unwrap().diagram());
        assert!(matches!(e, Err(Error::Diagram(DiagramError::NotAlternating))));
        let e = check_alternating_support(&corpus::hopf());
        assert!(matches!(e, Err(Error::Diagram(DiagramError::NotAKnot(2)))));
    }

    #[test]
    fn hopf_addition() {
        for pd in ["O(1)", "X(1,2,2,1)", corpus::TREFOIL_LEFT] {
            let r = check_hopf_addition(&parse_pd(pd).unwrap()).unwrap();
            assert!(r.passed(), "{pd}: {:?}", r.trials);
        }
    }
}
