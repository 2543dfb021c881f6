//! Khovanov homology from the cube of resolutions, and its reduction to the
//! spanning tree model.

mod checks;
mod cube;

pub use checks::{
    check_alternating_support, check_hopf_addition, check_rank_bound, AlternatingSupportReport, Clause,
    HopfAdditionReport, HopfTrial, RankBoundReport, HOPF_ADDITION_SHIFT,
};
pub use cube::{build_cube, Cube, Differential, EdgeKind, Vertex};

use std::collections::{BTreeMap, HashMap};

use crate::diagram::{PlanarDiagram, ResolutionWord};
use crate::error::{ComplexError, DiagramError, Error};
use crate::expansion::{expand, leaf_bidegrees, ExpansionLeaf, Numbering};
use crate::homalg::{homology_z, reduce, BasedComplex, BigradedHomology, ReductionStrategy};

/// `[-n₋]{n₊ - 2n₋}`, the shift taking the unnormalised grading to the
/// orientation-normalised one.
pub fn normalization_shift(diagram: &PlanarDiagram) -> Result<(i32, i32), DiagramError> {
    let (pos, neg) = diagram.signed_crossing_counts()?;
    Ok((-(neg as i32), pos as i32 - 2 * neg as i32))
}

/// Integral Khovanov homology, optionally orientation-normalised.
pub fn khovanov_homology(diagram: &PlanarDiagram, normalize: bool) -> Result<BigradedHomology, Error> {
    let h = homology_z(&build_cube(diagram)?)?;
    if normalize {
        let (m, n) = normalization_shift(diagram)?;
        Ok(h.shift(m, n))
    } else {
        Ok(h)
    }
}

/// A complex reduced leaf by leaf along the expansion tree.
#[derive(Clone, Debug)]
pub struct SpanningTreeModel {
    pub complex: BasedComplex,
    pub leaves: Vec<ExpansionLeaf>,
    /// Leaf index of every surviving generator.
    pub leaf_of: BTreeMap<usize, usize>,
}

/// Reduces a complex on the cube of `diagram` (Khovanov's or Lee's) by
/// cancelling unit entries inside the subcube of each expansion leaf, then
/// checks that every leaf keeps exactly two generators, at the bidegrees
/// `(w + r, 2w + r ± 1)`.
pub fn spanning_tree_reduction(
    diagram: &PlanarDiagram,
    complex: &BasedComplex,
    numbering: &Numbering,
) -> Result<SpanningTreeModel, Error> {
    let cube = Cube::new(diagram);
    if cube.generator_count() != complex.len() {
        return Err(DiagramError::Internal("complex is not on this cube".into()).into());
    }
    let leaves = expand(diagram, numbering)?;
    let n = diagram.crossing_count();
    let vertex_leaf: Vec<usize> = (0..1usize << n)
        .map(|v| {
            let word = ResolutionWord::from_bits(n, v as u64);
            leaves.iter().position(|l| l.word.is_refined_by(&word)).expect("every state lies below one leaf")
        })
        .collect();
    let blocks: HashMap<usize, usize> = (0..cube.generator_count()).map(|id| (id, vertex_leaf[cube.generator(id).0])).collect();
    let reduced = reduce(complex, &ReductionStrategy::Blocks(blocks.clone()));

    let mut found: BTreeMap<usize, Vec<(i64, i64)>> = BTreeMap::new();
    for g in reduced.generators() {
        found.entry(blocks[&g.id]).or_default().push((g.i as i64, g.j as i64));
    }
    for (k, leaf) in leaves.iter().enumerate() {
        let mut got = found.remove(&k).unwrap_or_default();
        got.sort_unstable();
        let mut expected = leaf_bidegrees(leaf).to_vec();
        expected.sort_unstable();
        if got.len() != 2 {
            return Err(ComplexError::BlockReduction {
                block: k,
                found: got.len(),
                expected: 2,
            }
            .into());
        }
        if got != expected {
            return Err(DiagramError::Internal(format!("leaf {k} reduced to bidegrees {got:?}, expected {expected:?}")).into());
        }
    }
    let leaf_of = reduced.generators().iter().map(|g| (g.id, blocks[&g.id])).collect();
    Ok(SpanningTreeModel {
        complex: reduced,
        leaves,
        leaf_of,
    })
}
