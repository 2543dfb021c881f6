//! The connectivity-pruned binary expansion of a diagram into R1-trivial
//! leaves, one per single-circle state.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::diagram::{enumerate_k1, KinkSign, PlanarDiagram, ResolutionWord, SmoothedDiagram, Smoothing};
use crate::error::DiagramError;

/// Order in which crossings are visited: `order()[k]` is the k-th crossing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Numbering(Vec<usize>);

impl Numbering {
    pub fn new(order: Vec<usize>, n: usize) -> Result<Self, DiagramError> {
        if order.len() != n {
            return Err(DiagramError::InvalidNumbering(format!("{} entries for {n} crossings", order.len())));
        }
        let mut seen = vec![false; n];
        for &c in &order {
            if c >= n || std::mem::replace(&mut seen[c], true) {
                return Err(DiagramError::InvalidNumbering(format!("{order:?} is not a permutation")));
            }
        }
        Ok(Numbering(order))
    }

    pub fn identity(n: usize) -> Self {
        Numbering((0..n).collect())
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        Numbering(order)
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }
}

/// A leaf `D_S` of the expansion tree with its statistics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpansionLeaf {
    /// Smoothings applied on the way down; the leaf's kinks are unsmoothed.
    pub word: ResolutionWord,
    #[serde(rename = "r_D_DS")]
    pub r_d_ds: usize,
    pub x: usize,
    pub y: usize,
    pub w: i64,
    /// The single-circle state of the leaf.
    pub state: ResolutionWord,
    #[serde(rename = "r_D_S")]
    pub r_d_s: usize,
}

impl ExpansionLeaf {
    fn from_leaf(diagram: &PlanarDiagram, word: ResolutionWord) -> Result<Self, DiagramError> {
        let leaf = SmoothedDiagram::new(diagram, word.clone())?;
        let signs = leaf.peel_kinks()?;
        let y = signs.iter().filter(|(_, s)| *s == KinkSign::Positive).count();
        let x = signs.len() - y;
        let mut state = word.clone();
        for &(c, sign) in &signs {
            state.set(c, Some(sign.connected_smoothing()));
        }
        if SmoothedDiagram::new(diagram, state.clone())?.component_count() != 1 {
            return Err(DiagramError::Internal(format!("leaf {word} does not close up to one circle")));
        }
        let r_d_ds = word.ones();
        let r_d_s = state.ones();
        if r_d_s != r_d_ds + y {
            return Err(DiagramError::Internal(format!("leaf {word}: r(D,S) = {r_d_s} but r(D,D_S) + y = {}", r_d_ds + y)));
        }
        Ok(ExpansionLeaf {
            word,
            r_d_ds,
            x,
            y,
            w: x as i64 - y as i64,
            state,
            r_d_s,
        })
    }
}

/// Expands `diagram` depth-first in `numbering` order. A crossing is smoothed
/// both ways only when both results stay connected; otherwise it is left
/// alone and the next crossing is considered.
pub fn expand(diagram: &PlanarDiagram, numbering: &Numbering) -> Result<Vec<ExpansionLeaf>, DiagramError> {
    let n = diagram.crossing_count();
    if numbering.order().len() != n {
        return Err(DiagramError::InvalidNumbering(format!("{} entries for {n} crossings", numbering.order().len())));
    }
    let root = SmoothedDiagram::unsmoothed(diagram);
    if !root.is_connected() {
        return Err(DiagramError::Disconnected);
    }
    let mut leaves = Vec::new();
    let mut stack = vec![(root, 0)];
    while let Some((node, k)) = stack.pop() {
        if k == n {
            leaves.push(ExpansionLeaf::from_leaf(diagram, node.into_word())?);
            continue;
        }
        let c = numbering.order()[k];
        let zero = node.smooth(c, Smoothing::Zero);
        let one = node.smooth(c, Smoothing::One);
        if zero.is_connected() && one.is_connected() {
            // Pushed in reverse so the 0-branch is explored first.
            stack.push((one, k + 1));
            stack.push((zero, k + 1));
        } else {
            stack.push((node, k + 1));
        }
    }
    Ok(leaves)
}

/// `(x, y, w, r(D,S))` of an R1-trivial leaf.
pub fn leaf_statistics(diagram: &PlanarDiagram, word: &ResolutionWord) -> Result<(usize, usize, i64, usize), DiagramError> {
    let leaf = ExpansionLeaf::from_leaf(diagram, word.clone())?;
    Ok((leaf.x, leaf.y, leaf.w, leaf.r_d_s))
}

/// Bigraded ranks `(i, j) -> rank`.
pub type RankTable = BTreeMap<(i64, i64), usize>;

/// Ranks of the surviving module: rank 1 at `(w + r, 2w + r ± 1)` for every
/// leaf, with `r = r(D,S)`.
pub fn module_a_ranks(diagram: &PlanarDiagram, numbering: &Numbering) -> Result<RankTable, DiagramError> {
    let mut table = RankTable::new();
    for leaf in expand(diagram, numbering)? {
        for (i, j) in leaf_bidegrees(&leaf) {
            *table.entry((i, j)).or_default() += 1;
        }
    }
    Ok(table)
}

/// The two bidegrees a leaf contributes to the surviving module.
pub fn leaf_bidegrees(leaf: &ExpansionLeaf) -> [(i64, i64); 2] {
    let r = leaf.r_d_s as i64;
    let i = leaf.w + r;
    [(i, 2 * leaf.w + r - 1), (i, 2 * leaf.w + r + 1)]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtremalMode {
    /// 0-smoothings of the state first; its leaf attains `w = -n₁`.
    Lower,
    /// 1-smoothings first; its leaf attains `w = n₀`.
    Upper,
}

/// A numbering making `state` the unique extremal leaf, with the expansion
/// that confirms it.
#[derive(Clone, Debug)]
pub struct ExtremalNumbering {
    pub numbering: Numbering,
    pub leaves: Vec<ExpansionLeaf>,
    pub bound: i64,
}

/// For a reduced alternating knot diagram, the numbering that lists the
/// crossings where `state` has the 0-smoothing (lower) or the 1-smoothing
/// (upper) first. The claimed extremality is checked on the full
/// re-expansion; a violation is an error.
pub fn extremal_numbering(
    diagram: &PlanarDiagram,
    state: &ResolutionWord,
    mode: ExtremalMode,
) -> Result<ExtremalNumbering, DiagramError> {
    check_reduced_alternating(diagram)?;
    let inv = alternating_invariants(diagram)?;
    let n1 = inv.n1.ok_or(DiagramError::NotAlternating)?;
    let n0 = diagram.crossing_count() - n1;
    if !enumerate_k1(diagram).contains(state) {
        return Err(DiagramError::Internal(format!("{state} is not a single-circle state")));
    }
    let first = match mode {
        ExtremalMode::Lower => Smoothing::Zero,
        ExtremalMode::Upper => Smoothing::One,
    };
    let n = diagram.crossing_count();
    let (head, tail): (Vec<usize>, Vec<usize>) = (0..n).partition(|&c| state.get(c) == Some(first));
    let numbering = Numbering::new(head.into_iter().chain(tail).collect(), n)?;
    let leaves = expand(diagram, &numbering)?;
    let bound = match mode {
        ExtremalMode::Lower => -(n1 as i64),
        ExtremalMode::Upper => n0 as i64,
    };
    for leaf in &leaves {
        let ok = if &leaf.state == state {
            leaf.w == bound
        } else {
            match mode {
                ExtremalMode::Lower => leaf.w > bound,
                ExtremalMode::Upper => leaf.w < bound,
            }
        };
        if !ok {
            return Err(DiagramError::Internal(format!(
                "extremal numbering failed: leaf with state {} has w = {} (bound {bound})",
                leaf.state, leaf.w
            )));
        }
    }
    Ok(ExtremalNumbering { numbering, leaves, bound })
}

fn check_reduced_alternating(diagram: &PlanarDiagram) -> Result<(), DiagramError> {
    let components = diagram.component_count();
    if components != 1 {
        return Err(DiagramError::NotAKnot(components));
    }
    if !diagram.is_alternating() {
        return Err(DiagramError::NotAlternating);
    }
    let sd = SmoothedDiagram::unsmoothed(diagram);
    for c in 0..diagram.crossing_count() {
        if sd.is_splitting(c)? {
            return Err(DiagramError::HasSplittingCrossing(c));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlternatingInvariants {
    pub is_alternating: bool,
    /// `r(D,S)` over all single-circle states.
    pub n1_values: BTreeSet<usize>,
    /// Set when `r(D,S)` is constant over the single-circle states.
    pub n1: Option<usize>,
    pub n0: Option<usize>,
}

pub fn alternating_invariants(diagram: &PlanarDiagram) -> Result<AlternatingInvariants, DiagramError> {
    let components = diagram.component_count();
    if components != 1 {
        return Err(DiagramError::NotAKnot(components));
    }
    let n1_values: BTreeSet<usize> = enumerate_k1(diagram).iter().map(ResolutionWord::ones).collect();
    let n1 = if n1_values.len() == 1 { n1_values.first().copied() } else { None };
    Ok(AlternatingInvariants {
        is_alternating: diagram.is_alternating(),
        n1,
        n0: n1.map(|n1| diagram.crossing_count() - n1),
        n1_values,
    })
}
