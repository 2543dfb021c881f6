//! Three evaluations of the Kauffman bracket `⟨D⟩`, normalised by
//! `⟨O⟩ = q + q⁻¹` and `⟨D⟩ = ⟨D₀⟩ - q⟨D₁⟩`.

use crate::diagram::{PlanarDiagram, ResolutionWord, SmoothedDiagram};
use crate::error::DiagramError;
use crate::expansion::{expand, Numbering};
use crate::laurent::LaurentPolynomial;

/// State sum over every completion of the unsmoothed crossings. Only the
/// newly chosen 1-smoothings contribute to the `(-q)` power.
pub fn bracket_of(sd: &SmoothedDiagram<'_>) -> LaurentPolynomial {
    let free: Vec<usize> = sd.word().unsmoothed().collect();
    let circle = LaurentPolynomial::circle();
    let max_circles = sd.diagram().arc_count();
    let powers: Vec<LaurentPolynomial> = (0..=max_circles).map(|k| circle.pow(k as u32)).collect();
    let mut total = LaurentPolynomial::zero();
    for bits in 0..1u64 << free.len() {
        let mut word = sd.word().clone();
        for (k, &c) in free.iter().enumerate() {
            word.set(c, Some(crate::diagram::Smoothing::from_bit(bits >> k & 1 == 1)));
        }
        let circles = SmoothedDiagram::new(sd.diagram(), word).expect("same length").component_count();
        total += &(&LaurentPolynomial::neg_q_pow(bits.count_ones() as usize) * &powers[circles]);
    }
    total
}

/// `⟨D⟩` as the full state sum; `(q + q⁻¹)^k` for `k` free circles.
pub fn bracket_state_sum(diagram: &PlanarDiagram) -> LaurentPolynomial {
    bracket_of(&SmoothedDiagram::unsmoothed(diagram))
}

/// Closed form `(-1)^x q^(2x - y) (q + q⁻¹)` on an R1-trivial diagram.
pub fn bracket_r1_trivial(dp: &SmoothedDiagram<'_>) -> Result<LaurentPolynomial, DiagramError> {
    let (x, y) = dp.kink_counts()?;
    Ok(LaurentPolynomial::circle().shift(if x % 2 == 0 { 1 } else { -1 }, 2 * x as i64 - y as i64))
}

/// Sum over the leaves of the expansion of `(-q)^r(D,D_S) ⟨D_S⟩`.
pub fn bracket_spanning_tree(diagram: &PlanarDiagram) -> Result<LaurentPolynomial, DiagramError> {
    bracket_spanning_tree_with(diagram, &Numbering::identity(diagram.crossing_count()))
}

pub fn bracket_spanning_tree_with(diagram: &PlanarDiagram, numbering: &Numbering) -> Result<LaurentPolynomial, DiagramError> {
    let mut total = LaurentPolynomial::zero();
    for leaf in expand(diagram, numbering)? {
        let leaf_diagram = SmoothedDiagram::new(diagram, leaf.word.clone())?;
        total += &(&LaurentPolynomial::neg_q_pow(leaf.r_d_ds) * &bracket_r1_trivial(&leaf_diagram)?);
    }
    Ok(total)
}

/// Number of terms in the spanning-tree sum.
pub fn spanning_tree_term_count(diagram: &PlanarDiagram) -> Result<usize, DiagramError> {
    Ok(expand(diagram, &Numbering::identity(diagram.crossing_count()))?.len())
}

/// `⟨D⟩` of a total word's state: `(q + q⁻¹)^circles`.
pub fn state_value(diagram: &PlanarDiagram, word: &ResolutionWord) -> Result<LaurentPolynomial, DiagramError> {
    Ok(LaurentPolynomial::circle().pow(crate::diagram::count_circles(diagram, word)? as u32))
}
