//! Lee's deformation `d' = d + Φ` of the Khovanov complex, its homology, and
//! the decomposition of `C'(D) ⊗ ℚ` along admissible colourings.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::diagram::{PlanarDiagram, ResolutionWord, Smoothing};
use crate::error::{ComplexError, DiagramError, Error};
use crate::homalg::{
    filtered_homology_q, homology_z_primary, reduce, BasedComplex, BigradedHomology, Generator, GradedHomology,
    Homogeneity, ReductionStrategy,
};
use crate::khovanov::{Cube, Differential};

/// An element of `𝒜 ⊗ ℚ` in the basis `(1, X)`, scaled to integers.
pub type AlgebraElement = [i64; 2];

pub const ONE: AlgebraElement = [1, 0];
pub const X: AlgebraElement = [0, 1];
/// `a = X + 1`.
pub const LEE_A: AlgebraElement = [1, 1];
/// `b = X - 1`.
pub const LEE_B: AlgebraElement = [-1, 1];

/// `m + m_Φ`: `1·1 = 1`, `1·X = X·1 = X`, `X·X = 1`.
pub fn lee_merge(u: AlgebraElement, v: AlgebraElement) -> AlgebraElement {
    [u[0] * v[0] + u[1] * v[1], u[0] * v[1] + u[1] * v[0]]
}

/// `Δ + Δ_Φ` as a 2×2 tensor `t[p][q]` on the basis `(1, X)`:
/// `Δ'(1) = 1⊗X + X⊗1`, `Δ'(X) = X⊗X + 1⊗1`.
pub fn lee_split(u: AlgebraElement) -> [[i64; 2]; 2] {
    [[u[1], u[0]], [u[0], u[1]]]
}

/// Nonzero entries of the sparse product `b∘a` of two entry lists.
fn compose(a: &[(usize, usize, BigInt)], b: &[(usize, usize, BigInt)]) -> usize {
    let mut by_src: HashMap<usize, Vec<(usize, &BigInt)>> = HashMap::new();
    for (s, t, v) in b {
        by_src.entry(*s).or_default().push((*t, v));
    }
    let mut out: HashMap<(usize, usize), BigInt> = HashMap::new();
    for (s, t, v) in a {
        for (u, w) in by_src.get(t).into_iter().flatten() {
            *out.entry((*s, *u)).or_default() += v * *w;
        }
    }
    out.values().filter(|v| **v != BigInt::from(0)).count()
}

/// Verified identities of the deformed differential.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeeStructure {
    /// Entries of `Φ` with bidegree other than `(1, 4)`.
    pub phi_off_degree: usize,
    /// Nonzero entries of `d²`, `Φ²`, `dΦ + Φd` and `(d + Φ)²`.
    pub d_squared: usize,
    pub phi_squared: usize,
    pub anticommutator: usize,
    pub total_squared: usize,
}

impl LeeStructure {
    pub fn passed(&self) -> bool {
        self.phi_off_degree == 0 && self.d_squared == 0 && self.phi_squared == 0 && self.anticommutator == 0 && self.total_squared == 0
    }
}

pub fn lee_structure(diagram: &PlanarDiagram) -> LeeStructure {
    let cube = Cube::new(diagram);
    let d = cube.entries(Differential::Khovanov);
    let phi = cube.entries(Differential::Phi);
    let total = cube.entries(Differential::Lee);
    let phi_off_degree = phi
        .iter()
        .filter(|(s, t, _)| {
            let ((i, j), (i2, j2)) = (cube.bidegree(*s), cube.bidegree(*t));
            (i2 - i, j2 - j) != (1, 4)
        })
        .count();
    LeeStructure {
        phi_off_degree,
        d_squared: compose(&d, &d),
        phi_squared: compose(&phi, &phi),
        anticommutator: anticommutator(&d, &phi),
        total_squared: compose(&total, &total),
    }
}

/// Nonzero entries of `dΦ + Φd`.
fn anticommutator(d: &[(usize, usize, BigInt)], phi: &[(usize, usize, BigInt)]) -> usize {
    let mut sum: HashMap<(usize, usize), BigInt> = HashMap::new();
    for (first, second) in [(d, phi), (phi, d)] {
        let mut by_src: HashMap<usize, Vec<(usize, &BigInt)>> = HashMap::new();
        for (s, t, v) in second {
            by_src.entry(*s).or_default().push((*t, v));
        }
        for (s, t, v) in first {
            for (u, w) in by_src.get(t).into_iter().flatten() {
                *sum.entry((*s, *u)).or_default() += v * *w;
            }
        }
    }
    sum.values().filter(|v| **v != BigInt::from(0)).count()
}

/// The filtered complex `(C(D), d + Φ)`. Fails if any of the structural
/// identities does not hold.
pub fn lee_complex(diagram: &PlanarDiagram) -> Result<BasedComplex, Error> {
    let s = lee_structure(diagram);
    if !s.passed() {
        return Err(DiagramError::Internal(format!("Lee differential is inconsistent: {s:?}")).into());
    }
    Ok(Cube::new(diagram).complex(Differential::Lee)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeeHomology {
    /// Integral homology by primary degree.
    pub integral: GradedHomology,
    /// Rational associated graded of the filtration by `j`.
    pub rational: BigradedHomology,
}

pub fn lee_homology(diagram: &PlanarDiagram) -> Result<LeeHomology, Error> {
    let c = reduce(&lee_complex(diagram)?, &ReductionStrategy::Full);
    Ok(LeeHomology {
        integral: homology_z_primary(&c)?,
        rational: filtered_homology_q(&c)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KnotDegreeReport {
    pub degrees: BTreeSet<i32>,
    pub passed: bool,
}

/// The rational Lee homology of a knot diagram sits in one primary degree.
pub fn knot_degree_check(diagram: &PlanarDiagram) -> Result<KnotDegreeReport, Error> {
    let k = diagram.component_count();
    if k != 1 {
        return Err(DiagramError::NotAKnot(k).into());
    }
    let degrees = lee_homology(diagram)?.rational.primary_support();
    Ok(KnotDegreeReport {
        passed: degrees.len() == 1,
        degrees,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LeeColor {
    A,
    B,
}

/// A colouring of the arcs by `a` and `b`; bit `k` of the mask is set when
/// arc `k` is coloured `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring {
    pub arcs: usize,
    pub b_mask: u64,
}

impl Coloring {
    pub fn color(&self, arc: usize) -> LeeColor {
        if self.b_mask >> arc & 1 == 1 {
            LeeColor::B
        } else {
            LeeColor::A
        }
    }

    /// Smoothing at a crossing whose joined arcs are monochromatic, `None`
    /// when all four arcs share a colour, an error when the crossing is not
    /// admissible.
    fn smoothing_at(&self, q: [usize; 4]) -> Result<Option<Smoothing>, ()> {
        let c = q.map(|a| self.color(a));
        if c.iter().all(|&x| x == c[0]) {
            return Ok(None);
        }
        let zero = c[0] == c[1] && c[2] == c[3];
        let one = c[0] == c[3] && c[1] == c[2];
        match (zero, one) {
            (true, false) => Ok(Some(Smoothing::Zero)),
            (false, true) => Ok(Some(Smoothing::One)),
            _ => Err(()),
        }
    }

    pub fn is_admissible(&self, diagram: &PlanarDiagram) -> bool {
        diagram.crossings().iter().all(|&q| self.smoothing_at(q).is_ok())
    }

    /// The partial word of `D_c`: two-colour crossings smoothed, the others
    /// left in place.
    pub fn word(&self, diagram: &PlanarDiagram) -> Result<ResolutionWord, DiagramError> {
        diagram
            .crossings()
            .iter()
            .map(|&q| self.smoothing_at(q).map_err(|_| DiagramError::Internal(format!("colouring {self} is not admissible"))))
            .collect::<Result<Vec<_>, _>>()
            .map(ResolutionWord::from_smoothings)
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for arc in 0..self.arcs {
            f.write_str(if self.color(arc) == LeeColor::A { "a" } else { "b" })?;
        }
        Ok(())
    }
}

impl Serialize for Coloring {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All admissible colourings, in increasing mask order.
pub fn admissible_colorings(diagram: &PlanarDiagram) -> Result<Vec<Coloring>, DiagramError> {
    let arcs = diagram.arc_count();
    if arcs >= 32 {
        return Err(DiagramError::Internal(format!("{arcs} arcs is too many to enumerate colourings")));
    }
    Ok((0..1u64 << arcs)
        .map(|b_mask| Coloring { arcs, b_mask })
        .filter(|c| c.is_admissible(diagram))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColoringBlock {
    pub coloring: Coloring,
    pub word: ResolutionWord,
    pub crossings: usize,
    pub dimension: usize,
    /// Rational homology dimension of `V(D_c)`.
    pub homology: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColoringReport {
    pub components: usize,
    pub total_dimension: usize,
    pub blocks: Vec<ColoringBlock>,
    /// Entries of `d'` in the Lee basis joining two different blocks.
    pub cross_entries: usize,
    pub dimensions_add_up: bool,
    pub is_block_diagonal: bool,
    pub crossed_blocks_acyclic: bool,
    pub crossingless_count: usize,
}

impl ColoringReport {
    pub fn passed(&self) -> bool {
        self.dimensions_add_up
            && self.is_block_diagonal
            && self.crossed_blocks_acyclic
            && self.crossingless_count == 1 << self.components
    }
}

/// Lee-basis generators of one cube vertex: bit `k` of the pattern is set
/// when circle `k` carries `b`.
struct LeeVertexBasis {
    circles: usize,
}

impl LeeVertexBasis {
    /// Standard-basis coordinates of a Lee generator: `Π (X ± 1)`, the
    /// factor `-1` coming from every `b` circle labelled `1`.
    fn to_standard(&self, pattern: u64) -> Vec<(u64, i64)> {
        (0..1u64 << self.circles)
            .map(|mask| (mask, if (pattern & !mask).count_ones() % 2 == 0 { 1 } else { -1 }))
            .collect()
    }

    /// Lee coordinates of a standard vector, times `2^circles`, using
    /// `1 = (a - b)/2` and `X = (a + b)/2`.
    fn from_standard(&self, v: &HashMap<u64, i64>) -> Vec<(u64, i64)> {
        (0..1u64 << self.circles)
            .filter_map(|pattern| {
                let c: i64 = v
                    .iter()
                    .map(|(&mask, &x)| if (pattern & !mask).count_ones() % 2 == 0 { x } else { -x })
                    .sum();
                (c != 0).then_some((pattern, c))
            })
            .collect()
    }
}

/// Decomposes `C'(D) ⊗ ℚ` in the Lee basis along admissible colourings and
/// checks that the pieces are subcomplexes, that the crossinged pieces are
/// acyclic and that exactly `2^k` pieces are crossingless.
pub fn coloring_decomposition_check(diagram: &PlanarDiagram) -> Result<ColoringReport, Error> {
    let cube = Cube::new(diagram);
    let n = diagram.crossing_count();
    let colorings = admissible_colorings(diagram)?;
    let block_of: HashMap<u64, usize> = colorings.iter().enumerate().map(|(k, c)| (c.b_mask, k)).collect();

    // Lee generators are indexed like the cube generators, pattern in place of mask.
    let arc_coloring = |v: usize, pattern: u64| -> u64 {
        let vertex = cube.vertex(v);
        (0..diagram.arc_count()).fold(0, |m, arc| m | (pattern >> vertex.circle_of_arc[arc] & 1) << arc)
    };
    let mut generators_of: Vec<Vec<Generator>> = vec![Vec::new(); colorings.len()];
    let mut entries_of: Vec<Vec<(usize, usize, BigInt)>> = vec![Vec::new(); colorings.len()];
    let mut cross_entries = 0;
    for id in 0..cube.generator_count() {
        let (v, pattern) = cube.generator(id);
        let block = *block_of
            .get(&arc_coloring(v, pattern))
            .ok_or_else(|| DiagramError::Internal(format!("Lee generator {id} has an inadmissible colouring")))?;
        generators_of[block].push(Generator {
            id,
            i: v.count_ones() as i32,
            j: 0,
        });
        let basis = LeeVertexBasis {
            circles: cube.vertex(v).circles.len(),
        };
        let source = basis.to_standard(pattern);
        for c in (0..n).filter(|&c| v >> c & 1 == 0) {
            let w = v | 1 << c;
            let sign = Cube::edge_sign(v, c);
            let map: HashMap<u64, Vec<(u64, i64)>> = cube.edge_map(v, c, Differential::Lee).into_iter().fold(
                HashMap::new(),
                |mut m, (s, t, x)| {
                    m.entry(s).or_default().push((t, x));
                    m
                },
            );
            let mut image: HashMap<u64, i64> = HashMap::new();
            for (mask, x) in &source {
                for (t, y) in map.get(mask).into_iter().flatten() {
                    *image.entry(*t).or_default() += sign * x * y;
                }
            }
            let target = LeeVertexBasis {
                circles: cube.vertex(w).circles.len(),
            };
            let scale = 1i64 << target.circles;
            for (p, x) in target.from_standard(&image) {
                if x % scale != 0 {
                    return Err(DiagramError::Internal(format!("non-integral Lee coefficient {x}/{scale}")).into());
                }
                let tgt = cube.generator_id(w, p);
                if block_of.get(&arc_coloring(w, p)) == Some(&block) {
                    entries_of[block].push((id, tgt, BigInt::from(x / scale)));
                } else {
                    cross_entries += 1;
                }
            }
        }
    }

    let mut blocks = Vec::with_capacity(colorings.len());
    for ((coloring, gens), entries) in colorings.into_iter().zip(generators_of).zip(entries_of) {
        let word = coloring.word(diagram)?;
        let dimension = gens.len();
        let complex = BasedComplex::new(gens, entries, Homogeneity::Graded)?;
        let homology = homology_z_primary(&complex)?.total_rank();
        blocks.push(ColoringBlock {
            coloring,
            crossings: word.unsmoothed().count(),
            word,
            dimension,
            homology,
        });
    }
    let total_dimension = cube.generator_count();
    Ok(ColoringReport {
        components: diagram.component_count(),
        total_dimension,
        dimensions_add_up: blocks.iter().map(|b| b.dimension).sum::<usize>() == total_dimension,
        is_block_diagonal: cross_entries == 0,
        crossed_blocks_acyclic: blocks.iter().all(|b| if b.crossings > 0 { b.homology == 0 } else { b.dimension == 1 && b.homology == 1 }),
        crossingless_count: blocks.iter().filter(|b| b.crossings == 0).count(),
        cross_entries,
        blocks,
    })
}

/// `ComplexError` for a Lee complex whose filtered reduction dropped below
/// the secondary degree of an entry.
pub fn check_filtered(c: &BasedComplex) -> Result<(), ComplexError> {
    for (s, t, _) in c.entries() {
        let (gs, gt) = (c.generator(s).expect("entry source"), c.generator(t).expect("entry target"));
        if gt.j < gs.j {
            return Err(ComplexError::FiltrationViolation {
                src: s,
                tgt: t,
                jsrc: gs.j,
                jtgt: gt.j,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{self, ENTRIES};
    use crate::diagram::parse_pd;
    use crate::expansion::{module_a_ranks, Numbering};
    use crate::homalg::HomologyGroup;
    use std::collections::BTreeMap;
    use crate::khovanov::{build_cube, khovanov_homology, spanning_tree_reduction};

    fn scale(u: AlgebraElement, k: i64) -> AlgebraElement {
        [u[0] * k, u[1] * k]
    }

    #[test]
    fn lee_basis_diagonalises_the_algebra() {
        assert_eq!(lee_merge(LEE_A, LEE_A), scale(LEE_A, 2));
        assert_eq!(lee_merge(LEE_B, LEE_B), scale(LEE_B, -2));
        assert_eq!(lee_merge(LEE_A, LEE_B), [0, 0]);
        let outer = |u: AlgebraElement, v: AlgebraElement| [[u[0] * v[0], u[0] * v[1]], [u[1] * v[0], u[1] * v[1]]];
        assert_eq!(lee_split(LEE_A), outer(LEE_A, LEE_A));
        assert_eq!(lee_split(LEE_B), outer(LEE_B, LEE_B));
        assert_eq!(lee_merge(X, X), ONE);
    }

    #[test]
    fn structure_on_corpus() {
        for e in ENTRIES {
            let s = lee_structure(&e.diagram());
            assert!(s.passed(), "{}: {s:?}", e.name);
        }
    }

    #[test]
    fn trefoil_example() {
        let h = lee_homology(&parse_pd(corpus::TREFOIL_RIGHT).unwrap()).unwrap();
        assert_eq!(h.rational.ranks(), BTreeMap::from([((0, -2), 1), ((0, 0), 1)]));
        assert_eq!(h.integral.get(0), HomologyGroup { rank: 2, torsion: vec![] });
        assert_eq!(h.integral.get(3), HomologyGroup { rank: 0, torsion: vec![2, 2] });
        assert_eq!(h.integral.iter().filter(|(_, g)| !g.is_zero()).count(), 2);
    }

    #[test]
    fn dimension_is_two_to_the_components() {
        for e in ENTRIES.iter().filter(|e| e.diagram().crossing_count() <= 6) {
            let d = e.diagram();
            let lee = lee_homology(&d).unwrap();
            assert_eq!(lee.rational.total_rank(), 1 << e.components, "{}", e.name);
            assert!(lee.rational.total_rank() <= khovanov_homology(&d, false).unwrap().total_rank());
        }
    }

    #[test]
    fn knot_degree() {
        let r = knot_degree_check(&parse_pd(corpus::TREFOIL_RIGHT).unwrap()).unwrap();
        assert_eq!(r.degrees, BTreeSet::from([0]));
        assert!(knot_degree_check(&parse_pd(corpus::FIGURE_EIGHT).unwrap()).unwrap().passed);
        assert!(matches!(knot_degree_check(&corpus::hopf()), Err(Error::Diagram(DiagramError::NotAKnot(2)))));
    }

    #[test]
    fn colorings() {
        for (pd, crossingless) in [("O(1)", 2), (corpus::TREFOIL_LEFT, 2), (corpus::HOPF, 4), (corpus::FIGURE_EIGHT, 2)] {
            let r = coloring_decomposition_check(&parse_pd(pd).unwrap()).unwrap();
            assert!(r.passed(), "{pd}: {r:?}");
            assert_eq!(r.crossingless_count, crossingless);
        }
        let trefoil = parse_pd(corpus::TREFOIL_LEFT).unwrap();
        let r = coloring_decomposition_check(&trefoil).unwrap();
        let flat: Vec<String> = r.blocks.iter().filter(|b| b.crossings == 0).map(|b| b.coloring.to_string()).collect();
        // Monochromatic crossings survive in D_c, so the two flat colourings
        // alternate along the knot and swap under a ↔ b.
        assert_eq!(flat, ["bababa", "ababab"]);
        assert_eq!(admissible_colorings(&parse_pd("O(1)").unwrap()).unwrap().len(), 2);
    }

    #[test]
    fn spanning_tree_reduction_is_filtered() {
        let d = parse_pd(corpus::TREFOIL_LEFT).unwrap();
        let numbering = Numbering::identity(3);
        let model = spanning_tree_reduction(&d, &lee_complex(&d).unwrap(), &numbering).unwrap();
        assert_eq!(model.complex.len(), 6);
        check_filtered(&model.complex).unwrap();
        let table: BTreeMap<(i64, i64), usize> =
            model.complex.generator_table().into_iter().map(|((i, j), n)| ((i as i64, j as i64), n)).collect();
        assert_eq!(table, module_a_ranks(&d, &numbering).unwrap());
        assert_eq!(filtered_homology_q(&model.complex).unwrap(), lee_homology(&d).unwrap().rational);
        assert_eq!(build_cube(&d).unwrap().len(), lee_complex(&d).unwrap().len());
    }
}
