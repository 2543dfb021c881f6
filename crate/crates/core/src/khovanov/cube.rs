use num_bigint::BigInt;

use crate::diagram::{PlanarDiagram, ResolutionWord, SmoothedDiagram};
use crate::error::ComplexError;
use crate::homalg::{BasedComplex, Generator, Homogeneity};

/// One vertex of the cube: a total word and its circles.
#[derive(Clone, Debug)]
pub struct Vertex {
    /// Arcs of each circle; circles ordered by smallest arc.
    pub circles: Vec<Vec<usize>>,
    pub circle_of_arc: Vec<usize>,
    first_id: usize,
}

/// Which differential to assemble on the cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Differential {
    /// Khovanov's `d`, bidegree (1, 0).
    Khovanov,
    /// Lee's deformation `Φ`, bidegree (1, 4).
    Phi,
    /// `d + Φ`.
    Lee,
}

/// The change of circles along an edge of the cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    /// Source circles `a` and `b` merge into target circle `t`.
    Merge { a: usize, b: usize, t: usize },
    /// Source circle `s` splits into target circles `a` and `b`.
    Split { s: usize, a: usize, b: usize },
}

/// The cube of resolutions. Vertex `v` is the total word whose 1-smoothings
/// are the set bits of `v`; a generator is a vertex with a label mask whose
/// bit `k` is set when circle `k` carries `X` (degree -1) rather than `1`.
#[derive(Clone, Debug)]
pub struct Cube<'a> {
    diagram: &'a PlanarDiagram,
    crossings: usize,
    vertices: Vec<Vertex>,
    /// `(vertex, mask)` per generator id.
    generators: Vec<(usize, u64)>,
}

impl<'a> Cube<'a> {
    pub fn new(diagram: &'a PlanarDiagram) -> Cube<'a> {
        let n = diagram.crossing_count();
        let mut vertices = Vec::with_capacity(1 << n);
        let mut generators = Vec::new();
        for v in 0..1usize << n {
            let sd = SmoothedDiagram::new(diagram, ResolutionWord::from_bits(n, v as u64)).expect("word has the right length");
            let (circle_of_arc, count) = sd.arc_components();
            let mut circles = vec![Vec::new(); count];
            for (arc, &c) in circle_of_arc.iter().enumerate() {
                circles[c].push(arc);
            }
            let first_id = generators.len();
            generators.extend((0..1u64 << count).map(|mask| (v, mask)));
            vertices.push(Vertex {
                circles,
                circle_of_arc,
                first_id,
            });
        }
        Cube {
            diagram,
            crossings: n,
            vertices,
            generators,
        }
    }

    pub fn diagram(&self) -> &'a PlanarDiagram {
        self.diagram
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// `(vertex, mask)` of a generator id.
    pub fn generator(&self, id: usize) -> (usize, u64) {
        self.generators[id]
    }

    pub fn generator_id(&self, v: usize, mask: u64) -> usize {
        self.vertices[v].first_id + mask as usize
    }

    /// Bidegree `(r, Σdeg + r)` of a generator.
    pub fn bidegree(&self, id: usize) -> (i32, i32) {
        let (v, mask) = self.generators[id];
        let k = self.vertices[v].circles.len() as i32;
        let xs = mask.count_ones() as i32;
        let r = v.count_ones() as i32;
        (r, k - 2 * xs + r)
    }

    /// Kind of the edge leaving `v` at crossing `c` (bit `c` of `v` clear).
    pub fn edge_kind(&self, v: usize, c: usize) -> EdgeKind {
        let w = v | 1 << c;
        let q = self.diagram.crossing(c);
        let touched = |vertex: &Vertex| {
            let mut t: Vec<usize> = q.iter().map(|&a| vertex.circle_of_arc[a]).collect();
            t.sort_unstable();
            t.dedup();
            t
        };
        let (src, tgt) = (touched(&self.vertices[v]), touched(&self.vertices[w]));
        match (src.as_slice(), tgt.as_slice()) {
            (&[a, b], &[t]) => EdgeKind::Merge { a, b, t },
            (&[s], &[a, b]) => EdgeKind::Split { s, a, b },
            _ => panic!("edge at crossing {c} neither merges nor splits"),
        }
    }

    /// Components of the map on the edge `v -> v + e_c`, without the edge
    /// sign, as `(source mask, target mask, coefficient)`.
    pub fn edge_map(&self, v: usize, c: usize, which: Differential) -> Vec<(u64, u64, i64)> {
        let w = v | 1 << c;
        let (sv, tv) = (&self.vertices[v], &self.vertices[w]);
        let kind = self.edge_kind(v, c);
        // Source circle carrying the label of every untouched target circle.
        let carried: Vec<Option<usize>> = tv
            .circles
            .iter()
            .enumerate()
            .map(|(t, arcs)| {
                let touched = match kind {
                    EdgeKind::Merge { t: m, .. } => t == m,
                    EdgeKind::Split { a, b, .. } => t == a || t == b,
                };
                (!touched).then(|| sv.circle_of_arc[arcs[0]])
            })
            .collect();
        let bit = |mask: u64, k: usize| mask >> k & 1;
        let (with_d, with_phi) = match which {
            Differential::Khovanov => (true, false),
            Differential::Phi => (false, true),
            Differential::Lee => (true, true),
        };
        let mut out = Vec::new();
        for mask in 0..1u64 << sv.circles.len() {
            let mut base = 0u64;
            for (t, s) in carried.iter().enumerate() {
                if let Some(s) = s {
                    base |= bit(mask, *s) << t;
                }
            }
            match kind {
                EdgeKind::Merge { a, b, t } => {
                    let x = 1u64 << t;
                    match (bit(mask, a), bit(mask, b)) {
                        (0, 0) if with_d => out.push((mask, base, 1)),
                        (0, 1) | (1, 0) if with_d => out.push((mask, base | x, 1)),
                        (1, 1) if with_phi => out.push((mask, base, 1)),
                        _ => {}
                    }
                }
                EdgeKind::Split { s, a, b } => {
                    let (xa, xb) = (1u64 << a, 1u64 << b);
                    match bit(mask, s) {
                        0 if with_d => {
                            out.push((mask, base | xb, 1));
                            out.push((mask, base | xa, 1));
                        }
                        1 => {
                            if with_d {
                                out.push((mask, base | xa | xb, 1));
                            }
                            if with_phi {
                                out.push((mask, base, 1));
                            }
                        }
                        _ => {}
                    }
                }
            }
        }
        out
    }

    /// `(-1)^(number of 1s before position c)`.
    pub fn edge_sign(v: usize, c: usize) -> i64 {
        if (v & ((1 << c) - 1)).count_ones() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All signed differential entries `(source id, target id, value)`.
    pub fn entries(&self, which: Differential) -> Vec<(usize, usize, BigInt)> {
        let mut entries = Vec::new();
        for v in 0..self.vertices.len() {
            for c in (0..self.crossings).filter(|&c| v >> c & 1 == 0) {
                let sign = Self::edge_sign(v, c);
                let w = v | 1 << c;
                for (m, m2, coeff) in self.edge_map(v, c, which) {
                    entries.push((self.generator_id(v, m), self.generator_id(w, m2), BigInt::from(sign * coeff)));
                }
            }
        }
        entries
    }

    pub fn generator_list(&self) -> Vec<Generator> {
        (0..self.generators.len())
            .map(|id| {
                let (i, j) = self.bidegree(id);
                Generator { id, i, j }
            })
            .collect()
    }

    /// The cube with the chosen differential; `d² = 0` is verified.
    pub fn complex(&self, which: Differential) -> Result<BasedComplex, ComplexError> {
        let homogeneity = match which {
            Differential::Khovanov => Homogeneity::Graded,
            Differential::Phi | Differential::Lee => Homogeneity::Filtered,
        };
        BasedComplex::new(self.generator_list(), self.entries(which), homogeneity)
    }
}

/// Khovanov's complex of the diagram, unnormalised: generator at
/// `(r, Σdeg + r)` for a state with `r` 1-smoothings.
pub fn build_cube(diagram: &PlanarDiagram) -> Result<BasedComplex, ComplexError> {
    Cube::new(diagram).complex(Differential::Khovanov)
}
