use std::collections::BTreeMap;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use petgraph::unionfind::UnionFind;

use crate::error::DiagramError;

use super::{PlanarDiagram, ResolutionWord, SmoothedDiagram, Smoothing};

/// Multigraph on the black regions, one edge per crossing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlackGraph {
    /// Face index of each vertex.
    pub vertex_faces: Vec<usize>,
    /// Edge `c` joins the two black regions meeting at crossing `c`.
    pub edges: Vec<(usize, usize)>,
    /// The smoothing at each crossing that merges its two black corners.
    pub black_smoothing: Vec<Smoothing>,
}

/// Chessboard-colours the faces with the unbounded face white and builds the
/// black graph.
pub fn black_graph(diagram: &PlanarDiagram) -> Result<BlackGraph, DiagramError> {
    if !SmoothedDiagram::unsmoothed(diagram).is_connected() {
        return Err(DiagramError::Disconnected);
    }
    if diagram.crossing_count() == 0 {
        // A lone circle: the disk inside is the only black region.
        return Ok(BlackGraph {
            vertex_faces: vec![0],
            edges: Vec::new(),
            black_smoothing: Vec::new(),
        });
    }
    let faces = diagram.faces();
    // Adjacent corners around a crossing lie on opposite sides of a strand.
    let mut color: Vec<Option<bool>> = vec![None; faces.count];
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); faces.count];
    for corners in &faces.of_corner {
        for s in 0..4 {
            let (a, b) = (corners[s], corners[(s + 1) % 4]);
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
    }
    let white = diagram.unbounded_face().expect("has crossings");
    color[white] = Some(false);
    let mut stack = vec![white];
    while let Some(f) = stack.pop() {
        let c = color[f].expect("coloured before push");
        for &g in &adjacency[f] {
            match color[g] {
                None => {
                    color[g] = Some(!c);
                    stack.push(g);
                }
                Some(cg) if cg == c => return Err(DiagramError::Coloring),
                Some(_) => {}
            }
        }
    }
    let is_black = |f: usize| color[f] == Some(true);
    let vertex_faces: Vec<usize> = (0..faces.count).filter(|&f| is_black(f)).collect();
    let vertex_of: BTreeMap<usize, usize> = vertex_faces.iter().enumerate().map(|(v, &f)| (f, v)).collect();

    let mut edges = Vec::with_capacity(diagram.crossing_count());
    let mut black_smoothing = Vec::with_capacity(diagram.crossing_count());
    for corners in &faces.of_corner {
        // The 0-smoothing merges the odd corners (1,3), the 1-smoothing the
        // even corners (0,2).
        let (first, smoothing) = if is_black(corners[1]) { (1, Smoothing::Zero) } else { (0, Smoothing::One) };
        edges.push((vertex_of[&corners[first]], vertex_of[&corners[first + 2]]));
        black_smoothing.push(smoothing);
    }
    Ok(BlackGraph {
        vertex_faces,
        edges,
        black_smoothing,
    })
}

impl BlackGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_faces.len()
    }

    /// All spanning trees, each as a sorted list of edge (= crossing) indices.
    pub fn spanning_trees(&self) -> Vec<Vec<usize>> {
        let v = self.vertex_count();
        (0..self.edges.len())
            .combinations(v - 1)
            .filter(|subset| {
                let mut uf = UnionFind::<usize>::new(v);
                subset.iter().all(|&e| uf.union(self.edges[e].0, self.edges[e].1))
            })
            .collect()
    }

    /// Spanning-tree count by the Matrix-Tree theorem.
    pub fn matrix_tree_count(&self) -> BigInt {
        let v = self.vertex_count();
        if v <= 1 {
            return BigInt::one();
        }
        let m = v - 1;
        let mut lap = vec![vec![BigInt::zero(); m]; m];
        for &(a, b) in &self.edges {
            if a == b {
                continue;
            }
            for (x, y) in [(a, b), (b, a)] {
                if x < m {
                    lap[x][x] += 1;
                    if y < m {
                        lap[x][y] -= 1;
                    }
                }
            }
        }
        bareiss_determinant(lap)
    }

    /// The state with the black smoothing exactly at the tree's crossings.
    pub fn state_of_tree(&self, tree: &[usize]) -> ResolutionWord {
        let mut word: Vec<Option<Smoothing>> = self.black_smoothing.iter().map(|s| Some(s.flip())).collect();
        for &e in tree {
            word[e] = Some(self.black_smoothing[e]);
        }
        ResolutionWord::from_smoothings(word)
    }

    /// Number of black smoothings in a total word.
    pub fn black_smoothings_in(&self, word: &ResolutionWord) -> usize {
        (0..self.black_smoothing.len())
            .filter(|&c| word.get(c) == Some(self.black_smoothing[c]))
            .count()
    }
}

fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// `K₁(D)`: total words with a single circle, in lexicographic order.
pub fn enumerate_k1(diagram: &PlanarDiagram) -> Vec<ResolutionWord> {
    let n = diagram.crossing_count();
    let mut states: Vec<ResolutionWord> = (0..1u64 << n)
        .map(|bits| ResolutionWord::from_bits(n, bits))
        .filter(|w| {
            SmoothedDiagram::new(diagram, w.clone())
                .map(|sd| sd.component_count() == 1)
                .unwrap_or(false)
        })
        .collect();
    states.sort();
    states
}

/// Pairs each spanning tree of the black graph with its single-circle state,
/// checking that the assignment is a bijection onto `K₁(D)`.
pub fn tree_state_bijection(diagram: &PlanarDiagram) -> Result<Vec<(Vec<usize>, ResolutionWord)>, DiagramError> {
    let graph = black_graph(diagram)?;
    let pairs: Vec<(Vec<usize>, ResolutionWord)> = graph
        .spanning_trees()
        .into_iter()
        .map(|t| {
            let s = graph.state_of_tree(&t);
            (t, s)
        })
        .collect();
    let mut images: Vec<ResolutionWord> = pairs.iter().map(|(_, s)| s.clone()).collect();
    images.sort();
    let k1 = enumerate_k1(diagram);
    if images != k1 {
        return Err(DiagramError::Internal(format!(
            "spanning trees map to {} states, K₁ has {}",
            images.len(),
            k1.len()
        )));
    }
    Ok(pairs)
}
