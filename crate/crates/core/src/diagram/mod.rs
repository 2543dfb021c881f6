//! Link diagrams given as PD codes.
//!
//! A crossing is a quadruple of arcs listed counterclockwise, starting at the
//! incoming under-strand. Slots 0 and 2 belong to the under-strand, slots 1
//! and 3 to the over-strand. Arcs are stored as dense indices `0..arc_count()`
//! in increasing label order; the original labels are kept for printing.

mod black_graph;
mod parse;
mod smoothing;

pub use black_graph::{black_graph, enumerate_k1, tree_state_bijection, BlackGraph};
pub use parse::parse_pd;
pub use smoothing::{
    count_circles, is_connected, is_splitting, kink_sign, KinkSign, ResolutionWord,
    SmoothedDiagram, Smoothing,
};

use std::collections::BTreeMap;
use std::fmt;

use petgraph::unionfind::UnionFind;

use crate::error::DiagramError;

/// One end of an arc: the slot of a crossing it is attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct End {
    pub crossing: usize,
    pub slot: usize,
}

impl End {
    fn new(crossing: usize, slot: usize) -> Self {
        End { crossing, slot }
    }
}

/// Face structure derived from the rotation system.
///
/// The corner `(c, s)` is the region between slots `s` and `s + 1` (mod 4)
/// at crossing `c`. Faces are numbered in order of their first corner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Faces {
    pub of_corner: Vec<[usize; 4]>,
    pub count: usize,
}

/// Direction of travel along every crossing arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    /// The end each arc flows into; `None` for free circles.
    head: Vec<Option<End>>,
}

impl Orientation {
    pub fn head(&self, arc: usize) -> Option<End> {
        self.head[arc]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarDiagram {
    crossings: Vec<[usize; 4]>,
    labels: Vec<u32>,
    free_circles: Vec<usize>,
    ends: Vec<Vec<End>>,
    marked_face: Option<usize>,
    orientation: Option<Orientation>,
}

impl PlanarDiagram {
    /// Builds and validates a diagram from labelled crossings and free circles.
    pub fn from_labels(crossings: &[[u32; 4]], circles: &[u32]) -> Result<Self, DiagramError> {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for q in crossings {
            for &a in q {
                *counts.entry(a).or_default() += 1;
            }
        }
        if let Some((&label, &count)) = counts.iter().find(|(_, &c)| c != 2) {
            return Err(DiagramError::ArcMultiplicity { label, count });
        }
        let mut circle_labels = circles.to_vec();
        circle_labels.sort_unstable();
        for w in circle_labels.windows(2) {
            if w[0] == w[1] {
                return Err(DiagramError::FreeCircleReuse(w[0]));
            }
        }
        for &c in &circle_labels {
            if counts.contains_key(&c) {
                return Err(DiagramError::FreeCircleReuse(c));
            }
        }
        if crossings.is_empty() && circles.is_empty() {
            return Err(DiagramError::Internal("empty diagram".into()));
        }

        let mut labels: Vec<u32> = counts.keys().copied().chain(circle_labels.iter().copied()).collect();
        labels.sort_unstable();
        let index: BTreeMap<u32, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let dense: Vec<[usize; 4]> = crossings.iter().map(|q| q.map(|a| index[&a])).collect();
        let free_circles: Vec<usize> = circles.iter().map(|c| index[c]).collect();

        let mut ends = vec![Vec::with_capacity(2); labels.len()];
        for (c, q) in dense.iter().enumerate() {
            for (s, &a) in q.iter().enumerate() {
                ends[a].push(End::new(c, s));
            }
        }

        let mut diagram = PlanarDiagram {
            crossings: dense,
            labels,
            free_circles,
            ends,
            marked_face: None,
            orientation: None,
        };
        diagram.check_planar()?;
        diagram.orientation = diagram.derive_orientation();
        Ok(diagram)
    }

    /// Designates the unbounded face used for the chessboard colouring.
    pub fn with_marked_face(mut self, face: usize) -> Result<Self, DiagramError> {
        let count = self.faces().count;
        if face >= count {
            return Err(DiagramError::FaceOutOfRange { face, count });
        }
        self.marked_face = Some(face);
        Ok(self)
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        self.labels.len()
    }

    pub fn crossings(&self) -> &[[usize; 4]] {
        &self.crossings
    }

    pub fn crossing(&self, c: usize) -> [usize; 4] {
        self.crossings[c]
    }

    pub fn free_circles(&self) -> &[usize] {
        &self.free_circles
    }

    pub fn label(&self, arc: usize) -> u32 {
        self.labels[arc]
    }

    pub fn arc_of_label(&self, label: u32) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn ends(&self, arc: usize) -> &[End] {
        &self.ends[arc]
    }

    pub fn marked_face(&self) -> Option<usize> {
        self.marked_face
    }

    pub fn orientation(&self) -> Option<&Orientation> {
        self.orientation.as_ref()
    }

    pub fn arc_at(&self, end: End) -> usize {
        self.crossings[end.crossing][end.slot]
    }

    /// The other end of the arc attached at `end`.
    pub fn other_end(&self, end: End) -> End {
        let ends = &self.ends[self.arc_at(end)];
        if ends[0] == end {
            ends[1]
        } else {
            ends[0]
        }
    }

    /// The labelled crossings, as they would be written in a PD code.
    pub fn labelled_crossings(&self) -> Vec<[u32; 4]> {
        self.crossings.iter().map(|q| q.map(|a| self.labels[a])).collect()
    }

    pub fn free_circle_labels(&self) -> Vec<u32> {
        self.free_circles.iter().map(|&a| self.labels[a]).collect()
    }

    pub fn faces(&self) -> Faces {
        let n = self.crossings.len();
        let mut of_corner = vec![[usize::MAX; 4]; n];
        let mut count = 0;
        for c in 0..n {
            for s in 0..4 {
                if of_corner[c][s] != usize::MAX {
                    continue;
                }
                let mut corner = End::new(c, s);
                while of_corner[corner.crossing][corner.slot] == usize::MAX {
                    of_corner[corner.crossing][corner.slot] = count;
                    corner = self.other_end(End::new(corner.crossing, (corner.slot + 1) % 4));
                }
                count += 1;
            }
        }
        Faces { of_corner, count }
    }

    /// The face treated as unbounded: the marked one, or the face at corner
    /// (0, 0) by default.
    pub fn unbounded_face(&self) -> Option<usize> {
        if self.crossings.is_empty() {
            return None;
        }
        Some(self.marked_face.unwrap_or_else(|| self.faces().of_corner[0][0]))
    }

    fn check_planar(&self) -> Result<(), DiagramError> {
        let n = self.crossings.len();
        let mut uf = UnionFind::<usize>::new(n);
        for ends in &self.ends {
            if let [a, b] = ends[..] {
                uf.union(a.crossing, b.crossing);
            }
        }
        let faces = self.faces();
        let mut vertices: BTreeMap<usize, usize> = BTreeMap::new();
        let mut face_sets: BTreeMap<usize, std::collections::BTreeSet<usize>> = BTreeMap::new();
        for c in 0..n {
            let root = uf.find(c);
            *vertices.entry(root).or_default() += 1;
            face_sets.entry(root).or_default().extend(faces.of_corner[c]);
        }
        for (root, v) in vertices {
            let f = face_sets[&root].len();
            let euler = v as i64 - 2 * v as i64 + f as i64;
            if euler != 2 {
                return Err(DiagramError::NonPlanar {
                    vertices: v,
                    faces: f,
                    euler,
                });
            }
        }
        Ok(())
    }

    /// Orients every arc from the under-strand convention (slot 0 incoming,
    /// slot 2 outgoing). Components without an under-pass are oriented from
    /// their lowest arc towards its second end. `None` if the code is
    /// inconsistent with that convention.
    fn derive_orientation(&self) -> Option<Orientation> {
        let arcs = self.labels.len();
        let mut head: Vec<Option<End>> = vec![None; arcs];
        let mut stack = Vec::new();
        let set = |head: &mut Vec<Option<End>>, stack: &mut Vec<usize>, arc: usize, end: End| -> bool {
            match head[arc] {
                Some(h) => h == end,
                None => {
                    head[arc] = Some(end);
                    stack.push(arc);
                    true
                }
            }
        };
        for (c, q) in self.crossings.iter().enumerate() {
            if !set(&mut head, &mut stack, q[0], End::new(c, 0)) {
                return None;
            }
            let out = End::new(c, 2);
            if !set(&mut head, &mut stack, q[2], self.other_end(out)) {
                return None;
            }
        }
        let mut next_seed = 0;
        loop {
            while let Some(arc) = stack.pop() {
                let h = head[arc].expect("pushed arcs have heads");
                // Continue straight through the crossing we flow into.
                let out = End::new(h.crossing, (h.slot + 2) % 4);
                if !set(&mut head, &mut stack, self.arc_at(out), self.other_end(out)) {
                    return None;
                }
                // And backwards through the crossing we came from.
                let t = self.other_end(h);
                let inc = End::new(t.crossing, (t.slot + 2) % 4);
                if !set(&mut head, &mut stack, self.arc_at(inc), inc) {
                    return None;
                }
            }
            while next_seed < arcs && (head[next_seed].is_some() || self.ends[next_seed].is_empty()) {
                next_seed += 1;
            }
            if next_seed == arcs {
                break;
            }
            let e = self.ends[next_seed][1];
            set(&mut head, &mut stack, next_seed, e);
        }
        Some(Orientation { head })
    }

    /// Crossing signs (+1 / -1) under the diagram's orientation.
    pub fn crossing_signs(&self) -> Result<Vec<i8>, DiagramError> {
        let o = self.orientation.as_ref().ok_or(DiagramError::NoOrientation)?;
        Ok((0..self.crossings.len())
            .map(|c| {
                let d = End::new(c, 3);
                if o.head[self.arc_at(d)] == Some(d) {
                    1
                } else {
                    -1
                }
            })
            .collect())
    }

    /// `(n₊, n₋)`.
    pub fn signed_crossing_counts(&self) -> Result<(usize, usize), DiagramError> {
        let signs = self.crossing_signs()?;
        let pos = signs.iter().filter(|&&s| s > 0).count();
        Ok((pos, signs.len() - pos))
    }

    /// Walks every strand straight through the crossings. Each component is
    /// returned as the cyclic sequence of ends at which it enters a crossing.
    pub fn strands(&self) -> Vec<Vec<End>> {
        let mut seen = vec![false; self.labels.len()];
        let mut out = Vec::new();
        for start in 0..self.labels.len() {
            if seen[start] || self.ends[start].is_empty() {
                continue;
            }
            let mut visits = Vec::new();
            let mut arc = start;
            let mut enter = self.ends[start][1];
            while !seen[arc] {
                seen[arc] = true;
                visits.push(enter);
                let exit = End::new(enter.crossing, (enter.slot + 2) % 4);
                arc = self.arc_at(exit);
                enter = self.other_end(exit);
            }
            out.push(visits);
        }
        out
    }

    /// Number of link components, free circles included.
    pub fn component_count(&self) -> usize {
        self.strands().len() + self.free_circles.len()
    }

    /// Whether every strand alternates between over- and under-passes.
    pub fn is_alternating(&self) -> bool {
        self.strands().iter().all(|visits| {
            let over = |e: &End| e.slot % 2 == 1;
            visits
                .iter()
                .zip(visits.iter().cycle().skip(1))
                .all(|(a, b)| over(a) != over(b))
        })
    }

    /// Relabels arcs to `offset + 1, offset + 2, ...` in dense order.
    fn shifted_labels(&self, offset: u32) -> (Vec<[u32; 4]>, Vec<u32>) {
        let l = |a: usize| offset + a as u32 + 1;
        (
            self.crossings.iter().map(|q| q.map(l)).collect(),
            self.free_circles.iter().map(|&a| l(a)).collect(),
        )
    }

    /// Mirror image: every crossing flips, so 0- and 1-smoothings swap.
    pub fn mirror(&self) -> PlanarDiagram {
        let quads: Vec<[u32; 4]> = match &self.orientation {
            Some(o) => self
                .crossings
                .iter()
                .enumerate()
                .map(|(c, q)| {
                    // The old over-strand becomes the under-strand; start the
                    // quadruple at its incoming end.
                    let l = q.map(|a| self.labels[a]);
                    if o.head[q[3]] == Some(End::new(c, 3)) {
                        [l[3], l[0], l[1], l[2]]
                    } else {
                        [l[1], l[2], l[3], l[0]]
                    }
                })
                .collect(),
            None => self
                .labelled_crossings()
                .into_iter()
                .map(|l| [l[1], l[2], l[3], l[0]])
                .collect(),
        };
        PlanarDiagram::from_labels(&quads, &self.free_circle_labels())
            .expect("mirroring preserves planarity")
    }

    /// Inserts a Reidemeister-1 kink on `arc` with the given sign. The kink
    /// is placed at the head end of the arc when an orientation exists.
    pub fn add_kink(&self, arc_label: u32, positive: bool) -> Result<PlanarDiagram, DiagramError> {
        let arc = self.arc_of_label(arc_label).ok_or(DiagramError::NoSuchArc(arc_label))?;
        let max = *self.labels.iter().max().expect("nonempty");
        let (loop_l, next) = (max + 1, max + 2);
        let mut quads = self.labelled_crossings();
        let mut circles = self.free_circle_labels();
        let kink = |incoming: u32, outgoing: u32| {
            if positive {
                [incoming, outgoing, loop_l, loop_l]
            } else {
                [incoming, loop_l, loop_l, outgoing]
            }
        };
        if self.ends[arc].is_empty() {
            circles.retain(|&c| c != arc_label);
            quads.push(kink(arc_label, arc_label));
        } else {
            let head = self
                .orientation
                .as_ref()
                .and_then(|o| o.head[arc])
                .unwrap_or(self.ends[arc][1]);
            quads[head.crossing][head.slot] = next;
            quads.push(kink(arc_label, next));
        }
        PlanarDiagram::from_labels(&quads, &circles)
    }

    /// Connected sum along `arc1` of `self` and `arc2` of `other`.
    ///
    /// Both arcs are cut and reconnected crosswise so that orientations
    /// agree; the other reconnection is only tried if that one is not planar.
    pub fn connected_sum(&self, other: &PlanarDiagram, arc1: u32, arc2: u32) -> Result<PlanarDiagram, DiagramError> {
        let a1 = self.arc_of_label(arc1).ok_or(DiagramError::NoSuchArc(arc1))?;
        let a2 = other.arc_of_label(arc2).ok_or(DiagramError::NoSuchArc(arc2))?;
        let (q1, c1) = self.shifted_labels(0);
        let offset = self.labels.len() as u32;
        let (q2, c2) = other.shifted_labels(offset);
        let l1 = a1 as u32 + 1;
        let l2 = offset + a2 as u32 + 1;

        // Summing with a free circle just drops that circle.
        if self.ends[a1].is_empty() || other.ends[a2].is_empty() {
            let drop = if self.ends[a1].is_empty() { l1 } else { l2 };
            let quads: Vec<[u32; 4]> = q1.into_iter().chain(q2).collect();
            let circles: Vec<u32> = c1.into_iter().chain(c2).filter(|&c| c != drop).collect();
            return PlanarDiagram::from_labels(&quads, &circles);
        }

        let head = |d: &PlanarDiagram, a: usize| -> End {
            d.orientation
                .as_ref()
                .and_then(|o| o.head[a])
                .unwrap_or(d.ends[a][1])
        };
        let h1 = head(self, a1);
        let h2 = head(other, a2);
        let t2 = other.other_end(h2);
        let circles: Vec<u32> = c1.iter().chain(&c2).copied().collect();
        // Arc l1 now runs from the tail of a1 into the head of a2, and l2
        // from the tail of a2 into the head of a1.
        let splice = |into_other: End| {
            let mut quads = q1.clone();
            let mut quads2 = q2.clone();
            quads[h1.crossing][h1.slot] = l2;
            quads2[into_other.crossing][into_other.slot] = l1;
            quads.extend(quads2);
            PlanarDiagram::from_labels(&quads, &circles)
        };
        splice(h2).or_else(|_| splice(t2))
    }

    /// Renumbers the crossings: crossing `order[k]` becomes crossing `k`.
    pub fn renumbered(&self, order: &[usize]) -> Result<PlanarDiagram, DiagramError> {
        let numbering = crate::expansion::Numbering::new(order.to_vec(), self.crossing_count())?;
        let labelled = self.labelled_crossings();
        let quads: Vec<[u32; 4]> = numbering.order().iter().map(|&c| labelled[c]).collect();
        PlanarDiagram::from_labels(&quads, &self.free_circle_labels())
    }
}

impl fmt::Display for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(face) = self.marked_face {
            writeln!(f, "unbounded_face: {face}")?;
        }
        let mut tokens: Vec<String> = self
            .labelled_crossings()
            .iter()
            .map(|q| format!("X({},{},{},{})", q[0], q[1], q[2], q[3]))
            .collect();
        tokens.extend(self.free_circle_labels().iter().map(|c| format!("O({c})")));
        write!(f, "{}", tokens.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

    #[test]
    fn trefoil_faces_satisfy_euler() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.faces().count, 5);
        assert_eq!(d.arc_count(), 6);
    }

    #[test]
    fn kink_has_three_faces() {
        let d = parse_pd("X(1,2,2,1)").unwrap();
        assert_eq!(d.faces().count, 3);
    }

    #[test]
    fn non_planar_rotation_is_rejected() {
        // Same arcs as the trefoil with one rotation reversed.
        let err = parse_pd("X(1,5,2,4) X(3,6,4,1) X(5,2,6,3)").unwrap_err();
        assert!(matches!(err, crate::error::ParseError::Diagram(DiagramError::NonPlanar { .. })));
    }

    #[test]
    fn orientation_and_signs() {
        let left = parse_pd(TREFOIL).unwrap();
        assert_eq!(left.crossing_signs().unwrap(), vec![-1, -1, -1]);
        let right = parse_pd("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)").unwrap();
        assert_eq!(right.crossing_signs().unwrap(), vec![1, 1, 1]);
        assert_eq!(parse_pd("X(1,2,2,1)").unwrap().crossing_signs().unwrap(), vec![-1]);
        assert_eq!(parse_pd("X(1,1,2,2)").unwrap().crossing_signs().unwrap(), vec![1]);
    }

    #[test]
    fn mirror_flips_signs() {
        let left = parse_pd(TREFOIL).unwrap();
        let m = left.mirror();
        assert_eq!(m.crossing_signs().unwrap(), vec![1, 1, 1]);
        assert!(m.is_alternating());
    }

    #[test]
    fn alternation() {
        assert!(parse_pd(TREFOIL).unwrap().is_alternating());
        assert!(parse_pd("X(1,2,2,1)").unwrap().is_alternating());
        let granny = parse_pd(TREFOIL)
            .unwrap()
            .connected_sum(&parse_pd(TREFOIL).unwrap(), 1, 1)
            .unwrap();
        assert_eq!(granny.crossing_count(), 6);
        assert_eq!(granny.component_count(), 1);
    }

    #[test]
    fn components_of_links() {
        let hopf = parse_pd("X(4,1,3,2) X(2,3,1,4)").unwrap();
        assert_eq!(hopf.component_count(), 2);
        assert_eq!(parse_pd("O(1) O(2)").unwrap().component_count(), 2);
    }

    #[test]
    fn added_kinks_have_requested_sign() {
        let d = parse_pd(TREFOIL).unwrap();
        let pos = d.add_kink(1, true).unwrap();
        assert_eq!(pos.crossing_count(), 4);
        assert_eq!(pos.crossing_signs().unwrap(), vec![-1, -1, -1, 1]);
        let neg = d.add_kink(3, false).unwrap();
        assert_eq!(neg.crossing_signs().unwrap(), vec![-1, -1, -1, -1]);
        let circle = parse_pd("O(1)").unwrap().add_kink(1, true).unwrap();
        assert_eq!(circle.crossing_signs().unwrap(), vec![1]);
    }

    #[test]
    fn display_round_trips() {
        let d = parse_pd("unbounded_face: 2\nX(1,4,2,5) X(3,6,4,1) X(5,2,6,3) O(9)").unwrap();
        let again = parse_pd(&d.to_string()).unwrap();
        assert_eq!(d, again);
    }

    #[test]
    fn renumbering_permutes_crossings() {
        let d = parse_pd(TREFOIL).unwrap();
        let r = d.renumbered(&[2, 0, 1]).unwrap();
        assert_eq!(r.labelled_crossings()[0], [5, 2, 6, 3]);
        assert!(d.renumbered(&[0, 0, 1]).is_err());
    }
}
