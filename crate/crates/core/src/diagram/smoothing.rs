use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::DiagramError;

use super::PlanarDiagram;

/// The two ways of resolving a crossing. `Zero` joins slots (1,2) and (3,4)
/// of the quadruple, `One` joins (1,4) and (2,3).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Smoothing {
    Zero,
    One,
}

impl Smoothing {
    pub fn flip(self) -> Smoothing {
        match self {
            Smoothing::Zero => Smoothing::One,
            Smoothing::One => Smoothing::Zero,
        }
    }

    pub fn from_bit(bit: bool) -> Smoothing {
        if bit {
            Smoothing::One
        } else {
            Smoothing::Zero
        }
    }

    /// The slot pairs joined by this smoothing.
    pub fn pairs(self) -> [(usize, usize); 2] {
        match self {
            Smoothing::Zero => [(0, 1), (2, 3)],
            Smoothing::One => [(0, 3), (1, 2)],
        }
    }
}

/// A partial or total choice of smoothings, indexed by crossing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResolutionWord(Vec<Option<Smoothing>>);

impl ResolutionWord {
    pub fn empty(n: usize) -> Self {
        ResolutionWord(vec![None; n])
    }

    /// The total word whose crossing `c` is a 1-smoothing iff bit `c` is set.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        ResolutionWord((0..n).map(|c| Some(Smoothing::from_bit(bits >> c & 1 == 1))).collect())
    }

    pub fn from_smoothings(s: Vec<Option<Smoothing>>) -> Self {
        ResolutionWord(s)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, c: usize) -> Option<Smoothing> {
        self.0[c]
    }

    pub fn set(&mut self, c: usize, s: Option<Smoothing>) {
        self.0[c] = s;
    }

    pub fn with(&self, c: usize, s: Smoothing) -> Self {
        let mut w = self.clone();
        w.0[c] = Some(s);
        w
    }

    pub fn is_total(&self) -> bool {
        self.0.iter().all(Option::is_some)
    }

    /// `r(D, D')`: the number of 1-smoothings.
    pub fn ones(&self) -> usize {
        self.0.iter().filter(|s| **s == Some(Smoothing::One)).count()
    }

    pub fn unsmoothed(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, s)| s.is_none()).map(|(c, _)| c)
    }

    /// Bit mask of the 1-smoothings.
    pub fn bits(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Some(Smoothing::One))
            .fold(0, |acc, (c, _)| acc | 1 << c)
    }

    /// Whether `other` agrees with every smoothing fixed in `self`.
    pub fn is_refined_by(&self, other: &ResolutionWord) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a.is_none() || a == b)
    }
}

impl fmt::Display for ResolutionWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Some(Smoothing::Zero) => "0",
                Some(Smoothing::One) => "1",
                None => "-",
            })?;
        }
        Ok(())
    }
}

impl Serialize for ResolutionWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Sign of a splitting crossing. Positive kinks contribute `q⁻¹` to the
/// bracket and negative kinks `-q²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KinkSign {
    Positive,
    Negative,
}

impl KinkSign {
    pub fn value(self) -> i8 {
        match self {
            KinkSign::Positive => 1,
            KinkSign::Negative => -1,
        }
    }

    /// The smoothing that keeps the diagram connected.
    pub fn connected_smoothing(self) -> Smoothing {
        match self {
            KinkSign::Positive => Smoothing::One,
            KinkSign::Negative => Smoothing::Zero,
        }
    }
}

/// A diagram with some crossings smoothed. Unsmoothed crossings behave as
/// 4-valent vertices.
#[derive(Clone, Debug)]
pub struct SmoothedDiagram<'a> {
    diagram: &'a PlanarDiagram,
    word: ResolutionWord,
}

impl<'a> SmoothedDiagram<'a> {
    pub fn new(diagram: &'a PlanarDiagram, word: ResolutionWord) -> Result<Self, DiagramError> {
        if word.len() != diagram.crossing_count() {
            return Err(DiagramError::WordLength {
                expected: diagram.crossing_count(),
                got: word.len(),
            });
        }
        Ok(SmoothedDiagram { diagram, word })
    }

    pub fn unsmoothed(diagram: &'a PlanarDiagram) -> Self {
        SmoothedDiagram {
            diagram,
            word: ResolutionWord::empty(diagram.crossing_count()),
        }
    }

    pub fn diagram(&self) -> &'a PlanarDiagram {
        self.diagram
    }

    pub fn word(&self) -> &ResolutionWord {
        &self.word
    }

    pub fn into_word(self) -> ResolutionWord {
        self.word
    }

    pub fn smooth(&self, c: usize, s: Smoothing) -> SmoothedDiagram<'a> {
        SmoothedDiagram {
            diagram: self.diagram,
            word: self.word.with(c, s),
        }
    }

    fn union_find(&self) -> (UnionFind<usize>, usize) {
        let mut uf = UnionFind::new(self.diagram.arc_count());
        let mut components = self.diagram.arc_count();
        for (c, q) in self.diagram.crossings().iter().enumerate() {
            let pairs: &[(usize, usize)] = match self.word.get(c) {
                None => &[(0, 1), (0, 2), (0, 3)],
                Some(s) => &s.pairs(),
            };
            for &(a, b) in pairs {
                if uf.union(q[a], q[b]) {
                    components -= 1;
                }
            }
        }
        (uf, components)
    }

    /// Component label of every arc, numbered by smallest arc, and the
    /// component count. Free circles are components of their own.
    pub fn arc_components(&self) -> (Vec<usize>, usize) {
        let (uf, count) = self.union_find();
        let roots = uf.into_labeling();
        let mut relabel = vec![usize::MAX; roots.len()];
        let mut next = 0;
        let labels = roots
            .iter()
            .map(|&r| {
                if relabel[r] == usize::MAX {
                    relabel[r] = next;
                    next += 1;
                }
                relabel[r]
            })
            .collect();
        (labels, count)
    }

    pub fn component_count(&self) -> usize {
        self.union_find().1
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    fn check_unsmoothed(&self, c: usize) -> Result<(), DiagramError> {
        if c >= self.word.len() {
            return Err(DiagramError::NoSuchCrossing(c));
        }
        if self.word.get(c).is_some() {
            return Err(DiagramError::AlreadySmoothed(c));
        }
        Ok(())
    }

    /// Whether exactly one smoothing of `c` disconnects the diagram.
    pub fn is_splitting(&self, c: usize) -> Result<bool, DiagramError> {
        self.check_unsmoothed(c)?;
        if !self.is_connected() {
            return Err(DiagramError::Disconnected);
        }
        let zero = self.smooth(c, Smoothing::Zero).is_connected();
        let one = self.smooth(c, Smoothing::One).is_connected();
        Ok(zero != one)
    }

    /// Positive iff the 0-smoothing of `c` disconnects.
    pub fn kink_sign(&self, c: usize) -> Result<KinkSign, DiagramError> {
        if !self.is_splitting(c)? {
            return Err(DiagramError::NotSplitting(c));
        }
        Ok(if self.smooth(c, Smoothing::Zero).is_connected() {
            KinkSign::Negative
        } else {
            KinkSign::Positive
        })
    }

    /// For a total word, the circles of the state: the arcs of each circle,
    /// circles ordered by their smallest arc.
    pub fn circles(&self) -> Result<Vec<Vec<usize>>, DiagramError> {
        if !self.word.is_total() {
            return Err(DiagramError::PartialWord);
        }
        let (labels, count) = self.arc_components();
        let mut circles = vec![Vec::new(); count];
        for (arc, &l) in labels.iter().enumerate() {
            circles[l].push(arc);
        }
        Ok(circles)
    }

    /// Checks R1-triviality: connected and every unsmoothed crossing splitting.
    pub fn check_r1_trivial(&self) -> Result<(), DiagramError> {
        if !self.is_connected() {
            return Err(DiagramError::Disconnected);
        }
        for c in self.word.unsmoothed() {
            if !self.is_splitting(c)? {
                return Err(DiagramError::NotR1Trivial(c));
            }
        }
        Ok(())
    }

    /// Signs of the kinks of an R1-trivial diagram, in peeling order.
    ///
    /// Kinks are peeled innermost first: a kink whose disconnecting smoothing
    /// cuts off a part with no other crossing. Its sign is read off, it is
    /// replaced by its connected smoothing, and the process repeats.
    pub fn peel_kinks(&self) -> Result<Vec<(usize, KinkSign)>, DiagramError> {
        self.check_r1_trivial()?;
        let mut peeled = Vec::new();
        let mut current = self.clone();
        loop {
            let remaining: Vec<usize> = current.word.unsmoothed().collect();
            if remaining.is_empty() {
                return Ok(peeled);
            }
            let mut next = None;
            for &c in &remaining {
                let sign = current.kink_sign(c)?;
                let cut = current.smooth(c, sign.connected_smoothing().flip());
                let (labels, count) = cut.arc_components();
                let mut occupied = vec![false; count];
                for &other in remaining.iter().filter(|&&o| o != c) {
                    occupied[labels[current.diagram.crossing(other)[0]]] = true;
                }
                if occupied.contains(&false) {
                    next = Some((c, sign));
                    break;
                }
            }
            let (c, sign) = next.ok_or_else(|| DiagramError::Internal("no innermost kink in an R1-trivial diagram".into()))?;
            peeled.push((c, sign));
            current = current.smooth(c, sign.connected_smoothing());
        }
    }

    /// Kink counts `(x, y)` of an R1-trivial diagram: negative, positive.
    pub fn kink_counts(&self) -> Result<(usize, usize), DiagramError> {
        let signs = self.peel_kinks()?;
        let y = signs.iter().filter(|(_, s)| *s == KinkSign::Positive).count();
        Ok((signs.len() - y, y))
    }
}

/// Number of circles in the Kauffman state `word`.
pub fn count_circles(diagram: &PlanarDiagram, word: &ResolutionWord) -> Result<usize, DiagramError> {
    let sd = SmoothedDiagram::new(diagram, word.clone())?;
    if !word.is_total() {
        return Err(DiagramError::PartialWord);
    }
    Ok(sd.component_count())
}

pub fn is_connected(diagram: &PlanarDiagram, word: &ResolutionWord) -> Result<bool, DiagramError> {
    Ok(SmoothedDiagram::new(diagram, word.clone())?.is_connected())
}

pub fn is_splitting(diagram: &PlanarDiagram, word: &ResolutionWord, c: usize) -> Result<bool, DiagramError> {
    SmoothedDiagram::new(diagram, word.clone())?.is_splitting(c)
}

pub fn kink_sign(diagram: &PlanarDiagram, word: &ResolutionWord, c: usize) -> Result<KinkSign, DiagramError> {
    SmoothedDiagram::new(diagram, word.clone())?.kink_sign(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

    /// Independent circle count: follow arcs through the smoothed crossings.
    fn trace_circles(d: &PlanarDiagram, bits: u64) -> usize {
        let n_arcs = d.arc_count();
        let mut partner = vec![Vec::new(); n_arcs];
        for (c, q) in d.crossings().iter().enumerate() {
            let pairs = if bits >> c & 1 == 1 { [(0, 3), (1, 2)] } else { [(0, 1), (2, 3)] };
            for (a, b) in pairs {
                partner[q[a]].push(q[b]);
                partner[q[b]].push(q[a]);
            }
        }
        let mut seen = vec![false; n_arcs];
        let mut circles = 0;
        for start in 0..n_arcs {
            if seen[start] {
                continue;
            }
            circles += 1;
            let mut stack = vec![start];
            while let Some(a) = stack.pop() {
                if !std::mem::replace(&mut seen[a], true) {
                    stack.extend(partner[a].iter().copied());
                }
            }
        }
        circles
    }

    #[test]
    fn trefoil_circle_counts_match_tracing() {
        let d = parse_pd(TREFOIL).unwrap();
        for bits in 0..8 {
            let w = ResolutionWord::from_bits(3, bits);
            assert_eq!(count_circles(&d, &w).unwrap(), trace_circles(&d, bits));
        }
        assert_eq!(trace_circles(&d, 0b000), 3);
        assert_eq!(trace_circles(&d, 0b111), 2);
        assert_eq!(count_circles(&d, &ResolutionWord::from_bits(3, 0)).unwrap(), 3);
        assert_eq!(count_circles(&d, &ResolutionWord::from_bits(3, 7)).unwrap(), 2);
    }

    #[test]
    fn kink_words_give_one_and_two_circles() {
        let d = parse_pd("X(1,2,2,1)").unwrap();
        let mut counts = [0, 1].map(|b| count_circles(&d, &ResolutionWord::from_bits(1, b)).unwrap());
        counts.sort();
        assert_eq!(counts, [1, 2]);
    }

    #[test]
    fn connectivity() {
        let d = parse_pd(TREFOIL).unwrap();
        assert!(is_connected(&d, &ResolutionWord::empty(3)).unwrap());
        let two = parse_pd("X(1,2,2,1) X(3,4,4,3)").unwrap();
        assert!(!is_connected(&two, &ResolutionWord::empty(2)).unwrap());
        assert!(!is_connected(&parse_pd("O(1) O(2)").unwrap(), &ResolutionWord::empty(0)).unwrap());
    }

    #[test]
    fn trefoil_disconnecting_smoothing() {
        // Smooth crossings 2 and 3 into a one-circle pattern; then crossing 1
        // is a kink and one of its smoothings disconnects.
        let d = parse_pd(TREFOIL).unwrap();
        let partial = ResolutionWord::empty(3).with(1, Smoothing::One).with(2, Smoothing::Zero);
        assert!(is_connected(&d, &partial).unwrap());
        let zero = partial.with(0, Smoothing::Zero);
        let one = partial.with(0, Smoothing::One);
        let results = [is_connected(&d, &zero).unwrap(), is_connected(&d, &one).unwrap()];
        assert_eq!(results.iter().filter(|&&b| !b).count(), 1);
        assert_eq!(count_circles(&d, &zero).unwrap() == 1, results[0]);
    }

    #[test]
    fn kink_is_splitting_and_negative() {
        let d = parse_pd("X(1,2,2,1)").unwrap();
        let w = ResolutionWord::empty(1);
        assert!(is_splitting(&d, &w, 0).unwrap());
        assert_eq!(kink_sign(&d, &w, 0).unwrap(), KinkSign::Negative);
        let p = parse_pd("X(1,1,2,2)").unwrap();
        assert_eq!(kink_sign(&p, &w, 0).unwrap(), KinkSign::Positive);
    }

    #[test]
    fn reduced_diagrams_have_no_splitting_crossings() {
        let d = parse_pd(TREFOIL).unwrap();
        for c in 0..3 {
            assert!(!is_splitting(&d, &ResolutionWord::empty(3), c).unwrap());
        }
        let t = parse_pd(TREFOIL).unwrap();
        let sum = t.connected_sum(&t, 1, 1).unwrap();
        for c in 0..6 {
            assert!(!is_splitting(&sum, &ResolutionWord::empty(6), c).unwrap());
        }
    }

    #[test]
    fn splitting_preconditions() {
        let d = parse_pd("X(1,2,2,1)").unwrap();
        let w = ResolutionWord::empty(1).with(0, Smoothing::Zero);
        assert_eq!(is_splitting(&d, &w, 0), Err(DiagramError::AlreadySmoothed(0)));
        assert_eq!(is_splitting(&d, &w, 3), Err(DiagramError::NoSuchCrossing(3)));
        let t = parse_pd(TREFOIL).unwrap();
        assert_eq!(kink_sign(&t, &ResolutionWord::empty(3), 0), Err(DiagramError::NotSplitting(0)));
    }

    #[test]
    fn peeling_matches_direct_signs() {
        // Kinks stacked on kinks: every crossing splitting, nested loops.
        let base = parse_pd("X(1,2,2,1)").unwrap();
        let d = base.add_kink(2, true).unwrap().add_kink(1, true).unwrap().add_kink(3, false).unwrap();
        let sd = SmoothedDiagram::unsmoothed(&d);
        let (x, y) = sd.kink_counts().unwrap();
        let direct: Vec<KinkSign> = (0..d.crossing_count()).map(|c| sd.kink_sign(c).unwrap()).collect();
        assert_eq!(x, direct.iter().filter(|s| **s == KinkSign::Negative).count());
        assert_eq!(y, direct.iter().filter(|s| **s == KinkSign::Positive).count());
        assert_eq!((x, y), (2, 2));
    }
}
