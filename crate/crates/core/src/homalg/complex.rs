use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::ComplexError;
use crate::laurent::LaurentPolynomial;

/// A basis element with primary degree `i` and secondary degree `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Generator {
    pub id: usize,
    pub i: i32,
    pub j: i32,
}

/// How the differential may move the secondary degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Homogeneity {
    /// Every entry preserves `j`.
    Graded,
    /// Entries never decrease `j`; the complex is filtered by `j`.
    Filtered,
}

impl Homogeneity {
    fn allows(self, dj: i32) -> bool {
        match self {
            Homogeneity::Graded => dj == 0,
            Homogeneity::Filtered => dj >= 0,
        }
    }
}

/// A free chain complex over ℤ with a distinguished basis and a sparse
/// differential of primary degree +1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedComplex {
    generators: Vec<Generator>,
    position: HashMap<usize, usize>,
    /// Outgoing entries by source position, keyed by target position.
    d: Vec<BTreeMap<usize, BigInt>>,
    homogeneity: Homogeneity,
}

impl BasedComplex {
    /// Builds a complex from generators and `(source id, target id, value)`
    /// entries; repeated entries are summed. Checks degrees and `d² = 0`.
    pub fn new(
        generators: Vec<Generator>,
        entries: impl IntoIterator<Item = (usize, usize, BigInt)>,
        homogeneity: Homogeneity,
    ) -> Result<Self, ComplexError> {
        let mut position = HashMap::with_capacity(generators.len());
        for (p, g) in generators.iter().enumerate() {
            if position.insert(g.id, p).is_some() {
                return Err(ComplexError::DuplicateGenerator(g.id));
            }
        }
        let mut d = vec![BTreeMap::new(); generators.len()];
        for (src, tgt, value) in entries {
            let s = *position.get(&src).ok_or(ComplexError::UnknownGenerator(src))?;
            let t = *position.get(&tgt).ok_or(ComplexError::UnknownGenerator(tgt))?;
            let row: &mut BTreeMap<usize, BigInt> = &mut d[s];
            *row.entry(t).or_default() += value;
            if row[&t].is_zero() {
                row.remove(&t);
            }
        }
        let complex = BasedComplex {
            generators,
            position,
            d,
            homogeneity,
        };
        complex.check_degrees()?;
        complex.check_d_squared()?;
        Ok(complex)
    }

    pub(crate) fn from_parts_unchecked(
        generators: Vec<Generator>,
        d: Vec<BTreeMap<usize, BigInt>>,
        homogeneity: Homogeneity,
    ) -> Self {
        let position = generators.iter().enumerate().map(|(p, g)| (g.id, p)).collect();
        BasedComplex {
            generators,
            position,
            d,
            homogeneity,
        }
    }

    fn check_degrees(&self) -> Result<(), ComplexError> {
        for (s, row) in self.d.iter().enumerate() {
            let gs = self.generators[s];
            for &t in row.keys() {
                let gt = self.generators[t];
                if gt.i - gs.i != 1 {
                    return Err(ComplexError::PrimaryDegree {
                        src: gs.id,
                        tgt: gt.id,
                        delta: gt.i - gs.i,
                    });
                }
                if !self.homogeneity.allows(gt.j - gs.j) {
                    return Err(ComplexError::SecondaryDegree {
                        src: gs.id,
                        tgt: gt.id,
                        delta: gt.j - gs.j,
                    });
                }
            }
        }
        Ok(())
    }

    /// Fails with the number of nonzero entries of `d∘d` if it is not zero.
    pub fn check_d_squared(&self) -> Result<(), ComplexError> {
        let mut bad = 0;
        for row in &self.d {
            let mut square: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (&t, a) in row {
                for (&u, b) in &self.d[t] {
                    *square.entry(u).or_default() += a * b;
                }
            }
            bad += square.values().filter(|v| !v.is_zero()).count();
        }
        if bad == 0 {
            Ok(())
        } else {
            Err(ComplexError::NotAComplex(bad))
        }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, id: usize) -> Option<Generator> {
        self.position.get(&id).map(|&p| self.generators[p])
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn homogeneity(&self) -> Homogeneity {
        self.homogeneity
    }

    /// All nonzero entries as `(source id, target id, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.d.iter().enumerate().flat_map(move |(s, row)| {
            row.iter().map(move |(&t, v)| (self.generators[s].id, self.generators[t].id, v))
        })
    }

    pub fn entry(&self, src: usize, tgt: usize) -> BigInt {
        match (self.position.get(&src), self.position.get(&tgt)) {
            (Some(&s), Some(&t)) => self.d[s].get(&t).cloned().unwrap_or_default(),
            _ => BigInt::zero(),
        }
    }

    pub fn entry_count(&self) -> usize {
        self.d.iter().map(BTreeMap::len).sum()
    }

    pub(crate) fn rows(&self) -> &[BTreeMap<usize, BigInt>] {
        &self.d
    }

    pub(crate) fn position(&self, id: usize) -> Option<usize> {
        self.position.get(&id).copied()
    }

    /// Relabels every generator `(i, j) -> (i + m, j + n)`.
    pub fn shift(&self, m: i32, n: i32) -> BasedComplex {
        let mut out = self.clone();
        for g in &mut out.generators {
            g.i += m;
            g.j += n;
        }
        out
    }

    /// The same complex with its filtration forgotten or declared.
    pub fn with_homogeneity(&self, homogeneity: Homogeneity) -> Result<BasedComplex, ComplexError> {
        let out = BasedComplex {
            homogeneity,
            ..self.clone()
        };
        out.check_degrees()?;
        Ok(out)
    }

    /// Generator counts per bidegree.
    pub fn generator_table(&self) -> BTreeMap<(i32, i32), usize> {
        let mut table = BTreeMap::new();
        for g in &self.generators {
            *table.entry((g.i, g.j)).or_default() += 1;
        }
        table
    }

    /// `Σ (-1)^i q^j` over the generators.
    pub fn euler_characteristic(&self) -> LaurentPolynomial {
        self.generator_table()
            .into_iter()
            .map(|((i, j), n)| LaurentPolynomial::monomial(if i % 2 == 0 { n as i64 } else { -(n as i64) }, j as i64))
            .sum()
    }

    fn max_id(&self) -> Option<usize> {
        self.generators.iter().map(|g| g.id).max()
    }

    /// Whether some entry is a unit.
    pub fn has_unit_entry(&self) -> bool {
        self.d.iter().flat_map(BTreeMap::values).any(|v| v.abs().is_one())
    }
}

/// A degree-preserving map `C₀ → C₁` given by `(source id, target id, value)`.
#[derive(Clone, Debug)]
pub struct ChainMap<'a> {
    pub source: &'a BasedComplex,
    pub target: &'a BasedComplex,
    pub entries: Vec<(usize, usize, BigInt)>,
}

impl ChainMap<'_> {
    fn matrix(&self) -> Result<Vec<BTreeMap<usize, BigInt>>, ComplexError> {
        let mut rows = vec![BTreeMap::<usize, BigInt>::new(); self.source.len()];
        for (src, tgt, v) in &self.entries {
            let s = self.source.position(*src).ok_or(ComplexError::UnknownGenerator(*src))?;
            let t = self.target.position(*tgt).ok_or(ComplexError::UnknownGenerator(*tgt))?;
            let (gs, gt) = (self.source.generators[s], self.target.generators[t]);
            if gs.i != gt.i {
                return Err(ComplexError::PrimaryDegree {
                    src: *src,
                    tgt: *tgt,
                    delta: gt.i - gs.i,
                });
            }
            if !self.source.homogeneity.allows(gt.j - gs.j) {
                return Err(ComplexError::SecondaryDegree {
                    src: *src,
                    tgt: *tgt,
                    delta: gt.j - gs.j,
                });
            }
            *rows[s].entry(t).or_default() += v;
        }
        Ok(rows)
    }

    /// Checks `w∘d₀ = d₁∘w`.
    pub fn check(&self) -> Result<(), ComplexError> {
        let w = self.matrix()?;
        let mut bad = 0;
        for (s, row) in self.source.d.iter().enumerate() {
            let mut diff: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (&t, a) in row {
                for (&u, b) in &w[t] {
                    *diff.entry(u).or_default() += a * b;
                }
            }
            for (&t, a) in &w[s] {
                for (&u, b) in &self.target.d[t] {
                    *diff.entry(u).or_default() -= a * b;
                }
            }
            bad += diff.values().filter(|v| !v.is_zero()).count();
        }
        if bad == 0 {
            Ok(())
        } else {
            Err(ComplexError::NotAChainMap(bad))
        }
    }
}

/// `C₀ ⊕ C₁[1]` with differential `d₀ + w` on `C₀` and `-d₁` on `C₁[1]`.
///
/// Generators of `C₁` get their ids offset past the largest id of `C₀`;
/// the offset is returned alongside the cone.
pub fn mapping_cone(w: &ChainMap<'_>) -> Result<(BasedComplex, usize), ComplexError> {
    w.check()?;
    let offset = w.source.max_id().map_or(0, |m| m + 1);
    let mut generators = w.source.generators.clone();
    generators.extend(w.target.generators.iter().map(|g| Generator {
        id: g.id + offset,
        i: g.i + 1,
        j: g.j,
    }));
    let mut entries: Vec<(usize, usize, BigInt)> = w.source.entries().map(|(s, t, v)| (s, t, v.clone())).collect();
    entries.extend(w.entries.iter().map(|(s, t, v)| (*s, t + offset, v.clone())));
    entries.extend(w.target.entries().map(|(s, t, v)| (s + offset, t + offset, -v)));
    let homogeneity = match (w.source.homogeneity, w.target.homogeneity) {
        (Homogeneity::Graded, Homogeneity::Graded) => Homogeneity::Graded,
        _ => Homogeneity::Filtered,
    };
    Ok((BasedComplex::new(generators, entries, homogeneity)?, offset))
}

/// Mutable state for a sequence of Gaussian eliminations.
struct Workspace {
    generators: Vec<Generator>,
    alive: Vec<bool>,
    out: Vec<BTreeMap<usize, BigInt>>,
    inc: Vec<BTreeMap<usize, BigInt>>,
    homogeneity: Homogeneity,
}

impl Workspace {
    fn new(c: &BasedComplex) -> Self {
        let mut inc = vec![BTreeMap::new(); c.len()];
        for (s, row) in c.d.iter().enumerate() {
            for (&t, v) in row {
                inc[t].insert(s, v.clone());
            }
        }
        Workspace {
            generators: c.generators.clone(),
            alive: vec![true; c.len()],
            out: c.d.clone(),
            inc,
            homogeneity: c.homogeneity,
        }
    }

    /// Cancels the unit entry `s -> t`. Returns the sources whose outgoing
    /// entries changed.
    fn eliminate(&mut self, s: usize, t: usize) -> Result<Vec<usize>, ComplexError> {
        let (gs, gt) = (self.generators[s], self.generators[t]);
        let phi = self.out[s].get(&t).cloned().unwrap_or_default();
        if !phi.abs().is_one() {
            return Err(ComplexError::NotUnit {
                src: gs.id,
                tgt: gt.id,
                value: phi.to_string(),
            });
        }
        if self.homogeneity == Homogeneity::Filtered && gs.j != gt.j {
            return Err(ComplexError::FiltrationViolation {
                src: gs.id,
                tgt: gt.id,
                jsrc: gs.j,
                jtgt: gt.j,
            });
        }
        let alphas: Vec<(usize, BigInt)> = self.inc[t].iter().filter(|(&u, _)| u != s).map(|(&u, a)| (u, a.clone())).collect();
        let betas: Vec<(usize, BigInt)> = self.out[s].iter().filter(|(&v, _)| v != t).map(|(&v, b)| (v, b.clone())).collect();
        for (u, alpha) in &alphas {
            let factor = alpha * &phi;
            for (v, beta) in &betas {
                let delta = -(&factor * beta);
                let entry = self.out[*u].entry(*v).or_default();
                *entry += &delta;
                if entry.is_zero() {
                    self.out[*u].remove(v);
                    self.inc[*v].remove(u);
                } else {
                    self.inc[*v].insert(*u, entry.clone());
                }
            }
        }
        for x in [s, t] {
            for v in std::mem::take(&mut self.out[x]).into_keys() {
                self.inc[v].remove(&x);
            }
            for u in std::mem::take(&mut self.inc[x]).into_keys() {
                self.out[u].remove(&x);
            }
            self.alive[x] = false;
        }
        Ok(alphas.into_iter().map(|(u, _)| u).collect())
    }

    fn finish(self) -> BasedComplex {
        let mut new_pos = vec![usize::MAX; self.generators.len()];
        let mut generators = Vec::new();
        for (p, g) in self.generators.iter().enumerate() {
            if self.alive[p] {
                new_pos[p] = generators.len();
                generators.push(*g);
            }
        }
        let d = self
            .out
            .into_iter()
            .enumerate()
            .filter(|(p, _)| self.alive[*p])
            .map(|(_, row)| row.into_iter().map(|(t, v)| (new_pos[t], v)).collect())
            .collect();
        BasedComplex::from_parts_unchecked(generators, d, self.homogeneity)
    }
}

/// Cancels the unit entry `src -> tgt`, splitting off a contractible summand.
pub fn gaussian_eliminate(c: &BasedComplex, src: usize, tgt: usize) -> Result<BasedComplex, ComplexError> {
    let s = c.position(src).ok_or(ComplexError::UnknownGenerator(src))?;
    let t = c.position(tgt).ok_or(ComplexError::UnknownGenerator(tgt))?;
    let mut ws = Workspace::new(c);
    ws.eliminate(s, t)?;
    Ok(ws.finish())
}

#[derive(Clone, Debug)]
pub enum ReductionStrategy {
    /// Cancel unit entries until none is left, lowest `(i, j, id)` source
    /// first.
    Full,
    /// Only cancel entries whose ends lie in the same block. Generators
    /// missing from the map form singleton blocks.
    Blocks(HashMap<usize, usize>),
}

/// Repeated Gaussian elimination. In a filtered complex only entries that
/// preserve `j` are cancelled.
pub fn reduce(c: &BasedComplex, strategy: &ReductionStrategy) -> BasedComplex {
    let mut ws = Workspace::new(c);
    let block = |p: usize| match strategy {
        ReductionStrategy::Full => Some(0),
        ReductionStrategy::Blocks(map) => map.get(&ws_id(c, p)).copied(),
    };
    let mut queue: BTreeSet<(i32, i32, usize, usize)> = c
        .generators
        .iter()
        .enumerate()
        .map(|(p, g)| (g.i, g.j, g.id, p))
        .collect();
    while let Some((_, _, _, s)) = queue.pop_first() {
        if !ws.alive[s] {
            continue;
        }
        let gs = ws.generators[s];
        let bs = block(s);
        let pivot = ws.out[s]
            .iter()
            .filter(|(&t, v)| {
                let gt = ws.generators[t];
                v.abs().is_one() && gt.j == gs.j && bs.is_some() && block(t) == bs
            })
            .map(|(&t, _)| (ws.generators[t].id, t))
            .min();
        if let Some((_, t)) = pivot {
            let changed = ws.eliminate(s, t).expect("pivot is a j-preserving unit");
            for u in changed {
                let g = ws.generators[u];
                queue.insert((g.i, g.j, g.id, u));
            }
        }
    }
    ws.finish()
}

fn ws_id(c: &BasedComplex, p: usize) -> usize {
    c.generators[p].id
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(id: usize, i: i32, j: i32) -> Generator {
        Generator { id, i, j }
    }

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn rejects_bad_complexes() {
        assert_eq!(
            BasedComplex::new(vec![g(0, 0, 0), g(1, 2, 0)], [(0, 1, b(1))], Homogeneity::Graded).unwrap_err(),
            ComplexError::PrimaryDegree { src: 0, tgt: 1, delta: 2 }
        );
        assert!(matches!(
            BasedComplex::new(vec![g(0, 0, 0), g(1, 1, 2)], [(0, 1, b(1))], Homogeneity::Graded),
            Err(ComplexError::SecondaryDegree { .. })
        ));
        assert!(BasedComplex::new(vec![g(0, 0, 0), g(1, 1, 2)], [(0, 1, b(1))], Homogeneity::Filtered).is_ok());
        assert!(matches!(
            BasedComplex::new(vec![g(0, 0, 0), g(1, 1, -2)], [(0, 1, b(1))], Homogeneity::Filtered),
            Err(ComplexError::SecondaryDegree { .. })
        ));
        assert_eq!(
            BasedComplex::new(vec![g(0, 0, 0), g(1, 1, 0), g(2, 2, 0)], [(0, 1, b(1)), (1, 2, b(1))], Homogeneity::Graded)
                .unwrap_err(),
            ComplexError::NotAComplex(1)
        );
        assert_eq!(
            BasedComplex::new(vec![g(0, 0, 0), g(0, 1, 0)], [], Homogeneity::Graded).unwrap_err(),
            ComplexError::DuplicateGenerator(0)
        );
    }

    #[test]
    fn shifts() {
        let c = BasedComplex::new(vec![g(0, 0, 1), g(1, 1, 1)], [(0, 1, b(3))], Homogeneity::Graded).unwrap();
        assert_eq!(c.shift(0, 0), c);
        assert_eq!(c.shift(1, 2).generator(0), Some(g(0, 1, 3)));
        assert_eq!(c.shift(4, -3).shift(-4, 3), c);
    }

    #[test]
    fn eliminating_the_only_unit_leaves_nothing() {
        let c = BasedComplex::new(vec![g(0, 0, 0), g(1, 1, 0)], [(0, 1, b(-1))], Homogeneity::Graded).unwrap();
        assert!(gaussian_eliminate(&c, 0, 1).unwrap().is_empty());
        assert!(reduce(&c, &ReductionStrategy::Full).is_empty());
        let two = BasedComplex::new(vec![g(0, 0, 0), g(1, 1, 0)], [(0, 1, b(2))], Homogeneity::Graded).unwrap();
        assert!(matches!(gaussian_eliminate(&two, 0, 1), Err(ComplexError::NotUnit { .. })));
        assert_eq!(reduce(&two, &ReductionStrategy::Full), two);
    }

    #[test]
    fn elimination_adds_the_correction_term() {
        // u -> t (α = 2), s -> t (φ = 1), s -> v (β = 3): u -> v gains -6.
        let c = BasedComplex::new(
            vec![g(0, 0, 0), g(1, 0, 0), g(2, 1, 0), g(3, 1, 0)],
            [(1, 2, b(2)), (0, 2, b(1)), (0, 3, b(3)), (1, 3, b(6))],
            Homogeneity::Graded,
        )
        .unwrap();
        let r = gaussian_eliminate(&c, 0, 2).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.entry(1, 3), b(0));
        let r = gaussian_eliminate(&c, 0, 3).unwrap_err();
        assert!(matches!(r, ComplexError::NotUnit { .. }));
    }

    #[test]
    fn filtered_elimination_needs_equal_j() {
        let c = BasedComplex::new(vec![g(0, 0, 0), g(1, 1, 4)], [(0, 1, b(1))], Homogeneity::Filtered).unwrap();
        assert!(matches!(gaussian_eliminate(&c, 0, 1), Err(ComplexError::FiltrationViolation { .. })));
        assert_eq!(reduce(&c, &ReductionStrategy::Full), c);
    }

    #[test]
    fn cones() {
        let one = BasedComplex::new(vec![g(0, 0, 0)], [], Homogeneity::Graded).unwrap();
        let id = ChainMap {
            source: &one,
            target: &one,
            entries: vec![(0, 0, b(1))],
        };
        let (cone, offset) = mapping_cone(&id).unwrap();
        assert_eq!(offset, 1);
        assert_eq!(cone.generators(), &[g(0, 0, 0), g(1, 1, 0)]);
        assert!(reduce(&cone, &ReductionStrategy::Full).is_empty());

        let c = BasedComplex::new(vec![g(0, 0, 0), g(1, 1, 0)], [(0, 1, b(2))], Homogeneity::Graded).unwrap();
        let zero = ChainMap {
            source: &c,
            target: &c,
            entries: vec![],
        };
        let (sum, offset) = mapping_cone(&zero).unwrap();
        assert_eq!(offset, 2);
        assert_eq!(sum.entry(2, 3), b(-2));
        assert_eq!(sum.generator(3), Some(g(3, 2, 0)));

        let bad = ChainMap {
            source: &c,
            target: &c,
            entries: vec![(0, 0, b(1))],
        };
        assert!(matches!(mapping_cone(&bad), Err(ComplexError::NotAChainMap(_))));
    }

    #[test]
    fn euler_characteristic() {
        let c = BasedComplex::new(vec![g(0, 0, 1), g(1, 1, 1), g(2, 1, 3)], [], Homogeneity::Graded).unwrap();
        assert_eq!(c.euler_characteristic(), LaurentPolynomial::from_terms([(1, 0), (3, -1)]));
    }
}
