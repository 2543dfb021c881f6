use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::ComplexError;
use crate::laurent::LaurentPolynomial;

use super::complex::{BasedComplex, Homogeneity};
use super::snf::{diagonal_form, rank_and_torsion};

/// A finitely generated abelian group `ℤ^rank ⊕ ⨁ ℤ/t`, torsion given as
/// sorted prime-power orders.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

/// Homology indexed by `(i, j)`. Zero groups are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BigradedHomology {
    groups: BTreeMap<(i32, i32), HomologyGroup>,
}

impl BigradedHomology {
    pub fn from_groups(groups: impl IntoIterator<Item = ((i32, i32), HomologyGroup)>) -> Self {
        BigradedHomology {
            groups: groups.into_iter().filter(|(_, g)| !g.is_zero()).collect(),
        }
    }

    pub fn get(&self, i: i32, j: i32) -> HomologyGroup {
        self.groups.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn rank(&self, i: i32, j: i32) -> usize {
        self.groups.get(&(i, j)).map_or(0, |g| g.rank)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(i32, i32), &HomologyGroup)> {
        self.groups.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn total_rank(&self) -> usize {
        self.groups.values().map(|g| g.rank).sum()
    }

    /// Free ranks per bidegree.
    pub fn ranks(&self) -> BTreeMap<(i32, i32), usize> {
        self.groups.iter().filter(|(_, g)| g.rank > 0).map(|(&k, g)| (k, g.rank)).collect()
    }

    /// Torsion orders per bidegree.
    pub fn torsion(&self) -> BTreeMap<(i32, i32), Vec<u64>> {
        self.groups
            .iter()
            .filter(|(_, g)| !g.torsion.is_empty())
            .map(|(&k, g)| (k, g.torsion.clone()))
            .collect()
    }

    /// `H[m]{n}`: moves `(i, j)` to `(i + m, j + n)`.
    pub fn shift(&self, m: i32, n: i32) -> Self {
        BigradedHomology {
            groups: self.groups.iter().map(|(&(i, j), g)| ((i + m, j + n), g.clone())).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut groups = self.groups.clone();
        for (k, g) in &other.groups {
            let e = groups.entry(*k).or_default();
            e.rank += g.rank;
            e.torsion.extend(&g.torsion);
            e.torsion.sort_unstable();
        }
        BigradedHomology { groups }
    }

    /// `Σ (-1)^i q^j rank`.
    pub fn euler_characteristic(&self) -> LaurentPolynomial {
        self.ranks()
            .into_iter()
            .map(|((i, j), r)| LaurentPolynomial::monomial(if i % 2 == 0 { r as i64 } else { -(r as i64) }, j as i64))
            .sum()
    }

    /// Primary degrees with a nonzero group.
    pub fn primary_support(&self) -> std::collections::BTreeSet<i32> {
        self.groups.keys().map(|&(i, _)| i).collect()
    }
}

impl Serialize for BigradedHomology {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_bidegree_map(&self.groups, s)
    }
}

/// Writes a map keyed by bidegree as a JSON object with `"(i,j)"` keys.
pub fn serialize_bidegree_map<K: std::fmt::Display, V: Serialize, S: Serializer>(
    m: &BTreeMap<(K, K), V>,
    s: S,
) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(m.len()))?;
    for ((i, j), v) in m {
        map.serialize_entry(&format!("({i},{j})"), v)?;
    }
    map.end()
}

/// Homology indexed by the primary degree only.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedHomology {
    groups: BTreeMap<i32, HomologyGroup>,
}

impl GradedHomology {
    pub fn get(&self, i: i32) -> HomologyGroup {
        self.groups.get(&i).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i32, &HomologyGroup)> {
        self.groups.iter()
    }

    pub fn total_rank(&self) -> usize {
        self.groups.values().map(|g| g.rank).sum()
    }
}

impl Serialize for GradedHomology {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.groups.len()))?;
        for (i, g) in &self.groups {
            map.serialize_entry(&i.to_string(), g)?;
        }
        map.end()
    }
}

/// Homology over ℤ of the pieces selected by `key`, which must be preserved
/// by the differential apart from the primary degree.
fn homology_by<K: Ord + Copy>(c: &BasedComplex, key: impl Fn(i32, i32) -> K, next: impl Fn(K) -> K) -> Result<BTreeMap<K, HomologyGroup>, ComplexError> {
    c.check_d_squared()?;
    let mut blocks: BTreeMap<K, Vec<usize>> = BTreeMap::new();
    for (p, g) in c.generators().iter().enumerate() {
        blocks.entry(key(g.i, g.j)).or_default().push(p);
    }
    let mut local = vec![0; c.len()];
    for members in blocks.values() {
        for (k, &p) in members.iter().enumerate() {
            local[p] = k;
        }
    }
    let mut out_rank: BTreeMap<K, usize> = BTreeMap::new();
    let mut torsion: BTreeMap<K, Vec<u64>> = BTreeMap::new();
    for (&k, members) in &blocks {
        let target = next(k);
        let ncols = blocks.get(&target).map_or(0, Vec::len);
        let rows: Vec<BTreeMap<usize, BigInt>> = members
            .iter()
            .map(|&p| c.rows()[p].iter().map(|(&t, v)| (local[t], v.clone())).collect())
            .collect();
        let (rank, tors) = rank_and_torsion(&diagonal_form(rows, ncols))?;
        out_rank.insert(k, rank);
        if !tors.is_empty() {
            torsion.insert(target, tors);
        }
    }
    let mut incoming: BTreeMap<K, usize> = BTreeMap::new();
    for (&k, &r) in &out_rank {
        incoming.insert(next(k), r);
    }
    let mut groups = BTreeMap::new();
    for (&k, members) in &blocks {
        let rank = members.len() - out_rank[&k] - incoming.get(&k).copied().unwrap_or(0);
        let g = HomologyGroup {
            rank,
            torsion: torsion.remove(&k).unwrap_or_default(),
        };
        if !g.is_zero() {
            groups.insert(k, g);
        }
    }
    Ok(groups)
}

/// Integral homology per bidegree of a j-preserving complex.
pub fn homology_z(c: &BasedComplex) -> Result<BigradedHomology, ComplexError> {
    if c.homogeneity() != Homogeneity::Graded {
        return Err(ComplexError::NotHomogeneous);
    }
    Ok(BigradedHomology {
        groups: homology_by(c, |i, j| (i, j), |(i, j)| (i + 1, j))?,
    })
}

/// Integral homology per primary degree, ignoring `j`.
pub fn homology_z_primary(c: &BasedComplex) -> Result<GradedHomology, ComplexError> {
    Ok(GradedHomology {
        groups: homology_by(c, |i, _| i, |i| i + 1)?,
    })
}

/// Vectors in echelon form over ℚ, each keyed by its first nonzero index.
#[derive(Default)]
struct Echelon {
    rows: BTreeMap<usize, BTreeMap<usize, BigRational>>,
}

impl Echelon {
    /// Adds `v` to the span; returns its new lead if it was independent.
    fn insert(&mut self, mut v: BTreeMap<usize, BigRational>) -> Option<usize> {
        while let Some((&lead, coeff)) = v.iter().next() {
            let Some(row) = self.rows.get(&lead) else {
                self.rows.insert(lead, v);
                return Some(lead);
            };
            let factor = coeff / &row[&lead];
            for (&k, x) in row {
                let e = v.entry(k).or_insert_with(BigRational::zero);
                *e -= &factor * x;
                if e.is_zero() {
                    v.remove(&k);
                }
            }
        }
        None
    }
}

/// Associated graded of rational homology under the filtration by `j`.
///
/// For each `i`, `F^j H` is spanned by classes with a representative whose
/// generators all have degree at least `j`; the result at `(i, j)` is the
/// dimension of `F^j H / F^(j') H` with `j'` the next filtration level.
pub fn filtered_homology_q(c: &BasedComplex) -> Result<BigradedHomology, ComplexError> {
    c.check_d_squared()?;
    // Filtered covers Graded as well; both differentials never lower j.
    let mut by_degree: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (p, g) in c.generators().iter().enumerate() {
        by_degree.entry(g.i).or_default().push(p);
    }
    let gens = c.generators();
    for members in by_degree.values_mut() {
        members.sort_by_key(|&p| (gens[p].j, gens[p].id));
    }
    let mut local: HashMap<usize, usize> = HashMap::new();
    for members in by_degree.values() {
        for (k, &p) in members.iter().enumerate() {
            local.insert(p, k);
        }
    }
    let to_vec = |p: usize| -> BTreeMap<usize, BigRational> {
        c.rows()[p]
            .iter()
            .map(|(t, v)| (local[t], BigRational::from_integer(v.clone())))
            .collect()
    };

    let mut groups = BTreeMap::new();
    for (&i, members) in &by_degree {
        let js: Vec<i32> = members.iter().map(|&p| gens[p].j).collect();
        // Boundaries: leads of an echelon basis of im d_{i-1}.
        let mut boundaries = Echelon::default();
        let mut boundary_leads = Vec::new();
        if let Some(prev) = by_degree.get(&(i - 1)) {
            for &p in prev {
                if let Some(lead) = boundaries.insert(to_vec(p)) {
                    boundary_leads.push(js[lead]);
                }
            }
        }
        // Cycles: dim(Z ∩ F^j) = #gens(≥ j) - rank(d on gens ≥ j).
        let mut images = Echelon::default();
        let mut rank_from: BTreeMap<i32, usize> = BTreeMap::new();
        let mut rank = 0;
        let mut count_from: BTreeMap<i32, usize> = BTreeMap::new();
        for (k, &p) in members.iter().enumerate().rev() {
            if images.insert(to_vec(p)).is_some() {
                rank += 1;
            }
            rank_from.insert(js[k], rank);
            count_from.insert(js[k], members.len() - k);
        }
        let levels: Vec<i32> = rank_from.keys().copied().collect();
        let filtered_dim = |j: i32| -> usize {
            let cycles = count_from[&j] - rank_from[&j];
            cycles - boundary_leads.iter().filter(|&&b| b >= j).count()
        };
        for (n, &j) in levels.iter().enumerate() {
            let above = levels.get(n + 1).map_or(0, |&next| filtered_dim(next));
            let dim = filtered_dim(j) - above;
            if dim > 0 {
                groups.insert((i, j), HomologyGroup { rank: dim, torsion: vec![] });
            }
        }
    }
    Ok(BigradedHomology { groups })
}
