use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ComplexError;

/// Nonzero diagonal entries (absolute values) of a diagonal form of the
/// sparse integer matrix given by its rows. Their product structure, not
/// their order, is what matters: the cokernel is `ℤ^k ⊕ ⨁ ℤ/dᵢ`.
///
/// Pivots are chosen with the smallest absolute value, ties broken by the
/// Markowitz count and then position.
pub fn diagonal_form(rows: Vec<BTreeMap<usize, BigInt>>, ncols: usize) -> Vec<BigInt> {
    let mut m = Sparse::new(rows, ncols);
    let mut diagonal = Vec::new();
    while let Some((r, c)) = m.pivot() {
        let p = m.rows[r][&c].clone();
        // Clear the column with row operations.
        let mut remainder = false;
        let others: Vec<usize> = m.cols[c].iter().copied().filter(|&o| o != r).collect();
        for o in others {
            let q = &m.rows[o][&c] / &p;
            if !q.is_zero() {
                m.add_row_multiple(o, r, &-q);
            }
            if m.rows[o].contains_key(&c) {
                remainder = true;
            }
        }
        if remainder {
            continue;
        }
        // Column c now only meets row r, so column operations on row r
        // leave every other row alone.
        let rest: Vec<(usize, BigInt)> = m.rows[r].iter().filter(|(&k, _)| k != c).map(|(&k, v)| (k, v.clone())).collect();
        for (k, v) in rest {
            let rem = &v % &p;
            m.set(r, k, rem.clone());
            if !rem.is_zero() {
                remainder = true;
            }
        }
        if remainder {
            continue;
        }
        diagonal.push(p.abs());
        m.set(r, c, BigInt::zero());
    }
    diagonal
}

struct Sparse {
    rows: Vec<BTreeMap<usize, BigInt>>,
    cols: Vec<BTreeSet<usize>>,
}

impl Sparse {
    fn new(rows: Vec<BTreeMap<usize, BigInt>>, ncols: usize) -> Self {
        let mut cols = vec![BTreeSet::new(); ncols];
        let rows: Vec<BTreeMap<usize, BigInt>> = rows
            .into_iter()
            .map(|row| row.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        for (r, row) in rows.iter().enumerate() {
            for &c in row.keys() {
                cols[c].insert(r);
            }
        }
        Sparse { rows, cols }
    }

    fn set(&mut self, r: usize, c: usize, v: BigInt) {
        if v.is_zero() {
            self.rows[r].remove(&c);
            self.cols[c].remove(&r);
        } else {
            self.rows[r].insert(c, v);
            self.cols[c].insert(r);
        }
    }

    /// `row[dst] += factor * row[src]`.
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        let src_row: Vec<(usize, BigInt)> = self.rows[src].iter().map(|(&c, v)| (c, v.clone())).collect();
        for (c, v) in src_row {
            let new = self.rows[dst].get(&c).cloned().unwrap_or_default() + factor * v;
            self.set(dst, c, new);
        }
    }

    fn pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(&num_bigint::BigUint, usize, usize, usize)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            for (&c, v) in row {
                let mag = v.magnitude();
                let markowitz = (row.len() - 1) * (self.cols[c].len() - 1);
                let better = match &best {
                    None => true,
                    Some((bm, bk, _, _)) => (mag, markowitz) < (*bm, *bk),
                };
                if better {
                    best = Some((mag, markowitz, r, c));
                    if mag.is_one() && markowitz == 0 {
                        return Some((r, c));
                    }
                }
            }
        }
        best.map(|(_, _, r, c)| (r, c))
    }
}

/// Rank and torsion of a diagonal form: the number of entries and the
/// prime-power orders of the non-unit ones, sorted.
pub fn rank_and_torsion(diagonal: &[BigInt]) -> Result<(usize, Vec<u64>), ComplexError> {
    let mut torsion = Vec::new();
    for d in diagonal {
        if d.is_one() {
            continue;
        }
        let n = d.to_u64().ok_or_else(|| ComplexError::TorsionTooLarge(d.to_string()))?;
        torsion.extend(prime_powers(n));
    }
    torsion.sort_unstable();
    Ok((diagonal.len(), torsion))
}

fn prime_powers(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut q = 1;
            while n % p == 0 {
                n /= p;
                q *= p;
            }
            out.push(q);
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
