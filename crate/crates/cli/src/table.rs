use std::collections::BTreeSet;
use std::fmt::Write;

use khoma::homalg::{BigradedHomology, GradedHomology, HomologyGroup};

/// `2`, `Z2`, `1+Z2^2`; empty for the zero group.
pub fn cell(g: &HomologyGroup, torsion: bool) -> String {
    let mut parts = Vec::new();
    if g.rank > 0 {
        parts.push(g.rank.to_string());
    }
    if torsion {
        let mut orders: Vec<(u64, usize)> = Vec::new();
        for &t in &g.torsion {
            match orders.last_mut() {
                Some((o, n)) if *o == t => *n += 1,
                _ => orders.push((t, 1)),
            }
        }
        for (o, n) in orders {
            parts.push(if n == 1 { format!("Z{o}") } else { format!("Z{o}^{n}") });
        }
    }
    parts.join("+")
}

/// Rows `j` descending, columns `i` ascending.
pub fn bigraded(h: &BigradedHomology, torsion: bool) -> String {
    let cells: Vec<((i32, i32), String)> = h
        .iter()
        .map(|(&k, g)| (k, cell(g, torsion)))
        .filter(|(_, s)| !s.is_empty())
        .collect();
    if cells.is_empty() {
        return "0\n".into();
    }
    let is: BTreeSet<i32> = cells.iter().map(|((i, _), _)| *i).collect();
    let js: BTreeSet<i32> = cells.iter().map(|((_, j), _)| *j).collect();
    let (imin, imax) = (*is.first().unwrap(), *is.last().unwrap());
    let columns: Vec<i32> = (imin..=imax).collect();
    let width = cells.iter().map(|(_, s)| s.len()).chain(columns.iter().map(|i| i.to_string().len())).max().unwrap_or(1);
    let label = js.iter().map(|j| j.to_string().len()).max().unwrap_or(1).max(3);
    let mut out = String::new();
    let _ = write!(out, "{:>label$} |", "j\\i");
    for i in &columns {
        let _ = write!(out, " {i:>width$}");
    }
    out.push('\n');
    let _ = writeln!(out, "{}-+{}", "-".repeat(label), "-".repeat(columns.len() * (width + 1)));
    for &j in js.iter().rev() {
        let _ = write!(out, "{j:>label$} |");
        for &i in &columns {
            let s = cells.iter().find(|(k, _)| *k == (i, j)).map(|(_, s)| s.as_str()).unwrap_or(".");
            let _ = write!(out, " {s:>width$}");
        }
        out.push('\n');
    }
    out
}

pub fn graded(h: &GradedHomology, torsion: bool) -> String {
    let mut out = String::new();
    for (i, g) in h.iter() {
        let s = cell(g, torsion);
        if !s.is_empty() {
            let _ = writeln!(out, "i = {i:>3}: {s}");
        }
    }
    if out.is_empty() {
        out.push_str("0\n");
    }
    out
}
