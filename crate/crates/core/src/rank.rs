//! Cutset-edge incidence matrices and exact rank certificates.
//!
//! Rows are terminal bipartitions, columns are edges; entry (i, e) is 1 iff
//! edge e crosses the canonical minimum cut of bipartition i. Rank is
//! computed over the rationals by fraction-free (division-free integer)
//! Gaussian elimination; a mod-2 rank is reported alongside for diagnostics.

use num::bigint::BigInt;
use num::{One, Zero};

use crate::error::{GraphError, Result};
use crate::graph::{Bipartition, TerminalGraph};
use crate::profile::CutProfile;

/// Which profile rows enter the matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowMode {
    /// Every canonical bipartition. With `strict`, any row whose minimum
    /// cut is not unique is an error instead of a warning.
    All { strict: bool },
    /// Drop rows with non-unique minimum cuts (they are listed as warnings).
    UniqueOnly,
    /// Keep only rows whose side S contains the first terminal and not the
    /// second. For planar instances with terminal order (f_n, f_s, f_1, ...)
    /// these are exactly the important bipartitions.
    ImportantOnly,
}

#[derive(Clone, Debug)]
pub struct IncidenceRow {
    pub bipartition: Bipartition,
    pub unique: bool,
}

#[derive(Clone, Debug)]
pub struct IncidenceMatrix {
    pub rows: Vec<IncidenceRow>,
    pub cols: usize,
    /// Row-major 0/1 entries.
    pub data: Vec<Vec<u8>>,
    /// Bipartition indices dropped for non-uniqueness (unique-only mode).
    pub dropped_non_unique: Vec<usize>,
}

impl IncidenceMatrix {
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Plain-text dump: header line "rows cols", then one 0/1 line per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.row_count(), self.cols);
        for row in &self.data {
            for &x in row {
                out.push(if x == 0 { '0' } else { '1' });
            }
            out.push('\n');
        }
        out
    }
}

/// Build the cutset-edge incidence matrix from a computed profile.
pub fn build_incidence_matrix(
    g: &TerminalGraph,
    profile: &CutProfile,
    mode: RowMode,
) -> Result<IncidenceMatrix> {
    if profile.len() != (1usize << (g.terminal_count() - 1)) - 1 {
        return Err(GraphError::ProfileMismatch(format!(
            "profile has {} rows for k = {}",
            profile.len(),
            g.terminal_count()
        )));
    }
    if let RowMode::All { strict: true } = mode {
        let bad = profile.non_unique_rows();
        if !bad.is_empty() {
            return Err(GraphError::NonUniqueRows(bad));
        }
    }
    let mut rows = Vec::new();
    let mut data = Vec::new();
    let mut dropped = Vec::new();
    for (i, cut) in profile.cuts.iter().enumerate() {
        let b = profile.bipartitions[i];
        let keep = match mode {
            RowMode::All { .. } => true,
            RowMode::UniqueOnly => {
                if !cut.unique {
                    dropped.push(i);
                }
                cut.unique
            }
            // first terminal is always in S; second must not be
            RowMode::ImportantOnly => !b.contains(1),
        };
        if !keep {
            continue;
        }
        let mut row = vec![0u8; g.edge_count()];
        for &e in &cut.crossing_edges {
            row[e] = 1;
        }
        rows.push(IncidenceRow { bipartition: b, unique: cut.unique });
        data.push(row);
    }
    Ok(IncidenceMatrix { rows, cols: g.edge_count(), data, dropped_non_unique: dropped })
}

/// Rank over the rational field by Bareiss fraction-free elimination.
pub fn exact_rank(m: &IncidenceMatrix) -> usize {
    let data: Vec<Vec<BigInt>> = m
        .data
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    bareiss_rank(data)
}

/// Bareiss elimination on an integer matrix; exact, division-free up to the
/// known-exact divisions by the previous pivot.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut rank = 0;
    let mut prev_pivot = BigInt::one();
    let mut col = 0;
    while rank < rows && col < cols {
        // pivot: first nonzero entry in this column at or below `rank`
        let pivot_row = (rank..rows).find(|&r| !a[r][col].is_zero());
        let Some(pr) = pivot_row else {
            col += 1;
            continue;
        };
        a.swap(rank, pr);
        let pivot = a[rank][col].clone();
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let val = &pivot * &a[r][c] - &a[r][col] * &a[rank][c];
                // exact by the Bareiss identity
                a[r][c] = val / &prev_pivot;
            }
            a[r][col] = BigInt::zero();
        }
        prev_pivot = pivot;
        rank += 1;
        col += 1;
    }
    rank
}

/// Rank over GF(2). Diagnostic only; the rational rank dominates it.
pub fn rank_mod2(m: &IncidenceMatrix) -> usize {
    // pack rows into u64 blocks
    let blocks = m.cols.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = m
        .data
        .iter()
        .map(|row| {
            let mut packed = vec![0u64; blocks];
            for (i, &x) in row.iter().enumerate() {
                if x != 0 {
                    packed[i / 64] |= 1u64 << (i % 64);
                }
            }
            packed
        })
        .collect();
    let mut rank = 0;
    for col in 0..m.cols {
        let block = col / 64;
        let bit = 1u64 << (col % 64);
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][block] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[block] & bit != 0 {
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x ^= p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Test-oracle rank: naive Gaussian elimination over exact rationals.
/// Kept independent of `exact_rank`'s Bareiss route.
pub fn rational_rank(m: &IncidenceMatrix) -> usize {
    use num::rational::BigRational;
    let mut a: Vec<Vec<BigRational>> = m
        .data
        .iter()
        .map(|row| row.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pr);
        let pivot = a[rank][col].clone();
        for r in 0..rows {
            if r != rank && !a[r][col].is_zero() {
                let factor = &a[r][col] / &pivot;
                for c in col..cols {
                    let delta = &factor * &a[rank][c];
                    a[r][c] = &a[r][c] - delta;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_bipartitions;
    use crate::profile::cut_profile;
    use crate::weight::Weight;

    fn matrix_from(data: Vec<Vec<u8>>) -> IncidenceMatrix {
        let cols = data.first().map(|r| r.len()).unwrap_or(0);
        let rows = data
            .iter()
            .map(|_| IncidenceRow {
                bipartition: Bipartition::new(2, 0).unwrap(),
                unique: true,
            })
            .collect();
        IncidenceMatrix { rows, cols, data, dropped_non_unique: Vec::new() }
    }

    #[test]
    fn identity_rank() {
        let m = matrix_from((0..5).map(|i| (0..5).map(|j| (i == j) as u8).collect()).collect());
        assert_eq!(exact_rank(&m), 5);
        assert_eq!(rational_rank(&m), 5);
        assert_eq!(rank_mod2(&m), 5);
    }

    #[test]
    fn all_ones_rank() {
        let m = matrix_from(vec![vec![1; 6]; 4]);
        assert_eq!(exact_rank(&m), 1);
        assert_eq!(rational_rank(&m), 1);
    }

    #[test]
    fn single_edge_matrix() {
        let mut g = TerminalGraph::new();
        let t1 = g.add_vertex("t1").unwrap();
        let t2 = g.add_vertex("t2").unwrap();
        g.add_edge(t1, t2, Weight::one()).unwrap();
        g.set_terminals(vec![t1, t2]).unwrap();
        let p = cut_profile(&g).unwrap();
        let m = build_incidence_matrix(&g, &p, RowMode::All { strict: true }).unwrap();
        assert_eq!(m.row_count(), 1);
        assert_eq!(m.cols, 1);
        assert_eq!(m.data, vec![vec![1]]);
        assert_eq!(m.to_text(), "1 1\n1\n");
    }

    #[test]
    fn terminal_star_rank() {
        // star with 3 terminal leaves: 3x3 distinct unit rows, rank 3
        let mut g = TerminalGraph::new();
        let hub = g.add_vertex("hub").unwrap();
        let mut ts = Vec::new();
        for l in ["t1", "t2", "t3"] {
            let t = g.add_vertex(l).unwrap();
            g.add_edge(hub, t, Weight::one()).unwrap();
            ts.push(t);
        }
        g.set_terminals(ts).unwrap();
        let p = cut_profile(&g).unwrap();
        let m = build_incidence_matrix(&g, &p, RowMode::All { strict: true }).unwrap();
        assert_eq!(m.row_count(), 3);
        assert_eq!(exact_rank(&m), 3);
    }

    #[test]
    fn strict_mode_rejects_non_unique() {
        // path with equal bottlenecks has a non-unique cut
        let mut g = TerminalGraph::new();
        let t1 = g.add_vertex("t1").unwrap();
        let m_ = g.add_vertex("m").unwrap();
        let t2 = g.add_vertex("t2").unwrap();
        g.add_edge(t1, m_, Weight::one()).unwrap();
        g.add_edge(m_, t2, Weight::one()).unwrap();
        g.set_terminals(vec![t1, t2]).unwrap();
        let p = cut_profile(&g).unwrap();
        assert!(matches!(
            build_incidence_matrix(&g, &p, RowMode::All { strict: true }),
            Err(GraphError::NonUniqueRows(_))
        ));
        let m = build_incidence_matrix(&g, &p, RowMode::UniqueOnly).unwrap();
        assert_eq!(m.row_count(), 0);
        assert_eq!(m.dropped_non_unique, vec![0]);
        let _ = enumerate_bipartitions(2).unwrap();
    }
}
