//! Gaussian elimination over GF(2).

use super::bits::BitVec;
use super::matrix::GeneratorMatrix;
use super::search::SourceSequence;
use crate::error::{Error, Result};

/// Row-echelon basis grown one equation at a time. Every stored row has
/// a distinct pivot equal to its lowest set bit, which makes reduction of
/// a new row a single ascending sweep.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    width: usize,
    rows: Vec<(BitVec, bool)>,
    pivot_row: Vec<Option<usize>>,
}

/// Outcome of adding an equation `row · x = rhs` to an [`EchelonBasis`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Insertion {
    /// The row was independent and raised the rank.
    Independent,
    /// The row reduced to `0 = 0`.
    Redundant,
    /// The row reduced to `0 = 1`: the system has no solution.
    Inconsistent,
}

impl EchelonBasis {
    pub fn new(width: usize) -> Self {
        EchelonBasis {
            width,
            rows: Vec::new(),
            pivot_row: vec![None; width],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, mut row: BitVec, mut rhs: bool) -> Insertion {
        debug_assert_eq!(row.len(), self.width);
        let mut p = row.first_one_from(0);
        while let Some(bit) = p {
            match self.pivot_row[bit] {
                Some(r) => {
                    let (pivot, pivot_rhs) = &self.rows[r];
                    row.xor_assign(pivot);
                    rhs ^= pivot_rhs;
                    p = row.first_one_from(bit + 1);
                }
                None => {
                    self.pivot_row[bit] = Some(self.rows.len());
                    self.rows.push((row, rhs));
                    return Insertion::Independent;
                }
            }
        }
        if rhs {
            Insertion::Inconsistent
        } else {
            Insertion::Redundant
        }
    }

    /// Basis of `{x : row · x = 0 for every stored row}`, one vector per
    /// non-pivot column, in increasing column order.
    pub fn nullspace(&self) -> Vec<BitVec> {
        // Reduce to RREF: clear each pivot column from the rows above it.
        let mut rows: Vec<BitVec> = self.rows.iter().map(|(r, _)| r.clone()).collect();
        let mut order: Vec<(usize, usize)> = self
            .pivot_row
            .iter()
            .enumerate()
            .filter_map(|(bit, r)| r.map(|r| (bit, r)))
            .collect();
        order.sort_unstable();
        for &(bit, r) in order.iter().rev() {
            for &(other_bit, other) in &order {
                if other_bit >= bit {
                    break;
                }
                if rows[other].get(bit) {
                    let pivot = rows[r].clone();
                    rows[other].xor_assign(&pivot);
                }
            }
        }

        (0..self.width)
            .filter(|&f| self.pivot_row[f].is_none())
            .map(|f| {
                let mut v = BitVec::zeros(self.width);
                v.set(f, true);
                for &(bit, r) in &order {
                    if rows[r].get(f) {
                        v.set(bit, true);
                    }
                }
                v
            })
            .collect()
    }
}

/// Rank over GF(2) of a set of equal-length rows.
pub fn rank(rows: impl IntoIterator<Item = BitVec>) -> usize {
    let mut rows = rows.into_iter().peekable();
    let Some(width) = rows.peek().map(BitVec::len) else {
        return 0;
    };
    let mut basis = EchelonBasis::new(width);
    for row in rows {
        basis.insert(row, false);
    }
    basis.rank()
}

/// Basis of the right nullspace `{x in {0,1}^width : H x = 0}`.
pub fn nullspace(rows: &[BitVec], width: usize) -> Vec<BitVec> {
    let mut basis = EchelonBasis::new(width);
    for row in rows {
        basis.insert(row.clone(), false);
    }
    basis.nullspace()
}

/// Whether `z' G = y'` has a solution over GF(2), i.e. whether the
/// `c`-XORSAT instance `(G, y)` is satisfiable.
///
/// Equations containing a variable that appears nowhere else are removed
/// first (leaf removal never changes satisfiability); the remaining core
/// is eliminated.
pub fn xorsat_solvable(g: &GeneratorMatrix, y: &SourceSequence) -> Result<bool> {
    solve_with(g, y, true)
}

fn solve_with(g: &GeneratorMatrix, y: &SourceSequence, peel: bool) -> Result<bool> {
    if y.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            found: y.len(),
        });
    }
    let equations: Vec<Vec<usize>> = (0..g.n()).map(|j| g.column_support(j).ones().collect()).collect();
    let mut live = vec![true; equations.len()];
    for (j, eq) in equations.iter().enumerate() {
        if eq.is_empty() {
            if y.bits().get(j) {
                return Ok(false);
            }
            live[j] = false;
        }
    }

    if peel {
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.m()];
        for (j, eq) in equations.iter().enumerate() {
            for &v in eq {
                incident[v].push(j);
            }
        }
        let mut degree: Vec<usize> = incident
            .iter()
            .map(|eqs| eqs.iter().filter(|&&j| live[j]).count())
            .collect();
        let mut queue: Vec<usize> = (0..g.m()).filter(|&v| degree[v] == 1).collect();
        while let Some(v) = queue.pop() {
            if degree[v] != 1 {
                continue;
            }
            let Some(&j) = incident[v].iter().find(|&&j| live[j]) else {
                continue;
            };
            live[j] = false;
            for &u in &equations[j] {
                degree[u] -= 1;
                if degree[u] == 1 {
                    queue.push(u);
                }
            }
        }
    }

    let mut basis = EchelonBasis::new(g.m());
    for (j, eq) in equations.iter().enumerate() {
        if !live[j] {
            continue;
        }
        let mut row = BitVec::zeros(g.m());
        for &v in eq {
            row.set(v, true);
        }
        if basis.insert(row, y.bits().get(j)) == Insertion::Inconsistent {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::matrix::{sample_ldgm, ParityMatrix};
    use crate::gf2::search::encode_codeword;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bits(s: &str) -> BitVec {
        s.chars().map(|ch| ch == '1').collect()
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(vec![bits("110"), bits("011"), bits("101")]), 2);
        assert_eq!(rank(vec![bits("100"), bits("010"), bits("001")]), 3);
        assert_eq!(rank(Vec::<BitVec>::new()), 0);
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let width = rng.random_range(1..40);
            let rows: Vec<BitVec> = (0..rng.random_range(0..30))
                .map(|_| (0..width).map(|_| rng.random_bool(0.3)).collect())
                .collect();
            let null = nullspace(&rows, width);
            assert_eq!(null.len() + rank(rows.clone()), width);
            assert_eq!(rank(null.clone()), null.len());
            for x in &null {
                for r in &rows {
                    let dot = r.words().iter().zip(x.words()).map(|(a, b)| (a & b).count_ones()).sum::<u32>();
                    assert_eq!(dot % 2, 0);
                }
            }
        }
    }

    #[test]
    fn sampled_ldpc_rate_at_least_design_rate() {
        for seed in 0..20 {
            let h = crate::gf2::matrix::sample_ldpc(24, 3, 6, seed).unwrap();
            assert!(h.rate() >= 1.0 - h.k() as f64 / h.m() as f64 - 1e-12);
        }
        assert_eq!(ParityMatrix::empty(5).rate(), 1.0);
    }

    #[test]
    fn codewords_are_solvable() {
        let g = sample_ldgm(30, 40, 3, 11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let z: BitVec = (0..30).map(|_| rng.random_bool(0.5)).collect();
        let y = SourceSequence::user(encode_codeword(&z, &g).unwrap());
        assert!(xorsat_solvable(&g, &y).unwrap());
    }

    #[test]
    fn vector_outside_row_space_is_rejected() {
        // Both checks see only information bit 0, so y must repeat a bit.
        let g = GeneratorMatrix::from_columns(2, vec![vec![0], vec![0]], 0).unwrap();
        assert!(!xorsat_solvable(&g, &SourceSequence::user(bits("10"))).unwrap());
        assert!(xorsat_solvable(&g, &SourceSequence::user(bits("11"))).unwrap());
        // A column that cancels to zero forces its bit to zero.
        let g = GeneratorMatrix::from_columns(2, vec![vec![1, 1]], 0).unwrap();
        assert!(!xorsat_solvable(&g, &SourceSequence::user(bits("1"))).unwrap());
    }

    #[test]
    fn peeling_does_not_change_answer() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for seed in 0..200 {
            let m = rng.random_range(5..40);
            let n = rng.random_range(3..50);
            let g = sample_ldgm(m, n, 3, seed).unwrap();
            let y = SourceSequence::user((0..n).map(|_| rng.random_bool(0.5)).collect());
            assert_eq!(solve_with(&g, &y, true).unwrap(), solve_with(&g, &y, false).unwrap());
        }
    }
}
