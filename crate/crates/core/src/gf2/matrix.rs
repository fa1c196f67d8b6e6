//! Sparse generator and parity-check matrices and their text format.
//!
//! ```text
//! LDGM m n c seed          LDPC k m dv dc seed
//! i_1 ... i_c   (n lines)  v_1 ... v_dc   (k lines)
//! ```

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bits::BitVec;
use crate::error::{Error, Result};

/// LDGM generator matrix `G in {0,1}^{m x n}` stored by columns: column
/// `j` (check / source bit `j`) lists the `c` information bits it XORs.
/// Repeated indices are kept and cancel in pairs when evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    m: usize,
    n: usize,
    c: usize,
    seed: u64,
    columns: Vec<Vec<u32>>,
}

/// Samples the check-regular ensemble: each of the `n` checks draws `c`
/// information bits independently and uniformly from `0..m`, with
/// replacement.
pub fn sample_ldgm(m: usize, n: usize, c: usize, seed: u64) -> Result<GeneratorMatrix> {
    GeneratorMatrix::sample(m, n, c, seed)
}

impl GeneratorMatrix {
    pub fn sample(m: usize, n: usize, c: usize, seed: u64) -> Result<Self> {
        check_ldgm_shape(m, n, c)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let columns = (0..n)
            .map(|_| (0..c).map(|_| rng.random_range(0..m as u32)).collect())
            .collect();
        Ok(GeneratorMatrix {
            m,
            n,
            c,
            seed,
            columns,
        })
    }

    pub fn from_columns(m: usize, columns: Vec<Vec<u32>>, seed: u64) -> Result<Self> {
        let n = columns.len();
        let c = columns.first().map_or(0, Vec::len);
        check_ldgm_shape(m, n, c)?;
        for (j, col) in columns.iter().enumerate() {
            if col.len() != c {
                return Err(Error::InvalidParameter(format!(
                    "column {j} has {} entries, expected {c}",
                    col.len()
                )));
            }
            if let Some(&bad) = col.iter().find(|&&i| i as usize >= m) {
                return Err(Error::InvalidParameter(format!(
                    "column {j} references information bit {bad} >= m = {m}"
                )));
            }
        }
        Ok(GeneratorMatrix {
            m,
            n,
            c,
            seed,
            columns,
        })
    }

    /// Information bits.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Checks, one per source bit.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn columns(&self) -> &[Vec<u32>] {
        &self.columns
    }

    pub fn rate(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    /// Row `i` of `G` as an `n`-bit vector: the checks that see
    /// information bit `i` an odd number of times.
    pub fn row_masks(&self) -> Vec<BitVec> {
        let mut rows = vec![BitVec::zeros(self.n); self.m];
        for (j, col) in self.columns.iter().enumerate() {
            for &i in col {
                rows[i as usize].flip(j);
            }
        }
        rows
    }

    /// Column `j` as an `m`-bit vector after pairwise cancellation.
    pub fn column_support(&self, j: usize) -> BitVec {
        let mut v = BitVec::zeros(self.m);
        for &i in &self.columns[j] {
            v.flip(i as usize);
        }
        v
    }

    /// Number of column slots pointing at each information bit.
    pub fn row_degrees(&self) -> Vec<usize> {
        let mut degrees = vec![0; self.m];
        for col in &self.columns {
            for &i in col {
                degrees[i as usize] += 1;
            }
        }
        degrees
    }
}

fn check_ldgm_shape(m: usize, n: usize, c: usize) -> Result<()> {
    if m == 0 || n == 0 || c == 0 {
        return Err(Error::InvalidParameter(format!(
            "LDGM shape needs m, n, c >= 1, got m={m} n={n} c={c}"
        )));
    }
    if m > u32::MAX as usize {
        return Err(Error::InvalidParameter(format!("m = {m} too large")));
    }
    Ok(())
}

/// LDPC parity-check matrix `H in {0,1}^{k x m}` stored by rows, each row
/// listing its `dc` variable sockets. A variable repeated within a row
/// cancels in pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityMatrix {
    k: usize,
    m: usize,
    dv: usize,
    dc: usize,
    seed: u64,
    rows: Vec<Vec<u32>>,
}

/// Configuration-model `(dv, dc)` ensemble on `m` variables: the
/// `dv * m` variable sockets are shuffled and dealt to `dv * m / dc`
/// checks of `dc` sockets each.
pub fn sample_ldpc(m: usize, dv: usize, dc: usize, seed: u64) -> Result<ParityMatrix> {
    ParityMatrix::sample(m, dv, dc, seed)
}

impl ParityMatrix {
    pub fn sample(m: usize, dv: usize, dc: usize, seed: u64) -> Result<Self> {
        if m == 0 || dv == 0 || dc == 0 || m > u32::MAX as usize {
            return Err(Error::InvalidParameter(format!(
                "LDPC shape needs m, dv, dc >= 1, got m={m} dv={dv} dc={dc}"
            )));
        }
        if !(dv * m).is_multiple_of(dc) {
            return Err(Error::InvalidParameter(format!(
                "socket count dv*m = {} is not divisible by dc = {dc}",
                dv * m
            )));
        }
        let mut sockets: Vec<u32> = (0..m as u32)
            .flat_map(|v| std::iter::repeat_n(v, dv))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sockets.shuffle(&mut rng);
        let rows = sockets.chunks(dc).map(<[u32]>::to_vec).collect();
        Ok(ParityMatrix {
            k: dv * m / dc,
            m,
            dv,
            dc,
            seed,
            rows,
        })
    }

    /// No checks: every information sequence is admissible.
    pub fn empty(m: usize) -> Self {
        ParityMatrix {
            k: 0,
            m,
            dv: 0,
            dc: 0,
            seed: 0,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(m: usize, dv: usize, dc: usize, rows: Vec<Vec<u32>>, seed: u64) -> Result<Self> {
        let mut uses = vec![0usize; m];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != dc {
                return Err(Error::InvalidParameter(format!(
                    "check {r} has {} sockets, expected {dc}",
                    row.len()
                )));
            }
            for &v in row {
                let slot = uses.get_mut(v as usize).ok_or_else(|| {
                    Error::InvalidParameter(format!("check {r} references variable {v} >= m = {m}"))
                })?;
                *slot += 1;
            }
        }
        if let Some(v) = uses.iter().position(|&u| u != dv) {
            return Err(Error::InvalidParameter(format!(
                "variable {v} fills {} sockets, expected dv = {dv}",
                uses[v]
            )));
        }
        Ok(ParityMatrix {
            k: rows.len(),
            m,
            dv,
            dc,
            seed,
            rows,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dv(&self) -> usize {
        self.dv
    }

    pub fn dc(&self) -> usize {
        self.dc
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Each check as an `m`-bit vector after pairwise cancellation.
    pub fn row_vectors(&self) -> Vec<BitVec> {
        self.rows
            .iter()
            .map(|row| {
                let mut v = BitVec::zeros(self.m);
                for &i in row {
                    v.flip(i as usize);
                }
                v
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        super::linalg::rank(self.row_vectors())
    }

    /// Actual rate `(m - rank H) / m`, at least the design rate `1 - k/m`.
    pub fn rate(&self) -> f64 {
        (self.m - self.rank()) as f64 / self.m as f64
    }
}

impl fmt::Display for GeneratorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LDGM {} {} {} {}", self.m, self.n, self.c, self.seed)?;
        write_index_lines(f, &self.columns)
    }
}

impl fmt::Display for ParityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LDPC {} {} {} {} {}", self.k, self.m, self.dv, self.dc, self.seed)?;
        write_index_lines(f, &self.rows)
    }
}

fn write_index_lines(f: &mut fmt::Formatter<'_>, lines: &[Vec<u32>]) -> fmt::Result {
    for line in lines {
        let mut first = true;
        for i in line {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        f.write_str("\n")?;
    }
    Ok(())
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(s: &'a str) -> Self {
        Lines {
            inner: s.lines().enumerate(),
        }
    }

    fn header(&mut self, tag: &str, fields: usize) -> Result<Vec<u64>> {
        let (_, line) = self.inner.next().ok_or(Error::Parse {
            line: 1,
            message: "empty input".into(),
        })?;
        let mut parts = line.split_whitespace();
        if parts.next() != Some(tag) {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected `{tag}` header"),
            });
        }
        let values = parse_numbers::<u64>(parts, 1)?;
        if values.len() != fields {
            return Err(Error::Parse {
                line: 1,
                message: format!("header needs {fields} numbers, found {}", values.len()),
            });
        }
        Ok(values)
    }

    fn index_lines(&mut self, count: usize, width: usize) -> Result<Vec<Vec<u32>>> {
        let mut out = Vec::with_capacity(count);
        for expected in 0..count {
            let (i, line) = self.inner.next().ok_or(Error::Parse {
                line: expected + 2,
                message: format!("expected {count} index lines, found {expected}"),
            })?;
            let values = parse_numbers::<u32>(line.split_whitespace(), i + 1)?;
            if values.len() != width {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected {width} indices, found {}", values.len()),
                });
            }
            out.push(values);
        }
        if let Some((i, line)) = self.inner.find(|(_, l)| !l.trim().is_empty()) {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("unexpected trailing content `{line}`"),
            });
        }
        Ok(out)
    }
}

fn parse_numbers<'a, T: FromStr>(parts: impl Iterator<Item = &'a str>, line: usize) -> Result<Vec<T>> {
    parts
        .map(|p| {
            p.parse().map_err(|_| Error::Parse {
                line,
                message: format!("`{p}` is not a non-negative integer"),
            })
        })
        .collect()
}

impl FromStr for GeneratorMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = Lines::new(s);
        let h = lines.header("LDGM", 4)?;
        let (m, n, c, seed) = (h[0] as usize, h[1] as usize, h[2] as usize, h[3]);
        let columns = lines.index_lines(n, c)?;
        let g = GeneratorMatrix::from_columns(m, columns, seed)?;
        if g.c != c {
            return Err(Error::Parse {
                line: 1,
                message: "degree mismatch".into(),
            });
        }
        Ok(g)
    }
}

impl FromStr for ParityMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = Lines::new(s);
        let h = lines.header("LDPC", 5)?;
        let (k, m, dv, dc, seed) = (h[0] as usize, h[1] as usize, h[2] as usize, h[3] as usize, h[4]);
        let rows = lines.index_lines(k, dc)?;
        if k == 0 {
            let mut p = ParityMatrix::empty(m);
            p.seed = seed;
            return Ok(p);
        }
        ParityMatrix::from_rows(m, dv, dc, rows, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_ldgm(4, 8, 3, 42).unwrap();
        let b = sample_ldgm(4, 8, 3, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_ldgm(4, 8, 3, 43).unwrap());
        assert!(a.columns().iter().all(|c| c.len() == 3 && c.iter().all(|&i| i < 4)));
    }

    #[test]
    fn mean_row_degree_is_socket_ratio() {
        let (m, n, c) = (50, 80, 3);
        let mut total = 0usize;
        for seed in 0..200 {
            total += sample_ldgm(m, n, c, seed).unwrap().row_degrees().iter().sum::<usize>();
        }
        let mean_row = total as f64 / (200 * m) as f64;
        assert!((mean_row - (n * c) as f64 / m as f64).abs() < 1e-12);
    }

    #[test]
    fn ldpc_socket_balance() {
        let h = sample_ldpc(8, 2, 4, 9).unwrap();
        assert_eq!(h.k(), 4);
        let mut uses = [0; 8];
        for row in h.rows() {
            assert_eq!(row.len(), 4);
            for &v in row {
                uses[v as usize] += 1;
            }
        }
        assert!(uses.iter().all(|&u| u == 2));
        assert!(sample_ldpc(7, 2, 4, 9).is_err());
    }

    #[test]
    fn duplicate_indices_cancel() {
        let g = GeneratorMatrix::from_columns(3, vec![vec![1, 1, 2]], 0).unwrap();
        assert_eq!(g.column_support(0).ones().collect::<Vec<_>>(), vec![2]);
        let rows = g.row_masks();
        assert!(rows[1].is_zero() && rows[2].get(0));
    }

    #[test]
    fn text_format_layout() {
        let g = GeneratorMatrix::from_columns(4, vec![vec![0, 3], vec![2, 2]], 17).unwrap();
        assert_eq!(g.to_string(), "LDGM 4 2 2 17\n0 3\n2 2\n");
        let p = ParityMatrix::empty(5);
        assert_eq!(p.to_string(), "LDPC 0 5 0 0 0\n");
        assert_eq!(p.to_string().parse::<ParityMatrix>().unwrap(), p);
    }

    #[test]
    fn malformed_text_is_rejected() {
        assert!("LDGM 4 2 2\n0 1\n1 2\n".parse::<GeneratorMatrix>().is_err());
        assert!("LDGM 4 2 2 0\n0 1\n".parse::<GeneratorMatrix>().is_err());
        assert!("LDGM 4 2 2 0\n0 1\n1 9\n".parse::<GeneratorMatrix>().is_err());
        assert!("LDGM 4 1 2 0\n0 1\nextra\n".parse::<GeneratorMatrix>().is_err());
        assert!("LDPC 1 4 1 4 0\n0 1 2 x\n".parse::<ParityMatrix>().is_err());
    }
}
