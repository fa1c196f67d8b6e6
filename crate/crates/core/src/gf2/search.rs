//! Encoding and exhaustive maximum-likelihood search.

use std::cmp::Ordering;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::bits::BitVec;
use super::linalg::nullspace;
use super::matrix::{GeneratorMatrix, ParityMatrix};
use crate::error::{check_closed, Error, Result};

/// Largest search dimension `ml_encode` and `ml_encode_compound` accept.
pub const SEARCH_BUDGET: usize = 28;
/// Largest `m` `count_d_optimal` accepts.
pub const COUNT_BUDGET: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceOrigin {
    /// Drawn i.i.d. Bernoulli(1/2).
    Bernoulli,
    User,
}

/// A length-`n` source sequence to be compressed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceSequence {
    bits: BitVec,
    origin: SourceOrigin,
}

impl SourceSequence {
    pub fn user(bits: BitVec) -> Self {
        SourceSequence {
            bits,
            origin: SourceOrigin::User,
        }
    }

    /// `n` i.i.d. Bernoulli(1/2) bits.
    pub fn sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut bits = BitVec::zeros(n);
        let words = bits.words_mut();
        for w in words.iter_mut() {
            *w = rng.random();
        }
        if !n.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (n % 64)) - 1;
            }
        }
        SourceSequence {
            bits,
            origin: SourceOrigin::Bernoulli,
        }
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn origin(&self) -> SourceOrigin {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Optimal encoding of one source sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodingResult {
    pub z_star: BitVec,
    pub codeword: BitVec,
    pub distortion_count: usize,
    pub normalized_distortion: f64,
    /// Candidate information sequences examined.
    pub search_size: u64,
}

/// `z' G`: bit `j` is the XOR of `z` over column `j`'s index list.
pub fn encode_codeword(z: &BitVec, g: &GeneratorMatrix) -> Result<BitVec> {
    if z.len() != g.m() {
        return Err(Error::LengthMismatch {
            expected: g.m(),
            found: z.len(),
        });
    }
    Ok(g.columns()
        .iter()
        .map(|col| col.iter().fold(false, |acc, &i| acc ^ z.get(i as usize)))
        .collect())
}

/// Integer distance threshold `floor(D n)` for normalized distortion `D`.
/// A relative nudge absorbs representation error, so `D = 0.3, n = 10`
/// gives 3.
pub fn distance_threshold(distortion: f64, n: usize) -> usize {
    let scaled = distortion * n as f64;
    ((scaled + 1e-9 * scaled.max(1.0)).floor() as usize).min(n)
}

/// Exact minimizer of `d(z' G, y)` over all `2^m` information sequences,
/// ties broken towards the lexicographically smallest `z`.
pub fn ml_encode(g: &GeneratorMatrix, y: &SourceSequence) -> Result<EncodingResult> {
    check_source(g, y)?;
    check_budget("ML encoding", g.m(), SEARCH_BUDGET)?;
    let basis = unit_basis(g.m());
    let space = SearchSpace::new(g, &basis);
    Ok(space.minimize(g, y.bits()))
}

/// Exact minimizer of `d(z' G, y)` over information sequences with
/// `H z = 0`, enumerated through a nullspace basis of `H`.
pub fn ml_encode_compound(
    g: &GeneratorMatrix,
    h: &ParityMatrix,
    y: &SourceSequence,
) -> Result<EncodingResult> {
    check_source(g, y)?;
    if h.m() != g.m() {
        return Err(Error::LengthMismatch {
            expected: g.m(),
            found: h.m(),
        });
    }
    let basis = nullspace(&h.row_vectors(), g.m());
    check_budget("compound ML encoding", basis.len(), SEARCH_BUDGET)?;
    let space = SearchSpace::new(g, &basis);
    Ok(space.minimize(g, y.bits()))
}

/// Number of information sequences `z` with `d(z' G, y) <= floor(D n)`.
pub fn count_d_optimal(g: &GeneratorMatrix, y: &SourceSequence, distortion: f64) -> Result<u64> {
    check_closed("D", distortion, 0.0, 1.0, "[0, 1]")?;
    check_source(g, y)?;
    check_budget("D-optimal counting", g.m(), COUNT_BUDGET)?;
    let threshold = distance_threshold(distortion, g.n());
    let basis = unit_basis(g.m());
    let mut count = 0;
    SearchSpace::new(g, &basis).for_each(y.bits(), |d, _| {
        if d <= threshold {
            count += 1;
        }
    });
    Ok(count)
}

/// Histogram of `d(z' G, y)` over all `2^m` information sequences; entry
/// `d` counts sequences at distance exactly `d`.
pub fn distance_spectrum(g: &GeneratorMatrix, y: &SourceSequence) -> Result<Vec<u64>> {
    check_source(g, y)?;
    check_budget("distance spectrum", g.m(), COUNT_BUDGET)?;
    let basis = unit_basis(g.m());
    let mut hist = vec![0; g.n() + 1];
    SearchSpace::new(g, &basis).for_each(y.bits(), |d, _| hist[d] += 1);
    Ok(hist)
}

fn check_source(g: &GeneratorMatrix, y: &SourceSequence) -> Result<()> {
    if y.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            found: y.len(),
        });
    }
    Ok(())
}

fn check_budget(context: &'static str, requested: usize, limit: usize) -> Result<()> {
    if requested > limit {
        return Err(Error::BudgetExceeded {
            context,
            requested,
            limit,
        });
    }
    Ok(())
}

fn unit_basis(m: usize) -> Vec<BitVec> {
    (0..m)
        .map(|i| {
            let mut v = BitVec::zeros(m);
            v.set(i, true);
            v
        })
        .collect()
}

/// A linear space of information sequences spanned by `basis`, with each
/// basis vector's codeword precomputed as packed words. Enumeration walks
/// the Gray code, so each step costs one XOR of a codeword and one of an
/// information vector.
struct SearchSpace {
    m: usize,
    n: usize,
    z_words: usize,
    c_words: usize,
    basis_z: Vec<u64>,
    basis_c: Vec<u64>,
    dim: usize,
}

impl SearchSpace {
    fn new(g: &GeneratorMatrix, basis: &[BitVec]) -> Self {
        let (m, n) = (g.m(), g.n());
        let z_words = m.div_ceil(64);
        let c_words = n.div_ceil(64);
        let mut basis_z = Vec::with_capacity(basis.len() * z_words);
        let mut basis_c = Vec::with_capacity(basis.len() * c_words);
        for b in basis {
            basis_z.extend_from_slice(b.words());
            let cw = encode_codeword(b, g).expect("basis vectors have length m");
            basis_c.extend_from_slice(cw.words());
        }
        SearchSpace {
            m,
            n,
            z_words,
            c_words,
            basis_z,
            basis_c,
            dim: basis.len(),
        }
    }

    /// Calls `visit(distance, z_words)` once per element of the space,
    /// starting with `z = 0`.
    fn for_each(&self, y: &BitVec, mut visit: impl FnMut(usize, &[u64])) {
        let mut z = vec![0u64; self.z_words];
        let mut diff = y.words().to_vec();
        visit(popcount(&diff), &z);
        for t in 1u64..(1u64 << self.dim) {
            let i = t.trailing_zeros() as usize;
            xor_into(&mut z, &self.basis_z[i * self.z_words..(i + 1) * self.z_words]);
            xor_into(&mut diff, &self.basis_c[i * self.c_words..(i + 1) * self.c_words]);
            visit(popcount(&diff), &z);
        }
    }

    fn minimize(&self, g: &GeneratorMatrix, y: &BitVec) -> EncodingResult {
        let mut best_d = usize::MAX;
        let mut best_z = vec![0u64; self.z_words];
        self.for_each(y, |d, z| {
            if d < best_d || (d == best_d && lex_cmp_words(z, &best_z) == Ordering::Less) {
                best_d = d;
                best_z.copy_from_slice(z);
            }
        });
        let z_star: BitVec = (0..self.m).map(|i| (best_z[i / 64] >> (i % 64)) & 1 == 1).collect();
        let codeword = encode_codeword(&z_star, g).expect("z_star has length m");
        debug_assert_eq!(codeword.hamming(y), best_d);
        EncodingResult {
            search_size: 1u64 << self.dim,
            normalized_distortion: best_d as f64 / self.n as f64,
            distortion_count: best_d,
            codeword,
            z_star,
        }
    }
}

fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (a, b) in dst.iter_mut().zip(src) {
        *a ^= b;
    }
}

fn lex_cmp_words(a: &[u64], b: &[u64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let diff = x ^ y;
        if diff != 0 {
            let bit = diff & diff.wrapping_neg();
            return if x & bit == 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            };
        }
    }
    Ordering::Equal
}
