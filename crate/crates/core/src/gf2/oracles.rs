//! Exact and Monte Carlo oracles for the moment computations behind the
//! rate bounds, on instances small enough to enumerate.

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::factorial::ln_binomial;

use super::bits::BitVec;
use super::matrix::sample_ldgm;
use super::search::{count_d_optimal, distance_threshold, encode_codeword, SourceSequence};
use crate::bounds::{binary_entropy, induced_weight};
use crate::error::{check_closed, Error, Result};
use crate::seeds::trial_rng;

/// Largest `m` accepted by [`second_moment_decomposition_check`].
pub const SECOND_MOMENT_BUDGET: usize = 12;
/// Largest `n` accepted by [`conditional_overlap_brute_force`].
pub const BRUTE_FORCE_BUDGET: usize = 14;

/// First moment of the number of D-optimal codewords with the bounds
/// `2^{n(R - 1 + h(D'))} / (n + 1)` and `(n + 1) 2^{n(R - 1 + h(D'))}`,
/// where `R = m/n` and `D' = floor(D n)/n` is the distortion actually
/// resolvable at length `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstMoment {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub effective_distortion: f64,
}

impl FirstMoment {
    pub fn within_bounds(&self) -> bool {
        self.lower <= self.value * (1.0 + 1e-12) && self.value <= self.upper * (1.0 + 1e-12)
    }
}

/// `E[N] = 2^{m - n} sum_{s <= floor(D n)} C(n, s)`.
///
/// The source is uniform, so for every fixed `z` and `G` the codeword
/// `z' G` lies within distance `floor(D n)` of `y` with probability
/// `|ball| / 2^n`; linearity of expectation over the `2^m` information
/// sequences gives the formula.
///
/// For `D <= 1/2` the result is checked against the `(n + 1)`-factor
/// sandwich and a violation is reported as a numeric error.
pub fn first_moment_exact(m: usize, n: usize, distortion: f64) -> Result<f64> {
    let fm = first_moment_with_bounds(m, n, distortion)?;
    if fm.effective_distortion <= 0.5 && !fm.within_bounds() {
        return Err(Error::Numeric {
            context: "first moment",
            detail: format!(
                "E[N] = {} outside [{}, {}] for m={m} n={n} D={distortion}",
                fm.value, fm.lower, fm.upper
            ),
        });
    }
    Ok(fm.value)
}

pub fn first_moment_with_bounds(m: usize, n: usize, distortion: f64) -> Result<FirstMoment> {
    check_closed("D", distortion, 0.0, 1.0, "[0, 1]")?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let k = distance_threshold(distortion, n);
    let log2_ball = log2_ball_size(n, k);
    let log2_value = m as f64 - n as f64 + log2_ball;
    let d_eff = k as f64 / n as f64;
    let exponent = m as f64 - n as f64 + n as f64 * binary_entropy(d_eff.min(1.0))?;
    let slack = ((n + 1) as f64).log2();
    Ok(FirstMoment {
        value: log2_value.exp2(),
        lower: (exponent - slack).exp2(),
        upper: (exponent + slack).exp2(),
        effective_distortion: d_eff,
    })
}

/// `log2 sum_{s <= k} C(n, s)`, exact integer arithmetic while it fits.
fn log2_ball_size(n: usize, k: usize) -> f64 {
    if n <= 126 {
        let mut binom: u128 = 1;
        let mut sum: u128 = 1;
        for s in 1..=k {
            binom = binom * (n - s + 1) as u128 / s as u128;
            sum += binom;
        }
        // Split to keep full precision above 2^53.
        let hi = (sum >> 64) as f64 * 2f64.powi(64);
        let lo = sum as u64 as f64;
        return (hi + lo).log2();
    }
    let ln_terms: Vec<f64> = (0..=k).map(|s| ln_binomial(n as u64, s as u64)).collect();
    log_sum_exp(&ln_terms) / std::f64::consts::LN_2
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Agree,
    Disagree,
    /// Too few samples to form standard errors.
    Inconclusive,
}

/// Monte Carlo comparison of `E[N^2]` measured directly with its
/// decomposition `E[N] + E[N] sum_{j != 0} P[I_j = 1 | I_0 = 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondMomentReport {
    pub trials: usize,
    /// Exact `E[N]`.
    pub first_moment: f64,
    /// Sample mean of `N`.
    pub sample_first_moment: f64,
    pub direct: f64,
    pub direct_stderr: f64,
    /// Sample mean of `N - 1` with `y` drawn uniformly from the
    /// distortion ball around the zero codeword.
    pub conditional_sum: f64,
    pub conditional_stderr: f64,
    pub decomposed: f64,
    pub decomposed_stderr: f64,
    /// `|direct - decomposed|` in combined standard errors.
    pub z_score: f64,
    pub status: CheckStatus,
}

/// Estimates both sides of the second-moment decomposition on `(m, n, c)`
/// LDGM codes at distortion `D` from `trials` independent samples each.
///
/// Conditioning on `I_0 = 1` means `y` is uniform on the radius
/// `floor(D n)` ball around zero; that ball is sampled directly (radius
/// by `C(n, t)` weights, then a uniform support), so every trial
/// contributes. Two sides agree when within 3 combined standard errors.
pub fn second_moment_decomposition_check(
    m: usize,
    n: usize,
    c: usize,
    distortion: f64,
    trials: usize,
    seed: u64,
) -> Result<SecondMomentReport> {
    check_closed("D", distortion, 0.0, 1.0, "[0, 1]")?;
    if m > SECOND_MOMENT_BUDGET {
        return Err(Error::BudgetExceeded {
            context: "second-moment check",
            requested: m,
            limit: SECOND_MOMENT_BUDGET,
        });
    }
    let first_moment = first_moment_exact(m, n, distortion)?;
    let radius = distance_threshold(distortion, n);
    let radius_weights: Vec<f64> = (0..=radius).map(|t| ln_binomial(n as u64, t as u64)).collect();
    let ln_total = log_sum_exp(&radius_weights);
    let radius_cdf: Vec<f64> = radius_weights
        .iter()
        .scan(0.0, |acc, w| {
            *acc += (w - ln_total).exp();
            Some(*acc)
        })
        .collect();

    let samples: Vec<(f64, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| -> Result<(f64, f64)> {
            let mut rng = trial_rng(seed, 0, t);
            let g = sample_ldgm(m, n, c, rng.random())?;
            let y = SourceSequence::sample(n, &mut rng);
            let count = count_d_optimal(&g, &y, distortion)? as f64;

            let mut rng = trial_rng(seed, 1, t);
            let g = sample_ldgm(m, n, c, rng.random())?;
            let u: f64 = rng.random();
            let weight = radius_cdf.iter().position(|&p| u < p).unwrap_or(radius);
            let mut bits = BitVec::zeros(n);
            for i in index::sample(&mut rng, n, weight) {
                bits.set(i, true);
            }
            let conditional = count_d_optimal(&g, &SourceSequence::user(bits), distortion)? as f64 - 1.0;
            Ok((count, conditional))
        })
        .collect::<Result<_>>()?;

    let counts: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let squares: Vec<f64> = counts.iter().map(|x| x * x).collect();
    let conditionals: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let (sample_first_moment, _) = mean_stderr(&counts);
    let (direct, direct_stderr) = mean_stderr(&squares);
    let (conditional_sum, conditional_stderr) = mean_stderr(&conditionals);
    let decomposed = first_moment + first_moment * conditional_sum;
    let decomposed_stderr = first_moment * conditional_stderr;

    if direct + 1e-9 * direct.abs() < sample_first_moment * sample_first_moment {
        return Err(Error::Numeric {
            context: "second-moment check",
            detail: format!("sample E[N^2] = {direct} below (sample E[N])^2"),
        });
    }

    let combined = direct_stderr.hypot(decomposed_stderr);
    let diff = (direct - decomposed).abs();
    let (z_score, status) = if trials < 2 {
        (f64::NAN, CheckStatus::Inconclusive)
    } else if diff <= 1e-9 * direct.abs().max(1.0) {
        (0.0, CheckStatus::Agree)
    } else if combined == 0.0 {
        (f64::INFINITY, CheckStatus::Disagree)
    } else {
        let z = diff / combined;
        (z, if z <= 3.0 { CheckStatus::Agree } else { CheckStatus::Disagree })
    };

    Ok(SecondMomentReport {
        trials,
        first_moment,
        sample_first_moment,
        direct,
        direct_stderr,
        conditional_sum,
        conditional_stderr,
        decomposed,
        decomposed_stderr,
        z_score,
        status,
    })
}

/// Sample mean and standard error of the mean (unbiased variance).
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn check_overlap_args(n: usize, w: f64, c: u32, distortion: f64) -> Result<(f64, usize)> {
    check_closed("w", w, 0.0, 1.0, "[0, 1]")?;
    check_closed("D", distortion, 0.0, 1.0, "[0, 1]")?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let wn = w * n as f64;
    if (wn - wn.round()).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("w n = {wn} is not an integer")));
    }
    Ok((induced_weight(w, c)?, distance_threshold(distortion, n)))
}

/// `log2 P[U <= floor(D n)]` where `U = sum_{i <= T} Y_i + sum_{j <= n - T} W_j`,
/// `T` on `{0..floor(D n)}` with weights `C(n, t)`, `Y ~ Ber(1 - delta)`,
/// `W ~ Ber(delta)` and `delta = delta(w; c)`.
///
/// This is the probability that a codeword of weight `w m` is D-optimal
/// given that the zero codeword is. Computed by exact binomial
/// convolution in log space.
pub fn conditional_overlap_log2(n: usize, w: f64, c: u32, distortion: f64) -> Result<f64> {
    let (delta, k) = check_overlap_args(n, w, c, distortion)?;
    let ln_t: Vec<f64> = (0..=k).map(|t| ln_binomial(n as u64, t as u64)).collect();
    let ln_t_total = log_sum_exp(&ln_t);

    let mut terms = Vec::with_capacity(k + 1);
    for (t, &ln_weight) in ln_t.iter().enumerate() {
        let ln_y = ln_binomial_pmf(t, 1.0 - delta, k);
        let ln_w_cdf = ln_cdf(&ln_binomial_pmf(n - t, delta, k));
        let last = ln_w_cdf.len() - 1;
        let inner: Vec<f64> = (0..ln_y.len()).map(|a| ln_y[a] + ln_w_cdf[(k - a).min(last)]).collect();
        terms.push(ln_weight - ln_t_total + log_sum_exp(&inner));
    }
    Ok(log_sum_exp(&terms) / std::f64::consts::LN_2)
}

pub fn conditional_overlap_prob_exact(n: usize, w: f64, c: u32, distortion: f64) -> Result<f64> {
    Ok(conditional_overlap_log2(n, w, c, distortion)?.exp2())
}

/// `ln P[Bin(trials, p) = j]` for `j = 0..=min(trials, upto)`.
fn ln_binomial_pmf(trials: usize, p: f64, upto: usize) -> Vec<f64> {
    let top = trials.min(upto);
    (0..=top)
        .map(|j| {
            let (ones, zeros) = (j as f64, (trials - j) as f64);
            let ln_p = if ones == 0.0 { 0.0 } else { ones * p.ln() };
            let ln_q = if zeros == 0.0 { 0.0 } else { zeros * (-p).ln_1p() };
            ln_binomial(trials as u64, j as u64) + ln_p + ln_q
        })
        .collect()
}

/// Running log-sum of a log-pmf.
fn ln_cdf(ln_pmf: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(ln_pmf.len());
    let mut acc = f64::NEG_INFINITY;
    for &lp in ln_pmf {
        acc = log_sum_exp(&[acc, lp]);
        out.push(acc);
    }
    out
}

/// The same probability as [`conditional_overlap_prob_exact`] by direct
/// enumeration: every source `y` in the distortion ball (uniform) against
/// every codeword flip pattern `x` (i.i.d. `Ber(delta)` bits), counting
/// pairs with `d(x, y) <= floor(D n)`.
pub fn conditional_overlap_brute_force(n: usize, w: f64, c: u32, distortion: f64) -> Result<f64> {
    let (delta, k) = check_overlap_args(n, w, c, distortion)?;
    if n > BRUTE_FORCE_BUDGET {
        return Err(Error::BudgetExceeded {
            context: "overlap enumeration",
            requested: n,
            limit: BRUTE_FORCE_BUDGET,
        });
    }
    let ball: Vec<u32> = (0u32..1 << n).filter(|y| y.count_ones() as usize <= k).collect();
    let mut total = 0.0;
    for x in 0u32..1 << n {
        let ones = x.count_ones() as i32;
        let px = delta.powi(ones) * (1.0 - delta).powi(n as i32 - ones);
        let hits = ball.iter().filter(|&&y| (x ^ y).count_ones() as usize <= k).count();
        total += px * hits as f64;
    }
    Ok(total / ball.len() as f64)
}

/// Frequency test that codeword bits of a fixed weight-`w m` information
/// sequence are i.i.d. `Ber(delta(w; c))` over random generator columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InducedDistributionReport {
    pub m: usize,
    pub w: f64,
    pub c: usize,
    pub samples: usize,
    /// Hypothesized `delta` (true value plus any offset).
    pub delta: f64,
    pub observed_fraction: f64,
    pub marginal_chi2: f64,
    pub marginal_p: f64,
    pub pair_chi2: f64,
    pub pair_p: f64,
}

impl InducedDistributionReport {
    pub fn passed(&self, alpha: f64) -> bool {
        self.marginal_p >= alpha && self.pair_p >= alpha
    }
}

/// Samples `samples` two-column generators on `m` information bits and
/// encodes `z` = (first `round(w m)` bits set). The marginal test pools
/// both bits against `Ber(delta)` (1 dof); the pair test compares the
/// four joint cells with the product distribution (3 dof).
///
/// `delta_offset` shifts the hypothesized `delta`; a nonzero offset is a
/// negative control that should be rejected.
pub fn induced_distribution_check(
    m: usize,
    w: f64,
    c: usize,
    samples: usize,
    seed: u64,
    delta_offset: f64,
) -> Result<InducedDistributionReport> {
    check_closed("w", w, 0.0, 1.0, "[0, 1]")?;
    if m == 0 || samples == 0 {
        return Err(Error::InvalidParameter("need m >= 1 and samples >= 1".into()));
    }
    let weight = (w * m as f64).round() as usize;
    let mut z = BitVec::zeros(m);
    for i in 0..weight {
        z.set(i, true);
    }
    let delta = induced_weight(weight as f64 / m as f64, c as u32)? + delta_offset;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain("delta", delta, "(0, 1)"));
    }

    let cells: Vec<usize> = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let mut rng = trial_rng(seed, 0, s);
            let g = sample_ldgm(m, 2, c, rng.random())?;
            let cw = encode_codeword(&z, &g)?;
            Ok(usize::from(cw.get(0)) | usize::from(cw.get(1)) << 1)
        })
        .collect::<Result<_>>()?;
    let mut joint = [0usize; 4];
    for cell in cells {
        joint[cell] += 1;
    }

    let total_bits = 2.0 * samples as f64;
    let ones = (joint[1] + joint[2] + 2 * joint[3]) as f64;
    let marginal_chi2 = chi2(&[total_bits - ones, ones], &[1.0 - delta, delta], total_bits);
    let q = 1.0 - delta;
    let pair_probs = [q * q, delta * q, q * delta, delta * delta];
    let observed: Vec<f64> = joint.iter().map(|&x| x as f64).collect();
    let pair_chi2 = chi2(&observed, &pair_probs, samples as f64);

    Ok(InducedDistributionReport {
        m,
        w,
        c,
        samples,
        delta,
        observed_fraction: ones / total_bits,
        marginal_chi2,
        marginal_p: chi2_sf(marginal_chi2, 1.0),
        pair_chi2,
        pair_p: chi2_sf(pair_chi2, 3.0),
    })
}

fn chi2(observed: &[f64], probs: &[f64], total: f64) -> f64 {
    observed
        .iter()
        .zip(probs)
        .map(|(o, p)| {
            let e = p * total;
            (o - e).powi(2) / e
        })
        .sum()
}

/// Upper tail of the chi-squared distribution.
pub fn chi2_sf(statistic: f64, dof: f64) -> f64 {
    ChiSquared::new(dof).expect("positive dof").sf(statistic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::big_f;

    #[test]
    fn first_moment_closed_cases() {
        assert_eq!(first_moment_exact(1, 2, 0.0).unwrap(), 0.5);
        assert_eq!(first_moment_exact(10, 10, 1.0).unwrap(), 1024.0);
        // 2^{-8} (1 + 16 + 120 + 560 + 1820)
        let v = first_moment_exact(8, 16, 0.25).unwrap();
        assert!((v - 2517.0 / 256.0).abs() < 1e-12);
        let fm = first_moment_with_bounds(8, 16, 0.25).unwrap();
        assert!(fm.within_bounds());
    }

    #[test]
    fn sandwich_holds_on_grid() {
        for n in 1..=64 {
            for m in [1, n / 2 + 1, n] {
                for i in 0..=20 {
                    let d = 0.5 * f64::from(i) / 20.0;
                    let fm = first_moment_with_bounds(m, n, d).unwrap();
                    assert!(fm.within_bounds(), "m={m} n={n} D={d}: {fm:?}");
                }
            }
        }
    }

    #[test]
    fn large_n_uses_log_space() {
        let a = first_moment_exact(100, 200, 0.2).unwrap();
        let direct = log2_ball_size(200, 40);
        let exact_ln: Vec<f64> = (0..=40).map(|s| ln_binomial(200, s)).collect();
        assert!((direct - log_sum_exp(&exact_ln) / std::f64::consts::LN_2).abs() < 1e-9);
        assert!(a.is_finite() && a > 0.0);
    }

    #[test]
    fn overlap_at_half_weight_is_binomial_tail() {
        let n = 20;
        let k = 5;
        let p = conditional_overlap_prob_exact(n, 0.5, 3, 0.25).unwrap();
        let tail: f64 = (0..=k).map(|s| ln_binomial(20, s).exp()).sum::<f64>() / 2f64.powi(20);
        assert!((p - tail).abs() < 1e-13, "{p} vs {tail}");
    }

    #[test]
    fn overlap_matches_enumeration() {
        let exact = conditional_overlap_prob_exact(10, 0.2, 3, 0.2).unwrap();
        let brute = conditional_overlap_brute_force(10, 0.2, 3, 0.2).unwrap();
        assert!((exact - brute).abs() < 1e-12, "{exact} vs {brute}");
        assert!((exact - 0.119_538_570_026_572_62).abs() < 1e-12);
    }

    #[test]
    fn overlap_exponent_approaches_f_from_below() {
        let delta = induced_weight(0.2, 3).unwrap();
        let f = big_f(0.2, delta).unwrap();
        let exponent = conditional_overlap_log2(400, 0.2, 3, 0.2).unwrap() / 400.0;
        assert!(exponent <= f + (400f64).log2() / 400.0);
        assert!(f - exponent < 0.02, "{exponent} vs {f}");
    }

    #[test]
    fn overlap_rejects_fractional_weight() {
        assert!(conditional_overlap_prob_exact(10, 0.25, 3, 0.2).is_err());
    }

    #[test]
    fn saturated_second_moment_is_exact() {
        let r = second_moment_decomposition_check(4, 8, 3, 1.0, 20, 1).unwrap();
        assert_eq!(r.direct, 256.0);
        assert_eq!(r.decomposed, 256.0);
        assert_eq!(r.status, CheckStatus::Agree);
    }

    #[test]
    fn induced_distribution_small_run() {
        let r = induced_distribution_check(200, 0.3, 3, 4000, 5, 0.0).unwrap();
        assert!(r.passed(1e-3), "{r:?}");
        let off = induced_distribution_check(200, 0.3, 3, 4000, 5, 0.05).unwrap();
        assert!(!off.passed(1e-3), "{off:?}");
    }
}
