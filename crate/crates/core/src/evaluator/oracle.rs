//! Finite-SNR rates in floating point, used to cross-check exact GDoF values.
//!
//! Covariances are formed from unit-norm beamformers with random channel
//! phases and their log-determinants are taken through a Cholesky factor.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{ChannelMatrix, Scheme};
use crate::par;
use crate::rational::to_f64;

/// Largest SNR accepted; beyond this the covariances are too ill-conditioned
/// for double precision.
pub const MAX_POWER: f64 = 1e12;
pub const DEFAULT_SEED: u64 = 0;

fn check_power(p: f64) -> Result<()> {
    if !(p > 1.0 && p <= MAX_POWER) {
        return Err(Error::InvalidArgument(format!("SNR P must lie in (1, {MAX_POWER:e}], got {p}")));
    }
    Ok(())
}

/// theta[k][i], uniform on [0, 2pi), drawn row-major from `seed`.
pub fn draw_phases(k_users: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k_users)
        .map(|_| (0..k_users).map(|_| rng.gen::<f64>() * TAU).collect())
        .collect()
}

struct FloatStream {
    user: usize,
    index: usize,
    unit: Vec<f64>,
    power_exp: f64,
}

fn float_streams(scheme: &Scheme, channel: &ChannelMatrix) -> Result<Vec<FloatStream>> {
    let mut per_user = vec![0usize; channel.k()];
    scheme
        .streams
        .iter()
        .map(|s| {
            if s.user >= channel.k() {
                return Err(Error::UserOutOfRange { user: s.user + 1, k: channel.k() });
            }
            if s.vector.len() != scheme.n {
                return Err(Error::DimensionMismatch(format!(
                    "stream of user {} has {} coordinates, block length is {}",
                    s.user + 1,
                    s.vector.len(),
                    scheme.n
                )));
            }
            let v: Vec<f64> = s.vector.iter().map(to_f64).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::EmptyVector { user: s.user + 1, stream: per_user[s.user] + 1 });
            }
            let index = per_user[s.user];
            per_user[s.user] += 1;
            Ok(FloatStream {
                user: s.user,
                index,
                unit: v.into_iter().map(|x| x / norm).collect(),
                power_exp: to_f64(&s.power_exp),
            })
        })
        .collect()
}

/// log2 det(I + sum of selected rank-one terms) at receiver `k`.
fn log2_det(
    n: usize,
    streams: &[FloatStream],
    channel: &[Vec<f64>],
    phases: &[Vec<f64>],
    p: f64,
    k: usize,
    include: impl Fn(&FloatStream) -> bool,
) -> Result<f64> {
    let mut q = DMatrix::<Complex64>::identity(n, n);
    for s in streams.iter().filter(|s| include(s)) {
        let gain = p.powf(channel[k][s.user] + s.power_exp).sqrt();
        let h: Vec<Complex64> = s
            .unit
            .iter()
            .map(|&x| Complex64::from_polar(gain * x, phases[k][s.user]))
            .collect();
        for r in 0..n {
            for c in 0..n {
                q[(r, c)] += h[r] * h[c].conj();
            }
        }
    }
    let chol = q
        .cholesky()
        .ok_or_else(|| Error::NumericalFailure(format!("covariance at receiver {} is not positive definite", k + 1)))?;
    let l = chol.l();
    let mut total = 0.0;
    for i in 0..n {
        let d = l[(i, i)].re;
        if !d.is_finite() || d <= 0.0 {
            return Err(Error::NumericalFailure(format!("degenerate Cholesky pivot at receiver {}", k + 1)));
        }
        total += 2.0 * d.log2();
    }
    Ok(total)
}

struct Prepared {
    n: usize,
    streams: Vec<FloatStream>,
    alpha: Vec<Vec<f64>>,
    phases: Vec<Vec<f64>>,
}

fn prepare(scheme: &Scheme, channel: &ChannelMatrix, seed: u64) -> Result<Prepared> {
    Ok(Prepared {
        n: scheme.n,
        streams: float_streams(scheme, channel)?,
        alpha: channel.rows().iter().map(|row| row.iter().map(to_f64).collect()).collect(),
        phases: draw_phases(channel.k(), seed),
    })
}

impl Prepared {
    fn rate(&self, p: f64, k: usize) -> Result<f64> {
        let all = log2_det(self.n, &self.streams, &self.alpha, &self.phases, p, k, |_| true)?;
        let noise = log2_det(self.n, &self.streams, &self.alpha, &self.phases, p, k, |s| s.user != k)?;
        Ok((all - noise) / self.n as f64)
    }

    fn stream_rates(&self, p: f64, k: usize) -> Result<Vec<f64>> {
        let b_k = self.streams.iter().filter(|s| s.user == k).count();
        let dets = (0..=b_k)
            .map(|first| {
                log2_det(self.n, &self.streams, &self.alpha, &self.phases, p, k, |s| {
                    s.user != k || s.index >= first
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(dets.windows(2).map(|w| (w[0] - w[1]) / self.n as f64).collect())
    }
}

/// Per-user rate in bits per channel use at SNR `p`.
pub fn finite_p_rate(scheme: &Scheme, channel: &ChannelMatrix, p: f64, seed: u64) -> Result<Vec<f64>> {
    check_power(p)?;
    let prep = prepare(scheme, channel, seed)?;
    (0..channel.k()).map(|k| prep.rate(p, k)).collect()
}

/// Chain-rule terms: for each user, the conditional rate of each stream
/// given the streams decoded before it.
pub fn finite_p_stream_rates(scheme: &Scheme, channel: &ChannelMatrix, p: f64, seed: u64) -> Result<Vec<Vec<f64>>> {
    check_power(p)?;
    let prep = prepare(scheme, channel, seed)?;
    (0..channel.k()).map(|k| prep.stream_rates(p, k)).collect()
}

/// Finite-difference slope of each user's rate against log2 P, using the
/// same phase draw at both SNR points.
pub fn slope_estimate(
    scheme: &Scheme,
    channel: &ChannelMatrix,
    p_low: f64,
    p_high: f64,
    seed: u64,
) -> Result<Vec<f64>> {
    check_power(p_low)?;
    check_power(p_high)?;
    if p_low >= p_high {
        return Err(Error::InvalidArgument(format!("need P_low < P_high, got {p_low} and {p_high}")));
    }
    let prep = prepare(scheme, channel, seed)?;
    let span = p_high.log2() - p_low.log2();
    (0..channel.k())
        .map(|k| Ok((prep.rate(p_high, k)? - prep.rate(p_low, k)?) / span))
        .collect()
}

/// [`slope_estimate`] for several seeds, evaluated in parallel when enabled.
pub fn slope_estimates(
    scheme: &Scheme,
    channel: &ChannelMatrix,
    p_low: f64,
    p_high: f64,
    seeds: &[u64],
) -> Result<Vec<Vec<f64>>> {
    par::map(seeds, |&seed| slope_estimate(scheme, channel, p_low, p_high, seed))
        .into_iter()
        .collect()
}

/// True for each user when a strict majority of seeds put the slope within
/// `tol` of `expected[k]`.
pub fn majority_agrees(slopes_by_seed: &[Vec<f64>], expected: &[f64], tol: f64) -> Vec<bool> {
    (0..expected.len())
        .map(|k| {
            let hits = slopes_by_seed
                .iter()
                .filter(|slopes| (slopes[k] - expected[k]).abs() <= tol)
                .count();
            2 * hits > slopes_by_seed.len()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::gdof_tuple;
    use crate::fixtures;
    use crate::model::Stream;
    use crate::rational::{int, rat};

    #[test]
    fn single_user_closed_form() {
        let r = finite_p_rate(&fixtures::single_user_scheme(), &fixtures::single_user(), 1e6, 0).unwrap();
        assert!((r[0] - (1.0f64 + 1e6).log2()).abs() < 1e-9);
        assert!((r[0] - 19.93).abs() < 0.01);
        let s = slope_estimate(&fixtures::single_user_scheme(), &fixtures::single_user(), 1e6, 1e10, 0).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn signal_at_noise_floor_has_zero_slope() {
        let ch = fixtures::golden_topology();
        let mut s = fixtures::explicit_baseline_scheme();
        for st in &mut s.streams {
            st.power_exp = int(-1);
        }
        let slopes = slope_estimate(&s, &ch, 1e6, 1e10, 0).unwrap();
        assert!(slopes.iter().all(|x| x.abs() < 0.05), "{slopes:?}");
    }

    #[test]
    fn golden_schemes_converge() {
        let ch = fixtures::golden_topology();
        for s in [fixtures::explicit_baseline_scheme(), fixtures::explicit_improved_scheme()] {
            let exact: Vec<f64> = gdof_tuple(&s, &ch).unwrap().iter().map(to_f64).collect();
            let slopes = slope_estimate(&s, &ch, 1e6, 1e10, DEFAULT_SEED).unwrap();
            for (a, b) in slopes.iter().zip(&exact) {
                assert!((a - b).abs() <= 0.05, "{slopes:?} vs {exact:?}");
            }
        }
    }

    #[test]
    fn chain_rule_holds_at_finite_snr() {
        let ch = ChannelMatrix::new(vec![vec![int(1), rat(1, 2)], vec![rat(3, 4), int(1)]]).unwrap();
        let s = Scheme::new(
            2,
            vec![
                Stream { user: 0, vector: vec![int(1), int(0)], power_exp: int(0) },
                Stream { user: 0, vector: vec![int(1), int(1)], power_exp: rat(-1, 4) },
                Stream { user: 1, vector: vec![int(1), int(2)], power_exp: int(0) },
            ],
        );
        let total = finite_p_rate(&s, &ch, 1e8, 3).unwrap();
        let parts = finite_p_stream_rates(&s, &ch, 1e8, 3).unwrap();
        for (t, p) in total.iter().zip(&parts) {
            assert!((t - p.iter().sum::<f64>()).abs() < 1e-6);
        }
    }

    #[test]
    fn rejects_bad_snr() {
        let (s, ch) = (fixtures::single_user_scheme(), fixtures::single_user());
        assert!(finite_p_rate(&s, &ch, 1.0, 0).is_err());
        assert!(finite_p_rate(&s, &ch, 1e13, 0).is_err());
        assert!(slope_estimate(&s, &ch, 1e8, 1e6, 0).is_err());
    }

    #[test]
    fn phases_are_reproducible() {
        assert_eq!(draw_phases(3, 7), draw_phases(3, 7));
        assert_ne!(draw_phases(3, 7), draw_phases(3, 8));
        assert!(draw_phases(4, 0).iter().flatten().all(|&t| (0.0..TAU).contains(&t)));
    }

    #[test]
    fn majority_vote() {
        let slopes = vec![vec![0.30, 0.5], vec![0.31, 0.2], vec![0.9, 0.21]];
        assert_eq!(majority_agrees(&slopes, &[0.3, 0.2], 0.05), vec![true, true]);
        assert_eq!(majority_agrees(&slopes, &[0.9, 0.5], 0.05), vec![false, false]);
    }
}
