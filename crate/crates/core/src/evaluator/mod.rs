//! GDoF of a linear scheme over a channel.
//!
//! At receiver `k` every stream `(i, l)` arrives with exponent
//! `alpha[k][i] + r[i][l]`. The GDoF is the difference between the log-det
//! exponents of the desired-plus-interference terms and the
//! interference-only terms, divided by the block length.

mod basis;
pub mod oracle;

use num_traits::Zero;

pub use basis::{log_det_exponent, SourceLabel, WeightedVector, WeightedVectorSet};

use crate::error::{Error, Result};
use crate::model::{validate_scheme, ChannelMatrix, GdofReport, Scheme, UserGdof};
use crate::rational::Rational;

/// The `d'`/`d''` split of one user's GDoF.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GdofSplit {
    pub d_prime: Rational,
    pub d_dprime: Rational,
    pub gdof: Rational,
}

fn check_user(channel: &ChannelMatrix, k: usize) -> Result<()> {
    if k >= channel.k() {
        return Err(Error::UserOutOfRange { user: k + 1, k: channel.k() });
    }
    Ok(())
}

/// Receiver `k`'s terms: all interference plus the user's own streams from
/// decoding position `first_own` onwards.
fn receiver_set(scheme: &Scheme, channel: &ChannelMatrix, k: usize, first_own: usize) -> Result<WeightedVectorSet> {
    let mut set = WeightedVectorSet::new(scheme.n);
    let mut per_user = vec![0usize; channel.k()];
    for s in &scheme.streams {
        check_user(channel, s.user)?;
        let l = per_user[s.user];
        per_user[s.user] += 1;
        if s.user == k && l < first_own {
            continue;
        }
        let kappa = channel.alpha(k, s.user) + &s.power_exp;
        set.push(s.vector.clone(), kappa, (s.user, l))?;
    }
    Ok(set)
}

pub fn user_gdof(scheme: &Scheme, channel: &ChannelMatrix, k: usize) -> Result<GdofSplit> {
    check_user(channel, k)?;
    let d_prime = log_det_exponent(&receiver_set(scheme, channel, k, 0)?);
    let d_dprime = log_det_exponent(&receiver_set(scheme, channel, k, usize::MAX)?);
    assert!(d_prime >= d_dprime, "interference terms are a subset of all terms");
    let gdof = (&d_prime - &d_dprime) / Rational::from_integer(scheme.n.into());
    Ok(GdofSplit { d_prime, d_dprime, gdof })
}

/// Per-stream GDoF under decode-and-subtract in the scheme's stream order.
pub fn successive_gdof(scheme: &Scheme, channel: &ChannelMatrix, k: usize) -> Result<Vec<Rational>> {
    check_user(channel, k)?;
    let b_k = scheme.streams_of(k).count();
    let n = Rational::from_integer(scheme.n.into());
    let exponents = (0..=b_k)
        .map(|l| receiver_set(scheme, channel, k, l).map(|set| log_det_exponent(&set)))
        .collect::<Result<Vec<_>>>()?;
    Ok(exponents.windows(2).map(|w| (&w[0] - &w[1]) / &n).collect())
}

/// Validates the scheme, then reports every user's split and per-stream breakdown.
pub fn evaluate(scheme: &Scheme, channel: &ChannelMatrix) -> Result<GdofReport> {
    let scheme = validate_scheme(scheme, channel)?;
    let users = (0..channel.k())
        .map(|k| {
            let split = user_gdof(&scheme, channel, k)?;
            let streams = successive_gdof(&scheme, channel, k)?;
            debug_assert_eq!(streams.iter().fold(Rational::zero(), |a, x| a + x), split.gdof);
            Ok(UserGdof { d_prime: split.d_prime, d_dprime: split.d_dprime, gdof: split.gdof, streams })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GdofReport { n: scheme.n, users })
}

/// Per-user GDoF only, skipping validation and the stream breakdown.
pub fn gdof_tuple(scheme: &Scheme, channel: &ChannelMatrix) -> Result<Vec<Rational>> {
    (0..channel.k()).map(|k| user_gdof(scheme, channel, k).map(|s| s.gdof)).collect()
}
