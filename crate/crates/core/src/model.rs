//! Channels, schemes, GDoF reports and decomposition maps.
//!
//! User indices are 0-based in the API and 1-based in files and error
//! messages.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// A directed cross link: `transmitter` interferes at `receiver`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Link {
    pub receiver: usize,
    pub transmitter: usize,
}

impl Link {
    pub fn new(receiver: usize, transmitter: usize) -> Self {
        Self { receiver, transmitter }
    }
}

/// K x K strength exponents; `alpha[k][i]` is the level of transmitter `i`
/// at receiver `k`. Zero means the link is absent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChannelMatrix {
    alpha: Vec<Vec<Rational>>,
}

impl ChannelMatrix {
    /// Clamps negative entries to zero and rejects non-square input or a
    /// user without a direct link.
    pub fn new(raw: Vec<Vec<Rational>>) -> Result<Self> {
        let k = raw.len();
        if k == 0 {
            return Err(Error::NonSquare { row: 0, len: 0, expected: 1 });
        }
        let mut alpha = raw;
        for (row_idx, row) in alpha.iter_mut().enumerate() {
            if row.len() != k {
                return Err(Error::NonSquare { row: row_idx + 1, len: row.len(), expected: k });
            }
            for entry in row.iter_mut() {
                if entry.is_negative() {
                    *entry = Rational::zero();
                }
            }
        }
        if let Some(user) = (0..k).find(|&u| !alpha[u][u].is_positive()) {
            return Err(Error::ZeroDirectLink(user + 1));
        }
        Ok(Self { alpha })
    }

    pub fn k(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self, receiver: usize, transmitter: usize) -> &Rational {
        &self.alpha[receiver][transmitter]
    }

    pub fn direct(&self, user: usize) -> &Rational {
        &self.alpha[user][user]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.alpha
    }

    pub fn is_present(&self, link: Link) -> bool {
        link.receiver != link.transmitter && self.alpha[link.receiver][link.transmitter].is_positive()
    }

    /// Present cross links in row-major (receiver, transmitter) order.
    pub fn cross_links(&self) -> Vec<Link> {
        let k = self.k();
        (0..k)
            .flat_map(|r| (0..k).map(move |t| Link::new(r, t)))
            .filter(|&l| self.is_present(l))
            .collect()
    }

    /// Copy of the channel with the given cross links removed.
    pub fn without_links(&self, links: impl IntoIterator<Item = Link>) -> Self {
        let mut alpha = self.alpha.clone();
        for link in links {
            if link.receiver != link.transmitter {
                alpha[link.receiver][link.transmitter] = Rational::zero();
            }
        }
        Self { alpha }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Stream {
    pub user: usize,
    pub vector: Vec<Rational>,
    /// Transmit power is P^power_exp; never positive.
    pub power_exp: Rational,
}

/// Beamforming vectors over an `n`-use block plus per-stream power exponents.
/// Within a user, stream order is the successive-cancellation decoding order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scheme {
    pub n: usize,
    pub streams: Vec<Stream>,
}

impl Scheme {
    pub fn new(n: usize, streams: Vec<Stream>) -> Self {
        Self { n, streams }
    }

    pub fn streams_of(&self, user: usize) -> impl Iterator<Item = &Stream> + '_ {
        self.streams.iter().filter(move |s| s.user == user)
    }

    /// b_k for every user of a `k_users`-user channel.
    pub fn stream_counts(&self, k_users: usize) -> Vec<usize> {
        let mut counts = vec![0; k_users];
        for s in &self.streams {
            if s.user < k_users {
                counts[s.user] += 1;
            }
        }
        counts
    }
}

/// Checks `scheme` against `channel` and returns it with every vector scaled
/// so that its first nonzero coordinate is 1.
pub fn validate_scheme(scheme: &Scheme, channel: &ChannelMatrix) -> Result<Scheme> {
    if scheme.n == 0 {
        return Err(Error::DimensionMismatch("block length n must be at least 1".into()));
    }
    let k = channel.k();
    let mut seen = vec![0usize; k];
    let mut streams = Vec::with_capacity(scheme.streams.len());
    for s in &scheme.streams {
        if s.user >= k {
            return Err(Error::UserOutOfRange { user: s.user + 1, k });
        }
        seen[s.user] += 1;
        let stream_no = seen[s.user];
        if s.vector.len() != scheme.n {
            return Err(Error::DimensionMismatch(format!(
                "stream {stream_no} of user {} has {} coordinates, block length is {}",
                s.user + 1,
                s.vector.len(),
                scheme.n
            )));
        }
        if s.power_exp.is_positive() {
            return Err(Error::PositivePowerExponent {
                user: s.user + 1,
                stream: stream_no,
                value: format_rational(&s.power_exp),
            });
        }
        let lead = s
            .vector
            .iter()
            .find(|x| !x.is_zero())
            .cloned()
            .ok_or(Error::EmptyVector { user: s.user + 1, stream: stream_no })?;
        let vector = if lead.is_one() {
            s.vector.clone()
        } else {
            s.vector.iter().map(|x| x / &lead).collect()
        };
        streams.push(Stream { user: s.user, vector, power_exp: s.power_exp.clone() });
    }
    Ok(Scheme { n: scheme.n, streams })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UserGdof {
    /// Exponent of det(Q^D + Q^{N+I}).
    pub d_prime: Rational,
    /// Exponent of det(Q^{N+I}).
    pub d_dprime: Rational,
    pub gdof: Rational,
    /// Per-stream successive-cancellation GDoF, in decoding order.
    pub streams: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GdofReport {
    pub n: usize,
    pub users: Vec<UserGdof>,
}

impl GdofReport {
    pub fn gdof(&self) -> Vec<Rational> {
        self.users.iter().map(|u| u.gdof.clone()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Tim,
    Tin,
}

/// Assignment of every present cross link to exactly one component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DecompositionMap {
    tags: BTreeMap<Link, Component>,
}

impl DecompositionMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_tags(tags: impl IntoIterator<Item = (Link, Component)>) -> Self {
        Self { tags: tags.into_iter().collect() }
    }

    /// Every present link of `channel` mapped to `component`.
    pub fn uniform(channel: &ChannelMatrix, component: Component) -> Self {
        Self::from_tags(channel.cross_links().into_iter().map(|l| (l, component)))
    }

    /// Links at strength `>= threshold` go to TIM, the rest to TIN.
    pub fn threshold(channel: &ChannelMatrix, threshold: &Rational) -> Self {
        Self::from_tags(channel.cross_links().into_iter().map(|l| {
            let tag = if channel.alpha(l.receiver, l.transmitter) >= threshold {
                Component::Tim
            } else {
                Component::Tin
            };
            (l, tag)
        }))
    }

    /// Bit `j` of `mask` set means the `j`-th cross link (row-major order) is TIM.
    pub fn from_bitmask(channel: &ChannelMatrix, mask: u64) -> Self {
        Self::from_tags(channel.cross_links().into_iter().enumerate().map(|(j, l)| {
            let tag = if j < 64 && mask >> j & 1 == 1 { Component::Tim } else { Component::Tin };
            (l, tag)
        }))
    }

    pub fn bitmask(&self) -> u64 {
        self.tags
            .values()
            .enumerate()
            .filter(|(j, &c)| *j < 64 && c == Component::Tim)
            .fold(0u64, |m, (j, _)| m | 1 << j)
    }

    pub fn get(&self, link: Link) -> Option<Component> {
        self.tags.get(&link).copied()
    }

    pub fn set(&mut self, link: Link, component: Component) {
        self.tags.insert(link, component);
    }

    pub fn iter(&self) -> impl Iterator<Item = (Link, Component)> + '_ {
        self.tags.iter().map(|(&l, &c)| (l, c))
    }

    pub fn links(&self, component: Component) -> Vec<Link> {
        self.iter().filter(|&(_, c)| c == component).map(|(l, _)| l).collect()
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    /// Fails unless the tagged links are exactly the present cross links of `channel`.
    pub fn check(&self, channel: &ChannelMatrix) -> Result<()> {
        let k = channel.k();
        for link in self.tags.keys() {
            if link.receiver >= k || link.transmitter >= k {
                return Err(Error::MapMismatch(format!(
                    "link ({}, {}) outside a {k}-user channel",
                    link.receiver + 1,
                    link.transmitter + 1
                )));
            }
            if !channel.is_present(*link) {
                return Err(Error::MapMismatch(format!(
                    "link ({}, {}) is not a present cross link",
                    link.receiver + 1,
                    link.transmitter + 1
                )));
            }
        }
        if let Some(missing) = channel.cross_links().into_iter().find(|l| !self.tags.contains_key(l)) {
            return Err(Error::MapMismatch(format!(
                "link ({}, {}) carries no tag",
                missing.receiver + 1,
                missing.transmitter + 1
            )));
        }
        Ok(())
    }
}
