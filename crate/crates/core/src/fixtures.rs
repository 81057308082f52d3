//! Named reference instances: the 5-user multilevel topology with its two
//! decompositions and the two explicit schemes that achieve 3/10 and 1/3.

use crate::model::{ChannelMatrix, Component, DecompositionMap, Link, Scheme, Stream};
use crate::rational::{int, rat, Rational};

/// Strength-1 cross links as 1-based (receiver, transmitter) pairs.
pub const GOLDEN_STRONG_LINKS: [(usize, usize); 6] = [(1, 4), (2, 1), (3, 2), (3, 5), (4, 1), (5, 4)];
/// Strength-1/2 cross links as 1-based (receiver, transmitter) pairs.
pub const GOLDEN_WEAK_LINKS: [(usize, usize); 5] = [(1, 2), (2, 3), (2, 5), (3, 4), (4, 5)];
/// The medium link moved from TIN to TIM in the improved decomposition.
pub const GOLDEN_MOVED_LINK: (usize, usize) = (2, 3);

fn link((r, t): (usize, usize)) -> Link {
    Link::new(r - 1, t - 1)
}

pub fn golden_topology() -> ChannelMatrix {
    let mut alpha = vec![vec![int(0); 5]; 5];
    for (u, row) in alpha.iter_mut().enumerate() {
        row[u] = int(1);
    }
    for (r, t) in GOLDEN_STRONG_LINKS {
        alpha[r - 1][t - 1] = int(1);
    }
    for (r, t) in GOLDEN_WEAK_LINKS {
        alpha[r - 1][t - 1] = rat(1, 2);
    }
    ChannelMatrix::new(alpha).expect("golden topology is valid")
}

/// Strong links to TIM, weak links to TIN.
pub fn baseline_map() -> DecompositionMap {
    DecompositionMap::from_tags(
        GOLDEN_STRONG_LINKS
            .into_iter()
            .map(|l| (link(l), Component::Tim))
            .chain(GOLDEN_WEAK_LINKS.into_iter().map(|l| (link(l), Component::Tin))),
    )
}

/// The baseline map with the (2 <- 3) link moved to TIM.
pub fn improved_map() -> DecompositionMap {
    let mut m = baseline_map();
    m.set(link(GOLDEN_MOVED_LINK), Component::Tim);
    m
}

fn two_dim_scheme(dirs: [[i64; 2]; 5], powers: [Rational; 5]) -> Scheme {
    let streams = dirs
        .into_iter()
        .zip(powers)
        .enumerate()
        .map(|(user, ([a, b], power_exp))| Stream { user, vector: vec![int(a), int(b)], power_exp })
        .collect();
    Scheme::new(2, streams)
}

/// Four directions in a 2-dim space, users 2 and 5 aligned, powers
/// P^0, P^-0.1, ..., P^-0.4.
pub fn explicit_baseline_scheme() -> Scheme {
    two_dim_scheme(
        [[1, 0], [0, 1], [1, 1], [1, -1], [0, 1]],
        [int(0), rat(-1, 10), rat(-1, 5), rat(-3, 10), rat(-2, 5)],
    )
}

/// Three directions, users 1/3 and 2/5 aligned, powers (0, -1/6, 0, -1/6, -1/3).
pub fn explicit_improved_scheme() -> Scheme {
    two_dim_scheme(
        [[1, 0], [0, 1], [1, 0], [1, 1], [0, 1]],
        [int(0), rat(-1, 6), int(0), rat(-1, 6), rat(-1, 3)],
    )
}

pub fn single_user() -> ChannelMatrix {
    ChannelMatrix::new(vec![vec![int(1)]]).expect("valid")
}

pub fn single_user_scheme() -> Scheme {
    Scheme::new(1, vec![Stream { user: 0, vector: vec![int(1)], power_exp: int(0) }])
}
