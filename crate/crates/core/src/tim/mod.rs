//! Interference avoidance on a binary topology.
//!
//! Users are grouped into connected components of the conflict graph and
//! each component is solved on its own:
//!
//! * a user with no conflicts keeps the whole space (`full`);
//! * if no alignment component contains a conflict, every alignment
//!   component shares one direction `[1, t]` of a 2-dimensional space
//!   (`half_rate`);
//! * otherwise users share orthogonal slots by fractional coloring of the
//!   conflict graph (`coloring`).
//!
//! The per-component blocks are tiled to a common block length so that one
//! scheme realizes all fractions at once.

mod coloring;
mod graphs;

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

pub use coloring::{fractional_coloring, greedy_coloring, maximal_independent_sets, FractionalColoring, Schedule, EXACT_LIMIT};
pub use graphs::{build_graphs, TimGraphs, UserPair};

use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::model::{ChannelMatrix, Link, Scheme, Stream};
use crate::rational::{int, Rational};
use graphs::UnionFind;

/// Directed cross links of the avoidance component; all equally strong.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TimTopology {
    k: usize,
    links: BTreeSet<Link>,
}

impl TimTopology {
    pub fn new(k: usize, links: impl IntoIterator<Item = Link>) -> Result<Self> {
        let links: BTreeSet<Link> = links.into_iter().collect();
        for l in &links {
            if l.receiver >= k || l.transmitter >= k {
                return Err(Error::UserOutOfRange { user: l.receiver.max(l.transmitter) + 1, k });
            }
            if l.receiver == l.transmitter {
                return Err(Error::InvalidArgument(format!("self-link at user {}", l.receiver + 1)));
            }
        }
        Ok(Self { k, links })
    }

    /// Cross links of `channel` stronger than `threshold`.
    pub fn from_channel(channel: &ChannelMatrix, threshold: &Rational) -> Self {
        let links = channel
            .cross_links()
            .into_iter()
            .filter(|l| channel.alpha(l.receiver, l.transmitter) > threshold)
            .collect();
        Self { k: channel.k(), links }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn links(&self) -> &BTreeSet<Link> {
        &self.links
    }

    pub fn hears(&self, receiver: usize, transmitter: usize) -> bool {
        self.links.contains(&Link::new(receiver, transmitter))
    }

    /// Transmitters heard at `receiver`, ascending.
    pub fn interferers(&self, receiver: usize) -> impl Iterator<Item = usize> + '_ {
        self.links
            .range(Link::new(receiver, 0)..Link::new(receiver + 1, 0))
            .map(|l| l.transmitter)
    }

    /// Unit-strength channel: direct links and every TIM link at exponent 1.
    pub fn binary_channel(&self) -> ChannelMatrix {
        let mut alpha = vec![vec![Rational::zero(); self.k]; self.k];
        for (u, row) in alpha.iter_mut().enumerate() {
            row[u] = Rational::one();
        }
        for l in &self.links {
            alpha[l.receiver][l.transmitter] = Rational::one();
        }
        ChannelMatrix::new(alpha).expect("unit diagonal")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TimMethod {
    Full,
    HalfRate,
    Coloring,
}

impl TimMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            TimMethod::Full => "full",
            TimMethod::HalfRate => "half_rate",
            TimMethod::Coloring => "coloring",
        }
    }
}

impl fmt::Display for TimMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimSolution {
    /// Fraction of the interference-free space available to each user.
    pub fractions: Vec<Rational>,
    /// Least capable method used by any component.
    pub method: TimMethod,
    pub user_methods: Vec<TimMethod>,
    /// Block length shared by all users.
    pub n: usize,
    /// Beamforming directions of each user, `fractions[k] * n` of them.
    pub directions: Vec<Vec<Vec<Rational>>>,
}

impl TimSolution {
    /// One stream per direction, all at full power.
    pub fn unit_power_scheme(&self) -> Scheme {
        let streams = self
            .directions
            .iter()
            .enumerate()
            .flat_map(|(user, dirs)| {
                dirs.iter().map(move |v| Stream { user, vector: v.clone(), power_exp: Rational::zero() })
            })
            .collect();
        Scheme::new(self.n, streams)
    }
}

struct ComponentPlan {
    members: Vec<usize>,
    method: TimMethod,
    dim: usize,
    /// Directions within the component's own `dim`-dimensional block, per member.
    directions: Vec<Vec<Vec<Rational>>>,
}

fn unit(dim: usize, axis: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); dim];
    v[axis] = Rational::one();
    v
}

pub fn tim_solve(topo: &TimTopology) -> TimSolution {
    let k = topo.k();
    let graphs = build_graphs(topo);
    let mut conflict_uf = UnionFind::new(k);
    for &(a, b) in &graphs.conflict {
        conflict_uf.union(a, b);
    }
    let mut align_uf = UnionFind::new(k);
    for &(a, b) in &graphs.alignment {
        align_uf.union(a, b);
    }
    let all: Vec<usize> = (0..k).collect();
    let mut next_direction = 0i64;
    let plans: Vec<ComponentPlan> = conflict_uf
        .groups(&all)
        .into_iter()
        .map(|members| {
            if members.len() == 1 {
                return ComponentPlan { members, method: TimMethod::Full, dim: 1, directions: vec![vec![unit(1, 0)]] };
            }
            let align_groups = align_uf.groups(&members);
            let internal_conflict = align_groups.iter().any(|g| {
                g.iter().enumerate().any(|(a, &i)| g[a + 1..].iter().any(|&j| graphs.conflict.contains(&(i, j))))
            });
            if !internal_conflict {
                let mut directions = vec![Vec::new(); members.len()];
                for g in &align_groups {
                    let dir = vec![Rational::one(), int(next_direction)];
                    next_direction += 1;
                    for u in g {
                        let pos = members.iter().position(|m| m == u).expect("member");
                        directions[pos] = vec![dir.clone()];
                    }
                }
                return ComponentPlan { members, method: TimMethod::HalfRate, dim: 2, directions };
            }
            let adjacent = |a: usize, b: usize| graphs.conflict.contains(&(members[a].min(members[b]), members[a].max(members[b])));
            let schedule = if members.len() <= EXACT_LIMIT {
                fractional_coloring(members.len(), &adjacent).schedule(members.len())
            } else {
                greedy_coloring(members.len(), &adjacent)
            };
            let directions = schedule
                .assignment
                .iter()
                .map(|slots| slots.iter().map(|&s| unit(schedule.slots, s)).collect())
                .collect();
            ComponentPlan { members, method: TimMethod::Coloring, dim: schedule.slots, directions }
        })
        .collect();

    let n = plans.iter().fold(1usize, |acc, p| acc.lcm(&p.dim));
    let mut fractions = vec![Rational::zero(); k];
    let mut user_methods = vec![TimMethod::Full; k];
    let mut directions = vec![Vec::new(); k];
    for plan in &plans {
        let copies = n / plan.dim;
        for (pos, &u) in plan.members.iter().enumerate() {
            user_methods[u] = plan.method;
            for block in 0..copies {
                for d in &plan.directions[pos] {
                    let mut v = vec![Rational::zero(); n];
                    v[block * plan.dim..(block + 1) * plan.dim].clone_from_slice(d);
                    directions[u].push(v);
                }
            }
            fractions[u] = Rational::new(directions[u].len().into(), n.into());
        }
    }
    let method = user_methods.iter().copied().max().unwrap_or(TimMethod::Full);
    TimSolution { fractions, method, user_methods, n, directions }
}

/// Exact check that the directions deliver the claimed fractions: at every
/// receiver the desired directions are independent and meet the span of
/// the interfering directions only at zero.
pub fn verify_assignment(topo: &TimTopology, sol: &TimSolution) -> bool {
    (0..topo.k()).all(|k| {
        let desired = &sol.directions[k];
        if Rational::new(desired.len().into(), sol.n.into()) != sol.fractions[k] {
            return false;
        }
        let interference: Vec<Vec<Rational>> =
            topo.interferers(k).flat_map(|i| sol.directions[i].iter().cloned()).collect();
        let combined: Vec<Vec<Rational>> = desired.iter().cloned().chain(interference.iter().cloned()).collect();
        rank(sol.n, desired) == desired.len() && rank(sol.n, &combined) == desired.len() + rank(sol.n, &interference)
    })
}
