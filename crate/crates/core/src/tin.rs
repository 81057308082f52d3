//! Power control for treating interference as noise, single stream per user.
//!
//! With one use and one stream each, user `k` obtains
//! `max(0, alpha_kk + r_k - max(0, max_j (alpha_kj + r_j)))` over present
//! links `j`. Reaching a target `d_k > 0` is the set of difference constraints
//!
//! ```text
//! r_k <= 0
//! r_k >= d_k - alpha_kk
//! r_k - r_j >= d_k - alpha_kk + alpha_kj      for every present link (k, j)
//! ```
//!
//! solved as shortest paths from a zero-potential reference node. A negative
//! cycle certifies infeasibility.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::model::ChannelMatrix;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TinTarget {
    pub d: Vec<Rational>,
}

impl TinTarget {
    pub fn new(d: Vec<Rational>) -> Self {
        Self { d }
    }

    pub fn symmetric(k_users: usize, t: Rational) -> Self {
        Self { d: vec![t; k_users] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstraintNode {
    User(usize),
    /// The zero-potential node every exponent is measured against.
    Reference,
}

/// Cycle of the constraint graph whose total weight is negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NegativeCycle {
    pub nodes: Vec<ConstraintNode>,
    pub weight: Rational,
    /// Sum of the edge constants and the number of target terms along the
    /// cycle: `weight = constant - sum of the targets involved`.
    constant: Rational,
    target_terms: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TinSolution {
    pub feasible: bool,
    /// Componentwise-largest feasible power exponents, when feasible.
    pub r: Option<Vec<Rational>>,
    pub negative_cycle: Option<NegativeCycle>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricTin {
    pub d_sym: Rational,
    pub solution: TinSolution,
}

/// GDoF of each user with one stream at power exponent `r[k]` over one use.
pub fn tin_gdof(channel: &ChannelMatrix, r: &[Rational]) -> Vec<Rational> {
    let k_users = channel.k();
    (0..k_users)
        .map(|k| {
            let noise = (0..k_users)
                .filter(|&j| j != k && channel.alpha(k, j).is_positive())
                .map(|j| channel.alpha(k, j) + &r[j])
                .fold(Rational::zero(), |m, x| if x > m { x } else { m });
            let d = channel.direct(k) + &r[k] - noise;
            if d.is_negative() {
                Rational::zero()
            } else {
                d
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
struct Edge {
    from: usize,
    to: usize,
    constant: Rational,
    /// User whose target is subtracted from `constant`.
    target_of: Option<usize>,
}

struct ConstraintGraph {
    k_users: usize,
    edges: Vec<Edge>,
}

impl ConstraintGraph {
    /// Constraints for the users in `active`; users outside it ask for zero
    /// GDoF, which holds for any exponents.
    fn new(channel: &ChannelMatrix, active: &[bool]) -> Self {
        let k_users = channel.k();
        let reference = k_users;
        let mut edges = Vec::new();
        for k in 0..k_users {
            edges.push(Edge { from: reference, to: k, constant: Rational::zero(), target_of: None });
        }
        for k in (0..k_users).filter(|&k| active[k]) {
            let direct = channel.direct(k);
            edges.push(Edge { from: k, to: reference, constant: direct.clone(), target_of: Some(k) });
            for j in (0..k_users).filter(|&j| j != k && channel.alpha(k, j).is_positive()) {
                edges.push(Edge { from: k, to: j, constant: direct - channel.alpha(k, j), target_of: Some(k) });
            }
        }
        Self { k_users, edges }
    }

    fn node(&self, v: usize) -> ConstraintNode {
        if v == self.k_users {
            ConstraintNode::Reference
        } else {
            ConstraintNode::User(v)
        }
    }

    /// Bellman-Ford from the reference node.
    fn solve(&self, d: &[Rational]) -> TinSolution {
        let nodes = self.k_users + 1;
        let weights: Vec<Rational> = self
            .edges
            .iter()
            .map(|e| match e.target_of {
                Some(u) => &e.constant - &d[u],
                None => e.constant.clone(),
            })
            .collect();
        let mut dist: Vec<Option<Rational>> = vec![None; nodes];
        let mut pred: Vec<Option<usize>> = vec![None; nodes];
        dist[self.k_users] = Some(Rational::zero());
        let mut relaxed_last = None;
        for _ in 0..nodes {
            relaxed_last = None;
            for (idx, e) in self.edges.iter().enumerate() {
                let Some(du) = &dist[e.from] else { continue };
                let cand = du + &weights[idx];
                if dist[e.to].as_ref().is_none_or(|dv| cand < *dv) {
                    dist[e.to] = Some(cand);
                    pred[e.to] = Some(idx);
                    relaxed_last = Some(e.to);
                }
            }
            if relaxed_last.is_none() {
                break;
            }
        }
        match relaxed_last {
            None => TinSolution {
                feasible: true,
                r: Some(dist[..self.k_users].iter().map(|d| d.clone().unwrap_or_default()).collect()),
                negative_cycle: None,
            },
            Some(start) => TinSolution {
                feasible: false,
                r: None,
                negative_cycle: Some(self.extract_cycle(start, &pred, &weights)),
            },
        }
    }

    fn extract_cycle(&self, start: usize, pred: &[Option<usize>], weights: &[Rational]) -> NegativeCycle {
        // walking back `nodes` steps from a vertex relaxed in the last round lands on the cycle
        let mut v = start;
        for _ in 0..=self.k_users {
            v = self.edges[pred[v].expect("relaxed vertex has a predecessor")].from;
        }
        let mut edge_ids = Vec::new();
        let mut u = v;
        loop {
            let e = pred[u].expect("cycle vertex has a predecessor");
            edge_ids.push(e);
            u = self.edges[e].from;
            if u == v {
                break;
            }
        }
        edge_ids.reverse();
        let weight = edge_ids.iter().fold(Rational::zero(), |acc, &e| acc + &weights[e]);
        let constant = edge_ids.iter().fold(Rational::zero(), |acc, &e| acc + &self.edges[e].constant);
        let target_terms = edge_ids.iter().filter(|&&e| self.edges[e].target_of.is_some()).count();
        let nodes = edge_ids.iter().map(|&e| self.node(self.edges[e].from)).collect();
        NegativeCycle { nodes, weight, constant, target_terms }
    }
}

/// Decides whether power control alone reaches `target`, returning the
/// canonical exponents or a negative-cycle certificate.
pub fn tin_feasible(channel: &ChannelMatrix, target: &TinTarget) -> Result<TinSolution> {
    if target.d.len() != channel.k() {
        return Err(Error::InvalidArgument(format!(
            "{} targets for a {}-user channel",
            target.d.len(),
            channel.k()
        )));
    }
    if target.d.iter().any(Signed::is_negative) {
        return Err(Error::InvalidArgument("TIN targets must be nonnegative".into()));
    }
    let active: Vec<bool> = target.d.iter().map(Signed::is_positive).collect();
    Ok(ConstraintGraph::new(channel, &active).solve(&target.d))
}

/// Largest `t` such that every user reaches GDoF `t` simultaneously.
///
/// Starting from the upper bound `min_k alpha_kk`, each infeasible trial
/// yields a negative cycle `C`; the next trial is the value at which `C`
/// becomes tight. Trials decrease strictly over finitely many cycles and
/// the first feasible one is the exact optimum.
pub fn tin_symmetric(channel: &ChannelMatrix) -> SymmetricTin {
    let k_users = channel.k();
    let graph = ConstraintGraph::new(channel, &vec![true; k_users]);
    let mut t = (0..k_users)
        .map(|k| channel.direct(k).clone())
        .min()
        .expect("K >= 1");
    while t.is_positive() {
        let d = vec![t.clone(); k_users];
        let solution = graph.solve(&d);
        if solution.feasible {
            return SymmetricTin { d_sym: t, solution };
        }
        let cycle = solution.negative_cycle.expect("infeasible result carries a cycle");
        // every cycle leaves some user node through a target-carrying edge
        debug_assert!(cycle.target_terms > 0);
        let next = cycle.constant / Rational::from_integer(cycle.target_terms.into());
        debug_assert!(next < t);
        t = next;
    }
    let zero = Rational::zero();
    let solution = tin_feasible(channel, &TinTarget::symmetric(k_users, zero.clone())).expect("well-formed target");
    SymmetricTin { d_sym: zero, solution }
}
