//! TIM-TIN decompositions: every cross link goes to exactly one of the two
//! components, each component is solved on its own, and the combined scheme
//! uses the TIM directions at the TIN power levels. Each user is claimed
//! `d_TIN,k * d_TIM,k`; the claim is then checked by evaluating the combined
//! scheme on the original channel.

use std::collections::{BTreeSet, HashSet};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::evaluator::gdof_tuple;
use crate::model::{validate_scheme, ChannelMatrix, Component, DecompositionMap, Scheme, Stream};
use crate::par::{self, Execution};
use crate::rational::Rational;
use crate::tim::{tim_solve, TimMethod, TimSolution, TimTopology};
use crate::tin::{tin_feasible, tin_gdof, tin_symmetric, TinSolution, TinTarget};

pub const DEFAULT_EXHAUSTIVE_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub tin_channel: ChannelMatrix,
    pub tim_topology: TimTopology,
}

pub fn split(channel: &ChannelMatrix, map: &DecompositionMap) -> Result<Split> {
    map.check(channel)?;
    let tim_links = map.links(Component::Tim);
    Ok(Split {
        tin_channel: channel.without_links(tim_links.iter().copied()),
        tim_topology: TimTopology::new(channel.k(), tim_links)?,
    })
}

/// How the TIN component's per-user fractions are chosen.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum TinObjective {
    /// Maximize the common value; each user then gets what the resulting
    /// power levels give it, which is at least the common value.
    #[default]
    Symmetric,
    /// Reach the given per-user profile.
    Targets(Vec<Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionResult {
    pub map: DecompositionMap,
    pub tin_fractions: Vec<Rational>,
    pub tim_fractions: Vec<Rational>,
    pub products: Vec<Rational>,
    pub tin_power: Vec<Rational>,
    pub tim_method: TimMethod,
    pub scheme: Scheme,
    /// GDoF of `scheme` on the original channel.
    pub verified: Vec<Rational>,
    /// `verified >= products` for every user.
    pub verdict: bool,
}

impl DecompositionResult {
    /// Smallest verified per-user value.
    pub fn symmetric_value(&self) -> Rational {
        self.verified.iter().min().cloned().unwrap_or_default()
    }
}

/// One stream per TIM direction, each at the user's TIN power exponent.
pub fn synthesize_scheme(tin: &TinSolution, tim: &TimSolution, channel: &ChannelMatrix) -> Result<Scheme> {
    let r = tin.r.as_ref().filter(|_| tin.feasible).ok_or(Error::InfeasibleTin)?;
    if r.len() != channel.k() || tim.directions.len() != channel.k() {
        return Err(Error::DimensionMismatch(format!(
            "solutions cover {} / {} users, channel has {}",
            r.len(),
            tim.directions.len(),
            channel.k()
        )));
    }
    let streams = tim
        .directions
        .iter()
        .enumerate()
        .flat_map(|(user, dirs)| {
            dirs.iter().map(move |v| Stream { user, vector: v.clone(), power_exp: r[user].clone() })
        })
        .collect();
    validate_scheme(&Scheme::new(tim.n, streams), channel)
}

pub fn evaluate_map(channel: &ChannelMatrix, map: &DecompositionMap) -> Result<DecompositionResult> {
    evaluate_map_with(channel, map, &TinObjective::Symmetric)
}

pub fn evaluate_map_with(
    channel: &ChannelMatrix,
    map: &DecompositionMap,
    objective: &TinObjective,
) -> Result<DecompositionResult> {
    let parts = split(channel, map)?;
    let tin = match objective {
        TinObjective::Symmetric => tin_symmetric(&parts.tin_channel).solution,
        TinObjective::Targets(d) => {
            let sol = tin_feasible(&parts.tin_channel, &TinTarget::new(d.clone()))?;
            if !sol.feasible {
                return Err(Error::InfeasibleTin);
            }
            sol
        }
    };
    let tin_power = tin.r.clone().ok_or(Error::InfeasibleTin)?;
    let tin_fractions = tin_gdof(&parts.tin_channel, &tin_power);
    let tim = tim_solve(&parts.tim_topology);
    let products: Vec<Rational> = tin_fractions.iter().zip(&tim.fractions).map(|(a, b)| a * b).collect();
    let scheme = synthesize_scheme(&tin, &tim, channel)?;
    let verified = gdof_tuple(&scheme, channel)?;
    let verdict = verified.iter().zip(&products).all(|(v, p)| v >= p);
    Ok(DecompositionResult {
        map: map.clone(),
        tin_fractions,
        tim_fractions: tim.fractions,
        products,
        tin_power,
        tim_method: tim.method,
        scheme,
        verified,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Enumerate every map when the channel has at most this many cross links.
    pub exhaustive_cap: usize,
    pub execution: Execution,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP, execution: Execution::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub exhaustive: bool,
    /// Every evaluated map, ordered by TIM bitmask.
    pub results: Vec<DecompositionResult>,
    /// Indices into `results` of the Pareto-optimal verified tuples.
    pub frontier: Vec<usize>,
}

impl SearchReport {
    pub fn frontier_results(&self) -> impl Iterator<Item = &DecompositionResult> + '_ {
        self.frontier.iter().map(|&i| &self.results[i])
    }

    pub fn failures(&self) -> impl Iterator<Item = &DecompositionResult> + '_ {
        self.results.iter().filter(|r| !r.verdict)
    }
}

/// Maps of the threshold family: for every distinct cross strength, links at
/// least that strong go to TIM; plus all-TIN and every single-link flip.
pub fn threshold_masks(channel: &ChannelMatrix) -> BTreeSet<u64> {
    let links = channel.cross_links();
    let strengths: BTreeSet<&Rational> = links.iter().map(|l| channel.alpha(l.receiver, l.transmitter)).collect();
    let mut base = vec![0u64];
    base.extend(strengths.into_iter().map(|tau| DecompositionMap::threshold(channel, tau).bitmask()));
    let mut masks: BTreeSet<u64> = base.iter().copied().collect();
    for m in base {
        masks.extend((0..links.len()).map(|j| m ^ 1 << j));
    }
    masks
}

pub fn search(channel: &ChannelMatrix, options: &SearchOptions) -> Result<SearchReport> {
    let link_count = channel.cross_links().len();
    if link_count > 64 {
        return Err(Error::InvalidArgument(format!("{link_count} cross links exceed the 64-link map encoding")));
    }
    let exhaustive = link_count <= options.exhaustive_cap;
    let masks: Vec<u64> = if exhaustive {
        (0..1u64 << link_count).collect()
    } else {
        threshold_masks(channel).into_iter().collect()
    };
    let results = par::map_with(options.execution, &masks, |&mask| {
        evaluate_map(channel, &DecompositionMap::from_bitmask(channel, mask))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let frontier = pareto_frontier(&results);
    Ok(SearchReport { exhaustive, results, frontier })
}

fn dominates(a: &[Rational], b: &[Rational]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y) && a != b
}

/// Indices of verified results whose tuples no other verified tuple
/// dominates; among equal tuples the first index is kept.
fn pareto_frontier(results: &[DecompositionResult]) -> Vec<usize> {
    let mut seen: HashSet<&[Rational]> = HashSet::new();
    let candidates: Vec<usize> = (0..results.len())
        .filter(|&i| results[i].verdict && seen.insert(&results[i].verified))
        .collect();
    candidates
        .iter()
        .copied()
        .filter(|&i| !candidates.iter().any(|&j| dominates(&results[j].verified, &results[i].verified)))
        .collect()
}

/// Weighted average of GDoF tuples.
pub fn time_share(tuples: &[Vec<Rational>], weights: &[Rational]) -> Result<Vec<Rational>> {
    if tuples.is_empty() || tuples.len() != weights.len() {
        return Err(Error::WeightMismatch(format!("{} tuples, {} weights", tuples.len(), weights.len())));
    }
    if weights.iter().any(Signed::is_negative) {
        return Err(Error::WeightMismatch("weights must be nonnegative".into()));
    }
    if weights.iter().fold(Rational::zero(), |a, w| a + w) != Rational::one() {
        return Err(Error::WeightMismatch("weights must sum to 1".into()));
    }
    let width = tuples[0].len();
    if tuples.iter().any(|t| t.len() != width) {
        return Err(Error::WeightMismatch("tuples differ in length".into()));
    }
    Ok((0..width)
        .map(|k| tuples.iter().zip(weights).fold(Rational::zero(), |acc, (t, w)| acc + &t[k] * w))
        .collect())
}
