//! Orthogonal-access baselines on a conflict graph: exact fractional
//! coloring by linear programming over maximal independent sets, and a
//! greedy proper coloring for graphs too large to enumerate.

use num_traits::{One, Signed, Zero};

use crate::par;
use crate::rational::{common_denominator, Rational};

/// Graphs up to this many vertices get the exact fractional coloring.
pub const EXACT_LIMIT: usize = 12;

/// Slot schedule on a small graph with local vertex ids `0..m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    /// Number of orthogonal slots.
    pub slots: usize,
    /// Slots used by each vertex; neighbors never share a slot.
    pub assignment: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalColoring {
    pub chi: Rational,
    /// Maximal independent sets (as vertex bitmasks) with positive weight.
    pub weights: Vec<(u32, Rational)>,
}

fn adjacency_masks(m: usize, adjacent: &dyn Fn(usize, usize) -> bool) -> Vec<u32> {
    (0..m)
        .map(|v| (0..m).filter(|&u| u != v && adjacent(u, v)).fold(0u32, |acc, u| acc | 1 << u))
        .collect()
}

/// All maximal independent sets as bitmasks, in increasing mask order.
pub fn maximal_independent_sets(m: usize, adjacent: &dyn Fn(usize, usize) -> bool) -> Vec<u32> {
    assert!(m <= EXACT_LIMIT, "independent-set enumeration is limited to {EXACT_LIMIT} vertices");
    let adj = adjacency_masks(m, adjacent);
    let masks: Vec<u32> = (1u32..1 << m).collect();
    let keep = par::map(&masks, |&mask| {
        let independent = (0..m).all(|v| mask >> v & 1 == 0 || adj[v] & mask == 0);
        let maximal = (0..m).all(|v| mask >> v & 1 == 1 || adj[v] & mask != 0);
        independent && maximal
    });
    masks.into_iter().zip(keep).filter(|&(_, k)| k).map(|(mask, _)| mask).collect()
}

/// Solves `max sum y_v  s.t.  sum_{v in I} y_v <= 1` for every maximal
/// independent set `I`, `y >= 0`, with exact simplex and Bland's rule. The
/// optimum is the fractional chromatic number; the set weights are read off
/// the slack columns of the final objective row.
pub fn fractional_coloring(m: usize, adjacent: &dyn Fn(usize, usize) -> bool) -> FractionalColoring {
    if m == 0 {
        return FractionalColoring { chi: Rational::zero(), weights: Vec::new() };
    }
    let sets = maximal_independent_sets(m, adjacent);
    let rows = sets.len();
    let cols = m + rows;
    let mut tab: Vec<Vec<Rational>> = sets
        .iter()
        .enumerate()
        .map(|(i, &mask)| {
            let mut row = vec![Rational::zero(); cols + 1];
            for (v, cell) in row.iter_mut().enumerate().take(m) {
                if mask >> v & 1 == 1 {
                    *cell = Rational::one();
                }
            }
            row[m + i] = Rational::one();
            row[cols] = Rational::one();
            row
        })
        .collect();
    let mut objective = vec![Rational::zero(); cols + 1];
    for cell in objective.iter_mut().take(m) {
        *cell = -Rational::one();
    }
    let mut basis: Vec<usize> = (m..cols).collect();

    while let Some(entering) = (0..cols).find(|&j| objective[j].is_negative()) {
        let leaving = (0..rows)
            .filter(|&i| tab[i][entering].is_positive())
            .map(|i| (&tab[i][cols] / &tab[i][entering], basis[i], i))
            .min()
            .map(|(_, _, i)| i)
            .expect("bounded: every vertex lies in some independent set");
        let pivot = tab[leaving][entering].clone();
        for cell in tab[leaving].iter_mut() {
            *cell /= &pivot;
        }
        let pivot_row = tab[leaving].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i == leaving || row[entering].is_zero() {
                continue;
            }
            let factor = row[entering].clone();
            for (cell, p) in row.iter_mut().zip(&pivot_row) {
                *cell -= &factor * p;
            }
        }
        let factor = objective[entering].clone();
        for (cell, p) in objective.iter_mut().zip(&pivot_row) {
            *cell -= &factor * p;
        }
        basis[leaving] = entering;
    }

    let chi = objective[cols].clone();
    let weights: Vec<(u32, Rational)> = sets
        .iter()
        .enumerate()
        .filter(|(i, _)| objective[m + i].is_positive())
        .map(|(i, &mask)| (mask, objective[m + i].clone()))
        .collect();
    debug_assert_eq!(weights.iter().fold(Rational::zero(), |a, (_, w)| a + w), chi);
    FractionalColoring { chi, weights }
}

impl FractionalColoring {
    /// Integer schedule realizing the coloring: with `D` the common
    /// denominator of the weights, set `I` gets `D * w_I` slots and every
    /// vertex takes `D` of the slots of sets containing it, out of
    /// `D * chi` slots in total.
    pub fn schedule(&self, m: usize) -> Schedule {
        let den = common_denominator(self.weights.iter().map(|(_, w)| w));
        let scale = Rational::from_integer(den.clone());
        let per_vertex: usize = den.try_into().expect("schedule size fits in usize");
        let mut assignment = vec![Vec::new(); m];
        let mut slot = 0usize;
        for (mask, w) in &self.weights {
            let copies: usize = (w * &scale).to_integer().try_into().expect("schedule size fits in usize");
            for _ in 0..copies {
                for (v, slots) in assignment.iter_mut().enumerate() {
                    if mask >> v & 1 == 1 && slots.len() < per_vertex {
                        slots.push(slot);
                    }
                }
                slot += 1;
            }
        }
        Schedule { slots: slot, assignment }
    }
}

/// First-fit coloring in vertex order, one slot per color.
pub fn greedy_coloring(m: usize, adjacent: &dyn Fn(usize, usize) -> bool) -> Schedule {
    let mut color: Vec<usize> = Vec::with_capacity(m);
    for v in 0..m {
        let used: Vec<usize> = (0..v).filter(|&u| adjacent(u, v)).map(|u| color[u]).collect();
        let c = (0..).find(|c| !used.contains(c)).expect("unbounded range");
        color.push(c);
    }
    let slots = color.iter().max().map_or(0, |&c| c + 1);
    Schedule { slots, assignment: color.into_iter().map(|c| vec![c]).collect() }
}
