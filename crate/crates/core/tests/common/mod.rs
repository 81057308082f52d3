//! Reference oracles and random instance generators shared by the
//! integration tests. Nothing here calls into the code paths it checks.
#![allow(dead_code)]

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use timtin::evaluator::WeightedVectorSet;
use timtin::rational::{int, rat, Rational};
use timtin::{ChannelMatrix, Scheme, Stream};

/// Rank by textbook Gauss-Jordan elimination on rationals.
pub fn rank_by_elimination(vectors: &[Vec<Rational>]) -> usize {
    let mut rows: Vec<Vec<Rational>> = vectors.to_vec();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for x in rows[rank].iter_mut() {
            *x /= &pivot;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = rows[r][c].clone();
                let pivot_row = rows[rank].clone();
                for (x, p) in rows[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Largest total weight over all linearly independent subfamilies.
pub fn brute_force_max_independent(set: &WeightedVectorSet) -> Rational {
    let items = set.items();
    let mut best = Rational::zero();
    for mask in 0u32..1 << items.len() {
        let chosen: Vec<usize> = (0..items.len()).filter(|i| mask >> i & 1 == 1).collect();
        let vectors: Vec<Vec<Rational>> = chosen.iter().map(|&i| items[i].vector.clone()).collect();
        if rank_by_elimination(&vectors) == chosen.len() {
            let w = chosen.iter().fold(Rational::zero(), |a, &i| a + &items[i].kappa);
            if w > best {
                best = w;
            }
        }
    }
    best
}

pub fn random_rational_coord(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..n).map(|_| random_rational_coord(rng)).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// Up to `max_m` weighted vectors in at most `max_n` dimensions, with
/// repeated directions and tied weights on purpose.
pub fn random_weighted_set(rng: &mut impl Rng, max_m: usize, max_n: usize) -> WeightedVectorSet {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_m);
    let mut set = WeightedVectorSet::new(n);
    let mut previous: Vec<Vec<Rational>> = Vec::new();
    for j in 0..m {
        let v = if !previous.is_empty() && rng.gen_bool(0.3) {
            let base = previous.choose(rng).unwrap();
            let scale = rat(rng.gen_range(1..=3), rng.gen_range(1..=2)) * if rng.gen_bool(0.5) { int(-1) } else { int(1) };
            base.iter().map(|x| x * &scale).collect()
        } else if previous.len() >= 2 && rng.gen_bool(0.2) {
            // sum of two earlier vectors
            let a = previous.choose(rng).unwrap().clone();
            let b = previous.choose(rng).unwrap().clone();
            let s: Vec<Rational> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            if s.iter().all(Zero::is_zero) { random_vector(rng, n) } else { s }
        } else {
            random_vector(rng, n)
        };
        previous.push(v.clone());
        let kappa = rat(rng.gen_range(0..=8), 4);
        set.push(v, kappa, (j % 3, j)).unwrap();
    }
    set
}

pub struct SchemeShape {
    pub max_k: usize,
    pub max_n: usize,
    pub max_streams: usize,
}

/// Random channel and scheme; exponents are multiples of `1/grain`.
pub fn random_instance(rng: &mut impl Rng, shape: &SchemeShape, grain: i64) -> (ChannelMatrix, Scheme) {
    let k = rng.gen_range(1..=shape.max_k);
    let n = rng.gen_range(1..=shape.max_n);
    let alpha: Vec<Vec<Rational>> = (0..k)
        .map(|r| {
            (0..k)
                .map(|c| {
                    if r == c {
                        rat(rng.gen_range(grain / 2..=grain + grain / 2), grain)
                    } else if rng.gen_bool(0.35) {
                        int(0)
                    } else {
                        rat(rng.gen_range(1..=grain + grain / 4), grain)
                    }
                })
                .collect()
        })
        .collect();
    let channel = ChannelMatrix::new(alpha).unwrap();
    let mut streams = Vec::new();
    for user in 0..k {
        for _ in 0..rng.gen_range(1..=shape.max_streams) {
            streams.push(Stream {
                user,
                vector: small_integer_vector(rng, n),
                power_exp: rat(-rng.gen_range(0..=grain / 2), grain),
            });
        }
    }
    (channel, Scheme::new(n, streams))
}

fn small_integer_vector(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..n).map(|_| int(rng.gen_range(-2..=2))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// Single-stream, one-use GDoF written out directly:
/// `max(0, a_kk + r_k - max(0, max_{j != k} (a_kj + r_j)))`.
pub fn tin_formula(channel: &ChannelMatrix, r: &[Rational]) -> Vec<Rational> {
    let k = channel.k();
    (0..k)
        .map(|u| {
            let mut noise = Rational::zero();
            for j in (0..k).filter(|&j| j != u) {
                let x = channel.alpha(u, j) + &r[j];
                if x > noise {
                    noise = x;
                }
            }
            let d = channel.direct(u) + &r[u] - noise;
            if d.is_negative() { Rational::zero() } else { d }
        })
        .collect()
}

/// Grid search over `r_k in {0, -step, ..., -2}` for exponents meeting
/// every target less `eps`, evaluated in floating point.
pub fn grid_feasible(alpha: &[Vec<f64>], targets: &[f64], step: f64, eps: f64) -> bool {
    let k = alpha.len();
    let levels: Vec<Vec<f64>> = (0..k)
        .map(|u| {
            (0..=(2.0 / step).round() as usize)
                .map(|i| -(i as f64) * step)
                // necessary condition of the user's own target
                .filter(|&r| targets[u] <= 0.0 || alpha[u][u] + r >= targets[u] - eps)
                .collect()
        })
        .collect();
    let mut r = vec![0.0; k];
    search_grid(alpha, targets, eps, &levels, 0, &mut r)
}

fn search_grid(alpha: &[Vec<f64>], targets: &[f64], eps: f64, levels: &[Vec<f64>], depth: usize, r: &mut Vec<f64>) -> bool {
    let k = alpha.len();
    if depth == k {
        return (0..k).all(|u| {
            let noise = (0..k)
                .filter(|&j| j != u && alpha[u][j] > 0.0)
                .map(|j| alpha[u][j] + r[j])
                .fold(0.0f64, f64::max);
            (alpha[u][u] + r[u] - noise).max(0.0) >= targets[u] - eps
        });
    }
    for &level in &levels[depth] {
        r[depth] = level;
        if search_grid(alpha, targets, eps, levels, depth + 1, r) {
            return true;
        }
    }
    false
}

pub fn sum(xs: &[Rational]) -> Rational {
    xs.iter().fold(Rational::zero(), |a, x| a + x)
}

pub fn one() -> Rational {
    Rational::one()
}
