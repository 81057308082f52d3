mod common;

use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use timtin::decomp::{evaluate_map, search, threshold_masks, SearchOptions};
use timtin::evaluator::oracle::{finite_p_rate, finite_p_stream_rates};
use timtin::evaluator::{evaluate, gdof_tuple, user_gdof};
use timtin::par::Execution;
use timtin::rational::{int, rat, Rational};
use timtin::tim::{tim_solve, verify_assignment, TimMethod, TimTopology};
use timtin::tin::{tin_feasible, tin_gdof, tin_symmetric, TinTarget};
use timtin::{ChannelMatrix, DecompositionMap, Link, Scheme, Stream};

use common::SchemeShape;

fn random_channel(rng: &mut impl Rng, max_k: usize) -> ChannelMatrix {
    let k = rng.gen_range(1..=max_k);
    let alpha = (0..k)
        .map(|r| {
            (0..k)
                .map(|c| match (r == c, rng.gen_bool(0.35)) {
                    (true, _) => rat(rng.gen_range(5..=15), 10),
                    (false, true) => int(0),
                    (false, false) => rat(rng.gen_range(1..=12), 10),
                })
                .collect()
        })
        .collect();
    ChannelMatrix::new(alpha).unwrap()
}

fn random_topology(rng: &mut impl Rng, max_k: usize) -> TimTopology {
    let k = rng.gen_range(1..=max_k);
    let links: Vec<Link> = (0..k)
        .flat_map(|r| (0..k).map(move |t| Link::new(r, t)))
        .filter(|l| l.receiver != l.transmitter)
        .filter(|_| rng.gen_bool(0.4))
        .collect();
    TimTopology::new(k, links).unwrap()
}

fn scaled(ch: &ChannelMatrix, scheme: &Scheme, c: &Rational) -> (ChannelMatrix, Scheme) {
    let alpha = ch.rows().iter().map(|row| row.iter().map(|a| a * c).collect()).collect();
    let streams = scheme
        .streams
        .iter()
        .map(|s| Stream { user: s.user, vector: s.vector.clone(), power_exp: &s.power_exp * c })
        .collect();
    (ChannelMatrix::new(alpha).unwrap(), Scheme::new(scheme.n, streams))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gdof_scales_with_exponents(seed in any::<u64>(), num in 1i64..5, den in 1i64..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = SchemeShape { max_k: 4, max_n: 3, max_streams: 2 };
        let (ch, scheme) = common::random_instance(&mut rng, &shape, 10);
        let c = rat(num, den);
        let (ch2, scheme2) = scaled(&ch, &scheme, &c);
        let a = gdof_tuple(&scheme, &ch).unwrap();
        let b = gdof_tuple(&scheme2, &ch2).unwrap();
        prop_assert_eq!(b, a.iter().map(|x| x * &c).collect::<Vec<_>>());
    }

    #[test]
    fn gdof_is_bounded_by_direct_strength(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = SchemeShape { max_k: 4, max_n: 3, max_streams: 3 };
        let (ch, scheme) = common::random_instance(&mut rng, &shape, 10);
        let report = evaluate(&scheme, &ch).unwrap();
        for (k, u) in report.users.iter().enumerate() {
            prop_assert!(!u.gdof.is_negative());
            prop_assert!(u.gdof <= *ch.direct(k));
            prop_assert!(u.streams.iter().all(|s| !s.is_negative()));
        }
    }

    #[test]
    fn tin_certificates_are_sound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = random_channel(&mut rng, 5);
        let d: Vec<Rational> = (0..ch.k()).map(|k| ch.direct(k) * rat(rng.gen_range(0..=10), 10)).collect();
        let sol = tin_feasible(&ch, &TinTarget::new(d.clone())).unwrap();
        match (&sol.r, &sol.negative_cycle) {
            (Some(r), None) => {
                prop_assert!(sol.feasible);
                let got = tin_gdof(&ch, r);
                prop_assert!(got.iter().zip(&d).all(|(g, t)| g >= t));
                prop_assert_eq!(got, common::tin_formula(&ch, r));
                // lower targets stay feasible
                let half: Vec<Rational> = d.iter().map(|x| x / int(2)).collect();
                prop_assert!(tin_feasible(&ch, &TinTarget::new(half)).unwrap().feasible);
            }
            (None, Some(cycle)) => {
                prop_assert!(!sol.feasible);
                prop_assert!(cycle.weight.is_negative());
                prop_assert!(!cycle.nodes.is_empty());
            }
            _ => prop_assert!(false, "solution must carry exactly one of powers or certificate"),
        }
    }

    #[test]
    fn symmetric_tin_is_tight(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = random_channel(&mut rng, 5);
        let sym = tin_symmetric(&ch);
        prop_assert!(tin_feasible(&ch, &TinTarget::symmetric(ch.k(), sym.d_sym.clone())).unwrap().feasible);
        let above = &sym.d_sym + rat(1, 1000);
        prop_assert!(!tin_feasible(&ch, &TinTarget::symmetric(ch.k(), above)).unwrap().feasible);
    }

    #[test]
    fn tim_directions_deliver_their_fractions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let topo = random_topology(&mut rng, 5);
        let sol = tim_solve(&topo);
        prop_assert!(verify_assignment(&topo, &sol));
        let got = gdof_tuple(&sol.unit_power_scheme(), &topo.binary_channel()).unwrap();
        prop_assert!(got.iter().zip(&sol.fractions).all(|(g, f)| g >= f));
        if sol.method == TimMethod::HalfRate {
            for (g, m) in got.iter().zip(&sol.user_methods) {
                if *m == TimMethod::HalfRate {
                    prop_assert_eq!(g, &rat(1, 2));
                }
            }
        }
    }

    #[test]
    fn removing_tim_links_never_hurts(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let topo = random_topology(&mut rng, 5);
        let Some(&drop) = topo.links().iter().next() else { return Ok(()) };
        let smaller = TimTopology::new(topo.k(), topo.links().iter().copied().filter(|&l| l != drop)).unwrap();
        let a = tim_solve(&topo).fractions;
        let b = tim_solve(&smaller).fractions;
        prop_assert!(b.iter().min() >= a.iter().min());
    }

    #[test]
    fn finite_snr_chain_rule(seed in any::<u64>(), p_exp in 1.0f64..12.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = SchemeShape { max_k: 3, max_n: 3, max_streams: 2 };
        let (ch, scheme) = common::random_instance(&mut rng, &shape, 10);
        let p = 10f64.powf(p_exp);
        let whole = finite_p_rate(&scheme, &ch, p, seed).unwrap();
        let parts = finite_p_stream_rates(&scheme, &ch, p, seed).unwrap();
        for (w, ps) in whole.iter().zip(&parts) {
            let s: f64 = ps.iter().sum();
            prop_assert!((w - s).abs() <= 1e-6 * w.abs().max(1.0), "{} vs {}", w, s);
        }
    }
}

#[test]
fn product_claims_hold_on_random_small_channels() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..12 {
        let ch = random_channel(&mut rng, 4);
        let report = search(&ch, &SearchOptions::default()).unwrap();
        for r in &report.results {
            assert_eq!(r.verdict, r.verified.iter().zip(&r.products).all(|(v, p)| v >= p));
            assert_eq!(r.verified, gdof_tuple(&r.scheme, &ch).unwrap());
            assert!(r.verdict, "map {:b} of {:?}", r.map.bitmask(), ch.rows());
        }
    }
}

#[test]
fn exhaustive_frontier_covers_threshold_family() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..8 {
        let ch = random_channel(&mut rng, 4);
        let full = search(&ch, &SearchOptions::default()).unwrap();
        let frontier: Vec<&Vec<Rational>> = full.frontier_results().map(|r| &r.verified).collect();
        for mask in threshold_masks(&ch) {
            let r = evaluate_map(&ch, &DecompositionMap::from_bitmask(&ch, mask)).unwrap();
            if r.verdict {
                assert!(frontier.iter().any(|f| f.iter().zip(&r.verified).all(|(a, b)| a >= b)));
            }
        }
        let capped = search(&ch, &SearchOptions { exhaustive_cap: 0, ..Default::default() }).unwrap();
        assert!(!capped.exhaustive || ch.cross_links().is_empty());
    }
}

#[test]
fn sequential_and_parallel_searches_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..4 {
        let ch = random_channel(&mut rng, 4);
        let a = search(&ch, &SearchOptions { execution: Execution::Sequential, ..Default::default() }).unwrap();
        let b = search(&ch, &SearchOptions { execution: Execution::Parallel, ..Default::default() }).unwrap();
        assert_eq!(a.frontier, b.frontier);
        assert_eq!(
            a.results.iter().map(|r| &r.verified).collect::<Vec<_>>(),
            b.results.iter().map(|r| &r.verified).collect::<Vec<_>>()
        );
    }
}

#[test]
fn worked_two_stream_receiver() {
    // own streams [1,0] at 1 and [0,1] at 4/5; interference [1,1] at 1/2,
    // [1,1] at 3/10 and [1,2] at 1/5
    let ch = ChannelMatrix::new(vec![
        vec![int(1), int(1), int(1), int(1)],
        vec![int(0), int(1), int(0), int(0)],
        vec![int(0), int(0), int(1), int(0)],
        vec![int(0), int(0), int(0), int(1)],
    ])
    .unwrap();
    let stream = |user, v: [i64; 2], p: Rational| Stream { user, vector: v.iter().map(|&x| int(x)).collect(), power_exp: p };
    let scheme = Scheme::new(
        2,
        vec![
            stream(0, [1, 0], int(0)),
            stream(0, [0, 1], rat(-1, 5)),
            stream(1, [1, 1], rat(-1, 2)),
            stream(2, [1, 1], rat(-7, 10)),
            stream(3, [1, 2], rat(-4, 5)),
        ],
    );
    let report = evaluate(&scheme, &ch).unwrap();
    let u = &report.users[0];
    assert_eq!(u.d_prime, rat(9, 5));
    assert_eq!(u.streams, vec![rat(1, 4), rat(3, 10)]);
    assert_eq!(u.gdof, rat(11, 20));
    assert_eq!(user_gdof(&scheme, &ch, 0).unwrap().gdof, common::sum(&u.streams));
    assert!(u.streams.iter().all(|s| !s.is_zero()));
}
