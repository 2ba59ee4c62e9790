use hobo_core::annealer::{acceptance_probability, anneal, AnnealConfig};
use hobo_core::compressor::{compressed_cost, truncate, unfold_mode1, refold_mode1, SvdFactors};
use hobo_core::evaluator::{contract, contract_full, delta_flip, FlipIndex};
use hobo_core::oracle::{brute_force_min, GrayWalk};
use hobo_core::polynomial::{Assignment, Polynomial};
use hobo_core::tensor::{build_hobo_tensor, build_qubo_matrix, tensor_to_polynomial, HoboTensor};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

type RawTerms = Vec<(Vec<usize>, f64)>;

/// Raw, non-canonical term lists: repeated variables and duplicate terms.
fn raw_terms(max_n: usize, max_len: usize) -> impl Strategy<Value = (usize, RawTerms, f64)> {
    (1..=max_n).prop_flat_map(move |n| {
        let term = (prop::collection::vec(0..n, 1..=max_len), -10i32..=10).prop_map(|(v, c)| (v, c as f64));
        (Just(n), prop::collection::vec(term, 0..12), -5i32..=5).prop_map(|(n, t, o)| (n, t, o as f64))
    })
}

fn real_poly(max_n: usize, max_degree: usize) -> impl Strategy<Value = Polynomial> {
    (1..=max_n).prop_flat_map(move |n| {
        let term = (prop::collection::vec(0..n, 1..=max_degree), -10.0..10.0f64);
        (prop::collection::vec(term, 0..16), -3.0..3.0f64)
            .prop_map(move |(t, o)| Polynomial::from_terms(Some(n), t, o).unwrap())
    })
}

fn raw_eval(terms: &RawTerms, offset: f64, bits: &[u8]) -> f64 {
    offset
        + terms
            .iter()
            .map(|(v, c)| c * v.iter().map(|&i| f64::from(bits[i])).product::<f64>())
            .sum::<f64>()
}

fn all_assignments(n: usize) -> impl Iterator<Item = Assignment> {
    (0..1u64 << n).map(move |i| Assignment::from_lex_index(n, i))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip(p in real_poly(8, 4)) {
        prop_assert_eq!(Polynomial::parse_text(&p.to_text()).unwrap(), p.clone());
        prop_assert_eq!(Polynomial::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn canonicalization_preserves_values((n, terms, offset) in raw_terms(8, 4)) {
        let p = Polynomial::from_terms(Some(n), terms.clone(), offset).unwrap();
        for x in all_assignments(n) {
            let direct = raw_eval(&terms, offset, x.bits());
            prop_assert!((p.evaluate(&x).unwrap() - direct).abs() <= TOL);
        }
        prop_assert!(p.terms().all(|(m, c)| c != 0.0 && m.vars().windows(2).all(|w| w[0] < w[1])));
    }

    #[test]
    fn evaluation_is_linear(p in real_poly(6, 3), q in real_poly(6, 3), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let n = p.num_vars().max(q.num_vars());
        let p = p.with_num_vars(n).unwrap();
        let q = q.with_num_vars(n).unwrap();
        let combo = &(&p * a) + &(&q * b);
        for x in all_assignments(n) {
            let lhs = combo.evaluate(&x).unwrap();
            let rhs = a * p.evaluate(&x).unwrap() + b * q.evaluate(&x).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn tensor_round_trip(p in real_poly(6, 4), extra in 0usize..2) {
        let order = p.degree().max(1) + extra;
        let t = build_hobo_tensor(&p, Some(order)).unwrap();
        prop_assert!(t.has_canonical_support());
        prop_assert_eq!(tensor_to_polynomial(&t), p.without_offset());
    }

    #[test]
    fn contraction_matches_evaluation(p in real_poly(8, 4)) {
        let t = build_hobo_tensor(&p, None).unwrap();
        for x in all_assignments(p.num_vars()) {
            let c = contract(&t, &x).unwrap();
            prop_assert!((c + p.offset() - p.evaluate(&x).unwrap()).abs() <= TOL);
        }
    }

    #[test]
    fn support_restriction_is_sound(entries in prop::collection::vec(-5.0..5.0f64, 64), mask in 0u64..16) {
        let t = HoboTensor::from_entries(4, 3, entries).unwrap();
        let x = Assignment::from_lex_index(4, mask);
        prop_assert!((contract(&t, &x).unwrap() - contract_full(&t, &x).unwrap()).abs() <= TOL);
    }

    #[test]
    fn arbitrary_tensor_import(entries in prop::collection::vec(-5i32..5, 27)) {
        let t = HoboTensor::from_entries(3, 3, entries.into_iter().map(f64::from).collect()).unwrap();
        let p = tensor_to_polynomial(&t);
        for x in all_assignments(3) {
            prop_assert!((p.evaluate(&x).unwrap() - contract_full(&t, &x).unwrap()).abs() <= TOL);
        }
    }

    #[test]
    fn qubo_matches_tensor(p in real_poly(8, 2)) {
        let q = build_qubo_matrix(&p).unwrap();
        let t = build_hobo_tensor(&p, Some(2)).unwrap();
        for x in all_assignments(p.num_vars()) {
            let form = q.quadratic_form(&x).unwrap();
            prop_assert!((form - contract(&t, &x).unwrap()).abs() <= TOL);
            prop_assert!((form + p.offset() - p.evaluate(&x).unwrap()).abs() <= TOL);
        }
        for i in 0..q.n() {
            for j in 0..i {
                prop_assert_eq!(q.get(i, j), 0.0);
            }
        }
    }

    #[test]
    fn delta_matches_recomputation(p in real_poly(10, 4), seed in any::<u64>()) {
        let n = p.num_vars();
        let x = Assignment::from_lex_index(n, seed % (1 << n));
        let index = FlipIndex::new(&p);
        for j in 0..n {
            let direct = p.evaluate(&x.flipped(j)).unwrap() - p.evaluate(&x).unwrap();
            prop_assert!((delta_flip(&p, &x, j).unwrap() - direct).abs() <= TOL);
            prop_assert!((index.delta(&x, j).unwrap() - direct).abs() <= TOL);
        }
    }

    #[test]
    fn gray_walk_tracks_direct_costs(p in real_poly(10, 4)) {
        for (code, cost) in GrayWalk::new(&p).unwrap() {
            let direct = p.evaluate(&Assignment::from_lex_index(p.num_vars(), code)).unwrap();
            prop_assert!((cost - direct).abs() <= TOL);
        }
    }

    #[test]
    fn oracle_bounds_annealer(p in real_poly(8, 3), seed in any::<u64>()) {
        let (x, best) = brute_force_min(&p).unwrap();
        prop_assert_eq!(p.evaluate(&x).unwrap(), best);
        for y in all_assignments(p.num_vars()) {
            let c = p.evaluate(&y).unwrap();
            prop_assert!(c > best || (c == best && y.lex_index() >= x.lex_index()));
        }
        let cfg = AnnealConfig { sweeps: 50, restarts: 2, seed, ..Default::default() };
        let r = anneal(&p, &cfg).unwrap();
        prop_assert!(best <= r.best_cost);
        prop_assert_eq!(r.best_cost, p.evaluate(&r.best_assignment).unwrap());
        let min_restart = r.restart_costs.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert_eq!(r.best_cost, min_restart);
    }

    #[test]
    fn acceptance_is_monotone(d1 in -10.0..10.0f64, d2 in -10.0..10.0f64, t1 in 0.01..10.0f64, t2 in 0.01..10.0f64) {
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let (cold, hot) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(acceptance_probability(lo, t1).unwrap() >= acceptance_probability(hi, t1).unwrap());
        let d = hi.abs() + 1e-3;
        prop_assert!(acceptance_probability(d, cold).unwrap() <= acceptance_probability(d, hot).unwrap());
        let pr = acceptance_probability(d1, t1).unwrap();
        prop_assert!((0.0..=1.0).contains(&pr));
    }

    #[test]
    fn unfolding_is_bijective(entries in prop::collection::vec(-1.0..1.0f64, 81)) {
        let t = HoboTensor::from_entries(3, 4, entries).unwrap();
        let m = unfold_mode1(&t).unwrap();
        prop_assert_eq!((m.rows(), m.cols()), (3, 27));
        prop_assert_eq!(refold_mode1(&m, 4).unwrap(), t);
    }

    #[test]
    fn eckart_young_on_random_tensors(n in 2usize..=6, seed in any::<u64>()) {
        let entries: Vec<f64> = (0..n * n * n)
            .map(|i| ((i as f64 + 1.0) * (seed % 1000 + 1) as f64 * 0.618).sin())
            .collect();
        let t = HoboTensor::from_entries(n, 3, entries).unwrap();
        let m = unfold_mode1(&t).unwrap();
        let f = SvdFactors::of_tensor(&t).unwrap();
        prop_assert!(f.singular_values.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(f.singular_values.iter().all(|&s| s >= 0.0));
        prop_assert!(f.left_vectors.orthonormality_defect() < 1e-8);
        prop_assert!(f.right_vectors.orthonormality_defect() < 1e-8);
        let mut previous = f64::INFINITY;
        for r in 1..=f.rank() {
            let err = truncate(&f, r).unwrap().reconstruct().distance(&m);
            prop_assert!((err - f.tail_norm(r)).abs() <= 1e-8);
            prop_assert!(err <= previous + 1e-12);
            previous = err;
        }
        for x in all_assignments(n) {
            let exact = contract(&t, &x).unwrap();
            prop_assert!((compressed_cost(&f, &x).unwrap() - exact).abs() <= 1e-8);
        }
    }
}

#[test]
fn annealing_is_thread_count_independent() {
    let p = hobo_core::random_instance(&hobo_core::RandomInstance::new(14, 4, 60, 3)).unwrap();
    let cfg = AnnealConfig { sweeps: 200, restarts: 12, seed: 9, ..Default::default() };
    let runs: Vec<_> = [1, 2, 5]
        .into_iter()
        .map(|threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| anneal(&p, &cfg).unwrap())
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
}
