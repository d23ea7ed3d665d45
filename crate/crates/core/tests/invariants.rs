use proptest::prelude::*;

use ruinwalk::exact::{integer, ratio, Rational};
use ruinwalk::gr1d::{self, Ruin1DProblem, StepDistribution};
use ruinwalk::gr2d::{self, BoundaryMix, Probs2D, Ruin2DProblem};
use ruinwalk::identify::{identify_constant, is_squarefree, IdentifyQuery, SurdCandidate};
use ruinwalk::mcsim::{simulate1d, SimConfig};
use ruinwalk::mirror::{mirror_duration_solve, mirror_prob_solve, MirrorProblem};
use ruinwalk::precise::bits_for_digits;

fn weighted(weights: &[u32]) -> Vec<Rational> {
    let total: u32 = weights.iter().sum();
    weights.iter().map(|&w| ratio(w as i64, total as i64)).collect()
}

fn step_table() -> impl Strategy<Value = StepDistribution> {
    (proptest::sample::subsequence(vec![-3i64, -2, -1, 1, 2, 3], 2..=6), proptest::collection::vec(1u32..6, 6))
        .prop_filter("needs both directions", |(steps, _)| steps[0] < 0 && *steps.last().unwrap() > 0)
        .prop_map(|(steps, weights)| {
            let probs = weighted(&weights[..steps.len()]);
            StepDistribution::new(steps.into_iter().zip(probs).collect()).unwrap()
        })
}

fn probs2d() -> impl Strategy<Value = Probs2D> {
    proptest::collection::vec(1u32..5, 4).prop_map(|w| {
        let p = weighted(&w);
        Probs2D::new(p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reduced_1d_matches_dense(n in 2usize..=25, dist in step_table()) {
        let problem = Ruin1DProblem::new(n, dist).unwrap();
        let f = gr1d::prob_reduced(&problem).unwrap();
        prop_assert_eq!(&f, &gr1d::prob_dense(&problem).unwrap());
        prop_assert_eq!(gr1d::duration_reduced(&problem).unwrap(), gr1d::duration_dense(&problem).unwrap());
        for v in f.values() {
            prop_assert!(*v >= integer(0) && *v <= integer(1));
        }
    }

    #[test]
    fn variance_is_nonnegative(n in 2usize..=15, dist in step_table()) {
        let problem = Ruin1DProblem::new(n, dist).unwrap();
        let var = gr1d::variance(&problem).unwrap();
        prop_assert!(var.values().iter().all(|v| *v >= integer(0)));
        prop_assert_eq!(var, gr1d::variance_dense(&problem).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduced_2d_matches_dense(m in 2usize..=8, n in 2usize..=8, probs in probs2d()) {
        let problem = Ruin2DProblem::new(m, n, probs).unwrap();
        let mix = gr2d::prob2d_reduced(&problem).unwrap();
        prop_assert_eq!(&mix, &gr2d::prob2d_dense(&problem).unwrap());
        prop_assert!(mix.values().iter().all(|c| c.total() == integer(1)));
        prop_assert_eq!(gr2d::duration2d_reduced(&problem).unwrap(), gr2d::duration2d_dense(&problem).unwrap());
    }

    #[test]
    fn transposing_the_walk_transposes_the_answer(m in 2usize..=7, n in 2usize..=7, probs in probs2d()) {
        let problem = Ruin2DProblem::new(m, n, probs).unwrap();
        let g = gr2d::duration2d_reduced(&problem).unwrap();
        prop_assert_eq!(g.transpose(), gr2d::duration2d_reduced(&problem.transposed()).unwrap());
        let mix = gr2d::prob2d_reduced(&problem).unwrap().map(BoundaryMix::transposed).transpose();
        prop_assert_eq!(mix, gr2d::prob2d_reduced(&problem.transposed()).unwrap());
    }

    #[test]
    fn mirror_symmetries(n in 2usize..=30, p in 1i64..10) {
        let p = ratio(p, 10);
        let problem = MirrorProblem::symmetric(n, p.clone()).unwrap();
        let f = mirror_prob_solve(&problem).unwrap();
        let g = mirror_duration_solve(&problem).unwrap();
        for x in 1..n {
            prop_assert_eq!(f.get(x) + f.get(n - x), integer(1));
            prop_assert_eq!(g.get(x), &(integer((x * (n - x)) as i64) / (integer(1) - &p)));
        }
    }

    #[test]
    fn identify_round_trip(a in -20i64..=20, b in 1i64..=20, c in 1i64..=20, n in 2u32..=20, neg in any::<bool>()) {
        prop_assume!(is_squarefree(n));
        let cand = SurdCandidate::new(a, if neg { -b } else { b }, c, n).unwrap();
        let decimal = cand.value(bits_for_digits(40)).format(20);
        let found = identify_constant(&IdentifyQuery::new(&decimal).unwrap());
        prop_assert_eq!(found, Some(cand));
    }
}

#[test]
fn simulation_is_reproducible() {
    let problem = Ruin1DProblem::new(10, StepDistribution::fair()).unwrap();
    let config = SimConfig::new(20_000, 11).with_partitions(4);
    let a = simulate1d(&problem, 5, &config).unwrap();
    assert_eq!(a, simulate1d(&problem, 5, &config).unwrap());
    assert_ne!(a, simulate1d(&problem, 5, &SimConfig::new(20_000, 12).with_partitions(4)).unwrap());
}
