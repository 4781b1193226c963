use proptest::prelude::*;

use weakcore::continuum::{
    discretize, find_blocking_continuum, integrate_payoff, lift, verify_continuum_certificate, ContinuumGame,
    IntervalPartition, MeanGame, SearchSpace, StepProfile,
};
use weakcore::finite::{find_blocking_with, weak_core_members_with};
use weakcore::fixtures::{five_point_grid, ConcaveTest, Example1, Example2};
use weakcore::scalar::{dyadic_midpoints, q, qi, Rational};
use weakcore::{Execution, Scalar};

/// Composite Simpson on `[a, b]`, doubling until two passes agree to `tol`.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let pass = |n: usize| {
        let h = (b - a) / n as f64;
        let inner: f64 = (1..n).map(|k| f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 }).sum();
        (f(a) + f(b) + inner) * h / 3.0
    };
    let mut n = 64;
    let mut prev = pass(n);
    loop {
        n *= 2;
        let next = pass(n);
        if (next - prev).abs() < tol || n >= 1 << 22 {
            return next;
        }
        prev = next;
    }
}

fn reference<G: ContinuumGame>(game: &G, lo: f64, hi: f64, f: &StepProfile) -> f64 {
    let ff = f.to_float();
    // the left end is excluded from the cell; nudge off it for payoffs defined apart at 0
    simpson(|t| game.payoff_f64(t.max(1e-300), &ff), lo, hi, 1e-12)
}

#[test]
fn example2_cell_integrals_match_reference_quadrature() {
    let f = StepProfile::scaled_indicator(qi(1), q(1, 8), qi(1)).unwrap();
    let partition = IntervalPartition::uniform(4).unwrap();
    for j in 0..4 {
        let cell = partition.cell(j);
        let v = integrate_payoff(&Example2, &cell, &f).unwrap();
        let r = reference(&Example2, cell.lo.to_f64(), cell.hi.to_f64(), &f);
        assert!((v - r).abs() < 1e-8, "cell {j}: {v} vs {r}");
    }
}

#[test]
fn example1_tables_match_entrywise_quadrature() {
    let partition = IntervalPartition::uniform(4).unwrap();
    let grid = five_point_grid();
    let disc = discretize(&Example1, &partition, &grid).unwrap();
    for k in (0..disc.game.joint_count()).step_by(13) {
        let joint = disc.game.indexer().decode(k);
        let f = disc.profile_of(&joint).unwrap();
        for j in 0..4 {
            let cell = partition.cell(j);
            let r = reference(&Example1, cell.lo.to_f64(), cell.hi.to_f64(), &f);
            let g = *disc.game.payoff(&joint, j);
            assert!((g - r).abs() < 1e-7, "{joint:?} cell {j}: {g} vs {r}");
        }
    }
}

#[test]
fn mean_game_closed_forms() {
    let half = StepProfile::scaled_indicator(qi(1), qi(0), q(1, 2)).unwrap();
    let cell = IntervalPartition::uniform(2).unwrap().cell(0);
    assert_eq!(integrate_payoff(&MeanGame, &cell, &half).unwrap(), 0.25);
    let disc = discretize(&MeanGame, &IntervalPartition::uniform(2).unwrap(), &[qi(0), qi(1)]).unwrap();
    for y1 in 0..2 {
        for y2 in 0..2 {
            let want = 0.5 * (0.5 * y1 as f64 + 0.5 * y2 as f64);
            for j in 0..2 {
                assert!((disc.game.payoff(&[y1, y2], j) - want).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn cell_payoffs_sum_to_the_whole_integral() {
    for cells in [2, 4] {
        let partition = IntervalPartition::uniform(cells).unwrap();
        let grid = five_point_grid();
        let disc = discretize(&ConcaveTest, &partition, &grid).unwrap();
        for joint in disc.game.all_joints() {
            let m = disc.profile_of(&joint).unwrap().integral_to(&qi(1)).to_f64();
            // ∫_0^1 1 - |m - t| dt
            let whole = 1.0 - (m * m + (1.0 - m) * (1.0 - m)) / 2.0;
            let sum: f64 = (0..cells).map(|j| disc.game.payoff(&joint, j)).sum();
            assert!((sum - whole).abs() < 1e-10, "{joint:?}: {sum} vs {whole}");
        }
    }
}

#[test]
fn cell_payoffs_are_concave_on_the_grid() {
    let partition = IntervalPartition::uniform(3).unwrap();
    let disc = discretize(&ConcaveTest, &partition, &five_point_grid()).unwrap();
    let joints: Vec<_> = disc.game.all_joints().collect();
    for a in &joints {
        for b in &joints {
            if a.iter().zip(b).any(|(x, y)| (x + y) % 2 == 1) {
                continue;
            }
            let mid: Vec<usize> = a.iter().zip(b).map(|(x, y)| (x + y) / 2).collect();
            for j in 0..3 {
                let lhs = disc.game.payoff(&mid, j);
                let rhs = 0.5 * disc.game.payoff(a, j) + 0.5 * disc.game.payoff(b, j);
                assert!(lhs + 1e-12 >= rhs, "{a:?} {b:?} cell {j}");
            }
        }
    }
}

#[test]
fn finite_search_is_independent_of_execution() {
    let disc = discretize(&ConcaveTest, &IntervalPartition::uniform(3).unwrap(), &five_point_grid()).unwrap();
    let eps = 0.01;
    assert_eq!(
        weak_core_members_with(Execution::Sequential, &disc.game, &eps, None).unwrap(),
        weak_core_members_with(Execution::Parallel, &disc.game, &eps, None).unwrap()
    );
    for joint in disc.game.all_joints().step_by(7) {
        let a = find_blocking_with(Execution::Sequential, &disc.game, &joint, &eps).unwrap();
        let b = find_blocking_with(Execution::Parallel, &disc.game, &joint, &eps).unwrap();
        assert_eq!(a.map(|c| (c.coalition, c.deviation)), b.map(|c| (c.coalition, c.deviation)));
    }
}

#[test]
fn certificates_survive_partition_refinement() {
    let coarse = IntervalPartition::uniform(2).unwrap();
    let grid = five_point_grid();
    let samples = dyadic_midpoints(3);
    let coarse_space = SearchSpace::new(coarse.clone(), grid.clone(), samples.clone()).unwrap();
    let fine_space = SearchSpace::new(IntervalPartition::uniform(4).unwrap(), grid.clone(), samples).unwrap();
    let eps = q(1, 20);
    let mut found = 0;
    for y1 in &grid {
        for y2 in &grid {
            let h = lift(&coarse, &[y1.clone(), y2.clone()]).unwrap();
            let Some(cert) = find_blocking_continuum(&ConcaveTest, &h, &eps, &coarse_space).unwrap() else {
                continue;
            };
            let v = verify_continuum_certificate(&ConcaveTest, &h, &cert, &fine_space).unwrap();
            assert!(v.holds, "{y1} {y2}: certificate lost under refinement");
            assert_eq!(v.margin, cert.margin);
            found += 1;
        }
    }
    assert!(found > 0);
}

#[test]
fn denser_samples_can_refute_a_sampled_certificate() {
    // h = (0, 1/2) has mean 1/4; (1/2, 1] moving to 3/4 looks blocking at
    // eight samples, but t just above 1/2 gains less than epsilon
    let coarse = IntervalPartition::uniform(2).unwrap();
    let h = lift(&coarse, &[qi(0), q(1, 2)]).unwrap();
    let eps = q(1, 20);
    let sparse = SearchSpace::new(coarse.clone(), five_point_grid(), dyadic_midpoints(3)).unwrap();
    let dense = SearchSpace::new(coarse, five_point_grid(), dyadic_midpoints(5)).unwrap();
    let cert = find_blocking_continuum(&ConcaveTest, &h, &eps, &sparse).unwrap().unwrap();
    assert_eq!(cert.margin, q(3, 40));
    let v = verify_continuum_certificate(&ConcaveTest, &h, &cert, &dense).unwrap();
    assert!(!v.holds);
    assert_eq!(v.margin, q(-9, 80));
}

#[test]
fn constant_game_is_never_blocked() {
    let game = weakcore::continuum::ConstantGame { value: q(2, 3) };
    let partition = IntervalPartition::uniform(2).unwrap();
    let space = SearchSpace::new(partition.clone(), five_point_grid(), dyadic_midpoints(3)).unwrap();
    for y in five_point_grid() {
        let h = lift(&partition, &[y.clone(), qi(1) - y]).unwrap();
        assert!(find_blocking_continuum(&game, &h, &q(1, 100), &space).unwrap().is_none());
    }
}

fn grid_values(cells: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((0i64..=8).prop_map(|k| q(k, 8)), cells)
}

proptest! {
    #[test]
    fn lift_is_linear(y in grid_values(4), z in grid_values(4), a in 0i64..=4) {
        let partition = IntervalPartition::uniform(4).unwrap();
        let a = q(a, 4);
        let mixed: Vec<Rational> = y
            .iter()
            .zip(&z)
            .map(|(u, v)| a.clone() * u.clone() + (qi(1) - a.clone()) * v.clone())
            .collect();
        let lhs = lift(&partition, &mixed).unwrap();
        let rhs = lift(&partition, &y).unwrap().mix(&a, &lift(&partition, &z).unwrap()).unwrap();
        for t in dyadic_midpoints(4) {
            prop_assert_eq!(lhs.value_at(&t), rhs.value_at(&t));
        }
    }

    #[test]
    fn lift_restricts_to_cell_values(y in grid_values(4)) {
        let partition = IntervalPartition::uniform(4).unwrap();
        let f = lift(&partition, &y).unwrap();
        for (j, v) in y.iter().enumerate() {
            let cell = partition.cell(j);
            prop_assert_eq!(&f.value_at(&cell.hi), v);
            prop_assert_eq!(&f.value_at(&cell.midpoint()), v);
        }
    }

    #[test]
    fn profiles_round_trip_through_json(y in grid_values(3)) {
        let f = lift(&IntervalPartition::uniform(3).unwrap(), &y).unwrap();
        let back: StepProfile = serde_json::from_value(serde_json::to_value(&f).unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }
}
