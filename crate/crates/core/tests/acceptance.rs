//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use weakcore::anonymous::{
    anonymous_certificate, blocking_cycle_report, contrast_report, payoff_w, payoff_w_tilde, sweep_profiles,
    verify_anonymous_certificate, AnonymousGame, AnonymousParams, Distribution,
};
use weakcore::continuum::{
    discretize, equi_usc_falsifier, existence_pipeline, find_blocking_continuum, indicator_probes,
    integrate_payoff, lift, verify_continuum_certificate, ContinuumGame, IntervalPartition, MeanGame,
    Neighborhood, PartitionNet, PipelineConfig, SearchSpace, StepProfile, TestFamily,
};
use weakcore::finite::{
    certificate_from_json, check_balanced, find_blocking, h_value, in_v, payoff_lattice, verify_certificate,
    worst_case_gain, Coalition, FiniteGame, PayoffVector, Player,
};
use weakcore::fixtures::{
    blocker_space, example1_blocker, example2_alpha_blocker, five_point_grid, gamma, grid_profiles, payoff_example1,
    payoff_example2, running_sup, ConcaveTest, Example1, Example2,
};
use weakcore::scalar::{dyadic_midpoints, q, qi, Rational};
use weakcore::Execution;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent < budget, format!("took {spent:.1?}, budget {budget:?}"))
}

fn e<T: std::fmt::Display>(err: T) -> String {
    err.to_string()
}

// 1

fn w_cycle() -> Outcome {
    let start = Instant::now();
    let game = AnonymousGame::w();
    let pairs: [(usize, &[usize], usize); 4] = [(0, &[0, 1], 1), (1, &[0, 2], 2), (2, &[1, 2], 3), (3, &[0, 1, 2, 3], 0)];
    let mut min_margin = None::<Rational>;
    for (h, cells, a) in pairs {
        let sq = vec![h; 4];
        let coalition = Coalition::new(cells.to_vec()).map_err(e)?;
        let cert = anonymous_certificate(&game, &sq, coalition, vec![a; cells.len()], qi(0)).map_err(e)?;
        ensure(cert.margin >= qi(1), format!("focal ≡{h}: margin {} < 1", cert.margin))?;
        let at_half = cert.with_epsilon(q(1, 2));
        ensure(
            verify_anonymous_certificate(&game, &sq, &at_half).map_err(e)?,
            format!("focal ≡{h} fails verification at 1/2"),
        )?;
        min_margin = Some(min_margin.map_or(cert.margin.clone(), |m: Rational| m.min(cert.margin.clone())));
    }
    let report = blocking_cycle_report(&game, Execution::default()).map_err(e)?;
    let finite = game.to_finite().map_err(e)?;
    for ((_, cells, a), entry) in pairs.iter().zip(&report.focal) {
        let c = certificate_from_json(&finite, &entry.certificate).map_err(e)?;
        ensure(
            c.coalition.members() == *cells && c.deviation.iter().all(|d| d == a),
            format!("cycle report focal {} differs from the expected pair", entry.profile),
        )?;
    }
    let sweep = sweep_profiles(&game, &q(1, 2), Execution::default()).map_err(e)?;
    ensure(sweep.summary.total_profiles == 256, "sweep did not cover 256 profiles")?;
    ensure(sweep.all_blocked(), format!("survivors at 1/2: {:?}", sweep.surviving))?;
    ensure(report.empty, "cycle report does not declare emptiness")?;
    within(start, Duration::from_secs(10))?;
    Ok(format!(
        "focal margins >= {}, 256/256 blocked at 1/2 ({:.2?})",
        min_margin.unwrap(),
        start.elapsed()
    ))
}

// 2

/// `min Σ|p - q|` over `p ∈ P_i`, `q ∈ P_j` on the simplex grid with
/// denominator `n`, in units of `1/n`.
fn grid_set_distance(n: i64, threshold: i64, i: usize, j: usize) -> i64 {
    let points: Vec<[i64; 4]> = (0..=n)
        .flat_map(|a| (0..=n - a).flat_map(move |b| (0..=n - a - b).map(move |c| [a, b, c, n - a - b - c])))
        .collect();
    let member = |p: &[i64; 4], k: usize| if k == 0 { p[0] == n } else { p[k] >= threshold };
    let pi: Vec<_> = points.iter().filter(|p| member(p, i)).collect();
    let pj: Vec<_> = points.iter().filter(|p| member(p, j)).collect();
    let mut best = i64::MAX;
    for p in &pi {
        for r in &pj {
            best = best.min((0..4).map(|k| (p[k] - r[k]).abs()).sum());
        }
    }
    best
}

fn grid_d(n: i64, alpha: &Rational) -> f64 {
    let two_alpha = qi(2) * alpha.clone() * qi(n);
    assert!(two_alpha.is_integer(), "grid must contain the boundary 2α");
    let threshold = two_alpha.to_integer().try_into().unwrap();
    let mut best = i64::MAX;
    for i in 0..4 {
        for j in i + 1..4 {
            best = best.min(grid_set_distance(n, threshold, i, j));
        }
    }
    best as f64 / n as f64
}

fn w_tilde_contrast() -> Outcome {
    let start = Instant::now();
    let game = AnonymousGame::w_tilde();
    let d = game.d();
    let d_f = d.numer().to_string().parse::<f64>().unwrap() / d.denom().to_string().parse::<f64>().unwrap();
    for n in [30, 60] {
        let oracle = grid_d(n, game.params.alpha());
        ensure((d_f - oracle).abs() <= 1e-6, format!("D = {d} but the grid oracle at 1/{n} gives {oracle}"))?;
    }
    let eps = d.clone() / qi(2) - q(1, 1_000_000_000);
    ensure(game.sweep_epsilon() == eps, "sweep epsilon is not D/2 - 1e-9")?;
    let report = contrast_report(&game, Execution::default()).map_err(e)?;
    ensure(report.weak_core_empty, "some profile survives at D/2 - 1e-9")?;
    let br = report.best_response_profile.as_ref().ok_or("no profile passes the best-response check")?;
    ensure(report.holds, "contrast report does not hold")?;
    let cycle = blocking_cycle_report(&game, Execution::default()).map_err(e)?;
    ensure(cycle.min_focal_improvement() >= d.clone() / qi(2), "a focal improvement is below D/2")?;
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "D = {d} (grid oracle agrees), 256/256 blocked at D/2 - 1e-9, best response at {} ({:.2?})",
        br.profile,
        start.elapsed()
    ))
}

// 3

/// Verification space independent of the blocker's own: the coalition's
/// right end and fifteen more evenly spaced points inside it, against a
/// complement cut into eight cells.
fn independent_space(end: &Rational) -> SearchSpace {
    let samples = (1..=16).map(|k| end.clone() * q(k, 16)).collect();
    SearchSpace::new(IntervalPartition::uniform(8).unwrap(), five_point_grid(), samples).unwrap()
}

/// The space the blocker verified itself on, where its margin is attained.
fn own_space(cert: &weakcore::continuum::ContinuumCertificate) -> SearchSpace {
    let end = coalition_end(cert);
    let k = (1..=60).find(|&k| q(1, 1 << k) == end).expect("blocker coalitions end at a dyadic");
    blocker_space(k)
}

fn coalition_end(cert: &weakcore::continuum::ContinuumCertificate) -> Rational {
    cert.coalition.sup().expect("nonempty coalition").clone()
}

fn example1_family() -> Outcome {
    let start = Instant::now();
    let eps = q(1, 8);
    let profiles = grid_profiles(4, &five_point_grid()).map_err(e)?;
    let mut min_margin: Option<Rational> = None;
    for f in &profiles {
        let cert = example1_blocker(f, &eps)
            .map_err(e)?
            .ok_or_else(|| format!("no blocker for {:?}", f.values()))?;
        ensure(cert.margin > qi(0), format!("non-positive margin for {:?}", f.values()))?;
        let v = verify_continuum_certificate(&Example1, f, &cert, &independent_space(&coalition_end(&cert)))
            .map_err(e)?;
        ensure(v.holds, format!("independent re-verification fails for {:?}", f.values()))?;
        min_margin = Some(min_margin.map_or(v.margin.clone(), |m| m.min(v.margin.clone())));
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{} profiles blocked at 1/8, all re-verified, min margin {} ({:.2?})",
        profiles.len(),
        min_margin.unwrap(),
        start.elapsed()
    ))
}

// 4

fn example2_separation() -> Outcome {
    let start = Instant::now();
    let profiles = grid_profiles(4, &five_point_grid()).map_err(e)?;
    for f in &profiles {
        let cert = example2_alpha_blocker(f).map_err(e)?;
        ensure(cert.epsilon == qi(0) && cert.margin > qi(0), format!("bad certificate for {:?}", f.values()))?;
        let v = verify_continuum_certificate(&Example2, f, &cert, &independent_space(&coalition_end(&cert)))
            .map_err(e)?;
        ensure(v.holds, format!("independent re-verification fails for {:?}", f.values()))?;
        let inflated = weakcore::continuum::ContinuumCertificate {
            epsilon: cert.margin.clone() * qi(2),
            ..cert.clone()
        };
        let sharp = verify_continuum_certificate(&Example2, f, &inflated, &own_space(&cert)).map_err(e)?;
        ensure(!sharp.holds, format!("certificate for {:?} survives doubled margin", f.values()))?;
    }
    let alpha_done = start.elapsed();
    let net = PartitionNet::uniform(&[2, 4, 8]).map_err(e)?;
    let config = PipelineConfig::new(five_point_grid(), q(1, 20));
    let report = existence_pipeline(&Example2, &net, &config).map_err(e)?;
    ensure(report.converged(), format!("pipeline failed: {:?}", report.failure))?;
    ensure(
        report.final_unblocked(),
        format!("final profile blocked: {:?}", report.final_certificate),
    )?;
    ensure(report.caveat.contains("not a proof"), "resolution caveat missing")?;
    within(start, Duration::from_secs(300))?;
    Ok(format!(
        "625 alpha-core blockers verified ({alpha_done:.1?}); pipeline 2,4,8 final profile {:?} unblocked at 1/20 ({:.1?}); caveat attached",
        report.final_profile.as_ref().unwrap().values().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        start.elapsed()
    ))
}

// 5

fn random_game(rng: &mut ChaCha8Rng) -> FiniteGame<Rational> {
    let n = rng.gen_range(1..=3);
    let radix: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    let players = radix
        .iter()
        .enumerate()
        .map(|(i, &r)| Player::new(format!("p{i}"), q(1, n as i64), (0..r).map(|a| a.to_string()).collect()))
        .collect();
    let joints: usize = radix.iter().product();
    let table = (0..joints)
        .map(|_| (0..n).map(|_| q(rng.gen_range(-6..=6), 2)).collect())
        .collect();
    FiniteGame::new(players, table, qi(3)).unwrap()
}

fn joints_of(radix: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &r in radix {
        out = out
            .into_iter()
            .flat_map(|j| (0..r).map(move |a| [j.clone(), vec![a]].concat()))
            .collect();
    }
    out
}

/// Triple loop over coalitions, coalition actions and complement actions.
fn brute_force_blocks(game: &FiniteGame<Rational>, sq: &[usize], eps: &Rational) -> bool {
    let n = game.n();
    let base: Vec<Rational> = (0..n).map(|i| game.payoff(sq, i).clone()).collect();
    let all = joints_of(game.radix());
    (1u32..1 << n).any(|mask| {
        let inside = |i: usize| mask & (1 << i) != 0;
        let mut deviations: Vec<Vec<usize>> = all.clone();
        deviations.dedup_by(|a, b| (0..n).filter(|&i| inside(i)).all(|i| a[i] == b[i]));
        all.iter().any(|dev| {
            all.iter()
                .filter(|other| (0..n).filter(|&i| inside(i)).all(|i| other[i] == dev[i]))
                .all(|joint| (0..n).filter(|&i| inside(i)).all(|i| game.payoff(joint, i).clone() - base[i].clone() > *eps))
        })
    })
}

fn h_blocks(game: &FiniteGame<Rational>, sq: &[usize], eps: &Rational) -> bool {
    let n = game.n();
    let y = PayoffVector((0..n).map(|i| game.payoff(sq, i).clone() + eps.clone()).collect());
    Coalition::all(n).iter().any(|s| {
        let radix: Vec<usize> = s.members().iter().map(|&i| game.radix()[i]).collect();
        joints_of(&radix)
            .iter()
            .any(|v| h_value(game, s, v, &y).unwrap() > qi(0))
    })
}

fn finite_oracles() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_501);
    let epsilons = [qi(0), q(1, 2), qi(1)];
    let mut checks = 0;
    let mut blocked = 0;
    let mut games = vec![];
    for g in 0..100 {
        let game = random_game(&mut rng);
        for sq in joints_of(game.radix()) {
            for eps in &epsilons {
                let oracle = brute_force_blocks(&game, &sq, eps);
                let found = find_blocking(&game, &sq, eps).map_err(e)?;
                ensure(found.is_some() == oracle, format!("game {g} {sq:?} ε={eps}: search disagrees with oracle"))?;
                ensure(h_blocks(&game, &sq, eps) == oracle, format!("game {g} {sq:?} ε={eps}: H disagrees with oracle"))?;
                if let Some(c) = found {
                    ensure(verify_certificate(&game, &sq, &c).map_err(e)?, "unsound certificate")?;
                    blocked += 1;
                }
                checks += 1;
            }
        }
        games.push(game);
    }
    let mut inside = 0;
    for k in 0..1000 {
        let game = &games[k % games.len()];
        let n = game.n();
        let all = Coalition::all(n);
        let s = &all[rng.gen_range(0..all.len())];
        let y = PayoffVector((0..n).map(|_| q(rng.gen_range(-8..=8), 2)).collect::<Vec<_>>());
        let lower = PayoffVector(y.0.iter().map(|v| v.clone() - q(rng.gen_range(0..=4), 2)).collect::<Vec<_>>());
        if in_v(game, s, &y).map_err(e)? {
            inside += 1;
            ensure(in_v(game, s, &lower).map_err(e)?, format!("comprehensiveness fails at sample {k}"))?;
        }
        let grand = Coalition::grand(n);
        if in_v(game, &grand, &y).map_err(e)? {
            ensure(y.0.iter().all(|v| v <= game.bound()), format!("V(N) unbounded at sample {k}"))?;
        }
        let floor = PayoffVector(vec![-game.bound().clone() - qi(1); n]);
        ensure(in_v(game, s, &floor).map_err(e)?, "floor vector outside V(S)")?;
    }
    let mut balanced = 0;
    let fixtures: [&dyn ContinuumGame; 2] = [&ConcaveTest, &MeanGame];
    for game in fixtures {
        for cells in [2, 3] {
            let grid = [qi(0), q(1, 2), qi(1)];
            let disc = discretize(game, &IntervalPartition::uniform(cells).map_err(e)?, &grid).map_err(e)?;
            let y_grid = payoff_lattice(&disc.game, &(1.0 / 48.0), 50_000);
            ensure(!y_grid.is_empty(), "empty payoff grid")?;
            ensure(
                check_balanced(&disc.game, &y_grid).map_err(e)?,
                format!("{} on {cells} cells fails the balancedness check", game.name()),
            )?;
            balanced += 1;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{checks} blocking questions on 100 games agree ({blocked} blocked); 1000 vectors ({inside} in V(S)) comprehensive and bounded; {balanced} discretized concave games balanced ({:.2?})",
        start.elapsed()
    ))
}

// 6

fn concave_pipeline() -> Outcome {
    let start = Instant::now();
    let eps = q(1, 20);
    let net = PartitionNet::uniform(&[2, 4, 8]).map_err(e)?;
    let config = PipelineConfig::new(five_point_grid(), eps.clone());
    let report = existence_pipeline(&ConcaveTest, &net, &config).map_err(e)?;
    ensure(report.converged() && report.stages.len() == 3, format!("pipeline failed: {:?}", report.failure))?;
    let worst = report.max_successive_distance.clone().unwrap_or_else(|| qi(0));
    ensure(worst < eps, format!("successive distance {worst} >= 1/20"))?;
    ensure(report.final_unblocked(), "final profile blocked")?;

    let pipeline_time = start.elapsed();

    // blocking transfer
    let mut transferred = 0;
    let mut min_ratio = f64::INFINITY;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut blocked_on_four: Vec<Vec<usize>> = vec![];
    for cells in [2usize, 4, 8] {
        let partition = IntervalPartition::uniform(cells).map_err(e)?;
        let grid = five_point_grid();
        let space = SearchSpace::new(partition.clone(), grid.clone(), dyadic_midpoints(6)).map_err(e)?;
        let disc = if cells <= 4 { Some(discretize(&ConcaveTest, &partition, &grid).map_err(e)?) } else { None };
        // on eight cells, lifts of a seeded sample of the profiles blocked on four
        let status_quos: Vec<Vec<usize>> = if cells <= 4 {
            joints_of(&vec![grid.len(); cells])
        } else {
            (0..8)
                .map(|_| {
                    let j = &blocked_on_four[rng.gen_range(0..blocked_on_four.len())];
                    j.iter().flat_map(|&a| [a, a]).collect()
                })
                .collect()
        };
        for sq in status_quos {
            let values: Vec<Rational> = sq.iter().map(|&a| grid[a].clone()).collect();
            let h = lift(&partition, &values).map_err(e)?;
            let Some(cert) = find_blocking_continuum(&ConcaveTest, &h, &eps, &space).map_err(e)? else {
                continue;
            };
            let members = partition.cells_in(&cert.coalition);
            let deviation: Vec<usize> = members
                .iter()
                .map(|&j| {
                    let v = cert.deviation.value_at(&partition.cell(j).midpoint());
                    grid.iter().position(|g| *g == v).expect("constant deviations lie on the grid")
                })
                .collect();
            let delta = eps.clone() / qi(2) * members.iter().map(|&j| partition.weight(j)).min().unwrap();
            let delta = weakcore::Scalar::to_f64(&delta);
            let gain = finite_gain(disc.as_ref(), &partition, &grid, &sq, &members, &deviation)?;
            ensure(
                gain >= delta,
                format!("{cells} cells {sq:?}: finite margin {gain} below {delta}"),
            )?;
            min_ratio = min_ratio.min(gain / delta);
            transferred += 1;
            if cells == 4 {
                blocked_on_four.push(sq.clone());
            }
        }
    }
    ensure(transferred > 0, "no continuum certificate to transfer")?;
    within(start, Duration::from_secs(300)).map_err(|m| format!("{m} (pipeline alone {pipeline_time:.1?})"))?;
    Ok(format!(
        "stage cores nonempty at 2,4,8; max successive distance {worst}; {transferred} certificates transfer with margin >= {min_ratio:.2}·δ (pipeline {pipeline_time:.1?}, total {:.1?})",
        start.elapsed()
    ))
}

/// Worst case over complement grid tuples of `min_j g_j(dev) - g_j(sq)`,
/// using the discretized game when it is small and cell integrals otherwise.
fn finite_gain(
    disc: Option<&weakcore::continuum::Discretized>,
    partition: &IntervalPartition,
    grid: &[Rational],
    sq: &[usize],
    members: &[usize],
    deviation: &[usize],
) -> Result<f64, String> {
    let cells = partition.len();
    let coalition = Coalition::new(members.to_vec()).map_err(e)?;
    if let Some(disc) = disc {
        return worst_case_gain(&disc.game, sq, &coalition, deviation).map_err(e);
    }
    let g = |joint: &[usize], j: usize| -> Result<f64, String> {
        let values: Vec<Rational> = joint.iter().map(|&a| grid[a].clone()).collect();
        integrate_payoff(&ConcaveTest, &partition.cell(j), &lift(partition, &values).map_err(e)?).map_err(e)
    };
    let others = coalition.complement(cells);
    let mut worst = f64::INFINITY;
    for rest in joints_of(&vec![grid.len(); others.len()]) {
        let mut joint = sq.to_vec();
        for (&j, &a) in members.iter().zip(deviation) {
            joint[j] = a;
        }
        for (&j, &a) in others.iter().zip(&rest) {
            joint[j] = a;
        }
        for &j in members {
            worst = worst.min(g(&joint, j)? - g(sq, j)?);
        }
    }
    Ok(worst)
}

// 7

fn equi_usc() -> Outcome {
    let start = Instant::now();
    let eps = q(2, 5);
    let zero = StepProfile::constant(qi(0)).map_err(e)?;
    let hood = Neighborhood {
        tests: TestFamily::dyadic(3),
        radius: q(1, 16),
    };
    let widths: Vec<Rational> = (4..=10).map(|k| q(1, 1 << k)).collect();
    let probes = indicator_probes(&[q(1, 2), qi(1)], &widths).map_err(e)?;
    let samples = dyadic_midpoints(10);
    let w = equi_usc_falsifier(&Example1, &zero, &eps, &hood, &samples, &probes)
        .map_err(e)?
        .ok_or("no witness for the first example")?;
    let delta = w.probe.breaks()[1].clone();
    ensure(w.probe.values()[0] == q(1, 2), format!("witness probe has height {}", w.probe.values()[0]))?;
    ensure(w.t <= delta, "witness t lies outside the probe support")?;
    ensure(w.jump == q(1, 2), format!("witness jump {} != 1/2", w.jump))?;
    ensure(payoff_example1(&(delta.clone() / qi(2)), &w.probe) == q(1, 2), "U(δ/2, f') != 1/2")?;
    for at in [zero.clone(), StepProfile::constant(q(1, 2)).map_err(e)?, lift(&IntervalPartition::uniform(2).map_err(e)?, &[qi(1), qi(0)]).map_err(e)?] {
        let none = equi_usc_falsifier(&ConcaveTest, &at, &eps, &hood, &samples, &probes).map_err(e)?;
        ensure(none.is_none(), "the concave test game produced a witness")?;
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!(
        "witness t = {}, f' = 1/2·χ(0,{delta}], jump 1/2; none for the concave game ({:.2?})",
        w.t,
        start.elapsed()
    ))
}

// 8

fn golden() -> Outcome {
    let mut n = 0;
    let mut check = |ok: bool, what: &str| -> Result<(), String> {
        n += 1;
        ensure(ok, format!("golden value mismatch: {what}"))
    };
    let c = StepProfile::constant(q(3, 4)).map_err(e)?;
    let half = StepProfile::scaled_indicator(qi(1), qi(0), q(1, 2)).map_err(e)?;
    let half_then_one = lift(&IntervalPartition::uniform(2).map_err(e)?, &[q(1, 2), qi(1)]).map_err(e)?;
    let t1 = q(1, 4);
    let tail = StepProfile::scaled_indicator(qi(1) - t1.clone(), qi(0), t1.clone()).map_err(e)?;
    let one = StepProfile::constant(qi(1)).map_err(e)?;
    let zero = StepProfile::constant(qi(0)).map_err(e)?;
    let halfc = StepProfile::constant(q(1, 2)).map_err(e)?;

    for t in [q(1, 7), q(1, 2), qi(1)] {
        check(gamma(&t, &c).map_err(e)? == q(3, 4), "gamma of a constant")?;
        check(running_sup(&t, &c).map_err(e)? == q(3, 4), "running_sup of a constant")?;
    }
    check(gamma(&q(3, 4), &half).map_err(e)? == q(2, 3), "gamma(3/4, χ(0,1/2]) = 2/3")?;
    check(running_sup(&q(3, 4), &half).map_err(e)? == qi(1), "running_sup(3/4, χ(0,1/2]) = 1")?;
    for t in [q(1, 8), q(1, 3), q(1, 2)] {
        check(gamma(&t, &half_then_one).map_err(e)? == q(1, 2), "gamma = 1/2 on (0,1/2]")?;
        check(running_sup(&t, &half_then_one).map_err(e)? == q(1, 2), "G = 1/2 on (0,1/2]")?;
    }
    for t in [q(1, 16), q(1, 5), t1.clone()] {
        check(running_sup(&t, &tail).map_err(e)? == qi(1) - t1.clone(), "G = 1 - t1 on (0,t1]")?;
        check(gamma(&t, &tail).map_err(e)? == qi(1) - t1.clone(), "gamma = 1 - t1 on (0,t1]")?;
    }
    check(gamma(&qi(0), &c).is_err(), "gamma at t = 0 is a domain error")?;
    check(running_sup(&qi(0), &c).is_err(), "running_sup at t = 0 is a domain error")?;

    check(payoff_example1(&qi(0), &halfc) == qi(1), "U1(0, f) = 1")?;
    for t in [q(1, 9), q(1, 2), qi(1)] {
        check(payoff_example1(&t, &one) == qi(0), "U1(t, 1) = 0")?;
        check(payoff_example2(&t, &zero) == qi(0), "U2(t, 0) = 0")?;
    }
    check(payoff_example1(&q(1, 4), &halfc) == q(1, 2), "U1(1/4, 1/2) = 1/2")?;
    check(payoff_example2(&qi(0), &one) == qi(0), "U2(0, f) = 0")?;
    check(payoff_example2(&q(1, 2), &one) == qi(0), "U2(1/2, 1) = 0")?;

    let params = AnonymousParams::default();
    let p0 = Distribution::point(0).map_err(e)?;
    let e1 = q(1, 10);
    let e3 = q(7, 10);
    check(payoff_w(&e3, 0, &p0, &params).map_err(e)? == qi(4), "W(E3, 0, p0) = 4")?;
    check(payoff_w(&e1, 0, &p0, &params).map_err(e)? == qi(2), "W(E1, 0, p0) = 2")?;
    let in_p2 = Distribution::new(vec![q(1, 5), qi(0), q(8, 15), q(4, 15)]).map_err(e)?;
    check(payoff_w(&e1, 2, &in_p2, &params).map_err(e)? == qi(4), "W(E1, 2, p ∈ P2) = 4")?;
    for t in [&e1, &e3] {
        check(payoff_w(t, 1, &p0, &params).map_err(e)? == qi(0), "W(t, 1, p ∉ P1) = 0")?;
        check(payoff_w(t, 1, &Distribution::uniform(), &params).map_err(e)? == qi(0), "W(t, 1, uniform) = 0")?;
    }
    let game = AnonymousGame::w().to_finite().map_err(e)?;
    let all_zero: Vec<Rational> = (0..3).map(|i| game.payoff(&[0, 0, 0, 0], i).clone()).collect();
    check(all_zero == vec![qi(2), qi(2), qi(4)], "all-zero cell payoffs (2, 2, 4)")?;
    let all_three: Vec<Rational> = (0..3).map(|i| game.payoff(&[3, 3, 3, 3], i).clone()).collect();
    check(all_three == vec![qi(0), qi(1), qi(2)], "all-three cell payoffs (0, 1, 2)")?;

    let d = params.compute_d();
    check(d == q(2, 15), "D = 2/15")?;
    check(
        payoff_w_tilde(&e3, 0, &p0, &params).map_err(e)? == qi(4) * d.clone() / qi(2),
        "W~(E3, 0, p0) = 4·D/2",
    )?;
    check(
        payoff_w_tilde(&e1, 2, &in_p2, &params).map_err(e)? == qi(4) * d.clone() / qi(2),
        "W~(E1, 2, p ∈ P2) = 4·D/2",
    )?;
    // p(1) = 1/2 is D/2 short of 2α = 8/15 in variation norm
    let boundary = Distribution::new(vec![q(1, 2), q(1, 2), qi(0), qi(0)]).map_err(e)?;
    check(params.dist_to_set(&boundary, 1) == d.clone() / qi(2), "distance D/2 to P1")?;
    check(payoff_w_tilde(&e1, 1, &boundary, &params).map_err(e)? == qi(0), "W~ = 0 at distance D/2")?;
    let far = Distribution::uniform();
    for a in 0..4 {
        for t in [&e1, &e3] {
            check(payoff_w_tilde(t, a, &far, &params).map_err(e)? <= qi(0), "W~ <= 0 beyond D/2")?;
        }
    }
    check(params.dist_to_set(&far, 1) == q(17, 30), "uniform to P1 = 17/30")?;
    let r = Distribution::new(vec![qi(0), q(1, 2), q(1, 2), qi(0)]).map_err(e)?;
    check(weakcore::anonymous::tv_distance(&boundary, &r) == qi(1), "d((½,½,0,0),(0,½,½,0)) = 1")?;
    check(
        weakcore::anonymous::tv_distance(&p0, &Distribution::point(1).map_err(e)?) == qi(2),
        "d(δ0, δ1) = 2",
    )?;
    Ok(format!("{n} exact values reproduced"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("anonymous W blocking cycle", w_cycle),
        ("smoothed anonymous game: empty weak-core with a best-response profile", w_tilde_contrast),
        ("first running-average example: 625 grid profiles blocked at 1/8", example1_family),
        ("second running-average example: empty alpha-core, unblocked pipeline output", example2_separation),
        ("characteristic form against brute-force oracles", finite_oracles),
        ("concave game pipeline convergence and blocking transfer", concave_pipeline),
        ("equi-usc falsification", equi_usc),
        ("fixture golden values", golden),
    ];
    let mut failures = 0;
    // ACCEPTANCE_ONLY=3,6 runs a subset
    let only: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|k| k.trim().parse().ok()).collect());
    for (k, (name, run)) in criteria.iter().enumerate() {
        if only.as_ref().is_some_and(|o| !o.contains(&(k + 1))) {
            continue;
        }
        match run() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", k + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL [{}] {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
