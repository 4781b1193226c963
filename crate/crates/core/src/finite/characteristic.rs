//! The characteristic-function form `V(S)` of a finite game.
//!
//! `y` lies in `V(S)` iff some action `v_S` of the coalition guarantees every
//! member `i` at least `y_i` against all complement actions. Membership is
//! decided through `H(v_S, y) = min_{v_-S} min_{i in S} (u_i(v_S, v_-S) - y_i)`.

use crate::error::{invalid, Result};
use crate::finite::game::{Coalition, FiniteGame, Joint, PayoffVector, SubGrid};
use crate::par::Execution;
use crate::scalar::{at_least, Scalar};

fn check_assignment<P: Scalar>(game: &FiniteGame<P>, s: &Coalition, v_s: &[usize]) -> Result<()> {
    if s.members().iter().any(|&i| i >= game.n()) {
        return Err(invalid("coalition names an unknown player"));
    }
    if v_s.len() != s.len() {
        return Err(invalid("coalition assignment must cover exactly the members"));
    }
    for (&i, &a) in s.members().iter().zip(v_s) {
        if a >= game.radix()[i] {
            return Err(invalid(format!("action {a} out of range for player {i}")));
        }
    }
    Ok(())
}

fn check_vector<P: Scalar>(game: &FiniteGame<P>, y: &PayoffVector<P>) -> Result<()> {
    if y.0.len() != game.n() {
        return Err(invalid("payoff vector length must equal the player count"));
    }
    if y.0.iter().any(|v| !v.is_finite()) {
        return Err(invalid("payoff vector entries must be finite"));
    }
    Ok(())
}

/// `H(v_S, y)` by exhaustive enumeration of complement tuples. For the grand
/// coalition the complement is empty and the inner minimum stands alone.
pub fn h_value<P: Scalar>(
    game: &FiniteGame<P>,
    s: &Coalition,
    v_s: &[usize],
    y: &PayoffVector<P>,
) -> Result<P> {
    check_assignment(game, s, v_s)?;
    check_vector(game, y)?;
    Ok(h_unchecked(game, s, v_s, y))
}

fn h_unchecked<P: Scalar>(
    game: &FiniteGame<P>,
    s: &Coalition,
    v_s: &[usize],
    y: &PayoffVector<P>,
) -> P {
    let mut joint: Joint = vec![0; game.n()];
    for (&i, &a) in s.members().iter().zip(v_s) {
        joint[i] = a;
    }
    crate::finite::blocking::worst_gain(
        game,
        &y.0,
        s.members(),
        &s.complement(game.n()),
        &mut joint,
        None,
    )
    .expect("a nonempty coalition always yields at least one gain")
}

/// `y ∈ V(S)`, up to the scalar tolerance.
pub fn in_v<P: Scalar>(game: &FiniteGame<P>, s: &Coalition, y: &PayoffVector<P>) -> Result<bool> {
    check_vector(game, y)?;
    if s.members().iter().any(|&i| i >= game.n()) {
        return Err(invalid("coalition names an unknown player"));
    }
    Ok(in_v_unchecked(game, s, y))
}

pub(crate) fn in_v_unchecked<P: Scalar>(
    game: &FiniteGame<P>,
    s: &Coalition,
    y: &PayoffVector<P>,
) -> bool {
    let members = s.members();
    let mut v_s: Joint = vec![0; game.n()];
    let mut grid = SubGrid::new(members, game.radix());
    let zero = P::zero();
    while grid.advance(&mut v_s) {
        let assignment: Vec<usize> = members.iter().map(|&i| v_s[i]).collect();
        if at_least(&h_unchecked(game, s, &assignment, y), &zero) {
            return true;
        }
    }
    false
}

/// Parameters of the grid search for a core point of `V`.
#[derive(Clone, Debug)]
pub struct CoreSearch<P> {
    /// Spacing of the payoff lattice searched after the attained vectors.
    pub resolution: P,
    /// Interiority step: `y` is interior to `V(S)` when `y + delta·1_S ∈ V(S)`.
    /// Defaults to `resolution`.
    pub delta: Option<P>,
    /// Upper bound on lattice points; the lattice is skipped when larger.
    pub max_lattice_points: usize,
}

impl<P: Scalar> CoreSearch<P> {
    pub fn new(resolution: P) -> Self {
        Self {
            resolution,
            delta: None,
            max_lattice_points: 200_000,
        }
    }

    pub fn delta(&self) -> P {
        self.delta.clone().unwrap_or_else(|| self.resolution.clone())
    }
}

/// Payoff vectors in the core of `V`: in `V(N)` and not interior to any
/// `V(S)`. Candidates are the attained payoff vectors in joint order,
/// followed by a lattice spanning the payoff range. Returns the first core
/// vector together with the first joint tuple meeting it componentwise.
pub fn core_point_from_characteristic<P: Scalar>(
    game: &FiniteGame<P>,
    search: &CoreSearch<P>,
) -> Result<Option<(PayoffVector<P>, Joint)>> {
    core_point_with(Execution::default(), game, search)
}

pub fn core_point_with<P: Scalar>(
    exec: Execution,
    game: &FiniteGame<P>,
    search: &CoreSearch<P>,
) -> Result<Option<(PayoffVector<P>, Joint)>> {
    if search.resolution <= P::zero() || search.delta() <= P::zero() {
        return Err(invalid("core search resolution and delta must be positive"));
    }
    let delta = search.delta();
    let coalitions = Coalition::all(game.n());
    let grand = Coalition::grand(game.n());

    let is_core = |y: &PayoffVector<P>| {
        in_v_unchecked(game, &grand, y)
            && coalitions
                .iter()
                .all(|s| !in_v_unchecked(game, s, &y.raised_on(s, &delta)))
    };

    let mut attained: Vec<PayoffVector<P>> = Vec::new();
    for k in 0..game.joint_count() {
        let y = PayoffVector((0..game.n()).map(|i| game.payoff_at(k, i).clone()).collect());
        if !attained.contains(&y) {
            attained.push(y);
        }
    }
    let found = exec
        .find_map_first(attained.len(), |k| is_core(&attained[k]).then(|| attained[k].clone()));
    let found = match found {
        Some(y) => Some(y),
        None => {
            let lattice = payoff_lattice(game, &search.resolution, search.max_lattice_points);
            exec.find_map_first(lattice.len(), |k| is_core(&lattice[k]).then(|| lattice[k].clone()))
        }
    };
    Ok(found.and_then(|y| {
        let k = (0..game.joint_count())
            .find(|&k| y.dominated_by(&(0..game.n()).map(|i| game.payoff_at(k, i).clone()).collect::<Vec<_>>()))?;
        Some((y, game.indexer().decode(k)))
    }))
}

/// Lattice of payoff vectors from each player's minimum payoff to its
/// maximum in steps of `resolution`; empty if it would exceed `cap` points.
pub fn payoff_lattice<P: Scalar>(
    game: &FiniteGame<P>,
    resolution: &P,
    cap: usize,
) -> Vec<PayoffVector<P>> {
    let axes: Vec<Vec<P>> = game
        .payoff_range()
        .into_iter()
        .map(|(lo, hi)| {
            let mut axis = vec![];
            let mut v = lo;
            while v <= hi.clone() + P::tolerance() {
                axis.push(v.clone());
                v = v + resolution.clone();
                if axis.len() > cap {
                    break;
                }
            }
            axis
        })
        .collect();
    let total = axes
        .iter()
        .try_fold(1usize, |acc, a| acc.checked_mul(a.len()))
        .unwrap_or(usize::MAX);
    if total > cap || total == 0 {
        return vec![];
    }
    let mut out = Vec::with_capacity(total);
    let radix: Vec<usize> = axes.iter().map(Vec::len).collect();
    let positions: Vec<usize> = (0..axes.len()).collect();
    let mut idx = vec![0; axes.len()];
    let mut grid = SubGrid::new(&positions, &radix);
    while grid.advance(&mut idx) {
        out.push(PayoffVector(
            idx.iter().zip(&axes).map(|(&k, a)| a[k].clone()).collect(),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::blocking::is_unblocked;
    use crate::finite::game::Player;
    use crate::scalar::{q, qi, Rational};

    fn players(sizes: &[usize]) -> Vec<Player> {
        sizes
            .iter()
            .enumerate()
            .map(|(i, &s)| Player::new(format!("p{i}"), qi(1), (0..s).map(|a| a.to_string()).collect()))
            .collect()
    }

    fn coordination() -> FiniteGame<Rational> {
        // player 0 payoff a0 * a1 on {0,1,2}^2, player 1 payoff 2 - a1
        FiniteGame::from_fn(players(&[3, 3]), qi(4), |j| {
            vec![qi((j[0] * j[1]) as i64), qi(2 - j[1] as i64)]
        })
        .unwrap()
    }

    #[test]
    fn h_for_singleton_is_min_over_opponent() {
        let g = coordination();
        let s = Coalition::new(vec![0]).unwrap();
        let y = PayoffVector(vec![qi(1), qi(0)]);
        for a in 0..3 {
            let direct = (0..3)
                .map(|b| g.payoff(&[a, b], 0).clone() - qi(1))
                .min()
                .unwrap();
            assert_eq!(h_value(&g, &s, &[a], &y).unwrap(), direct);
        }
    }

    #[test]
    fn h_grand_coalition_identity() {
        let g = coordination();
        let n = Coalition::grand(2);
        for v in g.all_joints() {
            let y = g.evaluate(&v).unwrap();
            assert_eq!(h_value(&g, &n, &v, &y).unwrap(), qi(0));
        }
    }

    #[test]
    fn h_nonnegative_below_minimum() {
        let g = coordination();
        let floor = PayoffVector(vec![qi(0), qi(0)]);
        for s in Coalition::all(2) {
            let mut v_s = vec![0; s.len()];
            let radix: Vec<usize> = s.members().iter().map(|&i| g.radix()[i]).collect();
            let pos: Vec<usize> = (0..s.len()).collect();
            let mut it = SubGrid::new(&pos, &radix);
            while it.advance(&mut v_s) {
                assert!(h_value(&g, &s, &v_s, &floor).unwrap() >= qi(0));
            }
        }
    }

    #[test]
    fn floor_vector_is_in_every_v() {
        let g = coordination();
        let b = g.bound().clone();
        let y = PayoffVector(vec![-b.clone() - qi(1), -b - qi(1)]);
        for s in Coalition::all(2) {
            assert!(in_v(&g, &s, &y).unwrap());
        }
    }

    #[test]
    fn single_player_core_point() {
        let vals = [qi(1), qi(4), qi(2)];
        let g = FiniteGame::from_fn(players(&[3]), qi(4), |j| vec![vals[j[0]].clone()]).unwrap();
        let (y, v) = core_point_from_characteristic(&g, &CoreSearch::new(q(1, 2)))
            .unwrap()
            .unwrap();
        assert_eq!(y.0, vec![qi(4)]);
        assert_eq!(v, vec![1]);
    }

    #[test]
    fn common_payoff_core_point() {
        let u = |j: &[usize]| qi((j[0] + 2 * j[1]) as i64 % 4);
        let g = FiniteGame::from_fn(players(&[2, 3]), qi(3), |j| vec![u(j), u(j)]).unwrap();
        let (y, v) = core_point_from_characteristic(&g, &CoreSearch::new(qi(1)))
            .unwrap()
            .unwrap();
        assert_eq!(y.0, vec![qi(3), qi(3)]);
        assert_eq!(u(&v), qi(3));
        assert!(is_unblocked(&g, &v, &qi(1)));
    }

    #[test]
    fn lattice_spans_payoff_range() {
        let g = coordination();
        let lat = payoff_lattice(&g, &qi(1), 1000);
        // player 0 ranges over 0..=4, player 1 over 0..=2
        assert_eq!(lat.len(), 5 * 3);
        assert!(payoff_lattice(&g, &q(1, 1000), 100).is_empty());
    }
}
