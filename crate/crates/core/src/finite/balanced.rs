//! Balanced collections of coalitions and the balancedness check of `V`.
//!
//! A family of coalitions is balanced when weights `w_S >= 0` exist with
//! `sum_{S ∋ i} w_S = 1` for every player. By Carathéodory's theorem for
//! cones this holds iff some linearly independent subfamily has a strictly
//! positive solution, so feasibility reduces to small exact linear solves.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::finite::characteristic::in_v_unchecked;
use crate::finite::game::{Coalition, FiniteGame, PayoffVector};
use crate::par::Execution;
use crate::scalar::{Rational, Scalar};

pub const MAX_BALANCED_PLAYERS: usize = 4;

/// Solves `sum_S w_S 1_S = 1_N` for linearly independent columns; `None`
/// when the columns are dependent or the system is inconsistent.
fn solve_independent(n: usize, columns: &[&Coalition]) -> Option<Vec<Rational>> {
    let k = columns.len();
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = columns
                .iter()
                .map(|c| if c.contains(i) { Rational::one() } else { Rational::zero() })
                .collect();
            row.push(Rational::one());
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..k {
        let p = (pivot_row..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot_row, p);
        let lead = m[pivot_row][col].clone();
        for v in m[pivot_row].iter_mut() {
            *v = v.clone() / lead.clone();
        }
        for r in 0..n {
            if r != pivot_row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..=k {
                    let d = f.clone() * m[pivot_row][c].clone();
                    m[r][c] = m[r][c].clone() - d;
                }
            }
        }
        pivot_row += 1;
    }
    // remaining rows must read 0 = 0
    if m[pivot_row..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|r| m[r][k].clone()).collect())
}

fn combinations(len: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if k == 0 || k > len {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if visit(&idx) {
            return;
        }
        let mut i = k;
        while i > 0 && idx[i - 1] == len - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Balancing weights for `family` over players `0..n`, aligned with the
/// family (zero for coalitions outside the supporting subfamily).
pub fn balancing_weights(n: usize, family: &[Coalition]) -> Option<Vec<Rational>> {
    let mut found = None;
    for size in 1..=n.min(family.len()) {
        combinations(family.len(), size, |idx| {
            let cols: Vec<&Coalition> = idx.iter().map(|&i| &family[i]).collect();
            if let Some(w) = solve_independent(n, &cols) {
                if w.iter().all(|x| x.is_positive()) {
                    let mut full = vec![Rational::zero(); family.len()];
                    for (&i, x) in idx.iter().zip(w) {
                        full[i] = x;
                    }
                    found = Some(full);
                    return true;
                }
            }
            false
        });
        if found.is_some() {
            break;
        }
    }
    found
}

#[derive(Clone, Debug, PartialEq)]
pub struct BalancedCollection {
    pub coalitions: Vec<Coalition>,
    pub weights: Vec<Rational>,
}

/// All minimal balanced collections on `n <= 4` players.
pub fn minimal_balanced_collections(n: usize) -> Result<Vec<BalancedCollection>> {
    if n == 0 || n > MAX_BALANCED_PLAYERS {
        return Err(Error::Capability(format!(
            "balanced-collection enumeration supports 1..={MAX_BALANCED_PLAYERS} players, got {n}"
        )));
    }
    let all = Coalition::all(n);
    let mut out = vec![];
    for size in 1..=n {
        combinations(all.len(), size, |idx| {
            let cols: Vec<&Coalition> = idx.iter().map(|&i| &all[i]).collect();
            if let Some(w) = solve_independent(n, &cols) {
                if w.iter().all(|x| x.is_positive()) {
                    out.push(BalancedCollection {
                        coalitions: cols.into_iter().cloned().collect(),
                        weights: w,
                    });
                }
            }
            false
        });
    }
    Ok(out)
}

/// A grid point where balancedness fails: every coalition of the family
/// can secure `y`, the grand coalition cannot.
#[derive(Clone, Debug)]
pub struct BalancednessViolation<P> {
    pub collection: BalancedCollection,
    pub y: PayoffVector<P>,
}

/// True iff for every minimal balanced collection and every grid vector
/// `y` lying in `V(S)` for all members `S`, `y` also lies in `V(N)`.
/// Checking minimal collections suffices: any balanced family contains one.
pub fn check_balanced<P: Scalar>(game: &FiniteGame<P>, y_grid: &[PayoffVector<P>]) -> Result<bool> {
    Ok(balancedness_violation(game, y_grid)?.is_none())
}

pub fn balancedness_violation<P: Scalar>(
    game: &FiniteGame<P>,
    y_grid: &[PayoffVector<P>],
) -> Result<Option<BalancednessViolation<P>>> {
    let collections = minimal_balanced_collections(game.n())?;
    for y in y_grid {
        if y.0.len() != game.n() {
            return Err(crate::error::invalid("grid vector length must equal the player count"));
        }
    }
    let all = Coalition::all(game.n());
    let grand = Coalition::grand(game.n());
    let exec = Execution::default();
    Ok(exec.find_map_first(y_grid.len(), |k| {
        let y = &y_grid[k];
        if in_v_unchecked(game, &grand, y) {
            return None;
        }
        let member: Vec<bool> = all.iter().map(|s| in_v_unchecked(game, s, y)).collect();
        let pos = |s: &Coalition| all.iter().position(|c| c == s).expect("coalition in list");
        collections
            .iter()
            .find(|b| b.coalitions.iter().all(|s| member[pos(s)]))
            .map(|b| BalancednessViolation {
                collection: b.clone(),
                y: y.clone(),
            })
    }))
}
