use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::{serde_q, Rational, Scalar};

/// A joint action tuple: one action index per player.
pub type Joint = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Player {
    pub id: String,
    /// Measure of the player (a cell length for discretized games).
    #[serde(with = "serde_q")]
    pub weight: Rational,
    /// Ordered action labels.
    pub actions: Vec<String>,
}

impl Player {
    pub fn new(id: impl Into<String>, weight: Rational, actions: Vec<String>) -> Self {
        Self {
            id: id.into(),
            weight,
            actions,
        }
    }
}

/// A nonempty, sorted set of player indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition(Vec<usize>);

impl Coalition {
    pub fn new(mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(invalid("coalition must be nonempty"));
        }
        Ok(Self(members))
    }

    pub fn grand(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// Players of `0..n` outside the coalition.
    pub fn complement(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|i| !self.contains(*i)).collect()
    }

    /// All nonempty coalitions of `0..n`, ordered by size and then
    /// lexicographically by member list.
    pub fn all(n: usize) -> Vec<Coalition> {
        let mut out = Vec::with_capacity((1usize << n).saturating_sub(1));
        for k in 1..=n {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                out.push(Coalition(idx.clone()));
                // next k-combination in lex order
                let mut i = k;
                while i > 0 && idx[i - 1] == n - k + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for j in i..k {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        out
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, m) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PayoffVector<P>(pub Vec<P>);

impl<P: Scalar> PayoffVector<P> {
    /// `self + step` on the coordinates in `s`.
    pub fn raised_on(&self, s: &Coalition, step: &P) -> Self {
        let mut y = self.0.clone();
        for &i in s.members() {
            y[i] = y[i].clone() + step.clone();
        }
        Self(y)
    }

    pub fn dominated_by(&self, other: &[P]) -> bool {
        self.0
            .iter()
            .zip(other)
            .all(|(y, u)| crate::scalar::at_least(u, y))
    }
}

/// Mixed-radix encoding of joint tuples; player 0 is the most significant
/// digit, so index order is lexicographic tuple order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointIndexer {
    radix: Vec<usize>,
    total: usize,
}

impl JointIndexer {
    pub fn new(radix: Vec<usize>) -> Result<Self> {
        let mut total: usize = 1;
        for &r in &radix {
            if r == 0 {
                return Err(invalid("every player needs at least one action"));
            }
            total = total
                .checked_mul(r)
                .ok_or_else(|| invalid("joint action space too large"))?;
        }
        Ok(Self { radix, total })
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn radix(&self) -> &[usize] {
        &self.radix
    }

    pub fn index(&self, joint: &[usize]) -> usize {
        joint
            .iter()
            .zip(&self.radix)
            .fold(0, |acc, (&a, &r)| acc * r + a)
    }

    pub fn decode_into(&self, mut index: usize, out: &mut [usize]) {
        for (slot, &r) in out.iter_mut().zip(&self.radix).rev() {
            *slot = index % r;
            index /= r;
        }
    }

    pub fn decode(&self, index: usize) -> Joint {
        let mut out = vec![0; self.radix.len()];
        self.decode_into(index, &mut out);
        out
    }
}

/// Iterates the sub-grid spanned by `positions` of a joint tuple in
/// lexicographic order, writing each assignment into `joint` in place.
pub(crate) struct SubGrid<'a> {
    positions: &'a [usize],
    radix: &'a [usize],
    started: bool,
}

impl<'a> SubGrid<'a> {
    pub(crate) fn new(positions: &'a [usize], radix: &'a [usize]) -> Self {
        Self {
            positions,
            radix,
            started: false,
        }
    }

    /// Advances `joint` to the next assignment; false once exhausted.
    pub(crate) fn advance(&mut self, joint: &mut [usize]) -> bool {
        if !self.started {
            self.started = true;
            for &p in self.positions {
                joint[p] = 0;
            }
            return true;
        }
        for &p in self.positions.iter().rev() {
            joint[p] += 1;
            if joint[p] < self.radix[p] {
                return true;
            }
            joint[p] = 0;
        }
        false
    }
}

/// A finite NTU strategic game with a dense payoff table.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteGame<P> {
    players: Vec<Player>,
    indexer: JointIndexer,
    // payoffs[joint_index * n + player]
    payoffs: Vec<P>,
    bound: P,
}

impl<P: Scalar> FiniteGame<P> {
    /// `table[k]` holds the payoff vector of the joint tuple with index `k`.
    pub fn new(players: Vec<Player>, table: Vec<Vec<P>>, bound: P) -> Result<Self> {
        if players.is_empty() {
            return Err(invalid("a game needs at least one player"));
        }
        for p in &players {
            if p.weight <= num_traits::Zero::zero() {
                return Err(invalid(format!("player {} has nonpositive weight", p.id)));
            }
        }
        let indexer = JointIndexer::new(players.iter().map(|p| p.actions.len()).collect())?;
        if table.len() != indexer.len() {
            return Err(invalid(format!(
                "payoff table has {} rows, expected {}",
                table.len(),
                indexer.len()
            )));
        }
        let n = players.len();
        let mut payoffs = Vec::with_capacity(n * table.len());
        for (k, row) in table.into_iter().enumerate() {
            if row.len() != n {
                return Err(invalid(format!("payoff row {k} has {} entries", row.len())));
            }
            for (i, u) in row.into_iter().enumerate() {
                check_payoff(&u, &bound, k, i)?;
                payoffs.push(u);
            }
        }
        Ok(Self {
            players,
            indexer,
            payoffs,
            bound,
        })
    }

    /// Builds the table by calling `payoff` on every joint tuple.
    pub fn from_fn(
        players: Vec<Player>,
        bound: P,
        payoff: impl Fn(&[usize]) -> Vec<P>,
    ) -> Result<Self> {
        let indexer = JointIndexer::new(players.iter().map(|p| p.actions.len()).collect())?;
        let table = (0..indexer.len())
            .map(|k| payoff(&indexer.decode(k)))
            .collect();
        Self::new(players, table, bound)
    }

    pub fn players(&self) -> &[Player] {
        &self.players
    }

    pub fn n(&self) -> usize {
        self.players.len()
    }

    pub fn bound(&self) -> &P {
        &self.bound
    }

    pub fn indexer(&self) -> &JointIndexer {
        &self.indexer
    }

    pub fn radix(&self) -> &[usize] {
        self.indexer.radix()
    }

    pub fn joint_count(&self) -> usize {
        self.indexer.len()
    }

    pub fn validate_joint(&self, joint: &[usize]) -> Result<()> {
        if joint.len() != self.n() {
            return Err(invalid(format!(
                "joint tuple has {} entries for {} players",
                joint.len(),
                self.n()
            )));
        }
        for (i, (&a, &r)) in joint.iter().zip(self.radix()).enumerate() {
            if a >= r {
                return Err(invalid(format!(
                    "action index {a} out of range for player {}",
                    self.players[i].id
                )));
            }
        }
        Ok(())
    }

    /// Maps action labels to a joint tuple.
    pub fn joint_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Joint> {
        if labels.len() != self.n() {
            return Err(invalid("one action label per player required"));
        }
        labels
            .iter()
            .zip(&self.players)
            .map(|(l, p)| {
                p.actions
                    .iter()
                    .position(|a| a == l.as_ref())
                    .ok_or_else(|| invalid(format!("unknown action {:?} for {}", l.as_ref(), p.id)))
            })
            .collect()
    }

    pub fn player_index(&self, id: &str) -> Option<usize> {
        self.players.iter().position(|p| p.id == id)
    }

    /// Payoff of `player` at the joint tuple with index `k`.
    #[inline]
    pub fn payoff_at(&self, k: usize, player: usize) -> &P {
        &self.payoffs[k * self.n() + player]
    }

    #[inline]
    pub fn payoff(&self, joint: &[usize], player: usize) -> &P {
        self.payoff_at(self.indexer.index(joint), player)
    }

    pub fn evaluate(&self, joint: &[usize]) -> Result<PayoffVector<P>> {
        self.validate_joint(joint)?;
        let k = self.indexer.index(joint);
        Ok(PayoffVector(
            (0..self.n()).map(|i| self.payoff_at(k, i).clone()).collect(),
        ))
    }

    pub fn all_joints(&self) -> impl Iterator<Item = Joint> + '_ {
        (0..self.joint_count()).map(|k| self.indexer.decode(k))
    }

    /// Per-player minimum and maximum over the payoff table.
    pub fn payoff_range(&self) -> Vec<(P, P)> {
        (0..self.n())
            .map(|i| {
                let mut lo = self.payoff_at(0, i).clone();
                let mut hi = lo.clone();
                for k in 1..self.joint_count() {
                    let u = self.payoff_at(k, i);
                    if *u < lo {
                        lo = u.clone();
                    }
                    if *u > hi {
                        hi = u.clone();
                    }
                }
                (lo, hi)
            })
            .collect()
    }
}

fn check_payoff<P: Scalar>(u: &P, bound: &P, row: usize, player: usize) -> Result<()> {
    if !u.is_finite() {
        return Err(invalid(format!("payoff ({row},{player}) is not finite")));
    }
    if u.abs() > bound.clone() + P::tolerance() {
        return Err(invalid(format!(
            "payoff ({row},{player}) = {u:?} exceeds the declared bound {bound:?}"
        )));
    }
    Ok(())
}
