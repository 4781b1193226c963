//! The value table `W` and the smoothed payoff `W̃`.

use serde::{Deserialize, Serialize};

use crate::anonymous::params::{AnonymousParams, Distribution, ACTIONS, CELLS, CELL_NAMES};
use crate::error::{invalid, Result};
use crate::finite::{FiniteGame, Joint, Player};
use crate::scalar::{q, qi, Rational};

/// Which payoff the game uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PayoffKind {
    /// `W(t, a, p)`: the table value when `p ∈ P_a`, else 0.
    W,
    /// `W̃(t, a, p) = W(t, a, P_a)(D/2 - d(p, P_a))`.
    WTilde,
}

/// Payoffs of the remainder cell, on which the table is silent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RemainderPolicy {
    /// The remainder is paid like `E3`, so that `T` blocks `≡3` by `≡0`.
    LikeE3,
    /// `W = 0` on the remainder.
    Zero,
}

/// `values[a][c]`: payoff of a player of cell `c` playing `a` when the
/// distribution of play lies in `P_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueTable {
    values: [[Rational; CELLS]; ACTIONS],
}

impl ValueTable {
    pub fn standard(remainder: RemainderPolicy) -> Self {
        let row = |e12: [i64; 3]| {
            let r = match remainder {
                RemainderPolicy::LikeE3 => e12[2],
                RemainderPolicy::Zero => 0,
            };
            [qi(e12[0]), qi(e12[1]), qi(e12[2]), qi(r)]
        };
        Self {
            values: [row([2, 2, 4]), row([3, 3, 0]), row([4, 0, 1]), row([0, 1, 2])],
        }
    }

    pub fn zero() -> Self {
        Self {
            values: std::array::from_fn(|_| std::array::from_fn(|_| qi(0))),
        }
    }

    pub fn get(&self, a: usize, c: usize) -> &Rational {
        &self.values[a][c]
    }

    pub fn set(&mut self, a: usize, c: usize, v: Rational) {
        self.values[a][c] = v;
    }

    /// Zeroes every entry of cell `c`.
    pub fn zero_cell(&mut self, c: usize) {
        for row in &mut self.values {
            row[c] = qi(0);
        }
    }

    fn max_abs(&self) -> Rational {
        self.values
            .iter()
            .flatten()
            .map(|v| if *v < qi(0) { -v.clone() } else { v.clone() })
            .max()
            .unwrap_or_else(|| qi(0))
    }
}

#[derive(Clone, Debug)]
pub struct AnonymousGame {
    pub kind: PayoffKind,
    pub params: AnonymousParams,
    pub table: ValueTable,
}

impl AnonymousGame {
    pub fn new(kind: PayoffKind, params: AnonymousParams) -> Self {
        Self {
            kind,
            params,
            table: ValueTable::standard(RemainderPolicy::LikeE3),
        }
    }

    pub fn w() -> Self {
        Self::new(PayoffKind::W, AnonymousParams::default())
    }

    pub fn w_tilde() -> Self {
        Self::new(PayoffKind::WTilde, AnonymousParams::default())
    }

    pub fn with_table(mut self, table: ValueTable) -> Self {
        self.table = table;
        self
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            PayoffKind::W => "anonymous-W",
            PayoffKind::WTilde => "anonymous-Wtilde",
        }
    }

    pub fn d(&self) -> Rational {
        self.params.compute_d()
    }

    /// Slack at which the sweep shows emptiness: `1/2` for `W`,
    /// `D/2 - 10^-9` for `W̃`.
    pub fn sweep_epsilon(&self) -> Rational {
        match self.kind {
            PayoffKind::W => q(1, 2),
            PayoffKind::WTilde => self.d() / qi(2) - q(1, 1_000_000_000),
        }
    }

    /// Payoff of a cell-`c` player playing `a` under `p`.
    pub fn cell_payoff(&self, c: usize, a: usize, p: &Distribution) -> Rational {
        let v = self.table.get(a, c).clone();
        match self.kind {
            PayoffKind::W => {
                if self.params.in_target(p, a) {
                    v
                } else {
                    qi(0)
                }
            }
            PayoffKind::WTilde => v * (self.d() / qi(2) - self.params.dist_to_set(p, a)),
        }
    }

    /// The same payoff when all that is known of `p` is its mass on `a`.
    /// Both payoffs depend on `p` only through `p(a)`.
    pub(crate) fn payoff_given_mass(&self, c: usize, a: usize, mass: &Rational) -> Rational {
        let mut m = vec![qi(0); ACTIONS];
        m[a] = mass.clone();
        m[if a == 0 { 1 } else { 0 }] = qi(1) - mass.clone();
        let p = Distribution::new(m).expect("mass lies in [0,1]");
        self.cell_payoff(c, a, &p)
    }

    pub fn payoff(&self, t: &Rational, a: usize, p: &Distribution) -> Result<Rational> {
        if a >= ACTIONS {
            return Err(invalid(format!("action {a} outside A0")));
        }
        Ok(self.cell_payoff(self.params.cell_of(t)?, a, p))
    }

    /// Four players, one per cell, weighted by cell measure, with per-capita
    /// payoffs at the induced distribution.
    pub fn to_finite(&self) -> Result<FiniteGame<Rational>> {
        let actions: Vec<String> = (0..ACTIONS).map(|a| a.to_string()).collect();
        let players = (0..CELLS)
            .map(|c| Player::new(CELL_NAMES[c], self.params.cell_measure(c), actions.clone()))
            .collect();
        let bound = self.table.max_abs() * qi(2) + qi(1);
        FiniteGame::from_fn(players, bound, |joint| {
            let p = self.params.distribution_of(joint).expect("joint ranges over A0");
            (0..CELLS).map(|c| self.cell_payoff(c, joint[c], &p)).collect()
        })
    }
}

/// `W(t, a, p)` with the standard table and default remainder policy.
pub fn payoff_w(t: &Rational, a: usize, p: &Distribution, params: &AnonymousParams) -> Result<Rational> {
    AnonymousGame::new(PayoffKind::W, params.clone()).payoff(t, a, p)
}

/// `W̃(t, a, p)` with the standard table and default remainder policy.
pub fn payoff_w_tilde(t: &Rational, a: usize, p: &Distribution, params: &AnonymousParams) -> Result<Rational> {
    AnonymousGame::new(PayoffKind::WTilde, params.clone()).payoff(t, a, p)
}

/// All `4^4` cellwise-constant profiles in lexicographic order.
pub fn cell_profiles() -> Vec<Joint> {
    (0..ACTIONS.pow(CELLS as u32))
        .map(|k| {
            let mut r = k;
            let mut j = vec![0; CELLS];
            for x in j.iter_mut().rev() {
                *x = r % ACTIONS;
                r /= ACTIONS;
            }
            j
        })
        .collect()
}

pub fn constant_profile(a: usize) -> Joint {
    vec![a; CELLS]
}

pub(crate) fn profile_label(joint: &[usize]) -> String {
    joint.iter().map(|a| a.to_string()).collect::<Vec<_>>().join("")
}
