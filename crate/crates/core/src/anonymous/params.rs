//! Distributions over `A0 = {0,1,2,3}`, the cell geometry of the player
//! interval and the target sets `P_i`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::continuum::Interval;
use crate::error::{invalid, Result};
use crate::scalar::{q, qi, serde_q, serde_q_vec, Rational};

pub const ACTIONS: usize = 4;

/// The four player cells `E1, E2, E3` and the remainder.
pub const CELLS: usize = 4;

pub const CELL_NAMES: [&str; CELLS] = ["E1", "E2", "E3", "R"];

/// A probability vector over `A0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DistributionDoc", into = "DistributionDoc")]
pub struct Distribution {
    mass: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct DistributionDoc {
    #[serde(with = "serde_q_vec")]
    mass: Vec<Rational>,
}

impl TryFrom<DistributionDoc> for Distribution {
    type Error = crate::error::Error;
    fn try_from(d: DistributionDoc) -> Result<Self> {
        Distribution::new(d.mass)
    }
}

impl From<Distribution> for DistributionDoc {
    fn from(d: Distribution) -> Self {
        DistributionDoc { mass: d.mass }
    }
}

impl Distribution {
    pub fn new(mass: Vec<Rational>) -> Result<Self> {
        if mass.len() != ACTIONS {
            return Err(invalid(format!("a distribution needs {ACTIONS} entries")));
        }
        if mass.iter().any(Signed::is_negative) {
            return Err(invalid("negative probability mass"));
        }
        if mass.iter().sum::<Rational>() != qi(1) {
            return Err(invalid("probability mass must sum to 1"));
        }
        Ok(Self { mass })
    }

    /// Point mass on `a`.
    pub fn point(a: usize) -> Result<Self> {
        if a >= ACTIONS {
            return Err(invalid(format!("action {a} outside A0")));
        }
        let mut mass = vec![qi(0); ACTIONS];
        mass[a] = qi(1);
        Ok(Self { mass })
    }

    pub fn uniform() -> Self {
        Self {
            mass: vec![q(1, 4); ACTIONS],
        }
    }

    pub fn mass(&self, a: usize) -> &Rational {
        &self.mass[a]
    }

    pub fn masses(&self) -> &[Rational] {
        &self.mass
    }
}

/// `Σ_a |p(a) - q(a)|`, the variation norm without the factor one half.
pub fn tv_distance(p: &Distribution, r: &Distribution) -> Rational {
    p.mass
        .iter()
        .zip(&r.mass)
        .map(|(x, y)| Signed::abs(&(x.clone() - y.clone())))
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnonymousParams {
    #[serde(with = "serde_q")]
    epsilon_geom: Rational,
    #[serde(with = "serde_q")]
    alpha: Rational,
}

impl Default for AnonymousParams {
    fn default() -> Self {
        Self::new(q(1, 10)).expect("1/10 is admissible")
    }
}

impl AnonymousParams {
    /// `α = (1 - 2ε)/3`; requires `0 < ε < 1/8` so that `2α > 1/2` keeps the
    /// target sets apart.
    pub fn new(epsilon_geom: Rational) -> Result<Self> {
        if epsilon_geom <= Rational::zero() || epsilon_geom >= q(1, 8) {
            return Err(invalid(format!(
                "epsilon_geom = {epsilon_geom} must lie in (0, 1/8) for the target sets to be disjoint"
            )));
        }
        let alpha = (qi(1) - qi(2) * epsilon_geom.clone()) / qi(3);
        Ok(Self { epsilon_geom, alpha })
    }

    pub fn epsilon_geom(&self) -> &Rational {
        &self.epsilon_geom
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    /// `2α`, the threshold of the sets `P_1, P_2, P_3`.
    pub fn threshold(&self) -> Rational {
        qi(2) * self.alpha.clone()
    }

    pub fn cell_measure(&self, c: usize) -> Rational {
        if c < 3 {
            self.alpha.clone()
        } else {
            qi(2) * self.epsilon_geom.clone()
        }
    }

    /// `E1 = (0, α]`, `E2 = (α, 2α]`, `E3 = (2α, 3α]`, remainder `(3α, 1]`.
    pub fn cell(&self, c: usize) -> Interval {
        let k = |j: i64| qi(j) * self.alpha.clone();
        let (lo, hi) = match c {
            0 => (qi(0), k(1)),
            1 => (k(1), k(2)),
            2 => (k(2), k(3)),
            _ => (k(3), qi(1)),
        };
        Interval::new(lo, hi).expect("cells have positive length")
    }

    /// Cell of a player `t ∈ [0,1]`; `t = 0` is placed in `E1`.
    pub fn cell_of(&self, t: &Rational) -> Result<usize> {
        if t.is_negative() || *t > qi(1) {
            return Err(invalid(format!("player {t} outside [0,1]")));
        }
        Ok((0..CELLS).find(|&c| self.cell(c).contains(t)).unwrap_or(0))
    }

    /// Distribution of play when cell `c` plays `actions[c]`.
    pub fn distribution_of(&self, actions: &[usize]) -> Result<Distribution> {
        if actions.len() != CELLS || actions.iter().any(|&a| a >= ACTIONS) {
            return Err(invalid("a cell profile assigns one action of A0 to each of the four cells"));
        }
        let mut mass = vec![qi(0); ACTIONS];
        for (c, &a) in actions.iter().enumerate() {
            mass[a] += self.cell_measure(c);
        }
        Ok(Distribution { mass })
    }

    /// `p ∈ P_i`; boundary points count as inside.
    pub fn in_target(&self, p: &Distribution, i: usize) -> bool {
        if i == 0 {
            p.mass[0] == qi(1)
        } else {
            p.mass[i] >= self.threshold()
        }
    }

    /// `d(p, P_i)`: for `i >= 1` mass must be moved onto `i` until it reaches
    /// `2α`, each unit moved counting twice; `P_0` is the single point mass.
    pub fn dist_to_set(&self, p: &Distribution, i: usize) -> Rational {
        if i == 0 {
            qi(2) * (qi(1) - p.mass[0].clone())
        } else {
            let gap = self.threshold() - p.mass[i].clone();
            if gap.is_positive() {
                qi(2) * gap
            } else {
                qi(0)
            }
        }
    }

    /// `D = min_{i≠j} d(P_i, P_j) = min(4α, 2(4α - 1))`: `4α` for pairs with
    /// `P_0`, `2(4α - 1)` for two thresholded sets.
    pub fn compute_d(&self) -> Rational {
        let with_point = qi(4) * self.alpha.clone();
        let between = qi(2) * (qi(4) * self.alpha.clone() - qi(1));
        if with_point < between {
            with_point
        } else {
            between
        }
    }
}
