//! Closed-form continuum payoffs.

use crate::continuum::{ContinuumGame, FloatProfile, StepProfile};
use crate::fixtures::running::{gamma_raw, integral_to, running_sup_raw};
use crate::scalar::{min_of, Rational, Scalar};

fn tail_term<T: Scalar>(t: &T, breaks: &[T], values: &[T]) -> T {
    (T::one() - running_sup_raw(t, breaks, values)) * (T::one() - t.clone()) / t.clone()
}

fn example1_raw<T: Scalar>(t: &T, breaks: &[T], values: &[T]) -> T {
    if *t <= T::zero() {
        return T::one();
    }
    min_of(gamma_raw(t, breaks, values), tail_term(t, breaks, values))
}

fn example2_raw<T: Scalar>(t: &T, breaks: &[T], values: &[T]) -> T {
    if *t <= T::zero() {
        return T::zero();
    }
    min_of(integral_to(t, breaks, values), tail_term(t, breaks, values))
}

/// `U(t, f) = min{Γ(t,f), (1 - G(t,f))(1 - t)/t}` for `t > 0`, and `1` at 0.
/// Its weak-core is empty.
#[derive(Clone, Copy, Debug, Default)]
pub struct Example1;

/// `U(t, f) = min{∫_0^t f, (1 - G(t,f))(1 - t)/t}` for `t > 0`, and `0` at 0.
/// Its alpha-core is empty while its weak-core is not.
#[derive(Clone, Copy, Debug, Default)]
pub struct Example2;

/// `U(t, f) = 1 - |∫_0^1 f - t|`: concave in `f`, jointly continuous.
#[derive(Clone, Copy, Debug, Default)]
pub struct ConcaveTest;

pub fn payoff_example1(t: &Rational, f: &StepProfile) -> Rational {
    example1_raw(t, f.breaks(), f.values())
}

pub fn payoff_example2(t: &Rational, f: &StepProfile) -> Rational {
    example2_raw(t, f.breaks(), f.values())
}

impl ContinuumGame for Example1 {
    fn name(&self) -> &str {
        "example1"
    }
    fn bound(&self) -> Rational {
        Rational::from_i64(1)
    }
    fn payoff(&self, t: &Rational, f: &StepProfile) -> Rational {
        payoff_example1(t, f)
    }
    fn payoff_f64(&self, t: f64, f: &FloatProfile) -> f64 {
        example1_raw(&t, &f.breaks, &f.values)
    }
    fn is_causal(&self) -> bool {
        true
    }
}

impl ContinuumGame for Example2 {
    fn name(&self) -> &str {
        "example2"
    }
    fn bound(&self) -> Rational {
        Rational::from_i64(1)
    }
    fn payoff(&self, t: &Rational, f: &StepProfile) -> Rational {
        payoff_example2(t, f)
    }
    fn payoff_f64(&self, t: f64, f: &FloatProfile) -> f64 {
        example2_raw(&t, &f.breaks, &f.values)
    }
    fn is_causal(&self) -> bool {
        true
    }
}

/// `∫_lo^hi |t - m| dt`.
fn abs_integral(m: f64, lo: f64, hi: f64) -> f64 {
    if m <= lo {
        ((hi - m).powi(2) - (lo - m).powi(2)) / 2.0
    } else if m >= hi {
        ((m - lo).powi(2) - (m - hi).powi(2)) / 2.0
    } else {
        ((m - lo).powi(2) + (hi - m).powi(2)) / 2.0
    }
}

impl ContinuumGame for ConcaveTest {
    fn name(&self) -> &str {
        "concave-test"
    }
    fn bound(&self) -> Rational {
        Rational::from_i64(1)
    }
    fn payoff(&self, t: &Rational, f: &StepProfile) -> Rational {
        let m = f.integral_to(&Rational::from_i64(1));
        Rational::from_i64(1) - Scalar::abs(&(m - t.clone()))
    }
    fn payoff_f64(&self, t: f64, f: &FloatProfile) -> f64 {
        1.0 - (f.integral_to(1.0) - t).abs()
    }
    fn cell_integral(&self, lo: f64, hi: f64, f: &FloatProfile) -> Option<f64> {
        Some((hi - lo) - abs_integral(f.integral_to(1.0), lo, hi))
    }
    fn kinks(&self, f: &FloatProfile) -> Vec<f64> {
        vec![f.integral_to(1.0)]
    }
}
