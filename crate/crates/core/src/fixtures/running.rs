//! Running average `Γ(t, f) = (1/t) ∫_0^t f` and its running supremum
//! `G(t, f) = sup_{0 < s <= t} Γ(s, f)`, exact on step profiles.

use crate::continuum::StepProfile;
use crate::error::{invalid, Result};
use crate::scalar::{Rational, Scalar};

pub(crate) fn integral_to<T: Scalar>(t: &T, breaks: &[T], values: &[T]) -> T {
    let mut acc = T::zero();
    for (w, v) in breaks.windows(2).zip(values) {
        if w[0] >= *t {
            break;
        }
        let hi = if w[1] < *t { w[1].clone() } else { t.clone() };
        acc = acc + v.clone() * (hi - w[0].clone());
    }
    acc
}

pub(crate) fn gamma_raw<T: Scalar>(t: &T, breaks: &[T], values: &[T]) -> T {
    integral_to(t, breaks, values) / t.clone()
}

/// On each piece `(b_k, b_{k+1}]`, `Γ(s) = (C + v (s - b_k)) / s` is
/// monotone in `s`, so the supremum over `(0, t]` is attained at a piece
/// end or at `t`. Continuity of `Γ` on `(0, 1]` covers left ends.
pub(crate) fn running_sup_raw<T: Scalar>(t: &T, breaks: &[T], values: &[T]) -> T {
    let mut best = values[0].clone();
    for w in breaks.windows(2) {
        if w[0] >= *t {
            break;
        }
        let end = if w[1] < *t { w[1].clone() } else { t.clone() };
        let g = gamma_raw(&end, breaks, values);
        if g > best {
            best = g;
        }
    }
    best
}

fn positive(t: &Rational) -> Result<()> {
    if *t <= Rational::from_i64(0) || *t > Rational::from_i64(1) {
        return Err(invalid(format!("t = {t} outside (0,1]; the running average is undefined there")));
    }
    Ok(())
}

pub fn gamma(t: &Rational, f: &StepProfile) -> Result<Rational> {
    positive(t)?;
    Ok(gamma_raw(t, f.breaks(), f.values()))
}

pub fn running_sup(t: &Rational, f: &StepProfile) -> Result<Rational> {
    positive(t)?;
    Ok(running_sup_raw(t, f.breaks(), f.values()))
}
