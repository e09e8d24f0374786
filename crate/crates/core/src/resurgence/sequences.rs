use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::families::GradedFamily;
use crate::monomial::{first_non_member, Monomial};
use crate::valuations::{family_value, MonomialValuation};

use super::SequenceValue;

/// Least `d` in `[lo, hi]` with `pred(d)`, for `pred` false then true.
pub(crate) fn least_monotone(lo: u64, hi: u64, mut pred: impl FnMut(u64) -> Result<bool>) -> Result<Option<u64>> {
    if lo > hi {
        return Ok(None);
    }
    let mut below = None::<u64>;
    let mut step = 1u64;
    let mut probe = lo;
    let found = loop {
        if pred(probe)? {
            break probe;
        }
        if probe == hi {
            return Ok(None);
        }
        below = Some(probe);
        probe = probe.saturating_add(step).min(hi);
        step = step.saturating_mul(2);
    };
    let (mut l, mut h) = (below.map_or(lo, |b| b + 1), found);
    while l < h {
        let mid = l + (h - l) / 2;
        if pred(mid)? {
            h = mid;
        } else {
            l = mid + 1;
        }
    }
    Ok(Some(l))
}

fn linear(lo: u64, hi: u64, mut pred: impl FnMut(u64) -> Result<bool>) -> Result<Option<u64>> {
    for d in lo..=hi {
        if pred(d)? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

fn check_args(a: &GradedFamily, b: &GradedFamily, cutoff: u64) -> Result<()> {
    check_dim(a.nvars(), b.nvars())?;
    if cutoff == 0 {
        return Err(Error::Domain("cutoff must be positive".into()));
    }
    Ok(())
}

/// Whether `b_d` is constant past some index at most `cutoff`, so a search
/// that saw no change up to the cutoff has seen everything.
fn settles_within(b: &GradedFamily, cutoff: u64) -> Result<bool> {
    Ok(b.constant_tail()?.is_some_and(|(t, _)| t <= cutoff))
}

/// `beta_s = inf { d : a_s ⊄ b_d }` with a witness generator of `a_s`
/// outside `b_d`.
pub(crate) fn beta_with_witness(
    a: &GradedFamily,
    b: &GradedFamily,
    s: u64,
    cutoff: u64,
) -> Result<(SequenceValue, Option<Monomial>)> {
    check_args(a, b, cutoff)?;
    if s == 0 {
        return Err(Error::Domain("beta is indexed from s = 1".into()));
    }
    let a_s = a.member(s)?;
    if a_s.is_zero() {
        return Ok((SequenceValue::EmptySet, None));
    }
    let fails = |d: u64| -> Result<bool> { Ok(first_non_member(&a_s, &b.member(d)?)?.is_some()) };
    let found = if b.filtration_basis().is_known() {
        least_monotone(1, cutoff, fails)?
    } else {
        linear(1, cutoff, fails)?
    };
    match found {
        Some(d) => {
            let w = first_non_member(&a_s, &b.member(d)?)?;
            Ok((SequenceValue::Finite(d), w))
        }
        None if settles_within(b, cutoff)? => Ok((SequenceValue::EmptySet, None)),
        None => Ok((SequenceValue::ExceedsBound(cutoff), None)),
    }
}

pub fn beta(a: &GradedFamily, b: &GradedFamily, s: u64, cutoff: u64) -> Result<SequenceValue> {
    Ok(beta_with_witness(a, b, s, cutoff)?.0)
}

/// `lambda_n = sup { d >= 0 : a_d ⊄ b_n }`, with `a_0 = S`.
pub fn lambda(a: &GradedFamily, b: &GradedFamily, n: u64, cutoff: u64) -> Result<SequenceValue> {
    check_args(a, b, cutoff)?;
    let b_n = b.member(n)?;
    if b_n.is_unit() {
        return Ok(SequenceValue::EmptySet);
    }
    let fails = |d: u64| -> Result<bool> { Ok(first_non_member(&a.member(d)?, &b_n)?.is_some()) };
    largest(a, cutoff, fails)
}

/// Largest failing `d` in `[0, cutoff]`, knowing `d = 0` fails.
fn largest(a: &GradedFamily, cutoff: u64, mut fails: impl FnMut(u64) -> Result<bool>) -> Result<SequenceValue> {
    if fails(cutoff)? {
        return Ok(SequenceValue::ExceedsBound(cutoff));
    }
    if a.filtration_basis().is_known() {
        let first_ok = least_monotone(0, cutoff, |d| Ok(!fails(d)?))?.unwrap_or(cutoff);
        return Ok(match first_ok {
            0 => SequenceValue::EmptySet,
            d => SequenceValue::Finite(d - 1),
        });
    }
    for d in (0..cutoff).rev() {
        if fails(d)? {
            return Ok(SequenceValue::Finite(d));
        }
    }
    Ok(SequenceValue::EmptySet)
}

fn lt(x: Option<u64>, y: Option<u64>) -> bool {
    // None is the value of the zero ideal, +infinity
    match (x, y) {
        (Some(x), Some(y)) => x < y,
        (Some(_), None) => true,
        (None, _) => false,
    }
}

/// `beta^v_s = inf { d : v(a_s) < v(b_d) }`, from value sequences only.
pub fn beta_v(v: &MonomialValuation, a: &GradedFamily, b: &GradedFamily, s: u64, cutoff: u64) -> Result<SequenceValue> {
    check_args(a, b, cutoff)?;
    check_dim(v.nvars(), a.nvars())?;
    if s == 0 {
        return Err(Error::Domain("beta is indexed from s = 1".into()));
    }
    let va = family_value(v, a, s as i64)?;
    if va.is_none() {
        return Ok(SequenceValue::EmptySet);
    }
    let fails = |d: u64| -> Result<bool> { Ok(lt(va, family_value(v, b, d as i64)?)) };
    let found = if b.filtration_basis().is_known() {
        least_monotone(1, cutoff, fails)?
    } else {
        linear(1, cutoff, fails)?
    };
    Ok(match found {
        Some(d) => SequenceValue::Finite(d),
        None if settles_within(b, cutoff)? => SequenceValue::EmptySet,
        None => SequenceValue::ExceedsBound(cutoff),
    })
}

/// `lambda^v_n = sup { d >= 0 : v(a_d) < v(b_n) }`.
pub fn lambda_v(v: &MonomialValuation, a: &GradedFamily, b: &GradedFamily, n: u64, cutoff: u64) -> Result<SequenceValue> {
    check_args(a, b, cutoff)?;
    check_dim(v.nvars(), a.nvars())?;
    let vb = family_value(v, b, n as i64)?;
    if vb == Some(0) {
        return Ok(SequenceValue::EmptySet);
    }
    let fails = |d: u64| -> Result<bool> { Ok(lt(family_value(v, a, d as i64)?, vb)) };
    largest(a, cutoff, fails)
}

pub fn beta_table(a: &GradedFamily, b: &GradedFamily, s_max: u64, cutoff: u64) -> Result<Vec<(u64, SequenceValue)>> {
    (1..=s_max).map(|s| Ok((s, beta(a, b, s, cutoff)?))).collect()
}

pub fn lambda_table(a: &GradedFamily, b: &GradedFamily, n_max: u64, cutoff: u64) -> Result<Vec<(u64, SequenceValue)>> {
    (1..=n_max).map(|n| Ok((n, lambda(a, b, n, cutoff)?))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DualValue {
    Finite(i64),
    /// The defining set is empty.
    Empty,
    /// The window does not decide the value.
    Undetermined,
}

/// Both duals of `alpha` (indexed from `n0`) against `beta` (from `m0`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualSequences {
    pub m0: i64,
    /// `inf { d >= n0 : alpha_d >= beta_n }`.
    pub left: Vec<DualValue>,
    /// `sup { d >= n0 : alpha_d <= beta_n }`.
    pub right: Vec<DualValue>,
}

/// The right dual is only decided when `alpha` is known nondecreasing.
pub fn dual_sequences(alpha: &[i64], n0: i64, beta: &[i64], m0: i64, alpha_nondecreasing: bool) -> DualSequences {
    let idx = |j: usize| n0 + j as i64;
    let mut left = Vec::with_capacity(beta.len());
    let mut right = Vec::with_capacity(beta.len());
    for &b in beta {
        left.push(match alpha.iter().position(|&a| a >= b) {
            Some(j) => DualValue::Finite(idx(j)),
            None => DualValue::Undetermined,
        });
        right.push(if !alpha_nondecreasing {
            DualValue::Undetermined
        } else {
            match alpha.iter().position(|&a| a > b) {
                Some(0) => DualValue::Empty,
                Some(j) => DualValue::Finite(idx(j - 1)),
                None => DualValue::Undetermined,
            }
        });
    }
    DualSequences { m0, left, right }
}
