use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::families::{is_standard_veronese, validate_filtration};
use crate::families::{Basis, GradedFamily};
use crate::monomial::first_non_member;

use super::asymptotic::rho_hat_rees;
use super::window::rho_window;
use super::{ExtendedRational, Hypothesis, HypothesisStatus, SearchOptions, Witness};

fn scale(k: u64, x: &ExtendedRational) -> ExtendedRational {
    match x {
        ExtendedRational::Finite(q) => ExtendedRational::Finite(q * BigRational::from_integer(BigInt::from(k))),
        other => other.clone(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VeroneseScalingReport {
    pub k: u64,
    pub veronese: Hypothesis,
    /// `rho_window(a, powers(b_k); S, S)`.
    pub left: ExtendedRational,
    /// `rho_window(a, b; S, kS)`.
    pub right: ExtendedRational,
    /// `k` times `right`.
    pub scaled_right: ExtendedRational,
    pub holds: bool,
    pub strict: bool,
    pub left_witness: Option<Witness>,
    pub right_witness: Option<Witness>,
    /// Rees-formula values when both are computable.
    pub hat_left: Option<ExtendedRational>,
    pub hat_right: Option<ExtendedRational>,
    /// `rho_hat(a, powers(b_k)) = k rho_hat(a, b)`.
    pub hat_equal: Option<bool>,
}

/// Compares the resurgence against the powers of `b_k` with `k` times the
/// resurgence against `b`; the inequality can be strict.
pub fn veronese_scaling_check(
    a: &GradedFamily,
    b: &GradedFamily,
    k: u64,
    opts: &SearchOptions,
) -> Result<VeroneseScalingReport> {
    check_dim(a.nvars(), b.nvars())?;
    if k == 0 {
        return Err(Error::Domain("Veronese degree must be positive".into()));
    }
    let veronese = match b.structural_veronese() {
        Some((k0, basis)) if k % k0 == 0 => Hypothesis::new(
            "standard Veronese",
            if basis == Basis::Structural { HypothesisStatus::Structural } else { HypothesisStatus::UserAsserted },
            format!("b_(kn) = b_k^n with k = {k}"),
        ),
        _ => {
            let r = is_standard_veronese(b, k, opts.horizon)?;
            match r.counterexample {
                None => Hypothesis::new("standard Veronese", HypothesisStatus::WindowChecked, format!("n <= {}", opts.horizon)),
                Some(c) => Hypothesis::new("standard Veronese", HypothesisStatus::Failed, format!("{}: {}", c.detail, c.witness)),
            }
        }
    };
    let pk = GradedFamily::powers(b.member(k)?);
    let s = opts.window;
    let l = rho_window(a, &pk, s, s)?;
    let r = rho_window(a, b, s, s.checked_mul(k).ok_or(Error::Overflow)?)?;
    let scaled = scale(k, &r.value);
    let (hat_left, hat_right, hat_equal) = match (rho_hat_rees(a, &pk, opts), rho_hat_rees(a, b, opts)) {
        (Ok(x), Ok(y)) => {
            let eq = x.value == scale(k, &y.value);
            (Some(x.value), Some(y.value), Some(eq))
        }
        _ => (None, None, None),
    };
    Ok(VeroneseScalingReport {
        k,
        veronese,
        holds: l.value <= scaled,
        strict: l.value < scaled,
        left: l.value,
        right: r.value,
        scaled_right: scaled,
        left_witness: l.witnesses.into_iter().next(),
        right_witness: r.witnesses.into_iter().next(),
        hat_left,
        hat_right,
        hat_equal,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearlyFinerReport {
    pub hypotheses: Vec<Hypothesis>,
    /// Window resurgence used for the slope.
    pub rho_star: ExtendedRational,
    /// `f(n) = slope n + intercept`.
    pub slope: u64,
    pub intercept: u64,
    pub checked_to: u64,
    pub holds: bool,
    /// `a_f(i) ⊄ b_i` at `s = f(i)`, `r = i`.
    pub counterexample: Option<Witness>,
}

/// Builds `f(n) = ceil(rho*) n + 1` from the window resurgence and checks
/// `a_f(i) ⊆ b_i` for `i <= check_to`.
pub fn linearly_finer_check(
    a: &GradedFamily,
    b: &GradedFamily,
    opts: &SearchOptions,
    check_to: u64,
) -> Result<LinearlyFinerReport> {
    check_dim(a.nvars(), b.nvars())?;
    let mut hypotheses = Vec::new();
    for (name, f) in [("a filtration", a), ("b filtration", b)] {
        let h = match f.filtration_basis() {
            Basis::Structural => Hypothesis::new(name, HypothesisStatus::Structural, ""),
            Basis::Asserted => Hypothesis::new(name, HypothesisStatus::UserAsserted, ""),
            Basis::Unknown => {
                let r = validate_filtration(f, opts.horizon)?;
                match r.counterexample {
                    None => Hypothesis::new(name, HypothesisStatus::WindowChecked, format!("n <= {}", opts.horizon)),
                    Some(c) => Hypothesis::new(name, HypothesisStatus::Failed, c.detail),
                }
            }
        };
        hypotheses.push(h);
    }
    let w = rho_window(a, b, opts.window, opts.window)?;
    let (slope, intercept) = match &w.value {
        ExtendedRational::Finite(q) => {
            let c = q.numer().div_ceil(q.denom());
            (u64::try_from(c.max(BigInt::from(0))).map_err(|_| Error::Overflow)?, 1)
        }
        _ => (1, 0),
    };
    let mut counterexample = None;
    for i in 1..=check_to {
        let s = slope.checked_mul(i).and_then(|x| x.checked_add(intercept)).ok_or(Error::Overflow)?;
        if let Some(m) = first_non_member(&a.member(s)?, &b.member(i)?)? {
            counterexample = Some(Witness { s, r: i, monomial: m });
            break;
        }
    }
    Ok(LinearlyFinerReport {
        hypotheses,
        rho_star: w.value,
        slope,
        intercept,
        checked_to: check_to,
        holds: counterexample.is_none(),
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::MonomialIdeal;
    use crate::polyhedra::ratio;

    #[test]
    fn powers_scale_exactly() {
        let m = MonomialIdeal::from_exponents(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let a = GradedFamily::powers(m.clone());
        let b = GradedFamily::ceiling(m, ratio(3, 2)).unwrap();
        let r = veronese_scaling_check(&a, &b, 2, &SearchOptions { window: 8, ..Default::default() }).unwrap();
        assert!(r.holds);
        assert_eq!(r.veronese.status, HypothesisStatus::Structural);
        assert_eq!(r.hat_equal, Some(true));
    }

    #[test]
    fn linear_bound_for_powers() {
        let m = MonomialIdeal::from_exponents(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let a = GradedFamily::powers(m.clone());
        let r = linearly_finer_check(&a, &a, &SearchOptions { window: 6, ..Default::default() }, 10).unwrap();
        assert_eq!((r.slope, r.intercept), (1, 1));
        assert!(r.holds);
    }
}
