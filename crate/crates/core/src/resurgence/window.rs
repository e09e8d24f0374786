use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{check_dim, Error, Result};
use crate::families::GradedFamily;
use crate::monomial::is_subset;

use super::asymptotic::rho_hat_rees;
use super::sequences::beta_with_witness;
use super::{
    ExtendedRational, Hypothesis, HypothesisStatus, Quantity, ResurgenceReport, SearchOptions, SeriesPoint,
    SequenceValue, Witness,
};

fn q(s: u64, r: u64) -> BigRational {
    BigRational::new(BigInt::from(s), BigInt::from(r))
}

/// `beta_s` for `s` in `lo..=hi` with witnesses.
fn betas(
    a: &GradedFamily,
    b: &GradedFamily,
    lo: u64,
    hi: u64,
    cutoff: u64,
) -> Result<Vec<(u64, SequenceValue, Option<Witness>)>> {
    let mut out = Vec::new();
    for s in lo..=hi {
        let (v, m) = beta_with_witness(a, b, s, cutoff)?;
        let w = match (v, m) {
            (SequenceValue::Finite(r), Some(monomial)) => Some(Witness { s, r, monomial }),
            _ => None,
        };
        out.push((s, v, w));
    }
    Ok(out)
}

/// Largest `s/beta_s` in the table, first witness on ties.
fn best(rows: &[(u64, SequenceValue, Option<Witness>)]) -> (ExtendedRational, Option<Witness>) {
    let mut value = ExtendedRational::NegInfinity;
    let mut witness = None;
    for (s, v, w) in rows {
        if let SequenceValue::Finite(r) = v {
            let x = ExtendedRational::Finite(q(*s, *r));
            if x > value {
                value = x;
                witness = w.clone();
            }
        }
    }
    (value, witness)
}

fn basis_status(known: bool, asserted: bool) -> HypothesisStatus {
    match (known, asserted) {
        (true, false) => HypothesisStatus::Structural,
        (true, true) => HypothesisStatus::UserAsserted,
        _ => HypothesisStatus::Unverified,
    }
}

/// `sup { s/r : a_s ⊄ b_r, s <= s_max, r <= r_max }`.
///
/// Only `-inf` can be certified here: when both families are filtrations,
/// `b` is constant from some index inside the window, and `a_1` already lies
/// in that constant ideal.
pub fn rho_window(a: &GradedFamily, b: &GradedFamily, s_max: u64, r_max: u64) -> Result<ResurgenceReport> {
    check_dim(a.nvars(), b.nvars())?;
    if s_max == 0 || r_max == 0 {
        return Err(Error::Domain("window bounds must be positive".into()));
    }
    let rows = betas(a, b, 1, s_max, r_max)?;
    let (value, witness) = best(&rows);
    let mut report = ResurgenceReport::new(Quantity::RhoWindow, value.clone()).param("s_max", s_max).param("r_max", r_max);
    report.labels.push("rho_window(a, b)".into());
    report.witnesses.extend(witness);
    if value == ExtendedRational::NegInfinity {
        let fa = a.filtration_basis();
        let fb = b.filtration_basis();
        if let (true, true, Some((t, tail))) = (fa.is_known(), fb.is_known(), b.constant_tail()?) {
            if t <= r_max && is_subset(&a.member(1)?, &tail)? {
                use crate::families::Basis;
                report.hypotheses.push(Hypothesis::new(
                    "a filtration",
                    basis_status(true, fa == Basis::Asserted),
                    "",
                ));
                report.hypotheses.push(Hypothesis::new(
                    "b filtration",
                    basis_status(true, fb == Basis::Asserted),
                    "",
                ));
                report.hypotheses.push(Hypothesis::new(
                    "b constant tail",
                    HypothesisStatus::Structural,
                    format!("b_n = {tail} for n >= {t}, and a_1 lies in it"),
                ));
                report.settle(true);
                report.labels.push("rho(a, b)".into());
                return Ok(report);
            }
        }
    }
    report.certification = "window".into();
    Ok(report)
}

/// `rho^n = sup { s/beta_s : n <= s <= s_max }`.
pub fn rho_n(a: &GradedFamily, b: &GradedFamily, n: u64, s_max: u64, cutoff: u64) -> Result<ResurgenceReport> {
    check_dim(a.nvars(), b.nvars())?;
    if n == 0 || n > s_max {
        return Err(Error::Domain(format!("need 1 <= n <= s_max, got n = {n}, s_max = {s_max}")));
    }
    let rows = betas(a, b, n, s_max, cutoff)?;
    let (value, witness) = best(&rows);
    let mut report = ResurgenceReport::new(Quantity::RhoN, value)
        .param("n", n)
        .param("s_max", s_max)
        .param("cutoff", cutoff);
    report.labels.push(format!("rho^{n}(a, b)"));
    report.witnesses.extend(witness);
    if rows.iter().any(|(_, v, _)| matches!(v, SequenceValue::ExceedsBound(_))) {
        report.notes.push("some beta_s exceed the cutoff; the supremum only covers decided terms".into());
    }
    Ok(report)
}

/// `rho^n` along `grid`, converging to `lim rho^n`.
///
/// The value is certified (and equal to `rho_hat`) when `b` is known
/// equivalent to powers of an ideal and `a` is a known filtration.
pub fn rho_lim_estimate(
    a: &GradedFamily,
    b: &GradedFamily,
    grid: &[u64],
    s_max: u64,
    opts: &SearchOptions,
) -> Result<ResurgenceReport> {
    check_dim(a.nvars(), b.nvars())?;
    let lo = *grid.iter().min().ok_or_else(|| Error::Domain("empty grid".into()))?;
    let hi = *grid.iter().max().unwrap_or(&lo);
    if lo == 0 || hi > s_max {
        return Err(Error::Domain(format!("grid must lie in 1..={s_max}")));
    }
    let rows = betas(a, b, lo, s_max, opts.cutoff)?;
    // suffix maxima: rho^n for every n >= lo
    let mut suffix = vec![ExtendedRational::NegInfinity; rows.len() + 1];
    for (i, (s, v, _)) in rows.iter().enumerate().rev() {
        let here = match v {
            SequenceValue::Finite(r) => ExtendedRational::Finite(q(*s, *r)),
            _ => ExtendedRational::NegInfinity,
        };
        suffix[i] = here.max(suffix[i + 1].clone());
    }
    let mut grid = grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let series: Vec<SeriesPoint> =
        grid.iter().map(|&n| SeriesPoint { index: n, value: suffix[(n - lo) as usize].clone() }).collect();
    let last = series.last().map(|p| p.value.clone()).unwrap_or(ExtendedRational::NegInfinity);
    let mut report = ResurgenceReport::new(Quantity::RhoLim, last)
        .param("s_max", s_max)
        .param("cutoff", opts.cutoff);
    report.series.insert("rho_n".into(), series);
    report.labels.push("lim rho^n(a, b)".into());
    if rows.iter().any(|(_, v, _)| matches!(v, SequenceValue::ExceedsBound(_))) {
        report.notes.push("some beta_s exceed the cutoff; rho^n only covers decided terms".into());
    }
    if b.structural_bequiv().is_some() && a.filtration_basis().is_known() {
        if let Ok(hat) = rho_hat_rees(a, b, opts) {
            if hat.certified {
                report.notes.push(format!("window value at n = {hi}: {}", report.value));
                report.value = hat.value;
                report.hypotheses = hat.hypotheses;
                report.valuations = hat.valuations;
                report.maximizer = hat.maximizer;
                report.labels.push("rho_hat(a, b)".into());
                report.settle(true);
                return Ok(report);
            }
        }
    }
    report.certification = "estimate".into();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::IdealExpr;
    use crate::monomial::{Monomial, MonomialIdeal};
    use crate::polyhedra::ratio;

    fn ideal(n: usize, gens: &[&[u64]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(n, &gens.iter().map(|g| g.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn powers_against_themselves() {
        let p = GradedFamily::powers(ideal(2, &[&[1, 0], &[0, 1]]));
        let r = rho_window(&p, &p, 10, 10).unwrap();
        // s/(s+1) peaks at s = 9 since beta_10 = 11 is outside the window
        assert_eq!(r.value, ExtendedRational::Finite(ratio(9, 10)));
        assert_eq!(r.witnesses[0].s, 9);
        assert!(!r.certified);
    }

    #[test]
    fn constant_tail_certifies_neg_infinity() {
        let x = ideal(1, &[&[1]]);
        let a = GradedFamily::powers(x.clone());
        let b = GradedFamily::formula(1, IdealExpr::Ideal(x));
        let r = rho_window(&a, &b, 6, 6).unwrap();
        assert_eq!(r.value, ExtendedRational::NegInfinity);
        assert!(r.certified);
        assert_eq!(r.certification, "exact");
    }

    #[test]
    fn sqrt_family_rho_n() {
        let m = ideal(1, &[&[1]]);
        let sq = GradedFamily::formula(1, IdealExpr::parse("m^ceil_sqrt(n)", 1, &|n| {
            (n == "m").then(|| crate::families::Binding::Ideal(m.clone()))
        }).unwrap());
        let a = GradedFamily::powers(m.clone());
        let r = rho_window(&a, &sq, 5, 40).unwrap();
        assert_eq!(r.value, ExtendedRational::Finite(ratio(1, 2)));
        assert_eq!((r.witnesses[0].s, r.witnesses[0].r), (1, 2));
        assert_eq!(r.witnesses[0].monomial, Monomial::new(vec![1]));
        let l = rho_lim_estimate(&a, &sq, &[5, 10], 10, &SearchOptions { cutoff: 200, ..Default::default() }).unwrap();
        assert_eq!(l.value, ExtendedRational::Finite(ratio(10, 101)));
        assert!(!l.certified);
    }
}
