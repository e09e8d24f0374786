use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::closures::{integral_closure, rees_valuations};
use crate::error::{check_dim, Error, Result};
use crate::families::{is_standard_veronese, validate_filtration};
use crate::families::{Basis, FamilyKind, GradedFamily};
use crate::monomial::{first_non_member, MonomialIdeal};
use crate::valuations::{skew_waldschmidt_with, value_of_ideal, MonomialValuation, WaldschmidtMethod};

use super::sequences::{beta, beta_v};
use super::{
    ExtendedRational, Hypothesis, HypothesisStatus, Quantity, ResurgenceReport, SearchOptions, SeriesPoint,
    SequenceValue, ValuationRow, Witness,
};

fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn status_of(b: Basis) -> HypothesisStatus {
    match b {
        Basis::Structural => HypothesisStatus::Structural,
        Basis::Asserted => HypothesisStatus::UserAsserted,
        Basis::Unknown => HypothesisStatus::Unverified,
    }
}

/// A standard Veronese degree of `b`, known or found in a window.
fn veronese_degree(b: &GradedFamily, opts: &SearchOptions) -> Result<Option<(u64, Hypothesis)>> {
    if let Some((k, basis)) = b.structural_veronese() {
        let h = Hypothesis::new("standard Veronese", status_of(basis), format!("b_(kn) = b_k^n with k = {k}"));
        return Ok(Some((k, h)));
    }
    for k in 1..=opts.k_max {
        if is_standard_veronese(b, k, opts.horizon)?.holds {
            let h = Hypothesis::new(
                "standard Veronese",
                HypothesisStatus::WindowChecked,
                format!("b_(kn) = b_k^n with k = {k} for n <= {}", opts.horizon),
            );
            return Ok(Some((k, h)));
        }
    }
    Ok(None)
}

/// One row per Rees valuation of `bk`, each ratio `(v(bk)/k) / v̂(a)`.
fn rows_for(
    a: &GradedFamily,
    bk: &MonomialIdeal,
    k: u64,
    opts: &SearchOptions,
    hyps: &mut Vec<Hypothesis>,
) -> Result<Vec<ValuationRow>> {
    let rv = rees_valuations(bk)?;
    let mut rows = Vec::new();
    let mut window_exact = false;
    for r in rv.valuations {
        let ws = skew_waldschmidt_with(&r.valuation, a, opts.window, opts.k_max)?;
        let Some(hat) = ws.value().cloned() else {
            return Err(Error::Capability(format!(
                "v̂(a) at {:?} is only bracketed by a window; use rho_hat_beta",
                r.valuation.weights()
            )));
        };
        if !ws.certified {
            window_exact = true;
        }
        let ratio = if hat.is_zero() {
            ExtendedRational::PosInfinity
        } else {
            ExtendedRational::Finite(int(r.value) / int(k) / hat)
        };
        rows.push(ValuationRow { valuation: r.valuation, value: r.value, waldschmidt: ws, ratio });
    }
    if window_exact {
        hyps.push(Hypothesis::new(
            "exact Waldschmidt constants",
            HypothesisStatus::WindowChecked,
            "some v̂(a) come from a Veronese degree found in a window",
        ));
    }
    Ok(rows)
}

fn maximum(rows: &[ValuationRow]) -> (ExtendedRational, Option<MonomialValuation>) {
    let mut value = ExtendedRational::NegInfinity;
    let mut arg = None;
    // rows arrive sorted, so the first strict improvement is lexicographically least
    for row in rows {
        if row.ratio > value {
            value = row.ratio.clone();
            arg = Some(row.valuation.clone());
        }
    }
    (value, arg)
}

/// `rho_hat(a, b)` through the Rees valuations of `b_k`:
/// `max_v (v(b_k)/k) / v̂(a)`.
///
/// When `b` is known equivalent to powers of an ideal `I` and `a` is a known
/// filtration, the valuations of `I` are used directly.
pub fn rho_hat_rees(a: &GradedFamily, b: &GradedFamily, opts: &SearchOptions) -> Result<ResurgenceReport> {
    check_dim(a.nvars(), b.nvars())?;
    let mut hyps = Vec::new();
    let fa = a.filtration_basis();
    if let (Some((ideal, shift, basis)), true) = (b.structural_bequiv(), fa.is_known()) {
        hyps.push(Hypothesis::new(
            "b equivalent to powers",
            status_of(basis),
            format!("b_(i+{shift}) ⊆ ({ideal})^i ⊆ b_i"),
        ));
        hyps.push(Hypothesis::new("a filtration", status_of(fa), ""));
        let mut report = finish(a, &ideal, 1, opts, hyps)?;
        report.labels = vec!["rho_hat(a, b)".into(), "rho_hat(a, closure(b))".into(), "rho(a, closure(b))".into()];
        report.notes.push(format!("Rees valuations of {ideal}"));
        return Ok(report);
    }
    let Some((k, h)) = veronese_degree(b, opts)? else {
        return Err(Error::Capability(format!(
            "no standard Veronese degree <= {} found for {}; use rho_hat_beta",
            opts.k_max,
            b.name()
        )));
    };
    hyps.push(h);
    let bk = b.member(k)?;
    let mut report = finish(a, &bk, k, opts, hyps)?;
    report.labels.push("rho_hat(a, closure(b))".into());
    let cm = b.closure_module_finite();
    if cm.is_known() {
        report.hypotheses.push(Hypothesis::new("closure algebra finite", status_of(cm), ""));
        report.labels.push("rho_hat(a, b)".into());
    }
    report.settle(true);
    // the other natural maximum, over the valuations of b_1
    if k != 1 {
        let b1 = b.member(1)?;
        if !b1.is_unit() && !b1.is_zero() {
            let mut scratch = Vec::new();
            if let Ok(rows) = rows_for(a, &b1, 1, opts, &mut scratch) {
                let (m, _) = maximum(&rows);
                report.notes.push(format!("max over Rees valuations of b_1: {m}"));
            }
        }
    }
    report.search.insert("k".into(), k);
    Ok(report)
}

fn finish(
    a: &GradedFamily,
    bk: &MonomialIdeal,
    k: u64,
    opts: &SearchOptions,
    mut hyps: Vec<Hypothesis>,
) -> Result<ResurgenceReport> {
    if bk.is_zero() {
        return Err(Error::Domain("b_k is the zero ideal".into()));
    }
    let mut report = if bk.is_unit() {
        // every b_(kn) is the unit ideal
        ResurgenceReport::new(Quantity::RhoHatRees, ExtendedRational::NegInfinity)
    } else {
        let rows = rows_for(a, bk, k, opts, &mut hyps)?;
        let (value, arg) = maximum(&rows);
        let mut r = ResurgenceReport::new(Quantity::RhoHatRees, value);
        r.valuations = rows;
        r.maximizer = arg;
        r
    };
    report.hypotheses = hyps;
    report.settle(true);
    Ok(report.param("window", opts.window).param("k_max", opts.k_max))
}

/// Estimate of `rho_hat(a, closure(b))` as `N / beta_N` at the last grid
/// point, with the series `beta_n/n`, `beta_bar_n/n` and `beta^v0_n/n`.
pub fn rho_hat_beta_limit(
    a: &GradedFamily,
    b: &GradedFamily,
    grid: &[u64],
    opts: &SearchOptions,
) -> Result<ResurgenceReport> {
    check_dim(a.nvars(), b.nvars())?;
    let mut grid = grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let Some(&last) = grid.last() else {
        return Err(Error::Domain("empty grid".into()));
    };
    if grid[0] == 0 {
        return Err(Error::Domain("grid indices start at 1".into()));
    }
    let mut hyps = Vec::new();
    let fb = b.filtration_basis();
    if fb.is_known() {
        hyps.push(Hypothesis::new("b filtration", status_of(fb), ""));
    } else {
        let r = validate_filtration(b, opts.horizon)?;
        let st = if r.holds { HypothesisStatus::WindowChecked } else { HypothesisStatus::Failed };
        let detail = r.counterexample.map(|c| c.detail).unwrap_or_else(|| format!("checked to {}", opts.horizon));
        hyps.push(Hypothesis::new("b filtration", st, detail));
    }
    let mut candidates = Vec::new();
    match veronese_degree(b, opts)? {
        Some((k, h)) => {
            hyps.push(h);
            let bk = b.member(k)?;
            if !bk.is_unit() && !bk.is_zero() {
                candidates = rees_valuations(&bk)?.valuations.into_iter().map(|r| r.valuation).collect();
            }
            let cm = b.closure_module_finite();
            hyps.push(Hypothesis::new("closure algebra finite", status_of(cm), ""));
        }
        None => hyps.push(Hypothesis::new(
            "standard Veronese",
            HypothesisStatus::Failed,
            format!("no k <= {} passes the window check", opts.k_max),
        )),
    }
    let closure = GradedFamily::closure_of(b);
    let ratio = |v: SequenceValue, n: u64| match v {
        SequenceValue::Finite(d) => ExtendedRational::Finite(int(d) / int(n)),
        SequenceValue::EmptySet => ExtendedRational::PosInfinity,
        SequenceValue::ExceedsBound(_) => ExtendedRational::PosInfinity,
    };
    let mut plain = Vec::new();
    let mut bar = Vec::new();
    let mut val = Vec::new();
    let mut v0: Option<MonomialValuation> = None;
    let mut beta_last = SequenceValue::EmptySet;
    for &n in &grid {
        let bn = beta(a, b, n, opts.cutoff)?;
        if n == last {
            beta_last = bn;
        }
        plain.push(SeriesPoint { index: n, value: ratio(bn, n) });
        bar.push(SeriesPoint { index: n, value: ratio(beta(a, &closure, n, opts.cutoff)?, n) });
    }
    if !candidates.is_empty() {
        // v0 minimizes beta^v at the last grid point
        let mut best: Option<(SequenceValue, MonomialValuation)> = None;
        for v in &candidates {
            let x = beta_v(v, a, b, last, opts.cutoff)?;
            let better = match (&best, x) {
                (None, _) => true,
                (Some((SequenceValue::Finite(y), _)), SequenceValue::Finite(z)) => z < *y,
                (Some((SequenceValue::Finite(_), _)), _) => false,
                (Some(_), SequenceValue::Finite(_)) => true,
                _ => false,
            };
            if better {
                best = Some((x, v.clone()));
            }
        }
        let v = best.map(|(_, v)| v).unwrap_or_else(|| candidates[0].clone());
        for &n in &grid {
            val.push(SeriesPoint { index: n, value: ratio(beta_v(&v, a, b, n, opts.cutoff)?, n) });
        }
        v0 = Some(v);
    }
    let value = match beta_last {
        SequenceValue::Finite(d) => ExtendedRational::Finite(int(last) / int(d)),
        SequenceValue::EmptySet => ExtendedRational::NegInfinity,
        SequenceValue::ExceedsBound(c) => {
            return Err(Error::Capability(format!("beta_{last} exceeds the cutoff {c}; raise it")))
        }
    };
    let mut report = ResurgenceReport::new(Quantity::RhoHatBeta, value)
        .param("cutoff", opts.cutoff)
        .param("n", last);
    report.hypotheses = hyps;
    report.series.insert("beta_n/n".into(), plain);
    report.series.insert("beta_bar_n/n".into(), bar);
    if !val.is_empty() {
        report.series.insert("beta_v0_n/n".into(), val);
    }
    report.maximizer = v0;
    report.labels.push("estimate of rho_hat(a, closure(b))".into());
    report.certification = "estimate".into();
    Ok(report)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ExactOptions {
    /// Largest `s + r` tried when looking for a witness above `rho_hat`.
    pub budget: u64,
    /// Used when `rho_hat(a, closure(b))` cannot be computed.
    #[serde(serialize_with = "crate::report::opt_rational")]
    pub asserted_rho_hat: Option<BigRational>,
    /// Refuse search regions with more rows than this.
    pub max_rows: u64,
}

impl ExactOptions {
    pub fn new(budget: u64) -> ExactOptions {
        ExactOptions { budget, asserted_rho_hat: None, max_rows: 10_000 }
    }
}

/// A gap `k` with `closure(b_(i+k)) ⊆ b_i` for all `i`.
fn closure_gap(b: &GradedFamily, opts: &SearchOptions) -> Result<(u64, Hypothesis)> {
    let n = b.nvars() as u64;
    let known = match b.kind() {
        // Briançon-Skoda: closure(I^(i+n-1)) ⊆ I^i
        FamilyKind::Powers(_) => Some(n.saturating_sub(1).max(1)),
        FamilyKind::ClosurePowers(_) => Some(1),
        FamilyKind::Ceiling { alpha, .. } if alpha.is_integer() && alpha.is_positive() => {
            let al = u64::try_from(alpha.to_integer()).map_err(|_| Error::Overflow)?;
            Some(n.saturating_sub(1).div_ceil(al).max(1))
        }
        _ => None,
    };
    if let Some(k) = known {
        let h = Hypothesis::new("closure gap", HypothesisStatus::Structural, format!("closure(b_(i+{k})) ⊆ b_i"));
        return Ok((k, h));
    }
    'k: for k in 1..=opts.k_max {
        for i in 1..=opts.horizon {
            let c = integral_closure(&b.member(i + k)?, 1)?;
            if first_non_member(&c, &b.member(i)?)?.is_some() {
                continue 'k;
            }
        }
        let h = Hypothesis::new(
            "closure gap",
            HypothesisStatus::WindowChecked,
            format!("closure(b_(i+{k})) ⊆ b_i for i <= {}", opts.horizon),
        );
        return Ok((k, h));
    }
    Err(Error::Hypothesis(format!("no closure gap k <= {} for {}", opts.k_max, b.name())))
}

/// `v̂(b) = v(b_1)` at every Rees valuation of `b_1`.
fn first_member_sharp(b: &GradedFamily, opts: &SearchOptions) -> Result<Hypothesis> {
    let b1 = b.member(1)?;
    if b1.is_unit() || b1.is_zero() {
        return Ok(Hypothesis::new("v̂(b) = v(b_1)", HypothesisStatus::Failed, "b_1 has no Rees valuations"));
    }
    let mut window = false;
    for r in rees_valuations(&b1)?.valuations {
        let ws = skew_waldschmidt_with(&r.valuation, b, opts.window, opts.k_max)?;
        let v1 = int(value_of_ideal(&r.valuation, &b1)?);
        match ws.value() {
            Some(h) if *h == v1 => window |= !ws.certified,
            Some(h) => {
                return Ok(Hypothesis::new(
                    "v̂(b) = v(b_1)",
                    HypothesisStatus::Failed,
                    format!("at {:?}: v̂(b) = {}, v(b_1) = {}", r.valuation.weights(), rt(h), rt(&v1)),
                ))
            }
            None if ws.upper < v1 => {
                return Ok(Hypothesis::new(
                    "v̂(b) = v(b_1)",
                    HypothesisStatus::Failed,
                    format!("at {:?}: v̂(b) <= {} < v(b_1) = {}", r.valuation.weights(), rt(&ws.upper), rt(&v1)),
                ))
            }
            None => {
                debug_assert_eq!(ws.method, WaldschmidtMethod::Window);
                return Ok(Hypothesis::new(
                    "v̂(b) = v(b_1)",
                    HypothesisStatus::Unverified,
                    format!("v̂(b) at {:?} is only bracketed", r.valuation.weights()),
                ));
            }
        }
    }
    let st = if window { HypothesisStatus::WindowChecked } else { HypothesisStatus::Structural };
    Ok(Hypothesis::new("v̂(b) = v(b_1)", st, "at every Rees valuation of b_1"))
}

fn rt(q: &BigRational) -> String {
    crate::report::rational_text(q)
}

/// `rho(a, b)` from `rho_hat(a, closure(b))`, a witness above it, and a
/// finite search region.
///
/// With a witness `s0/r0 > rho_hat` and gap `k`, every pair with `s/r`
/// above `s0/r0` has `r < N = k rho_hat / (s0/r0 - rho_hat)` and
/// `s < (r + k) rho_hat`, so a finite scan decides the supremum.
pub fn rho_exact_certified(
    a: &GradedFamily,
    b: &GradedFamily,
    opts: &SearchOptions,
    ex: &ExactOptions,
) -> Result<ResurgenceReport> {
    check_dim(a.nvars(), b.nvars())?;
    let mut hyps = Vec::new();
    let (hat, hat_cert, hat_labels) = match rho_hat_rees(a, b, opts) {
        Ok(r) => {
            for h in &r.hypotheses {
                hyps.push(Hypothesis::new(&format!("rho_hat: {}", h.name), h.status, h.detail.clone()));
            }
            (r.value, r.certified, r.labels)
        }
        Err(e) => match &ex.asserted_rho_hat {
            Some(q) => {
                hyps.push(Hypothesis::new(
                    "rho_hat(a, closure(b))",
                    HypothesisStatus::UserAsserted,
                    format!("asserted {} ({e})", rt(q)),
                ));
                (ExtendedRational::Finite(q.clone()), true, Vec::new())
            }
            None => return Err(e),
        },
    };
    let mut report = ResurgenceReport::new(Quantity::RhoExact, hat.clone()).param("budget", ex.budget);
    let rho_hat = match &hat {
        ExtendedRational::Finite(q) if q.is_positive() => q.clone(),
        ExtendedRational::PosInfinity => {
            // rho >= rho_hat
            report.hypotheses = hyps;
            report.labels.push("rho(a, b)".into());
            report.settle(hat_cert);
            return Ok(report);
        }
        _ => {
            report.hypotheses = hyps;
            report.notes.push(format!("rho_hat(a, closure(b)) = {hat} gives no search region"));
            report.settle(false);
            return Ok(report);
        }
    };
    hyps.push(first_member_sharp(b, opts)?);
    let (k, gap) = closure_gap(b, opts)?;
    hyps.push(gap);
    report.search.insert("k".into(), k);
    // witness above rho_hat, by increasing s + r, largest s first
    let mut witness = None;
    'search: for t in 2..=ex.budget {
        for r in 1..t {
            let s = t - r;
            if int(s) / int(r) <= rho_hat {
                break;
            }
            if let Some(m) = first_non_member(&a.member(s)?, &b.member(r)?)? {
                witness = Some(Witness { s, r, monomial: m });
                break 'search;
            }
        }
    }
    let Some(w0) = witness else {
        report.hypotheses = hyps;
        report.labels.push("rho(a, b) = rho_hat(a, closure(b)) up to the search budget".into());
        if hat_labels.iter().any(|l| l == "rho(a, closure(b))") {
            report.labels.push("rho(a, closure(b)) = rho_hat(a, b)".into());
        }
        report.notes.push(format!("no s/r > {} with a_s ⊄ b_r for s + r <= {}", rt(&rho_hat), ex.budget));
        report.settle(false);
        return Ok(report);
    };
    let q0 = int(w0.s) / int(w0.r);
    let bound = int(k) * &rho_hat / (&q0 - &rho_hat);
    let n_rows = crate::valuations::ceil_u64(&bound)?;
    if n_rows > ex.max_rows {
        return Err(Error::Capability(format!("search region has {n_rows} rows, over the limit {}", ex.max_rows)));
    }
    report.search.insert("N".into(), n_rows);
    let mut best = (q0.clone(), w0.clone());
    for r in 1..n_rows.max(1) {
        if int(r) >= bound {
            break;
        }
        let s_cap = (int(r + k) * &rho_hat).ceil().to_integer();
        let s_cap = u64::try_from(s_cap).map_err(|_| Error::Overflow)?;
        let br = b.member(r)?;
        // largest s below the cap with a_s ⊄ b_r beats every smaller s
        for s in (1..s_cap).rev() {
            if int(s) / int(r) <= best.0 {
                break;
            }
            if let Some(m) = first_non_member(&a.member(s)?, &br)? {
                best = (int(s) / int(r), Witness { s, r, monomial: m });
                break;
            }
        }
    }
    report.value = ExtendedRational::Finite(best.0);
    report.witnesses.push(best.1.clone());
    if best.1 != w0 {
        report.witnesses.push(w0);
    }
    report.hypotheses = hyps;
    report.labels.push("rho(a, b)".into());
    report.settle(hat_cert);
    if !report.certified {
        report.certification = "conditional".into();
    }
    Ok(report)
}
