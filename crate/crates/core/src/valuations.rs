//! Monomial valuations and skew Waldschmidt constants.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::closures::symbolic_covers;
use crate::error::{check_dim, Error, Result};
use crate::families::{is_standard_veronese, FamilyKind, GradedFamily};
use crate::monomial::{Monomial, MonomialIdeal, View};
use crate::polyhedra::{lp_minimize, HalfSpace, LinearProgram, LpOutcome, LpSolution};

pub const DEFAULT_K_MAX: u64 = 6;

/// `v(x^a) = <w, a>` for a nonnegative weight vector `w`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct MonomialValuation {
    weights: Vec<u64>,
}

impl MonomialValuation {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.iter().all(|&w| w == 0) {
            return Err(Error::Domain("valuation weights are all zero".into()));
        }
        Ok(MonomialValuation { weights })
    }

    /// The degree valuation `(1, ..., 1)`.
    pub fn degree(nvars: usize) -> Self {
        MonomialValuation { weights: vec![1; nvars] }
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }
}

impl fmt::Display for MonomialValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn value_of_monomial(v: &MonomialValuation, m: &Monomial) -> Result<u64> {
    check_dim(v.nvars(), m.nvars())?;
    let mut s: u64 = 0;
    for (w, e) in v.weights.iter().zip(m.exponents()) {
        s = w.checked_mul(*e).and_then(|t| s.checked_add(t)).ok_or(Error::Overflow)?;
    }
    Ok(s)
}

/// `v(I)` together with a generator attaining it.
pub fn value_with_argmin(v: &MonomialValuation, i: &MonomialIdeal) -> Result<(u64, Monomial)> {
    check_dim(v.nvars(), i.nvars())?;
    if let View::Closure(c) = i.view() {
        let (base, g) = value_with_argmin(v, &c.base)?;
        return Ok((base.checked_mul(c.scale).ok_or(Error::Overflow)?, g.pow(c.scale)?));
    }
    let mut best: Option<(u64, Monomial)> = None;
    for g in i.generators()? {
        let val = value_of_monomial(v, g)?;
        if best.as_ref().map_or(true, |(b, _)| val < *b) {
            best = Some((val, g.clone()));
        }
    }
    best.ok_or_else(|| Error::Domain("value of the zero ideal".into()))
}

pub fn value_of_ideal(v: &MonomialValuation, i: &MonomialIdeal) -> Result<u64> {
    Ok(value_with_argmin(v, i)?.0)
}

/// `v(a_n)`, or `None` for the zero ideal. Closed forms are used where the
/// family structure gives one, so high indices need no generators.
pub fn family_value(v: &MonomialValuation, f: &GradedFamily, n: i64) -> Result<Option<u64>> {
    if n < 0 {
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some(0));
    }
    let nu = n as u64;
    let scaled = |i: &MonomialIdeal, k: u64| -> Result<Option<u64>> {
        if k == 0 {
            return Ok(Some(0));
        }
        Ok(Some(value_of_ideal(v, i)?.checked_mul(k).ok_or(Error::Overflow)?))
    };
    match f.kind() {
        FamilyKind::Powers(i) | FamilyKind::ClosurePowers(i) => scaled(i, nu),
        FamilyKind::Ceiling { ideal, alpha } => scaled(ideal, crate::families::ceil_scale(alpha, nu)?),
        FamilyKind::ClosureOf(g) => family_value(v, g, n),
        FamilyKind::Veronese(g, k) => family_value(v, g, n.checked_mul(*k as i64).ok_or(Error::Overflow)?),
        FamilyKind::Formula(e) => e.value(v, n, f),
        FamilyKind::Periodic { period, patterns } => patterns[(nu % period) as usize].value(v, n, f),
        FamilyKind::Table { prefix, tail } => match (prefix.get((nu - 1) as usize), tail) {
            (Some(e), _) | (None, Some(e)) => e.value(v, n, f),
            (None, None) => f.member(nu).map(|_| None),
        },
        FamilyKind::Symbolic(_) => {
            let m = f.member(nu)?;
            Ok(Some(value_of_ideal(v, &m)?))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WaldschmidtMethod {
    ClosedForm,
    Veronese,
    Lp,
    Window,
}

#[derive(Clone, Debug, Serialize)]
pub struct LpCertificate {
    #[serde(skip)]
    pub program: LinearProgram,
    #[serde(skip)]
    pub solution: LpSolution,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WaldschmidtResult {
    #[serde(serialize_with = "crate::report::opt_rational")]
    pub lower: Option<BigRational>,
    #[serde(serialize_with = "crate::report::rational")]
    pub upper: BigRational,
    pub certified: bool,
    pub method: WaldschmidtMethod,
    /// Window used for the estimate or for the Veronese check.
    pub window: Option<u64>,
    pub veronese_k: Option<u64>,
    pub lp_certificate: Option<LpCertificate>,
}

impl WaldschmidtResult {
    fn exact(value: BigRational, method: WaldschmidtMethod, certified: bool) -> Self {
        WaldschmidtResult {
            lower: Some(value.clone()),
            upper: value,
            certified,
            method,
            window: None,
            veronese_k: None,
            lp_certificate: None,
        }
    }

    /// The exact value when one is known.
    pub fn value(&self) -> Option<&BigRational> {
        match &self.lower {
            Some(l) if *l == self.upper => Some(l),
            _ => None,
        }
    }
}

fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn skew_waldschmidt(v: &MonomialValuation, f: &GradedFamily, window: u64) -> Result<WaldschmidtResult> {
    skew_waldschmidt_with(v, f, window, DEFAULT_K_MAX)
}

/// `v̂(F) = lim v(F_n)/n`, dispatched on the family kind.
pub fn skew_waldschmidt_with(
    v: &MonomialValuation,
    f: &GradedFamily,
    window: u64,
    k_max: u64,
) -> Result<WaldschmidtResult> {
    check_dim(v.nvars(), f.nvars())?;
    if window == 0 {
        return Err(Error::Domain("window must be positive".into()));
    }
    match f.kind() {
        FamilyKind::Powers(i) | FamilyKind::ClosurePowers(i) => {
            Ok(WaldschmidtResult::exact(int(value_of_ideal(v, i)?), WaldschmidtMethod::ClosedForm, true))
        }
        FamilyKind::Ceiling { ideal, alpha } => Ok(WaldschmidtResult::exact(
            alpha * int(value_of_ideal(v, ideal)?),
            WaldschmidtMethod::ClosedForm,
            true,
        )),
        FamilyKind::Symbolic(i) => symbolic_waldschmidt(v, i),
        FamilyKind::ClosureOf(g) => skew_waldschmidt_with(v, g, window, k_max),
        FamilyKind::Veronese(g, k) => {
            let mut r = skew_waldschmidt_with(v, g, window.saturating_mul(*k), k_max)?;
            r.lower = r.lower.map(|l| l * int(*k));
            r.upper *= int(*k);
            Ok(r)
        }
        _ => {
            for k in 1..=k_max {
                if is_standard_veronese(f, k, window)?.holds {
                    let Some(val) = family_value(v, f, k as i64)? else { continue };
                    let mut r = WaldschmidtResult::exact(int(val) / int(k), WaldschmidtMethod::Veronese, false);
                    r.window = Some(window);
                    r.veronese_k = Some(k);
                    return Ok(r);
                }
            }
            window_estimate(v, f, window)
        }
    }
}

/// `inf_{n <= window} v(F_n)/n`, an upper bound only.
pub fn window_estimate(v: &MonomialValuation, f: &GradedFamily, window: u64) -> Result<WaldschmidtResult> {
    let mut best: Option<BigRational> = None;
    for n in 1..=window {
        if let Some(val) = family_value(v, f, n as i64)? {
            let q = int(val) / int(n);
            if best.as_ref().map_or(true, |b| q < *b) {
                best = Some(q);
            }
        }
    }
    let upper = best.ok_or_else(|| {
        Error::Capability(format!("no nonzero member of {} within window {window}", f.name()))
    })?;
    Ok(WaldschmidtResult {
        lower: None,
        upper,
        certified: false,
        method: WaldschmidtMethod::Window,
        window: Some(window),
        veronese_k: None,
        lp_certificate: None,
    })
}

/// `min <w, y>` subject to one inequality per minimal cover.
fn symbolic_waldschmidt(v: &MonomialValuation, i: &MonomialIdeal) -> Result<WaldschmidtResult> {
    let covers = symbolic_covers(i)?;
    let n = i.nvars();
    if covers.is_empty() {
        return Ok(WaldschmidtResult::exact(BigRational::zero(), WaldschmidtMethod::Lp, true));
    }
    let mut constraints = Vec::new();
    for c in &covers {
        let normal: Vec<BigRational> = (0..n).map(|j| int(c.contains(&j) as u64)).collect();
        constraints.push(HalfSpace::new(&normal, int(1))?);
    }
    let objective: Vec<BigRational> = v.weights.iter().map(|&w| int(w)).collect();
    let lp = LinearProgram::new(objective, constraints, true);
    match lp_minimize(&lp)? {
        LpOutcome::Optimal(sol) => {
            let verified = sol.verify(&lp);
            let mut r = WaldschmidtResult::exact(sol.optimum.clone(), WaldschmidtMethod::Lp, verified);
            r.lp_certificate = Some(LpCertificate { program: lp, solution: sol, verified });
            Ok(r)
        }
        other => Err(Error::Domain(format!("cover LP did not reach an optimum: {other:?}"))),
    }
}

/// `⌈q⌉` as an integer.
pub(crate) fn ceil_u64(q: &BigRational) -> Result<u64> {
    q.ceil().to_integer().to_u64().ok_or(Error::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::ratio;

    fn ideal(n: usize, gens: &[&[u64]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(n, &gens.iter().map(|g| g.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn w(ws: &[u64]) -> MonomialValuation {
        MonomialValuation::new(ws.to_vec()).unwrap()
    }

    #[test]
    fn monomial_and_ideal_values() {
        assert_eq!(value_of_monomial(&w(&[1, 1]), &Monomial::new(vec![2, 1])).unwrap(), 3);
        assert_eq!(value_of_monomial(&w(&[3, 2]), &Monomial::new(vec![0, 3])).unwrap(), 6);
        assert_eq!(value_of_monomial(&w(&[0, 1]), &Monomial::new(vec![5, 0])).unwrap(), 0);
        let i = ideal(2, &[&[2, 0], &[0, 3]]);
        assert_eq!(value_of_ideal(&w(&[1, 1]), &i).unwrap(), 2);
        assert_eq!(value_of_ideal(&w(&[3, 2]), &i).unwrap(), 6);
        assert_eq!(value_of_ideal(&w(&[4, 7]), &MonomialIdeal::unit(2)).unwrap(), 0);
        assert!(value_of_ideal(&w(&[1, 1]), &MonomialIdeal::zero(2)).is_err());
        assert!(MonomialValuation::new(vec![0, 0]).is_err());
    }

    #[test]
    fn waldschmidt_dispatch() {
        let t = ideal(3, &[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]);
        let r = skew_waldschmidt(&w(&[1, 1, 1]), &GradedFamily::symbolic(t), 10).unwrap();
        assert_eq!(r.value(), Some(&ratio(3, 2)));
        assert!(r.certified && r.method == WaldschmidtMethod::Lp);
        assert!(r.lp_certificate.as_ref().unwrap().verified);

        let m = ideal(2, &[&[1, 0], &[0, 1]]);
        let r = skew_waldschmidt(&w(&[1, 1]), &GradedFamily::powers(m.clone()), 10).unwrap();
        assert_eq!(r.value(), Some(&ratio(1, 1)));

        let constant = GradedFamily::constant(m);
        let r = skew_waldschmidt(&w(&[1, 1]), &constant, 12).unwrap();
        assert!(!r.certified);
        assert_eq!(r.method, WaldschmidtMethod::Window);
        assert_eq!(r.upper, ratio(1, 12));
        assert!(r.lower.is_none());
    }
}
