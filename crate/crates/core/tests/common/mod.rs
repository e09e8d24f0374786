//! Strategies and property bodies shared by the proptest suite and the
//! acceptance runner. Oracles here are brute force and avoid the library's
//! own shortcuts wherever that is practical.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use resurgence::closures::{integral_closure, symbolic_power};
use resurgence::families::{validate_graded, GradedFamily};
use resurgence::monomial::{is_subset, multiply, MonomialIdeal};
use resurgence::polyhedra::{lp_minimize, HalfSpace, LinearProgram, LpOutcome};
use resurgence::resurgence::{beta, dual_sequences, lambda, rho_window, DualValue, SequenceValue};
use resurgence::valuations::{family_value, skew_waldschmidt, MonomialValuation, WaldschmidtResult};

pub fn ideal(n: usize, gens: &[Vec<u64>]) -> MonomialIdeal {
    MonomialIdeal::from_exponents(n, gens).unwrap()
}

/// Exponent vectors of total degree 1..=4.
fn generator(n: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..=4, n).prop_filter("degree 1..=4", |e| (1..=4).contains(&e.iter().sum::<u64>()))
}

pub fn ideal_in(n: usize) -> impl Strategy<Value = MonomialIdeal> {
    prop::collection::vec(generator(n), 1..=4).prop_map(move |g| ideal(n, &g))
}

pub fn squarefree_in(n: usize) -> impl Strategy<Value = MonomialIdeal> {
    let gen = prop::collection::vec(0u64..=1, n).prop_filter("nonconstant", |e| e.iter().any(|&x| x == 1));
    prop::collection::vec(gen, 1..=3).prop_map(move |g| ideal(n, &g))
}

pub fn weights_in(n: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..=3, n).prop_filter("not all zero", |w| w.iter().any(|&x| x > 0))
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn e(err: resurgence::Error) -> TestCaseError {
    TestCaseError::fail(err.to_string())
}

/// A random graded family: powers, fractional ceiling, closure powers or
/// (on a squarefree ideal) symbolic powers.
#[derive(Clone, Debug)]
pub struct FamilyCase {
    pub family_kind: u8,
    pub ideal: MonomialIdeal,
    pub squarefree: MonomialIdeal,
    pub alpha: (i64, i64),
}

impl FamilyCase {
    pub fn build(&self) -> GradedFamily {
        match self.family_kind {
            0 => GradedFamily::powers(self.ideal.clone()),
            1 => GradedFamily::ceiling(self.ideal.clone(), BigRational::new(self.alpha.0.into(), self.alpha.1.into()))
                .unwrap(),
            2 => GradedFamily::closure_powers(self.ideal.clone()),
            _ => GradedFamily::symbolic(self.squarefree.clone()),
        }
    }
}

pub fn family_case() -> impl Strategy<Value = (usize, FamilyCase, Vec<u64>, u64)> {
    (1usize..=3).prop_flat_map(|n| {
        (
            Just(n),
            (0u8..4, ideal_in(n), squarefree_in(n), (1i64..=6, 1i64..=3))
                .prop_map(|(family_kind, ideal, squarefree, alpha)| FamilyCase { family_kind, ideal, squarefree, alpha }),
            weights_in(n),
            2u64..=12,
        )
    })
}

/// `v(a_{p+q}) <= v(a_p) + v(a_q)`, and the validator agrees the family is graded.
pub fn subadditive_values(n: usize, case: &FamilyCase, w: &[u64], horizon: u64) -> Result<(), TestCaseError> {
    let f = case.build();
    let v = MonomialValuation::new(w.to_vec()).map_err(e)?;
    let vals: Vec<Option<u64>> = (0..=horizon).map(|i| family_value(&v, &f, i as i64)).collect::<Result<_, _>>().map_err(e)?;
    for p in 1..horizon {
        for q in 1..=horizon - p {
            let lhs = vals[(p + q) as usize];
            let rhs = match (vals[p as usize], vals[q as usize]) {
                (Some(x), Some(y)) => Some(x + y),
                _ => None,
            };
            let ok = match (lhs, rhs) {
                (_, None) => true,
                (Some(l), Some(r)) => l <= r,
                (None, Some(_)) => false,
            };
            check(ok, || format!("v(a_{}) = {lhs:?} exceeds v(a_{p}) + v(a_{q}) = {rhs:?} in {n} vars", p + q))?;
        }
    }
    let r = validate_graded(&f, horizon.min(5)).map_err(e)?;
    check(r.holds, || format!("validator rejects a graded family: {:?}", r.counterexample))
}

pub fn nesting_case() -> impl Strategy<Value = (MonomialIdeal, MonomialIdeal, MonomialIdeal, MonomialIdeal, u64)> {
    (1usize..=3).prop_flat_map(|n| (ideal_in(n), ideal_in(n), ideal_in(n), ideal_in(n), 2u64..=5))
}

fn window_value(a: &GradedFamily, b: &GradedFamily, s: u64) -> Result<resurgence::resurgence::ExtendedRational, TestCaseError> {
    Ok(rho_window(a, b, s, s).map_err(e)?.value)
}

/// Shrinking `a` memberwise or enlarging `b` can only lower the window value.
pub fn window_monotone(i: &MonomialIdeal, j: &MonomialIdeal, k: &MonomialIdeal, l: &MonomialIdeal, s: u64) -> Result<(), TestCaseError> {
    let a = GradedFamily::powers(i.clone());
    let a_small = GradedFamily::powers(multiply(i, j).map_err(e)?);
    let b = GradedFamily::powers(k.clone());
    let b_small = GradedFamily::powers(multiply(k, l).map_err(e)?);
    let base = window_value(&a, &b, s)?;
    let lower = window_value(&a_small, &b, s)?;
    check(lower <= base, || format!("shrinking a raised the window value: {lower} > {base}"))?;
    let higher = window_value(&a, &b_small, s)?;
    check(base <= higher, || format!("shrinking b lowered the window value: {higher} < {base}"))
}

pub fn duality_case() -> impl Strategy<Value = (MonomialIdeal, MonomialIdeal)> {
    (1usize..=3).prop_flat_map(|n| (ideal_in(n), ideal_in(n)))
}

/// For filtrations, `lambda_n = max { d : beta_d <= n }`; checked both
/// directly and through the right dual of the beta sequence.
pub fn beta_lambda_duality(i: &MonomialIdeal, k: &MonomialIdeal) -> Result<(), TestCaseError> {
    const D: u64 = 10;
    const N: u64 = 6;
    const CUTOFF: u64 = 120;
    let a = GradedFamily::powers(i.clone());
    let b = GradedFamily::powers(k.clone());
    let mut betas = Vec::new();
    for d in 1..=D {
        match beta(&a, &b, d, CUTOFF).map_err(e)? {
            SequenceValue::Finite(r) => betas.push(r as i64),
            _ => break,
        }
    }
    let ns: Vec<i64> = (1..=N as i64).collect();
    let duals = dual_sequences(&betas, 1, &ns, 1, true);
    for n in 1..=N {
        let lam = lambda(&a, &b, n, CUTOFF).map_err(e)?;
        let direct = betas.iter().rposition(|&r| r <= n as i64).map(|p| p as u64 + 1);
        let dual = duals.right[(n - 1) as usize];
        match lam {
            SequenceValue::Finite(l) if l < betas.len() as u64 => {
                check(direct.unwrap_or(0) == l, || format!("lambda_{n} = {l}, betas give {direct:?}"))?;
                let want = if l == 0 { DualValue::Empty } else { DualValue::Finite(l as i64) };
                check(dual == want, || format!("right dual at {n} is {dual:?}, lambda is {l}"))?;
            }
            _ => {}
        }
    }
    Ok(())
}

pub fn squarefree_case() -> impl Strategy<Value = (MonomialIdeal, u64)> {
    (1usize..=3).prop_flat_map(|n| (squarefree_in(n), 1u64..=4))
}

/// `I^n ⊆ closure(I^n) ⊆ I^(n)` for squarefree `I`.
pub fn closure_sandwich(i: &MonomialIdeal, n: u64) -> Result<(), TestCaseError> {
    let p = i.power_cached(n).map_err(e)?;
    let c = integral_closure(i, n).map_err(e)?;
    let s = symbolic_power(i, n).map_err(e)?;
    check(is_subset(&p, &c).map_err(e)?, || format!("I^{n} not inside its closure for {i}"))?;
    check(is_subset(&c, &s).map_err(e)?, || format!("closure of I^{n} not inside I^({n}) for {i}"))
}

pub fn skoda_case() -> impl Strategy<Value = (MonomialIdeal, u64)> {
    (1usize..=3).prop_flat_map(|n| (ideal_in(n), 1u64..=5))
}

/// `closure(I^(n + vars - 1)) ⊆ I^n`.
pub fn briancon_skoda(i: &MonomialIdeal, n: u64) -> Result<(), TestCaseError> {
    let shift = i.nvars() as u64 - 1;
    let c = integral_closure(i, n + shift).map_err(e)?;
    let p = i.power_cached(n).map_err(e)?;
    check(is_subset(&c, &p).map_err(e)?, || format!("closure(I^{}) not inside I^{n} for {i}", n + shift))
}

/// Minimal vertex covers by subset enumeration.
pub fn brute_covers(i: &MonomialIdeal) -> Vec<Vec<usize>> {
    let n = i.nvars();
    let supports: Vec<Vec<usize>> = i.generators().unwrap().iter().map(|g| g.support()).collect();
    let hits = |mask: u32| supports.iter().all(|s| s.iter().any(|&v| mask & (1 << v) != 0));
    let covers: Vec<u32> = (0u32..1 << n).filter(|&m| hits(m)).collect();
    let mut minimal: Vec<Vec<usize>> = covers
        .iter()
        .filter(|&&m| !covers.iter().any(|&o| o != m && o & m == o))
        .map(|&m| (0..n).filter(|v| m & (1 << v) != 0).collect())
        .collect();
    minimal.sort();
    minimal
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Exact certificate check: primal and dual feasibility and equal values.
fn certificate_holds(rows: &[Vec<BigRational>], rhs: &[BigRational], c: &[BigRational], x: &[BigRational], u: &[BigRational], opt: &BigRational) -> bool {
    let n = c.len();
    let primal_ok = x.iter().all(|v| !v.is_negative())
        && rows.iter().zip(rhs).all(|(r, b)| r.iter().zip(x).map(|(a, v)| a * v).sum::<BigRational>() >= *b);
    let dual_ok = u.iter().all(|v| !v.is_negative())
        && (0..n).all(|j| rows.iter().zip(u).map(|(r, m)| &r[j] * m).sum::<BigRational>() <= c[j]);
    let cx: BigRational = c.iter().zip(x).map(|(a, b)| a * b).sum();
    let by: BigRational = rhs.iter().zip(u).map(|(a, b)| a * b).sum();
    primal_ok && dual_ok && cx == *opt && by == *opt
}

pub fn lp_case() -> impl Strategy<Value = (MonomialIdeal, Vec<u64>, Vec<Vec<i64>>, Vec<i64>)> {
    (1usize..=3).prop_flat_map(|n| {
        (
            squarefree_in(n),
            weights_in(n),
            prop::collection::vec(prop::collection::vec(0i64..=3, n), 1..=4)
                .prop_filter("nonzero rows", |rows| rows.iter().all(|r| r.iter().any(|&x| x > 0))),
            prop::collection::vec(1i64..=4, n),
        )
    })
}

/// Checks the LP certificate of a symbolic Waldschmidt constant against
/// brute-force covers and returns the optimum.
pub fn cover_certificate(i: &MonomialIdeal, w: &[u64], r: &WaldschmidtResult) -> Result<BigRational, TestCaseError> {
    let n = i.nvars();
    let covers = brute_covers(i);
    if covers.is_empty() {
        check(r.upper.is_zero(), || "no covers but nonzero constant".into())?;
        return Ok(r.upper.clone());
    }
    let cert = r.lp_certificate.as_ref().ok_or_else(|| TestCaseError::fail("missing LP certificate"))?;
    let mut program_rows: Vec<Vec<usize>> = cert
        .program
        .constraints
        .iter()
        .map(|h| (0..n).filter(|&j| !h.normal()[j].is_zero()).collect())
        .collect();
    program_rows.sort();
    check(program_rows == covers, || format!("cover LP rows {program_rows:?} differ from covers {covers:?}"))?;
    let a: Vec<Vec<BigRational>> = cert
        .program
        .constraints
        .iter()
        .map(|h| h.normal().iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let b: Vec<BigRational> = cert.program.constraints.iter().map(|h| h.offset().clone()).collect();
    let c: Vec<BigRational> = w.iter().map(|&x| q(x as i64)).collect();
    let s = &cert.solution;
    check(certificate_holds(&a, &b, &c, &s.argmin, &s.dual, &s.optimum), || "cover LP certificate fails".into())?;
    check(r.value() == Some(&s.optimum), || "reported constant differs from LP optimum".into())?;
    Ok(s.optimum.clone())
}

/// The cover LP behind symbolic Waldschmidt constants, and a random covering
/// LP, both carry certificates that check out exactly.
pub fn lp_certificates(i: &MonomialIdeal, w: &[u64], rows: &[Vec<i64>], cost: &[i64]) -> Result<(), TestCaseError> {
    let v = MonomialValuation::new(w.to_vec()).map_err(e)?;
    let r = skew_waldschmidt(&v, &GradedFamily::symbolic(i.clone()), 4).map_err(e)?;
    cover_certificate(i, w, &r)?;

    let hs: Vec<HalfSpace> = rows.iter().map(|r| HalfSpace::from_ints(r, 1).unwrap()).collect();
    let lp = LinearProgram::new(cost.iter().map(|&x| q(x)).collect(), hs, true);
    match lp_minimize(&lp).map_err(e)? {
        LpOutcome::Optimal(sol) => {
            let a: Vec<Vec<BigRational>> = lp
                .constraints
                .iter()
                .map(|h| h.normal().iter().map(|x| BigRational::from_integer(x.clone())).collect())
                .collect();
            let b: Vec<BigRational> = lp.constraints.iter().map(|h| h.offset().clone()).collect();
            check(certificate_holds(&a, &b, &lp.objective, &sol.argmin, &sol.dual, &sol.optimum), || {
                format!("random LP certificate fails: {rows:?} {cost:?}")
            })
        }
        other => Err(TestCaseError::fail(format!("covering LP not optimal: {other:?}"))),
    }
}
