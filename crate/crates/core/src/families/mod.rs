//! Graded families `a_0 = S, a_1, a_2, ...` of monomial ideals, described
//! lazily and cached per index.

mod expr;
mod validate;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::closures::{integral_closure, symbolic_covers, symbolic_power_from_covers, ClosureBase};
use crate::error::{Error, Result};
use crate::monomial::MonomialIdeal;
use crate::valuations::ceil_u64;

pub use expr::{Binding, ExprAst, IdealExpr, IndexExpr};
pub use validate::{
    is_b_equivalent, is_standard_veronese, validate_filtration, validate_graded, Counterexample, Property,
    ValidationReport,
};

#[derive(Clone)]
pub enum FamilyKind {
    Powers(MonomialIdeal),
    /// Symbolic powers of a squarefree ideal.
    Symbolic(MonomialIdeal),
    /// Integral closures of the powers.
    ClosurePowers(MonomialIdeal),
    /// `I^{ceil(alpha n)}`.
    Ceiling { ideal: MonomialIdeal, alpha: BigRational },
    /// `a_n = patterns[n mod period]`, each pattern evaluated at `n`.
    Periodic { period: u64, patterns: Vec<IdealExpr> },
    /// Explicit `a_1..a_len`, then the tail rule if any.
    Table { prefix: Vec<IdealExpr>, tail: Option<IdealExpr> },
    Formula(IdealExpr),
    ClosureOf(GradedFamily),
    Veronese(GradedFamily, u64),
}

impl FamilyKind {
    pub fn label(&self) -> &'static str {
        match self {
            FamilyKind::Powers(_) => "powers",
            FamilyKind::Symbolic(_) => "symbolic",
            FamilyKind::ClosurePowers(_) => "closure_powers",
            FamilyKind::Ceiling { .. } => "ceiling",
            FamilyKind::Periodic { .. } => "periodic",
            FamilyKind::Table { .. } => "table",
            FamilyKind::Formula(_) => "formula",
            FamilyKind::ClosureOf(_) => "closure_of",
            FamilyKind::Veronese(..) => "veronese",
        }
    }
}

/// A hypothesis the user vouches for, beyond what can be checked.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Assertion {
    Graded,
    Filtration,
    StandardVeronese(u64),
    BEquivalent { ideal: MonomialIdeal, k: u64 },
    /// The closure algebra is a finite module over the Rees algebra.
    ClosureModuleFinite,
}

impl Assertion {
    /// Parses the ideal-free forms: `graded`, `filtration`,
    /// `standard-veronese=K`, `closure-module-finite`.
    pub fn parse(text: &str) -> Result<Assertion> {
        let t = text.trim();
        match t {
            "graded" => return Ok(Assertion::Graded),
            "filtration" => return Ok(Assertion::Filtration),
            "closure-module-finite" => return Ok(Assertion::ClosureModuleFinite),
            _ => {}
        }
        if let Some(k) = t.strip_prefix("standard-veronese=") {
            let k: u64 = k.trim().parse().map_err(|_| Error::Parse(format!("bad Veronese degree in '{t}'")))?;
            if k == 0 {
                return Err(Error::Parse("Veronese degree must be positive".into()));
            }
            return Ok(Assertion::StandardVeronese(k));
        }
        Err(Error::Parse(format!("unknown assertion '{t}'")))
    }
}

/// Why a hypothesis is believed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Structural,
    Asserted,
    Unknown,
}

impl Basis {
    pub fn is_known(self) -> bool {
        self != Basis::Unknown
    }
}

struct FamilyInner {
    nvars: usize,
    kind: FamilyKind,
    self_referential: bool,
    cache: RwLock<BTreeMap<u64, MonomialIdeal>>,
    covers: OnceLock<Vec<Vec<usize>>>,
    closure: OnceLock<ClosureBase>,
}

/// Cheap to clone; clones share the member cache.
#[derive(Clone)]
pub struct GradedFamily {
    inner: Arc<FamilyInner>,
    name: Arc<str>,
    assertions: Arc<Vec<Assertion>>,
}

impl fmt::Debug for GradedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedFamily({}, {})", self.name, self.inner.kind.label())
    }
}

fn has_self(e: &IdealExpr) -> bool {
    match e {
        IdealExpr::SelfAt(_) => true,
        IdealExpr::Ideal(_) | IdealExpr::Member(..) => false,
        IdealExpr::Sum(v) | IdealExpr::Product(v) | IdealExpr::Intersect(v) => v.iter().any(has_self),
        IdealExpr::Power(e, _) | IdealExpr::Closure(e) => has_self(e),
    }
}

pub(crate) fn ceil_scale(alpha: &BigRational, n: u64) -> Result<u64> {
    ceil_u64(&(alpha * BigRational::from_integer(n.into())))
}

impl GradedFamily {
    fn build(nvars: usize, kind: FamilyKind, name: String) -> GradedFamily {
        let self_referential = match &kind {
            FamilyKind::Periodic { patterns, .. } => patterns.iter().any(has_self),
            FamilyKind::Table { prefix, tail } => prefix.iter().chain(tail.iter()).any(has_self),
            FamilyKind::Formula(e) => has_self(e),
            _ => false,
        };
        GradedFamily {
            inner: Arc::new(FamilyInner {
                nvars,
                kind,
                self_referential,
                cache: RwLock::new(BTreeMap::new()),
                covers: OnceLock::new(),
                closure: OnceLock::new(),
            }),
            name: name.into(),
            assertions: Arc::new(Vec::new()),
        }
    }

    pub fn powers(i: MonomialIdeal) -> GradedFamily {
        let name = format!("powers{i}");
        GradedFamily::build(i.nvars(), FamilyKind::Powers(i), name)
    }

    pub fn symbolic(i: MonomialIdeal) -> GradedFamily {
        let name = format!("symbolic{i}");
        GradedFamily::build(i.nvars(), FamilyKind::Symbolic(i), name)
    }

    pub fn closure_powers(i: MonomialIdeal) -> GradedFamily {
        let name = format!("closure_powers{i}");
        GradedFamily::build(i.nvars(), FamilyKind::ClosurePowers(i), name)
    }

    pub fn ceiling(i: MonomialIdeal, alpha: BigRational) -> Result<GradedFamily> {
        if alpha.is_negative() {
            return Err(Error::Domain(format!("ceiling family needs alpha >= 0, got {alpha}")));
        }
        let name = format!("ceiling{i}^({alpha})");
        Ok(GradedFamily::build(i.nvars(), FamilyKind::Ceiling { ideal: i, alpha }, name))
    }

    pub fn periodic(nvars: usize, patterns: Vec<IdealExpr>) -> Result<GradedFamily> {
        if patterns.is_empty() {
            return Err(Error::Domain("periodic family needs at least one pattern".into()));
        }
        let period = patterns.len() as u64;
        Ok(GradedFamily::build(nvars, FamilyKind::Periodic { period, patterns }, "periodic".into()))
    }

    pub fn table(nvars: usize, prefix: Vec<IdealExpr>, tail: Option<IdealExpr>) -> GradedFamily {
        GradedFamily::build(nvars, FamilyKind::Table { prefix, tail }, "table".into())
    }

    pub fn formula(nvars: usize, e: IdealExpr) -> GradedFamily {
        GradedFamily::build(nvars, FamilyKind::Formula(e), "formula".into())
    }

    /// `a_n = I` for every `n >= 1`.
    pub fn constant(i: MonomialIdeal) -> GradedFamily {
        let name = format!("constant{i}");
        GradedFamily::build(i.nvars(), FamilyKind::Formula(IdealExpr::Ideal(i.clone())), name)
    }

    pub fn closure_of(f: &GradedFamily) -> GradedFamily {
        let name = format!("closure({})", f.name);
        GradedFamily::build(f.nvars(), FamilyKind::ClosureOf(f.clone()), name)
    }

    pub fn veronese(f: &GradedFamily, k: u64) -> Result<GradedFamily> {
        if k == 0 {
            return Err(Error::Domain("Veronese degree must be positive".into()));
        }
        let name = format!("veronese({}, {k})", f.name);
        Ok(GradedFamily::build(f.nvars(), FamilyKind::Veronese(f.clone(), k), name))
    }

    pub fn named(mut self, name: &str) -> GradedFamily {
        self.name = name.into();
        self
    }

    /// Same family and cache, with extra user assertions.
    pub fn asserting(&self, extra: &[Assertion]) -> GradedFamily {
        let mut all = (*self.assertions).clone();
        for a in extra {
            if !all.contains(a) {
                all.push(a.clone());
            }
        }
        GradedFamily { inner: self.inner.clone(), name: self.name.clone(), assertions: Arc::new(all) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nvars(&self) -> usize {
        self.inner.nvars
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.inner.kind
    }

    pub fn assertions(&self) -> &[Assertion] {
        &self.assertions
    }

    pub fn same_family(&self, other: &GradedFamily) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    /// Member with the conventions `a_i = (0)` for `i < 0` and `a_0 = S`.
    pub fn member_at(&self, n: i64) -> Result<MonomialIdeal> {
        if n < 0 {
            return Ok(MonomialIdeal::zero(self.nvars()));
        }
        self.member(n as u64)
    }

    pub fn member(&self, n: u64) -> Result<MonomialIdeal> {
        if n == 0 {
            return Ok(MonomialIdeal::unit(self.nvars()));
        }
        if let Some(m) = self.cached(n) {
            return Ok(m);
        }
        if self.inner.self_referential {
            // fill bottom-up so self references never recurse deeply
            for i in 1..n {
                if self.cached(i).is_none() {
                    let m = self.compute(i)?;
                    self.store(i, m);
                }
            }
        }
        let m = self.compute(n)?;
        Ok(self.store(n, m))
    }

    fn cached(&self, n: u64) -> Option<MonomialIdeal> {
        self.inner.cache.read().unwrap_or_else(|e| e.into_inner()).get(&n).cloned()
    }

    fn store(&self, n: u64, m: MonomialIdeal) -> MonomialIdeal {
        let mut cache = self.inner.cache.write().unwrap_or_else(|e| e.into_inner());
        cache.entry(n).or_insert(m).clone()
    }

    fn compute(&self, n: u64) -> Result<MonomialIdeal> {
        let idx = i64::try_from(n).map_err(|_| Error::Overflow)?;
        let m = match &self.inner.kind {
            FamilyKind::Powers(i) => i.power_cached(n)?,
            FamilyKind::Symbolic(i) => {
                let covers = match self.inner.covers.get() {
                    Some(c) => c,
                    None => {
                        let c = symbolic_covers(i)?;
                        self.inner.covers.get_or_init(|| c)
                    }
                };
                symbolic_power_from_covers(i, covers, n)?
            }
            FamilyKind::ClosurePowers(i) => {
                if i.is_zero() {
                    return Ok(i.clone());
                }
                let base = match self.inner.closure.get() {
                    Some(b) => b,
                    None => {
                        let b = ClosureBase::new(i)?;
                        self.inner.closure.get_or_init(|| b)
                    }
                };
                base.power(n)
            }
            FamilyKind::Ceiling { ideal, alpha } => ideal.power_cached(ceil_scale(alpha, n)?)?,
            FamilyKind::Periodic { period, patterns } => patterns[(n % period) as usize].eval(idx, self)?,
            FamilyKind::Table { prefix, tail } => match prefix.get((n - 1) as usize) {
                Some(e) => e.eval(idx, self)?,
                None => match tail {
                    Some(e) => e.eval(idx, self)?,
                    None => {
                        return Err(Error::Range {
                            index: idx,
                            reason: format!("table family '{}' has {} members and no tail rule", self.name, prefix.len()),
                        })
                    }
                },
            },
            FamilyKind::Formula(e) => e.eval(idx, self)?,
            FamilyKind::ClosureOf(g) => {
                let m = g.member(n)?;
                if m.is_zero() || m.is_unit() {
                    m
                } else {
                    integral_closure(&m, 1)?
                }
            }
            FamilyKind::Veronese(g, k) => g.member(n.checked_mul(*k).ok_or(Error::Overflow)?)?,
        };
        if m.nvars() != self.nvars() {
            return Err(Error::Dimension { expected: self.nvars(), found: m.nvars() });
        }
        Ok(m)
    }

    fn asserted(&self, pred: impl Fn(&Assertion) -> bool) -> bool {
        self.assertions.iter().any(pred)
    }

    /// Whether `a_p a_q ⊆ a_{p+q}` is known without a window check.
    pub fn graded_basis(&self) -> Basis {
        let structural = match self.kind() {
            FamilyKind::Powers(_) | FamilyKind::Symbolic(_) | FamilyKind::ClosurePowers(_) => true,
            FamilyKind::Ceiling { .. } => true,
            FamilyKind::ClosureOf(g) | FamilyKind::Veronese(g, _) => g.graded_basis().is_known(),
            FamilyKind::Formula(e) => !e.depends_on_n() && !has_self(e),
            _ => false,
        };
        if structural {
            Basis::Structural
        } else if self.asserted(|a| matches!(a, Assertion::Graded | Assertion::Filtration)) {
            Basis::Asserted
        } else {
            Basis::Unknown
        }
    }

    /// Whether `a_{p+1} ⊆ a_p` is known without a window check.
    pub fn filtration_basis(&self) -> Basis {
        let structural = match self.kind() {
            FamilyKind::Powers(_) | FamilyKind::Symbolic(_) | FamilyKind::ClosurePowers(_) => true,
            FamilyKind::Ceiling { .. } => true,
            FamilyKind::ClosureOf(g) | FamilyKind::Veronese(g, _) => g.filtration_basis().is_known(),
            FamilyKind::Formula(e) => !has_self(e) && e.is_decreasing(),
            FamilyKind::Table { prefix, tail } => {
                prefix.is_empty() && tail.as_ref().is_some_and(|e| !has_self(e) && e.is_decreasing())
            }
            FamilyKind::Periodic { period, patterns } => {
                *period == 1 && !has_self(&patterns[0]) && patterns[0].is_decreasing()
            }
        };
        if structural {
            Basis::Structural
        } else if self.asserted(|a| matches!(a, Assertion::Filtration)) {
            Basis::Asserted
        } else {
            Basis::Unknown
        }
    }

    /// A `k` with `a_{kn} = a_k^n` for all `n`, known from the description.
    pub fn structural_veronese(&self) -> Option<(u64, Basis)> {
        match self.kind() {
            FamilyKind::Powers(_) => return Some((1, Basis::Structural)),
            FamilyKind::Ceiling { alpha, .. } => {
                // a_{qn} = I^{pn} = (I^p)^n for alpha = p/q
                let q = alpha.denom();
                if let Ok(q) = u64::try_from(q) {
                    return Some((q, Basis::Structural));
                }
            }
            FamilyKind::Formula(e) if !e.depends_on_n() => return Some((1, Basis::Structural)),
            _ => {}
        }
        self.assertions.iter().find_map(|a| match a {
            Assertion::StandardVeronese(k) => Some((*k, Basis::Asserted)),
            _ => None,
        })
    }

    /// `(b, k)` with `a_{i+k} ⊆ b^i ⊆ a_i`, known from the description.
    pub fn structural_bequiv(&self) -> Option<(MonomialIdeal, u64, Basis)> {
        match self.kind() {
            FamilyKind::Powers(i) => return Some((i.clone(), 0, Basis::Structural)),
            FamilyKind::ClosurePowers(i) => {
                return Some((i.clone(), (self.nvars() as u64).saturating_sub(1), Basis::Structural))
            }
            FamilyKind::Ceiling { ideal, alpha } if alpha.is_integer() && !alpha.is_zero() => {
                let a = u64::try_from(alpha.to_integer()).ok()?;
                let b = ideal.power_cached(a).ok()?;
                return Some((b, 0, Basis::Structural));
            }
            _ => {}
        }
        self.assertions.iter().find_map(|a| match a {
            Assertion::BEquivalent { ideal, k } => Some((ideal.clone(), *k, Basis::Asserted)),
            _ => None,
        })
    }

    /// `(t, I)` with `a_n = I` for every `n >= t`, known from the description.
    pub fn constant_tail(&self) -> Result<Option<(u64, MonomialIdeal)>> {
        Ok(match self.kind() {
            FamilyKind::Formula(e) if !e.depends_on_n() => Some((1, e.eval(1, self)?)),
            FamilyKind::Table { prefix, tail: Some(e) } if !e.depends_on_n() => {
                let t = prefix.len() as u64 + 1;
                Some((t, self.member(t)?))
            }
            FamilyKind::Periodic { period: 1, patterns } if !patterns[0].depends_on_n() => {
                Some((1, self.member(1)?))
            }
            FamilyKind::Powers(i) | FamilyKind::ClosurePowers(i) if i.is_unit() || i.is_zero() => {
                Some((1, self.member(1)?))
            }
            FamilyKind::Ceiling { ideal, alpha } if alpha.is_zero() || ideal.is_unit() => {
                Some((1, self.member(1)?))
            }
            FamilyKind::ClosureOf(g) => match g.constant_tail()? {
                Some((t, _)) => Some((t, self.member(t)?)),
                None => None,
            },
            FamilyKind::Veronese(g, k) => match g.constant_tail()? {
                Some((t, _)) => {
                    let s = t.div_ceil(*k);
                    Some((s, self.member(s)?))
                }
                None => None,
            },
            _ => None,
        })
    }

    /// Whether the closure algebra is a finite module over the Rees algebra.
    pub fn closure_module_finite(&self) -> Basis {
        let structural = match self.kind() {
            FamilyKind::Powers(_) | FamilyKind::ClosurePowers(_) => true,
            FamilyKind::Ceiling { alpha, .. } => alpha.is_integer(),
            _ => false,
        };
        if structural {
            Basis::Structural
        } else if self.asserted(|a| matches!(a, Assertion::ClosureModuleFinite)) {
            Basis::Asserted
        } else {
            Basis::Unknown
        }
    }
}
