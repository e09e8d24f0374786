//! Monomials and monomial ideals of `k[x_1, ..., x_n]`.
//!
//! An ideal is either given by its minimal generators or by a membership
//! view (symbolic power, integral closure of a power). Views answer
//! membership directly and expand to generators only when asked.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::ser::{Serialize, SerializeSeq, Serializer};
use smallvec::SmallVec;

use crate::error::{check_dim, Error, Result};

/// Default cap on the number of lattice columns scanned when a view is
/// expanded into generators.
pub const DEFAULT_MATERIALIZE_CAP: u64 = 100_000;

const INDEX_MIN_GENS: usize = 24;
const INDEX_MAX_CELLS: u64 = 1 << 22;

type Exps = SmallVec<[u64; 4]>;

/// Exponent vector of a monomial. Ordering is lexicographic on exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: Exps,
}

impl Monomial {
    pub fn new(exps: impl Into<Vec<u64>>) -> Self {
        Monomial { exps: Exps::from_vec(exps.into()) }
    }

    pub fn from_slice(exps: &[u64]) -> Self {
        Monomial { exps: Exps::from_slice(exps) }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial { exps: smallvec::smallvec![0; nvars] }
    }

    /// `x_i^e` in `nvars` variables.
    pub fn var(nvars: usize, i: usize, e: u64) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = e;
        m
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn degree(&self) -> u128 {
        self.exps.iter().map(|&e| e as u128).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.iter().all(|&e| e <= 1)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.exps.len()).filter(|&i| self.exps[i] > 0).collect()
    }

    /// True when `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        check_dim(self.nvars(), other.nvars())?;
        let mut exps = Exps::with_capacity(self.exps.len());
        for (a, b) in self.exps.iter().zip(other.exps.iter()) {
            exps.push(a.checked_add(*b).ok_or(Error::Overflow)?);
        }
        Ok(Monomial { exps })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps = self.exps.iter().zip(other.exps.iter()).map(|(a, b)| *a.max(b)).collect();
        Monomial { exps }
    }

    pub fn pow(&self, k: u64) -> Result<Monomial> {
        let mut exps = Exps::with_capacity(self.exps.len());
        for e in &self.exps {
            exps.push(e.checked_mul(k).ok_or(Error::Overflow)?);
        }
        Ok(Monomial { exps })
    }

    /// Divides by `x_i` if possible.
    pub fn lower(&self, i: usize) -> Option<Monomial> {
        if self.exps[i] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.exps[i] -= 1;
        Some(m)
    }
}

impl std::ops::Index<usize> for Monomial {
    type Output = u64;
    fn index(&self, i: usize) -> &u64 {
        &self.exps[i]
    }
}

pub(crate) fn var_name(nvars: usize, i: usize) -> String {
    if nvars <= 4 {
        ["x", "y", "z", "w"][i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.nvars();
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(&var_name(n, i))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.exps.len()))?;
        for e in &self.exps {
            seq.serialize_element(e)?;
        }
        seq.end()
    }
}

/// Membership predicate for `I^(n)` of a squarefree ideal: every minimal
/// vertex cover `C` of the generator supports satisfies `sum_{i in C} a_i >= n`.
#[derive(Clone, Debug)]
pub struct SymbolicView {
    pub covers: Vec<Vec<usize>>,
    pub n: u64,
}

/// Membership predicate for the integral closure of `I^scale`:
/// `<w, a> >= scale * c` for every non-coordinate facet `(w, c)` of NP(I).
#[derive(Clone, Debug)]
pub struct ClosureView {
    pub facets: Vec<(Vec<u64>, u64)>,
    pub scale: u64,
    pub base: MonomialIdeal,
}

#[derive(Clone, Debug)]
pub enum View {
    Explicit,
    Symbolic(SymbolicView),
    Closure(ClosureView),
}

/// Lookup table answering "is some generator a divisor of m" in O(1).
///
/// Cells range over the first n-1 coordinates; each holds the least last
/// exponent among generators dominated by the cell.
struct StaircaseIndex {
    extents: Vec<u64>,
    table: Vec<u64>,
}

impl StaircaseIndex {
    fn build(nvars: usize, gens: &[Monomial]) -> Option<Self> {
        let lead = nvars - 1;
        let mut extents = vec![1u64; lead];
        for g in gens {
            for i in 0..lead {
                extents[i] = extents[i].max(g[i].checked_add(1)?);
            }
        }
        let mut cells: u64 = 1;
        for &e in &extents {
            cells = cells.checked_mul(e)?;
            if cells > INDEX_MAX_CELLS {
                return None;
            }
        }
        let mut table = vec![u64::MAX; cells as usize];
        let idx = Self { extents, table: Vec::new() };
        for g in gens {
            let c = idx.cell(|i| g[i]);
            table[c] = table[c].min(g[lead]);
        }
        let mut stride = 1usize;
        for d in (0..lead).rev() {
            let ext = idx.extents[d] as usize;
            for c in 0..table.len() {
                if (c / stride) % ext > 0 {
                    let prev = table[c - stride];
                    if prev < table[c] {
                        table[c] = prev;
                    }
                }
            }
            stride *= ext;
        }
        Some(Self { table, ..idx })
    }

    fn cell(&self, coord: impl Fn(usize) -> u64) -> usize {
        let mut c = 0usize;
        for (i, &ext) in self.extents.iter().enumerate() {
            c = c * ext as usize + coord(i).min(ext - 1) as usize;
        }
        c
    }

    fn contains_with(&self, last: u64, coord: impl Fn(usize) -> u64) -> bool {
        self.table[self.cell(coord)] <= last
    }
}

struct Inner {
    nvars: usize,
    view: View,
    cap: u64,
    gens: OnceLock<Result<Arc<Vec<Monomial>>>>,
    index: OnceLock<Option<StaircaseIndex>>,
    powers: Mutex<BTreeMap<u64, MonomialIdeal>>,
}

/// A monomial ideal, cheap to clone and share.
#[derive(Clone)]
pub struct MonomialIdeal {
    inner: Arc<Inner>,
}

impl MonomialIdeal {
    fn with_gens(nvars: usize, gens: Vec<Monomial>) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(Ok(Arc::new(gens)));
        MonomialIdeal {
            inner: Arc::new(Inner {
                nvars,
                view: View::Explicit,
                cap: DEFAULT_MATERIALIZE_CAP,
                gens: cell,
                index: OnceLock::new(),
                powers: Mutex::new(BTreeMap::new()),
            }),
        }
    }

    pub(crate) fn from_view(nvars: usize, view: View) -> Self {
        MonomialIdeal {
            inner: Arc::new(Inner {
                nvars,
                view,
                cap: DEFAULT_MATERIALIZE_CAP,
                gens: OnceLock::new(),
                index: OnceLock::new(),
                powers: Mutex::new(BTreeMap::new()),
            }),
        }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::with_gens(nvars, Vec::new())
    }

    pub fn unit(nvars: usize) -> Self {
        Self::with_gens(nvars, vec![Monomial::one(nvars)])
    }

    pub fn principal(m: Monomial) -> Self {
        Self::with_gens(m.nvars(), vec![m])
    }

    /// The ideal generated by `gens`, reduced to minimal generators.
    pub fn from_generators(nvars: usize, gens: Vec<Monomial>) -> Result<Self> {
        for g in &gens {
            check_dim(nvars, g.nvars())?;
        }
        Ok(Self::with_gens(nvars, minimize_vec(nvars, gens)))
    }

    pub fn from_exponents(nvars: usize, exps: &[Vec<u64>]) -> Result<Self> {
        Self::from_generators(nvars, exps.iter().map(|e| Monomial::from_slice(e)).collect())
    }

    /// Same view with a different cap on generator expansion.
    pub fn with_materialize_cap(&self, cap: u64) -> Self {
        MonomialIdeal {
            inner: Arc::new(Inner {
                nvars: self.inner.nvars,
                view: self.inner.view.clone(),
                cap,
                gens: match self.inner.view {
                    View::Explicit => self.inner.gens.clone(),
                    _ => OnceLock::new(),
                },
                index: OnceLock::new(),
                powers: Mutex::new(BTreeMap::new()),
            }),
        }
    }

    pub fn nvars(&self) -> usize {
        self.inner.nvars
    }

    pub fn view(&self) -> &View {
        &self.inner.view
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.inner.view, View::Explicit)
    }

    /// Minimal generators in lexicographic order, expanding a view if needed.
    pub fn generators(&self) -> Result<&[Monomial]> {
        let r = self.inner.gens.get_or_init(|| self.materialize().map(Arc::new));
        match r {
            Ok(v) => Ok(v.as_slice()),
            Err(e) => Err(e.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self.inner.view {
            View::Explicit => self.generators().map(|g| g.is_empty()).unwrap_or(false),
            _ => false,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.contains(&Monomial::one(self.nvars())).unwrap_or(false)
    }

    pub fn is_squarefree(&self) -> Result<bool> {
        Ok(self.generators()?.iter().all(Monomial::is_squarefree))
    }

    /// Membership of a monomial.
    pub fn contains(&self, m: &Monomial) -> Result<bool> {
        check_dim(self.nvars(), m.nvars())?;
        Ok(self.contains_with(|i| m[i]))
    }

    fn contains_with(&self, coord: impl Fn(usize) -> u64) -> bool {
        let n = self.nvars();
        match &self.inner.view {
            View::Explicit => {
                let gens = self.explicit_gens();
                if gens.len() >= INDEX_MIN_GENS {
                    let idx = self.inner.index.get_or_init(|| StaircaseIndex::build(n, gens));
                    if let Some(idx) = idx {
                        return idx.contains_with(coord(n - 1), &coord);
                    }
                }
                gens.iter().any(|g| (0..n).all(|i| g[i] <= coord(i)))
            }
            View::Symbolic(v) => v.covers.iter().all(|c| {
                let s: u128 = c.iter().map(|&i| coord(i) as u128).sum();
                s >= v.n as u128
            }),
            View::Closure(v) => v.facets.iter().all(|(w, c)| {
                let rhs = v.scale as u128 * *c as u128;
                let mut s: u128 = 0;
                for i in 0..n {
                    match s.checked_add(w[i] as u128 * coord(i) as u128) {
                        Some(t) => s = t,
                        None => return true,
                    }
                }
                s >= rhs
            }),
        }
    }

    fn explicit_gens(&self) -> &[Monomial] {
        match self.inner.gens.get() {
            Some(Ok(v)) => v.as_slice(),
            _ => &[],
        }
    }

    /// Per-coordinate bound on exponents of minimal generators of a view.
    fn box_bound(&self) -> Result<Vec<u64>> {
        let n = self.nvars();
        match &self.inner.view {
            View::Explicit => unreachable!(),
            View::Symbolic(v) => {
                let mut b = vec![0u64; n];
                for c in &v.covers {
                    for &i in c {
                        b[i] = v.n;
                    }
                }
                Ok(b)
            }
            View::Closure(v) => {
                let mut b = vec![0u64; n];
                for g in v.base.generators()? {
                    for i in 0..n {
                        b[i] = b[i].max(g[i]);
                    }
                }
                b.iter().map(|&e| e.checked_mul(v.scale).ok_or(Error::Overflow)).collect()
            }
        }
    }

    /// Expand a view: for each column of the leading coordinates find the
    /// least last exponent giving a member, then keep the minimal ones.
    fn materialize(&self) -> Result<Vec<Monomial>> {
        let n = self.nvars();
        let bound = self.box_bound()?;
        let lead = n - 1;
        let mut columns: u64 = 1;
        for &b in &bound[..lead] {
            columns = columns.saturating_mul(b.saturating_add(1));
        }
        if columns > self.inner.cap {
            return Err(Error::Capability(format!(
                "expanding {} needs {columns} lattice columns, cap is {}",
                self.describe(),
                self.inner.cap
            )));
        }
        let mut out = Vec::new();
        let mut cur = vec![0u64; n];
        loop {
            let top = bound[lead];
            cur[lead] = top;
            if self.contains_with(|i| cur[i]) {
                let (mut lo, mut hi) = (0u64, top);
                while lo < hi {
                    let mid = lo + (hi - lo) / 2;
                    cur[lead] = mid;
                    if self.contains_with(|i| cur[i]) {
                        hi = mid;
                    } else {
                        lo = mid + 1;
                    }
                }
                cur[lead] = lo;
                let minimal = (0..lead).all(|j| {
                    cur[j] == 0
                        || !self.contains_with(|i| if i == j { cur[i] - 1 } else { cur[i] })
                });
                if minimal {
                    out.push(Monomial::from_slice(&cur));
                }
            }
            let mut d = lead;
            loop {
                if d == 0 {
                    out.sort_unstable();
                    return Ok(out);
                }
                d -= 1;
                if cur[d] < bound[d] {
                    cur[d] += 1;
                    break;
                }
                cur[d] = 0;
            }
        }
    }

    fn describe(&self) -> &'static str {
        match self.inner.view {
            View::Explicit => "ideal",
            View::Symbolic(_) => "symbolic power",
            View::Closure(_) => "integral closure",
        }
    }

    /// `self^n`, memoized on this ideal and built from the largest cached
    /// lower power.
    pub fn power_cached(&self, n: u64) -> Result<MonomialIdeal> {
        if n == 0 {
            return Ok(Self::unit(self.nvars()));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let (mut k, mut acc) = {
            let memo = self.inner.powers.lock().unwrap();
            if let Some(p) = memo.get(&n) {
                return Ok(p.clone());
            }
            match memo.range(..n).next_back() {
                Some((k, p)) => (*k, p.clone()),
                None => (1, self.clone()),
            }
        };
        while k < n {
            acc = multiply(&acc, self)?;
            k += 1;
            self.inner.powers.lock().unwrap().insert(k, acc.clone());
        }
        Ok(acc)
    }
}

impl PartialEq for MonomialIdeal {
    fn eq(&self, other: &Self) -> bool {
        if self.nvars() != other.nvars() {
            return false;
        }
        match (self.generators(), other.generators()) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.generators() {
            Ok([]) => f.write_str("(0)"),
            Ok(gens) => {
                f.write_str("(")?;
                for (i, g) in gens.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_str(")")
            }
            Err(_) => write!(f, "<{} view>", self.describe()),
        }
    }
}

impl Serialize for MonomialIdeal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn minimize_vec(nvars: usize, mut v: Vec<Monomial>) -> Vec<Monomial> {
    v.sort_unstable();
    v.dedup();
    if v.len() >= INDEX_MIN_GENS {
        if let Some(idx) = StaircaseIndex::build(nvars, &v) {
            let last = nvars - 1;
            v.retain(|m| {
                (0..nvars).all(|j| {
                    m[j] == 0 || {
                        let lower = |i: usize| if i == j { m[i] - 1 } else { m[i] };
                        !idx.contains_with(lower(last), lower)
                    }
                })
            });
            return v;
        }
    }
    let mut by_deg: Vec<(u128, Monomial)> = v.into_iter().map(|m| (m.degree(), m)).collect();
    by_deg.sort_unstable();
    let mut kept: Vec<(u128, Monomial)> = Vec::new();
    for (d, m) in by_deg {
        if !kept.iter().any(|(e, g)| *e < d && g.divides(&m)) {
            kept.push((d, m));
        }
    }
    let mut out: Vec<Monomial> = kept.into_iter().map(|(_, m)| m).collect();
    out.sort_unstable();
    out
}

/// Divisibility-minimal subset of `gens`, as an ideal.
pub fn minimize(nvars: usize, gens: Vec<Monomial>) -> Result<MonomialIdeal> {
    MonomialIdeal::from_generators(nvars, gens)
}

fn same_ring(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<()> {
    check_dim(i.nvars(), j.nvars())
}

pub fn multiply(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<MonomialIdeal> {
    same_ring(i, j)?;
    let (a, b) = (i.generators()?, j.generators()?);
    let mut prods = Vec::with_capacity(a.len() * b.len());
    for g in a {
        for h in b {
            prods.push(g.mul(h)?);
        }
    }
    MonomialIdeal::from_generators(i.nvars(), prods)
}

pub fn sum(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<MonomialIdeal> {
    same_ring(i, j)?;
    let mut gens = i.generators()?.to_vec();
    gens.extend_from_slice(j.generators()?);
    MonomialIdeal::from_generators(i.nvars(), gens)
}

pub fn intersect(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<MonomialIdeal> {
    same_ring(i, j)?;
    let (a, b) = (i.generators()?, j.generators()?);
    let mut lcms = Vec::with_capacity(a.len() * b.len());
    for g in a {
        for h in b {
            lcms.push(g.lcm(h));
        }
    }
    MonomialIdeal::from_generators(i.nvars(), lcms)
}

/// `I^n` by repeated squaring.
pub fn power(i: &MonomialIdeal, mut n: u64) -> Result<MonomialIdeal> {
    let mut acc = MonomialIdeal::unit(i.nvars());
    let mut base = i.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc = multiply(&acc, &base)?;
        }
        n >>= 1;
        if n > 0 {
            base = multiply(&base, &base)?;
        }
    }
    Ok(acc)
}

pub fn contains_monomial(i: &MonomialIdeal, m: &Monomial) -> Result<bool> {
    i.contains(m)
}

/// First generator of `i` (in lexicographic order) outside `j`.
pub fn first_non_member(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<Option<Monomial>> {
    same_ring(i, j)?;
    let gens = i.generators().map_err(|e| match e {
        Error::Capability(msg) => Error::Representation(format!("left side has no generators: {msg}")),
        other => other,
    })?;
    for g in gens {
        if !j.contains(g)? {
            return Ok(Some(g.clone()));
        }
    }
    Ok(None)
}

pub fn is_subset(i: &MonomialIdeal, j: &MonomialIdeal) -> Result<bool> {
    Ok(first_non_member(i, j)?.is_none())
}
