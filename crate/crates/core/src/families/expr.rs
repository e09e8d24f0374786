//! Index expressions in `n` and ideal expressions over named ideals and
//! family members, with a small text syntax:
//!
//! ```text
//! b[n] + b[n-2]*a2        sum and product of members
//! I^ceil_sqrt(n)          power with an index exponent
//! x1^(ceil(n/2)) + mono(0,2)*m^(ceil(n/2)-1)
//! closure(I^2), cap(P, Q), self[n-1], unit, zero
//! ```
//!
//! Index functions: `ceil`, `floor`, `ceil_sqrt`, `ceil_log2`, `max`, `min`,
//! `mod`. Division inside an index expression is exact rational division;
//! the final value must be an integer.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::closures::integral_closure;
use crate::error::{Error, Result};
use crate::monomial::{intersect, multiply, power, sum, Monomial, MonomialIdeal};
use crate::valuations::{family_value, value_of_ideal, MonomialValuation};

use super::GradedFamily;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexExpr {
    N,
    Const(BigRational),
    Add(Box<IndexExpr>, Box<IndexExpr>),
    Sub(Box<IndexExpr>, Box<IndexExpr>),
    Mul(Box<IndexExpr>, Box<IndexExpr>),
    Div(Box<IndexExpr>, Box<IndexExpr>),
    Ceil(Box<IndexExpr>),
    Floor(Box<IndexExpr>),
    CeilSqrt(Box<IndexExpr>),
    CeilLog2(Box<IndexExpr>),
    Max(Box<IndexExpr>, Box<IndexExpr>),
    Min(Box<IndexExpr>, Box<IndexExpr>),
    Mod(Box<IndexExpr>, Box<IndexExpr>),
}

fn int_of(q: &BigRational, what: &str) -> Result<BigInt> {
    if q.is_integer() {
        Ok(q.to_integer())
    } else {
        Err(Error::Domain(format!("{what} needs an integer argument, got {q}")))
    }
}

impl IndexExpr {
    pub fn parse(text: &str) -> Result<IndexExpr> {
        let mut p = Parser::new(text)?;
        let e = p.index_expr()?;
        p.finish()?;
        Ok(e)
    }

    pub fn constant(v: i64) -> IndexExpr {
        IndexExpr::Const(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn eval_rational(&self, n: i64) -> Result<BigRational> {
        use IndexExpr::*;
        let b = |e: &IndexExpr| e.eval_rational(n);
        Ok(match self {
            N => BigRational::from_integer(BigInt::from(n)),
            Const(c) => c.clone(),
            Add(a, c) => b(a)? + b(c)?,
            Sub(a, c) => b(a)? - b(c)?,
            Mul(a, c) => b(a)? * b(c)?,
            Div(a, c) => {
                let d = b(c)?;
                if d.is_zero() {
                    return Err(Error::Domain("division by zero in index expression".into()));
                }
                b(a)? / d
            }
            Ceil(a) => b(a)?.ceil(),
            Floor(a) => b(a)?.floor(),
            CeilSqrt(a) => {
                let v = int_of(&b(a)?, "ceil_sqrt")?;
                if v.is_negative() {
                    return Err(Error::Domain("ceil_sqrt of a negative number".into()));
                }
                let r = v.sqrt();
                let r = if &r * &r == v { r } else { r + 1 };
                BigRational::from_integer(r)
            }
            CeilLog2(a) => {
                let v = int_of(&b(a)?, "ceil_log2")?;
                if !v.is_positive() {
                    return Err(Error::Domain("ceil_log2 of a nonpositive number".into()));
                }
                let bits = (v - 1u8).bits();
                BigRational::from_integer(BigInt::from(bits))
            }
            Max(a, c) => b(a)?.max(b(c)?),
            Min(a, c) => b(a)?.min(b(c)?),
            Mod(a, c) => {
                let x = int_of(&b(a)?, "mod")?;
                let m = int_of(&b(c)?, "mod")?;
                if !m.is_positive() {
                    return Err(Error::Domain("mod needs a positive modulus".into()));
                }
                let r = ((x % &m) + &m) % &m;
                BigRational::from_integer(r)
            }
        })
    }

    pub fn eval(&self, n: i64) -> Result<i64> {
        let q = self.eval_rational(n)?;
        if !q.is_integer() {
            return Err(Error::Domain(format!("index expression {self} is not integral at n={n}: {q}")));
        }
        q.to_integer().to_i64().ok_or(Error::Overflow)
    }

    pub fn depends_on_n(&self) -> bool {
        use IndexExpr::*;
        match self {
            N => true,
            Const(_) => false,
            Ceil(a) | Floor(a) | CeilSqrt(a) | CeilLog2(a) => a.depends_on_n(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Max(a, b) | Min(a, b) | Mod(a, b) => {
                a.depends_on_n() || b.depends_on_n()
            }
        }
    }

    fn constant_value(&self) -> Option<BigRational> {
        if self.depends_on_n() {
            None
        } else {
            self.eval_rational(0).ok()
        }
    }

    /// Sufficient syntactic test for being nondecreasing in `n`.
    pub fn is_nondecreasing(&self) -> bool {
        use IndexExpr::*;
        match self {
            N | Const(_) => true,
            Ceil(a) | Floor(a) | CeilSqrt(a) | CeilLog2(a) => a.is_nondecreasing(),
            Add(a, b) | Max(a, b) | Min(a, b) => a.is_nondecreasing() && b.is_nondecreasing(),
            Sub(a, b) => a.is_nondecreasing() && !b.depends_on_n(),
            Mul(a, b) => {
                let nonneg_const = |e: &IndexExpr| e.constant_value().is_some_and(|c| !c.is_negative());
                (nonneg_const(a) && b.is_nondecreasing()) || (nonneg_const(b) && a.is_nondecreasing())
            }
            Div(a, b) => a.is_nondecreasing() && b.constant_value().is_some_and(|c| c.is_positive()),
            Mod(..) => !self.depends_on_n(),
        }
    }
}

impl fmt::Display for IndexExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use IndexExpr::*;
        match self {
            N => f.write_str("n"),
            Const(c) => {
                if c.is_integer() {
                    write!(f, "{}", c.numer())
                } else {
                    write!(f, "({}/{})", c.numer(), c.denom())
                }
            }
            Add(a, b) => write!(f, "({a}+{b})"),
            Sub(a, b) => write!(f, "({a}-{b})"),
            Mul(a, b) => write!(f, "({a}*{b})"),
            Div(a, b) => write!(f, "({a}/{b})"),
            Ceil(a) => write!(f, "ceil({a})"),
            Floor(a) => write!(f, "floor({a})"),
            CeilSqrt(a) => write!(f, "ceil_sqrt({a})"),
            CeilLog2(a) => write!(f, "ceil_log2({a})"),
            Max(a, b) => write!(f, "max({a},{b})"),
            Min(a, b) => write!(f, "min({a},{b})"),
            Mod(a, b) => write!(f, "mod({a},{b})"),
        }
    }
}

/// Parsed ideal expression with names not yet bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprAst {
    Name(String),
    Member(String, IndexExpr),
    SelfAt(IndexExpr),
    Mono(Vec<u64>),
    Unit,
    Zero,
    Sum(Vec<ExprAst>),
    Product(Vec<ExprAst>),
    Intersect(Vec<ExprAst>),
    Power(Box<ExprAst>, IndexExpr),
    Closure(Box<ExprAst>),
}

/// What a name in an expression refers to.
#[derive(Clone)]
pub enum Binding {
    Ideal(MonomialIdeal),
    Family(GradedFamily),
}

impl ExprAst {
    pub fn parse(text: &str) -> Result<ExprAst> {
        let mut p = Parser::new(text)?;
        let e = p.ideal_expr()?;
        p.finish()?;
        Ok(e)
    }

    /// Names referenced, split into plain names and indexed (family) names.
    pub fn names(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        let mut plain = BTreeSet::new();
        let mut indexed = BTreeSet::new();
        self.collect(&mut plain, &mut indexed);
        (plain, indexed)
    }

    fn collect(&self, plain: &mut BTreeSet<String>, indexed: &mut BTreeSet<String>) {
        match self {
            ExprAst::Name(s) => {
                plain.insert(s.clone());
            }
            ExprAst::Member(s, _) => {
                indexed.insert(s.clone());
            }
            ExprAst::Sum(v) | ExprAst::Product(v) | ExprAst::Intersect(v) => {
                v.iter().for_each(|e| e.collect(plain, indexed))
            }
            ExprAst::Power(e, _) | ExprAst::Closure(e) => e.collect(plain, indexed),
            ExprAst::SelfAt(_) | ExprAst::Mono(_) | ExprAst::Unit | ExprAst::Zero => {}
        }
    }

    pub fn resolve(&self, nvars: usize, lookup: &dyn Fn(&str) -> Option<Binding>) -> Result<IdealExpr> {
        let go = |e: &ExprAst| e.resolve(nvars, lookup);
        let all = |v: &[ExprAst]| v.iter().map(go).collect::<Result<Vec<_>>>();
        Ok(match self {
            ExprAst::Name(s) => match lookup(s) {
                Some(Binding::Ideal(i)) => IdealExpr::Ideal(i),
                Some(Binding::Family(_)) => {
                    return Err(Error::Parse(format!("family '{s}' needs an index, as in {s}[n]")))
                }
                None => return Err(Error::Parse(format!("unknown name '{s}'"))),
            },
            ExprAst::Member(s, idx) => match lookup(s) {
                Some(Binding::Family(f)) => IdealExpr::Member(f, idx.clone()),
                Some(Binding::Ideal(_)) => return Err(Error::Parse(format!("'{s}' is an ideal, not a family"))),
                None => return Err(Error::Parse(format!("unknown family '{s}'"))),
            },
            ExprAst::SelfAt(idx) => IdealExpr::SelfAt(idx.clone()),
            ExprAst::Mono(e) => {
                if e.len() != nvars {
                    return Err(Error::Dimension { expected: nvars, found: e.len() });
                }
                IdealExpr::Ideal(MonomialIdeal::principal(Monomial::from_slice(e)))
            }
            ExprAst::Unit => IdealExpr::Ideal(MonomialIdeal::unit(nvars)),
            ExprAst::Zero => IdealExpr::Ideal(MonomialIdeal::zero(nvars)),
            ExprAst::Sum(v) => IdealExpr::Sum(all(v)?),
            ExprAst::Product(v) => IdealExpr::Product(all(v)?),
            ExprAst::Intersect(v) => IdealExpr::Intersect(all(v)?),
            ExprAst::Power(e, k) => IdealExpr::Power(Box::new(go(e)?), k.clone()),
            ExprAst::Closure(e) => IdealExpr::Closure(Box::new(go(e)?)),
        })
    }
}

/// Ideal-valued expression of the index `n`.
#[derive(Clone)]
pub enum IdealExpr {
    Ideal(MonomialIdeal),
    Member(GradedFamily, IndexExpr),
    /// Member of the family being defined, at an index below `n`.
    SelfAt(IndexExpr),
    Sum(Vec<IdealExpr>),
    Product(Vec<IdealExpr>),
    Intersect(Vec<IdealExpr>),
    Power(Box<IdealExpr>, IndexExpr),
    Closure(Box<IdealExpr>),
}

impl fmt::Debug for IdealExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealExpr::Ideal(i) => write!(f, "{i}"),
            IdealExpr::Member(g, k) => write!(f, "{}[{k}]", g.name()),
            IdealExpr::SelfAt(k) => write!(f, "self[{k}]"),
            IdealExpr::Sum(v) => write!(f, "Sum{v:?}"),
            IdealExpr::Product(v) => write!(f, "Product{v:?}"),
            IdealExpr::Intersect(v) => write!(f, "Intersect{v:?}"),
            IdealExpr::Power(e, k) => write!(f, "({e:?})^{k}"),
            IdealExpr::Closure(e) => write!(f, "closure({e:?})"),
        }
    }
}

fn power_index(k: i64) -> Result<u64> {
    u64::try_from(k).map_err(|_| Error::Range { index: k, reason: "negative power of an ideal".into() })
}

impl IdealExpr {
    pub fn parse(text: &str, nvars: usize, lookup: &dyn Fn(&str) -> Option<Binding>) -> Result<IdealExpr> {
        ExprAst::parse(text)?.resolve(nvars, lookup)
    }

    pub fn eval(&self, n: i64, this: &GradedFamily) -> Result<MonomialIdeal> {
        let nv = this.nvars();
        match self {
            IdealExpr::Ideal(i) => Ok(i.clone()),
            IdealExpr::Member(g, k) => g.member_at(k.eval(n)?),
            IdealExpr::SelfAt(k) => this.member_at(self_index(k, n)?),
            IdealExpr::Sum(v) => {
                let mut acc = MonomialIdeal::zero(nv);
                for e in v {
                    acc = sum(&acc, &e.eval(n, this)?)?;
                }
                Ok(acc)
            }
            IdealExpr::Product(v) => {
                let mut acc = MonomialIdeal::unit(nv);
                for e in v {
                    acc = multiply(&acc, &e.eval(n, this)?)?;
                }
                Ok(acc)
            }
            IdealExpr::Intersect(v) => {
                let mut acc = MonomialIdeal::unit(nv);
                for e in v {
                    acc = intersect(&acc, &e.eval(n, this)?)?;
                }
                Ok(acc)
            }
            IdealExpr::Power(e, k) => {
                let k = power_index(k.eval(n)?)?;
                match &**e {
                    IdealExpr::Ideal(i) => i.power_cached(k),
                    other => power(&other.eval(n, this)?, k),
                }
            }
            IdealExpr::Closure(e) => {
                let i = e.eval(n, this)?;
                if i.is_zero() {
                    Ok(i)
                } else {
                    integral_closure(&i, 1)
                }
            }
        }
    }

    /// `v` of the value at `n` (`None` for the zero ideal), using
    /// `v(IJ) = v(I)+v(J)`, `v(I+J) = min` and `v(I^k) = k v(I)`.
    pub fn value(&self, v: &MonomialValuation, n: i64, this: &GradedFamily) -> Result<Option<u64>> {
        let add = |a: Option<u64>, b: Option<u64>| -> Result<Option<u64>> {
            match (a, b) {
                (Some(x), Some(y)) => Ok(Some(x.checked_add(y).ok_or(Error::Overflow)?)),
                _ => Ok(None),
            }
        };
        match self {
            IdealExpr::Ideal(i) => {
                if i.is_zero() {
                    Ok(None)
                } else {
                    Ok(Some(value_of_ideal(v, i)?))
                }
            }
            IdealExpr::Member(g, k) => family_value(v, g, k.eval(n)?),
            IdealExpr::SelfAt(k) => family_value(v, this, self_index(k, n)?),
            IdealExpr::Sum(list) => {
                let mut best: Option<u64> = None;
                for e in list {
                    if let Some(x) = e.value(v, n, this)? {
                        best = Some(best.map_or(x, |b| b.min(x)));
                    }
                }
                Ok(best)
            }
            IdealExpr::Product(list) => {
                let mut acc = Some(0u64);
                for e in list {
                    acc = add(acc, e.value(v, n, this)?)?;
                }
                Ok(acc)
            }
            IdealExpr::Power(e, k) => {
                let k = power_index(k.eval(n)?)?;
                if k == 0 {
                    return Ok(Some(0));
                }
                match e.value(v, n, this)? {
                    Some(x) => Ok(Some(x.checked_mul(k).ok_or(Error::Overflow)?)),
                    None => Ok(None),
                }
            }
            IdealExpr::Closure(e) => e.value(v, n, this),
            IdealExpr::Intersect(_) => {
                let i = self.eval(n, this)?;
                if i.is_zero() {
                    Ok(None)
                } else {
                    Ok(Some(value_of_ideal(v, &i)?))
                }
            }
        }
    }

    pub fn depends_on_n(&self) -> bool {
        match self {
            IdealExpr::Ideal(_) => false,
            IdealExpr::Member(_, k) => k.depends_on_n(),
            IdealExpr::SelfAt(_) => true,
            IdealExpr::Sum(v) | IdealExpr::Product(v) | IdealExpr::Intersect(v) => {
                v.iter().any(IdealExpr::depends_on_n)
            }
            IdealExpr::Power(e, k) => e.depends_on_n() || k.depends_on_n(),
            IdealExpr::Closure(e) => e.depends_on_n(),
        }
    }

    /// Sufficient test for the value being weakly decreasing in `n >= 1`.
    pub fn is_decreasing(&self) -> bool {
        match self {
            IdealExpr::Ideal(_) => true,
            IdealExpr::Member(g, k) => {
                !k.depends_on_n()
                    || (k.is_nondecreasing()
                        && k.eval(1).is_ok_and(|v| v >= 0)
                        && g.filtration_basis().is_known())
            }
            IdealExpr::SelfAt(_) => false,
            IdealExpr::Sum(v) | IdealExpr::Product(v) | IdealExpr::Intersect(v) => {
                v.iter().all(IdealExpr::is_decreasing)
            }
            IdealExpr::Power(e, k) => {
                e.is_decreasing() && (!e.depends_on_n() || !k.depends_on_n()) && k.is_nondecreasing()
            }
            IdealExpr::Closure(e) => e.is_decreasing(),
        }
    }
}

fn self_index(k: &IndexExpr, n: i64) -> Result<i64> {
    let i = k.eval(n)?;
    if i >= n {
        return Err(Error::Range { index: i, reason: format!("self reference at n={n} must point below n") });
    }
    Ok(i)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    text: String,
}

impl Parser {
    fn new(text: &str) -> Result<Parser> {
        let mut toks = Vec::new();
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push(Tok::Int(s.parse().map_err(|_| Error::Parse(format!("bad number '{s}'")))?));
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push(Tok::Ident(chars[start..i].iter().collect()));
            } else if "+-*/^()[],".contains(c) {
                toks.push(Tok::Sym(c));
                i += 1;
            } else {
                return Err(Error::Parse(format!("unexpected character '{c}' in '{text}'")));
            }
        }
        Ok(Parser { toks, pos: 0, text: text.to_string() })
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} in '{}'", self.pos + 1, self.text))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.err("trailing input"))
        }
    }

    fn index_expr(&mut self) -> Result<IndexExpr> {
        let mut e = self.index_term()?;
        loop {
            if self.eat('+') {
                e = IndexExpr::Add(Box::new(e), Box::new(self.index_term()?));
            } else if self.eat('-') {
                e = IndexExpr::Sub(Box::new(e), Box::new(self.index_term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn index_term(&mut self) -> Result<IndexExpr> {
        let mut e = self.index_unary()?;
        loop {
            if self.eat('*') {
                e = IndexExpr::Mul(Box::new(e), Box::new(self.index_unary()?));
            } else if self.eat('/') {
                e = IndexExpr::Div(Box::new(e), Box::new(self.index_unary()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn index_unary(&mut self) -> Result<IndexExpr> {
        if self.eat('-') {
            let inner = self.index_unary()?;
            return Ok(IndexExpr::Sub(Box::new(IndexExpr::constant(0)), Box::new(inner)));
        }
        self.index_atom()
    }

    fn index_atom(&mut self) -> Result<IndexExpr> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(IndexExpr::Const(BigRational::from_integer(v)))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.index_expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "n" {
                    return Ok(IndexExpr::N);
                }
                let unary: Option<fn(Box<IndexExpr>) -> IndexExpr> = match name.as_str() {
                    "ceil" => Some(IndexExpr::Ceil),
                    "floor" => Some(IndexExpr::Floor),
                    "ceil_sqrt" => Some(IndexExpr::CeilSqrt),
                    "ceil_log2" => Some(IndexExpr::CeilLog2),
                    _ => None,
                };
                let binary: Option<fn(Box<IndexExpr>, Box<IndexExpr>) -> IndexExpr> = match name.as_str() {
                    "max" => Some(IndexExpr::Max),
                    "min" => Some(IndexExpr::Min),
                    "mod" => Some(IndexExpr::Mod),
                    _ => None,
                };
                self.expect('(')?;
                let a = self.index_expr()?;
                let e = if let Some(f) = unary {
                    f(Box::new(a))
                } else if let Some(f) = binary {
                    self.expect(',')?;
                    let b = self.index_expr()?;
                    f(Box::new(a), Box::new(b))
                } else {
                    return Err(Error::Parse(format!("unknown index function '{name}' in '{}'", self.text)));
                };
                self.expect(')')?;
                Ok(e)
            }
            _ => Err(self.err("expected an index expression")),
        }
    }

    fn ideal_expr(&mut self) -> Result<ExprAst> {
        let mut terms = vec![self.ideal_term()?];
        while self.eat('+') {
            terms.push(self.ideal_term()?);
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { ExprAst::Sum(terms) })
    }

    fn ideal_term(&mut self) -> Result<ExprAst> {
        let mut factors = vec![self.ideal_power()?];
        while self.eat('*') {
            factors.push(self.ideal_power()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { ExprAst::Product(factors) })
    }

    fn ideal_power(&mut self) -> Result<ExprAst> {
        let base = self.ideal_atom()?;
        if self.eat('^') {
            let k = self.index_atom()?;
            return Ok(ExprAst::Power(Box::new(base), k));
        }
        Ok(base)
    }

    fn ideal_atom(&mut self) -> Result<ExprAst> {
        match self.peek().cloned() {
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.ideal_expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Int(v)) if v.is_one() => {
                self.pos += 1;
                Ok(ExprAst::Unit)
            }
            Some(Tok::Int(v)) if v.is_zero() => {
                self.pos += 1;
                Ok(ExprAst::Zero)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "unit" => return Ok(ExprAst::Unit),
                    "zero" => return Ok(ExprAst::Zero),
                    "closure" => {
                        self.expect('(')?;
                        let e = self.ideal_expr()?;
                        self.expect(')')?;
                        return Ok(ExprAst::Closure(Box::new(e)));
                    }
                    "cap" => {
                        self.expect('(')?;
                        let mut parts = vec![self.ideal_expr()?];
                        while self.eat(',') {
                            parts.push(self.ideal_expr()?);
                        }
                        self.expect(')')?;
                        return Ok(ExprAst::Intersect(parts));
                    }
                    "mono" => {
                        self.expect('(')?;
                        let mut exps = Vec::new();
                        loop {
                            match self.peek().cloned() {
                                Some(Tok::Int(v)) => {
                                    self.pos += 1;
                                    exps.push(v.to_u64().ok_or_else(|| self.err("exponent too large"))?);
                                }
                                _ => return Err(self.err("expected an exponent")),
                            }
                            if !self.eat(',') {
                                break;
                            }
                        }
                        self.expect(')')?;
                        return Ok(ExprAst::Mono(exps));
                    }
                    _ => {}
                }
                if self.eat('[') {
                    let k = self.index_expr()?;
                    self.expect(']')?;
                    if name == "self" {
                        return Ok(ExprAst::SelfAt(k));
                    }
                    return Ok(ExprAst::Member(name, k));
                }
                Ok(ExprAst::Name(name))
            }
            _ => Err(self.err("expected an ideal expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_functions() {
        let e = IndexExpr::parse("ceil(n/2) - 1").unwrap();
        assert_eq!(e.eval(5).unwrap(), 2);
        assert!(e.is_nondecreasing());
        assert_eq!(IndexExpr::parse("ceil_sqrt(n)").unwrap().eval(10).unwrap(), 4);
        assert_eq!(IndexExpr::parse("ceil_sqrt(n)").unwrap().eval(9).unwrap(), 3);
        let l = IndexExpr::parse("ceil_log2(n+1)").unwrap();
        assert_eq!(l.eval(1).unwrap(), 1);
        assert_eq!(l.eval(7).unwrap(), 3);
        assert_eq!(l.eval(8).unwrap(), 4);
        assert_eq!(l.eval(0).unwrap(), 0);
        assert_eq!(IndexExpr::parse("mod(n, 3)").unwrap().eval(-1).unwrap(), 2);
        assert!(!IndexExpr::parse("mod(n, 3)").unwrap().is_nondecreasing());
        assert!(!IndexExpr::parse("5 - n").unwrap().is_nondecreasing());
        assert!(IndexExpr::parse("n/2").unwrap().eval(3).is_err());
        assert!(IndexExpr::parse("ceil(3/2*n)").unwrap().is_nondecreasing());
    }

    #[test]
    fn ideal_syntax() {
        let e = ExprAst::parse("b[n] + b[n-2]*a2").unwrap();
        let (plain, indexed) = e.names();
        assert!(plain.contains("a2") && indexed.contains("b"));
        let e = ExprAst::parse("mono(2,0) + mono(0,2)*m^(ceil(n/2)-1)").unwrap();
        assert!(matches!(e, ExprAst::Sum(_)));
        assert!(ExprAst::parse("I^").is_err());
        assert!(ExprAst::parse("I $ J").is_err());
        assert_eq!(ExprAst::parse("self[n-1]").unwrap(), ExprAst::SelfAt(IndexExpr::parse("n-1").unwrap()));
    }
}
