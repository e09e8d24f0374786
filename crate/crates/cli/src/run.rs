//! Builds the families of a job and executes its tasks in order.

use std::collections::BTreeMap;
use std::time::Instant;

use resurgence::closures::{integral_closure, rees_valuations};
use resurgence::families::{
    is_b_equivalent, is_standard_veronese, validate_filtration, validate_graded, Assertion, Binding, GradedFamily,
    IdealExpr,
};
use resurgence::monomial::MonomialIdeal;
use resurgence::resurgence as rs;
use resurgence::resurgence::{ExtendedRational, SearchOptions, SequenceValue};
use resurgence::valuations::{skew_waldschmidt_with, MonomialValuation};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{bequiv_assertion, ConfigError, JobConfig, TaskSpec};

/// Command-line overrides; each beats the config, which beats the default.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub window: Option<u64>,
    pub cutoff: Option<u64>,
    pub kmax: Option<u64>,
    pub horizon: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub index: u64,
    pub value: String,
    pub tag: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub name: String,
    pub rows: Vec<Row>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskRecord {
    pub index: usize,
    pub op: String,
    pub args: BTreeMap<String, String>,
    pub settings: SearchOptions,
    /// Every user assertion the task relied on, verbatim.
    pub assertions: Vec<String>,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<Table>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_digest: String,
    pub tasks: Vec<TaskRecord>,
    /// Wall clock per task in milliseconds, kept out of the report body.
    #[serde(skip)]
    pub timings: Vec<(usize, f64)>,
}

impl RunReport {
    pub fn failed(&self) -> bool {
        self.tasks.iter().any(|t| t.status == "error")
    }
}

pub struct Workspace {
    pub nvars: usize,
    pub ideals: BTreeMap<String, MonomialIdeal>,
    pub families: BTreeMap<String, GradedFamily>,
}

fn cfg_err(location: String, message: impl ToString) -> ConfigError {
    ConfigError { location, message: message.to_string() }
}

fn parse_assertion(ws: &Workspace, text: &str) -> Result<Assertion, String> {
    if let Some((name, k)) = bequiv_assertion(text) {
        let ideal = ws.ideals.get(name).ok_or_else(|| format!("unresolved ideal name '{name}'"))?;
        let k = k.trim().parse().map_err(|_| format!("malformed number '{k}'"))?;
        return Ok(Assertion::BEquivalent { ideal: ideal.clone(), k });
    }
    Assertion::parse(text).map_err(|e| e.to_string())
}

impl Workspace {
    /// Builds every ideal and family; the config must already validate.
    pub fn build(cfg: &JobConfig) -> Result<Workspace, Vec<ConfigError>> {
        let nvars = cfg.vars as usize;
        let mut errs = Vec::new();
        let mut ideals = BTreeMap::new();
        for (name, gens) in &cfg.ideals {
            match MonomialIdeal::from_exponents(nvars, gens) {
                Ok(i) => {
                    ideals.insert(name.clone(), i);
                }
                Err(e) => errs.push(cfg_err(format!("ideals.{name}"), e)),
            }
        }
        let mut ws = Workspace { nvars, ideals, families: BTreeMap::new() };
        for name in cfg.families.keys() {
            if let Err(e) = ws.family(cfg, name) {
                errs.push(e);
            }
        }
        if errs.is_empty() {
            Ok(ws)
        } else {
            Err(errs)
        }
    }

    fn family(&mut self, cfg: &JobConfig, name: &str) -> Result<GradedFamily, ConfigError> {
        if let Some(f) = self.families.get(name) {
            return Ok(f.clone());
        }
        let loc = format!("families.{name}");
        let spec = cfg.families.get(name).ok_or_else(|| cfg_err(loc.clone(), format!("unresolved family '{name}'")))?;
        for dep in cfg.family_deps(spec) {
            self.family(cfg, &dep)?;
        }
        let e = |m: resurgence::Error| cfg_err(loc.clone(), m);
        let ideal = || {
            spec.ideal
                .as_ref()
                .and_then(|n| self.ideals.get(n))
                .cloned()
                .ok_or_else(|| cfg_err(loc.clone(), "missing ideal"))
        };
        let inner = || {
            spec.family
                .as_ref()
                .and_then(|n| self.families.get(n))
                .cloned()
                .ok_or_else(|| cfg_err(loc.clone(), "missing family"))
        };
        let lookup = |n: &str| -> Option<Binding> {
            if let Some(i) = self.ideals.get(n) {
                return Some(Binding::Ideal(i.clone()));
            }
            self.families.get(n).map(|f| Binding::Family(f.clone()))
        };
        let expr = |t: &str| IdealExpr::parse(t, self.nvars, &lookup).map_err(e);
        let f = match spec.kind.as_str() {
            "powers" => GradedFamily::powers(ideal()?),
            "symbolic" => GradedFamily::symbolic(ideal()?),
            "closure_powers" => GradedFamily::closure_powers(ideal()?),
            "constant" => GradedFamily::constant(ideal()?),
            "ceiling" => {
                let alpha = spec.alpha.as_ref().and_then(|a| a.to_rational());
                let alpha = alpha.ok_or_else(|| cfg_err(loc.clone(), "malformed alpha"))?;
                GradedFamily::ceiling(ideal()?, alpha).map_err(e)?
            }
            "periodic" => {
                let pats = spec.patterns.iter().map(|p| expr(p)).collect::<Result<Vec<_>, _>>()?;
                GradedFamily::periodic(self.nvars, pats).map_err(e)?
            }
            "table" => {
                let prefix = spec.prefix.iter().map(|p| expr(p)).collect::<Result<Vec<_>, _>>()?;
                let tail = spec.tail.as_deref().map(expr).transpose()?;
                GradedFamily::table(self.nvars, prefix, tail)
            }
            "formula" => GradedFamily::formula(self.nvars, expr(spec.expr.as_deref().unwrap_or(""))?),
            "closure" => GradedFamily::closure_of(&inner()?),
            "veronese" => GradedFamily::veronese(&inner()?, spec.k.unwrap_or(0)).map_err(e)?,
            other => return Err(cfg_err(loc, format!("unknown family kind '{other}'"))),
        };
        let mut asserted = Vec::new();
        for a in &spec.assert {
            asserted.push(parse_assertion(self, a).map_err(|m| cfg_err(loc.clone(), m))?);
        }
        let f = f.named(name).asserting(&asserted);
        self.families.insert(name.to_string(), f.clone());
        Ok(f)
    }
}

fn sequence_row(index: u64, v: SequenceValue) -> Row {
    let value = v.finite().map(|x| x.to_string()).unwrap_or_default();
    Row { index, value, tag: v.tag() }
}

fn extended_row(index: u64, v: &ExtendedRational) -> Row {
    let tag = match v {
        ExtendedRational::Finite(_) => "finite",
        ExtendedRational::NegInfinity => "-inf",
        ExtendedRational::PosInfinity => "inf",
    };
    Row { index, value: v.to_string(), tag: tag.into() }
}

struct Ctx<'a> {
    ws: &'a Workspace,
    task: &'a TaskSpec,
    opts: SearchOptions,
    assertions: Vec<String>,
}

type Output = Result<(Value, Vec<Table>), String>;

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

impl Ctx<'_> {
    fn role(&mut self, role: &str) -> Result<GradedFamily, String> {
        let name = match role {
            "a" => &self.task.a,
            "b" => &self.task.b,
            _ => &self.task.family,
        };
        let name = name.as_ref().ok_or_else(|| format!("missing '{role}'"))?;
        let f = self.ws.families.get(name).ok_or_else(|| format!("unresolved family name '{name}'"))?;
        let mut extra = Vec::new();
        for text in &self.task.assert {
            if let Some(rest) = text.strip_prefix(&format!("{role}:")) {
                extra.push(parse_assertion(self.ws, rest)?);
                self.assertions.push(text.clone());
            }
        }
        Ok(f.asserting(&extra))
    }

    fn ideal(&self) -> Result<MonomialIdeal, String> {
        let name = self.task.ideal.as_ref().ok_or("missing 'ideal'")?;
        self.ws.ideals.get(name).cloned().ok_or_else(|| format!("unresolved ideal name '{name}'"))
    }

    fn weights(&self) -> Result<MonomialValuation, String> {
        match &self.task.weights {
            Some(w) => MonomialValuation::new(w.clone()).map_err(|e| e.to_string()),
            None => Ok(MonomialValuation::degree(self.ws.nvars)),
        }
    }

    fn run(&mut self) -> Output {
        let t = self.task;
        let o = self.opts;
        let e = |x: resurgence::Error| x.to_string();
        match t.op.as_str() {
            "beta" | "lambda" => {
                let (a, b) = (self.role("a")?, self.role("b")?);
                let top = t.s_max.or(t.n_max).unwrap_or(o.window);
                let rows = if t.op == "beta" {
                    rs::beta_table(&a, &b, top, o.cutoff).map_err(e)?
                } else {
                    rs::lambda_table(&a, &b, top, o.cutoff).map_err(e)?
                };
                let rows: Vec<Row> = rows.into_iter().map(|(i, v)| sequence_row(i, v)).collect();
                Ok((json!({ "count": rows.len() }), vec![Table { name: t.op.clone(), rows }]))
            }
            "beta_v" | "lambda_v" => {
                let (a, b) = (self.role("a")?, self.role("b")?);
                let v = self.weights()?;
                let top = t.s_max.or(t.n_max).unwrap_or(o.window);
                let mut rows = Vec::new();
                for i in 1..=top {
                    let x = if t.op == "beta_v" {
                        rs::beta_v(&v, &a, &b, i, o.cutoff)
                    } else {
                        rs::lambda_v(&v, &a, &b, i, o.cutoff)
                    };
                    rows.push(sequence_row(i, x.map_err(e)?));
                }
                let res = json!({ "weights": v.weights(), "count": rows.len() });
                Ok((res, vec![Table { name: t.op.clone(), rows }]))
            }
            "rho_window" => {
                let (a, b) = (self.role("a")?, self.role("b")?);
                let r = rs::rho_window(&a, &b, t.s_max.unwrap_or(o.window), t.r_max.unwrap_or(o.window)).map_err(e)?;
                Ok((to_value(&r), Vec::new()))
            }
            "rho_n" => {
                let (a, b) = (self.role("a")?, self.role("b")?);
                let n = t.n.unwrap_or(1);
                let r = rs::rho_n(&a, &b, n, t.s_max.unwrap_or(o.window.max(n)), o.cutoff).map_err(e)?;
                Ok((to_value(&r), Vec::new()))
            }
            "rho_lim" => {
                let (a, b) = (self.role("a")?, self.role("b")?);
                let grid = t.grid.clone().unwrap_or_default();
                let top = grid.iter().copied().max().unwrap_or(1);
                let r = rs::rho_lim_estimate(&a, &b, &grid, t.s_max.unwrap_or(top), &o).map_err(e)?;
                Ok(with_series(&r))
            }
            "rho_hat_rees" => {
                let (a, b) = (self.role("a")?, self.role("b")?);
                Ok((to_value(&rs::rho_hat_rees(&a, &b, &o).map_err(e)?), Vec::new()))
            }
            "rho_hat_beta" => {
                let (a, b) = (self.role("a")?, self.role("b")?);
                let grid = t.grid.clone().unwrap_or_default();
                Ok(with_series(&rs::rho_hat_beta_limit(&a, &b, &grid, &o).map_err(e)?))
            }
            "rho_exact" => {
                let (a, b) = (self.role("a")?, self.role("b")?);
                let mut ex = rs::ExactOptions::new(t.budget.unwrap_or(2 * o.window));
                ex.asserted_rho_hat = t.rho_hat.as_ref().and_then(|q| q.to_rational());
                if let Some(q) = &t.rho_hat {
                    self.assertions.push(format!("rho_hat={q}"));
                }
                Ok((to_value(&rs::rho_exact_certified(&a, &b, &o, &ex).map_err(e)?), Vec::new()))
            }
            "waldschmidt" => {
                let f = self.role("family")?;
                let v = self.weights()?;
                let r = skew_waldschmidt_with(&v, &f, o.window, o.k_max).map_err(e)?;
                Ok((json!({ "weights": v.weights(), "waldschmidt": to_value(&r) }), Vec::new()))
            }
            "validate" => {
                let f = self.role("family")?;
                let h = t.horizon.unwrap_or(o.horizon);
                let r = match t.property.as_deref() {
                    Some("graded") => validate_graded(&f, h),
                    Some("filtration") => validate_filtration(&f, h),
                    Some("standard-veronese") => is_standard_veronese(&f, t.k.unwrap_or(1), h),
                    Some("b-equivalent") => is_b_equivalent(&f, &self.ideal()?, t.k.unwrap_or(0), h),
                    other => return Err(format!("unknown property {other:?}")),
                }
                .map_err(e)?;
                Ok((to_value(&r), Vec::new()))
            }
            "integral_closure" => {
                let i = self.ideal()?;
                let n = t.n.unwrap_or(1);
                let c = integral_closure(&i, n).map_err(e)?;
                let c = MonomialIdeal::from_generators(i.nvars(), c.generators().map_err(e)?.to_vec()).map_err(e)?;
                Ok((json!({ "ideal": i.to_string(), "n": n, "closure": c.to_string() }), Vec::new()))
            }
            "rees_valuations" => {
                let i = self.ideal()?;
                let r = rees_valuations(&i).map_err(e)?;
                Ok((json!({ "ideal": i.to_string(), "valuations": to_value(&r.valuations) }), Vec::new()))
            }
            "veronese_scaling" => {
                let (a, b) = (self.role("a")?, self.role("b")?);
                let r = rs::veronese_scaling_check(&a, &b, t.k.unwrap_or(1), &o).map_err(e)?;
                Ok((to_value(&r), Vec::new()))
            }
            "linearly_finer" => {
                let (a, b) = (self.role("a")?, self.role("b")?);
                let r = rs::linearly_finer_check(&a, &b, &o, t.check_to.unwrap_or(o.window)).map_err(e)?;
                Ok((to_value(&r), Vec::new()))
            }
            other => Err(format!("unknown op '{other}'")),
        }
    }
}

fn with_series(r: &rs::ResurgenceReport) -> (Value, Vec<Table>) {
    let tables = r
        .series
        .iter()
        .map(|(name, pts)| Table { name: name.clone(), rows: pts.iter().map(|p| extended_row(p.index, &p.value)).collect() })
        .collect();
    (to_value(r), tables)
}

fn args_of(t: &TaskSpec) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            m.insert(k.to_string(), v);
        }
    };
    put("a", t.a.clone());
    put("b", t.b.clone());
    put("family", t.family.clone());
    put("ideal", t.ideal.clone());
    put("property", t.property.clone());
    put("weights", t.weights.as_ref().map(|w| format!("{w:?}")));
    put("grid", t.grid.as_ref().map(|w| format!("{w:?}")));
    for (k, v) in [("k", t.k), ("n", t.n), ("s_max", t.s_max), ("r_max", t.r_max), ("n_max", t.n_max)] {
        put(k, v.map(|x| x.to_string()));
    }
    put("budget", t.budget.map(|x| x.to_string()));
    put("check_to", t.check_to.map(|x| x.to_string()));
    m
}

pub fn settings(cfg: &JobConfig, t: &TaskSpec, ov: &Overrides) -> SearchOptions {
    let d = SearchOptions::default();
    let pick = |flag: Option<u64>, task: Option<u64>, conf: Option<u64>, def: u64| flag.or(task).or(conf).unwrap_or(def);
    SearchOptions {
        window: pick(ov.window, t.window, cfg.defaults.window, d.window),
        cutoff: pick(ov.cutoff, t.cutoff, cfg.defaults.cutoff, d.cutoff),
        k_max: pick(ov.kmax, t.kmax, cfg.defaults.kmax, d.k_max),
        horizon: pick(ov.horizon, t.horizon, cfg.defaults.horizon, d.horizon),
    }
}

pub fn digest(cfg: &JobConfig) -> String {
    use sha2::{Digest, Sha256};
    let canon = serde_json::to_string(cfg).expect("configs serialize");
    format!("{:x}", Sha256::digest(canon.as_bytes()))
}

/// Runs every task in order; a failing task is recorded and the rest still run.
pub fn run(cfg: &JobConfig, ov: &Overrides) -> Result<RunReport, Vec<ConfigError>> {
    let errs = cfg.validate();
    if !errs.is_empty() {
        return Err(errs);
    }
    let ws = Workspace::build(cfg)?;
    let mut tasks = Vec::new();
    let mut timings = Vec::new();
    for (index, t) in cfg.tasks.iter().enumerate() {
        let opts = settings(cfg, t, ov);
        let mut ctx = Ctx { ws: &ws, task: t, opts, assertions: Vec::new() };
        for role in ["a", "b", "family"] {
            let name = match role {
                "a" => &t.a,
                "b" => &t.b,
                _ => &t.family,
            };
            if let Some(spec) = name.as_ref().and_then(|n| cfg.families.get(n)) {
                ctx.assertions.extend(spec.assert.iter().map(|a| format!("{}:{a}", name.as_deref().unwrap_or(""))));
            }
        }
        let start = Instant::now();
        let out = ctx.run();
        timings.push((index, start.elapsed().as_secs_f64() * 1000.0));
        let (status, result, error, tables) = match out {
            Ok((v, tables)) => ("ok", Some(v), None, tables),
            Err(m) => ("error", None, Some(m), Vec::new()),
        };
        tasks.push(TaskRecord {
            index,
            op: t.op.clone(),
            args: args_of(t),
            settings: opts,
            assertions: ctx.assertions,
            status,
            result,
            error,
            tables,
        });
    }
    Ok(RunReport {
        tool: "resurgence",
        version: env!("CARGO_PKG_VERSION"),
        config_digest: digest(cfg),
        tasks,
        timings,
    })
}
