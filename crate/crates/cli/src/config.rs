//! Job description: ideals, families and tasks, in TOML or JSON.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use resurgence::families::{Assertion, ExprAst};
use serde::{Deserialize, Serialize};

/// An exact number written either as an integer or as `"p/q"` text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberText {
    Int(i64),
    Text(String),
}

impl NumberText {
    pub fn to_rational(&self) -> Option<BigRational> {
        match self {
            NumberText::Int(v) => Some(BigRational::from_integer((*v).into())),
            NumberText::Text(t) => t.trim().parse().ok(),
        }
    }
}

impl fmt::Display for NumberText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumberText::Int(v) => write!(f, "{v}"),
            NumberText::Text(t) => f.write_str(t),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Defaults {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kmax: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<NumberText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub patterns: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub prefix: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assert: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub op: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub property: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check_to: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_hat: Option<NumberText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kmax: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
    /// `role:assertion`, role one of `a`, `b`, `family`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assert: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub vars: u64,
    #[serde(default)]
    pub defaults: Defaults,
    #[serde(default)]
    pub ideals: BTreeMap<String, Vec<Vec<u64>>>,
    #[serde(default)]
    pub families: BTreeMap<String, FamilySpec>,
    #[serde(default)]
    pub tasks: Vec<TaskSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigError {
    pub location: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

pub const FAMILY_KINDS: &[&str] = &[
    "powers",
    "symbolic",
    "closure_powers",
    "ceiling",
    "constant",
    "periodic",
    "table",
    "formula",
    "closure",
    "veronese",
];

pub const OPS: &[&str] = &[
    "beta",
    "lambda",
    "beta_v",
    "lambda_v",
    "rho_window",
    "rho_n",
    "rho_lim",
    "rho_hat_rees",
    "rho_hat_beta",
    "rho_exact",
    "waldschmidt",
    "validate",
    "integral_closure",
    "rees_valuations",
    "veronese_scaling",
    "linearly_finer",
];

pub const PROPERTIES: &[&str] = &["graded", "filtration", "standard-veronese", "b-equivalent"];

/// Reads TOML, or JSON when the text starts with `{`.
pub fn parse_config(text: &str) -> Result<JobConfig, Vec<ConfigError>> {
    let parsed: Result<JobConfig, String> = if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| e.to_string())
    } else {
        toml::from_str(text).map_err(|e| e.to_string())
    };
    let cfg = parsed.map_err(|m| vec![ConfigError { location: "config".into(), message: m.trim().to_string() }])?;
    let errors = cfg.validate();
    if errors.is_empty() {
        Ok(cfg)
    } else {
        Err(errors)
    }
}

/// Splits `b-equivalent=NAME:K`.
pub fn bequiv_assertion(text: &str) -> Option<(&str, &str)> {
    text.trim().strip_prefix("b-equivalent=")?.split_once(':')
}

impl JobConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs always serialize")
    }

    /// Every problem found, not just the first.
    pub fn validate(&self) -> Vec<ConfigError> {
        let mut errs = Vec::new();
        let mut err = |loc: String, msg: String| errs.push(ConfigError { location: loc, message: msg });
        let nv = self.vars as usize;
        if self.vars == 0 {
            err("vars".into(), "must be positive".into());
        }
        for (name, gens) in &self.ideals {
            if self.families.contains_key(name) {
                err(format!("ideals.{name}"), "name also used by a family".into());
            }
            for (i, g) in gens.iter().enumerate() {
                if g.len() != nv {
                    err(
                        format!("ideals.{name}[{i}]"),
                        format!("dimension mismatch: exponent vector has length {}, vars = {nv}", g.len()),
                    );
                }
            }
        }
        for (name, f) in &self.families {
            let loc = format!("families.{name}");
            self.check_family(f, &loc, &mut err);
        }
        if let Some(cycle) = self.family_cycle() {
            err("families".into(), format!("cycle among family definitions: {}", cycle.join(" -> ")));
        }
        for (i, t) in self.tasks.iter().enumerate() {
            self.check_task(t, &format!("tasks[{i}]"), &mut err);
        }
        if let Some(f) = &self.output.format {
            if f != "json" && f != "csv" {
                err("output.format".into(), format!("unknown format '{f}', expected json or csv"));
            }
        }
        errs
    }

    fn ideal_ref(&self, name: &Option<String>, loc: &str, field: &str, err: &mut dyn FnMut(String, String)) {
        match name {
            None => err(loc.into(), format!("missing '{field}'")),
            Some(n) if !self.ideals.contains_key(n) => err(loc.into(), format!("unresolved ideal name '{n}'")),
            _ => {}
        }
    }

    fn family_ref(&self, name: &Option<String>, loc: &str, field: &str, err: &mut dyn FnMut(String, String)) {
        match name {
            None => err(loc.into(), format!("missing '{field}'")),
            Some(n) if !self.families.contains_key(n) => err(loc.into(), format!("unresolved family name '{n}'")),
            _ => {}
        }
    }

    fn expr_refs(&self, text: &str, loc: &str, err: &mut dyn FnMut(String, String)) {
        match ExprAst::parse(text) {
            Err(e) => err(loc.into(), format!("malformed expression '{text}': {e}")),
            Ok(ast) => {
                let (plain, indexed) = ast.names();
                for n in plain {
                    if !self.ideals.contains_key(&n) {
                        let hint = if self.families.contains_key(&n) { " (families need an index)" } else { "" };
                        err(loc.into(), format!("unresolved ideal name '{n}'{hint}"));
                    }
                }
                for n in indexed {
                    if !self.families.contains_key(&n) {
                        err(loc.into(), format!("unresolved family name '{n}'"));
                    }
                }
                self.mono_dims(&ast, loc, err);
            }
        }
    }

    fn mono_dims(&self, ast: &ExprAst, loc: &str, err: &mut dyn FnMut(String, String)) {
        match ast {
            ExprAst::Mono(e) if e.len() != self.vars as usize => err(
                loc.into(),
                format!("dimension mismatch: mono() has {} exponents, vars = {}", e.len(), self.vars),
            ),
            ExprAst::Sum(v) | ExprAst::Product(v) | ExprAst::Intersect(v) => {
                v.iter().for_each(|e| self.mono_dims(e, loc, err))
            }
            ExprAst::Power(e, _) | ExprAst::Closure(e) => self.mono_dims(e, loc, err),
            _ => {}
        }
    }

    fn assertion(&self, text: &str, loc: &str, err: &mut dyn FnMut(String, String)) {
        if let Some((ideal, k)) = bequiv_assertion(text) {
            if !self.ideals.contains_key(ideal) {
                err(loc.into(), format!("unresolved ideal name '{ideal}' in assertion"));
            }
            if k.trim().parse::<u64>().is_err() {
                err(loc.into(), format!("malformed number '{k}' in assertion"));
            }
        } else if let Err(e) = Assertion::parse(text) {
            err(loc.into(), e.to_string());
        }
    }

    fn check_family(&self, f: &FamilySpec, loc: &str, err: &mut dyn FnMut(String, String)) {
        for a in &f.assert {
            self.assertion(a, loc, err);
        }
        match f.kind.as_str() {
            "powers" | "symbolic" | "closure_powers" | "constant" => self.ideal_ref(&f.ideal, loc, "ideal", err),
            "ceiling" => {
                self.ideal_ref(&f.ideal, loc, "ideal", err);
                match &f.alpha {
                    None => err(loc.into(), "missing 'alpha'".into()),
                    Some(a) => match a.to_rational() {
                        None => err(loc.into(), format!("malformed number '{a}' for alpha")),
                        Some(q) if q < BigRational::from_integer(0.into()) => {
                            err(loc.into(), format!("alpha must be nonnegative, got {a}"))
                        }
                        _ => {}
                    },
                }
            }
            "periodic" => {
                if f.patterns.is_empty() {
                    err(loc.into(), "periodic family needs a nonempty 'patterns' list".into());
                }
                f.patterns.iter().for_each(|p| self.expr_refs(p, loc, err));
            }
            "table" => {
                f.prefix.iter().for_each(|p| self.expr_refs(p, loc, err));
                if let Some(t) = &f.tail {
                    self.expr_refs(t, loc, err);
                }
                if f.prefix.is_empty() && f.tail.is_none() {
                    err(loc.into(), "table family needs 'prefix' or 'tail'".into());
                }
            }
            "formula" => match &f.expr {
                None => err(loc.into(), "missing 'expr'".into()),
                Some(e) => self.expr_refs(e, loc, err),
            },
            "closure" => self.family_ref(&f.family, loc, "family", err),
            "veronese" => {
                self.family_ref(&f.family, loc, "family", err);
                if f.k.unwrap_or(0) == 0 {
                    err(loc.into(), "veronese family needs a positive 'k'".into());
                }
            }
            other => err(loc.into(), format!("unknown family kind '{other}'; expected one of {}", FAMILY_KINDS.join(", "))),
        }
    }

    /// Families a family definition refers to.
    pub fn family_deps(&self, f: &FamilySpec) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        if let Some(g) = &f.family {
            out.insert(g.clone());
        }
        let exprs = f.patterns.iter().chain(&f.prefix).chain(&f.tail).chain(&f.expr);
        for e in exprs {
            if let Ok(ast) = ExprAst::parse(e) {
                out.extend(ast.names().1);
            }
        }
        out.retain(|n| self.families.contains_key(n));
        out
    }

    fn family_cycle(&self) -> Option<Vec<String>> {
        // 0 unseen, 1 on stack, 2 done
        let mut state: BTreeMap<&str, u8> = BTreeMap::new();
        fn visit<'a>(
            cfg: &'a JobConfig,
            n: &'a str,
            state: &mut BTreeMap<&'a str, u8>,
            stack: &mut Vec<&'a str>,
        ) -> Option<Vec<String>> {
            match state.get(n) {
                Some(2) => return None,
                Some(1) => {
                    let start = stack.iter().position(|s| *s == n).unwrap_or(0);
                    let mut c: Vec<String> = stack[start..].iter().map(|s| s.to_string()).collect();
                    c.push(n.to_string());
                    return Some(c);
                }
                _ => {}
            }
            state.insert(n, 1);
            stack.push(n);
            let spec = cfg.families.get(n)?;
            for d in cfg.family_deps(spec) {
                let (d, _) = cfg.families.get_key_value(d.as_str())?;
                if let Some(c) = visit(cfg, d, state, stack) {
                    return Some(c);
                }
            }
            stack.pop();
            state.insert(n, 2);
            None
        }
        for n in self.families.keys() {
            let mut stack = Vec::new();
            if let Some(c) = visit(self, n, &mut state, &mut stack) {
                return Some(c);
            }
        }
        None
    }

    fn check_task(&self, t: &TaskSpec, loc: &str, err: &mut dyn FnMut(String, String)) {
        let op = t.op.as_str();
        let pair = |err: &mut dyn FnMut(String, String)| {
            self.family_ref(&t.a, loc, "a", err);
            self.family_ref(&t.b, loc, "b", err);
        };
        match op {
            "beta" | "lambda" | "rho_window" | "rho_hat_rees" | "veronese_scaling" | "linearly_finer" => pair(err),
            "rho_n" => {
                pair(err);
                if t.n.unwrap_or(0) == 0 {
                    err(loc.into(), "rho_n needs a positive 'n'".into());
                }
            }
            "rho_lim" | "rho_hat_beta" => {
                pair(err);
                if t.grid.as_ref().map_or(true, |g| g.is_empty() || g.contains(&0)) {
                    err(loc.into(), format!("{op} needs a 'grid' of positive indices"));
                }
            }
            "rho_exact" => {
                pair(err);
                if let Some(q) = &t.rho_hat {
                    if q.to_rational().is_none() {
                        err(loc.into(), format!("malformed number '{q}' for rho_hat"));
                    }
                }
            }
            "beta_v" | "lambda_v" => {
                pair(err);
                self.weights(t, loc, true, err);
            }
            "waldschmidt" => {
                self.family_ref(&t.family, loc, "family", err);
                self.weights(t, loc, false, err);
            }
            "validate" => {
                self.family_ref(&t.family, loc, "family", err);
                match t.property.as_deref() {
                    None => err(loc.into(), "missing 'property'".into()),
                    Some("b-equivalent") => self.ideal_ref(&t.ideal, loc, "ideal", err),
                    Some("standard-veronese") if t.k.unwrap_or(0) == 0 => {
                        err(loc.into(), "standard-veronese needs a positive 'k'".into())
                    }
                    Some(p) if !PROPERTIES.contains(&p) => {
                        err(loc.into(), format!("unknown property '{p}'; expected one of {}", PROPERTIES.join(", ")))
                    }
                    _ => {}
                }
            }
            "integral_closure" | "rees_valuations" => self.ideal_ref(&t.ideal, loc, "ideal", err),
            other => err(loc.into(), format!("unknown op '{other}'; expected one of {}", OPS.join(", "))),
        }
        if op == "veronese_scaling" && t.k.unwrap_or(0) == 0 {
            err(loc.into(), "veronese_scaling needs a positive 'k'".into());
        }
        for a in &t.assert {
            match a.split_once(':') {
                Some((role @ ("a" | "b" | "family"), rest)) => {
                    let target = match role {
                        "a" => &t.a,
                        "b" => &t.b,
                        _ => &t.family,
                    };
                    if target.is_none() {
                        err(loc.into(), format!("assertion '{a}' names role '{role}', which this task lacks"));
                    }
                    self.assertion(rest, loc, err);
                }
                _ => err(loc.into(), format!("assertion '{a}' must look like a:filtration, b:..., or family:...")),
            }
        }
    }

    fn weights(&self, t: &TaskSpec, loc: &str, required: bool, err: &mut dyn FnMut(String, String)) {
        match &t.weights {
            None if required => err(loc.into(), "missing 'weights'".into()),
            Some(w) if w.len() != self.vars as usize => err(
                loc.into(),
                format!("dimension mismatch: weights have length {}, vars = {}", w.len(), self.vars),
            ),
            Some(w) if w.iter().all(|&x| x == 0) => err(loc.into(), "weights must not all be zero".into()),
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
vars = 2
[ideals]
m = [[1, 0], [0, 1]]
[families.p]
kind = "powers"
ideal = "m"
[[tasks]]
op = "beta"
a = "p"
b = "p"
"#;

    #[test]
    fn minimal_parses() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.tasks.len(), 1);
        assert_eq!(parse_config(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn unresolved_names_are_all_reported() {
        let text = MINIMAL.replace("b = \"p\"", "b = \"J\"") + "[[tasks]]\nop = \"integral_closure\"\nideal = \"J\"\n";
        let errs = parse_config(&text).unwrap_err();
        assert_eq!(errs.len(), 2);
        assert!(errs[0].location == "tasks[0]" && errs[0].message.contains("'J'"));
        assert!(errs[1].location == "tasks[1]" && errs[1].message.contains("'J'"));
    }

    #[test]
    fn rational_alpha_and_cycles() {
        let text = MINIMAL.to_string()
            + "[families.c]\nkind = \"ceiling\"\nideal = \"m\"\nalpha = \"3/2\"\n"
            + "[families.u]\nkind = \"formula\"\nexpr = \"v[n-1]\"\n[families.v]\nkind = \"closure\"\nfamily = \"u\"\n";
        let errs = parse_config(&text).unwrap_err();
        assert_eq!(errs.len(), 1, "{errs:?}");
        assert!(errs[0].message.contains("cycle"));
        let ok = MINIMAL.to_string() + "[families.c]\nkind = \"ceiling\"\nideal = \"m\"\nalpha = \"3/2\"\n";
        let c = parse_config(&ok).unwrap();
        assert_eq!(c.families["c"].alpha.as_ref().unwrap().to_rational().unwrap().to_string(), "3/2");
    }

    #[test]
    fn bad_kind_dimension_and_number() {
        let text = r#"
vars = 2
[ideals]
m = [[1, 0, 0]]
[families.p]
kind = "wobbly"
[families.c]
kind = "ceiling"
ideal = "m"
alpha = "three"
"#;
        let errs = parse_config(text).unwrap_err();
        let msgs: Vec<String> = errs.iter().map(|e| e.to_string()).collect();
        assert!(msgs.iter().any(|m| m.contains("dimension mismatch")));
        assert!(msgs.iter().any(|m| m.contains("unknown family kind 'wobbly'")));
        assert!(msgs.iter().any(|m| m.contains("malformed number 'three'")));
    }

    #[test]
    fn json_is_accepted() {
        let c = parse_config(MINIMAL).unwrap();
        let j = serde_json::to_string(&c).unwrap();
        assert_eq!(parse_config(&j).unwrap(), c);
    }
}
