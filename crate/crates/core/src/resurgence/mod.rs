//! Containment invariants of a pair of families: `beta`, `lambda` and their
//! valuation versions, window resurgence, `rho^n`, and the asymptotic
//! resurgence through Rees valuations or through `beta_n / n`.

mod asymptotic;
mod checks;
mod sequences;
mod window;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::ser::{Serialize, Serializer};

use crate::monomial::Monomial;
use crate::valuations::{MonomialValuation, WaldschmidtResult};

pub use asymptotic::{rho_exact_certified, rho_hat_beta_limit, rho_hat_rees, ExactOptions};
pub use checks::{linearly_finer_check, veronese_scaling_check, LinearlyFinerReport, VeroneseScalingReport};
pub use sequences::{
    beta, beta_table, beta_v, dual_sequences, lambda, lambda_table, lambda_v, DualSequences, DualValue,
};
pub use window::{rho_lim_estimate, rho_n, rho_window};

/// Search parameters shared by the window computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SearchOptions {
    /// Largest `s` (and `r`) scanned by window suprema.
    pub window: u64,
    /// Largest index tried by `beta` and `lambda`.
    pub cutoff: u64,
    /// Largest Veronese degree tried.
    pub k_max: u64,
    /// Horizon for window validation of hypotheses.
    pub horizon: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { window: 20, cutoff: 500, k_max: crate::valuations::DEFAULT_K_MAX, horizon: 10 }
    }
}

/// `-inf < q < +inf`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedRational {
    NegInfinity,
    Finite(BigRational),
    PosInfinity,
}

impl ExtendedRational {
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ExtendedRational::Finite(q) => Some(q),
            _ => None,
        }
    }
}

impl From<BigRational> for ExtendedRational {
    fn from(q: BigRational) -> Self {
        ExtendedRational::Finite(q)
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedRational::NegInfinity => f.write_str("-inf"),
            ExtendedRational::PosInfinity => f.write_str("inf"),
            ExtendedRational::Finite(q) => f.write_str(&crate::report::rational_text(q)),
        }
    }
}

impl Serialize for ExtendedRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtendedRational::NegInfinity => s.serialize_str("-inf"),
            ExtendedRational::PosInfinity => s.serialize_str("inf"),
            ExtendedRational::Finite(q) => crate::report::rational(q, s),
        }
    }
}

/// Result of an `inf` or `sup` over indices searched up to a cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceValue {
    Finite(u64),
    /// Not decided within the cutoff actually used.
    ExceedsBound(u64),
    /// The defining set is provably empty.
    EmptySet,
}

impl SequenceValue {
    pub fn finite(self) -> Option<u64> {
        match self {
            SequenceValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Short tag: `finite`, `>D` or `empty`.
    pub fn tag(self) -> String {
        match self {
            SequenceValue::Finite(_) => "finite".into(),
            SequenceValue::ExceedsBound(d) => format!(">{d}"),
            SequenceValue::EmptySet => "empty".into(),
        }
    }
}

impl fmt::Display for SequenceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceValue::Finite(v) => write!(f, "{v}"),
            other => f.write_str(&other.tag()),
        }
    }
}

impl Serialize for SequenceValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            SequenceValue::Finite(v) => s.serialize_u64(*v),
            other => s.serialize_str(&other.tag()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    RhoWindow,
    RhoExact,
    RhoHatRees,
    RhoHatBeta,
    RhoN,
    RhoLim,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisStatus {
    Structural,
    UserAsserted,
    WindowChecked,
    /// Neither known nor refuted.
    Unverified,
    Failed,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub status: HypothesisStatus,
    pub detail: String,
}

impl Hypothesis {
    pub(crate) fn new(name: &str, status: HypothesisStatus, detail: impl Into<String>) -> Hypothesis {
        Hypothesis { name: name.to_string(), status, detail: detail.into() }
    }
}

/// `monomial` lies in `a_s` and not in `b_r`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Witness {
    pub s: u64,
    pub r: u64,
    pub monomial: Monomial,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SeriesPoint {
    pub index: u64,
    pub value: ExtendedRational,
}

/// Per Rees valuation data behind a Rees-formula value.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ValuationRow {
    pub valuation: MonomialValuation,
    /// `v(b_k)`.
    pub value: u64,
    pub waldschmidt: WaldschmidtResult,
    /// `(v(b_k)/k) / v̂(a)`.
    pub ratio: ExtendedRational,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ResurgenceReport {
    pub quantity: Quantity,
    pub value: ExtendedRational,
    pub certified: bool,
    /// `exact`, `certified-given-assertions`, `window`, `estimate` or
    /// `conditional`.
    pub certification: String,
    /// What the value is claimed to equal, e.g. `rho_hat(a, closure(b))`.
    pub labels: Vec<String>,
    pub witnesses: Vec<Witness>,
    pub hypotheses: Vec<Hypothesis>,
    pub search: BTreeMap<String, u64>,
    pub valuations: Vec<ValuationRow>,
    /// Maximizing valuation, lexicographically least on ties.
    pub maximizer: Option<MonomialValuation>,
    pub series: BTreeMap<String, Vec<SeriesPoint>>,
    pub notes: Vec<String>,
}

impl ResurgenceReport {
    pub(crate) fn new(quantity: Quantity, value: ExtendedRational) -> ResurgenceReport {
        ResurgenceReport {
            quantity,
            value,
            certified: false,
            certification: "window".into(),
            labels: Vec::new(),
            witnesses: Vec::new(),
            hypotheses: Vec::new(),
            search: BTreeMap::new(),
            valuations: Vec::new(),
            maximizer: None,
            series: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub(crate) fn param(mut self, name: &str, v: u64) -> Self {
        self.search.insert(name.to_string(), v);
        self
    }

    /// Sets `certified` from the hypotheses: every one structural or
    /// asserted, and at least the given `base` claim holding.
    pub(crate) fn settle(&mut self, base: bool) {
        use HypothesisStatus::*;
        let all_ok = self.hypotheses.iter().all(|h| matches!(h.status, Structural | UserAsserted));
        let asserted = self.hypotheses.iter().any(|h| h.status == UserAsserted);
        let failed = self.hypotheses.iter().any(|h| h.status == Failed);
        self.certified = base && all_ok;
        self.certification = if self.certified {
            if asserted { "certified-given-assertions" } else { "exact" }
        } else if failed {
            "conditional"
        } else {
            "estimate"
        }
        .into();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::ratio;

    #[test]
    fn extended_order_and_encoding() {
        let a = ExtendedRational::NegInfinity;
        let b = ExtendedRational::Finite(ratio(-5, 1));
        let c = ExtendedRational::Finite(ratio(3, 2));
        let d = ExtendedRational::PosInfinity;
        assert!(a < b && b < c && c < d);
        assert_eq!(serde_json::to_string(&a).unwrap(), "\"-inf\"");
        assert_eq!(serde_json::to_string(&c).unwrap(), "{\"num\":\"3\",\"den\":\"2\"}");
        assert_eq!(SequenceValue::ExceedsBound(500).tag(), ">500");
    }
}
