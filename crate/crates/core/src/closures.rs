//! Newton polyhedra, integral closures, Rees valuations and symbolic powers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::monomial::{is_subset, ClosureView, MonomialIdeal, SymbolicView, View};
use crate::polyhedra::{hull_with_recession, RationalPolyhedron};
use crate::valuations::MonomialValuation;

fn explicit_gens(i: &MonomialIdeal, op: &str) -> Result<Vec<Vec<u64>>> {
    let gens = i.generators()?;
    if gens.is_empty() {
        return Err(Error::Domain(format!("{op} of the zero ideal")));
    }
    Ok(gens.iter().map(|g| g.exponents().to_vec()).collect())
}

/// `conv(exponents) + R^n_{>=0}`.
pub fn newton_polyhedron(i: &MonomialIdeal) -> Result<RationalPolyhedron> {
    let n = i.nvars();
    let pts: Vec<Vec<BigRational>> = explicit_gens(i, "Newton polyhedron")?
        .into_iter()
        .map(|e| e.into_iter().map(|x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let rays: Vec<Vec<BigRational>> = (0..n)
        .map(|r| (0..n).map(|c| BigRational::from_integer(BigInt::from((r == c) as u8))).collect())
        .collect();
    hull_with_recession(&pts, &rays)
}

/// Non-coordinate facets of NP(I) as `(w, c)` with `<w, a> >= c`.
fn valuation_facets(p: &RationalPolyhedron) -> Result<Vec<(Vec<u64>, u64)>> {
    let mut out = Vec::new();
    for h in p.halfspaces() {
        if h.offset().is_zero() {
            continue;
        }
        let w: Option<Vec<u64>> = h.normal().iter().map(|v| v.to_u64()).collect();
        let c = if h.offset().is_integer() { h.offset().to_integer().to_u64() } else { None };
        match (w, c) {
            (Some(w), Some(c)) => out.push((w, c)),
            _ => return Err(Error::Capability(format!("facet {h} does not fit 64-bit weights"))),
        }
    }
    Ok(out)
}

/// NP(I) computed once; hands out closure views of every power of I.
#[derive(Clone, Debug)]
pub struct ClosureBase {
    base: MonomialIdeal,
    facets: Vec<(Vec<u64>, u64)>,
}

impl ClosureBase {
    pub fn new(i: &MonomialIdeal) -> Result<Self> {
        if let View::Closure(v) = i.view() {
            if v.scale == 1 {
                return Ok(ClosureBase { base: v.base.clone(), facets: v.facets.clone() });
            }
        }
        let explicit = MonomialIdeal::from_generators(i.nvars(), i.generators()?.to_vec())?;
        let facets = valuation_facets(&newton_polyhedron(&explicit)?)?;
        Ok(ClosureBase { base: explicit, facets })
    }

    pub fn base(&self) -> &MonomialIdeal {
        &self.base
    }

    /// The closure of `I^n`.
    pub fn power(&self, n: u64) -> MonomialIdeal {
        if n == 0 || self.base.is_unit() {
            return MonomialIdeal::unit(self.base.nvars());
        }
        let view = ClosureView { facets: self.facets.clone(), scale: n, base: self.base.clone() };
        MonomialIdeal::from_view(self.base.nvars(), View::Closure(view))
    }
}

/// Membership view of the integral closure of `I^n`.
pub fn integral_closure(i: &MonomialIdeal, n: u64) -> Result<MonomialIdeal> {
    if n == 0 {
        return Err(Error::Domain("integral closure needs a positive exponent".into()));
    }
    if i.is_zero() {
        return Err(Error::Domain("integral closure of the zero ideal".into()));
    }
    if let View::Closure(v) = i.view() {
        let scale = v.scale.checked_mul(n).ok_or(Error::Overflow)?;
        let view = ClosureView { facets: v.facets.clone(), scale, base: v.base.clone() };
        return Ok(MonomialIdeal::from_view(i.nvars(), View::Closure(view)));
    }
    Ok(ClosureBase::new(i)?.power(n))
}

#[derive(Clone, Debug, Serialize)]
pub struct ReesValuation {
    pub valuation: MonomialValuation,
    pub value: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReesValuationSet {
    #[serde(skip)]
    pub ideal: MonomialIdeal,
    pub valuations: Vec<ReesValuation>,
}

/// Primitive normals of the non-coordinate facets of NP(I), sorted.
pub fn rees_valuations(i: &MonomialIdeal) -> Result<ReesValuationSet> {
    if i.is_unit() {
        return Err(Error::Domain("the unit ideal has no Rees valuations".into()));
    }
    let base = ClosureBase::new(i)?;
    let mut valuations: Vec<ReesValuation> = base
        .facets
        .iter()
        .map(|(w, c)| Ok(ReesValuation { valuation: MonomialValuation::new(w.clone())?, value: *c }))
        .collect::<Result<_>>()?;
    valuations.sort_by(|a, b| a.valuation.cmp(&b.valuation));
    Ok(ReesValuationSet { ideal: base.base, valuations })
}

/// Minimal vertex covers of the hypergraph of generator supports, i.e. the
/// minimal primes of a squarefree monomial ideal.
pub fn minimal_vertex_covers(i: &MonomialIdeal) -> Result<Vec<Vec<usize>>> {
    let edges: Vec<Vec<usize>> = i.generators()?.iter().map(|g| g.support()).collect();
    if edges.iter().any(Vec::is_empty) {
        return Ok(Vec::new());
    }
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn go(edges: &[Vec<usize>], chosen: &mut Vec<usize>, found: &mut Vec<Vec<usize>>) {
        if found.iter().any(|f| f.iter().all(|v| chosen.contains(v))) {
            return;
        }
        match edges.iter().find(|e| !e.iter().any(|v| chosen.contains(v))) {
            None => {
                let mut c = chosen.clone();
                c.sort_unstable();
                found.retain(|f| !c.iter().all(|v| f.contains(v)));
                found.push(c);
            }
            Some(e) => {
                for &v in e {
                    chosen.push(v);
                    go(edges, chosen, found);
                    chosen.pop();
                }
            }
        }
    }
    go(&edges, &mut chosen, &mut found);
    found.sort();
    Ok(found)
}

/// Membership view of `I^(n)` for squarefree `I`.
pub fn symbolic_power(i: &MonomialIdeal, n: u64) -> Result<MonomialIdeal> {
    symbolic_power_from_covers(i, &symbolic_covers(i)?, n)
}

pub(crate) fn symbolic_covers(i: &MonomialIdeal) -> Result<Vec<Vec<usize>>> {
    if i.is_zero() {
        return Err(Error::Domain("symbolic power of the zero ideal".into()));
    }
    if !i.is_squarefree()? {
        return Err(Error::Capability(format!("symbolic powers need a squarefree ideal, got {i}")));
    }
    minimal_vertex_covers(i)
}

pub(crate) fn symbolic_power_from_covers(
    i: &MonomialIdeal,
    covers: &[Vec<usize>],
    n: u64,
) -> Result<MonomialIdeal> {
    if n == 0 {
        return Err(Error::Domain("symbolic power needs a positive exponent".into()));
    }
    if covers.is_empty() {
        return Ok(MonomialIdeal::unit(i.nvars()));
    }
    let view = SymbolicView { covers: covers.to_vec(), n };
    Ok(MonomialIdeal::from_view(i.nvars(), View::Symbolic(view)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BEquivKind {
    Powers,
    ClosurePowers,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BEquivConstant {
    /// Proven bound (0 for powers, variables minus one for closures).
    pub certified: u64,
    /// Smallest k passing the finite check, not a proof beyond `horizon`.
    pub tightened: u64,
    pub horizon: u64,
    pub tightened_by_finite_check: bool,
}

/// A `k` with `b_{i+k} ⊆ I^i` for the family of the given kind.
pub fn bequiv_constant(kind: BEquivKind, i: &MonomialIdeal, horizon: u64) -> Result<BEquivConstant> {
    if i.is_zero() {
        return Err(Error::Domain("b-equivalence constant of the zero ideal".into()));
    }
    match kind {
        BEquivKind::Powers => {
            Ok(BEquivConstant { certified: 0, tightened: 0, horizon, tightened_by_finite_check: false })
        }
        BEquivKind::ClosurePowers => {
            let certified = (i.nvars() as u64).saturating_sub(1);
            let base = ClosureBase::new(i)?;
            let mut k = certified;
            'down: while k > 0 {
                let cand = k - 1;
                for e in 1..=horizon {
                    if !is_subset(&base.power(e + cand), &i.power_cached(e)?)? {
                        break 'down;
                    }
                }
                k = cand;
            }
            Ok(BEquivConstant { certified, tightened: k, horizon, tightened_by_finite_check: k < certified })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::{power, Monomial};

    fn ideal(n: usize, gens: &[&[u64]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(n, &gens.iter().map(|g| g.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn triangle() -> MonomialIdeal {
        ideal(3, &[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]])
    }

    #[test]
    fn closure_of_x2_y3() {
        let i = ideal(2, &[&[2, 0], &[0, 3]]);
        let c = integral_closure(&i, 1).unwrap();
        assert_eq!(c, ideal(2, &[&[2, 0], &[1, 2], &[0, 3]]));
        assert!(!c.contains(&Monomial::new(vec![1, 1])).unwrap());
        let m = ideal(2, &[&[1, 0], &[0, 1]]);
        assert_eq!(integral_closure(&m, 1).unwrap(), m);
        let twice = integral_closure(&c, 1).unwrap();
        assert_eq!(twice, c);
    }

    #[test]
    fn rees_sets() {
        let m3 = ideal(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let rv = rees_valuations(&m3).unwrap();
        assert_eq!(rv.valuations.len(), 1);
        assert_eq!(rv.valuations[0].valuation.weights(), &[1, 1, 1]);
        let rv = rees_valuations(&ideal(2, &[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(rv.valuations[0].valuation.weights(), &[3, 2]);
        assert_eq!(rv.valuations[0].value, 6);
        let rv = rees_valuations(&triangle()).unwrap();
        let got: Vec<(Vec<u64>, u64)> =
            rv.valuations.iter().map(|r| (r.valuation.weights().to_vec(), r.value)).collect();
        assert_eq!(
            got,
            vec![(vec![0, 1, 1], 1), (vec![1, 0, 1], 1), (vec![1, 1, 0], 1), (vec![1, 1, 1], 2)]
        );
        assert!(rees_valuations(&MonomialIdeal::unit(2)).is_err());
        let x = ideal(1, &[&[1]]);
        assert_eq!(rees_valuations(&x).unwrap().valuations[0].value, 1);
    }

    #[test]
    fn symbolic_triangle() {
        let t = triangle();
        assert_eq!(minimal_vertex_covers(&t).unwrap(), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        let s1 = symbolic_power(&t, 1).unwrap();
        assert_eq!(s1, t);
        let s2 = symbolic_power(&t, 2).unwrap();
        let xyz = Monomial::new(vec![1, 1, 1]);
        assert!(s2.contains(&xyz).unwrap());
        assert!(!power(&t, 2).unwrap().contains(&xyz).unwrap());
        assert!(!s2.contains(&Monomial::new(vec![0, 1, 2])).unwrap());
        let x = ideal(2, &[&[1, 0]]);
        assert_eq!(symbolic_power(&x, 4).unwrap(), ideal(2, &[&[4, 0]]));
        assert!(matches!(symbolic_power(&ideal(2, &[&[2, 0]]), 2), Err(Error::Capability(_))));
    }

    #[test]
    fn briancon_skoda_constants() {
        let m = ideal(2, &[&[1, 0], &[0, 1]]);
        let k = bequiv_constant(BEquivKind::ClosurePowers, &m, 6).unwrap();
        assert_eq!((k.certified, k.tightened, k.tightened_by_finite_check), (1, 0, true));
        let i = ideal(2, &[&[2, 0], &[0, 3]]);
        let k = bequiv_constant(BEquivKind::ClosurePowers, &i, 6).unwrap();
        assert_eq!((k.certified, k.tightened), (1, 1));
        assert_eq!(bequiv_constant(BEquivKind::Powers, &i, 6).unwrap().certified, 0);
    }
}
