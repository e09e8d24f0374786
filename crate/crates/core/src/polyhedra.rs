//! Exact rational polyhedra and linear programming.
//!
//! Hulls are computed by double description on the homogenized cone; the
//! LP solver is a dense two-phase simplex with Bland's rule.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};

pub const DEFAULT_MAX_DIM: usize = 8;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `<normal, y> >= offset` with a primitive integer normal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct HalfSpace {
    normal: Vec<BigInt>,
    offset: BigRational,
}

impl HalfSpace {
    /// Normalizes by a positive factor so the normal is a primitive integer
    /// vector.
    pub fn new(normal: &[BigRational], offset: BigRational) -> Result<Self> {
        if normal.iter().all(Zero::is_zero) {
            return Err(Error::Domain("halfspace with zero normal".into()));
        }
        let den = normal.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let ints: Vec<BigInt> = normal.iter().map(|q| (q * &den).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let normal: Vec<BigInt> = ints.into_iter().map(|v| v / &g).collect();
        let offset = offset * BigRational::from_integer(den) / BigRational::from_integer(g);
        Ok(HalfSpace { normal, offset })
    }

    pub fn from_ints(normal: &[i64], offset: i64) -> Result<Self> {
        let n: Vec<BigRational> = normal.iter().map(|&v| rat(v)).collect();
        Self::new(&n, rat(offset))
    }

    pub fn normal(&self) -> &[BigInt] {
        &self.normal
    }

    pub fn offset(&self) -> &BigRational {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn eval(&self, y: &[BigRational]) -> BigRational {
        self.normal
            .iter()
            .zip(y)
            .fold(BigRational::zero(), |acc, (a, b)| acc + b * BigRational::from_integer(a.clone()))
    }

    pub fn satisfied_by(&self, y: &[BigRational]) -> bool {
        self.eval(y) >= self.offset
    }

    /// Nonnegative normal, i.e. a monomial valuation.
    pub fn is_valuation_candidate(&self) -> bool {
        self.normal.iter().all(|v| !v.is_negative())
    }

    /// `x_i >= 0`.
    pub fn is_coordinate(&self) -> bool {
        self.offset.is_zero()
            && self.normal.iter().filter(|v| !v.is_zero()).count() == 1
            && self.normal.iter().all(|v| !v.is_negative())
    }
}

impl fmt::Display for HalfSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.normal.iter().map(|v| v.to_string()).collect();
        write!(f, "<({}), y> >= {}", parts.join(","), self.offset)
    }
}

#[derive(Clone, Debug)]
pub struct RationalPolyhedron {
    dim: usize,
    halfspaces: Vec<HalfSpace>,
    vertices: Vec<Vec<BigRational>>,
    rays: Vec<Vec<BigRational>>,
}

impl RationalPolyhedron {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[Vec<BigRational>] {
        &self.vertices
    }

    pub fn recession_rays(&self) -> &[Vec<BigRational>] {
        &self.rays
    }

    pub fn member(&self, y: &[BigRational]) -> Result<bool> {
        check_dim(self.dim, y.len())?;
        Ok(self.halfspaces.iter().all(|h| h.satisfied_by(y)))
    }

    pub fn valuation_candidates(&self) -> impl Iterator<Item = &HalfSpace> {
        self.halfspaces.iter().filter(|h| h.is_valuation_candidate())
    }
}

fn to_int_vec(v: &[BigRational]) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    v.iter().map(|q| (q * &den).to_integer()).collect()
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    v
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn combine(ca: &BigInt, a: &[BigInt], cb: &BigInt, b: &[BigInt]) -> Vec<BigInt> {
    primitive(a.iter().zip(b).map(|(x, y)| ca * x - cb * y).collect())
}

struct Ray {
    v: Vec<BigInt>,
    zeros: BTreeSet<usize>,
}

/// Extreme rays and lineality of `{y : <g, y> >= 0 for all g in rows}`.
fn double_description(d: usize, rows: &[Vec<BigInt>]) -> (Vec<Ray>, Vec<Vec<BigInt>>) {
    let mut lin: Vec<Vec<BigInt>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut rays: Vec<Ray> = Vec::new();
    for (k, a) in rows.iter().enumerate() {
        if let Some(p) = lin.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lin.remove(p);
            let mut al0 = dot(a, &l0);
            if al0.is_negative() {
                l0.iter_mut().for_each(|x| *x = -&*x);
                al0 = -al0;
            }
            for l in lin.iter_mut() {
                let al = dot(a, l);
                if !al.is_zero() {
                    *l = combine(&al0, l, &al, &l0);
                }
            }
            for r in rays.iter_mut() {
                let ar = dot(a, &r.v);
                if !ar.is_zero() {
                    r.v = combine(&al0, &r.v, &ar, &l0);
                }
                r.zeros.insert(k);
            }
            rays.push(Ray { v: l0, zeros: (0..k).collect() });
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let mut next: Vec<Ray> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if vals[i].is_positive() {
                next.push(Ray { v: r.v.clone(), zeros: r.zeros.clone() });
            } else if vals[i].is_zero() {
                let mut z = r.zeros.clone();
                z.insert(k);
                next.push(Ray { v: r.v.clone(), zeros: z });
            }
        }
        for (i, r) in rays.iter().enumerate() {
            if !vals[i].is_positive() {
                continue;
            }
            for (j, s) in rays.iter().enumerate() {
                if !vals[j].is_negative() {
                    continue;
                }
                let common: BTreeSet<usize> = r.zeros.intersection(&s.zeros).copied().collect();
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(t, q)| t == i || t == j || !common.is_subset(&q.zeros));
                if adjacent {
                    let v = combine(&vals[i], &s.v, &vals[j], &r.v);
                    let mut zeros = common;
                    zeros.insert(k);
                    next.push(Ray { v, zeros });
                }
            }
        }
        rays = next;
    }
    (rays, lin)
}

/// `conv(points) + cone(rays)` with the default dimension cap.
pub fn hull_with_recession(
    points: &[Vec<BigRational>],
    rays: &[Vec<BigRational>],
) -> Result<RationalPolyhedron> {
    hull_with_recession_capped(points, rays, DEFAULT_MAX_DIM)
}

pub fn hull_with_recession_capped(
    points: &[Vec<BigRational>],
    rays: &[Vec<BigRational>],
    max_dim: usize,
) -> Result<RationalPolyhedron> {
    let Some(first) = points.first() else {
        return Err(Error::Domain("hull of an empty point set".into()));
    };
    let n = first.len();
    if n == 0 {
        return Err(Error::Domain("zero-dimensional ambient space".into()));
    }
    if n > max_dim {
        return Err(Error::Capability(format!("hull in dimension {n} exceeds cap {max_dim}")));
    }
    for p in points.iter().chain(rays) {
        check_dim(n, p.len())?;
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for r in rays {
        if r.iter().any(|q| !q.is_zero()) {
            let mut h = r.clone();
            h.push(BigRational::zero());
            rows.push(primitive(to_int_vec(&h)));
        }
    }
    for p in points {
        let mut h = p.clone();
        h.push(BigRational::one());
        rows.push(primitive(to_int_vec(&h)));
    }
    rows.sort();
    rows.dedup();
    let (ext, lin) = double_description(n + 1, &rows);
    // The face of the cone at infinity holds exactly the recession rows.
    let at_infinity: BTreeSet<usize> = (0..rows.len()).filter(|&i| rows[i][n].is_zero()).collect();
    let mut halfspaces: Vec<HalfSpace> = Vec::new();
    let as_half = |y: &[BigInt]| -> Option<HalfSpace> {
        let normal: Vec<BigRational> = y[..n].iter().map(|v| BigRational::from_integer(v.clone())).collect();
        if normal.iter().all(Zero::is_zero) {
            return None;
        }
        HalfSpace::new(&normal, -BigRational::from_integer(y[n].clone())).ok()
    };
    for r in ext.iter().filter(|r| r.zeros != at_infinity) {
        halfspaces.extend(as_half(&r.v));
    }
    for y in &lin {
        let neg: Vec<BigInt> = y.iter().map(|v| -v).collect();
        halfspaces.extend(as_half(y));
        halfspaces.extend(as_half(&neg));
    }
    halfspaces.sort();
    halfspaces.dedup();

    let mut vertices: Vec<Vec<BigRational>> = Vec::new();
    for p in points {
        let tight: Vec<Vec<BigRational>> = halfspaces
            .iter()
            .filter(|h| h.eval(p) == h.offset)
            .map(|h| h.normal.iter().map(|v| BigRational::from_integer(v.clone())).collect())
            .collect();
        if rank(tight) == n && !vertices.contains(p) {
            vertices.push(p.clone());
        }
    }
    vertices.sort();
    Ok(RationalPolyhedron { dim: n, halfspaces, vertices, rays: rays.to_vec() })
}

fn rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// `min <objective, y>` subject to `constraints`, and `y >= 0` when
/// `nonneg` is set.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<BigRational>,
    pub constraints: Vec<HalfSpace>,
    pub nonneg: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub optimum: BigRational,
    pub argmin: Vec<BigRational>,
    /// One multiplier per constraint, in input order.
    pub dual: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Unbounded,
    Infeasible,
}

impl LinearProgram {
    pub fn new(objective: Vec<BigRational>, constraints: Vec<HalfSpace>, nonneg: bool) -> Self {
        LinearProgram { objective, constraints, nonneg }
    }

    fn row(&self, i: usize) -> Vec<BigRational> {
        self.constraints[i].normal.iter().map(|v| BigRational::from_integer(v.clone())).collect()
    }
}

impl LpSolution {
    /// Exact check of primal feasibility, dual feasibility and equal
    /// objective values.
    pub fn verify(&self, lp: &LinearProgram) -> bool {
        let n = lp.objective.len();
        if self.argmin.len() != n || self.dual.len() != lp.constraints.len() {
            return false;
        }
        if lp.nonneg && self.argmin.iter().any(|v| v.is_negative()) {
            return false;
        }
        if !lp.constraints.iter().all(|h| h.satisfied_by(&self.argmin)) {
            return false;
        }
        let primal: BigRational = lp.objective.iter().zip(&self.argmin).map(|(c, y)| c * y).sum();
        if primal != self.optimum || self.dual.iter().any(|u| u.is_negative()) {
            return false;
        }
        let mut at = vec![BigRational::zero(); n];
        for (i, u) in self.dual.iter().enumerate() {
            for (j, a) in lp.row(i).iter().enumerate() {
                at[j] += u * a;
            }
        }
        let dual_ok = at.iter().zip(&lp.objective).all(|(a, c)| if lp.nonneg { a <= c } else { a == c });
        let dual_value: BigRational =
            self.dual.iter().zip(&lp.constraints).map(|(u, h)| u * &h.offset).sum();
        dual_ok && dual_value == self.optimum
    }
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        self.rhs[r] /= &p;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for j in 0..self.rows[i].len() {
                if !self.rows[r][j].is_zero() {
                    let t = &f * &self.rows[r][j];
                    self.rows[i][j] -= t;
                }
            }
            let t = &f * &self.rhs[r];
            self.rhs[i] -= t;
        }
        self.basis[r] = c;
    }

    /// Minimizes `cost` over columns `< allowed`; `false` means unbounded.
    fn optimize(&mut self, cost: &[BigRational], allowed: usize) -> bool {
        loop {
            let reduced = |j: usize| -> BigRational {
                let mut z = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !self.rows[i][j].is_zero() {
                        z -= &cost[b] * &self.rows[i][j];
                    }
                }
                z
            };
            let Some(enter) = (0..allowed).find(|&j| !self.basis.contains(&j) && reduced(j).is_negative())
            else {
                return true;
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][enter].is_positive() {
                    let q = &self.rhs[i] / &self.rows[i][enter];
                    let better = match &leave {
                        None => true,
                        Some((l, best)) => q < *best || (q == *best && self.basis[i] < self.basis[*l]),
                    };
                    if better {
                        leave = Some((i, q));
                    }
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

/// Solves `B^T pi = c_B` for the final basis.
fn solve_duals(a: &[Vec<BigRational>], basis: &[usize], cost: &[BigRational]) -> Vec<BigRational> {
    let m = basis.len();
    let mut aug: Vec<Vec<BigRational>> = (0..m)
        .map(|k| {
            let mut row: Vec<BigRational> = (0..m).map(|i| a[i][basis[k]].clone()).collect();
            row.push(cost[basis[k]].clone());
            row
        })
        .collect();
    for c in 0..m {
        let p = (c..m).find(|&i| !aug[i][c].is_zero()).expect("basis is nonsingular");
        aug.swap(c, p);
        let piv = aug[c][c].clone();
        for v in aug[c].iter_mut() {
            *v /= &piv;
        }
        for i in 0..m {
            if i != c && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in c..=m {
                    let t = &f * &aug[c][j];
                    aug[i][j] -= t;
                }
            }
        }
    }
    aug.into_iter().map(|row| row[m].clone()).collect()
}

pub fn lp_minimize(lp: &LinearProgram) -> Result<LpOutcome> {
    let n = lp.objective.len();
    for h in &lp.constraints {
        check_dim(n, h.dim())?;
    }
    let m = lp.constraints.len();
    // Standard form columns: structural (split when free), surplus, artificial.
    let nstruct = if lp.nonneg { n } else { 2 * n };
    let nslack = m;
    let ncols = nstruct + nslack + m;
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut b: Vec<BigRational> = Vec::with_capacity(m);
    let mut sign: Vec<bool> = Vec::with_capacity(m);
    for i in 0..m {
        let coef = lp.row(i);
        let mut row = vec![BigRational::zero(); ncols];
        for j in 0..n {
            row[j] = coef[j].clone();
            if !lp.nonneg {
                row[n + j] = -coef[j].clone();
            }
        }
        row[nstruct + i] = -BigRational::one();
        let mut rhs = lp.constraints[i].offset.clone();
        let flip = rhs.is_negative();
        if flip {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            rhs = -rhs;
        }
        row[nstruct + nslack + i] = BigRational::one();
        a.push(row);
        b.push(rhs);
        sign.push(flip);
    }
    let original = a.clone();
    let mut t = Tableau { rows: a, rhs: b, basis: (0..m).map(|i| nstruct + nslack + i).collect() };

    let mut phase1 = vec![BigRational::zero(); ncols];
    for c in phase1.iter_mut().skip(nstruct + nslack) {
        *c = BigRational::one();
    }
    t.optimize(&phase1, ncols);
    let infeas: BigRational =
        t.basis.iter().zip(&t.rhs).filter(|(&bv, _)| bv >= nstruct + nslack).map(|(_, v)| v.clone()).sum();
    if infeas.is_positive() {
        return Ok(LpOutcome::Infeasible);
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    let mut keep: Vec<usize> = (0..m).collect();
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= nstruct + nslack {
            if let Some(c) = (0..nstruct + nslack).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, c);
            } else {
                t.rows.remove(r);
                t.rhs.remove(r);
                t.basis.remove(r);
                keep.remove(r);
                continue;
            }
        }
        r += 1;
    }
    let mut cost = vec![BigRational::zero(); ncols];
    for j in 0..n {
        cost[j] = lp.objective[j].clone();
        if !lp.nonneg {
            cost[n + j] = -lp.objective[j].clone();
        }
    }
    if !t.optimize(&cost, nstruct + nslack) {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (i, &bv) in t.basis.iter().enumerate() {
        x[bv] = t.rhs[i].clone();
    }
    let argmin: Vec<BigRational> =
        (0..n).map(|j| if lp.nonneg { x[j].clone() } else { &x[j] - &x[n + j] }).collect();
    let optimum: BigRational = lp.objective.iter().zip(&argmin).map(|(c, y)| c * y).sum();
    let kept_rows: Vec<Vec<BigRational>> = keep.iter().map(|&i| original[i].clone()).collect();
    let pi = solve_duals(&kept_rows, &t.basis, &cost);
    let mut dual = vec![BigRational::zero(); m];
    for (k, &i) in keep.iter().enumerate() {
        dual[i] = if sign[i] { -pi[k].clone() } else { pi[k].clone() };
    }
    Ok(LpOutcome::Optimal(LpSolution { optimum, argmin, dual }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    fn basis(n: usize) -> Vec<Vec<BigRational>> {
        (0..n).map(|i| (0..n).map(|j| rat((i == j) as i64)).collect()).collect()
    }

    #[test]
    fn newton_polygon_of_x2_y3() {
        let p = hull_with_recession(&[pt(&[2, 0]), pt(&[0, 3])], &basis(2)).unwrap();
        let expect = vec![
            HalfSpace::from_ints(&[0, 1], 0).unwrap(),
            HalfSpace::from_ints(&[1, 0], 0).unwrap(),
            HalfSpace::from_ints(&[3, 2], 6).unwrap(),
        ];
        let mut got = p.halfspaces().to_vec();
        got.sort();
        let mut want = expect;
        want.sort();
        assert_eq!(got, want);
        assert!(p.member(&pt(&[1, 2])).unwrap());
        assert!(!p.member(&pt(&[1, 1])).unwrap());
        assert_eq!(p.vertices().len(), 2);
    }

    #[test]
    fn translated_orthant() {
        let p = hull_with_recession(&[pt(&[1, 0])], &basis(2)).unwrap();
        assert_eq!(p.halfspaces().len(), 2);
        assert!(p.halfspaces().contains(&HalfSpace::from_ints(&[1, 0], 1).unwrap()));
        assert!(p.halfspaces().contains(&HalfSpace::from_ints(&[0, 1], 0).unwrap()));
    }

    #[test]
    fn degenerate_inputs() {
        let p = hull_with_recession(&[pt(&[1, 1]), pt(&[1, 1])], &[]).unwrap();
        assert!(p.member(&pt(&[1, 1])).unwrap());
        assert!(!p.member(&pt(&[1, 2])).unwrap());
        let seg = hull_with_recession(&[pt(&[0, 0]), pt(&[2, 2]), pt(&[1, 1])], &[]).unwrap();
        assert!(seg.member(&pt(&[1, 1])).unwrap());
        assert!(!seg.member(&pt(&[1, 0])).unwrap());
        assert!(!seg.member(&pt(&[3, 3])).unwrap());
        assert_eq!(seg.vertices().len(), 2);
        assert!(hull_with_recession(&[], &[]).is_err());
        let big = vec![rat(0); 9];
        assert!(matches!(hull_with_recession(&[big], &[]), Err(Error::Capability(_))));
    }

    #[test]
    fn lp_triangle_cover() {
        let cons = vec![
            HalfSpace::from_ints(&[1, 1, 0], 1).unwrap(),
            HalfSpace::from_ints(&[1, 0, 1], 1).unwrap(),
            HalfSpace::from_ints(&[0, 1, 1], 1).unwrap(),
        ];
        let lp = LinearProgram::new(pt(&[1, 1, 1]), cons, true);
        let LpOutcome::Optimal(sol) = lp_minimize(&lp).unwrap() else { panic!() };
        assert_eq!(sol.optimum, ratio(3, 2));
        assert_eq!(sol.argmin, vec![ratio(1, 2); 3]);
        assert!(sol.verify(&lp));
    }

    #[test]
    fn lp_trivial_cases() {
        let c = vec![HalfSpace::from_ints(&[1], 0).unwrap()];
        let lp = LinearProgram::new(pt(&[1]), c.clone(), false);
        let LpOutcome::Optimal(sol) = lp_minimize(&lp).unwrap() else { panic!() };
        assert_eq!(sol.optimum, rat(0));
        assert!(sol.verify(&lp));
        let lp = LinearProgram::new(pt(&[-1]), c, false);
        assert_eq!(lp_minimize(&lp).unwrap(), LpOutcome::Unbounded);
        let infeasible = vec![
            HalfSpace::from_ints(&[1], 2).unwrap(),
            HalfSpace::from_ints(&[-1], -1).unwrap(),
        ];
        let lp = LinearProgram::new(pt(&[1]), infeasible, false);
        assert_eq!(lp_minimize(&lp).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn lp_negative_offsets_and_redundancy() {
        // y1 + y2 >= -1 (flipped row), 2y1 >= 2, y1 >= 1 (redundant copy)
        let cons = vec![
            HalfSpace::from_ints(&[1, 1], -1).unwrap(),
            HalfSpace::from_ints(&[2, 0], 2).unwrap(),
            HalfSpace::from_ints(&[1, 0], 1).unwrap(),
        ];
        let lp = LinearProgram::new(pt(&[3, 1]), cons, true);
        let LpOutcome::Optimal(sol) = lp_minimize(&lp).unwrap() else { panic!() };
        assert_eq!(sol.optimum, rat(3));
        assert!(sol.verify(&lp));
    }
}
