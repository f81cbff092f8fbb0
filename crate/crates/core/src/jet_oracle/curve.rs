//! Brute-force distance from an arc to a plane branch, and an explicit
//! blow-up simulation producing the contact profile of the lifted arc.

use serde::Serialize;

use super::fp::{inv_mod, is_prime, FpSeries};
use super::OracleError;
use crate::curve_res::{build_chains, ContactProfile, CurveBranch, NodeId, Resolution};

/// A plane arc given by sparse `(exponent, coefficient)` lists.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PlaneArc {
    pub x: Vec<(usize, i64)>,
    pub y: Vec<(usize, i64)>,
}

impl PlaneArc {
    pub fn new(x: &[(usize, i64)], y: &[(usize, i64)]) -> Self {
        Self {
            x: x.to_vec(),
            y: y.to_vec(),
        }
    }

    fn series(&self, p: u64, prec: usize) -> (FpSeries, FpSeries) {
        (FpSeries::from_sparse(p, &self.x, prec), FpSeries::from_sparse(p, &self.y, prec))
    }

    /// The branch itself, `(s^m, s^{k_1} + ... + s^{k_s})`.
    pub fn of_branch(b: &CurveBranch) -> Self {
        Self {
            x: vec![(b.m as usize, 1)],
            y: b.exponents.iter().map(|&k| (k as usize, 1)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum OracleDx {
    Exact(i64),
    /// The search cap was reached; the true value is at least this.
    LowerBound(i64),
}

/// `p` must be a prime dividing neither `m` nor any Euclid remainder.
pub fn check_prime(branch: &CurveBranch, res: &Resolution, p: u64) -> Result<(), OracleError> {
    if !is_prime(p) {
        return Err(OracleError::NotPrime(p));
    }
    let bad = std::iter::once(branch.m)
        .chain(res.table.rows.iter().flat_map(|r| r.r.iter().copied()))
        .any(|v| v % p as i64 == 0);
    if bad {
        return Err(OracleError::NotGeneric(p));
    }
    Ok(())
}

struct Dfs<'a> {
    m: u32,
    ks: Vec<u32>,
    x: &'a FpSeries,
    y: &'a FpSeries,
    p: u64,
    cap: usize,
    best: i64,
    capped: bool,
}

impl Dfs<'_> {
    /// Lower bound on `ord(arc - phi_gamma)` over all extensions of the
    /// prefix `gamma_1..gamma_j`, and whether it is attained by every extension.
    fn bound(&self, g: &FpSeries, j: usize) -> (usize, bool) {
        let n = self.cap + 2;
        let (bx, by) = match g.ord() {
            None => (
                self.m as usize * (j + 1),
                self.ks.iter().map(|&k| k as usize * (j + 1)).min().unwrap(),
            ),
            Some(e) => (
                (self.m as usize - 1) * e + j + 1,
                self.ks.iter().map(|&k| (k as usize - 1) * e + j + 1).min().unwrap(),
            ),
        };
        let gx = g.pow(self.m);
        let mut gy = FpSeries::zero(self.p, n);
        for &k in &self.ks {
            gy = gy.add(&g.pow(k));
        }
        let first = |d: FpSeries, bound: usize| (0..bound.min(self.cap + 1)).find(|&i| d.coeff(i) != 0);
        let fx = first(self.x.sub(&gx), bx);
        let fy = first(self.y.sub(&gy), by);
        let lo = fx.unwrap_or(bx).min(fy.unwrap_or(by));
        (lo, fx == Some(lo) || fy == Some(lo))
    }

    fn run(&mut self, g: &mut FpSeries, j: usize) {
        let (lo, exact) = self.bound(g, j);
        if exact {
            self.best = self.best.max(lo as i64);
            return;
        }
        if lo > self.cap || j >= self.cap {
            self.capped = true;
            return;
        }
        for c in 0..self.p {
            g.set(j + 1, c);
            self.run(g, j + 1);
        }
        g.set(j + 1, 0);
    }
}

/// `sup_gamma ord(arc - (gamma^m, sum gamma^{k_i}))` over `gamma` in
/// `s F_p[[s]]`, searched up to order `depth`.
pub fn curve_dx_oracle(branch: &CurveBranch, arc: &PlaneArc, p: u64, depth: usize) -> Result<OracleDx, OracleError> {
    let res = build_chains(branch)?;
    check_prime(branch, &res, p)?;
    let n = depth + 2;
    let (x, y) = arc.series(p, n);
    let mut dfs = Dfs {
        m: branch.m as u32,
        ks: branch.exponents.iter().map(|&k| k as u32).collect(),
        x: &x,
        y: &y,
        p,
        cap: depth,
        best: 0,
        capped: false,
    };
    let mut g = FpSeries::zero(p, n);
    dfs.run(&mut g, 0);
    Ok(if dfs.capped {
        OracleDx::LowerBound(depth as i64)
    } else {
        OracleDx::Exact(dfs.best)
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Coord {
    U,
    V,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Dir {
    U,
    V,
    Slope(u64),
}

fn direction(x: &FpSeries, y: &FpSeries, p: u64) -> Option<Dir> {
    match (x.ord(), y.ord()) {
        (None, None) => None,
        (Some(_), None) => Some(Dir::U),
        (None, Some(_)) => Some(Dir::V),
        (Some(a), Some(b)) if a < b => Some(Dir::U),
        (Some(a), Some(b)) if b < a => Some(Dir::V),
        (Some(a), Some(_)) => Some(Dir::Slope(y.coeff(a) * inv_mod(x.coeff(a), p) % p)),
    }
}

/// Precision used for the contact with the strict transform; larger
/// contacts are reported as lying on `X`.
pub const STRICT_PREC: usize = 64;

fn ord_i(s: &FpSeries) -> Result<i64, OracleError> {
    s.ord().map(|o| o as i64).ok_or(OracleError::Precision)
}

/// Lifts `arc` through the point blow-ups resolving `branch`, checking at
/// every step that the divisors through the centre are the recorded
/// parents, and reads off where the lifted arc lands.
pub fn lift_arc(branch: &CurveBranch, arc: &PlaneArc, p: u64, prec: usize) -> Result<ContactProfile, OracleError> {
    let res = build_chains(branch)?;
    check_prime(branch, &res, p)?;
    let (mut a, mut b) = arc.series(p, prec);
    if a.coeff(0) != 0 || b.coeff(0) != 0 {
        return Ok(ContactProfile::off_x());
    }
    if a.ord().is_none() && b.ord().is_none() {
        return Ok(ContactProfile::on_x());
    }
    let bp = prec + 2 * (branch.m + branch.k(branch.s())) as usize + 8;
    let (mut u, mut v) = PlaneArc::of_branch(branch).series(p, bp);
    let mut divs: Vec<(NodeId, Coord)> = vec![];
    for &nid in &res.creation {
        let mut through: Vec<NodeId> = divs.iter().map(|d| d.0).collect();
        let mut parents = res.node(nid)?.parents.clone();
        through.sort();
        parents.sort();
        if through != parents {
            return Err(OracleError::Creation { node: nid, through, parents });
        }
        let db = direction(&u, &v, p).ok_or(OracleError::Precision)?;
        let da = match direction(&a, &b, p) {
            Some(d) => d,
            // the arc has become constant at the centre: it lies on the branch
            None => return Ok(ContactProfile::on_x()),
        };
        if da != db {
            let (oa, ob) = (a.ord(), b.ord());
            let ge = oa.into_iter().chain(ob).min().unwrap() as i64;
            let mut loc = vec![(nid, ge)];
            for &(d, cd) in &divs {
                match (cd, da) {
                    (Coord::U, Dir::V) => loc.push((d, ord_i(&a)? - ord_i(&b)?)),
                    (Coord::V, Dir::U) => {
                        let g = match ob {
                            Some(o) => o as i64 - ord_i(&a)?,
                            None => return Err(OracleError::Precision),
                        };
                        loc.push((d, g));
                    }
                    _ => {}
                }
            }
            return profile_from(loc);
        }
        let chart_u = u.ord().ok_or(OracleError::Precision)? <= v.ord().unwrap_or(usize::MAX);
        if chart_u {
            let v1 = v.div(&u).ok_or(OracleError::Precision)?;
            let c = v1.coeff(0);
            v = v1.sub_const(c);
            b = b.div(&a).ok_or(OracleError::Precision)?.sub_const(c);
            let mut nd = vec![(nid, Coord::U)];
            nd.extend(divs.iter().filter(|d| d.1 == Coord::V && c == 0).copied());
            divs = nd;
        } else {
            let u1 = u.div(&v).ok_or(OracleError::Precision)?;
            let c = u1.coeff(0);
            u = u1.sub_const(c);
            a = a.div(&b).ok_or(OracleError::Precision)?.sub_const(c);
            let mut nd = vec![(nid, Coord::V)];
            nd.extend(divs.iter().filter(|d| d.1 == Coord::U && c == 0).copied());
            divs = nd;
        }
        if a.prec() < 4 || u.prec() < 4 {
            return Err(OracleError::Precision);
        }
    }
    let &[(f, cd)] = divs.as_slice() else {
        return Err(OracleError::Precision);
    };
    let (e_arc, o_arc, e_br, o_br) = match cd {
        Coord::U => (&a, &b, &u, &v),
        Coord::V => (&b, &a, &v, &u),
    };
    if e_arc.ord().unwrap_or(usize::MAX) > 0 && o_arc.ord().unwrap_or(usize::MAX) > 0 {
        // at the point where the strict transform meets F, transversally
        let w = e_arc.prec().min(o_arc.prec()).min(STRICT_PREC);
        let t = e_br.truncate(w).revert().ok_or(OracleError::Precision)?;
        let h = o_br.truncate(w).compose(&t);
        let diff = o_arc.truncate(w).sub(&h.compose(&e_arc.truncate(w)));
        return Ok(match diff.ord() {
            None => ContactProfile::on_x(),
            Some(gx) => ContactProfile::strict(f, ord_i(e_arc)?, gx as i64),
        });
    }
    Ok(ContactProfile::interior(f, ord_i(e_arc)?))
}

fn profile_from(loc: Vec<(NodeId, i64)>) -> Result<ContactProfile, OracleError> {
    match loc.as_slice() {
        [(a, g)] => Ok(ContactProfile::interior(*a, *g)),
        [x, y] => Ok(ContactProfile::intersection(*x, *y)),
        _ => Err(OracleError::Precision),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve_res::{dx_curve, Ext};

    fn br(m: i64, ks: &[i64]) -> CurveBranch {
        CurveBranch::new(m, ks).unwrap()
    }

    #[test]
    fn cusp_oracle() {
        let b = br(2, &[3]);
        let o = |x: &[(usize, i64)], y: &[(usize, i64)]| curve_dx_oracle(&b, &PlaneArc::new(x, y), 101, 30).unwrap();
        assert_eq!(o(&[(1, 1)], &[]), OracleDx::Exact(1));
        assert_eq!(o(&[(2, 1)], &[]), OracleDx::Exact(3));
        assert_eq!(o(&[(4, 1)], &[(5, 1)]), OracleDx::Exact(5));
        assert_eq!(o(&[(0, 1)], &[]), OracleDx::Exact(0));
        assert!(matches!(o(&[(2, 1)], &[(3, 1)]), OracleDx::LowerBound(_)));
    }

    #[test]
    fn lift_matches_formula() {
        let b = br(2, &[3]);
        let res = build_chains(&b).unwrap();
        let prof = lift_arc(&b, &PlaneArc::new(&[(2, 1)], &[(3, 1), (5, 1)]), 101, 60).unwrap();
        assert_eq!(dx_curve(&res, &prof).unwrap().value, Ext::Fin(5));
        let on = lift_arc(&b, &PlaneArc::new(&[(4, 1)], &[(6, 1)]), 101, 60).unwrap();
        assert_eq!(dx_curve(&res, &on).unwrap().value, Ext::Inf);
        let off = lift_arc(&b, &PlaneArc::new(&[(0, 3)], &[]), 101, 60).unwrap();
        assert_eq!(dx_curve(&res, &off).unwrap().value, Ext::Fin(0));
    }

    #[test]
    fn genericity_guard() {
        let b = br(2, &[3]);
        let arc = PlaneArc::new(&[(1, 1)], &[]);
        assert_eq!(curve_dx_oracle(&b, &arc, 2, 10), Err(OracleError::NotGeneric(2)));
        assert_eq!(curve_dx_oracle(&b, &arc, 9, 10), Err(OracleError::NotPrime(9)));
    }
}
