//! Toric surface singularities: continued fractions, fan vectors, the
//! blow-up stage plan and the numerical data of the strata.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::contfrac::{hj, ContFracError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ToricError {
    #[error("need 0 < p < q, got p = {p}, q = {q}")]
    Range { p: i64, q: i64 },
    #[error("p = {p} and q = {q} are not coprime")]
    NotCoprime { p: i64, q: i64 },
    #[error(transparent)]
    ContFrac(#[from] ContFracError),
    #[error("fan recursion ends at {got:?}, expected {expected:?}")]
    FanTerminal { got: (i64, i64), expected: (i64, i64) },
    #[error("stage count identity fails: a = {a}, r = {r}, b = {b}")]
    StageIdentity { a: i64, r: i64, b: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToricSurface {
    pub p: i64,
    pub q: i64,
    /// Entries of `q/(q-p)`.
    pub b: Vec<i64>,
    /// Entries of `q/p`; the equations are `x_{i-1} x_{i+1} = x_i^{c_i}`.
    pub c: Vec<i64>,
    pub t: usize,
}

pub fn toric_surface(p: i64, q: i64) -> Result<ToricSurface, ToricError> {
    if !(0 < p && p < q) {
        return Err(ToricError::Range { p, q });
    }
    if p.gcd(&q) != 1 {
        return Err(ToricError::NotCoprime { p, q });
    }
    let b = hj(q, q - p)?.entries;
    let c = hj(q, p)?.entries;
    let t = c.len();
    Ok(ToricSurface { p, q, b, c, t })
}

pub type Vec2 = (i64, i64);

pub fn det(u: Vec2, v: Vec2) -> i64 {
    u.0 * v.1 - u.1 * v.0
}

/// `v_0 = (1,0)`, `v_1 = (1,1)`, `v_{j+1} = b_j v_j - v_{j-1}`, ending at `(p, q)`.
pub fn resolution_vectors(s: &ToricSurface) -> Result<Vec<Vec2>, ToricError> {
    let mut v: Vec<Vec2> = vec![(1, 0), (1, 1)];
    for (j0, bj) in s.b.iter().enumerate() {
        let (cur, prev) = (v[j0 + 1], v[j0]);
        v.push((bj * cur.0 - prev.0, bj * cur.1 - prev.1));
    }
    let last = *v.last().unwrap();
    if last != (s.p, s.q) {
        return Err(ToricError::FanTerminal {
            got: last,
            expected: (s.p, s.q),
        });
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Residual {
    /// Position of `c_j` in `c` (1-based).
    pub index: usize,
    pub d: i64,
    pub blowup_rounds: i64,
    pub nontransversal: bool,
    pub depth_of_special_point: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StagePlan {
    pub a: i64,
    pub b_count: i64,
    pub r_count: i64,
    pub residual: Vec<Residual>,
    pub depth1_special_count: i64,
}

pub fn stage_plan(s: &ToricSurface) -> Result<StagePlan, ToricError> {
    let n = s.b.len();
    let a = if n == 1 {
        1
    } else {
        2 + s.b[1..n - 1].iter().filter(|&&x| x != 2).count() as i64
    };
    let b_count = s.c.iter().filter(|&&x| x == 3).count() as i64;
    let residual: Vec<Residual> = s
        .c
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 3)
        .map(|(idx, &c)| {
            let d = c - 3;
            let nontransversal = d % 2 == 0;
            Residual {
                index: idx + 1,
                d,
                blowup_rounds: (d + 1) / 2,
                nontransversal,
                depth_of_special_point: nontransversal.then_some(d / 2 + 1),
            }
        })
        .collect();
    let r_count = residual.len() as i64;
    if a - r_count - 1 != b_count {
        return Err(ToricError::StageIdentity { a, r: r_count, b: b_count });
    }
    Ok(StagePlan {
        a,
        b_count,
        r_count,
        residual,
        depth1_special_count: b_count,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum StratumId {
    /// Strict transform of the surface.
    StrictTransform,
    /// First exceptional divisor.
    First,
    /// `j`-th blow-up over the `i`-th entry `c > 3`.
    Residual(usize, usize),
}

impl Serialize for StratumId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            StratumId::StrictTransform => s.serialize_i64(-1),
            StratumId::First => s.serialize_i64(0),
            StratumId::Residual(i, j) => (i, j).serialize(s),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct StratumIndex {
    pub index: StratumId,
    #[serde(rename = "N")]
    pub n: i64,
    pub nu: i64,
    pub codim: i64,
}

pub fn strata_numerical_data(s: &ToricSurface, plan: &StagePlan) -> Vec<StratumIndex> {
    let t = s.t as i64;
    let mut out = vec![
        StratumIndex { index: StratumId::StrictTransform, n: 1, nu: t, codim: t },
        StratumIndex { index: StratumId::First, n: 1, nu: t + 2, codim: 1 },
    ];
    for (i, res) in plan.residual.iter().enumerate() {
        for j in 1..=res.blowup_rounds {
            out.push(StratumIndex {
                index: StratumId::Residual(i + 1, j as usize),
                n: j + 1,
                nu: (j + 1) * (t + 1) + 1,
                codim: 1,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn surface_examples() {
        let s = toric_surface(1, 3).unwrap();
        assert_eq!((s.b.clone(), s.c.clone(), s.t), (vec![2, 2], vec![3], 1));
        let s = toric_surface(3, 5).unwrap();
        assert_eq!((s.b.clone(), s.c.clone(), s.t), (vec![3, 2], vec![2, 3], 2));
        let s = toric_surface(1, 2).unwrap();
        assert_eq!((s.b.clone(), s.c.clone(), s.t), (vec![2], vec![2], 1));
        assert_eq!(toric_surface(2, 4), Err(ToricError::NotCoprime { p: 2, q: 4 }));
        assert_eq!(toric_surface(3, 3), Err(ToricError::Range { p: 3, q: 3 }));
    }

    #[test]
    fn vector_examples() {
        let v = |p, q| resolution_vectors(&toric_surface(p, q).unwrap()).unwrap();
        assert_eq!(v(1, 3), vec![(1, 0), (1, 1), (1, 2), (1, 3)]);
        assert_eq!(v(3, 5), vec![(1, 0), (1, 1), (2, 3), (3, 5)]);
        assert_eq!(v(1, 2), vec![(1, 0), (1, 1), (1, 2)]);
    }

    #[test]
    fn plan_examples() {
        let plan = |p, q| stage_plan(&toric_surface(p, q).unwrap()).unwrap();
        let p13 = plan(1, 3);
        assert_eq!((p13.a, p13.b_count, p13.r_count, p13.depth1_special_count), (2, 1, 0, 1));
        assert!(p13.residual.is_empty());
        let p15 = plan(1, 5);
        assert_eq!((p15.a, p15.b_count, p15.r_count), (2, 0, 1));
        assert_eq!(
            p15.residual,
            vec![Residual {
                index: 1,
                d: 2,
                blowup_rounds: 1,
                nontransversal: true,
                depth_of_special_point: Some(2)
            }]
        );
        let p14 = plan(1, 4);
        assert_eq!((p14.a, p14.b_count, p14.r_count), (2, 0, 1));
        assert!(!p14.residual[0].nontransversal);
        assert_eq!(p14.residual[0].blowup_rounds, 1);
    }

    #[test]
    fn strata_examples() {
        let data = |p, q| {
            let s = toric_surface(p, q).unwrap();
            let plan = stage_plan(&s).unwrap();
            strata_numerical_data(&s, &plan)
                .into_iter()
                .map(|x| (x.index, x.n, x.nu))
                .collect::<Vec<_>>()
        };
        assert_eq!(
            data(1, 5),
            vec![
                (StratumId::StrictTransform, 1, 1),
                (StratumId::First, 1, 3),
                (StratumId::Residual(1, 1), 2, 5)
            ]
        );
        assert_eq!(data(1, 3), vec![(StratumId::StrictTransform, 1, 1), (StratumId::First, 1, 3)]);
    }

    fn coprime_pair() -> impl Strategy<Value = (i64, i64)> {
        (2i64..=500)
            .prop_flat_map(|q| (1..q, Just(q)))
            .prop_filter("coprime", |(p, q)| p.gcd(q) == 1)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(250))]

        #[test]
        fn fan_invariants((p, q) in coprime_pair()) {
            let s = toric_surface(p, q).unwrap();
            let v = resolution_vectors(&s).unwrap();
            prop_assert_eq!(v.len(), s.b.len() + 2);
            for w in v.windows(2) {
                prop_assert_eq!(det(w[0], w[1]), 1);
            }
            for x in &v {
                prop_assert_eq!(x.0.gcd(&x.1), 1);
            }
            for j in 1..v.len() - 1 {
                let bj = s.b[j - 1];
                prop_assert_eq!((v[j - 1].0 + v[j + 1].0, v[j - 1].1 + v[j + 1].1), (bj * v[j].0, bj * v[j].1));
            }
            prop_assert!(s.b.iter().chain(&s.c).all(|&x| x >= 2));
        }

        #[test]
        fn stage_identity((p, q) in coprime_pair()) {
            let s = toric_surface(p, q).unwrap();
            let plan = stage_plan(&s).unwrap();
            prop_assert_eq!(plan.a - plan.r_count - 1, plan.b_count);
            prop_assert_eq!(plan.residual.len() as i64, plan.r_count);
            let strata = strata_numerical_data(&s, &plan);
            prop_assert_eq!(strata[1].nu - strata[0].nu, 2);
        }
    }
}
