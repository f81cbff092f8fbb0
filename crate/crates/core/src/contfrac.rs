//! Hirzebruch-Jung continued fractions and the Euclidean tables of a branch.

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContFracError {
    #[error("hj({n}, {k}): need 0 < k < n or k = 1 <= n")]
    HjRange { n: i64, k: i64 },
    #[error("hj({n}, {k}): arguments are not coprime")]
    HjNotCoprime { n: i64, k: i64 },
    #[error("multiplicity must be at least 2, got {0}")]
    Multiplicity(i64),
    #[error("exponents must satisfy m < k_1 < ... < k_s (violated at index {index})")]
    NotIncreasing { index: usize },
    #[error("gcd chain does not strictly decrease at index {index} (gcd stays {gcd})")]
    GcdStalls { index: usize, gcd: i64 },
    #[error("gcd chain ends at {0}, not 1")]
    GcdNotOne(i64),
    #[error("no exponents given")]
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HjExpansion {
    pub numerator: i64,
    pub denominator: i64,
    pub entries: Vec<i64>,
}

impl HjExpansion {
    /// Folds `b_1 - 1/(b_2 - 1/(...))` back into a fraction.
    pub fn value(&self) -> Ratio<i64> {
        let mut it = self.entries.iter().rev();
        let mut x = Ratio::from_integer(*it.next().expect("nonempty"));
        for b in it {
            x = Ratio::from_integer(*b) - x.recip();
        }
        x
    }
}

/// Hirzebruch-Jung expansion of `n/k`.
pub fn hj(n: i64, k: i64) -> Result<HjExpansion, ContFracError> {
    let in_range = (0 < k && k < n) || (k == 1 && n >= 1);
    if !in_range {
        return Err(ContFracError::HjRange { n, k });
    }
    if n.gcd(&k) != 1 {
        return Err(ContFracError::HjNotCoprime { n, k });
    }
    let mut entries = Vec::new();
    let (mut a, mut b) = (n, k);
    loop {
        let c = Integer::div_ceil(&a, &b);
        entries.push(c);
        let r = c * b - a;
        if r == 0 {
            break;
        }
        (a, b) = (b, r);
    }
    Ok(HjExpansion {
        numerator: n,
        denominator: k,
        entries,
    })
}

/// One row `i` of the Euclidean table: `kappa = a_1 r_1 + r_2`, ...,
/// `r_{w-1} = a_w r_w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EuclidRow {
    pub kappa: i64,
    pub a: Vec<i64>,
    pub r: Vec<i64>,
}

impl EuclidRow {
    pub fn w(&self) -> usize {
        self.a.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EuclidTable {
    pub m: i64,
    pub exponents: Vec<i64>,
    pub rows: Vec<EuclidRow>,
}

/// Checks `m < k_1 < ... < k_s` and the strictly decreasing gcd chain.
pub fn check_branch(m: i64, exponents: &[i64]) -> Result<(), ContFracError> {
    if m < 2 {
        return Err(ContFracError::Multiplicity(m));
    }
    if exponents.is_empty() {
        return Err(ContFracError::Empty);
    }
    let mut prev = m;
    let mut g = m;
    for (idx, &k) in exponents.iter().enumerate() {
        if k <= prev {
            return Err(ContFracError::NotIncreasing { index: idx + 1 });
        }
        let g2 = g.gcd(&k);
        if g2 == g {
            return Err(ContFracError::GcdStalls { index: idx + 1, gcd: g });
        }
        prev = k;
        g = g2;
    }
    if g != 1 {
        return Err(ContFracError::GcdNotOne(g));
    }
    Ok(())
}

pub fn euclid_table(m: i64, exponents: &[i64]) -> Result<EuclidTable, ContFracError> {
    check_branch(m, exponents)?;
    let mut rows = Vec::with_capacity(exponents.len());
    let mut prev_k = 0;
    let mut r1 = m;
    for &k in exponents {
        let kappa = k - prev_k;
        let mut a = Vec::new();
        let mut r = vec![r1];
        let (mut num, mut den) = (kappa, r1);
        loop {
            let (q, rem) = num.div_rem(&den);
            a.push(q);
            if rem == 0 {
                break;
            }
            r.push(rem);
            (num, den) = (den, rem);
        }
        r1 = *r.last().unwrap();
        rows.push(EuclidRow { kappa, a, r });
        prev_k = k;
    }
    Ok(EuclidTable {
        m,
        exponents: exponents.to_vec(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hj_examples() {
        assert_eq!(hj(7, 1).unwrap().entries, vec![7]);
        assert_eq!(hj(5, 2).unwrap().entries, vec![3, 2]);
        assert_eq!(hj(5, 3).unwrap().entries, vec![2, 3]);
        assert_eq!(hj(3, 2).unwrap().entries, vec![2, 2]);
        assert!(matches!(hj(6, 4), Err(ContFracError::HjNotCoprime { .. })));
        assert!(matches!(hj(3, 5), Err(ContFracError::HjRange { .. })));
    }

    #[test]
    fn euclid_examples() {
        let t = euclid_table(2, &[3]).unwrap();
        assert_eq!(t.rows[0], EuclidRow { kappa: 3, a: vec![1, 2], r: vec![2, 1] });
        let t = euclid_table(2, &[5]).unwrap();
        assert_eq!(t.rows[0], EuclidRow { kappa: 5, a: vec![2, 2], r: vec![2, 1] });
        let t = euclid_table(4, &[6, 7]).unwrap();
        assert_eq!(t.rows[0], EuclidRow { kappa: 6, a: vec![1, 2], r: vec![4, 2] });
        assert_eq!(t.rows[1], EuclidRow { kappa: 1, a: vec![0, 2], r: vec![2, 1] });
    }

    #[test]
    fn euclid_rejects_bad_chains() {
        assert_eq!(euclid_table(4, &[6, 8]), Err(ContFracError::GcdStalls { index: 2, gcd: 2 }));
        assert_eq!(euclid_table(4, &[6]), Err(ContFracError::GcdNotOne(2)));
        assert_eq!(euclid_table(3, &[2]), Err(ContFracError::NotIncreasing { index: 1 }));
        assert_eq!(euclid_table(1, &[2]), Err(ContFracError::Multiplicity(1)));
    }

    fn coprime_pair() -> impl Strategy<Value = (i64, i64)> {
        (2i64..=500)
            .prop_flat_map(|q| (1..q, Just(q)))
            .prop_filter("coprime", |(p, q)| p.gcd(q) == 1)
    }

    proptest! {
        #[test]
        fn hj_reconstructs((p, q) in coprime_pair()) {
            for k in [p, q - p] {
                let e = hj(q, k).unwrap();
                prop_assert!(e.entries.iter().all(|&b| b >= 2));
                prop_assert_eq!(e.value(), Ratio::new(q, k));
            }
        }

        #[test]
        fn euclid_identities(m in 2i64..8, k in 3i64..40) {
            prop_assume!(k > m && m.gcd(&k) == 1);
            let t = euclid_table(m, &[k]).unwrap();
            let row = &t.rows[0];
            let mut lhs = row.kappa;
            for j in 0..row.w() {
                let next = row.r.get(j + 1).copied().unwrap_or(0);
                prop_assert_eq!(lhs, row.a[j] * row.r[j] + next);
                prop_assert!(next < row.r[j]);
                lhs = row.r[j];
            }
            prop_assert_eq!(*row.r.last().unwrap(), 1);
        }
    }
}
