//! Liftable jets of `xz = y^c` over `F_q`, by exhaustive search.

use rayon::prelude::*;
use serde::Serialize;

use super::fp::is_prime;
use super::OracleError;

pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct JetCountRequest {
    pub c: u32,
    pub n: usize,
    pub q: u64,
    /// Lifting depth `M >= n`.
    pub depth: usize,
    pub budget: u128,
}

impl JetCountRequest {
    /// Uses depth `n + 3`, where the small cases are observed to be stable.
    pub fn new(c: u32, n: usize, q: u64) -> Self {
        Self {
            c,
            n,
            q,
            depth: n + 3,
            budget: DEFAULT_BUDGET,
        }
    }

    /// Nominal enumeration size `q^{3M}` for lifting depth `m`.
    pub fn cost(&self, m: usize) -> u128 {
        (self.q as u128).checked_pow(3 * m as u32).unwrap_or(u128::MAX)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct JetCount {
    pub count: u64,
    pub count_next: u64,
    pub depth: usize,
    pub stabilized: bool,
}

struct Search {
    c: u32,
    q: u64,
    depth: usize,
}

impl Search {
    /// Coefficient of `t^k` in `xz - y^c` from levels `1..k`.
    fn coeff(&self, x: &[u64], y: &[u64], z: &[u64], k: usize) -> u64 {
        let q = self.q;
        let mut s = 0u64;
        for i in 1..k {
            s = (s + x[i] * z[k - i]) % q;
        }
        // coefficient of t^k in y^c
        let mut dp = vec![0u64; k + 1];
        dp[0] = 1;
        for _ in 0..self.c {
            let mut nd = vec![0u64; k + 1];
            for (a, &da) in dp.iter().enumerate() {
                if da == 0 {
                    continue;
                }
                for i in 1..=(k - a) {
                    if y[i] != 0 {
                        nd[a + i] = (nd[a + i] + da * y[i]) % q;
                    }
                }
            }
            dp = nd;
        }
        (s + q - dp[k]) % q
    }

    /// Can levels `level..` be chosen so that all coefficients up to
    /// `t^depth` vanish? Levels `< level` are fixed and coefficients up to
    /// `t^{level-1}` already checked.
    fn extend(&self, x: &mut [u64], y: &mut [u64], z: &mut [u64], level: usize) -> bool {
        // the t^k coefficient only involves levels < k, so level M is free
        if level > self.depth {
            return true;
        }
        if self.coeff(x, y, z, level) != 0 {
            return false;
        }
        if level == self.depth {
            return true;
        }
        let q = self.q;
        for a in 0..q {
            for b in 0..q {
                for d in 0..q {
                    x[level] = a;
                    y[level] = b;
                    z[level] = d;
                    if self.extend(x, y, z, level + 1) {
                        x[level] = 0;
                        y[level] = 0;
                        z[level] = 0;
                        return true;
                    }
                }
            }
        }
        x[level] = 0;
        y[level] = 0;
        z[level] = 0;
        false
    }

    fn count(&self, n: usize) -> u64 {
        let q = self.q;
        let total = q.pow(3 * n as u32);
        (0..total)
            .into_par_iter()
            .filter(|&code| {
                let len = self.depth + 2;
                let (mut x, mut y, mut z) = (vec![0u64; len], vec![0u64; len], vec![0u64; len]);
                let mut rest = code;
                for lvl in 1..=n {
                    x[lvl] = rest % q;
                    rest /= q;
                    y[lvl] = rest % q;
                    rest /= q;
                    z[lvl] = rest % q;
                    rest /= q;
                }
                // coefficients fixed by the prefix alone
                for k in 2..=n.min(self.depth) {
                    if self.coeff(&x, &y, &z, k) != 0 {
                        return false;
                    }
                }
                self.extend(&mut x, &mut y, &mut z, n + 1)
            })
            .count() as u64
    }
}

/// Number of `n`-jets (origin fixed at 0) extending to solutions of
/// `xz = y^c` modulo `t^{M+1}`, at depth `M` and `M + 1`.
pub fn liftable_jet_count(req: &JetCountRequest) -> Result<JetCount, OracleError> {
    if req.c < 2 {
        return Err(OracleError::Exponent(req.c));
    }
    if !is_prime(req.q) {
        return Err(OracleError::NotPrime(req.q));
    }
    if req.depth < req.n {
        return Err(OracleError::Depth { depth: req.depth, n: req.n });
    }
    let need = req.cost(req.depth + 1);
    if need > req.budget {
        return Err(OracleError::Budget { need, budget: req.budget });
    }
    let at = |depth| {
        Search {
            c: req.c,
            q: req.q,
            depth,
        }
        .count(req.n)
    };
    let count = at(req.depth);
    let count_next = at(req.depth + 1);
    assert!(count_next <= count, "liftable jet counts must not grow with depth");
    Ok(JetCount {
        count,
        count_next,
        depth: req.depth,
        stabilized: count == count_next,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(c: u32, n: usize, q: u64) -> JetCount {
        liftable_jet_count(&JetCountRequest::new(c, n, q)).unwrap()
    }

    #[test]
    fn spot_values() {
        assert_eq!(count(3, 1, 2).count, 5);
        assert_eq!(count(4, 1, 2).count, 6);
        assert_eq!(count(2, 1, 2).count, 4);
        for c in 2..=4 {
            assert_eq!(count(c, 0, 3).count, 1);
        }
    }

    #[test]
    fn level_one_closed_forms() {
        // x_1 z_1 = 0 for c >= 3; x_1 z_1 = y_1^2 for c = 2
        for q in [2u64, 3, 5] {
            let count = |c, n, q| liftable_jet_count(&JetCountRequest { depth: 3, ..JetCountRequest::new(c, n, q) }).unwrap();
            assert_eq!(count(3, 1, q).count, 2 * q * q - 2 * q + 1);
            assert_eq!(count(4, 1, q).count, 2 * q * q - q);
            assert_eq!(count(2, 1, q).count, q * q);
        }
    }

    #[test]
    fn depth_monotone() {
        let mut prev = u64::MAX;
        for depth in 1..=5 {
            let r = liftable_jet_count(&JetCountRequest { depth, ..JetCountRequest::new(3, 1, 2) }).unwrap();
            assert!(r.count <= prev);
            prev = r.count;
        }
    }

    #[test]
    fn rejects() {
        let big = JetCountRequest { budget: 10, ..JetCountRequest::new(3, 2, 3) };
        assert!(matches!(liftable_jet_count(&big), Err(OracleError::Budget { .. })));
        let np = JetCountRequest::new(3, 1, 4);
        assert_eq!(liftable_jet_count(&np), Err(OracleError::NotPrime(4)));
        let shallow = JetCountRequest { depth: 1, ..JetCountRequest::new(3, 2, 2) };
        assert_eq!(liftable_jet_count(&shallow), Err(OracleError::Depth { depth: 1, n: 2 }));
    }
}
