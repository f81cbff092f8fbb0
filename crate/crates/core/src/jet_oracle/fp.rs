//! Truncated power series over a prime field.

/// Power series over `F_p` known to precision `c.len()` (coefficients of
/// `s^0 .. s^{len-1}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpSeries {
    p: u64,
    c: Vec<u64>,
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl FpSeries {
    pub fn zero(p: u64, prec: usize) -> Self {
        Self { p, c: vec![0; prec] }
    }

    /// From `(exponent, coefficient)` pairs; terms beyond `prec` are dropped.
    pub fn from_sparse(p: u64, terms: &[(usize, i64)], prec: usize) -> Self {
        let mut s = Self::zero(p, prec);
        for &(e, v) in terms {
            if e < prec {
                s.c[e] = (s.c[e] + v.rem_euclid(p as i64) as u64) % p;
            }
        }
        s
    }

    pub fn prec(&self) -> usize {
        self.c.len()
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn truncate(&self, prec: usize) -> Self {
        Self {
            p: self.p,
            c: self.c.iter().take(prec).copied().collect(),
        }
    }

    pub fn set(&mut self, i: usize, v: u64) {
        self.c[i] = v % self.p;
    }

    /// Order of vanishing, `None` if zero to the known precision.
    pub fn ord(&self) -> Option<usize> {
        self.c.iter().position(|&v| v != 0)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.prec().min(o.prec());
        Self {
            p: self.p,
            c: (0..n).map(|i| (self.c[i] + self.p - o.c[i]) % self.p).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.prec().min(o.prec());
        Self {
            p: self.p,
            c: (0..n).map(|i| (self.c[i] + o.c[i]) % self.p).collect(),
        }
    }

    pub fn sub_const(&self, v: u64) -> Self {
        let mut out = self.clone();
        if !out.c.is_empty() {
            out.c[0] = (out.c[0] + self.p - v % self.p) % self.p;
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.prec().min(o.prec());
        let mut c = vec![0u64; n];
        for (i, &x) in self.c.iter().enumerate().take(n) {
            if x == 0 {
                continue;
            }
            for (j, &y) in o.c.iter().enumerate().take(n - i) {
                if y != 0 {
                    c[i + j] = (c[i + j] + x * y) % self.p;
                }
            }
        }
        Self { p: self.p, c }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::from_sparse(self.p, &[(0, 1)], self.prec());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self / o` for `ord(self) >= ord(o)`; precision drops by `ord(o)`.
    pub fn div(&self, o: &Self) -> Option<Self> {
        let e = o.ord()?;
        if self.c.iter().take(e).any(|&v| v != 0) {
            return None;
        }
        let n = self.prec().min(o.prec()).saturating_sub(e);
        let a = &self.c[e..];
        let b = &o.c[e..];
        let inv = inv_mod(b[0], self.p);
        let mut r = vec![0u64; n];
        for i in 0..n {
            let mut s = a[i];
            for j in 0..i {
                s = (s + self.p - r[j] * b[i - j] % self.p) % self.p;
            }
            r[i] = s * inv % self.p;
        }
        Some(Self { p: self.p, c: r })
    }

    /// `self(g)` for `g` without constant term.
    pub fn compose(&self, g: &Self) -> Self {
        debug_assert_eq!(g.coeff(0), 0);
        let n = self.prec().min(g.prec());
        let mut r = Self::zero(self.p, n);
        let mut pw = Self::from_sparse(self.p, &[(0, 1)], n);
        for i in 0..n {
            let fi = self.c[i];
            if fi != 0 {
                for j in 0..n {
                    r.c[j] = (r.c[j] + fi * pw.c[j]) % self.p;
                }
            }
            pw = pw.mul(g);
        }
        r
    }

    /// Compositional inverse of a series of order exactly one.
    pub fn revert(&self) -> Option<Self> {
        if self.ord() != Some(1) {
            return None;
        }
        let n = self.prec();
        let inv = inv_mod(self.c[1], self.p);
        let mut g = Self::zero(self.p, n);
        g.c[1] = inv;
        for k in 2..n {
            let comp = self.compose(&g);
            g.c[k] = (self.p - comp.c[k]) % self.p * inv % self.p;
        }
        Some(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let p = 101;
        let a = FpSeries::from_sparse(p, &[(1, 1), (2, 1)], 8);
        let sq = a.mul(&a);
        assert_eq!(sq, FpSeries::from_sparse(p, &[(2, 1), (3, 2), (4, 1)], 8));
        assert_eq!(a.pow(2), sq);
        let q = sq.div(&a).unwrap();
        assert_eq!(q.prec(), 7);
        assert_eq!(q, FpSeries::from_sparse(p, &[(1, 1), (2, 1)], 7));
        assert!(a.div(&sq).is_none());
        assert_eq!(FpSeries::from_sparse(p, &[(0, -1)], 2).coeff(0), 100);
    }

    #[test]
    fn reversion() {
        let p = 101;
        let f = FpSeries::from_sparse(p, &[(1, 3), (2, 5), (4, 7)], 12);
        let g = f.revert().unwrap();
        assert_eq!(f.compose(&g), FpSeries::from_sparse(p, &[(1, 1)], 12));
        assert!(FpSeries::from_sparse(p, &[(2, 1)], 5).revert().is_none());
    }

    #[test]
    fn primes() {
        assert!(is_prime(101) && is_prime(2) && !is_prime(1) && !is_prime(91));
        assert_eq!(inv_mod(3, 7), 5);
    }
}
