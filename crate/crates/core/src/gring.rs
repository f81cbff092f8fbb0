//! Laurent polynomials in `L` and rational series in `T` whose denominators
//! are products of factors `(1 - L^a T^b)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GringError {
    #[error("factor (1 - L^0*T^0) is identically zero")]
    ZeroFactor,
    #[error("series has constant denominator factors {0:?}; its T-expansion leaves Z[L, L^-1]")]
    ConstantFactors(Vec<(i64, u32)>),
    #[error("specialization makes factor (1 - L^{a}) vanish at L = {q}")]
    VanishingFactor { a: i64, q: i64 },
    #[error("malformed series json: {0}")]
    Json(String),
}

/// Exact Laurent polynomial: exponent of `L` -> nonzero integer coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// `L^e`.
    pub fn l_pow(e: i64) -> Self {
        Self::monomial(1, e)
    }

    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// Builds from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I, C>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(e, c.into());
        }
        p
    }

    /// `1 + L + ... + L^t`, the class of projective t-space.
    pub fn projective(t: u32) -> Self {
        Self::from_terms((0..=t as i64).map(|e| (e, 1)))
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Multiplies by `L^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// True iff no negative power of `L` occurs.
    pub fn is_in_zl(&self) -> bool {
        self.min_exp().is_none_or(|e| e >= 0)
    }

    /// Value at `L = q`.
    pub fn eval(&self, q: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let qe = if *e >= 0 {
                num_traits::pow(q.clone(), *e as usize)
            } else {
                num_traits::pow(q.recip(), e.unsigned_abs() as usize)
            };
            acc += qe * BigRational::from_integer(c.clone());
        }
        acc
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if *e == 0 {
                write!(f, "{a}")?;
                continue;
            }
            if !a.is_one() {
                write!(f, "{a}*")?;
            }
            if *e == 1 {
                write!(f, "L")?;
            } else {
                write!(f, "L^{e}")?;
            }
        }
        Ok(())
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident :: $m:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t { $tr::$m(&self, &rhs) }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, rhs: &'a $t) -> $t { $tr::$m(&self, rhs) }
        }
    )*};
}
forward_owned!(LaurentPoly, Add::add, Sub::sub, Mul::mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// Polynomial in `T` with Laurent coefficients, dense by T-degree.
type TPoly = Vec<LaurentPoly>;

fn tpoly_trim(p: &mut TPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn tpoly_add(x: &[LaurentPoly], y: &[LaurentPoly]) -> TPoly {
    let n = x.len().max(y.len());
    let mut out: TPoly = (0..n)
        .map(|j| match (x.get(j), y.get(j)) {
            (Some(a), Some(b)) => a + b,
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (None, None) => unreachable!(),
        })
        .collect();
    tpoly_trim(&mut out);
    out
}

fn tpoly_mul(x: &[LaurentPoly], y: &[LaurentPoly]) -> TPoly {
    if x.is_empty() || y.is_empty() {
        return Vec::new();
    }
    let mut out = vec![LaurentPoly::zero(); x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            if !b.is_zero() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
    }
    tpoly_trim(&mut out);
    out
}

/// Expanded form of `(1 - L^a T^b)`.
fn factor_poly(f: Factor) -> TPoly {
    let b = f.b as usize;
    let mut p = vec![LaurentPoly::zero(); b + 1];
    p[0] = LaurentPoly::one();
    p[b] = &p[b] - &LaurentPoly::l_pow(f.a);
    tpoly_trim(&mut p);
    p
}

/// Exact division by `(1 - L^a T^b)` with `b >= 1`, if it divides.
fn tpoly_div_factor(p: &[LaurentPoly], f: Factor) -> Option<TPoly> {
    let b = f.b as usize;
    debug_assert!(b >= 1);
    if p.is_empty() {
        return Some(Vec::new());
    }
    if p.len() <= b {
        return None;
    }
    let u = LaurentPoly::l_pow(f.a);
    let qlen = p.len() - b;
    let mut q: TPoly = Vec::with_capacity(qlen);
    for j in 0..p.len() {
        let mut c = p[j].clone();
        if j >= b {
            c = &c + &(&u * &q[j - b]);
        }
        if j < qlen {
            q.push(c);
        } else if !c.is_zero() {
            return None;
        }
    }
    Some(q)
}

/// Denominator factor `(1 - L^a T^b)`. Ordered by `(b, a)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Factor {
    pub b: u32,
    pub a: i64,
}

impl Factor {
    pub fn new(a: i64, b: u32) -> Self {
        Self { b, a }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            write!(f, "(1 - L^{})", self.a)
        } else {
            write!(f, "(1 - L^{}*T^{})", self.a, self.b)
        }
    }
}

/// `num(T) / prod (1 - L^a T^b)`.
///
/// Factors with `b = 0` (constants `1 - L^a`, `a != 0`) are allowed so that
/// T-free integrals fit the same type; such series cannot be T-expanded over
/// `Z[L, L^-1]` but still compare and specialize exactly.
#[derive(Clone, Debug, Default)]
pub struct RationalSeries {
    num: TPoly,
    den: BTreeMap<Factor, u32>,
}

impl RationalSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_lp(LaurentPoly::one())
    }

    pub fn from_lp(c: LaurentPoly) -> Self {
        Self::polynomial(vec![c])
    }

    pub fn polynomial(mut num: Vec<LaurentPoly>) -> Self {
        tpoly_trim(&mut num);
        Self {
            num,
            den: BTreeMap::new(),
        }
    }

    /// `c * T^j`.
    pub fn term(c: LaurentPoly, j: usize) -> Self {
        let mut num = vec![LaurentPoly::zero(); j];
        num.push(c);
        Self::polynomial(num)
    }

    /// `L^a T^b` as a monomial series.
    pub fn monomial(a: i64, b: usize) -> Self {
        Self::term(LaurentPoly::l_pow(a), b)
    }

    /// `num / prod (1 - L^a T^b)`; `den` lists `(a, b)` pairs with repeats.
    pub fn new<I>(num: Vec<LaurentPoly>, den: I) -> Result<Self, GringError>
    where
        I: IntoIterator<Item = (i64, u32)>,
    {
        let mut s = Self::polynomial(num);
        for (a, b) in den {
            if a == 0 && b == 0 {
                return Err(GringError::ZeroFactor);
            }
            *s.den.entry(Factor::new(a, b)).or_insert(0) += 1;
        }
        Ok(s.reduced())
    }

    /// `1 / (1 - L^a T^b)`.
    pub fn geometric(a: i64, b: u32) -> Self {
        Self::new(vec![LaurentPoly::one()], [(a, b)]).expect("b >= 1 or a != 0")
    }

    pub fn numerator(&self) -> &[LaurentPoly] {
        &self.num
    }

    /// Denominator factors with multiplicity, sorted by `(b, a)`.
    pub fn denominator(&self) -> Vec<Factor> {
        self.den
            .iter()
            .flat_map(|(f, m)| std::iter::repeat_n(*f, *m as usize))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    fn constant_factors(&self) -> Vec<(i64, u32)> {
        self.den
            .iter()
            .filter(|(f, _)| f.b == 0)
            .map(|(f, m)| (f.a, *m))
            .collect()
    }

    /// Cancels denominator factors that divide the numerator exactly.
    fn reduced(mut self) -> Self {
        if self.num.is_empty() {
            self.den.clear();
            return self;
        }
        let factors: Vec<Factor> = self.den.keys().copied().filter(|f| f.b >= 1).collect();
        for f in factors {
            while self.den.get(&f).copied().unwrap_or(0) > 0 {
                match tpoly_div_factor(&self.num, f) {
                    Some(q) => {
                        self.num = q;
                        let m = self.den.get_mut(&f).unwrap();
                        *m -= 1;
                        if *m == 0 {
                            self.den.remove(&f);
                        }
                    }
                    None => break,
                }
            }
        }
        self
    }

    fn den_poly(den: &BTreeMap<Factor, u32>) -> TPoly {
        let mut p = vec![LaurentPoly::one()];
        for (f, m) in den {
            for _ in 0..*m {
                p = tpoly_mul(&p, &factor_poly(*f));
            }
        }
        p
    }

    /// Multiplies by `L^k`.
    pub fn shift_l(&self, k: i64) -> Self {
        Self {
            num: self.num.iter().map(|c| c.shift(k)).collect(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut num: TPoly = self.num.iter().map(|x| x * c).collect();
        tpoly_trim(&mut num);
        Self {
            num,
            den: self.den.clone(),
        }
        .reduced()
    }

    /// Replaces `T` by `L^k T`.
    pub fn substitute_t_scale(&self, k: i64) -> Self {
        Self {
            num: self
                .num
                .iter()
                .enumerate()
                .map(|(j, c)| c.shift(k * j as i64))
                .collect(),
            den: self
                .den
                .iter()
                .map(|(f, m)| (Factor::new(f.a + k * f.b as i64, f.b), *m))
                .collect(),
        }
    }

    /// Coefficients of `T^0..=T^order` of the formal expansion.
    pub fn expand(&self, order: usize) -> Result<Vec<LaurentPoly>, GringError> {
        let cf = self.constant_factors();
        if !cf.is_empty() {
            return Err(GringError::ConstantFactors(cf));
        }
        let mut q: Vec<LaurentPoly> = (0..=order)
            .map(|j| self.num.get(j).cloned().unwrap_or_default())
            .collect();
        for (f, m) in &self.den {
            let b = f.b as usize;
            let u = LaurentPoly::l_pow(f.a);
            for _ in 0..*m {
                for j in b..=order {
                    let add = &u * &q[j - b];
                    q[j] = &q[j] + &add;
                }
            }
        }
        Ok(q)
    }

    /// Coefficients of `T^0..=T^order` after setting `L = q`.
    ///
    /// Substitutes first and expands over the rationals, so it is an
    /// independent route from `expand` followed by evaluation.
    pub fn specialize(&self, q: i64, order: usize) -> Result<Vec<BigRational>, GringError> {
        let qr = BigRational::from_integer(q.into());
        let mut s: Vec<BigRational> = (0..=order)
            .map(|j| {
                self.num
                    .get(j)
                    .map(|c| c.eval(&qr))
                    .unwrap_or_else(BigRational::zero)
            })
            .collect();
        for (f, m) in &self.den {
            let u = LaurentPoly::l_pow(f.a).eval(&qr);
            for _ in 0..*m {
                if f.b == 0 {
                    let d = BigRational::one() - &u;
                    if d.is_zero() {
                        return Err(GringError::VanishingFactor { a: f.a, q });
                    }
                    for c in s.iter_mut() {
                        *c = &*c / &d;
                    }
                    continue;
                }
                let b = f.b as usize;
                for j in b..=order {
                    let add = &u * &s[j - b];
                    s[j] += add;
                }
            }
        }
        Ok(s)
    }

    /// Like `specialize` but asserts every coefficient is an integer.
    pub fn specialize_int(&self, q: i64, order: usize) -> Result<Vec<BigInt>, GringError> {
        Ok(self
            .specialize(q, order)?
            .into_iter()
            .map(|c| {
                assert!(c.is_integer(), "non-integral coefficient {c} at L = {q}");
                c.to_integer()
            })
            .collect())
    }

    pub fn to_json(&self) -> Value {
        let num: Vec<Value> = self
            .num
            .iter()
            .map(|c| {
                Value::Array(
                    c.terms()
                        .map(|(e, k)| json!([e, bigint_json(k)]))
                        .collect(),
                )
            })
            .collect();
        let den: Vec<Value> = self
            .denominator()
            .iter()
            .map(|f| json!([f.a, f.b]))
            .collect();
        json!({ "num": num, "den": den })
    }

    pub fn from_json(v: &Value) -> Result<Self, GringError> {
        let bad = |m: &str| GringError::Json(m.to_string());
        let num = v
            .get("num")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing num"))?
            .iter()
            .map(|deg| {
                let terms = deg.as_array().ok_or_else(|| bad("num entry not an array"))?;
                let mut lp = LaurentPoly::zero();
                for t in terms {
                    let e = t.get(0).and_then(Value::as_i64).ok_or_else(|| bad("exponent"))?;
                    let c = t.get(1).and_then(json_bigint).ok_or_else(|| bad("coefficient"))?;
                    lp.add_term(e, c);
                }
                Ok(lp)
            })
            .collect::<Result<Vec<_>, GringError>>()?;
        let den = v
            .get("den")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing den"))?
            .iter()
            .map(|f| {
                let a = f.get(0).and_then(Value::as_i64).ok_or_else(|| bad("factor a"))?;
                let b = f.get(1).and_then(Value::as_u64).ok_or_else(|| bad("factor b"))?;
                Ok((a, b as u32))
            })
            .collect::<Result<Vec<_>, GringError>>()?;
        Self::new(num, den)
    }
}

fn bigint_json(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(v) => json!(v),
        None => json!(c.to_string()),
    }
}

fn json_bigint(v: &Value) -> Option<BigInt> {
    if let Some(i) = v.as_i64() {
        return Some(i.into());
    }
    v.as_str()?.parse().ok()
}

impl PartialEq for RationalSeries {
    fn eq(&self, other: &Self) -> bool {
        let mut dx = self.den.clone();
        let mut dy = other.den.clone();
        for (f, m) in &self.den {
            if let Some(n) = other.den.get(f) {
                let c = (*m).min(*n);
                *dx.get_mut(f).unwrap() -= c;
                *dy.get_mut(f).unwrap() -= c;
            }
        }
        dx.retain(|_, m| *m > 0);
        dy.retain(|_, m| *m > 0);
        tpoly_mul(&self.num, &Self::den_poly(&dy)) == tpoly_mul(&other.num, &Self::den_poly(&dx))
    }
}

impl Eq for RationalSeries {}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        if self.num.is_empty() {
            write!(f, "0")?;
        }
        let mut first = true;
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if j == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})*T^{j}")?;
            }
        }
        write!(f, ") / (")?;
        let den = self.denominator();
        if den.is_empty() {
            write!(f, "1")?;
        }
        for (i, fac) in den.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{fac}")?;
        }
        write!(f, ")")
    }
}

impl<'a> Add<&'a RationalSeries> for &'a RationalSeries {
    type Output = RationalSeries;
    fn add(self, rhs: &RationalSeries) -> RationalSeries {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let mut lcm = self.den.clone();
        for (f, m) in &rhs.den {
            let slot = lcm.entry(*f).or_insert(0);
            *slot = (*slot).max(*m);
        }
        let missing = |d: &BTreeMap<Factor, u32>| -> BTreeMap<Factor, u32> {
            lcm.iter()
                .filter_map(|(f, m)| {
                    let k = m - d.get(f).copied().unwrap_or(0);
                    (k > 0).then_some((*f, k))
                })
                .collect()
        };
        let x = tpoly_mul(&self.num, &RationalSeries::den_poly(&missing(&self.den)));
        let y = tpoly_mul(&rhs.num, &RationalSeries::den_poly(&missing(&rhs.den)));
        RationalSeries {
            num: tpoly_add(&x, &y),
            den: lcm,
        }
        .reduced()
    }
}

impl Neg for &RationalSeries {
    type Output = RationalSeries;
    fn neg(self) -> RationalSeries {
        RationalSeries {
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalSeries {
    type Output = RationalSeries;
    fn neg(self) -> RationalSeries {
        -&self
    }
}

impl<'a> Sub<&'a RationalSeries> for &'a RationalSeries {
    type Output = RationalSeries;
    fn sub(self, rhs: &RationalSeries) -> RationalSeries {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalSeries> for &'a RationalSeries {
    type Output = RationalSeries;
    fn mul(self, rhs: &RationalSeries) -> RationalSeries {
        let num = tpoly_mul(&self.num, &rhs.num);
        if num.is_empty() {
            return RationalSeries::zero();
        }
        let mut den = self.den.clone();
        for (f, m) in &rhs.den {
            *den.entry(*f).or_insert(0) += m;
        }
        RationalSeries { num, den }.reduced()
    }
}

forward_owned!(RationalSeries, Add::add, Sub::sub, Mul::mul);

impl std::iter::Sum for RationalSeries {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for RationalSeries {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |a, b| a * b)
    }
}

impl From<LaurentPoly> for RationalSeries {
    fn from(c: LaurentPoly) -> Self {
        Self::from_lp(c)
    }
}

/// Shorthand for `sum c_i L^{e_i}` from `(e, c)` pairs.
pub fn lp(pairs: &[(i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(pairs.iter().copied())
}
