//! Laurent polynomials in q with arbitrary precision integer coefficients.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// Dense coefficient vector starting at exponent `low`.
/// Invariant: empty, or first and last coefficients nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c * q^e`
    pub fn monomial(e: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        Self { low: e, coeffs: vec![c] }
    }

    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    /// Builds from (exponent, coefficient) pairs; repeated exponents add up.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (e, c) in terms {
            out += &Self::monomial(e, c);
        }
        out
    }

    fn normalize(mut self) -> Self {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => Self::zero(),
            Some(i) => {
                let last = self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
                self.coeffs.truncate(last + 1);
                self.coeffs.drain(..i);
                self.low += i as i64;
                self
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_degree(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn max_degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        let i = e - self.low;
        if i < 0 || i >= self.coeffs.len() as i64 {
            BigInt::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { low: self.low + e, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self { low: self.low, coeffs: self.coeffs.iter().map(|x| x * c).collect() }.normalize()
    }

    /// The bar involution q -> q^{-1}.
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self { low: -self.max_degree().unwrap(), coeffs }
    }

    /// Keeps only the terms with exponent strictly below `m`.
    pub fn truncate_below(&self, m: i64) -> Self {
        if self.is_zero() || m <= self.low {
            return Self::zero();
        }
        let keep = ((m - self.low) as usize).min(self.coeffs.len());
        Self { low: self.low, coeffs: self.coeffs[..keep].to_vec() }.normalize()
    }

    /// Returns `(c, e)` if the polynomial is the single monomial `c q^e`.
    pub fn as_monomial(&self) -> Option<(BigInt, i64)> {
        (self.coeffs.len() == 1).then(|| (self.coeffs[0].clone(), self.low))
    }

    fn combine(&self, other: &Self, sign: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if sign { other.clone() } else { -other };
        }
        let low = self.low.min(other.low);
        let high = self.max_degree().unwrap().max(other.max_degree().unwrap());
        let mut coeffs = vec![BigInt::zero(); (high - low + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            let slot = &mut coeffs[(other.low - low) as usize + i];
            if sign {
                *slot += c;
            } else {
                *slot -= c;
            }
        }
        Self { low, coeffs }.normalize()
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::monomial(0, c)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.combine(rhs, true)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.combine(rhs, false)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly { low: self.low + rhs.low, coeffs }.normalize()
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$f(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        *self = self.combine(rhs, true);
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        *self = self.combine(rhs, false);
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match (e, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{mag}q^{e}")?,
            }
        }
        Ok(())
    }
}

/// JSON form: `{"exp": "coeff"}` with decimal strings.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<_> = self.terms().collect();
        let mut m = s.serialize_map(Some(terms.len()))?;
        for (e, c) in terms {
            m.serialize_entry(&e.to_string(), &c.to_string())?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = LaurentPoly;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a map from exponent strings to coefficient strings")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<LaurentPoly, A::Error> {
                let mut out = LaurentPoly::zero();
                while let Some((k, v)) = map.next_entry::<String, serde_json::Value>()? {
                    let e: i64 = k.trim().parse().map_err(|_| de::Error::custom(format!("bad exponent {k:?}")))?;
                    let c: BigInt = match &v {
                        serde_json::Value::String(s) => s.trim().parse().ok(),
                        serde_json::Value::Number(n) => n.to_string().parse().ok(),
                        _ => None,
                    }
                    .ok_or_else(|| de::Error::custom(format!("bad coefficient {v}")))?;
                    out += &LaurentPoly::monomial(e, c);
                }
                Ok(out)
            }
        }
        d.deserialize_map(V)
    }
}

/// Symmetric quantum integer `[n] = q^{n-1} + q^{n-3} + ... + q^{1-n}`, with `[-n] = -[n]`.
pub fn q_int(n: i64) -> LaurentPoly {
    if n < 0 {
        return -q_int(-n);
    }
    LaurentPoly::from_terms((0..n).map(|t| (n - 1 - 2 * t, 1)))
}

pub fn q_factorial(n: u64) -> LaurentPoly {
    (1..=n as i64).fold(LaurentPoly::one(), |acc, k| &acc * &q_int(k))
}

/// Quantum binomial, zero unless `0 <= k <= n`.
pub fn q_binom(n: i64, k: i64) -> LaurentPoly {
    if k < 0 || n < 0 || k > n {
        return LaurentPoly::zero();
    }
    let k = k.min(n - k);
    // q-Pascal: [n,k] = q^{-k}[n-1,k] + q^{n-k}[n-1,k-1]
    let mut row = vec![LaurentPoly::one()];
    for m in 1..=n {
        let mut next = Vec::with_capacity(row.len() + 1);
        for j in 0..=(m.min(k)) {
            let a = if j >= 1 { row[(j - 1) as usize].shift(m - j) } else { LaurentPoly::zero() };
            let b = if j < m && (j as usize) < row.len() { row[j as usize].shift(-j) } else { LaurentPoly::zero() };
            next.push(&a + &b);
        }
        row = next;
    }
    row.swap_remove(k as usize)
}

/// Quantum binomial extended to negative upper argument:
/// `[n choose k] = [n][n-1]...[n-k+1] / [k]!` for any integer `n`, `k >= 0`.
pub fn q_binom_signed(n: i64, k: i64) -> LaurentPoly {
    if k < 0 {
        return LaurentPoly::zero();
    }
    if n >= 0 {
        return q_binom(n, k);
    }
    let b = q_binom(-n + k - 1, k);
    if k % 2 == 0 { b } else { -b }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn quantum_integers() {
        assert_eq!(q_int(0), LaurentPoly::zero());
        assert_eq!(q_int(1), LaurentPoly::one());
        assert_eq!(q_int(3), p(&[(2, 1), (0, 1), (-2, 1)]));
        assert_eq!(q_int(-2), p(&[(1, -1), (-1, -1)]));
    }

    #[test]
    fn binomials_small() {
        assert_eq!(q_binom(4, 2), p(&[(4, 1), (2, 1), (0, 2), (-2, 1), (-4, 1)]));
        assert_eq!(q_binom(3, 1), q_int(3));
        assert!(q_binom(2, 3).is_zero());
        assert!(q_binom(-1, 0).is_zero());
        // [n choose k] [k]! [n-k]! = [n]!
        for n in 0..8 {
            for k in 0..=n {
                let lhs = &(&q_binom(n, k) * &q_factorial(k as u64)) * &q_factorial((n - k) as u64);
                assert_eq!(lhs, q_factorial(n as u64), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn signed_binomial_matches_product_formula() {
        // [n choose k] [k]! = [n][n-1]...[n-k+1]
        for n in -6..6i64 {
            for k in 0..5i64 {
                let prod = (0..k).fold(LaurentPoly::one(), |acc, s| &acc * &q_int(n - s));
                assert_eq!(&q_binom_signed(n, k) * &q_factorial(k as u64), prod, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn display_and_json() {
        let x = p(&[(2, 1), (0, -3), (-1, 2)]);
        assert_eq!(x.to_string(), "q^2 - 3 + 2q^-1");
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"-1":"2","0":"-3","2":"1"}"#);
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        let big: LaurentPoly = serde_json::from_str(r#"{"5":"123456789012345678901234567890"}"#).unwrap();
        assert_eq!(big.min_degree(), Some(5));
    }

    #[test]
    fn truncation() {
        let x = p(&[(-1, 1), (0, 1), (3, 1)]);
        assert_eq!(x.truncate_below(3), p(&[(-1, 1), (0, 1)]));
        assert!(x.truncate_below(-1).is_zero());
        assert_eq!(x.truncate_below(10), x);
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        proptest::collection::vec((-6i64..6, -5i64..5), 0..6).prop_map(LaurentPoly::from_terms)
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        }

        #[test]
        fn binomials_bar_invariant(n in 0i64..12, k in 0i64..12) {
            let b = q_binom(n, k);
            prop_assert_eq!(b.bar(), b);
        }

        #[test]
        fn pascal(n in 1i64..12, k in 1i64..12) {
            // [n,k] = q^{-k}[n-1,k] + q^{n-k}[n-1,k-1]
            let rhs = &q_binom(n - 1, k).shift(-k) + &q_binom(n - 1, k - 1).shift(n - k);
            prop_assert_eq!(q_binom(n, k), rhs);
        }
    }
}
