//! Exact arithmetic in Z[ξ_n] for prime conductor n.
//!
//! Elements are stored in the reduced power basis `1, ξ, …, ξ^{n-2}`; the
//! relation `ξ^{n-1} = -(1 + ξ + … + ξ^{n-2})` makes the representation
//! canonical, so equality is coefficient equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycInt {
    n: u64,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(n: u64) -> Self {
        assert!(is_prime(n), "conductor {n} must be prime");
        CycInt {
            n,
            coeffs: vec![BigInt::zero(); (n - 1) as usize],
        }
    }

    pub fn from_int(n: u64, c: impl Into<BigInt>) -> Self {
        let mut out = Self::zero(n);
        out.coeffs[0] = c.into();
        out
    }

    /// ξ_n^k for any integer k.
    pub fn xi_pow(n: u64, k: i64) -> Self {
        let mut full = vec![BigInt::zero(); n as usize];
        full[k.rem_euclid(n as i64) as usize] = BigInt::one();
        Self::from_full(n, full)
    }

    /// Σ_t counts[t] ξ^t over all `n` exponents, reduced.
    pub fn from_exponent_counts<T: Copy + Into<BigInt>>(n: u64, counts: &[T]) -> Self {
        assert_eq!(counts.len(), n as usize, "need one count per exponent");
        Self::from_full(n, counts.iter().map(|&c| c.into()).collect())
    }

    /// Builds from reduced-basis coefficients (length n-1).
    pub fn from_coeffs(n: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        if !is_prime(n) {
            return Err(Error::NotPrime(n));
        }
        if coeffs.len() != (n - 1) as usize {
            return Err(Error::ParseError(format!(
                "expected {} coefficients for conductor {n}, got {}",
                n - 1,
                coeffs.len()
            )));
        }
        Ok(CycInt { n, coeffs })
    }

    fn from_full(n: u64, mut full: Vec<BigInt>) -> Self {
        let last = full.pop().expect("conductor is at least 2");
        for c in full.iter_mut() {
            *c -= &last;
        }
        CycInt { n, coeffs: full }
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if it is rational.
    pub fn as_integer(&self) -> Option<&BigInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn same_conductor(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::ConductorMismatch(self.n, other.n))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_conductor(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycInt { n: self.n, coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_conductor(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycInt { n: self.n, coeffs })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_conductor(other)?;
        let n = self.n as usize;
        let mut full = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                full[(i + j) % n] += a * b;
            }
        }
        Ok(Self::from_full(self.n, full))
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        assert_eq!(self.n, other.n, "conductor mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        CycInt {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * &k).collect(),
        }
    }

    /// Galois action σ_s : ξ ↦ ξ^s.
    pub fn conjugate(&self, s: i64) -> Result<Self> {
        let n = self.n as i64;
        if s.rem_euclid(n) == 0 {
            return Err(Error::NotCoprime { a: s, n: self.n });
        }
        let mut full = vec![BigInt::zero(); self.n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let target = (i as i64 * s).rem_euclid(n) as usize;
            full[target] += c;
        }
        Ok(Self::from_full(self.n, full))
    }

    /// Complex conjugation, σ_{-1}.
    pub fn complex_conjugate(&self) -> Self {
        self.conjugate(-1).expect("-1 is a unit")
    }

    /// Evaluates at ξ_n = e^{2πi/n}.
    pub fn embed_complex(&self) -> Complex64 {
        let n = self.n as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let angle = 2.0 * std::f64::consts::PI * i as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
            })
            .sum()
    }

    /// Largest absolute coefficient, a cheap size measure.
    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match i {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "ξ{}^{i}", self.n)?,
                _ => write!(f, "{mag}·ξ{}^{i}", self.n)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&CycInt> for &CycInt {
            type Output = CycInt;
            fn $method(self, rhs: &CycInt) -> CycInt {
                self.$checked(rhs).expect("conductor mismatch")
            }
        }
        impl $trait<CycInt> for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: CycInt) -> CycInt {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

fn bigint_to_json(c: &BigInt) -> serde_json::Value {
    match c.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(c.to_string()),
    }
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<serde_json::Value> = self.coeffs.iter().map(bigint_to_json).collect();
        let mut st = serializer.serialize_struct("CycInt", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for CycInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: u64,
            coeffs: Vec<serde_json::Value>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|v| match v {
                serde_json::Value::Number(num) => num
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| de::Error::custom("coefficient is not an integer")),
                serde_json::Value::String(s) => s
                    .parse::<BigInt>()
                    .map_err(|e| de::Error::custom(e.to_string())),
                _ => Err(de::Error::custom("coefficient must be a number or string")),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CycInt::from_coeffs(raw.n, coeffs).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn xi_squared_in_conductor_three() {
        let xi = CycInt::xi_pow(3, 1);
        let sq = &xi * &xi;
        assert_eq!(sq.coeffs(), ints(&[-1, -1]).as_slice());
        assert_eq!(sq, CycInt::xi_pow(3, 2));
    }

    #[test]
    fn zero_annihilates_and_roots_vanish() {
        let a = CycInt::from_int(5, 1) + CycInt::xi_pow(5, 1);
        assert!((&a * &CycInt::zero(5)).is_zero());
        let total = (0..7).fold(CycInt::zero(7), |acc, k| acc + CycInt::xi_pow(7, k));
        assert!(total.is_zero());
    }

    #[test]
    fn conductor_mismatch_is_reported() {
        let a = CycInt::xi_pow(5, 1);
        let b = CycInt::xi_pow(7, 1);
        assert_eq!(a.try_add(&b), Err(Error::ConductorMismatch(5, 7)));
        assert_eq!(a.try_mul(&b), Err(Error::ConductorMismatch(5, 7)));
    }

    #[test]
    fn galois_action_examples() {
        assert_eq!(
            CycInt::xi_pow(5, 1).conjugate(2).unwrap(),
            CycInt::xi_pow(5, 2)
        );
        assert_eq!(
            CycInt::from_int(5, 7).conjugate(3).unwrap(),
            CycInt::from_int(5, 7)
        );
        let a = CycInt::from_coeffs(5, ints(&[3, -1, 4, 2])).unwrap();
        assert_eq!(a.conjugate(1).unwrap(), a);
        assert!(matches!(a.conjugate(10), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn embedding_examples() {
        let z = CycInt::xi_pow(3, 1).embed_complex();
        assert!((z.re + 0.5).abs() < 1e-12);
        assert!((z.im - 0.866_025_403_784_438_6).abs() < 1e-12);
        assert_eq!(CycInt::zero(7).embed_complex(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn json_shape() {
        let a = CycInt::from_coeffs(3, ints(&[4, -2])).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"n":3,"coeffs":[4,-2]}"#);
        let back: CycInt = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<CycInt>(r#"{"n":3,"coeffs":[1]}"#).is_err());
    }

    fn arb_cyc(n: u64) -> impl Strategy<Value = CycInt> {
        proptest::collection::vec(-1000i64..1000, (n - 1) as usize)
            .prop_map(move |v| CycInt::from_coeffs(n, ints(&v)).unwrap())
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_cyc(7), b in arb_cyc(7), c in arb_cyc(7)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
        }

        #[test]
        fn conjugation_is_a_ring_automorphism(a in arb_cyc(5), b in arb_cyc(5), s in 1i64..5, t in 1i64..5) {
            let ab = &a * &b;
            prop_assert_eq!(ab.conjugate(s).unwrap(), &a.conjugate(s).unwrap() * &b.conjugate(s).unwrap());
            prop_assert_eq!(
                a.conjugate(s).unwrap().conjugate(t).unwrap(),
                a.conjugate(s * t % 5).unwrap()
            );
        }

        #[test]
        fn embedding_is_multiplicative(a in arb_cyc(11), b in arb_cyc(11)) {
            let lhs = (&a * &b).embed_complex();
            let rhs = a.embed_complex() * b.embed_complex();
            let bound = 1e-9 * (1.0 + a.embed_complex().norm() * b.embed_complex().norm()) + 1e-6;
            prop_assert!((lhs - rhs).norm() < bound);
        }

        #[test]
        fn zero_iff_embedding_vanishes(a in arb_cyc(5)) {
            prop_assert_eq!(a.is_zero(), a.embed_complex().norm() < 1e-6);
        }
    }
}
