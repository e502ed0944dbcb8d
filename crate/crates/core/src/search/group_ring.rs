use std::fmt;

use crate::error::{Error, Result};

/// An element of Z[Z_N], stored as its coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElem {
    coeffs: Vec<i64>,
}

impl GroupRingElem {
    pub fn zero(n: usize) -> Self {
        GroupRingElem { coeffs: vec![0; n] }
    }

    /// The basis element `[i]`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut out = Self::zero(n);
        out.coeffs[i % n] = 1;
        out
    }

    /// Σ_{i ∈ set} [i].
    pub fn from_set(n: usize, set: &[usize]) -> Self {
        let mut out = Self::zero(n);
        for &i in set {
            out.coeffs[i % n] += 1;
        }
        out
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        GroupRingElem { coeffs }
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn scale(&self, k: i64) -> Self {
        GroupRingElem {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check(self, other)?;
        Ok(GroupRingElem {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1))
    }
}

fn check(a: &GroupRingElem, b: &GroupRingElem) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::ModulusMismatch(a.n(), b.n()));
    }
    Ok(())
}

/// Cyclic convolution in Z[Z_N].
pub fn gr_mul(a: &GroupRingElem, b: &GroupRingElem) -> Result<GroupRingElem> {
    check(a, b)?;
    let n = a.n();
    let mut out = vec![0i64; n];
    for (i, &x) in a.coeffs.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.coeffs.iter().enumerate() {
            out[(i + j) % n] += x * y;
        }
    }
    Ok(GroupRingElem { coeffs: out })
}

/// `X^{(-1)}`: `[i] ↦ [-i]`.
pub fn gr_involution(a: &GroupRingElem) -> GroupRingElem {
    let n = a.n();
    let mut out = vec![0i64; n];
    for (i, &x) in a.coeffs.iter().enumerate() {
        out[(n - i) % n] = x;
    }
    GroupRingElem { coeffs: out }
}

impl fmt::Debug for GroupRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, c)| format!("{c}[{i}]"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}
