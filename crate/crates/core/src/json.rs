//! Deterministic JSON helpers: fixed 12-significant-digit floats and complex pairs.

use num_complex::Complex64;
use serde::de::Deserializer;
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to 12 significant digits; negative zero becomes zero.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let s = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let r: f64 = s.parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn complex_pair(z: Complex64) -> [f64; 2] {
    [round_sig(z.re), round_sig(z.im)]
}

/// A complex matrix serialized as nested `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(pub Vec<Vec<Complex64>>);

impl ComplexMatrix {
    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = self
            .0
            .iter()
            .map(|row| row.iter().map(|&z| complex_pair(z)).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(deserializer)?;
        Ok(ComplexMatrix(
            rows.into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|[re, im]| Complex64::new(re, im))
                        .collect()
                })
                .collect(),
        ))
    }
}
