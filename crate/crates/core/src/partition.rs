//! Partitions of Z_N into index sets, each naming a union of cyclotomic classes.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{Error, Result};

/// A partition of Z_N into `d` nonempty index sets `I_1, …, I_d`.
///
/// The trivial relation `{0} ⊂ F_q` is implicit and never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPartition", into = "RawPartition")]
pub struct IndexPartition {
    n: usize,
    parts: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct RawPartition {
    n: usize,
    parts: Vec<Vec<usize>>,
}

impl TryFrom<RawPartition> for IndexPartition {
    type Error = Error;
    fn try_from(raw: RawPartition) -> Result<Self> {
        IndexPartition::new(raw.n, raw.parts)
    }
}

impl From<IndexPartition> for RawPartition {
    fn from(p: IndexPartition) -> Self {
        RawPartition {
            n: p.n,
            parts: p.parts,
        }
    }
}

impl IndexPartition {
    /// Validates and stores the parts in the given order, each sorted.
    pub fn new(n: usize, parts: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::PartitionInvalid("N must be positive".into()));
        }
        let mut seen = vec![false; n];
        let mut sorted_parts = Vec::with_capacity(parts.len());
        for (k, part) in parts.into_iter().enumerate() {
            if part.is_empty() {
                return Err(Error::PartitionInvalid(format!("part {} is empty", k + 1)));
            }
            let mut part = part;
            part.sort_unstable();
            for &i in &part {
                if i >= n {
                    return Err(Error::PartitionInvalid(format!(
                        "index {i} is outside Z_{n}"
                    )));
                }
                if seen[i] {
                    return Err(Error::PartitionInvalid(format!(
                        "index {i} appears in more than one part"
                    )));
                }
                seen[i] = true;
            }
            sorted_parts.push(part);
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::PartitionInvalid(format!(
                "index {missing} is not covered"
            )));
        }
        Ok(IndexPartition {
            n,
            parts: sorted_parts,
        })
    }

    /// The all-singletons partition (the cyclotomic scheme of index N).
    pub fn singletons(n: usize) -> Self {
        IndexPartition {
            n,
            parts: (0..n).map(|i| vec![i]).collect(),
        }
    }

    /// Parses `"0|1,3|2"`: parts separated by `|`, indices by `,`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let parts = text
            .trim()
            .split('|')
            .map(|chunk| {
                chunk
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse::<usize>()
                            .map_err(|e| Error::ParseError(format!("{s:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, parts)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &[usize] {
        &self.parts[i]
    }

    /// Number of nontrivial classes `d`.
    pub fn class_count(&self) -> usize {
        self.parts.len()
    }

    /// `labels[i]` is the (0-based) part containing index `i`.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (k, part) in self.parts.iter().enumerate() {
            for &i in part {
                labels[i] = k;
            }
        }
        labels
    }

    /// Image under the index map i ↦ u·i + v (u must be a unit mod N).
    pub fn affine_image(&self, u: usize, v: usize) -> Result<Self> {
        if gcd(u as u64, self.n as u64) != 1 {
            return Err(Error::NotCoprime {
                a: u as i64,
                n: self.n as u64,
            });
        }
        let parts = self
            .parts
            .iter()
            .map(|part| part.iter().map(|&i| (u * i + v) % self.n).collect())
            .collect();
        Self::new(self.n, parts)
    }

    /// Parts as a set of sets, ignoring the order of parts.
    pub fn as_set(&self) -> BTreeSet<Vec<usize>> {
        self.parts.iter().cloned().collect()
    }

    pub fn same_setwise(&self, other: &Self) -> bool {
        self.n == other.n && self.as_set() == other.as_set()
    }

    /// Parts ordered by (size, smallest element).
    pub fn canonical(&self) -> Self {
        let mut parts = self.parts.clone();
        parts.sort_by_key(|p| (p.len(), p[0]));
        IndexPartition { n: self.n, parts }
    }

    /// Inline CSV-of-sets rendering, the inverse of [`IndexPartition::parse`].
    pub fn to_csv(&self) -> String {
        self.parts
            .iter()
            .map(|p| {
                p.iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join("|")
    }
}

impl fmt::Display for IndexPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}: {}", self.n, self.to_csv())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let p = IndexPartition::parse(4, "0|1,3|2").unwrap();
        assert_eq!(p.class_count(), 3);
        assert_eq!(p.labels(), vec![0, 1, 2, 1]);
        assert_eq!(p.to_csv(), "0|1,3|2");
        assert!(matches!(
            IndexPartition::parse(4, "0,1|1,2,3"),
            Err(Error::PartitionInvalid(_))
        ));
        assert!(matches!(
            IndexPartition::parse(4, "0|1"),
            Err(Error::PartitionInvalid(_))
        ));
        assert!(matches!(
            IndexPartition::parse(4, "0|x,1|2,3"),
            Err(Error::ParseError(_))
        ));
        assert!(matches!(
            IndexPartition::parse(4, "0,1,2,3|"),
            Err(Error::PartitionInvalid(_))
        ));
    }

    #[test]
    fn affine_images() {
        let p = IndexPartition::parse(6, "0,1|2,3|4,5").unwrap();
        let q = p.affine_image(5, 1).unwrap();
        assert_eq!(q.parts(), &[vec![0, 1], vec![4, 5], vec![2, 3]]);
        assert!(p.affine_image(2, 0).is_err());
        assert!(p.same_setwise(&p.affine_image(1, 0).unwrap()));
    }

    #[test]
    fn serde_validates() {
        let p = IndexPartition::parse(4, "0|1,3|2").unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<IndexPartition>(&s).unwrap(), p);
        assert!(
            serde_json::from_str::<IndexPartition>(r#"{"n":3,"parts":[[0],[0,1,2]]}"#).is_err()
        );
    }
}
