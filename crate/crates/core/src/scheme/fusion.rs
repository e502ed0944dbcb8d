use std::collections::BTreeMap;

use crate::cycint::CycInt;
use crate::error::{Error, Result};

/// A successful Bannai–Muzychuk fusion.
#[derive(Clone, Debug, PartialEq)]
pub struct Fusion {
    /// Row partition `Δ`, `Δ_0 = {0}`, remaining classes in canonical order.
    pub delta: Vec<Vec<usize>>,
    /// Eigenmatrix of the fused scheme.
    pub fused_p: Vec<Vec<CycInt>>,
}

/// Tests whether merging columns by `lambda` yields a fusion scheme: the
/// `(Δ_i, Λ_j)` blocks must have constant row sums for some row partition
/// `Δ` with as many classes as `Λ`.
pub fn check_fusion(p_exact: &[Vec<CycInt>], lambda: &[Vec<usize>]) -> Result<Option<Fusion>> {
    let dim = p_exact.len();
    if dim == 0 || p_exact.iter().any(|row| row.len() != dim) {
        return Err(Error::MalformedPartition(
            "eigenmatrix must be square".into(),
        ));
    }
    if lambda.first().map(Vec::as_slice) != Some(&[0][..]) {
        return Err(Error::MalformedPartition("Λ_0 must be {0}".into()));
    }
    let mut seen = vec![false; dim];
    for block in lambda {
        if block.is_empty() {
            return Err(Error::MalformedPartition("empty block".into()));
        }
        for &c in block {
            if c >= dim || seen[c] {
                return Err(Error::MalformedPartition(format!(
                    "column {c} is out of range or repeated"
                )));
            }
            seen[c] = true;
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::MalformedPartition(
            "Λ does not cover every column".into(),
        ));
    }
    let n = p_exact[0][0].conductor();
    let block_sums = |row: &[CycInt]| -> Vec<CycInt> {
        lambda
            .iter()
            .map(|block| {
                block.iter().fold(CycInt::zero(n), |mut acc, &c| {
                    acc.add_assign_ref(&row[c]);
                    acc
                })
            })
            .collect()
    };
    let principal = block_sums(&p_exact[0]);
    let mut groups: BTreeMap<Vec<CycInt>, Vec<usize>> = BTreeMap::new();
    for (r, row) in p_exact.iter().enumerate().skip(1) {
        let sig = block_sums(row);
        if sig == principal {
            return Ok(None);
        }
        groups.entry(sig).or_default().push(r);
    }
    if groups.len() + 1 != lambda.len() {
        return Ok(None);
    }
    let mut delta = vec![vec![0]];
    let mut fused_p = vec![principal];
    for (sig, rows) in groups {
        delta.push(rows);
        fused_p.push(sig);
    }
    Ok(Some(Fusion { delta, fused_p }))
}
