//! Direct check of the association-scheme axioms on a labelled F_q.
//! Quadratic in q; used as ground truth for the character criterion.

use crate::cyclotomy::CyclotomicSystem;
use crate::error::{Error, Result};
use crate::finite_field::FieldSpec;
use crate::partition::IndexPartition;

pub const ORACLE_LIMIT: u64 = 20_000;

/// Element labels for the translation partition: 0 on {0}, `k + 1` on `R_k`.
pub fn relation_labels(sys: &CyclotomicSystem, partition: &IndexPartition) -> Vec<usize> {
    let field = sys.field();
    let labels = partition.labels();
    let n = partition.n() as u64;
    field
        .elements()
        .map(|x| {
            if x == 0 {
                0
            } else {
                labels[(field.log_of(x) as u64 % n) as usize] + 1
            }
        })
        .collect()
}

/// `labels[x]` names the relation containing `x`; relation 0 must be `{0}`.
pub fn brute_force_verify(field: &FieldSpec, labels: &[usize]) -> Result<bool> {
    let q = field.q();
    if q > ORACLE_LIMIT {
        return Err(Error::TooLargeForOracle {
            q,
            limit: ORACLE_LIMIT,
        });
    }
    if labels.len() as u64 != q {
        return Err(Error::PartitionInvalid(format!(
            "expected {q} labels, got {}",
            labels.len()
        )));
    }
    let classes = labels.iter().max().copied().unwrap_or(0) + 1;
    let mut sizes = vec![0usize; classes];
    for &l in labels {
        sizes[l] += 1;
    }
    if labels[0] != 0 || sizes[0] != 1 || sizes.contains(&0) {
        return Ok(false);
    }
    // each relation's negation must be a relation
    let mut negation: Vec<Option<usize>> = vec![None; classes];
    for x in field.elements() {
        let (a, b) = (labels[x as usize], labels[field.neg(x) as usize]);
        match negation[a] {
            None => negation[a] = Some(b),
            Some(prev) if prev != b => return Ok(false),
            Some(_) => {}
        }
    }
    for (a, b) in negation.iter().enumerate() {
        if sizes[a] != sizes[b.expect("every class is populated")] {
            return Ok(false);
        }
    }
    let mut reference: Vec<Option<Vec<u64>>> = vec![None; classes];
    let mut counts = vec![0u64; classes * classes];
    for z in field.elements() {
        counts.iter_mut().for_each(|c| *c = 0);
        for x in field.elements() {
            let y = field.sub(z, x);
            counts[labels[x as usize] * classes + labels[y as usize]] += 1;
        }
        let k = labels[z as usize];
        match &reference[k] {
            None => reference[k] = Some(counts.clone()),
            Some(first) if *first != counts => return Ok(false),
            Some(_) => {}
        }
    }
    Ok(true)
}
