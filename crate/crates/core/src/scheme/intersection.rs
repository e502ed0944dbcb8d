use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::is_translation_scheme;
use crate::cyclotomy::CyclotomicSystem;
use crate::error::{Error, Result};
use crate::partition::IndexPartition;

/// `B[i][k][j] = p_{ij}^k`, with relation 0 the diagonal.
pub type IntersectionMatrices = Vec<Vec<Vec<u64>>>;

const SPOT_CHECKS_PER_CLASS: usize = 3;

/// Counts `#{x : x ∈ R_i, z - x ∈ R_j}` for all `(i, j)` at once, where
/// `z = γ^{z_log}` (or `z = 0` when `z_log` is `None`).
fn counts_at(
    sys: &CyclotomicSystem,
    relation_of_class: &[usize],
    d: usize,
    z_log: Option<u64>,
) -> Vec<Vec<u64>> {
    let field = sys.field();
    let order = field.order();
    let n = sys.n() as u64;
    let half = if field.q().is_multiple_of(2) {
        0
    } else {
        order / 2
    };
    let rel = |l: u64| relation_of_class[(l % n) as usize];
    let mut counts = vec![vec![0u64; d + 1]; d + 1];
    match z_log {
        None => {
            counts[0][0] += 1;
            for lx in 0..order {
                counts[rel(lx)][rel((lx + half) % order)] += 1;
            }
        }
        Some(lz) => {
            counts[0][rel(lz)] += 1;
            for lx in 0..order {
                let j = match field.log_of_difference(lz, lx) {
                    None => 0,
                    Some(l) => rel(l),
                };
                counts[rel(lx)][j] += 1;
            }
        }
    }
    counts
}

/// Intersection numbers from one representative per relation, spot-checked
/// against further random representatives.
pub fn intersection_numbers(
    sys: &CyclotomicSystem,
    partition: &IndexPartition,
) -> Result<IntersectionMatrices> {
    if !is_translation_scheme(sys, partition)? {
        return Err(Error::NotAScheme);
    }
    let d = partition.class_count();
    let n = sys.n() as u64;
    let relation_of_class: Vec<usize> = partition.labels().into_iter().map(|l| l + 1).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    // (relation k, representative log) pairs; the first per relation is canonical.
    let mut reps: Vec<(usize, Option<u64>)> = vec![(0, None)];
    for (k, part) in partition.parts().iter().enumerate() {
        reps.push((k + 1, Some(part[0] as u64)));
        for _ in 0..SPOT_CHECKS_PER_CLASS {
            let class = part[rng.gen_range(0..part.len())] as u64;
            let t = rng.gen_range(0..sys.class_size());
            reps.push((k + 1, Some(class + n * t)));
        }
    }
    let tables: Vec<(usize, Vec<Vec<u64>>)> = reps
        .par_iter()
        .map(|&(k, z)| (k, counts_at(sys, &relation_of_class, d, z)))
        .collect();
    let mut by_relation: Vec<Option<&Vec<Vec<u64>>>> = vec![None; d + 1];
    for (k, table) in &tables {
        match by_relation[*k] {
            None => by_relation[*k] = Some(table),
            Some(first) if first != table => return Err(Error::NotAScheme),
            Some(_) => {}
        }
    }
    let mut b = vec![vec![vec![0u64; d + 1]; d + 1]; d + 1];
    for (k, table) in by_relation.iter().enumerate() {
        let table = table.expect("every relation has a representative");
        for (i, row) in table.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                b[i][k][j] = v;
            }
        }
    }
    Ok(b)
}
