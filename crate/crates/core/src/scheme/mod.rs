//! Translation schemes defined by index partitions over a cyclotomic system.
//!
//! A partition `{0} ∪ R_1 ∪ … ∪ R_d` of F_q, with `R_k` the union of the
//! classes indexed by `I_k`, is a translation scheme exactly when the
//! nonprincipal characters `ψ_{γ^a}` fall into `d` classes by their value
//! vectors `(ψ_{γ^a}(R_1), …, ψ_{γ^a}(R_d))`. Values are exact elements of
//! Z[ξ_p], so the verdict involves no rounding.

mod fusion;
mod intersection;
mod oracle;
mod report;

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::cycint::CycInt;
use crate::cyclotomy::CyclotomicSystem;
use crate::error::{Error, Result};
use crate::json::ComplexMatrix;
use crate::partition::IndexPartition;

pub use fusion::{check_fusion, Fusion};
pub use intersection::{intersection_numbers, IntersectionMatrices};
pub use oracle::{brute_force_verify, relation_labels, ORACLE_LIMIT};
pub use report::{pq_residual, SchemeReport};

/// Exact eigenmatrix data together with the dual partition it induces.
#[derive(Clone, Debug)]
pub struct Eigenmatrices {
    /// Rows indexed by dual classes (row 0 principal), columns by relations.
    pub p_exact: Vec<Vec<CycInt>>,
    pub p_complex: ComplexMatrix,
    /// `Q = q · P^{-1}`.
    pub q_complex: ComplexMatrix,
    pub dual: IndexPartition,
}

fn check_compatible(sys: &CyclotomicSystem, partition: &IndexPartition) -> Result<()> {
    let order = sys.field().order();
    if !order.is_multiple_of(partition.n() as u64) {
        return Err(Error::NotADivisor {
            n: partition.n() as u64,
            q_minus_one: order,
        });
    }
    if partition.n() != sys.n() {
        return Err(Error::PartitionInvalid(format!(
            "partition is over Z_{} but the cyclotomic system has index {}",
            partition.n(),
            sys.n()
        )));
    }
    Ok(())
}

/// Value vector of `ψ_{γ^a}` on every relation, for each `a ∈ Z_N`.
pub fn signatures(sys: &CyclotomicSystem, partition: &IndexPartition) -> Result<Vec<Vec<CycInt>>> {
    check_compatible(sys, partition)?;
    (0..sys.n())
        .map(|a| {
            partition
                .parts()
                .iter()
                .map(|part| sys.character_sum(part, a as i64))
                .collect()
        })
        .collect()
}

/// Distinct signatures in canonical (lexicographic) order, with the shifts
/// `a` realizing each.
fn dual_classes(sigs: Vec<Vec<CycInt>>) -> Vec<(Vec<CycInt>, Vec<usize>)> {
    let mut classes: BTreeMap<Vec<CycInt>, Vec<usize>> = BTreeMap::new();
    for (a, sig) in sigs.into_iter().enumerate() {
        classes.entry(sig).or_default().push(a);
    }
    classes.into_iter().collect()
}

/// The cheap verdict: does the partition define a translation scheme?
pub fn is_translation_scheme(sys: &CyclotomicSystem, partition: &IndexPartition) -> Result<bool> {
    let sigs = signatures(sys, partition)?;
    Ok(dual_classes(sigs).len() == partition.class_count())
}

fn valencies(sys: &CyclotomicSystem, partition: &IndexPartition) -> Vec<u64> {
    std::iter::once(1)
        .chain(
            partition
                .parts()
                .iter()
                .map(|part| part.len() as u64 * sys.class_size()),
        )
        .collect()
}

/// The dual partition of Z_N (characters `ψ_{γ^a}` grouped by signature,
/// identified with `a` through `b ↦ ψ_b`), in canonical class order.
pub fn dual_partition(
    sys: &CyclotomicSystem,
    partition: &IndexPartition,
) -> Result<IndexPartition> {
    let classes = dual_classes(signatures(sys, partition)?);
    if classes.len() != partition.class_count() {
        return Err(Error::NotAScheme);
    }
    IndexPartition::new(partition.n(), classes.into_iter().map(|(_, a)| a).collect())
}

pub fn eigenmatrices(sys: &CyclotomicSystem, partition: &IndexPartition) -> Result<Eigenmatrices> {
    let classes = dual_classes(signatures(sys, partition)?);
    if classes.len() != partition.class_count() {
        return Err(Error::NotAScheme);
    }
    let p = sys.field().p();
    let mut p_exact = Vec::with_capacity(classes.len() + 1);
    p_exact.push(
        valencies(sys, partition)
            .into_iter()
            .map(|v| CycInt::from_int(p, v))
            .collect::<Vec<_>>(),
    );
    let mut dual_parts = Vec::with_capacity(classes.len());
    for (sig, shifts) in classes {
        let mut row = Vec::with_capacity(sig.len() + 1);
        row.push(CycInt::from_int(p, 1));
        row.extend(sig);
        p_exact.push(row);
        dual_parts.push(shifts);
    }
    let dual = IndexPartition::new(partition.n(), dual_parts)?;
    let p_complex: Vec<Vec<Complex64>> = p_exact
        .iter()
        .map(|row| row.iter().map(CycInt::embed_complex).collect())
        .collect();
    let dim = p_complex.len();
    let matrix = DMatrix::from_fn(dim, dim, |i, j| p_complex[i][j]);
    let inverse = matrix.try_inverse().ok_or(Error::SingularP)?;
    let q = sys.field().q() as f64;
    let q_complex = (0..dim)
        .map(|i| (0..dim).map(|j| inverse[(i, j)] * q).collect())
        .collect();
    Ok(Eigenmatrices {
        p_exact,
        p_complex: ComplexMatrix(p_complex),
        q_complex: ComplexMatrix(q_complex),
        dual,
    })
}

/// Krein parameters, realized as the intersection matrices of the dual scheme.
pub fn krein_parameters(
    sys: &CyclotomicSystem,
    partition: &IndexPartition,
) -> Result<IntersectionMatrices> {
    let dual = dual_partition(sys, partition)?;
    intersection_numbers(sys, &dual)
}

/// Index shift by which multiplication by -1 acts on cyclotomic classes.
pub fn negation_shift(sys: &CyclotomicSystem) -> usize {
    let q = sys.field().q();
    if q.is_multiple_of(2) {
        0
    } else {
        (((q - 1) / 2) % sys.n() as u64) as usize
    }
}

fn shifted(part: &[usize], c: usize, n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = part.iter().map(|&i| (i + c) % n).collect();
    out.sort_unstable();
    out
}

/// Relation `i` (0-based part index) equals its own negation.
pub fn is_symmetric(sys: &CyclotomicSystem, partition: &IndexPartition, i: usize) -> bool {
    let c = negation_shift(sys);
    shifted(partition.part(i), c, partition.n()) == partition.part(i)
}

/// Number of unordered pairs `{i, j}`, `i ≠ j`, with `-R_i = R_j`.
pub fn nonsymmetric_pair_count(sys: &CyclotomicSystem, partition: &IndexPartition) -> usize {
    let c = negation_shift(sys);
    let parts = partition.parts();
    let mut count = 0;
    for (i, part) in parts.iter().enumerate() {
        let image = shifted(part, c, partition.n());
        count += parts
            .iter()
            .enumerate()
            .filter(|&(j, other)| j > i && *other == image)
            .count();
    }
    count
}

/// Merges each relation with its negation image (transitively).
pub fn symmetrize(sys: &CyclotomicSystem, partition: &IndexPartition) -> IndexPartition {
    let c = negation_shift(sys);
    let labels = partition.labels();
    let d = partition.class_count();
    let mut root: Vec<usize> = (0..d).collect();
    fn find(root: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while root[x] != x {
            root[x] = root[root[x]];
            x = root[x];
        }
        x
    }
    for i in 0..partition.n() {
        let a = find(&mut root, labels[i]);
        let b = find(&mut root, labels[(i + c) % partition.n()]);
        if a != b {
            root[a.max(b)] = a.min(b);
        }
    }
    let mut merged: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, part) in partition.parts().iter().enumerate() {
        let r = find(&mut root, k);
        merged.entry(r).or_default().extend(part);
    }
    IndexPartition::new(partition.n(), merged.into_values().collect())
        .expect("merging parts keeps a partition")
}

/// Primitivity: every merged relation `R ∪ -R` has `ψ_{γ^a}(R) ≠ |R|` for all `a`.
pub fn is_primitive(sys: &CyclotomicSystem, partition: &IndexPartition) -> Result<bool> {
    if !is_translation_scheme(sys, partition)? {
        return Err(Error::NotAScheme);
    }
    Ok(primitive_by_characters(sys, &symmetrize(sys, partition)))
}

pub(crate) fn primitive_by_characters(sys: &CyclotomicSystem, merged: &IndexPartition) -> bool {
    let p = sys.field().p();
    merged.parts().iter().all(|part| {
        let valency = CycInt::from_int(p, part.len() as u64 * sys.class_size());
        (0..sys.n()).all(|a| {
            sys.character_sum(part, a as i64)
                .map(|v| v != valency)
                .unwrap_or(false)
        })
    })
}

/// Full analysis: verdict plus, for schemes, every derived artifact.
pub fn verify_scheme(sys: &CyclotomicSystem, partition: &IndexPartition) -> Result<SchemeReport> {
    check_compatible(sys, partition)?;
    let field = sys.field();
    let d = partition.class_count();
    let symmetric: Vec<bool> = (0..d).map(|i| is_symmetric(sys, partition, i)).collect();
    let mut report = SchemeReport {
        p: field.p(),
        f: field.f(),
        q: field.q(),
        n: partition.n(),
        parts: partition.parts().to_vec(),
        is_scheme: false,
        class_count: d,
        valencies: valencies(sys, partition),
        p_exact: None,
        p_complex: None,
        q_complex: None,
        intersection_matrices: None,
        krein_matrices: None,
        dual_parts: None,
        symmetric,
        nonsymmetric_pair_count: nonsymmetric_pair_count(sys, partition),
        is_primitive: None,
        is_self_dual: None,
        self_dual_permutation: None,
    };
    let eig = match eigenmatrices(sys, partition) {
        Ok(eig) => eig,
        Err(Error::NotAScheme) => return Ok(report),
        Err(e) => return Err(e),
    };
    report.is_scheme = true;
    report.intersection_matrices = Some(intersection_numbers(sys, partition)?);
    report.krein_matrices = Some(intersection_numbers(sys, &eig.dual)?);
    report.is_primitive = Some(primitive_by_characters(sys, &symmetrize(sys, partition)));
    let self_dual = eig.dual.same_setwise(partition);
    report.is_self_dual = Some(self_dual);
    if self_dual {
        let mut perm = vec![0usize; d + 1];
        for (i, part) in partition.parts().iter().enumerate() {
            let k = eig
                .dual
                .parts()
                .iter()
                .position(|dp| dp == part)
                .expect("setwise equal partitions share every part");
            perm[i + 1] = k + 1;
        }
        report.self_dual_permutation = Some(perm);
    }
    report.dual_parts = Some(eig.dual.parts().to_vec());
    report.p_exact = Some(eig.p_exact);
    report.p_complex = Some(eig.p_complex);
    report.q_complex = Some(eig.q_complex);
    Ok(report)
}

#[cfg(test)]
mod tests;
