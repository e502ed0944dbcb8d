use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::IntersectionMatrices;
use crate::cycint::CycInt;
use crate::json::ComplexMatrix;

/// Verdict and derived data for one candidate translation scheme.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchemeReport {
    pub p: u64,
    pub f: u32,
    pub q: u64,
    pub n: usize,
    pub parts: Vec<Vec<usize>>,
    pub is_scheme: bool,
    pub class_count: usize,
    /// `|R_0| = 1, |R_1|, …, |R_d|`.
    pub valencies: Vec<u64>,
    pub p_exact: Option<Vec<Vec<CycInt>>>,
    pub p_complex: Option<ComplexMatrix>,
    pub q_complex: Option<ComplexMatrix>,
    pub intersection_matrices: Option<IntersectionMatrices>,
    pub krein_matrices: Option<IntersectionMatrices>,
    pub dual_parts: Option<Vec<Vec<usize>>>,
    /// Per nontrivial relation.
    pub symmetric: Vec<bool>,
    pub nonsymmetric_pair_count: usize,
    pub is_primitive: Option<bool>,
    pub is_self_dual: Option<bool>,
    pub self_dual_permutation: Option<Vec<usize>>,
}

impl SchemeReport {
    /// Re-checks the structural invariants of a report, e.g. after parsing.
    /// Returns a description of the first violation.
    pub fn validate(&self, tolerance: f64) -> Result<(), String> {
        let d = self.class_count;
        if self.parts.len() != d || self.valencies.len() != d + 1 || self.symmetric.len() != d {
            return Err("class count disagrees with parts/valencies".into());
        }
        if !self.is_scheme {
            return Ok(());
        }
        let p_exact = self.p_exact.as_ref().ok_or("missing exact eigenmatrix")?;
        if p_exact.len() != d + 1 || p_exact.iter().any(|r| r.len() != d + 1) {
            return Err("eigenmatrix has the wrong shape".into());
        }
        for (j, v) in self.valencies.iter().enumerate() {
            if p_exact[0][j] != CycInt::from_int(self.p, *v) {
                return Err(format!("row 0, column {j} is not the valency"));
            }
        }
        if p_exact.iter().any(|r| r[0] != CycInt::from_int(self.p, 1)) {
            return Err("column 0 is not all ones".into());
        }
        let b = self
            .intersection_matrices
            .as_ref()
            .ok_or("missing intersection matrices")?;
        if b.len() != d + 1 {
            return Err("wrong number of intersection matrices".into());
        }
        for (i, bi) in b.iter().enumerate() {
            for (k, row) in bi.iter().enumerate() {
                if row.iter().sum::<u64>() != self.valencies[i] {
                    return Err(format!("B_{i} row {k} does not sum to the valency"));
                }
                for (j, &v) in row.iter().enumerate() {
                    if i == 0 && v != u64::from(j == k) {
                        return Err("B_0 is not the identity".into());
                    }
                    if b[j][k][i] != v {
                        return Err(format!("p_{{{i}{j}}}^{k} != p_{{{j}{i}}}^{k}"));
                    }
                }
            }
        }
        let (pc, qc) = match (&self.p_complex, &self.q_complex) {
            (Some(p), Some(q)) => (p, q),
            _ => return Err("missing complex eigenmatrices".into()),
        };
        let residual = pq_residual(pc, qc, self.q as f64);
        if residual > tolerance {
            return Err(format!("PQ deviates from qI by {residual:e}"));
        }
        Ok(())
    }
}

/// `max |(PQ - qI)_{ij}|`.
pub fn pq_residual(p: &ComplexMatrix, q: &ComplexMatrix, order: f64) -> f64 {
    let dim = p.dim();
    let pm = DMatrix::from_fn(dim, dim, |i, j| p.0[i][j]);
    let qm = DMatrix::from_fn(dim, dim, |i, j| q.0[i][j]);
    let prod = pm * qm;
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let target = if i == j {
                Complex64::new(order, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            worst = worst.max((prod[(i, j)] - target).norm());
        }
    }
    worst
}
