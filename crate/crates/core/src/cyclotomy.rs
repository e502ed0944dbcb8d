//! Cyclotomic classes `C_i = γ^i ⟨γ^N⟩` and their exact Gauss periods.

use std::sync::Arc;

use crate::cycint::CycInt;
use crate::error::{Error, Result};
use crate::finite_field::FieldSpec;

/// The cyclotomic classes of order `N` of a field, with exact Gauss periods
/// `η_i = Σ_{x ∈ C_i} ξ_p^{tr(x)}` held in Z[ξ_p].
#[derive(Clone, Debug)]
pub struct CyclotomicSystem {
    field: Arc<FieldSpec>,
    n: usize,
    class_size: u64,
    periods: Vec<CycInt>,
    trace_counts: Vec<Vec<u64>>,
}

impl CyclotomicSystem {
    /// One pass over F_q^*: O(q) with the log and trace tables.
    pub fn build(field: Arc<FieldSpec>, n: usize) -> Result<Self> {
        let order = field.order();
        if n == 0 || !order.is_multiple_of(n as u64) {
            return Err(Error::NotADivisor {
                n: n as u64,
                q_minus_one: order,
            });
        }
        let p = field.p() as usize;
        let mut trace_counts = vec![vec![0u64; p]; n];
        for k in 0..order as usize {
            let t = field.trace_of(field.antilog_of(k)) as usize;
            trace_counts[k % n][t] += 1;
        }
        let periods = trace_counts
            .iter()
            .map(|row| CycInt::from_exponent_counts(p as u64, row))
            .collect();
        Ok(CyclotomicSystem {
            class_size: order / n as u64,
            field,
            n,
            periods,
            trace_counts,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    /// The index `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `M = (q - 1) / N`, the common class size.
    pub fn class_size(&self) -> u64 {
        self.class_size
    }

    pub fn periods(&self) -> &[CycInt] {
        &self.periods
    }

    pub fn period(&self, i: usize) -> &CycInt {
        &self.periods[i % self.n]
    }

    pub fn trace_counts(&self) -> &[Vec<u64>] {
        &self.trace_counts
    }

    /// ψ(γ^a D) for D the union of the classes in `index_set`.
    pub fn character_sum(&self, index_set: &[usize], shift: i64) -> Result<CycInt> {
        let mut acc = CycInt::zero(self.field.p());
        for &i in index_set {
            if i >= self.n {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    n: self.n,
                });
            }
            let idx = (i as i64 + shift).rem_euclid(self.n as i64) as usize;
            acc.add_assign_ref(&self.periods[idx]);
        }
        Ok(acc)
    }

    /// Class index of a nonzero element: its discrete log mod N.
    pub fn class_of(&self, x: u64) -> Result<usize> {
        Ok((self.field.discrete_log(x)? % self.n as u64) as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn system(p: u64, f: u32, n: usize) -> CyclotomicSystem {
        CyclotomicSystem::build(Arc::new(FieldSpec::build(p, f, None).unwrap()), n).unwrap()
    }

    /// Independent oracle: walk every element of the union and add ξ^{tr(γ^a x)}.
    fn brute_character_sum(sys: &CyclotomicSystem, index_set: &[usize], shift: i64) -> CycInt {
        let field = sys.field();
        let p = field.p();
        let mut counts = vec![0i64; p as usize];
        for x in 1..field.q() {
            let l = field.discrete_log(x).unwrap();
            if index_set.contains(&((l % sys.n() as u64) as usize)) {
                let y = field.mul(field.exp(shift), x);
                counts[field.trace(y).unwrap() as usize] += 1;
            }
        }
        CycInt::from_exponent_counts(p, &counts)
    }

    #[test]
    fn quadratic_periods_of_f9() {
        let sys = system(3, 2, 2);
        assert_eq!(sys.periods()[0], CycInt::from_int(3, 1));
        assert_eq!(sys.periods()[1], CycInt::from_int(3, -2));
    }

    #[test]
    fn trivial_index_sums_to_minus_one() {
        for (p, f) in [(3, 2), (5, 3), (37, 1), (2, 5)] {
            let sys = system(p, f, 1);
            assert_eq!(sys.periods()[0], CycInt::from_int(p, -1));
        }
    }

    #[test]
    fn period_invariants() {
        let sys = system(37, 1, 4);
        let total = sys
            .periods()
            .iter()
            .fold(CycInt::zero(37), |acc, e| &acc + e);
        assert_eq!(total, CycInt::from_int(37, -1));
        for (row, eta) in sys.trace_counts().iter().zip(sys.periods()) {
            assert_eq!(row.iter().sum::<u64>(), sys.class_size());
            assert_eq!(&CycInt::from_exponent_counts(37, row), eta);
        }
    }

    #[test]
    fn character_sum_edge_cases() {
        let sys = system(3, 5, 11);
        let all: Vec<usize> = (0..11).collect();
        for a in [0, 3, -7] {
            assert_eq!(sys.character_sum(&all, a).unwrap(), CycInt::from_int(3, -1));
        }
        assert!(sys.character_sum(&[], 2).unwrap().is_zero());
        assert_eq!(
            sys.character_sum(&[11], 0),
            Err(Error::IndexOutOfRange { index: 11, n: 11 })
        );
        let powers_of_three = [1usize, 3, 9, 5, 4];
        assert_eq!(
            sys.character_sum(&powers_of_three, 0).unwrap(),
            brute_character_sum(&sys, &powers_of_three, 0)
        );
    }

    #[test]
    fn character_sum_matches_brute_force_on_random_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, f, n) in [(3, 4, 8), (11, 2, 12), (3, 5, 22), (2, 6, 9)] {
            let sys = system(p, f, n);
            for _ in 0..50 {
                let set: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
                let a = rng.gen_range(-40i64..40);
                assert_eq!(
                    sys.character_sum(&set, a).unwrap(),
                    brute_character_sum(&sys, &set, a)
                );
            }
        }
    }

    #[test]
    fn class_of_examples() {
        let sys = system(5, 3, 31);
        let field = sys.field();
        assert_eq!(sys.class_of(field.gamma()).unwrap(), 1);
        assert_eq!(sys.class_of(field.exp(31)).unwrap(), 0);
        let minus_one = field.neg(1);
        assert_eq!(sys.class_of(minus_one).unwrap(), (124 / 2) % 31);
        assert_eq!(sys.class_of(0), Err(Error::ZeroElement));
    }

    #[test]
    fn rejects_non_divisor() {
        let field = Arc::new(FieldSpec::build(3, 2, None).unwrap());
        assert!(matches!(
            CyclotomicSystem::build(field, 3),
            Err(Error::NotADivisor { .. })
        ));
    }
}
