use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::finite_field::FieldSpec;

fn system(p: u64, f: u32, n: usize) -> CyclotomicSystem {
    CyclotomicSystem::build(Arc::new(FieldSpec::build(p, f, None).unwrap()), n).unwrap()
}

fn random_partition(rng: &mut ChaCha8Rng, n: usize, d: usize) -> IndexPartition {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let mut parts: Vec<Vec<usize>> = idx[..d].iter().map(|&i| vec![i]).collect();
    for &i in &idx[d..] {
        let k = rng.gen_range(0..d);
        parts[k].push(i);
    }
    IndexPartition::new(n, parts).unwrap()
}

#[test]
fn cyclotomic_scheme_is_a_self_dual_scheme() {
    for (p, f, n) in [(3, 4, 8), (5, 2, 6), (13, 1, 4), (2, 4, 5)] {
        let sys = system(p, f, n);
        let report = verify_scheme(&sys, &IndexPartition::singletons(n)).unwrap();
        assert!(report.is_scheme, "index {n} over {p}^{f}");
        assert_eq!(report.is_self_dual, Some(true));
        report.validate(1e-6).unwrap();
    }
}

#[test]
fn unbalanced_split_is_rejected_and_oracle_agrees() {
    let sys = system(3, 2, 8);
    let partition = IndexPartition::parse(8, "0|1,2|3,4,5,6,7").unwrap();
    let report = verify_scheme(&sys, &partition).unwrap();
    assert!(!report.is_scheme);
    let labels = relation_labels(&sys, &partition);
    assert!(!brute_force_verify(sys.field(), &labels).unwrap());
    assert!(report.p_exact.is_none());
    report.validate(1e-6).unwrap();
}

#[test]
fn intersection_numbers_row_sums_and_identity() {
    let sys = system(3, 4, 8);
    let partition = IndexPartition::parse(8, "0,4|1,5|2,6|3,7").unwrap();
    let b = intersection_numbers(&sys, &partition).unwrap();
    let val = valencies(&sys, &partition);
    for (i, bi) in b.iter().enumerate() {
        for (k, row) in bi.iter().enumerate() {
            assert_eq!(row.iter().sum::<u64>(), val[i]);
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(v, b[j][k][i]);
                if i == 0 {
                    assert_eq!(v, u64::from(j == k));
                }
            }
        }
    }
    let bad = IndexPartition::parse(8, "0|1,2|3,4,5,6,7").unwrap();
    assert_eq!(intersection_numbers(&sys, &bad), Err(Error::NotAScheme));
}

#[test]
#[allow(clippy::needless_range_loop)]
fn intersection_numbers_match_oracle_counts() {
    // p_{ij}^k counted naively with field subtraction for a fixed z.
    let sys = system(5, 2, 6);
    let partition = IndexPartition::parse(6, "0,3|1,4|2,5").unwrap();
    let b = intersection_numbers(&sys, &partition).unwrap();
    let labels = relation_labels(&sys, &partition);
    let field = sys.field();
    for z in field.elements() {
        let k = labels[z as usize];
        for i in 0..4 {
            for j in 0..4 {
                let count = field
                    .elements()
                    .filter(|&x| labels[x as usize] == i && labels[field.sub(z, x) as usize] == j)
                    .count() as u64;
                assert_eq!(count, b[i][k][j]);
            }
        }
    }
}

#[test]
fn eigenmatrix_shape_and_inversion() {
    let sys = system(3, 4, 8);
    let partition = IndexPartition::parse(8, "0,4|1,3,5,7|2,6").unwrap();
    let eig = eigenmatrices(&sys, &partition).unwrap();
    assert_eq!(eig.p_exact[0][1], CycInt::from_int(3, 20));
    assert!(eig.p_exact.iter().all(|r| r[0] == CycInt::from_int(3, 1)));
    assert!(report::pq_residual(&eig.p_complex, &eig.q_complex, 81.0) < 1e-6);
}

#[test]
fn krein_of_one_class_scheme_and_double_dual() {
    let sys = system(7, 2, 1);
    let one = IndexPartition::singletons(1);
    let krein = krein_parameters(&sys, &one).unwrap();
    // the dual of K_q is K_q
    assert_eq!(krein[1][0], vec![0, 48]);
    assert_eq!(krein[1][1], vec![1, 47]);
    assert_eq!(is_primitive(&sys, &one), Ok(true));

    let sys = system(3, 4, 16);
    let partition = IndexPartition::parse(16, "0,8|1,9,3,11|2,10|4,12|5,13,7,15|6,14").unwrap();
    if is_translation_scheme(&sys, &partition).unwrap() {
        let dual = dual_partition(&sys, &partition).unwrap();
        let back = dual_partition(&sys, &dual).unwrap();
        assert!(back.same_setwise(&partition));
    }
}

#[test]
fn symmetrization_examples() {
    // F_81: -1 = γ^40, and 40 ≡ 0 mod 8, so every relation is symmetric.
    let sys = system(3, 4, 8);
    let partition = IndexPartition::parse(8, "0|1|2,3|4,5,6,7").unwrap();
    assert_eq!(negation_shift(&sys), 0);
    assert!((0..4).all(|i| is_symmetric(&sys, &partition, i)));
    assert!(symmetrize(&sys, &partition).same_setwise(&partition));

    // F_27 with N = 26: -1 = γ^13.
    let sys = system(3, 3, 26);
    assert_eq!(negation_shift(&sys), 13);
    let singles = IndexPartition::singletons(26);
    let sym = symmetrize(&sys, &singles);
    assert_eq!(sym.class_count(), 13);
    assert!(symmetrize(&sys, &sym).same_setwise(&sym));
    assert_eq!(nonsymmetric_pair_count(&sys, &singles), 13);
}

#[test]
fn subfield_relation_is_imprimitive() {
    // F_9^* ∪ {0} is a subfield of F_81; in index 10 it is class 0.
    let sys = system(3, 4, 10);
    let partition = IndexPartition::parse(10, "0|1,2,3,4,5,6,7,8,9").unwrap();
    assert!(is_translation_scheme(&sys, &partition).unwrap());
    assert_eq!(is_primitive(&sys, &partition), Ok(false));
}

#[test]
fn identity_fusion_and_malformed_lambda() {
    let sys = system(5, 2, 6);
    let eig = eigenmatrices(&sys, &IndexPartition::singletons(6)).unwrap();
    let singles: Vec<Vec<usize>> = (0..7).map(|i| vec![i]).collect();
    let fused = check_fusion(&eig.p_exact, &singles).unwrap().unwrap();
    assert_eq!(fused.fused_p, eig.p_exact);
    assert_eq!(fused.delta, singles);
    assert!(matches!(
        check_fusion(&eig.p_exact, &[vec![0, 1], vec![2, 3, 4, 5, 6]]),
        Err(Error::MalformedPartition(_))
    ));
    assert!(matches!(
        check_fusion(&eig.p_exact, &[vec![0], vec![1, 2]]),
        Err(Error::MalformedPartition(_))
    ));
}

#[test]
fn fusion_agrees_with_direct_verification() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let sys = system(3, 4, 16);
    let fine = eigenmatrices(&sys, &IndexPartition::singletons(16)).unwrap();
    let mut fusable = 0;
    for _ in 0..200 {
        let d = rng.gen_range(2..6);
        let coarse = random_partition(&mut rng, 16, d);
        let lambda: Vec<Vec<usize>> = std::iter::once(vec![0])
            .chain(
                coarse
                    .parts()
                    .iter()
                    .map(|p| p.iter().map(|i| i + 1).collect()),
            )
            .collect();
        let fused = check_fusion(&fine.p_exact, &lambda).unwrap();
        let direct = is_translation_scheme(&sys, &coarse).unwrap();
        assert_eq!(fused.is_some(), direct, "{coarse}");
        if let Some(fusion) = fused {
            fusable += 1;
            assert_eq!(
                fusion.fused_p,
                eigenmatrices(&sys, &coarse).unwrap().p_exact
            );
        }
    }
    // symmetric pairs {i, i+8} and similar coarsenings occur among random draws
    let _ = fusable;
    let paired = IndexPartition::parse(16, "0,8|1,9|2,10|3,11|4,12|5,13|6,14|7,15").unwrap();
    let lambda: Vec<Vec<usize>> = std::iter::once(vec![0])
        .chain(
            paired
                .parts()
                .iter()
                .map(|p| p.iter().map(|i| i + 1).collect()),
        )
        .collect();
    let fusion = check_fusion(&fine.p_exact, &lambda).unwrap().unwrap();
    assert_eq!(
        fusion.fused_p,
        eigenmatrices(&sys, &paired).unwrap().p_exact
    );
}

#[test]
fn oracle_examples() {
    let sys = system(13, 1, 2);
    let labels = relation_labels(&sys, &IndexPartition::singletons(2));
    assert!(brute_force_verify(sys.field(), &labels).unwrap());
    // move one element of class 0 into class 1
    let mut broken = labels.clone();
    let g2 = sys.field().exp(2) as usize;
    broken[g2] = 2;
    assert!(!brute_force_verify(sys.field(), &broken).unwrap());
    let big = FieldSpec::build(3, 10, None).unwrap();
    assert!(matches!(
        brute_force_verify(&big, &vec![0; big.q() as usize]),
        Err(Error::TooLargeForOracle { .. })
    ));
}

#[test]
fn signature_verdict_matches_oracle_on_random_partitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut schemes = 0;
    for (p, f, n) in [(3, 4, 8), (3, 4, 10), (11, 2, 12), (3, 5, 11), (3, 5, 22)] {
        let sys = system(p, f, n);
        for _ in 0..30 {
            let d = rng.gen_range(1..=n.min(5));
            let partition = random_partition(&mut rng, n, d);
            let verdict = is_translation_scheme(&sys, &partition).unwrap();
            let labels = relation_labels(&sys, &partition);
            assert_eq!(
                verdict,
                brute_force_verify(sys.field(), &labels).unwrap(),
                "{partition} over {p}^{f}"
            );
            schemes += usize::from(verdict);
        }
    }
    assert!(schemes > 0);
}

#[test]
fn report_round_trips_through_json() {
    let sys = system(3, 4, 8);
    let report =
        verify_scheme(&sys, &IndexPartition::parse(8, "0,4|1,5|2,6|3,7").unwrap()).unwrap();
    assert!(report.is_scheme);
    let text = serde_json::to_string(&report).unwrap();
    let back: SchemeReport = serde_json::from_str(&text).unwrap();
    back.validate(1e-6).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
}

#[test]
fn mismatched_index_is_rejected() {
    let sys = system(3, 4, 8);
    assert!(matches!(
        verify_scheme(&sys, &IndexPartition::singletons(4)),
        Err(Error::PartitionInvalid(_))
    ));
    assert!(matches!(
        verify_scheme(&sys, &IndexPartition::singletons(7)),
        Err(Error::NotADivisor { .. })
    ));
}
