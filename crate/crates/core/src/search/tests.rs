use super::*;

#[test]
fn enumerator_counts_match_stirling() {
    assert_eq!(stirling2(8, 3), 966);
    assert_eq!(stirling2(8, 4), 1701);
    for d in 3..=4 {
        assert_eq!(enumerate_count(8, d), stirling2(8, d));
    }
}

#[test]
fn dfs_visits_every_partition() {
    let sys = search_system(3).unwrap();
    let table = KeyTable::new(&sys);
    for d in 3..=4 {
        let total: u128 = prefixes(5, d)
            .into_iter()
            .map(|(prefix, used)| {
                let mut dfs = Dfs::new(&table, d, false);
                for (i, &b) in prefix.iter().enumerate() {
                    dfs.assign(i, b);
                }
                dfs.run(prefix.len(), used);
                dfs.checked
            })
            .sum();
        assert_eq!(total, stirling2(8, d));
    }
}

#[test]
fn signature_filter_keeps_every_scheme() {
    // Exhaustive exact check over Z_8 against the fast filter.
    let sys = search_system(3).unwrap();
    let table = KeyTable::new(&sys);
    for d in 3..=4 {
        let mut dfs = Dfs::new(&table, d, false);
        dfs.run(0, 0);
        let passing: Vec<IndexPartition> = dfs
            .passes
            .iter()
            .map(|l| labels_to_partition(l, d))
            .collect();
        let mut exhaustive = Vec::new();
        enumerate_labels(8, d, &mut vec![0; 8], 0, 0, &mut exhaustive);
        for labels in exhaustive {
            let part = labels_to_partition(&labels, d);
            if is_translation_scheme(&sys, &part).unwrap() {
                assert!(passing.contains(&part), "{part:?}");
            }
        }
    }
}

fn enumerate_labels(
    n: usize,
    d: usize,
    cur: &mut Vec<usize>,
    i: usize,
    used: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if i == n {
        if used == d {
            out.push(cur.clone());
        }
        return;
    }
    for b in 0..(used + 1).min(d) {
        cur[i] = b;
        enumerate_labels(n, d, cur, i + 1, used.max(b + 1), out);
    }
}

#[test]
fn no_nonsymmetric_primitive_scheme_for_p3() {
    let out = exhaustive_nonexistence(&SearchConfig::new(3, 4)).unwrap();
    assert_eq!(out.checked, 966 + 1701);
    assert!(out.found.is_empty());
}

#[test]
fn sanity_mode_survivors_pass_oracle() {
    let out = exhaustive_nonexistence(&SearchConfig::sanity(3, 4)).unwrap();
    assert!(!out.found.is_empty());
    assert!(out.found.iter().all(|s| s.oracle_verified == Some(true)));
}

#[test]
fn budget_guard() {
    let mut cfg = SearchConfig::new(11, 4);
    assert!(matches!(
        exhaustive_nonexistence(&cfg),
        Err(Error::BudgetExceeded { .. })
    ));
    cfg.p = 5;
    assert!(matches!(
        exhaustive_nonexistence(&cfg),
        Err(Error::PreconditionViolated(_))
    ));
}

#[test]
fn trace_sets() {
    for p in [3, 7, 11, 19, 23, 31] {
        let r = trace_identities(p).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(ts_identity_check(p).unwrap());
    }
    assert!(trace_partition(5).is_err());
}

#[test]
fn identity_fails_for_perturbed_set() {
    let p = 7u64;
    let n = 16;
    let tp = trace_partition(p).unwrap();
    let mut bad = tp.ts.clone();
    bad[0] = tp.tn[0];
    let ts = GroupRingElem::from_set(n, &bad);
    let lhs = gr_mul(&ts, &gr_involution(&ts)).unwrap();
    let rhs = GroupRingElem::basis(n, 0).scale(7).add(
        &GroupRingElem::from_coeffs(vec![1; n])
            .sub(&GroupRingElem::from_set(n, &[0, 8]))
            .unwrap()
            .scale(3),
    );
    assert_ne!(lhs, rhs.unwrap());
}
