//! Exhaustive search for translation schemes on `F_{p^2}` built from the
//! cyclotomic classes of index `N = 2(p+1)`, and the group-ring identities
//! of the trace sets.

mod group_ring;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, stirling2};
use crate::cycint::CycInt;
use crate::cyclotomy::CyclotomicSystem;
use crate::error::{Error, Result};
use crate::finite_field::FieldSpec;
use crate::partition::IndexPartition;
use crate::scheme::{brute_force_verify, is_primitive, is_translation_scheme, relation_labels};

pub use group_ring::{gr_involution, gr_mul, GroupRingElem};

/// Default cap on enumerated partitions; enough for `p = 7`.
pub const DEFAULT_BUDGET: u128 = 250_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub p: u64,
    pub max_classes: usize,
    pub require_nonsymmetric: bool,
    pub require_primitive: bool,
    /// Lifts the candidate budget.
    pub long_run: bool,
    pub budget: u128,
    /// Run the brute-force oracle on every survivor.
    pub oracle_check: bool,
}

impl SearchConfig {
    pub fn new(p: u64, max_classes: usize) -> Self {
        SearchConfig {
            p,
            max_classes,
            require_nonsymmetric: true,
            require_primitive: true,
            long_run: false,
            budget: DEFAULT_BUDGET,
            oracle_check: false,
        }
    }

    /// Symmetric schemes allowed, no primitivity filter, every survivor
    /// checked by the oracle.
    pub fn sanity(p: u64, max_classes: usize) -> Self {
        SearchConfig {
            require_nonsymmetric: false,
            require_primitive: false,
            oracle_check: true,
            ..Self::new(p, max_classes)
        }
    }

    pub fn n(&self) -> usize {
        2 * (self.p as usize + 1)
    }

    /// Class counts searched: `3..=max_classes`.
    pub fn class_counts(&self) -> std::ops::RangeInclusive<usize> {
        3..=self.max_classes
    }

    /// Number of set partitions the search enumerates.
    pub fn candidate_count(&self) -> u128 {
        self.class_counts().map(|d| stirling2(self.n(), d)).sum()
    }

    fn validate(&self) -> Result<()> {
        if !is_prime(self.p) || self.p % 4 != 3 {
            return Err(Error::PreconditionViolated(format!(
                "p = {} must be a prime ≡ 3 mod 4",
                self.p
            )));
        }
        if self.n() > 64 {
            return Err(Error::PreconditionViolated(format!(
                "N = {} exceeds the 64-bit index mask",
                self.n()
            )));
        }
        if !(3..=4).contains(&self.max_classes) {
            return Err(Error::PreconditionViolated(
                "max_classes must be 3 or 4".into(),
            ));
        }
        let candidates = self.candidate_count();
        if !self.long_run && candidates > self.budget {
            return Err(Error::BudgetExceeded {
                candidates,
                budget: self.budget,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Survivor {
    pub partition: IndexPartition,
    pub is_primitive: bool,
    pub nonsymmetric: bool,
    pub oracle_verified: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub p: u64,
    pub n: usize,
    pub checked: u128,
    /// Partitions enumerated per class count `d`.
    pub checked_by_classes: Vec<(usize, u128)>,
    /// Candidates that passed the fast signature filter.
    pub signature_passes: u64,
    pub found: Vec<Survivor>,
}

/// Per-shift linear keys of the periods: `key(η_{i+a})` for every `i`, `a`.
struct KeyTable {
    n: usize,
    /// rotated[i][a] = key(η_{(i+a) mod N})
    rotated: Vec<Vec<u64>>,
}

impl KeyTable {
    fn new(sys: &CyclotomicSystem) -> Self {
        let n = sys.n();
        let p = sys.field().p();
        // Mixed radix with base 2q + 1 is injective on every sum of periods;
        // when it overflows the wrapping key is only a hash, and survivors are
        // re-verified exactly.
        let base = 2 * sys.field().q() + 1;
        let keys: Vec<u64> = sys
            .periods()
            .iter()
            .map(|eta| linear_key(eta, base, p))
            .collect();
        let rotated = (0..n)
            .map(|i| (0..n).map(|a| keys[(i + a) % n]).collect())
            .collect();
        KeyTable { n, rotated }
    }
}

fn linear_key(x: &CycInt, base: u64, p: u64) -> u64 {
    let mut key = 0u64;
    let mut weight = 1u64;
    for c in x.coeffs().iter().take((p - 1) as usize) {
        let c = c.to_i64().expect("period coefficients are small");
        key = key.wrapping_add((c as u64).wrapping_mul(weight));
        weight = weight.wrapping_mul(base);
    }
    key
}

/// Depth-first enumeration of restricted growth strings with `d` blocks,
/// maintaining per-block, per-shift key sums.
struct Dfs<'a> {
    table: &'a KeyTable,
    d: usize,
    half: usize,
    require_nonsymmetric: bool,
    labels: Vec<usize>,
    masks: Vec<u64>,
    sums: Vec<Vec<u64>>,
    checked: u128,
    passes: Vec<Vec<usize>>,
}

impl<'a> Dfs<'a> {
    fn new(table: &'a KeyTable, d: usize, require_nonsymmetric: bool) -> Self {
        let n = table.n;
        Dfs {
            table,
            d,
            half: n / 2,
            require_nonsymmetric,
            labels: vec![0; n],
            masks: vec![0; d],
            sums: vec![vec![0; n]; d],
            checked: 0,
            passes: Vec::new(),
        }
    }

    fn assign(&mut self, i: usize, b: usize) {
        self.labels[i] = b;
        self.masks[b] |= 1 << i;
        let row = &self.table.rotated[i];
        for (s, k) in self.sums[b].iter_mut().zip(row) {
            *s = s.wrapping_add(*k);
        }
    }

    fn unassign(&mut self, i: usize, b: usize) {
        self.masks[b] &= !(1 << i);
        let row = &self.table.rotated[i];
        for (s, k) in self.sums[b].iter_mut().zip(row) {
            *s = s.wrapping_sub(*k);
        }
    }

    fn run(&mut self, i: usize, used: usize) {
        let n = self.table.n;
        if i == n {
            if used == self.d {
                self.leaf();
            }
            return;
        }
        if n - i < self.d - used {
            return;
        }
        let limit = if used < self.d { used + 1 } else { used };
        for b in 0..limit {
            self.assign(i, b);
            self.run(i + 1, used.max(b + 1));
            self.unassign(i, b);
        }
    }

    fn rotate(&self, mask: u64) -> u64 {
        let n = self.table.n as u32;
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let s = self.half as u32;
        ((mask << s) | (mask >> (n - s))) & full
    }

    fn leaf(&mut self) {
        self.checked += 1;
        if self.require_nonsymmetric && self.masks.iter().all(|&m| self.rotate(m) == m) {
            return;
        }
        let n = self.table.n;
        let d = self.d;
        // The last block is determined by the others (all periods sum to -1).
        let mut distinct: Vec<usize> = Vec::with_capacity(d + 1);
        for a in 0..n {
            let seen = distinct
                .iter()
                .any(|&r| (0..d - 1).all(|b| self.sums[b][r] == self.sums[b][a]));
            if !seen {
                distinct.push(a);
                if distinct.len() > d {
                    return;
                }
            }
        }
        self.passes.push(self.labels.clone());
    }
}

/// Restricted growth prefixes of length `len` usable for `d` blocks.
fn prefixes(len: usize, d: usize) -> Vec<(Vec<usize>, usize)> {
    let mut out = vec![(Vec::new(), 0usize)];
    for _ in 0..len {
        let mut next = Vec::new();
        for (prefix, used) in out {
            let limit = if used < d { used + 1 } else { used };
            for b in 0..limit {
                let mut p = prefix.clone();
                p.push(b);
                next.push((p, used.max(b + 1)));
            }
        }
        out = next;
    }
    out
}

fn labels_to_partition(labels: &[usize], d: usize) -> IndexPartition {
    let mut parts = vec![Vec::new(); d];
    for (i, &b) in labels.iter().enumerate() {
        parts[b].push(i);
    }
    IndexPartition::new(labels.len(), parts)
        .expect("restricted growth strings give partitions")
        .canonical()
}

/// Field and cyclotomic system of index `2(p+1)` over `F_{p^2}`.
pub fn search_system(p: u64) -> Result<CyclotomicSystem> {
    let field = Arc::new(FieldSpec::build(p, 2, None)?);
    CyclotomicSystem::build(field, 2 * (p as usize + 1))
}

/// Enumerates every partition of `Z_N` into `d ∈ {3, …, max_classes}` index
/// sets and returns those that are (nonsymmetric, primitive) translation
/// schemes according to the configuration.
pub fn exhaustive_nonexistence(cfg: &SearchConfig) -> Result<SearchOutcome> {
    exhaustive_nonexistence_with_progress(cfg, &|_, _| {})
}

/// As [`exhaustive_nonexistence`], reporting `(chunks done, chunks total)`.
pub fn exhaustive_nonexistence_with_progress(
    cfg: &SearchConfig,
    progress: &(dyn Fn(usize, usize) + Sync),
) -> Result<SearchOutcome> {
    cfg.validate()?;
    let sys = search_system(cfg.p)?;
    let table = KeyTable::new(&sys);
    let n = cfg.n();
    let prefix_len = n.min(7);
    let mut checked_by_classes = Vec::new();
    let mut checked = 0u128;
    let mut passes: Vec<(usize, Vec<usize>)> = Vec::new();
    let jobs: Vec<(usize, Vec<usize>, usize)> = cfg
        .class_counts()
        .flat_map(|d| {
            prefixes(prefix_len, d)
                .into_iter()
                .map(move |(prefix, used)| (d, prefix, used))
        })
        .collect();
    let total = jobs.len();
    let done = AtomicUsize::new(0);
    let results: Vec<(usize, u128, Vec<Vec<usize>>)> = jobs
        .par_iter()
        .map(|(d, prefix, used)| {
            let mut dfs = Dfs::new(&table, *d, cfg.require_nonsymmetric);
            for (i, &b) in prefix.iter().enumerate() {
                dfs.assign(i, b);
            }
            dfs.run(prefix.len(), *used);
            progress(done.fetch_add(1, Ordering::Relaxed) + 1, total);
            (*d, dfs.checked, dfs.passes)
        })
        .collect();
    for d in cfg.class_counts() {
        let count: u128 = results.iter().filter(|r| r.0 == d).map(|r| r.1).sum();
        checked_by_classes.push((d, count));
        checked += count;
    }
    for (d, _, labels) in results {
        passes.extend(labels.into_iter().map(|l| (d, l)));
    }
    let signature_passes = passes.len() as u64;
    let mut found = Vec::new();
    for (d, labels) in passes {
        let partition = labels_to_partition(&labels, d);
        if !is_translation_scheme(&sys, &partition)? {
            continue;
        }
        let primitive = is_primitive(&sys, &partition)?;
        if cfg.require_primitive && !primitive {
            continue;
        }
        let nonsymmetric = crate::scheme::nonsymmetric_pair_count(&sys, &partition) > 0;
        let oracle_verified = if cfg.oracle_check {
            Some(brute_force_verify(
                sys.field(),
                &relation_labels(&sys, &partition),
            )?)
        } else {
            None
        };
        found.push(Survivor {
            partition,
            is_primitive: primitive,
            nonsymmetric,
            oracle_verified,
        });
    }
    found.sort_by(|a, b| {
        (a.partition.class_count(), a.partition.parts())
            .cmp(&(b.partition.class_count(), b.partition.parts()))
    });
    Ok(SearchOutcome {
        p: cfg.p,
        n,
        checked,
        checked_by_classes,
        signature_passes,
        found,
    })
}

/// Counts the restricted growth strings the enumerator visits for `d` blocks
/// of `Z_n`, without any filtering.
pub fn enumerate_count(n: usize, d: usize) -> u128 {
    fn go(i: usize, used: usize, n: usize, d: usize) -> u128 {
        if i == n {
            return u128::from(used == d);
        }
        if n - i < d - used {
            return 0;
        }
        let limit = if used < d { used + 1 } else { used };
        (0..limit).map(|b| go(i + 1, used.max(b + 1), n, d)).sum()
    }
    go(0, 0, n, d)
}

/// `(T_0, T_s, T_n)`: indices `i ∈ Z_N` with `tr(γ^i)` zero, a nonzero
/// square, or a nonsquare of `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracePartition {
    pub t0: Vec<usize>,
    pub ts: Vec<usize>,
    pub tn: Vec<usize>,
}

fn check_p(p: u64) -> Result<()> {
    if !is_prime(p) || p % 4 != 3 {
        return Err(Error::PreconditionViolated(format!(
            "p = {p} must be a prime ≡ 3 mod 4"
        )));
    }
    Ok(())
}

pub fn trace_partition(p: u64) -> Result<TracePartition> {
    check_p(p)?;
    let field = FieldSpec::build(p, 2, None)?;
    Ok(trace_partition_in(&field))
}

fn trace_partition_in(field: &FieldSpec) -> TracePartition {
    let p = field.p();
    let n = 2 * (p as usize + 1);
    let squares: Vec<bool> = (0..p)
        .map(|t| t != 0 && crate::arith::pow_mod(t, (p - 1) / 2, p) == 1)
        .collect();
    let mut out = TracePartition {
        t0: Vec::new(),
        ts: Vec::new(),
        tn: Vec::new(),
    };
    for i in 0..n {
        let t = field.trace_of(field.antilog_of(i)) as u64;
        if t == 0 {
            out.t0.push(i);
        } else if squares[t as usize] {
            out.ts.push(i);
        } else {
            out.tn.push(i);
        }
    }
    out
}

/// Result of the trace-set identities over `F_{p^2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceIdentityReport {
    pub p: u64,
    pub partition: TracePartition,
    pub sizes_ok: bool,
    pub t0_ok: bool,
    pub tn_is_shift: bool,
    pub product_identity: bool,
    /// ψ(C_i) = (p-1)/2 on `T_0` and three distinct period values overall.
    pub period_structure: bool,
}

impl TraceIdentityReport {
    pub fn passed(&self) -> bool {
        self.sizes_ok
            && self.t0_ok
            && self.tn_is_shift
            && self.product_identity
            && self.period_structure
    }
}

/// Checks `T_s T_s^{(-1)} = p + ((p-1)/2)(Z_N - ⟨N/2⟩)` in Z[Z_N].
pub fn ts_identity_check(p: u64) -> Result<bool> {
    Ok(trace_identities(p)?.product_identity)
}

pub fn trace_identities(p: u64) -> Result<TraceIdentityReport> {
    check_p(p)?;
    let sys = search_system(p)?;
    let field = sys.field();
    let n = sys.n();
    let half = n / 2;
    let tp = trace_partition_in(field);
    let pu = p as usize;
    let sizes_ok = tp.t0.len() == 2 && tp.ts.len() == pu && tp.tn.len() == pu;
    let t0_ok = tp.t0 == vec![pu.div_ceil(2), 3 * (pu + 1) / 2];
    let mut shifted: Vec<usize> = tp.ts.iter().map(|&i| (i + half) % n).collect();
    shifted.sort_unstable();
    let tn_is_shift = shifted == tp.tn;

    // T_s read directly off L = {x : tr(x) = 1}
    let mut from_l: Vec<usize> = field
        .elements()
        .filter(|&x| x != 0 && field.trace_of(x) == 1)
        .map(|x| field.log_of(x) as usize % n)
        .collect();
    from_l.sort_unstable();
    let ts = GroupRingElem::from_set(n, &from_l);
    let lhs = gr_mul(&ts, &gr_involution(&ts))?;
    let all = GroupRingElem::from_coeffs(vec![1; n]);
    let subgroup = GroupRingElem::from_set(n, &[0, half]);
    let rhs = GroupRingElem::basis(n, 0)
        .scale(p as i64)
        .add(&all.sub(&subgroup)?.scale(((p - 1) / 2) as i64))?;
    let product_identity = from_l == tp.ts && lhs == rhs;

    let m = CycInt::from_int(p, (p - 1) / 2);
    let mut values: Vec<&CycInt> = sys.periods().iter().collect();
    values.sort();
    values.dedup();
    let period_structure = tp.t0.iter().all(|&i| *sys.period(i) == m) && values.len() == 3;

    Ok(TraceIdentityReport {
        p,
        partition: tp,
        sizes_ok,
        t0_ok,
        tn_is_shift,
        product_identity,
        period_structure,
    })
}

#[cfg(test)]
mod tests;
