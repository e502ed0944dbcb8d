//! Fission schemes built from index-2 cyclotomy, and the 28-class example
//! over `F_{37^3}`.

mod song;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{cyclic_subgroup, euler_phi, is_prime, multiplicative_order};
use crate::cycint::CycInt;
use crate::cyclotomy::CyclotomicSystem;
use crate::error::{Error, Result};
use crate::finite_field::FieldSpec;
use crate::gauss::{class_number, Index2Params};
use crate::partition::IndexPartition;
use crate::scheme::is_translation_scheme;

pub use song::{
    affine_orbit_search, equal_up_to_affine, ma_wang_template, match_relabeling, song_example,
    song_golden, song_reproduce, template_distance, OrbitHit, SongGolden, SongReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    ThreeClassBase,
    FourClass7Mod8,
    FiveClass3Mod8,
    Conference7Mod8,
    SongExample,
}

impl ConstructionKind {
    pub const ALL: [ConstructionKind; 5] = [
        ConstructionKind::ThreeClassBase,
        ConstructionKind::FourClass7Mod8,
        ConstructionKind::FiveClass3Mod8,
        ConstructionKind::Conference7Mod8,
        ConstructionKind::SongExample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstructionKind::ThreeClassBase => "three_class_base",
            ConstructionKind::FourClass7Mod8 => "four_class_7mod8",
            ConstructionKind::FiveClass3Mod8 => "five_class_3mod8",
            ConstructionKind::Conference7Mod8 => "conference_7mod8",
            ConstructionKind::SongExample => "song_example",
        }
    }
}

impl fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConstructionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|k| k.name() == wanted)
            .ok_or_else(|| Error::ParseError(format!("unknown construction kind {s:?}")))
    }
}

/// Which coset of `⟨p⟩` mod `p1` is placed in `S_1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Standard,
    Negated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FissionSpec {
    pub kind: ConstructionKind,
    pub p: u64,
    pub p1: u64,
    pub m: u32,
    pub s: u32,
    pub i0: Option<Vec<usize>>,
}

impl FissionSpec {
    pub fn new(kind: ConstructionKind, p: u64, p1: u64) -> Self {
        FissionSpec {
            kind,
            p,
            p1,
            m: 1,
            s: 1,
            i0: None,
        }
    }
}

fn violated(msg: impl Into<String>) -> Error {
    Error::PreconditionViolated(msg.into())
}

/// Checks `[Z_{2p1^m}^* : ⟨p⟩] = 2` and returns `f = φ(2p1^m)/2`.
pub fn index2_degree(p: u64, p1: u64, m: u32) -> Result<u32> {
    if p == 2 || !is_prime(p) {
        return Err(violated(format!("p = {p} must be an odd prime")));
    }
    if p1 <= 3 || p1 % 4 != 3 || !is_prime(p1) {
        return Err(violated(format!(
            "p1 = {p1} must be a prime > 3 with p1 ≡ 3 mod 4"
        )));
    }
    if m == 0 {
        return Err(violated("m must be positive"));
    }
    let n = p1
        .checked_pow(m)
        .and_then(|x| x.checked_mul(2))
        .ok_or_else(|| violated("2·p1^m overflows"))?;
    let f = multiplicative_order(p, n)
        .map_err(|_| violated(format!("p = {p} is not a unit mod {n}")))?;
    if 2 * f != euler_phi(n) {
        return Err(violated(format!("⟨{p}⟩ does not have index 2 in Z_{n}^*")));
    }
    u32::try_from(f).map_err(|_| violated("extension degree overflows"))
}

fn subgroup(p: u64, modulus: u64) -> Vec<usize> {
    cyclic_subgroup(p % modulus, modulus)
        .into_iter()
        .map(|x| x as usize)
        .collect()
}

fn negate(set: &[usize], n: usize) -> Vec<usize> {
    set.iter().map(|&i| (n - i % n) % n).collect()
}

/// Each `j ∈ Z_{p1}` lifted to both `j` and `j + p1` in `Z_{2p1}`.
fn lifts(set: &[usize], p1: usize) -> Vec<usize> {
    set.iter().flat_map(|&j| [j, j + p1]).collect()
}

/// `{⟨p⟩ mod p1, -⟨p⟩ mod p1, {0}}` as index sets of `Z_{p1}`.
pub fn three_class_base(p: u64, p1: u64, s: u32) -> Result<IndexPartition> {
    index2_degree(p, p1, 1)?;
    if s == 0 {
        return Err(violated("s must be positive"));
    }
    let n = p1 as usize;
    let r1 = subgroup(p, p1);
    let r2 = negate(&r1, n);
    IndexPartition::new(n, vec![r1, r2, vec![0]])
}

/// `S_1, S_2` lift `±⟨p⟩ mod p1`; `S_3 = {0}`, `S_4 = {p1}` in `Z_{2p1}`.
pub fn four_class_7mod8(p: u64, p1: u64, s: u32) -> Result<IndexPartition> {
    if p1 % 8 != 7 {
        return Err(violated(format!("p1 = {p1} must be ≡ 7 mod 8")));
    }
    let base = three_class_base(p, p1, s)?;
    let k = p1 as usize;
    IndexPartition::new(
        2 * k,
        vec![
            lifts(base.part(0), k),
            lifts(base.part(1), k),
            vec![0],
            vec![k],
        ],
    )
}

/// The five index sets over `Z_{2p1^m}` (for `m = 1`, `S_2 = -⟨p⟩ mod 2p1`,
/// `S_3 = S_2 + p1`, `S_4 = {0}`, `S_5 = {p1}`).
pub fn five_class_index_sets(
    p: u64,
    p1: u64,
    m: u32,
    orientation: Orientation,
) -> Result<IndexPartition> {
    if p1 % 8 != 3 {
        return Err(violated(format!("p1 = {p1} must be ≡ 3 mod 8")));
    }
    index2_degree(p, p1, m)?;
    let h = class_number(p1)?;
    if (p as u128).checked_pow(h as u32).map(|x| 4 * x) != Some(1 + p1 as u128) {
        return Err(violated(format!("1 + p1 = {} is not 4·{p}^{h}", 1 + p1)));
    }
    let top = p1.pow(m) as usize;
    let step = p1.pow(m - 1) as usize;
    let n = 2 * top;
    let pm = p1 as usize;
    let mut plus = subgroup(p, p1);
    let mut minus2 = negate(&subgroup(p, 2 * p1), 2 * pm);
    if orientation == Orientation::Negated {
        plus = negate(&plus, pm);
        minus2 = subgroup(p, 2 * p1);
    }
    let mut s1 = Vec::new();
    let mut s2 = Vec::new();
    let mut s4 = Vec::new();
    for i in 0..step {
        for &j in &plus {
            let base = (2 * i + step * j) % top;
            s1.push(base);
            s1.push(base + top);
        }
        for &j in &minus2 {
            s2.push((2 * i + step * j) % n);
        }
        s4.push(2 * i % n);
    }
    let s3: Vec<usize> = s2.iter().map(|&i| (i + top) % n).collect();
    let s5: Vec<usize> = s4.iter().map(|&i| (i + top) % n).collect();
    IndexPartition::new(n, vec![s1, s2, s3, s4, s5])
}

#[derive(Clone, Debug)]
pub struct FiveClass {
    pub partition: IndexPartition,
    /// `None` when no field-level check was possible (`m ≥ 2`).
    pub orientation: Option<Orientation>,
    pub alternative_verifies: Option<bool>,
}

/// Five-class fission; for `m = 1` both orientations are verified over
/// `F_{p^f}` and the one that is a scheme is returned.
pub fn five_class_3mod8(p: u64, p1: u64, m: u32) -> Result<FiveClass> {
    let standard = five_class_index_sets(p, p1, m, Orientation::Standard)?;
    if m > 1 {
        return Ok(FiveClass {
            partition: standard,
            orientation: None,
            alternative_verifies: None,
        });
    }
    let f = index2_degree(p, p1, 1)?;
    let sys = system(p, f, 2 * p1 as usize)?;
    five_class_on(&sys, p, p1)
}

/// Orientation trial on an already built system of index `2p1`.
pub fn five_class_on(sys: &CyclotomicSystem, p: u64, p1: u64) -> Result<FiveClass> {
    let standard = five_class_index_sets(p, p1, 1, Orientation::Standard)?;
    let negated = five_class_index_sets(p, p1, 1, Orientation::Negated)?;
    let ok_standard = is_translation_scheme(sys, &standard)?;
    let ok_negated = is_translation_scheme(sys, &negated)?;
    match (ok_standard, ok_negated) {
        (true, false) => Ok(FiveClass {
            partition: standard,
            orientation: Some(Orientation::Standard),
            alternative_verifies: Some(false),
        }),
        (false, true) => Ok(FiveClass {
            partition: negated,
            orientation: Some(Orientation::Negated),
            alternative_verifies: Some(false),
        }),
        (true, true) => Ok(FiveClass {
            partition: standard,
            orientation: Some(Orientation::Standard),
            alternative_verifies: Some(true),
        }),
        (false, false) => Err(Error::OrientationAmbiguous),
    }
}

/// `{I0, Z_{2p1} ∖ I0}` where `I0` holds exactly one lift of each residue mod `p1`.
pub fn conference_7mod8(p: u64, p1: u64, i0: &[usize]) -> Result<IndexPartition> {
    if p1 % 8 != 7 {
        return Err(violated(format!("p1 = {p1} must be ≡ 7 mod 8")));
    }
    if p % 4 != 1 {
        return Err(violated(format!("p = {p} must be ≡ 1 mod 4")));
    }
    index2_degree(p, p1, 1)?;
    let n = 2 * p1 as usize;
    let mut residues: Vec<usize> = i0.iter().map(|&i| i % p1 as usize).collect();
    residues.sort_unstable();
    residues.dedup();
    if i0.len() != p1 as usize || residues.len() != p1 as usize || i0.iter().any(|&i| i >= n) {
        return Err(violated(format!(
            "I0 must contain exactly one element of Z_{n} per residue mod {p1}"
        )));
    }
    let rest: Vec<usize> = (0..n).filter(|i| !i0.contains(i)).collect();
    IndexPartition::new(n, vec![i0.to_vec(), rest])
}

/// Exact check that every nonprincipal eigenvalue `θ` of the first relation
/// satisfies `(2θ + 1)² = q`, i.e. `θ = (-1 ± √q)/2`.
pub fn conference_eigenvalues_hold(
    sys: &CyclotomicSystem,
    partition: &IndexPartition,
) -> Result<bool> {
    let p = sys.field().p();
    let q = CycInt::from_int(p, sys.field().q());
    let one = CycInt::from_int(p, 1);
    for a in 0..sys.n() {
        let theta = sys.character_sum(partition.part(0), a as i64)?;
        let t = theta.scale(2) + one.clone();
        if &t * &t != q {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cyclotomic system of index `n` over `F_{p^f}` with the default cap.
pub fn system(p: u64, f: u32, n: usize) -> Result<CyclotomicSystem> {
    let field = Arc::new(FieldSpec::build(p, f, None)?);
    CyclotomicSystem::build(field, n)
}

/// Whether `p` has order `fs` modulo `(q^s - 1)/p1`, the primitivity
/// criterion for the three-class base scheme.
pub fn base_primitivity_condition(p: u64, p1: u64, s: u32) -> Result<bool> {
    let f = index2_degree(p, p1, 1)?;
    let fs = f * s;
    let qs = p.checked_pow(fs).ok_or_else(|| violated("q^s overflows"))?;
    Ok(multiplicative_order(p, (qs - 1) / p1)? == u64::from(fs))
}

/// The sufficient condition `p1 > 2h + 1`, `c ≠ 0` for primitivity of the
/// four-class scheme.
pub fn four_class_primitivity_condition(params: &Index2Params) -> bool {
    params.p1 > 2 * params.h + 1 && params.c != 0
}

/// Candidate values of `ψ(γ^a R_3)` for the base scheme with `s = 1`:
/// `(p^{(f-h)/2}·x - 1)/p1` with `x ∈ {(-b ± p1c)/2, b(p1-1)/2}`.
pub fn r3_candidates(params: &Index2Params) -> Vec<f64> {
    let scale = (params.p as f64).powf((params.f as f64 - params.h as f64) / 2.0);
    let p1 = params.p1 as f64;
    let (b, c) = (params.b as f64, params.c as f64);
    [
        (-b + p1 * c) / 2.0,
        (-b - p1 * c) / 2.0,
        b * (p1 - 1.0) / 2.0,
    ]
    .into_iter()
    .map(|x| (scale * x - 1.0) / p1)
    .collect()
}

/// Distinct exact values of `ψ(γ^a R)` over `a ∈ Z_N` for an index set `R`.
pub fn distinct_character_values(
    sys: &CyclotomicSystem,
    index_set: &[usize],
) -> Result<Vec<CycInt>> {
    let mut values: Vec<CycInt> = (0..sys.n())
        .map(|a| sys.character_sum(index_set, a as i64))
        .collect::<Result<_>>()?;
    values.sort();
    values.dedup();
    Ok(values)
}

/// Spot values of `ψ(γ^a S_4)` for a five-class scheme with `m = 1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpotValueCheck {
    pub distinct_values: usize,
    /// No value equals the valency `(q-1)/(2p1)`.
    pub valency_avoided: bool,
    /// For `p ≡ 1 mod 4`: every value lies in the closed-form candidate set.
    pub in_candidate_set: Option<bool>,
}

impl SpotValueCheck {
    pub fn passed(&self) -> bool {
        self.distinct_values <= 5 && self.valency_avoided && self.in_candidate_set != Some(false)
    }
}

pub fn five_class_spot_values(
    sys: &CyclotomicSystem,
    partition: &IndexPartition,
    params: &Index2Params,
) -> Result<SpotValueCheck> {
    let s4 = partition.part(3);
    let values = distinct_character_values(sys, s4)?;
    let q = sys.field().q();
    let valency = CycInt::from_int(sys.field().p(), BigInt::from((q - 1) / (2 * params.p1)));
    let valency_avoided = values.iter().all(|v| *v != valency);
    let in_candidate_set = if params.p % 4 == 1 {
        let candidates: Vec<f64> = [1i64, -1]
            .into_iter()
            .flat_map(|sign| s4_candidates(params, sign))
            .collect();
        Some(values.iter().all(|v| {
            let z: Complex64 = v.embed_complex();
            z.im.abs() < 1e-6 && candidates.iter().any(|c| (z.re - c).abs() < 1e-6)
        }))
    } else {
        None
    };
    Ok(SpotValueCheck {
        distinct_values: values.len(),
        valency_avoided,
        in_candidate_set,
    })
}

fn s4_candidates(params: &Index2Params, c_sign: i64) -> Vec<f64> {
    let p = params.p as f64;
    let f = params.f as f64;
    let h = params.h as f64;
    let p1 = params.p1 as f64;
    let b = params.b as f64;
    let c = (c_sign * params.c) as f64;
    let base = p.powf((f - h) / 2.0);
    let twist = p.powf(f / 2.0 - h) / (2.0 * p1);
    let first = (base * (-b - p1 * c) / 2.0 - 1.0) / (2.0 * p1);
    let second = (base * (-b + p1 * c) / 2.0 - 1.0) / (2.0 * p1);
    let third = (base * (p1 - 1.0) / 2.0 - 1.0) / (2.0 * p1);
    let u = twist * (p.powf(h) + (3.0 * p1 - 1.0) / 4.0);
    let w = twist * (p.powf(h) - (p1 - 1.0).powi(2) / 4.0);
    vec![first, second + u, second - u, third + w, third - w]
}

/// A built construction: its partition and, when the field is in range,
/// the cyclotomic system it lives on.
#[derive(Clone, Debug)]
pub struct Construction {
    pub spec: FissionSpec,
    pub partition: IndexPartition,
    pub system: Option<CyclotomicSystem>,
    pub orientation: Option<Orientation>,
}

pub fn construct(spec: &FissionSpec) -> Result<Construction> {
    let mut orientation = None;
    let (partition, system) = match spec.kind {
        ConstructionKind::ThreeClassBase => {
            let partition = three_class_base(spec.p, spec.p1, spec.s)?;
            let f = index2_degree(spec.p, spec.p1, 1)?;
            (
                partition,
                Some(system(spec.p, f * spec.s, spec.p1 as usize)?),
            )
        }
        ConstructionKind::FourClass7Mod8 => {
            let partition = four_class_7mod8(spec.p, spec.p1, spec.s)?;
            let f = index2_degree(spec.p, spec.p1, 1)?;
            (
                partition,
                Some(system(spec.p, f * spec.s, 2 * spec.p1 as usize)?),
            )
        }
        ConstructionKind::FiveClass3Mod8 => {
            if spec.m > 1 {
                let built = five_class_3mod8(spec.p, spec.p1, spec.m)?;
                (built.partition, None)
            } else {
                five_class_index_sets(spec.p, spec.p1, 1, Orientation::Standard)?;
                let f = index2_degree(spec.p, spec.p1, 1)?;
                let sys = system(spec.p, f, 2 * spec.p1 as usize)?;
                let built = five_class_on(&sys, spec.p, spec.p1)?;
                orientation = built.orientation;
                (built.partition, Some(sys))
            }
        }
        ConstructionKind::Conference7Mod8 => {
            let i0 = spec
                .i0
                .clone()
                .ok_or_else(|| violated("conference construction needs I0"))?;
            let partition = conference_7mod8(spec.p, spec.p1, &i0)?;
            let f = index2_degree(spec.p, spec.p1, 1)?;
            (partition, Some(system(spec.p, f, 2 * spec.p1 as usize)?))
        }
        ConstructionKind::SongExample => {
            let (partition, golden) = song_example();
            (partition, Some(system(golden.p, golden.f, golden.n)?))
        }
    };
    Ok(Construction {
        spec: spec.clone(),
        partition,
        system,
        orientation,
    })
}
