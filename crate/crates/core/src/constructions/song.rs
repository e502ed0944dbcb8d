use itertools::Itertools;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::system;
use crate::arith::gcd;
use crate::cycint::CycInt;
use crate::error::{Error, Result};
use crate::json::ComplexMatrix;
use crate::partition::IndexPartition;
use crate::scheme::{
    eigenmatrices, intersection_numbers, is_translation_scheme, nonsymmetric_pair_count,
    IntersectionMatrices,
};

const GOLDEN: &str = include_str!("../../fixtures/song_golden.json");

/// Published data for the four-class scheme over `F_{37^3}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SongGolden {
    pub p: u64,
    pub f: u32,
    pub n: usize,
    pub i1: Vec<usize>,
    pub j1: Vec<usize>,
    pub shift: usize,
    pub g: i64,
    pub g_cyclotomic: i64,
    pub rho_integer: i64,
    pub rho_period_coefficient: i64,
    pub intersection_matrices: IntersectionMatrices,
}

pub fn song_golden() -> SongGolden {
    serde_json::from_str(GOLDEN).expect("bundled fixture is valid")
}

fn shifted_family(base: &[usize], shift: usize, n: usize) -> IndexPartition {
    let parts = (0..n / shift)
        .map(|k| base.iter().map(|&i| (i + k * shift) % n).collect())
        .collect();
    IndexPartition::new(n, parts).expect("translates of the base set tile Z_N")
}

/// `{I_1, I_1 + 7, I_1 + 14, I_1 + 21}` over `Z_28` and the published data.
pub fn song_example() -> (IndexPartition, SongGolden) {
    let golden = song_golden();
    (shifted_family(&golden.i1, golden.shift, golden.n), golden)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitHit {
    pub u: usize,
    pub v: usize,
    pub partition: IndexPartition,
}

/// First `(u, v)` in lexicographic order whose image `u·I + v` satisfies `accept`.
pub fn affine_orbit_search<F>(partition: &IndexPartition, accept: F) -> Result<OrbitHit>
where
    F: Fn(&IndexPartition) -> Result<bool> + Sync,
{
    let n = partition.n();
    let maps: Vec<(usize, usize)> = (1..n.max(2))
        .filter(|&u| gcd(u as u64, n as u64) == 1)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .collect();
    let hit = maps
        .par_iter()
        .map(|&(u, v)| {
            let image = partition.affine_image(u, v)?;
            Ok(accept(&image)?.then_some(OrbitHit {
                u,
                v,
                partition: image,
            }))
        })
        .filter_map(|r: Result<Option<OrbitHit>>| r.transpose())
        .find_first(|_| true);
    match hit {
        Some(r) => r,
        None => Err(Error::NoOrbitMemberVerifies),
    }
}

/// An affine map `(u, v)` of `Z_N` carrying `a` onto `b` setwise.
pub fn equal_up_to_affine(a: &IndexPartition, b: &IndexPartition) -> Option<(usize, usize)> {
    let n = a.n();
    if n != b.n() {
        return None;
    }
    (1..n.max(2))
        .filter(|&u| gcd(u as u64, n as u64) == 1)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .find(|&(u, v)| {
            a.affine_image(u, v)
                .map(|img| img.same_setwise(b))
                .unwrap_or(false)
        })
}

/// A relabeling `π` of the nonprincipal classes (`π[0] = 0`) with
/// `computed[π(i)][π(k)][π(j)] = golden[i][k][j]` for all `i, j, k ≥ 1`.
/// `golden` lists only the nonprincipal matrices `B_1..B_d`.
pub fn match_relabeling(
    computed: &IntersectionMatrices,
    golden: &IntersectionMatrices,
) -> Option<Vec<usize>> {
    let d = golden.len();
    if computed.len() != d + 1 {
        return None;
    }
    permutations(d).into_iter().find_map(|perm| {
        let pi: Vec<usize> = std::iter::once(0)
            .chain(perm.iter().map(|&x| x + 1))
            .collect();
        let ok = golden.iter().enumerate().all(|(i0, b)| {
            let i = i0 + 1;
            (0..=d).all(|k| (0..=d).all(|j| computed[pi[i]][pi[k]][pi[j]] == b[k][j]))
        });
        ok.then_some(pi)
    })
}

/// The 5×5 template `P` for a skew fission of a conference graph.
pub fn ma_wang_template(q: u64, g: i64) -> Result<ComplexMatrix> {
    if q % 8 != 5 {
        return Err(Error::TemplatePreconditionViolated(format!(
            "q = {q} is not ≡ 5 mod 8"
        )));
    }
    if g.rem_euclid(4) != 1 {
        return Err(Error::TemplatePreconditionViolated(format!(
            "g = {g} is not ≡ 1 mod 4"
        )));
    }
    let rest = q as i128 - (g as i128) * (g as i128);
    let h2 = rest / 4;
    let h = (h2.max(0) as f64).sqrt().round() as i128;
    if rest < 0 || rest % 4 != 0 || h * h != h2 {
        return Err(Error::TemplatePreconditionViolated(format!(
            "q - g² = {rest} is not 4h² for an integer h"
        )));
    }
    let qf = q as f64;
    let sq = qf.sqrt();
    let f = Complex64::new((qf - 1.0) / 4.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let gf = g as f64;
    // Re ρ = (-1 + √q)/4 pairs with |Im ρ| = √(2q + 2g√q)/4.
    let rho = (Complex64::new(-1.0 + sq, 0.0)
        + Complex64::new(-2.0 * qf - 2.0 * gf * sq, 0.0).sqrt())
        / 4.0;
    let tau = (Complex64::new(-1.0 - sq, 0.0)
        + Complex64::new(-2.0 * qf + 2.0 * gf * sq, 0.0).sqrt())
        / 4.0;
    let (rb, tb) = (rho.conj(), tau.conj());
    Ok(ComplexMatrix(vec![
        vec![one, f, f, f, f],
        vec![one, rho, tau, rb, tb],
        vec![one, tau, rb, tb, rho],
        vec![one, rb, tb, rho, tau],
        vec![one, tb, rho, tau, rb],
    ]))
}

/// Smallest max-entry distance between `p` and `template` over independent
/// permutations of the nonprincipal rows and columns.
pub fn template_distance(p: &ComplexMatrix, template: &ComplexMatrix) -> f64 {
    let d = template.dim();
    if p.dim() != d {
        return f64::INFINITY;
    }
    let a = p.rows();
    let t = template.rows();
    let perms = permutations(d - 1);
    let mut best = f64::INFINITY;
    for cols in &perms {
        let col = |j: usize| if j == 0 { 0 } else { cols[j - 1] + 1 };
        for rows in &perms {
            let row = |i: usize| if i == 0 { 0 } else { rows[i - 1] + 1 };
            let mut worst: f64 = 0.0;
            for i in 0..d {
                for j in 0..d {
                    worst = worst.max((a[row(i)][col(j)] - t[i][j]).norm());
                }
            }
            best = best.min(worst);
        }
    }
    best
}

/// Outcome of reproducing the four-class example over `F_{37^3}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SongReport {
    pub affine_map: (usize, usize),
    pub partition: IndexPartition,
    pub class_count: usize,
    pub nonsymmetric_pair_count: usize,
    pub intersection_matrices: IntersectionMatrices,
    /// `relabeling[i]` is the computed class playing the role of published class `i`.
    pub relabeling: Option<Vec<usize>>,
    pub dual_parts: Vec<Vec<usize>>,
    pub dual_affine_map: Option<(usize, usize)>,
    pub template_g: i64,
    pub template_error: f64,
    pub rho: CycInt,
    pub rho_is_entry: bool,
    pub cyclotomic_template_g: i64,
    pub cyclotomic_template_error: f64,
    pub cyclotomic_rho_is_entry: bool,
    pub tolerance: f64,
}

impl SongReport {
    pub fn golden_match(&self) -> bool {
        self.class_count == 4 && self.nonsymmetric_pair_count == 2 && self.relabeling.is_some()
    }

    pub fn dual_match(&self) -> bool {
        self.dual_affine_map.is_some()
    }

    pub fn passed(&self) -> bool {
        self.golden_match()
            && self.dual_match()
            && self.template_error < self.tolerance
            && self.rho_is_entry
            && self.cyclotomic_template_error < self.tolerance
    }
}

fn entries(p_exact: &[Vec<CycInt>]) -> impl Iterator<Item = &CycInt> {
    p_exact.iter().flatten()
}

/// Builds `F_{37^3}`, finds a verifying affine image of the published index
/// sets, and checks every published artifact against it.
pub fn song_reproduce() -> Result<SongReport> {
    let (partition, golden) = song_example();
    let sys = system(golden.p, golden.f, golden.n)?;
    let hit =
        affine_orbit_search(&partition, |candidate| {
            Ok(is_translation_scheme(&sys, candidate)?
                && nonsymmetric_pair_count(&sys, candidate) == 2)
        })?;
    let found = &hit.partition;
    let b = intersection_numbers(&sys, found)?;
    let relabeling = match_relabeling(&b, &golden.intersection_matrices);
    let eig = eigenmatrices(&sys, found)?;
    let expected_dual = shifted_family(&golden.j1, golden.shift, golden.n);
    let dual_affine_map = equal_up_to_affine(&eig.dual, &expected_dual);
    let q = sys.field().q();
    let template_error = template_distance(&eig.p_complex, &ma_wang_template(q, golden.g)?);

    let small = system(golden.p, 1, 4)?;
    let eta = small.periods();
    let p = golden.p;
    let rho = CycInt::from_int(p, golden.rho_integer) + eta[0].scale(golden.rho_period_coefficient);
    let rho_is_entry = entries(&eig.p_exact).any(|x| *x == rho);

    let cyclo = system(golden.p, golden.f, 4)?;
    let cyclo_eig = eigenmatrices(&cyclo, &IndexPartition::singletons(4))?;
    let cyclotomic_template_error = template_distance(
        &cyclo_eig.p_complex,
        &ma_wang_template(q, golden.g_cyclotomic)?,
    );
    // ρ = 8 + 35η_0 + 5η_1 - 7η_3; η_1 and η_3 trade places with the generator.
    let cyclo_rho = |e1: usize, e3: usize| {
        CycInt::from_int(p, 8) + eta[0].scale(35) + eta[e1].scale(5) - eta[e3].scale(7)
    };
    let cyclotomic_rho_is_entry = [cyclo_rho(1, 3), cyclo_rho(3, 1)]
        .iter()
        .any(|r| entries(&cyclo_eig.p_exact).any(|x| x == r));

    Ok(SongReport {
        affine_map: (hit.u, hit.v),
        partition: found.clone(),
        class_count: found.class_count(),
        nonsymmetric_pair_count: nonsymmetric_pair_count(&sys, found),
        intersection_matrices: b,
        relabeling,
        dual_parts: eig.dual.parts().to_vec(),
        dual_affine_map,
        template_g: golden.g,
        template_error,
        rho,
        rho_is_entry,
        cyclotomic_template_g: golden.g_cyclotomic,
        cyclotomic_template_error,
        cyclotomic_rho_is_entry,
        tolerance: 1e-6,
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    (0..n).permutations(n).collect()
}
