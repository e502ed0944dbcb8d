//! Gauss sums: direct floating-point summation and closed-form evaluations
//! (quadratic, index 2, Davenport–Hasse lifting).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{cyclic_subgroup, euler_phi, gcd, is_prime, multiplicative_order, pow_mod};
use crate::cyclotomy::CyclotomicSystem;
use crate::error::{Error, Result};
use crate::finite_field::FieldSpec;
use crate::json::complex_pair;

/// Multiplicative character `χ(γ^j) = e^{2πi k j / (q-1)}`.
#[derive(Clone, Copy, Debug)]
pub struct MultChar<'a> {
    field: &'a FieldSpec,
    k: u64,
}

impl<'a> MultChar<'a> {
    pub fn new(field: &'a FieldSpec, k: i64) -> Self {
        let k = k.rem_euclid(field.order() as i64) as u64;
        MultChar { field, k }
    }

    /// The character of order `n` with `χ(γ) = e^{2πi/n}`, raised to `e`.
    pub fn of_order(field: &'a FieldSpec, n: u64, e: i64) -> Result<Self> {
        if n == 0 || !field.order().is_multiple_of(n) {
            return Err(Error::NotADivisor {
                n,
                q_minus_one: field.order(),
            });
        }
        let step = (field.order() / n) as i64;
        Ok(Self::new(field, e.rem_euclid(n as i64) * step))
    }

    pub fn field(&self) -> &'a FieldSpec {
        self.field
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn is_trivial(&self) -> bool {
        self.k == 0
    }

    pub fn order(&self) -> u64 {
        self.field.order() / gcd(self.k, self.field.order())
    }

    pub fn pow(&self, e: i64) -> Self {
        let n = self.field.order() as i128;
        let k = (self.k as i128 * e as i128).rem_euclid(n);
        MultChar {
            field: self.field,
            k: k as u64,
        }
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    /// χ(γ^j).
    pub fn at_log(&self, j: u64) -> Complex64 {
        let n = self.field.order();
        let r = ((self.k as u128 * j as u128) % n as u128) as f64 / n as f64;
        Complex64::from_polar(1.0, 2.0 * PI * r)
    }

    /// χ(-1) as ±1.
    pub fn at_minus_one(&self) -> i64 {
        let q = self.field.q();
        if q.is_multiple_of(2) || self.k.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// `Σ_{x ≠ 0} ψ(x) χ(x)` summed in a fixed order.
pub fn gauss_sum_direct(chi: &MultChar) -> Complex64 {
    let field = chi.field;
    let p = field.p() as u128;
    let order = field.order() as u128;
    let modulus = p * order;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for j in 0..field.order() {
        let x = field.antilog_of(j as usize);
        let tr = field.trace_of(x) as u128;
        let phase = (tr * order + chi.k as u128 * j as u128 % order * p) % modulus;
        let term = Complex64::from_polar(1.0, 2.0 * PI * (phase as f64 / modulus as f64));
        // compensated summation keeps large fields accurate
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

fn principal_sqrt_p_star(p: u64) -> Complex64 {
    let r = (p as f64).sqrt();
    if p % 4 == 1 {
        Complex64::new(r, 0.0)
    } else {
        Complex64::new(0.0, r)
    }
}

/// `G_q(η) = (-1)^{f-1} (√p*)^f` for the quadratic character of `F_{p^f}`.
pub fn gauss_sum_quadratic(p: u64, f: u32) -> Result<Complex64> {
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if f == 0 {
        return Err(Error::DegreeZero);
    }
    let sign = if (f - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(principal_sqrt_p_star(p).powu(f) * sign)
}

/// Class number of Q(√-p1) by counting reduced forms of discriminant -p1.
pub fn class_number(p1: u64) -> Result<u64> {
    if p1 % 4 != 3 || !is_prime(p1) {
        return Err(Error::BadDiscriminant(p1));
    }
    let disc = p1 as i64;
    let mut h = 0;
    let mut a: i64 = 1;
    while 3 * a * a <= disc {
        for b in -a..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b + disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            if (b.abs() == a || a == c) && b < 0 {
                continue;
            }
            let g = gcd(gcd(a as u64, b.unsigned_abs()), c as u64);
            if g == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    Ok(h)
}

fn isqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    Some(r)
}

/// The integers `(b, c)`, `c ≥ 0`, with `4p^h = b² + p1 c²` and
/// `b p^{(f-h)/2} ≡ -2 (mod p1)`.
pub fn solve_bc(p: u64, p1: u64, h: u64, f: u64) -> Result<(i64, i64)> {
    if f < h || !(f - h).is_multiple_of(2) {
        return Err(Error::PreconditionViolated(format!(
            "f - h = {f} - {h} must be a nonnegative even number"
        )));
    }
    let target = 4 * (p as i128).checked_pow(h as u32).ok_or(Error::NoSolution)?;
    let bound = isqrt(target).expect("positive");
    let twist = pow_mod(p % p1, (f - h) / 2, p1) as i128;
    let p1i = p1 as i128;
    let mut found = Vec::new();
    for b in -bound..=bound {
        let rest = target - b * b;
        if rest % p1i != 0 {
            continue;
        }
        let Some(c) = isqrt(rest / p1i) else { continue };
        if c * c * p1i != rest {
            continue;
        }
        if (b * twist + 2).rem_euclid(p1i) == 0 {
            found.push((b as i64, c as i64));
        }
    }
    match found.as_slice() {
        [single] => Ok(*single),
        _ => Err(Error::NoSolution),
    }
}

/// Parameters of an index-2 instance: `N = 2 p1^m` with `[Z_N^* : ⟨p⟩] = 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Index2Params {
    pub p: u64,
    pub p1: u64,
    pub m: u32,
    pub h: u64,
    pub b: i64,
    pub c: i64,
    pub f: u32,
}

impl Index2Params {
    pub fn new(p: u64, p1: u64, m: u32) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::PreconditionViolated(format!(
                "p = {p} must be an odd prime"
            )));
        }
        if p1 <= 3 || p1 % 4 != 3 || !is_prime(p1) {
            return Err(Error::PreconditionViolated(format!(
                "p1 = {p1} must be a prime > 3 with p1 ≡ 3 mod 4"
            )));
        }
        if m == 0 {
            return Err(Error::PreconditionViolated("m must be positive".into()));
        }
        let n = 2 * p1.pow(m);
        let f = multiplicative_order(p, n)
            .map_err(|_| Error::PreconditionViolated(format!("p = {p} is not a unit mod {n}")))?;
        if 2 * f != euler_phi(n) {
            return Err(Error::PreconditionViolated(format!(
                "⟨{p}⟩ does not have index 2 in Z_{n}^*"
            )));
        }
        let h = class_number(p1)?;
        let (b, c) = solve_bc(p, p1, h, f)?;
        Ok(Index2Params {
            p,
            p1,
            m,
            h,
            b,
            c,
            f: f as u32,
        })
    }

    pub fn n(&self) -> u64 {
        2 * self.p1.pow(self.m)
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.f)
    }
}

/// Closed form for `G_q(χ^g)` with `g | N`, where `c_sign` selects `±c`.
fn index2_divisor_value(params: &Index2Params, g: u64, c_sign: i64) -> Complex64 {
    let n = params.n();
    let p = params.p as f64;
    let f = params.f as i64;
    let h = params.h as i64;
    let half = ((params.p - 1) / 2) as i64;
    let sign = |e: i64| if e.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let sqrt_ps = principal_sqrt_p_star(params.p);
    let theta = Complex64::new(
        params.b as f64 / 2.0,
        (c_sign * params.c) as f64 * (params.p1 as f64).sqrt() / 2.0,
    );
    if g == n {
        return Complex64::new(-1.0, 0.0);
    }
    if g == n / 2 {
        return sqrt_ps * sign(half * ((f - 1) / 2)) * p.powf(((f - 1) / 2) as f64);
    }
    let m = params.m as i64;
    if g % 2 == 1 {
        let pt = g as i64;
        if params.p1 % 8 == 3 {
            let power = p.powf((f - 1) as f64 / 2.0 - (h * pt) as f64);
            sqrt_ps * theta.powi((2 * pt) as i32) * sign(half * (m - 1)) * power
        } else {
            sqrt_ps * sign(half * m) * p.powf(((f - 1) / 2) as f64)
        }
    } else {
        let pt = (g / 2) as i64;
        theta.powi(pt as i32) * p.powf((f - pt * h) as f64 / 2.0)
    }
}

/// Both candidate values (for `+c` and `-c`) of `G_{q^s}(χ'^e)` where `χ`
/// has order `N` on `F_q` and `χ'` is its lift to `F_{q^s}`.
pub fn gauss_sum_index2(
    params: &Index2Params,
    chi_exponent: i64,
    s: u32,
) -> Result<[Complex64; 2]> {
    if s == 0 {
        return Err(Error::PreconditionViolated(
            "lifting degree must be ≥ 1".into(),
        ));
    }
    let n = params.n();
    let e = chi_exponent.rem_euclid(n as i64) as u64;
    let g = gcd(e, n);
    let u = (e / g) % (n / g).max(1);
    let modulus = n / g;
    let in_subgroup = modulus <= 2 || cyclic_subgroup(params.p % modulus, modulus).contains(&u);
    let q = params.q();
    let mut out = [Complex64::new(0.0, 0.0); 2];
    for (slot, c_sign) in out.iter_mut().zip([1, -1]) {
        let base = index2_divisor_value(params, g, c_sign);
        let value = if in_subgroup {
            base
        } else {
            // χ^g(-1) = (-1)^{g (q-1)/N}
            let chi_minus_one = if (g * ((q - 1) / n)).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            base.conj() * chi_minus_one
        };
        let lift_sign = if s % 2 == 1 { 1.0 } else { -1.0 };
        *slot = value.powu(s) * lift_sign;
    }
    Ok(out)
}

/// `G_{q^s}(χ∘N)` computed directly and via `(-1)^{s-1} G_q(χ)^s`.
pub fn davenport_hasse_check(chi: &MultChar, s: u32) -> Result<(Complex64, Complex64)> {
    if s == 0 {
        return Err(Error::PreconditionViolated(
            "lifting degree must be ≥ 1".into(),
        ));
    }
    let small = chi.field;
    let big = FieldSpec::build(small.p(), small.f() * s, None)?;
    let lifted_k = lifted_exponent(small, &big, chi.k)?;
    let lifted = MultChar {
        field: &big,
        k: lifted_k,
    };
    let direct = gauss_sum_direct(&lifted);
    let sign = if s % 2 == 1 { 1.0 } else { -1.0 };
    let formula = gauss_sum_direct(chi).powu(s) * sign;
    Ok((direct, formula))
}

/// Exponent `k'` on `big` of the character `χ_k ∘ Norm`, found by locating
/// the image of the small field's generator as a root of its modulus.
fn lifted_exponent(small: &FieldSpec, big: &FieldSpec, k: u64) -> Result<u64> {
    let q = small.order();
    let big_order = big.order();
    if !big.f().is_multiple_of(small.f()) || big.p() != small.p() {
        return Err(Error::PreconditionViolated(
            "target field is not an extension".into(),
        ));
    }
    let cofactor = big_order / q;
    let modulus = small.modulus();
    let evaluate = |x: u64| {
        // modulus is stored constant term first
        let mut acc = 0u64;
        for &coef in modulus.iter().rev() {
            acc = big.add(big.mul(acc, x), big.from_prime_field(coef));
        }
        acc
    };
    // δ = γ'^{(Q-1)/(q-1)} generates the subfield; find t with δ^t ↦ γ.
    for t in 1..q {
        if gcd(t, q) != 1 {
            continue;
        }
        let candidate = big.exp((cofactor * t) as i64);
        if evaluate(candidate) == 0 {
            let t_inv = crate::arith::inv_mod(t, q).expect("unit");
            let k_small = (k as u128 * t_inv as u128 % q as u128) as u64;
            return Ok(k_small * cofactor);
        }
    }
    Err(Error::PreconditionViolated(
        "no embedding of the subfield generator found".into(),
    ))
}

/// Per-exponent comparison of the index-2 closed form with direct sums.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Index2Entry {
    pub exponent: u64,
    pub direct: [f64; 2],
    pub formula: [f64; 2],
    pub abs_err: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Index2Report {
    pub params: Index2Params,
    pub s: u32,
    pub q: u64,
    /// Whether the `+c` (0) or `-c` (1) candidate was selected.
    pub candidate: usize,
    pub max_abs_err: f64,
    pub tolerance: f64,
    pub entries: Vec<Index2Entry>,
}

impl Index2Report {
    pub fn passed(&self) -> bool {
        self.max_abs_err < self.tolerance
    }
}

/// Compares the closed forms with direct summation over `F_{p^{fs}}` for every
/// exponent of the order-`N` character, choosing the better global sign.
pub fn index2_discrepancy(params: &Index2Params, s: u32, cap: u64) -> Result<Index2Report> {
    let field = FieldSpec::build_with_cap(params.p, params.f * s, None, cap)?;
    let n = params.n();
    let mut direct = Vec::with_capacity(n as usize);
    let mut formulas = Vec::with_capacity(n as usize);
    for e in 0..n {
        let chi = MultChar::of_order(&field, n, e as i64)?;
        direct.push(gauss_sum_direct(&chi));
        formulas.push(gauss_sum_index2(params, e as i64, s)?);
    }
    let err_for = |cand: usize| {
        direct
            .iter()
            .zip(&formulas)
            .map(|(d, f)| (d - f[cand]).norm())
            .fold(0.0, f64::max)
    };
    let candidate = if err_for(0) <= err_for(1) { 0 } else { 1 };
    let entries: Vec<Index2Entry> = (0..n)
        .map(|e| {
            let d = direct[e as usize];
            let f = formulas[e as usize][candidate];
            Index2Entry {
                exponent: e,
                direct: complex_pair(d),
                formula: complex_pair(f),
                abs_err: (d - f).norm(),
            }
        })
        .collect();
    let q = field.q();
    Ok(Index2Report {
        params: params.clone(),
        s,
        q,
        candidate,
        max_abs_err: err_for(candidate),
        tolerance: 1e-5 * (q as f64).sqrt(),
        entries,
    })
}

/// Gauss period `η_i` recovered in floating point from Gauss sums:
/// `η_i = (1/N) Σ_j G(φ^{-j}) φ^j(γ^i)` with `φ` of order `N`.
pub fn period_from_gauss_sums(sys: &CyclotomicSystem, i: usize) -> Result<Complex64> {
    let field = sys.field();
    let n = sys.n() as u64;
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let phi = MultChar::of_order(field, n, j as i64)?;
        let g = gauss_sum_direct(&phi.inverse());
        total += g * Complex64::from_polar(1.0, 2.0 * PI * ((i as u64 * j) % n) as f64 / n as f64);
    }
    Ok(total / n as f64)
}
