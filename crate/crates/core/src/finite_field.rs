//! Table-driven model of the finite field F_{p^f}.
//!
//! Elements are encoded as integers `0..q` whose base-`p` digits are the
//! coefficients of the element in the power basis `1, γ, …, γ^{f-1}`.
//! The modulus is the lexicographically least primitive polynomial
//! (comparing coefficient lists constant term first), and `γ` is its root.

use serde::{Deserialize, Serialize};

use crate::arith::{checked_pow, is_prime, prime_factors};
use crate::error::{Error, Result};

/// Default bound on `q` so the log/antilog/trace/Zech tables fit in memory.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 26;

const NO_LOG: u32 = u32::MAX;

/// A concrete finite field with discrete-log, trace and Zech tables.
#[derive(Clone)]
pub struct FieldSpec {
    p: u64,
    f: u32,
    q: u64,
    modulus: Vec<u64>,
    digit_weights: Vec<u64>,
    log: Vec<u32>,
    antilog: Vec<u32>,
    trace: Vec<u32>,
    zech: Vec<u32>,
}

/// Serializable description of a field; tables are rebuilt on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub f: u32,
    pub modulus_coeffs: Vec<u64>,
    pub gamma_coeffs: Vec<u64>,
}

impl std::fmt::Debug for FieldSpec {
    fn fmt(&self, fmt: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fmt.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("f", &self.f)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

/// Polynomials over F_p reduced modulo a fixed monic modulus of degree f.
struct PolyRing<'a> {
    p: u64,
    modulus: &'a [u64],
}

impl PolyRing<'_> {
    fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.degree();
        let p = self.p;
        let mut prod = vec![0u64; 2 * f];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % p;
            }
        }
        for k in (f..2 * f).rev() {
            let top = prod[k];
            if top == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..f {
                let sub = top * self.modulus[i] % p;
                prod[k - f + i] = (prod[k - f + i] + p - sub) % p;
            }
        }
        prod.truncate(f);
        prod
    }

    fn pow_x(&self, mut exp: u64) -> Vec<u64> {
        let f = self.degree();
        let mut base = vec![0u64; f];
        if f == 1 {
            base[0] = (self.p - self.modulus[0]) % self.p;
        } else {
            base[1] = 1;
        }
        let mut acc = vec![0u64; f];
        acc[0] = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    fn root_is_primitive(&self, q: u64, factors: &[u64]) -> bool {
        let one = {
            let mut v = vec![0u64; self.degree()];
            v[0] = 1;
            v
        };
        if self.pow_x(q - 1) != one {
            return false;
        }
        factors.iter().all(|&r| self.pow_x((q - 1) / r) != one)
    }
}

impl FieldSpec {
    /// Builds F_{p^f} with the default size cap. `seed` selects the
    /// `seed`-th primitive polynomial in lexicographic order (0 when absent).
    pub fn build(p: u64, f: u32, seed: Option<u64>) -> Result<Self> {
        Self::build_with_cap(p, f, seed, DEFAULT_FIELD_CAP)
    }

    pub fn build_with_cap(p: u64, f: u32, seed: Option<u64>, cap: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if f == 0 {
            return Err(Error::DegreeZero);
        }
        let cap = cap.min(u32::MAX as u64);
        let q = match checked_pow(p, f) {
            Some(q) if q <= cap => q,
            _ => return Err(Error::FieldTooLarge { p, f, cap }),
        };
        let factors = prime_factors(q - 1);
        let mut skip = seed.unwrap_or(0);
        let f_us = f as usize;
        let mut coeffs = vec![0u64; f_us + 1];
        coeffs[f_us] = 1;
        // Constant term is the most significant position of the lexicographic order.
        for index in 0..q {
            let mut rest = index;
            for slot in (0..f_us).rev() {
                coeffs[slot] = rest % p;
                rest /= p;
            }
            if coeffs[0] == 0 {
                continue;
            }
            let ring = PolyRing {
                p,
                modulus: &coeffs,
            };
            if ring.root_is_primitive(q, &factors) {
                if skip == 0 {
                    return Ok(Self::from_primitive_modulus(p, f, coeffs));
                }
                skip -= 1;
            }
        }
        Err(Error::PreconditionViolated(format!(
            "fewer than {} primitive polynomials of degree {f} over F_{p}",
            seed.unwrap_or(0) + 1
        )))
    }

    /// Rebuilds the tables from a serialized descriptor, validating it.
    pub fn from_descriptor(desc: &FieldDescriptor) -> Result<Self> {
        let p = desc.p;
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if desc.f == 0 {
            return Err(Error::DegreeZero);
        }
        let f_us = desc.f as usize;
        if desc.modulus_coeffs.len() != f_us + 1
            || desc.modulus_coeffs[f_us] != 1
            || desc.modulus_coeffs.iter().any(|&c| c >= p)
        {
            return Err(Error::PreconditionViolated(
                "modulus must be monic of degree f with coefficients in F_p".into(),
            ));
        }
        let q = match checked_pow(p, desc.f) {
            Some(q) if q <= DEFAULT_FIELD_CAP => q,
            _ => {
                return Err(Error::FieldTooLarge {
                    p,
                    f: desc.f,
                    cap: DEFAULT_FIELD_CAP,
                })
            }
        };
        let ring = PolyRing {
            p,
            modulus: &desc.modulus_coeffs,
        };
        if !ring.root_is_primitive(q, &prime_factors(q - 1)) {
            return Err(Error::PreconditionViolated(
                "modulus is not a primitive polynomial".into(),
            ));
        }
        let field = Self::from_primitive_modulus(p, desc.f, desc.modulus_coeffs.clone());
        if field.gamma_coeffs() != desc.gamma_coeffs {
            return Err(Error::PreconditionViolated(
                "gamma does not match the modulus root".into(),
            ));
        }
        Ok(field)
    }

    fn from_primitive_modulus(p: u64, f: u32, modulus: Vec<u64>) -> Self {
        let f_us = f as usize;
        let digit_weights: Vec<u64> = (0..f_us).map(|i| p.pow(i as u32)).collect();
        let q = p.pow(f);
        let n = (q - 1) as usize;
        let mut antilog = Vec::with_capacity(n);
        let mut log = vec![NO_LOG; q as usize];
        let mut digits = vec![0u64; f_us];
        digits[0] = 1;
        for k in 0..n {
            let enc: u64 = digits.iter().zip(&digit_weights).map(|(d, w)| d * w).sum();
            antilog.push(enc as u32);
            debug_assert_eq!(log[enc as usize], NO_LOG);
            log[enc as usize] = k as u32;
            // multiply by γ: shift up and reduce the overflow coefficient
            let top = digits[f_us - 1];
            for i in (1..f_us).rev() {
                digits[i] = (digits[i - 1] + p * p - top * modulus[i] % p) % p;
            }
            digits[0] = (p - top * modulus[0] % p) % p;
        }
        let mut field = FieldSpec {
            p,
            f,
            q,
            modulus,
            digit_weights,
            log,
            antilog,
            trace: Vec::new(),
            zech: Vec::new(),
        };
        field.trace = field.build_trace_table();
        field.zech = field.build_zech_table();
        field
    }

    fn build_trace_table(&self) -> Vec<u32> {
        let f = self.f as usize;
        let n = self.q - 1;
        // trace of each basis element γ^i via the Frobenius orbit sum
        let basis_traces: Vec<u64> = (0..f)
            .map(|i| {
                let mut acc = 0u64;
                let mut e = i as u64 % n;
                for _ in 0..f {
                    acc = self.add(acc, self.antilog[e as usize] as u64);
                    e = e * self.p % n;
                }
                debug_assert!(acc < self.p, "trace must land in the prime field");
                acc
            })
            .collect();
        (0..self.q)
            .map(|x| {
                let mut rest = x;
                let mut t = 0u64;
                for bt in &basis_traces {
                    t += (rest % self.p) * bt;
                    rest /= self.p;
                }
                (t % self.p) as u32
            })
            .collect()
    }

    fn build_zech_table(&self) -> Vec<u32> {
        let mut zech = vec![NO_LOG; (self.q - 1) as usize];
        for (k, slot) in zech.iter_mut().enumerate().skip(1) {
            let diff = self.sub(1, self.antilog[k] as u64);
            *slot = self.log[diff as usize];
        }
        zech
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Order of the multiplicative group, `q - 1`.
    pub fn order(&self) -> u64 {
        self.q - 1
    }

    /// Modulus coefficients, constant term first, monic.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Coefficients of γ in the power basis.
    pub fn gamma_coeffs(&self) -> Vec<u64> {
        self.digits(self.gamma())
    }

    pub fn gamma(&self) -> u64 {
        self.antilog[1 % self.antilog.len()] as u64
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            f: self.f,
            modulus_coeffs: self.modulus.clone(),
            gamma_coeffs: self.gamma_coeffs(),
        }
    }

    pub fn digits(&self, x: u64) -> Vec<u64> {
        let mut rest = x;
        (0..self.f)
            .map(|_| {
                let d = rest % self.p;
                rest /= self.p;
                d
            })
            .collect()
    }

    pub fn check(&self, x: u64) -> Result<()> {
        if x < self.q {
            Ok(())
        } else {
            Err(Error::InvalidElement(x))
        }
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        let (mut a, mut b) = (x, y);
        let mut out = 0;
        for w in &self.digit_weights {
            out += ((a % self.p + b % self.p) % self.p) * w;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub fn neg(&self, x: u64) -> u64 {
        let mut a = x;
        let mut out = 0;
        for w in &self.digit_weights {
            out += ((self.p - a % self.p) % self.p) * w;
            a /= self.p;
        }
        out
    }

    pub fn sub(&self, x: u64, y: u64) -> u64 {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        if x == 0 || y == 0 {
            return 0;
        }
        let e = (self.log[x as usize] as u64 + self.log[y as usize] as u64) % (self.q - 1);
        self.antilog[e as usize] as u64
    }

    pub fn pow(&self, x: u64, e: u64) -> u64 {
        if x == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let n = self.q - 1;
        let l = (self.log[x as usize] as u128 * e as u128 % n as u128) as u64;
        self.antilog[l as usize] as u64
    }

    /// The Frobenius map x ↦ x^p.
    pub fn frobenius(&self, x: u64) -> u64 {
        self.pow(x, self.p)
    }

    /// γ^e for any integer exponent.
    pub fn exp(&self, e: i64) -> u64 {
        let n = (self.q - 1) as i64;
        self.antilog[e.rem_euclid(n) as usize] as u64
    }

    /// Embeds a prime-field residue as a field element.
    pub fn from_prime_field(&self, c: u64) -> u64 {
        c % self.p
    }

    pub fn trace(&self, x: u64) -> Result<u64> {
        self.check(x)?;
        Ok(self.trace[x as usize] as u64)
    }

    /// Unchecked trace lookup for hot loops.
    #[inline]
    pub fn trace_of(&self, x: u64) -> u32 {
        self.trace[x as usize]
    }

    pub fn discrete_log(&self, x: u64) -> Result<u64> {
        self.check(x)?;
        if x == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(self.log[x as usize] as u64)
    }

    #[inline]
    pub fn log_of(&self, x: u64) -> u32 {
        self.log[x as usize]
    }

    #[inline]
    pub fn antilog_of(&self, e: usize) -> u64 {
        self.antilog[e] as u64
    }

    /// Discrete log of `γ^a - γ^b`, or `None` when the difference is zero.
    #[inline]
    pub fn log_of_difference(&self, a: u64, b: u64) -> Option<u64> {
        let n = self.q - 1;
        // γ^a - γ^b = γ^a (1 - γ^{b-a})
        let k = (b + n - a) % n;
        if k == 0 {
            return None;
        }
        let z = self.zech[k as usize];
        Some((a + z as u64) % n)
    }

    /// All elements in increasing encoding order.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.q
    }
}

/// ord_n(m), the multiplicative order of `m` modulo `n`.
pub fn multiplicative_order(m: u64, n: u64) -> Result<u64> {
    crate::arith::multiplicative_order(m, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn field_orders() {
        assert_eq!(FieldSpec::build(37, 3, None).unwrap().q(), 50653);
        assert_eq!(FieldSpec::build(3, 5, None).unwrap().q(), 243);
        assert_eq!(FieldSpec::build(11, 3, None).unwrap().q(), 1331);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            FieldSpec::build(9, 2, None).unwrap_err(),
            Error::NotPrime(9)
        );
        assert_eq!(FieldSpec::build(3, 0, None).unwrap_err(), Error::DegreeZero);
        assert!(matches!(
            FieldSpec::build(2, 40, None),
            Err(Error::FieldTooLarge { .. })
        ));
        assert!(matches!(
            FieldSpec::build_with_cap(3, 5, None, 100),
            Err(Error::FieldTooLarge { .. })
        ));
    }

    #[test]
    fn prime_field_uses_least_primitive_polynomial() {
        // x + 2 over F_37 has root -2 = 35, a primitive root; x + 1 has root -1.
        let field = FieldSpec::build(37, 1, None).unwrap();
        assert_eq!(field.modulus(), &[2, 1]);
        assert_eq!(field.gamma(), 35);
        let f2 = FieldSpec::build(2, 1, None).unwrap();
        assert_eq!(f2.q(), 2);
        assert_eq!(f2.discrete_log(1).unwrap(), 0);
    }

    #[test]
    fn trace_examples() {
        let field = FieldSpec::build(3, 5, None).unwrap();
        assert_eq!(field.trace(0).unwrap(), 0);
        assert_eq!(field.trace(1).unwrap(), 2);
        assert_eq!(field.trace(243), Err(Error::InvalidElement(243)));

        let big = FieldSpec::build(37, 3, None).unwrap();
        let mut fibers = [0u64; 37];
        for x in big.elements() {
            fibers[big.trace(x).unwrap() as usize] += 1;
        }
        assert!(fibers.iter().all(|&c| c == 37 * 37));
    }

    #[test]
    fn trace_agrees_with_frobenius_sum() {
        for (p, f) in [(2, 4), (3, 3), (5, 2), (7, 3)] {
            let field = FieldSpec::build(p, f, None).unwrap();
            for x in field.elements() {
                let mut y = x;
                let mut acc = 0;
                for _ in 0..f {
                    acc = field.add(acc, y);
                    y = field.frobenius(y);
                }
                assert_eq!(acc, field.trace(x).unwrap(), "p={p} f={f} x={x}");
            }
        }
    }

    #[test]
    fn discrete_log_examples() {
        let field = FieldSpec::build(11, 3, None).unwrap();
        assert_eq!(field.discrete_log(field.gamma()).unwrap(), 1);
        assert_eq!(field.discrete_log(1).unwrap(), 0);
        let x = field.mul(field.exp(5), field.exp(7));
        assert_eq!(field.discrete_log(x).unwrap(), 12);
        assert_eq!(field.discrete_log(0), Err(Error::ZeroElement));
    }

    #[test]
    fn log_is_a_homomorphism_and_tables_are_consistent() {
        let field = FieldSpec::build(5, 4, None).unwrap();
        let n = field.order();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let x = rng.gen_range(1..field.q());
            let y = rng.gen_range(1..field.q());
            let lx = field.discrete_log(x).unwrap();
            let ly = field.discrete_log(y).unwrap();
            assert_eq!(field.discrete_log(field.mul(x, y)).unwrap(), (lx + ly) % n);
            let diff = field.sub(x, y);
            assert_eq!(
                field.log_of_difference(lx, ly),
                if diff == 0 {
                    None
                } else {
                    Some(field.discrete_log(diff).unwrap())
                }
            );
            // distributivity
            let z = rng.gen_range(0..field.q());
            assert_eq!(
                field.mul(z, field.add(x, y)),
                field.add(field.mul(z, x), field.mul(z, y))
            );
        }
    }

    #[test]
    fn frobenius_fixes_exactly_the_prime_field() {
        let field = FieldSpec::build(3, 4, None).unwrap();
        let mut image: Vec<u64> = field.elements().map(|x| field.frobenius(x)).collect();
        let fixed: Vec<u64> = field
            .elements()
            .filter(|&x| field.frobenius(x) == x)
            .collect();
        assert_eq!(fixed, vec![0, 1, 2]);
        image.sort_unstable();
        assert_eq!(image, field.elements().collect::<Vec<_>>());
    }

    #[test]
    fn build_is_reproducible_and_descriptor_round_trips() {
        let a = FieldSpec::build(7, 3, None).unwrap();
        let b = FieldSpec::build(7, 3, None).unwrap();
        assert_eq!(a.antilog, b.antilog);
        assert_eq!(a.trace, b.trace);
        let json = serde_json::to_string(&a.descriptor()).unwrap();
        let desc: FieldDescriptor = serde_json::from_str(&json).unwrap();
        let c = FieldSpec::from_descriptor(&desc).unwrap();
        assert_eq!(c.antilog, a.antilog);

        let other = FieldSpec::build(7, 3, Some(1)).unwrap();
        assert_ne!(other.modulus(), a.modulus());
        let mut bad = a.descriptor();
        bad.modulus_coeffs = vec![1, 0, 0, 1];
        assert!(FieldSpec::from_descriptor(&bad).is_err());
    }
}
