//! Small integer number theory shared by the field and construction code.

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    // Deterministic Miller-Rabin for 64-bit inputs.
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, r| acc / r * (r - 1))
}

/// ord_n(m): least e >= 1 with m^e = 1 mod n.
pub fn multiplicative_order(m: u64, n: u64) -> Result<u64> {
    if n == 1 {
        return Ok(1);
    }
    if gcd(m % n, n) != 1 {
        return Err(Error::NotCoprime { a: m as i64, n });
    }
    let mut order = euler_phi(n);
    for r in prime_factors(order) {
        while order.is_multiple_of(r) && pow_mod(m, order / r, n) == 1 {
            order /= r;
        }
    }
    Ok(order)
}

/// The cyclic subgroup generated by `m` in Z_n^*, sorted.
pub fn cyclic_subgroup(m: u64, n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut x = 1 % n;
    loop {
        out.push(x);
        x = mul_mod(x, m, n);
        if x == 1 % n {
            break;
        }
    }
    out.sort_unstable();
    out
}

/// Checked integer power, `None` on overflow.
pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Stirling number of the second kind S(n, k).
pub fn stirling2(n: usize, k: usize) -> u128 {
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = j as u128 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    row[k]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_from_worked_examples() {
        assert_eq!(multiplicative_order(11, 14).unwrap(), 3);
        assert_eq!(multiplicative_order(3, 22).unwrap(), 5);
        assert_eq!(multiplicative_order(1, 17).unwrap(), 1);
        assert!(matches!(
            multiplicative_order(4, 14),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn order_matches_naive_powering() {
        for n in 2..200u64 {
            for m in 1..n {
                if gcd(m, n) != 1 {
                    continue;
                }
                let mut e = 1;
                let mut x = m % n;
                while x != 1 % n {
                    x = x * m % n;
                    e += 1;
                }
                assert_eq!(multiplicative_order(m, n).unwrap(), e, "ord_{n}({m})");
            }
        }
    }

    #[test]
    fn primality_and_factors() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
        assert_eq!(prime_factors(50652), vec![2, 3, 7, 67]);
        assert_eq!(inv_mod(3, 28), Some(19));
        assert_eq!(inv_mod(2, 28), None);
    }

    #[test]
    fn stirling_numbers() {
        assert_eq!(stirling2(8, 3), 966);
        assert_eq!(stirling2(8, 4), 1701);
        assert_eq!(stirling2(16, 3), 7_141_686);
        assert_eq!(stirling2(16, 4), 171_798_901);
    }
}
