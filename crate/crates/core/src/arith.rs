//! Word-sized modular arithmetic: Miller-Rabin, Euler exponents and
//! Tonelli-Shanks square roots.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

/// Inverse of `a` modulo the prime `p`; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Reduces a signed integer into `0..m`.
pub fn reduce_i64(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// Reduces a big integer into `0..m`.
pub fn reduce_big(a: &BigInt, m: u64) -> u64 {
    let r = (a % BigInt::from(m)).to_i128().expect("remainder fits");
    r.rem_euclid(m as i128) as u64
}

// Witnesses 2..37 are deterministic for every n < 3.3 * 10^24, so for all u64.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality for arbitrary integers. Values beyond `u64` use a strong
/// probable-prime test on the same fixed witnesses.
pub fn is_prime_big(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let n = n.magnitude();
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    for &p in &MR_WITNESSES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Exponent `e ∈ {0, 1}` with `a^((p-1)/2) ≡ (-1)^e (mod p)`; `a` must be a
/// unit mod the odd prime `p`.
pub fn euler_exponent_2(a: u64, p: u64) -> u8 {
    match pow_mod(a, (p - 1) / 2, p) {
        1 => 0,
        x if x == p - 1 => 1,
        x => unreachable!("Euler criterion produced {x} mod {p}"),
    }
}

/// Both square roots of `a` modulo the odd prime `p`, smaller first, or
/// `None` when `a` is a non-residue. `a ≡ 0` yields `[0, 0]`.
pub fn sqrt_mod(a: u64, p: u64) -> Option<[u64; 2]> {
    let a = a % p;
    if a == 0 {
        return Some([0, 0]);
    }
    if euler_exponent_2(a, p) != 0 {
        return None;
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while euler_exponent_2(z, p) == 0 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    let other = p - r;
    Some(if r < other { [r, other] } else { [other, r] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..20_000 {
            assert_eq!(is_prime_u64(n), trial_division(n), "n = {n}");
        }
        // strong pseudoprimes to small bases
        for n in [2047u64, 1_373_653, 25_326_001, 3_215_031_751, 3_825_123_056_546_413_051] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
    }

    #[test]
    fn big_primality() {
        let p = BigInt::from(18_446_744_073_709_551_557u64) * 1u32;
        assert!(is_prime_big(&p));
        // 2^89 - 1 is a Mersenne prime, 2^89 + 1 is divisible by 3
        let m89 = (BigInt::one() << 89usize) - 1;
        assert!(is_prime_big(&m89));
        assert!(!is_prime_big(&(m89 + 2)));
        assert!(!is_prime_big(&BigInt::from(-7)));
    }

    #[test]
    fn tonelli_shanks_against_enumeration() {
        for p in (3..400u64).filter(|&p| trial_division(p)) {
            for a in 0..p {
                let squares: Vec<u64> = (0..p).filter(|x| x * x % p == a).collect();
                match sqrt_mod(a, p) {
                    Some([r, s]) => {
                        assert!(squares.contains(&r) && squares.contains(&s), "{a} mod {p}");
                    }
                    None => assert!(squares.is_empty(), "{a} mod {p}"),
                }
            }
        }
    }

    #[test]
    fn signed_reduction() {
        assert_eq!(reduce_i64(-17, 71), 54);
        assert_eq!(reduce_big(&BigInt::from(-17), 71), 54);
        assert_eq!(sub_mod(3, 5, 7), 5);
        assert_eq!(inv_mod(3, 7), 5);
    }
}
