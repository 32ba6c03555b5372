//! Machine-integer number theory: squares, Jacobi symbols, trial-division
//! factorization and prime generation.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::Signed;

use crate::error::{Error, Result};

/// Default trial-division bound. Any cofactor left after dividing out primes
/// below this bound is resolved with a square test and Miller-Rabin, so inputs
/// up to roughly `bound^3` are handled exactly.
pub const DEFAULT_TRIAL_BOUND: u64 = 10_000_000;

/// Integer square root when `n` is a perfect square. Negative inputs are never squares.
pub fn is_perfect_square(n: i128) -> Option<u128> {
    if n < 0 {
        return None;
    }
    let n = n as u128;
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

pub fn is_perfect_square_big(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Jacobi symbol `(a / n)` for odd positive `n`.
pub fn jacobi(a: i128, n: u128) -> Result<i8> {
    if n == 0 || n % 2 == 0 {
        return Err(Error::invalid(format!("jacobi modulus must be odd and positive, got {n}")));
    }
    Ok(jacobi_unchecked(a, n))
}

pub(crate) fn jacobi_unchecked(a: i128, n: u128) -> i8 {
    let mut a = a.rem_euclid(n as i128) as u128;
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            sign = -sign;
        }
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Table of Legendre symbols `chi[x] = (x / p)` for `x` in `0..p`.
pub fn legendre_table(p: u64) -> Vec<i8> {
    let mut chi = vec![-1i8; p as usize];
    chi[0] = 0;
    for x in 1..=(p / 2) {
        chi[((x * x) % p) as usize] = 1;
    }
    chi
}

/// Primes `<= n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
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

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL {
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

/// What remains after trial division: every prime factor of the cofactor
/// exceeds the trial bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cofactor {
    One,
    Prime(u128),
    Square(u128),
    /// Product of two distinct primes above the bound.
    Semiprime(u128),
}

struct Split {
    small: Vec<(u128, u32)>,
    rest: Cofactor,
}

fn split(n: u128, bound: u64) -> Result<Split> {
    let mut n = n;
    let mut small = Vec::new();
    let mut q: u128 = 2;
    let bound = bound.max(2) as u128;
    while q <= bound && q * q <= n {
        if n % q == 0 {
            let mut e = 0;
            while n % q == 0 {
                n /= q;
                e += 1;
            }
            small.push((q, e));
        }
        q += if q == 2 { 1 } else { 2 };
    }
    let rest = if n == 1 {
        Cofactor::One
    } else if q * q > n {
        Cofactor::Prime(n)
    } else if let Some(r) = is_perfect_square(n as i128) {
        Cofactor::Square(r)
    } else if n <= u64::MAX as u128 && is_prime(n as u64) {
        Cofactor::Prime(n)
    } else if n <= u64::MAX as u128 && n < bound * bound * bound {
        Cofactor::Semiprime(n)
    } else {
        return Err(Error::capacity(format!(
            "cofactor {n} has no prime factor <= {bound} and is too large to classify"
        )));
    };
    Ok(Split { small, rest })
}

/// Squarefree part with the sign carried on `s`: `n = s * m^2`.
pub fn squarefree_part(n: i128) -> Result<(i128, u128)> {
    squarefree_part_with_bound(n, DEFAULT_TRIAL_BOUND)
}

pub fn squarefree_part_with_bound(n: i128, bound: u64) -> Result<(i128, u128)> {
    if n == 0 {
        return Err(Error::invalid("squarefree part of 0 is undefined"));
    }
    let sp = split(n.unsigned_abs(), bound)?;
    let mut s: u128 = 1;
    let mut m: u128 = 1;
    for (q, e) in sp.small {
        if e % 2 == 1 {
            s *= q;
        }
        m *= q.pow(e / 2);
    }
    match sp.rest {
        Cofactor::One => {}
        Cofactor::Prime(c) | Cofactor::Semiprime(c) => s *= c,
        Cofactor::Square(r) => m *= r,
    }
    let s = s as i128;
    Ok((if n < 0 { -s } else { s }, m))
}

/// Number of distinct prime divisors of `d`, optionally only those `<= cap`.
pub fn nu(d: i128, cap: Option<u64>) -> Result<u32> {
    nu_with_bound(d, cap, DEFAULT_TRIAL_BOUND)
}

pub fn nu_with_bound(d: i128, cap: Option<u64>, bound: u64) -> Result<u32> {
    if d == 0 {
        return Err(Error::invalid("nu(0) is undefined"));
    }
    let sp = split(d.unsigned_abs(), bound)?;
    let within = |q: u128| cap.map_or(true, |z| q <= z as u128);
    let mut count = sp.small.iter().filter(|(q, _)| within(*q)).count() as u32;
    match sp.rest {
        Cofactor::One => {}
        Cofactor::Prime(q) | Cofactor::Square(q) => count += within(q) as u32,
        Cofactor::Semiprime(_) => match cap {
            None => count += 2,
            Some(z) if (z as u128) <= bound as u128 => {}
            Some(_) => {
                return Err(Error::capacity(
                    "cannot place the prime factors of a large semiprime cofactor relative to the cap",
                ))
            }
        },
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(12).unwrap(), (3, 2));
        assert_eq!(squarefree_part(1).unwrap(), (1, 1));
        assert_eq!(squarefree_part(-48).unwrap(), (-3, 4));
        assert!(matches!(squarefree_part(0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn squarefree_large_cofactors() {
        // 101 and 103 are primes above a bound of 100.
        assert_eq!(squarefree_part_with_bound(101 * 103 * 4, 100).unwrap(), (101 * 103, 2));
        assert_eq!(squarefree_part_with_bound(101 * 101 * 3, 100).unwrap(), (3, 101));
        assert_eq!(nu_with_bound(101 * 103 * 6, None, 100).unwrap(), 4);
        let big = 1_000_003u128 * 1_000_033 * 1_000_037;
        assert!(matches!(squarefree_part_with_bound(big as i128, 100), Err(Error::Capacity(_))));
    }

    #[test]
    fn perfect_squares() {
        assert_eq!(is_perfect_square(49), Some(7));
        assert_eq!(is_perfect_square(0), Some(0));
        assert_eq!(is_perfect_square(-4), None);
        assert_eq!(is_perfect_square(50), None);
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(2, 15).unwrap(), 1);
        assert_eq!(jacobi(12345, 1).unwrap(), 1);
        assert_eq!(jacobi(-7, 1).unwrap(), 1);
        assert_eq!(jacobi(6, 3).unwrap(), 0);
        assert!(jacobi(3, 8).is_err());
        assert!(jacobi(3, 0).is_err());
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu(12, None).unwrap(), 2);
        assert_eq!(nu(1, None).unwrap(), 0);
        assert_eq!(nu(12, Some(2)).unwrap(), 1);
        assert_eq!(nu(-30, Some(4)).unwrap(), 2);
    }

    #[test]
    fn miller_rabin_matches_sieve() {
        let sieve = primes_up_to(20_000);
        let mr: Vec<u64> = (0..=20_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, mr);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007u64 * 3));
    }
}
