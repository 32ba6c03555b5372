use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use frobcensus_core::numth::{
    is_prime, jacobi, newton_from_power_sums, primes_up_to, quad_is_square, squarefree_part, IntPoly, QuadElem,
};

fn residues(p: u64) -> HashSet<u64> {
    (1..p).map(|x| x * x % p).collect()
}

#[test]
fn jacobi_matches_residue_enumeration_below_200() {
    for p in primes_up_to(200).into_iter().filter(|&p| p > 2) {
        let sq = residues(p);
        for a in -(2 * p as i128)..=(2 * p as i128) {
            let r = a.rem_euclid(p as i128) as u64;
            let want = if r == 0 {
                0
            } else if sq.contains(&r) {
                1
            } else {
                -1
            };
            assert_eq!(jacobi(a, p as u128).unwrap(), want, "({a}/{p})");
        }
    }
}

#[test]
fn jacobi_is_multiplicative_in_the_modulus() {
    let odd: Vec<u64> = primes_up_to(60).into_iter().filter(|&p| p > 2).collect();
    for &p in &odd {
        for &q in &odd {
            for a in -50i128..50 {
                let prod = jacobi(a, p as u128).unwrap() * jacobi(a, q as u128).unwrap();
                assert_eq!(jacobi(a, (p * q) as u128).unwrap(), prod);
            }
        }
    }
}

#[test]
fn jacobi_rejects_even_modulus() {
    assert!(jacobi(3, 8).is_err());
    assert!(jacobi(3, 0).is_err());
}

fn is_squarefree(mut s: u128) -> bool {
    let mut q = 2u128;
    while q * q <= s {
        if s % (q * q) == 0 {
            return false;
        }
        if s % q == 0 {
            s /= q;
        }
        q += 1;
    }
    true
}

const SMALL_PRIMES: [i128; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn squarefree_round_trip(n in -1_000_000_000i128..1_000_000_000i128) {
        prop_assume!(n != 0);
        let (s, m) = squarefree_part(n).unwrap();
        prop_assert_eq!(s * (m * m) as i128, n);
        prop_assert!(is_squarefree(s.unsigned_abs()));
    }

    #[test]
    fn squarefree_recovers_construction(mask in 0u32..(1 << 12), k in 1i128..100_000, neg: bool) {
        let s0: i128 = SMALL_PRIMES.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, p)| p).product();
        let s0 = if neg { -s0 } else { s0 };
        let (s, m) = squarefree_part(s0 * k * k).unwrap();
        prop_assert_eq!((s, m as i128), (s0, k));
    }

    #[test]
    fn newton_round_trip(roots in proptest::collection::vec(-30i64..30, 1..7)) {
        // oracle: expand prod (x - r) directly and sum powers of the roots
        let mut poly = vec![BigInt::from(1)];
        for &r in &roots {
            let mut next = vec![BigInt::from(0); poly.len() + 1];
            for (i, c) in poly.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * BigInt::from(r);
            }
            poly = next;
        }
        let sums: Vec<BigRational> = (1..=roots.len() as u32)
            .map(|k| BigRational::from_integer(roots.iter().map(|&r| BigInt::from(r).pow(k)).sum()))
            .collect();
        let rebuilt = newton_from_power_sums(&sums).unwrap();
        prop_assert_eq!(rebuilt, IntPoly::new(poly));
    }
}

fn small_rat() -> impl Strategy<Value = BigRational> {
    (-200i64..200, 1i64..30).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn quad_square_root_resquares(
        d in prop::sample::select(vec![2i64, 3, 5, 6, 7, 10, 13, 15, 21, 33, 101]),
        a in small_rat(),
        b in small_rat(),
    ) {
        let x = QuadElem::new(d, a, b).unwrap();
        let y = &x * &x;
        let r = quad_is_square(&y).expect("a square has a root");
        prop_assert_eq!(&(&r * &r), &y);
        prop_assert!(r == x || r == -&x);
    }

    #[test]
    fn prime_multiple_of_square_is_not_square(
        d in prop::sample::select(vec![2i64, 3, 5, 6, 7, 10, 13]),
        q in prop::sample::select(vec![11i64, 17, 19, 23, 29]),
        a in small_rat(),
        b in small_rat(),
    ) {
        prop_assume!(is_prime(q as u64));
        let x = QuadElem::new(d, a, b).unwrap();
        prop_assume!(!x.is_zero());
        let y = &(&x * &x) * &QuadElem::from_ints(d, q, 0);
        prop_assert!(quad_is_square(&y).is_none());
    }
}
