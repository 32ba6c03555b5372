use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use frobcensus_core::gsp::{
    charpoly_bounds, class_count_window, conjugacy_classes, conjugacy_classes_canonical, crt_class_check, enumerate,
    enumerate_with, group_order, gsp_census, verify_charpoly_bounds, Method, Which,
};

type M = Vec<Vec<i64>>;

fn mat_mul(a: &M, b: &M, l: i64) -> M {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum::<i64>().rem_euclid(l)).collect()).collect()
}

fn j_form(g: usize, l: i64) -> M {
    let mut j = vec![vec![0; 2 * g]; 2 * g];
    for i in 0..g {
        j[i][i + g] = 1;
        j[i + g][i] = l - 1;
    }
    j
}

/// `M J M^T = mu J` checked by explicit products.
fn similitude_factor(a: &M, l: i64) -> Option<i64> {
    let g = a.len() / 2;
    let j = j_form(g, l);
    let at: M = (0..a.len()).map(|i| (0..a.len()).map(|k| a[k][i]).collect()).collect();
    let lhs = mat_mul(&mat_mul(a, &j, l), &at, l);
    (1..l).find(|&mu| {
        let rhs: M = j.iter().map(|row| row.iter().map(|x| x * mu % l).collect()).collect();
        lhs == rhs
    })
}

fn to_m(space: &frobcensus_core::gsp::MatSpace, w: u64) -> M {
    let a = space.unpack(w);
    (0..space.n).map(|i| (0..space.n).map(|j| a[i][j] as i64).collect()).collect()
}

#[test]
fn rank_one_orders_match_linear_group_formulas() {
    for l in [3u64, 5, 7, 11, 13] {
        let sl = l * (l * l - 1);
        let gl = (l * l - 1) * (l * l - l);
        assert_eq!(group_order(1, l, Which::Sp), BigInt::from(sl));
        assert_eq!(group_order(1, l, Which::Gsp), BigInt::from(gl));
        assert_eq!(enumerate(1, l, Which::Sp).unwrap().elements.len() as u64, sl);
        assert_eq!(enumerate(1, l, Which::Gsp).unwrap().elements.len() as u64, gl);
    }
}

#[test]
fn enumerated_elements_are_similitudes() {
    let e = enumerate(2, 3, Which::Gsp).unwrap();
    assert_eq!(e.elements.len(), 103_680);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..2000 {
        let w = e.elements[rng.gen_range(0..e.elements.len())];
        assert!(similitude_factor(&to_m(&e.space, w), 3).is_some());
    }
    // random non-members
    let mut misses = 0;
    for _ in 0..2000 {
        let code = rng.gen_range(0..3u64.pow(16));
        let a = e.space.from_code(code);
        let w = e.space.pack(&a);
        let m = to_m(&e.space, w);
        assert_eq!(similitude_factor(&m, 3).is_some(), e.contains(w));
        misses += (!e.contains(w)) as u32;
    }
    assert!(misses > 0);
}

#[test]
fn products_of_sampled_pairs_stay_in_the_group() {
    let e = enumerate(2, 3, Which::Gsp).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let a = e.space.unpack(e.elements[rng.gen_range(0..e.elements.len())]);
        let b = e.space.unpack(e.elements[rng.gen_range(0..e.elements.len())]);
        assert!(e.contains(e.space.pack(&e.space.mul(&a, &b))));
    }
}

#[test]
fn closure_agrees_with_brute_force() {
    for (g, l, which) in [(1, 5, Which::Sp), (1, 7, Which::Gsp), (2, 3, Which::Sp), (2, 3, Which::Gsp)] {
        let a = enumerate_with(g, l, which, Method::BruteForce).unwrap();
        let b = enumerate_with(g, l, which, Method::Closure).unwrap();
        assert_eq!(a.elements, b.elements, "{which:?} g={g} l={l}");
    }
}

#[test]
fn charpoly_bucket_bounds() {
    for l in [3u64, 5, 7, 11, 13] {
        let c = gsp_census(1, l, false).unwrap();
        assert!(verify_charpoly_bounds(&c).is_empty(), "GL2(F_{l})");
    }
    let c = gsp_census(2, 3, false).unwrap();
    assert!(verify_charpoly_bounds(&c).is_empty());
    let (lo, _) = charpoly_bounds(2, 3);
    assert_eq!(lo, BigRational::new(6561.into(), 2_097_152.into()));
    let min = *c.charpoly_buckets.values().min().unwrap();
    assert!(min >= 325, "smallest bucket {min}");
}

#[test]
fn class_counts_of_small_groups() {
    for l in [3u64, 5, 7, 11, 13] {
        let e = enumerate(1, l, Which::Sp).unwrap();
        let n = conjugacy_classes(&e.space, &e.elements);
        assert_eq!(n, l + 4, "SL2(F_{l})");
        assert!(class_count_window(n, l, 1));
    }
    for l in [3u64, 5, 7] {
        let e = enumerate(1, l, Which::Gsp).unwrap();
        assert_eq!(conjugacy_classes(&e.space, &e.elements), l * l - 1, "GL2(F_{l})");
    }
    let e = enumerate(1, 5, Which::Sp).unwrap();
    assert_eq!(conjugacy_classes(&e.space, &e.elements), conjugacy_classes_canonical(&e.space, &e.elements));
}

#[test]
fn symplectic_four_over_three_classes() {
    let c = gsp_census(2, 3, true).unwrap();
    assert_eq!(c.order_sp, 51_840);
    assert_eq!(c.class_count_sp, Some(34));
    assert!(class_count_window(34, 3, 2));
}

#[test]
fn class_counts_multiply_across_crt() {
    let r = crt_class_check(3, 5).unwrap();
    assert_eq!((r.classes_l, r.classes_q), (8, 24));
    assert!(r.product_holds());
    assert!(crt_class_check(3, 3).is_err());
    assert!(crt_class_check(3, 7).is_err());
}
