//! Finite symplectic groups `Sp_{2g}` and `GSp_{2g}` over `F_l` for `g <= 2`:
//! closed-form orders, enumeration (brute force or generator closure),
//! characteristic-polynomial statistics and conjugacy-class counts.

pub mod mat;

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_consistent, Error, Result};
use crate::numth::is_prime;
pub use mat::{Mat, MatSpace, PackedMat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Sp,
    Gsp,
}

/// `l^{g^2} prod_{i=1}^{g} (l^{2i} - 1)`, times `l - 1` for `GSp`.
pub fn group_order(g: u32, l: u64, which: Which) -> BigInt {
    let lb = BigInt::from(l);
    let mut order = num_traits::pow(lb.clone(), (g * g) as usize);
    for i in 1..=g {
        order *= num_traits::pow(lb.clone(), 2 * i as usize) - 1;
    }
    match which {
        Which::Sp => order,
        Which::Gsp => order * (lb - 1),
    }
}

/// Brute force is used when `l^{(2g)^2}` is at most this.
pub const BRUTE_FORCE_LIMIT: u64 = 50_000_000;
/// Largest group the closure search will hold in memory.
pub const CLOSURE_LIMIT: u64 = 12_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    BruteForce,
    Closure,
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub space: MatSpace,
    pub which: Which,
    pub method: Method,
    /// Sorted packed elements.
    pub elements: Vec<PackedMat>,
}

impl Enumeration {
    pub fn contains(&self, m: PackedMat) -> bool {
        self.elements.binary_search(&m).is_ok()
    }
}

fn check_params(g: usize, l: u64) -> Result<MatSpace> {
    if !is_prime(l) {
        return Err(Error::invalid(format!("{l} is not prime")));
    }
    if l > 13 {
        return Err(Error::capacity(format!("4-bit packing supports l <= 13, got {l}")));
    }
    MatSpace::new(g, l)
}

/// All elements of `Sp_{2g}(F_l)` or `GSp_{2g}(F_l)`; the count must equal [`group_order`].
pub fn enumerate(g: usize, l: u64, which: Which) -> Result<Enumeration> {
    let candidates = l.checked_pow((4 * g * g) as u32).unwrap_or(u64::MAX);
    let method = if candidates <= BRUTE_FORCE_LIMIT { Method::BruteForce } else { Method::Closure };
    enumerate_with(g, l, which, method)
}

/// [`enumerate`] with a fixed method.
pub fn enumerate_with(g: usize, l: u64, which: Which, method: Method) -> Result<Enumeration> {
    let space = check_params(g, l)?;
    let candidates = l.checked_pow((4 * g * g) as u32).unwrap_or(u64::MAX);
    let order = group_order(g as u32, l, which);
    let elements = match method {
        Method::BruteForce if candidates <= BRUTE_FORCE_LIMIT => brute_force(&space, which, candidates),
        Method::Closure if order <= BigInt::from(CLOSURE_LIMIT) => closure(&space, which),
        _ => {
            return Err(Error::capacity(format!(
                "{which:?}_{}(F_{l}) has {order} elements; too many for {method:?}",
                2 * g
            )))
        }
    };
    ensure_consistent!(
        BigInt::from(elements.len()) == order,
        "enumerated {} elements of {which:?}_{}(F_{l}), closed form gives {order}",
        elements.len(),
        2 * g
    );
    Ok(Enumeration { space, which, method, elements })
}

fn brute_force(space: &MatSpace, which: Which, candidates: u64) -> Vec<PackedMat> {
    let mut out: Vec<PackedMat> = (0..candidates)
        .into_par_iter()
        .filter_map(|code| {
            let a = space.from_code(code);
            match (space.multiplicator(&a), which) {
                (Some(1), Which::Sp) | (Some(_), Which::Gsp) => Some(space.pack(&a)),
                _ => None,
            }
        })
        .collect();
    out.sort_unstable();
    out
}

fn primitive_root(l: u64) -> u8 {
    (1..l)
        .find(|&r| (1..l - 1).all(|e| crate::numth::pow_mod(r, e, l) != 1))
        .expect("prime modulus has a primitive root") as u8
}

/// Elementary transvection blocks, `J`, and for `GSp` the similitude `diag(I, mu I)`.
pub fn generators(space: &MatSpace, which: Which) -> Vec<Mat> {
    let g = space.g;
    let mut syms: Vec<Vec<(usize, usize)>> = (0..g).map(|i| vec![(i, i)]).collect();
    for i in 0..g {
        for j in i + 1..g {
            syms.push(vec![(i, j), (j, i)]);
        }
    }
    let mut gens = Vec::new();
    for s in &syms {
        let mut upper = space.identity();
        let mut lower = space.identity();
        for &(i, j) in s {
            upper[i][j + g] = 1;
            lower[i + g][j] = 1;
        }
        gens.push(upper);
        gens.push(lower);
    }
    gens.push(space.j());
    if which == Which::Gsp {
        let mu = primitive_root(space.m as u64);
        let mut d = space.identity();
        for i in g..2 * g {
            d[i][i] = mu;
        }
        gens.push(d);
    }
    gens
}

fn closure(space: &MatSpace, which: Which) -> Vec<PackedMat> {
    let gens = generators(space, which);
    let id = space.pack(&space.identity());
    let mut seen: HashSet<PackedMat> = HashSet::new();
    seen.insert(id);
    let mut frontier = vec![id];
    while let Some(w) = frontier.pop() {
        let a = space.unpack(w);
        for s in &gens {
            let b = space.pack(&space.mul(&a, s));
            if seen.insert(b) {
                frontier.push(b);
            }
        }
    }
    let mut out: Vec<PackedMat> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// Statistics of `GSp_{2g}(F_l)`.
#[derive(Debug, Clone)]
pub struct GspCensus {
    pub g: usize,
    pub l: u64,
    pub method: Method,
    pub order_sp: u64,
    pub order_gsp: u64,
    /// Characteristic polynomial `[c_1, ..., c_{2g}]` to number of elements.
    pub charpoly_buckets: BTreeMap<Vec<u8>, u64>,
    pub class_count_sp: Option<u64>,
    pub class_count_gsp: Option<u64>,
}

/// Enumerates `GSp_{2g}(F_l)`, buckets it by characteristic polynomial and,
/// on request, counts conjugacy classes of `Sp` and `GSp`.
pub fn gsp_census(g: usize, l: u64, with_classes: bool) -> Result<GspCensus> {
    let gsp = enumerate(g, l, Which::Gsp)?;
    let space = gsp.space;
    let mut buckets: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
    let mut sp_elements = Vec::new();
    for &w in &gsp.elements {
        let a = space.unpack(w);
        let mu = space.multiplicator(&a).expect("enumerated element is a similitude");
        let cp = space.charpoly(&a);
        check_functional_equation(&space, &cp, mu)?;
        *buckets.entry(cp).or_insert(0) += 1;
        if mu == 1 {
            sp_elements.push(w);
        }
    }
    let order_sp = sp_elements.len() as u64;
    ensure_consistent!(
        BigInt::from(order_sp) == group_order(g as u32, l, Which::Sp),
        "Sp subgroup of the enumeration has {order_sp} elements"
    );
    let total: u64 = buckets.values().sum();
    ensure_consistent!(total == gsp.elements.len() as u64, "bucket counts do not sum to the group order");
    let (class_count_sp, class_count_gsp) = if with_classes {
        (Some(conjugacy_classes(&space, &sp_elements)), Some(conjugacy_classes(&space, &gsp.elements)))
    } else {
        (None, None)
    };
    Ok(GspCensus {
        g,
        l,
        method: gsp.method,
        order_sp,
        order_gsp: total,
        charpoly_buckets: buckets,
        class_count_sp,
        class_count_gsp,
    })
}

/// `c_{2g-i} = mu^{g-i} c_i` (with `c_0 = 1`), the similitude analogue of the Weil symmetry.
fn check_functional_equation(space: &MatSpace, cp: &[u8], mu: u8) -> Result<()> {
    let g = space.g;
    let m = space.m as u64;
    let coeff = |i: usize| if i == 0 { 1u64 } else { cp[i - 1] as u64 };
    for i in 0..g {
        let want = crate::numth::pow_mod(mu as u64, (g - i) as u64, m) * coeff(i) % m;
        ensure_consistent!(
            coeff(2 * g - i) == want,
            "characteristic polynomial {cp:?} with multiplicator {mu} breaks the functional equation"
        );
    }
    Ok(())
}

/// Bounds on `#C / #GSp_{2g}(F_l)` for the set `C` of elements with a fixed characteristic polynomial:
/// `l^{2g^2} / ((l-1)(l+1)^{2g^2+g})` and `l^{2g^2} / (l-1)^{2g^2+g+1}`.
pub fn charpoly_bounds(g: usize, l: u64) -> (BigRational, BigRational) {
    let e = 2 * g * g;
    let num = num_traits::pow(BigInt::from(l), e);
    let lo_den = BigInt::from(l - 1) * num_traits::pow(BigInt::from(l + 1), e + g);
    let hi_den = num_traits::pow(BigInt::from(l - 1), e + g + 1);
    (BigRational::new(num.clone(), lo_den), BigRational::new(num, hi_den))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BucketViolation {
    pub charpoly: Vec<u8>,
    pub count: u64,
    pub ratio: String,
}

/// Buckets whose density `#C/#GSp` leaves the bounds; empty on success.
pub fn verify_charpoly_bounds(census: &GspCensus) -> Vec<BucketViolation> {
    let (lo, hi) = charpoly_bounds(census.g, census.l);
    let order = BigInt::from(census.order_gsp);
    census
        .charpoly_buckets
        .iter()
        .filter_map(|(k, &c)| {
            let ratio = BigRational::new(BigInt::from(c), order.clone());
            // Q_C = ratio - lo must lie in [0, hi - lo]
            let q = &ratio - &lo;
            let ok = q >= BigRational::from_integer(0.into()) && q <= &hi - &lo;
            (!ok).then(|| BucketViolation { charpoly: k.clone(), count: c, ratio: ratio.to_string() })
        })
        .collect()
}

/// Number of conjugacy classes of the group `elements` (sorted, closed under
/// multiplication), by enumerating each orbit under conjugation by every element.
pub fn conjugacy_classes(space: &MatSpace, elements: &[PackedMat]) -> u64 {
    let mats: Vec<Mat> = elements.iter().map(|&w| space.unpack(w)).collect();
    let invs: Vec<Mat> = mats
        .iter()
        .map(|a| space.inverse(a, space.multiplicator(a).expect("group element")))
        .collect();
    let mut assigned = vec![false; elements.len()];
    let mut classes = 0u64;
    for start in 0..elements.len() {
        if assigned[start] {
            continue;
        }
        classes += 1;
        let x = &mats[start];
        for (h, hinv) in mats.iter().zip(&invs) {
            let y = space.pack(&space.mul(&space.mul(h, x), hinv));
            let idx = elements.binary_search(&y).expect("conjugate stays in the group");
            assigned[idx] = true;
        }
    }
    classes
}

/// Same count via canonical representatives `min_h pack(h x h^{-1})`; quadratic in the order.
pub fn conjugacy_classes_canonical(space: &MatSpace, elements: &[PackedMat]) -> u64 {
    let mats: Vec<Mat> = elements.iter().map(|&w| space.unpack(w)).collect();
    let invs: Vec<Mat> = mats
        .iter()
        .map(|a| space.inverse(a, space.multiplicator(a).expect("group element")))
        .collect();
    let reps: HashSet<PackedMat> = mats
        .iter()
        .map(|x| {
            mats.iter()
                .zip(&invs)
                .map(|(h, hinv)| space.pack(&space.mul(&space.mul(h, x), hinv)))
                .min()
                .expect("nonempty group")
        })
        .collect();
    reps.len() as u64
}

/// `q^g <= count <= 10.8 q^g`.
pub fn class_count_window(count: u64, q: u64, g: u32) -> bool {
    let qg = q.pow(g) as u128;
    let c = count as u128;
    qg <= c && 5 * c <= 54 * qg
}

/// Class counts of `GSp_2 = GL_2` over `F_l`, `F_q` and `Z/lq`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CrtClassCheck {
    pub l: u64,
    pub q: u64,
    pub classes_l: u64,
    pub classes_q: u64,
    pub classes_lq: u64,
}

impl CrtClassCheck {
    pub fn product_holds(&self) -> bool {
        self.classes_l * self.classes_q == self.classes_lq
    }
}

/// Enumerates `GSp_2(Z/lq)` directly and compares its class count with the
/// product over the two primes. Requires `lq <= 16`.
pub fn crt_class_check(l: u64, q: u64) -> Result<CrtClassCheck> {
    if l == q || !is_prime(l) || !is_prime(q) {
        return Err(Error::invalid(format!("need two distinct primes, got {l} and {q}")));
    }
    let count = |m: u64| -> Result<u64> {
        let space = MatSpace::new(1, m)?;
        let mut els: Vec<PackedMat> = (0..m.pow(4))
            .filter_map(|code| {
                let a = space.from_code(code);
                space.multiplicator(&a).map(|_| space.pack(&a))
            })
            .collect();
        els.sort_unstable();
        Ok(conjugacy_classes(&space, &els))
    };
    Ok(CrtClassCheck { l, q, classes_l: count(l)?, classes_q: count(q)?, classes_lq: count(l * q)? })
}

impl GspCensus {
    /// JSON summary: orders, class counts and the bucket histogram's extremes.
    pub fn to_json(&self, top_k: usize) -> serde_json::Value {
        let mut by_count: Vec<(&Vec<u8>, &u64)> = self.charpoly_buckets.iter().collect();
        by_count.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
        let top: Vec<_> = by_count
            .iter()
            .take(top_k)
            .map(|(k, c)| serde_json::json!({"charpoly": k, "count": c}))
            .collect();
        let min = by_count.last().map(|(k, c)| serde_json::json!({"charpoly": k, "count": c}));
        let (lo, hi) = charpoly_bounds(self.g, self.l);
        serde_json::json!({
            "schema": 1,
            "g": self.g,
            "l": self.l,
            "method": self.method,
            "order_sp": self.order_sp,
            "order_gsp": self.order_gsp,
            "order_sp_closed_form": group_order(self.g as u32, self.l, Which::Sp).to_string(),
            "order_gsp_closed_form": group_order(self.g as u32, self.l, Which::Gsp).to_string(),
            "num_buckets": self.charpoly_buckets.len(),
            "top_buckets": top,
            "min_bucket": min,
            "bound_lower": lo.to_string(),
            "bound_upper": hi.to_string(),
            "bound_violations": verify_charpoly_bounds(self).len(),
            "class_count_sp": self.class_count_sp,
            "class_count_gsp": self.class_count_gsp,
        })
    }
}
