//! Classification of Frobenius at a good prime and identification of the
//! quartic CM field `Q(pi) = K0(sqrt r)`, `K0 = Q(sqrt d0)`.
//!
//! Only `t1^2` enters the field invariants: `beta` changes sign with `t1`
//! but `r = beta^2 - 4p`, `Delta` and `gamma` do not.

pub mod gamma;
pub mod weil;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_consistent, Result};
use crate::numth::{is_perfect_square, quad_is_square, squarefree_part, QuadElem};

pub use gamma::{
    default_psi_form, gamma_symbolic, printed_gamma_g2, printed_gamma_g3, printed_gamma_g3_coeffs, psi_bound,
    psi_constant, GammaPoly, MPoly, PsiForm,
};
pub use weil::{charpoly_of_square, gamma, gamma_from_charpoly, real_weil_poly, weil_dimension, weil_shape_poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionClass {
    Bad,
    NonOrdinary,
    NotSimple,
    OrdinarySimple,
}

impl ReductionClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ReductionClass::Bad => "bad",
            ReductionClass::NonOrdinary => "nonordinary",
            ReductionClass::NotSimple => "notsimple",
            ReductionClass::OrdinarySimple => "ordinarysimple",
        }
    }
}

impl fmt::Display for ReductionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classifies a good prime from its Weil coefficients.
pub fn classify(t1: i64, a2: i64, p: u64) -> ReductionClass {
    if a2.rem_euclid(p as i64) == 0 {
        ReductionClass::NonOrdinary
    } else if quartic_factor(t1, a2, p).is_some() {
        ReductionClass::NotSimple
    } else {
        ReductionClass::OrdinarySimple
    }
}

/// A monic integer factor of `x^4 - t1 x^3 + a2 x^2 - p t1 x + p^2` of degree
/// 1 or 2, as coefficients lowest first, if one exists.
pub fn quartic_factor(t1: i64, a2: i64, p: u64) -> Option<Vec<i64>> {
    let (t, a, p) = (t1 as i128, a2 as i128, p as i128);
    let eval = |x: i128| x * x * x * x - t * x * x * x + a * x * x - p * t * x + p * p;
    // rational roots divide p^2
    for r in [1, p, p * p] {
        for x in [r, -r] {
            if eval(x) == 0 {
                return Some(vec![-x as i64, 1]);
            }
        }
    }
    // (x^2 + b x + c)(x^2 + d x + e), c e = p^2:
    //   b + d = -t,  c + e + b d = a,  b e + c d = -p t
    for c in [1, p, p * p, -1, -p, -p * p] {
        let e = p * p / c;
        if e != c {
            // b (e - c) = t (c - p)
            let num = t * (c - p);
            if num % (e - c) != 0 {
                continue;
            }
            let b = num / (e - c);
            let d = -t - b;
            if c + e + b * d == a && b * e + c * d == -p * t {
                return Some(vec![c as i64, b as i64, 1]);
            }
        } else if c == p {
            // b, d are the roots of z^2 + t z + (a - 2p)
            let disc = t * t - 4 * (a - 2 * p);
            if let Some(s) = is_perfect_square(disc) {
                let s = s as i128;
                if (s - t) % 2 == 0 {
                    return Some(vec![c as i64, ((s - t) / 2) as i64, 1]);
                }
            }
        } else if t == 0 {
            // c = e = -p: d = -b and -b^2 = a + 2p
            if let Some(b) = is_perfect_square(-a - 2 * p) {
                return Some(vec![c as i64, b as i64, 1]);
            }
        }
    }
    None
}

/// `Delta = t1^2 - 4 a2 + 8p = d0 m^2`, the discriminant of the real Weil polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealSubfield {
    pub delta: i64,
    pub d0: i64,
    pub m: i64,
}

pub fn real_subfield(t1: i64, a2: i64, p: u64) -> Result<RealSubfield> {
    let delta = t1 as i128 * t1 as i128 - 4 * a2 as i128 + 8 * p as i128;
    ensure_consistent!(delta > 0, "Delta = {delta} is not positive at p = {p}: not an ordinary simple class");
    ensure_consistent!(
        is_perfect_square(delta).is_none(),
        "Delta = {delta} is a square at p = {p}: beta is rational, the quartic is not simple"
    );
    ensure_consistent!(delta <= 48 * p as i128, "Delta = {delta} exceeds 48p at p = {p}");
    let (d0, m) = squarefree_part(delta)?;
    Ok(RealSubfield { delta: delta as i64, d0: d0 as i64, m: m as i64 })
}

/// `Q(sqrt d)` is the real subfield iff `d Delta` is a perfect square.
pub fn is_real_subfield(d: i64, delta: i64) -> bool {
    is_perfect_square(d as i128 * delta as i128).is_some()
}

/// `beta = (t1 + m sqrt d0) / 2`, a root of `x^2 - t1 x + (a2 - 2p)`.
pub fn beta(t1: i64, a2: i64, p: u64) -> Result<QuadElem> {
    let rs = real_subfield(t1, a2, p)?;
    let half = BigRational::new(1.into(), 2.into());
    let b = QuadElem::new(
        rs.d0,
        BigRational::from_integer(t1.into()) * &half,
        BigRational::from_integer(rs.m.into()) * &half,
    )?;
    let lhs = &(&b * &b) - &b.scale(&BigRational::from_integer(t1.into()));
    let constant = QuadElem::rational(rs.d0, BigRational::from_integer((a2 - 2 * p as i64).into()))?;
    ensure_consistent!((&lhs + &constant).is_zero(), "beta fails its minimal polynomial at p = {p}");
    Ok(b)
}

/// Isomorphism-class key for `K0(sqrt r)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CmFieldKey {
    pub d0: i64,
    pub r: QuadElem,
}

impl fmt::Debug for CmFieldKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K0 = Q(sqrt {}), r = {}", self.d0, self.r)
    }
}

/// `r = beta^2 - 4p`, asserted totally negative and not a square.
pub fn cm_field_key(t1: i64, a2: i64, p: u64) -> Result<CmFieldKey> {
    let b = beta(t1, a2, p)?;
    let four_p = QuadElem::rational(b.d(), BigRational::from_integer(BigInt::from(4 * p)))?;
    let r = &(&b * &b) - &four_p;
    ensure_consistent!(r.is_totally_negative(), "r = {r} is not totally negative at p = {p}");
    ensure_consistent!(quad_is_square(&r).is_none(), "r = {r} is a square at p = {p}");
    Ok(CmFieldKey { d0: b.d(), r })
}

/// `K0(sqrt r) = K0(sqrt r')` (as abstract fields) iff `r r'` or `r sigma(r')` is a square in `K0`.
pub fn same_cm_field(k1: &CmFieldKey, k2: &CmFieldKey) -> bool {
    if k1.d0 != k2.d0 {
        return false;
    }
    quad_is_square(&(&k1.r * &k2.r)).is_some() || quad_is_square(&(&k1.r * &k2.r.conjugate())).is_some()
}

/// `gamma_p` for `g = 2` in closed form: `a2^2 - 4p t1^2 + 4p a2 + 4p^2`.
pub fn gamma_genus2(t1: i64, a2: i64, p: u64) -> i128 {
    let (t1sq, a2, p) = (t1 as i128 * t1 as i128, a2 as i128, p as i128);
    a2 * a2 - 4 * p * t1sq + 4 * p * a2 + 4 * p * p
}

/// `N_{K0/Q}(r)` computed in `K0`.
pub fn gamma_via_norm(key: &CmFieldKey) -> Result<BigInt> {
    let n = key.r.norm();
    ensure_consistent!(n.is_integer(), "norm of r = {} is not integral", key.r);
    Ok(n.to_integer())
}
